#include "omt/parallel.hpp"

namespace omt {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_threads() {
    const unsigned n = g_threads.load();
    if (n != 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void set_default_threads(unsigned n) { g_threads.store(n); }

}  // namespace omt
