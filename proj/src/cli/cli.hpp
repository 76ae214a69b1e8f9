// cli.hpp — internal interfaces of the omt command-line front end.

#pragma once

#include "omt/params.hpp"
#include "omt/steady_state.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace CLI {
class App;
}

namespace omt::cli {

enum class Format { csv, json };

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

using Value = std::variant<double, std::string, bool>;

struct Report {
    std::vector<std::pair<std::string, Value>> entries;
    void add(std::string key, Value v) { entries.emplace_back(std::move(key), std::move(v)); }
};

// 12 significant digits, '.' decimal point, independent of the locale.
std::string format_number(double v);

std::string to_csv(const Table& t);
std::string to_csv(const Report& r);
std::string to_json(const Table& t);
std::string to_json(const Report& r);

// Writes into out_dir (name.csv / name.json) or to stdout when no directory is set.
class Sink {
public:
    Sink(std::optional<std::filesystem::path> out_dir, Format format);

    void table(const std::string& name, const Table& t);
    void report(const std::string& name, const Report& r);
    void write_manifest(const std::string& subcommand, const std::string& config_path,
                        const SystemConfig& config, const std::vector<std::string>& arguments,
                        double wall_time_s) const;
    bool to_directory() const { return out_dir_.has_value(); }

private:
    void emit(const std::string& name, const std::string& text);
    std::optional<std::filesystem::path> out_dir_;
    Format format_;
    std::vector<std::string> written_;
};

// Device parameters resolved from a config: eta drives go through the
// steady-state solver first.
struct Resolved {
    SystemConfig config;
    ModelParams params;
    std::optional<SteadyState> steady;
};

Resolved resolve(const std::string& config_path);

// A parsed subcommand ready to run against a resolved device.
using Action = std::function<void(const Resolved&, Sink&)>;

struct Selection {
    std::string name;
    Action action;
};

// Registers every subcommand on `app`; the callback of the chosen one fills
// `selection`.
void register_commands(CLI::App& app, Selection& selection);

int run(int argc, char** argv);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace omt::cli
