// app.cpp — global flags, dispatch and exit-code mapping.

#include "cli/cli.hpp"

#include "omt/errors.hpp"
#include "omt/parallel.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>

namespace omt::cli {

int run(int argc, char** argv) {
    CLI::App app{"Simulation tools for a multimode optomechanical microwave-to-optical transducer", "omt"};
    app.set_version_flag("--version", kVersion);
    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    unsigned threads = 0;
    app.add_option("--config", config_path, "device configuration (INI)");
    app.add_option("--out", out_dir, "output directory (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads (default: all cores)");
    app.require_subcommand(1);
    app.fallthrough();

    Selection sel;
    register_commands(app, sel);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return 0;
        std::cerr << app.help();
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        if (threads > 0) set_default_threads(threads);
        if (config_path.empty()) throw ConfigError("missing required option", "--config");
        const Resolved r = resolve(config_path);
        Sink sink(out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir),
                  format == "json" ? Format::json : Format::csv);
        sel.action(r, sink);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        sink.write_manifest(sel.name, config_path, r.config, std::vector<std::string>(argv + 1, argv + argc), wall);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace omt::cli
