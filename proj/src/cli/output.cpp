#include "cli/cli.hpp"

#include "omt/errors.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace omt::cli {

using nlohmann::ordered_json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, ptr);
}

namespace {

std::string value_text(const Value& v) {
    if (const double* d = std::get_if<double>(&v)) return format_number(*d);
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    const std::string& s = std::get<std::string>(v);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << "\n";
    }
    return os.str();
}

std::string to_csv(const Report& r) {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [k, v] : r.entries) os << k << "," << value_text(v) << "\n";
    return os.str();
}

std::string to_json(const Table& t) {
    ordered_json j;
    j["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(json_number(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

std::string to_json(const Report& r) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : r.entries) {
        if (const double* d = std::get_if<double>(&v)) {
            j[k] = json_number(*d);
        } else if (const bool* b = std::get_if<bool>(&v)) {
            j[k] = *b;
        } else {
            j[k] = std::get<std::string>(v);
        }
    }
    return j.dump(2) + "\n";
}

Sink::Sink(std::optional<std::filesystem::path> out_dir, Format format)
    : out_dir_(std::move(out_dir)), format_(format) {
    if (out_dir_) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir_, ec);
        if (ec) throw ConfigError("cannot create output directory '" + out_dir_->string() + "'", "--out");
    }
}

void Sink::emit(const std::string& name, const std::string& text) {
    if (!out_dir_) {
        std::cout << text;
        return;
    }
    const std::string file = name + (format_ == Format::csv ? ".csv" : ".json");
    std::ofstream out(*out_dir_ / file, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (*out_dir_ / file).string() + "'", "--out");
    out << text;
    written_.push_back(file);
}

void Sink::table(const std::string& name, const Table& t) {
    emit(name, format_ == Format::csv ? to_csv(t) : to_json(t));
}

void Sink::report(const std::string& name, const Report& r) {
    emit(name, format_ == Format::csv ? to_csv(r) : to_json(r));
}

void Sink::write_manifest(const std::string& subcommand, const std::string& config_path,
                          const SystemConfig& config, const std::vector<std::string>& arguments,
                          double wall_time_s) const {
    if (!out_dir_) return;
    ordered_json j;
    j["subcommand"] = subcommand;
    j["arguments"] = arguments;
    j["config_path"] = config_path;
    j["config"] = format_config(config);
    j["outputs"] = written_;
    j["version"] = kVersion;
    j["wall_time_s"] = wall_time_s;
    std::ofstream out(*out_dir_ / "manifest.json");
    if (!out) throw ConfigError("cannot write manifest", "--out");
    out << j.dump(2) << "\n";
}

Resolved resolve(const std::string& config_path) {
    Resolved r;
    r.config = load_config(config_path);
    if (r.config.drive_is_eta()) {
        r.steady = solve_steady(r.config);
        r.params = normalize(r.config, &*r.steady);
    } else {
        r.params = normalize(r.config);
    }
    return r;
}

}  // namespace omt::cli
