// Structured-text device configuration: INI sections [mechanics], [optical],
// [microwave], [drive]. Every *_hz key is an ordinary frequency and is
// multiplied by 2 pi on load.

#include "omt/errors.hpp"
#include "omt/params.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace omt {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"mechanics", {"omega_m_hz", "gamma_hz", "Q", "T_c_k", "nbar_c"}},
        {"optical",
         {"omega_a_hz", "kappa_a_hz", "g_a0_hz", "T_a_k", "nbar_a", "nbar_ap", "detuning_a_hz",
          "pump_a_hz"}},
        {"microwave",
         {"omega_b_hz", "kappa_b_hz", "g_b0_hz", "T_b_k", "nbar_b", "nbar_bp", "detuning_b_hz",
          "pump_b_hz"}},
        {"drive", {"eta_a_hz", "eta_b_hz", "eta_a_im_hz", "eta_b_im_hz", "G_a_hz", "G_b_hz", "x_c"}},
    };
    return s;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<double> get(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto node = sec->get_child_optional(pt::ptree::path_type(key, '\0'));
        if (!node) return std::nullopt;
        const std::string text = node->get_value<std::string>();
        double v = 0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
        while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || first == last) {
            throw ConfigError("not a number: '" + text + "'", section + "." + key);
        }
        return v;
    }

    double required(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) {
            missing_.push_back(section + "." + key);
            return 0;
        }
        return *v;
    }

    // Exactly one of two alternative keys.
    std::optional<std::pair<std::string, double>> one_of(const std::string& section,
                                                         const std::string& k1,
                                                         const std::string& k2) {
        auto v1 = get(section, k1);
        auto v2 = get(section, k2);
        if (v1 && v2) {
            throw ConfigError("keys " + k1 + " and " + k2 + " are mutually exclusive", section);
        }
        if (v1) return std::pair{k1, *v1};
        if (v2) return std::pair{k2, *v2};
        missing_.push_back(section + "." + k1 + "|" + k2);
        return std::nullopt;
    }

    const std::vector<std::string>& missing() const { return missing_; }

private:
    const pt::ptree& tree_;
    std::vector<std::string> missing_;
};

void check_schema(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
        auto it = schema().find(section);
        if (it == schema().end()) {
            if (body.empty()) throw ConfigError("key outside of any section", section);
            throw ConfigError("unknown section", section);
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) throw ConfigError("unknown key", section + "." + key);
            if (!value.empty()) throw ConfigError("nested keys are not allowed", section + "." + key);
        }
    }
}

SystemConfig from_tree(const pt::ptree& tree) {
    check_schema(tree);
    Reader r(tree);
    SystemConfig c;
    c.omega_m = kTwoPi * r.required("mechanics", "omega_m_hz");
    auto damping = r.one_of("mechanics", "gamma_hz", "Q");
    c.T_c = r.get("mechanics", "T_c_k").value_or(0.0);
    c.nbar_c = r.get("mechanics", "nbar_c");

    c.omega_a = kTwoPi * r.required("optical", "omega_a_hz");
    c.kappa_a = kTwoPi * r.required("optical", "kappa_a_hz");
    c.g_a0 = kTwoPi * r.get("optical", "g_a0_hz").value_or(0.0);
    c.T_a = r.get("optical", "T_a_k").value_or(0.0);
    c.nbar_a = r.get("optical", "nbar_a");
    c.nbar_ap = r.get("optical", "nbar_ap");
    auto det_a = r.one_of("optical", "detuning_a_hz", "pump_a_hz");

    c.omega_b = kTwoPi * r.required("microwave", "omega_b_hz");
    c.kappa_b = kTwoPi * r.required("microwave", "kappa_b_hz");
    c.g_b0 = kTwoPi * r.get("microwave", "g_b0_hz").value_or(0.0);
    c.T_b = r.get("microwave", "T_b_k").value_or(0.0);
    c.nbar_b = r.get("microwave", "nbar_b");
    c.nbar_bp = r.get("microwave", "nbar_bp");
    auto det_b = r.one_of("microwave", "detuning_b_hz", "pump_b_hz");

    const auto eta_a = r.get("drive", "eta_a_hz");
    const auto eta_b = r.get("drive", "eta_b_hz");
    const auto G_a = r.get("drive", "G_a_hz");
    const auto G_b = r.get("drive", "G_b_hz");
    if (!eta_a && !eta_b && !G_a && !G_b) r.required("drive", "G_a_hz|G_b_hz|eta_a_hz|eta_b_hz");

    if (!r.missing().empty()) {
        std::string list;
        for (const auto& k : r.missing()) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("missing required keys: " + list);
    }

    if (damping->first == "gamma_hz") {
        c.gamma = kTwoPi * damping->second;
    } else {
        if (!(damping->second > 0)) throw ConfigError("must be > 0", "mechanics.Q");
        c.gamma = c.omega_m / damping->second;
    }
    c.omega_ap = det_a->first == "pump_a_hz" ? kTwoPi * det_a->second
                                             : c.omega_a + kTwoPi * det_a->second;
    c.omega_bp = det_b->first == "pump_b_hz" ? kTwoPi * det_b->second
                                             : c.omega_b + kTwoPi * det_b->second;
    if (eta_a || eta_b) {
        const double im_a = r.get("drive", "eta_a_im_hz").value_or(0.0);
        const double im_b = r.get("drive", "eta_b_im_hz").value_or(0.0);
        if (eta_a) c.eta_a = kTwoPi * std::complex<double>(*eta_a, im_a);
        if (eta_b) c.eta_b = kTwoPi * std::complex<double>(*eta_b, im_b);
    }
    if (G_a) c.G_a = kTwoPi * *G_a;
    if (G_b) c.G_b = kTwoPi * *G_b;
    c.x_c = r.get("drive", "x_c").value_or(0.0);
    c.validate();
    return c;
}

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

SystemConfig parse_config(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("parse error in " + source + " line " + std::to_string(e.line()) + ": " +
                          e.message());
    }
    return from_tree(tree);
}

SystemConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "<string>");
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_config(in, path.string());
}

std::string format_config(const SystemConfig& c) {
    std::ostringstream os;
    auto hz = [](double w) { return num(w / kTwoPi); };
    os << "[mechanics]\n";
    os << "omega_m_hz = " << hz(c.omega_m) << "\n";
    os << "gamma_hz = " << hz(c.gamma) << "\n";
    os << "T_c_k = " << num(c.T_c) << "\n";
    if (c.nbar_c) os << "nbar_c = " << num(*c.nbar_c) << "\n";
    os << "\n[optical]\n";
    os << "omega_a_hz = " << hz(c.omega_a) << "\n";
    os << "kappa_a_hz = " << hz(c.kappa_a) << "\n";
    os << "g_a0_hz = " << hz(c.g_a0) << "\n";
    os << "T_a_k = " << num(c.T_a) << "\n";
    if (c.nbar_a) os << "nbar_a = " << num(*c.nbar_a) << "\n";
    if (c.nbar_ap) os << "nbar_ap = " << num(*c.nbar_ap) << "\n";
    os << "pump_a_hz = " << hz(c.omega_ap) << "\n";
    os << "\n[microwave]\n";
    os << "omega_b_hz = " << hz(c.omega_b) << "\n";
    os << "kappa_b_hz = " << hz(c.kappa_b) << "\n";
    os << "g_b0_hz = " << hz(c.g_b0) << "\n";
    os << "T_b_k = " << num(c.T_b) << "\n";
    if (c.nbar_b) os << "nbar_b = " << num(*c.nbar_b) << "\n";
    if (c.nbar_bp) os << "nbar_bp = " << num(*c.nbar_bp) << "\n";
    os << "pump_b_hz = " << hz(c.omega_bp) << "\n";
    os << "\n[drive]\n";
    if (c.eta_a) {
        os << "eta_a_hz = " << hz(c.eta_a->real()) << "\n";
        os << "eta_a_im_hz = " << hz(c.eta_a->imag()) << "\n";
    }
    if (c.eta_b) {
        os << "eta_b_hz = " << hz(c.eta_b->real()) << "\n";
        os << "eta_b_im_hz = " << hz(c.eta_b->imag()) << "\n";
    }
    if (c.G_a) os << "G_a_hz = " << hz(*c.G_a) << "\n";
    if (c.G_b) os << "G_b_hz = " << hz(*c.G_b) << "\n";
    os << "x_c = " << num(c.x_c) << "\n";
    return os.str();
}

void save_config(const SystemConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file '" + path.string() + "'");
    out << format_config(config);
}

}  // namespace omt
