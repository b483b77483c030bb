#include "eca/config.hpp"

#include "eca/error.hpp"
#include "format_util.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace eca {
namespace {

struct Field {
    std::function<std::string(const EcaConfig&)> get;
    std::function<void(EcaConfig&, std::string_view)> set;
};

double parse_double(std::string_view name, std::string_view v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("invalid real value for '" + std::string(name) + "': '" + std::string(v) + "'");
    }
    return out;
}

int parse_int(std::string_view name, std::string_view v) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("invalid integer value for '" + std::string(name) + "': '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view name, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean value for '" + std::string(name) + "': '" + std::string(v) + "'");
}

template <typename T>
Field real_field(T EcaConfig::*member, const char* name) {
    return {[member](const EcaConfig& c) { return detail::format_double(c.*member); },
            [member, name](EcaConfig& c, std::string_view v) { c.*member = parse_double(name, v); }};
}

Field int_field(int EcaConfig::*member, const char* name) {
    return {[member](const EcaConfig& c) { return std::to_string(c.*member); },
            [member, name](EcaConfig& c, std::string_view v) { c.*member = parse_int(name, v); }};
}

// Ordered: serialization follows this order.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"strip_count", int_field(&EcaConfig::strip_count, "strip_count")},
        {"alpha", real_field(&EcaConfig::alpha, "alpha")},
        {"t_g", real_field(&EcaConfig::t_g, "t_g")},
        {"t_theta", real_field(&EcaConfig::t_theta, "t_theta")},
        {"t_iota", real_field(&EcaConfig::t_iota, "t_iota")},
        {"t_px", real_field(&EcaConfig::t_px, "t_px")},
        {"t_ps", real_field(&EcaConfig::t_ps, "t_ps")},
        {"t_ri", real_field(&EcaConfig::t_ri, "t_ri")},
        {"t_cs", real_field(&EcaConfig::t_cs, "t_cs")},
        {"r_min", real_field(&EcaConfig::r_min, "r_min")},
        {"r_max", real_field(&EcaConfig::r_max, "r_max")},
        {"d_max", real_field(&EcaConfig::d_max, "d_max")},
        {"ransac_attempts", int_field(&EcaConfig::ransac_attempts, "ransac_attempts")},
        {"ransac_iterations", int_field(&EcaConfig::ransac_iterations, "ransac_iterations")},
        {"circle_score_normalized",
         {[](const EcaConfig& c) { return std::string(c.circle_score_normalized ? "true" : "false"); },
          [](EcaConfig& c, std::string_view v) { c.circle_score_normalized = parse_bool("circle_score_normalized", v); }}},
    };
    return table;
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

void assign(EcaConfig& cfg, std::string_view name, std::string_view value) {
    for (const auto& [key, field] : fields()) {
        if (key == name) {
            field.set(cfg, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + std::string(name) + "'");
}

} // namespace

void EcaConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (strip_count < 4) fail("strip_count must be >= 4");
    if (!(alpha > 0)) fail("alpha must be > 0");
    if (!(t_g > 0) || !(t_theta > 0) || !(t_iota > 0) || !(t_px > 0) || !(t_ps > 0) || !(t_ri > 0) ||
        !(t_cs > 0)) {
        fail("all thresholds must be > 0");
    }
    if (!(r_min > 0) || !(r_max > 0) || !(d_max > 0)) fail("geometry gates must be > 0");
    if (!(r_min < r_max)) fail("r_min must be < r_max");
    if (ransac_attempts < 1) fail("ransac_attempts must be >= 1");
    if (ransac_iterations < 0) fail("ransac_iterations must be >= 0");
}

EcaConfig config_default() { return EcaConfig{}; }

std::string serialize_config(const EcaConfig& cfg) {
    std::string out;
    for (const auto& [key, field] : fields()) {
        out += key;
        out += " = ";
        out += field.get(cfg);
        out += '\n';
    }
    return out;
}

EcaConfig parse_config(std::string_view text, EcaConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'name = value'");
        }
        try {
            assign(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

EcaConfig load_config_file(const std::string& path, EcaConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

void apply_config_override(EcaConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form name=value");
    }
    EcaConfig next = cfg;
    assign(next, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
    next.validate();
    cfg = next;
}

} // namespace eca
