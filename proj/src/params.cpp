#include "qscatter/params.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qscatter/errors.hpp"
#include "qscatter/format.hpp"

namespace qscatter {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::CoherentFrozen: return "coherent-frozen";
        case ModelKind::CoherentSpreading: return "coherent-spreading";
        case ModelKind::ClassicalCoulomb: return "classical";
        case ModelKind::Free: return "free";
    }
    throw std::logic_error("unreachable: bad ModelKind");
}

ModelKind model_from_string(std::string_view name) {
    if (name == "coherent-frozen") return ModelKind::CoherentFrozen;
    if (name == "coherent-spreading") return ModelKind::CoherentSpreading;
    if (name == "classical") return ModelKind::ClassicalCoulomb;
    if (name == "free") return ModelKind::Free;
    throw ValidationError("unknown model '" + std::string(name) +
                          "' (expected coherent-frozen, coherent-spreading, classical or free)");
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

void require_positive(double v, const char* field) {
    require(std::isfinite(v) && v > 0.0,
            std::string(field) + " must be a positive finite number (got " + format_double(v) + ")");
}

} // namespace

void PhysicalParams::validate() const {
    require_positive(sigma, "sigma");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
    require(std::isfinite(e0sq) && e0sq >= 0.0,
            "e0sq must be finite and non-negative (got " + format_double(e0sq) + ")");
}

void ScenarioConfig::validate() const {
    require_positive(x0, "x0");
    require_positive(p0, "p0");
    require_positive(t_max, "t_max");
    require_positive(rtol, "rtol");
    require_positive(atol, "atol");
    require_positive(event_tol, "event_tol");
}

namespace {

double parse_double(std::string_view key, std::string_view value) {
    std::string buf(value);
    const char* begin = buf.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ValidationError("value for '" + std::string(key) + "' is not a number: '" + buf + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

void apply_config_key(Config& config, std::string_view key, std::string_view value) {
    if (key == "model") {
        config.scenario.model = model_from_string(value);
        return;
    }
    double* slot = nullptr;
    if (key == "sigma") slot = &config.params.sigma;
    else if (key == "mass") slot = &config.params.mass;
    else if (key == "hbar") slot = &config.params.hbar;
    else if (key == "e0sq") slot = &config.params.e0sq;
    else if (key == "x0") slot = &config.scenario.x0;
    else if (key == "p0") slot = &config.scenario.p0;
    else if (key == "t_max") slot = &config.scenario.t_max;
    else if (key == "rtol") slot = &config.scenario.rtol;
    else if (key == "atol") slot = &config.scenario.atol;
    else if (key == "event_tol") slot = &config.scenario.event_tol;
    else throw ValidationError("unknown config key '" + std::string(key) + "'");
    *slot = parse_double(key, value);
}

Config parse_config_text(std::string_view text) {
    Config config;
    size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++lineno;

        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("malformed config line " + std::to_string(lineno) +
                                  " (expected 'key = value'): '" + std::string(line) + "'");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("malformed config line " + std::to_string(lineno) +
                                  " (empty key or value)");
        try {
            apply_config_key(config, key, value);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
        }
    }
    return config;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const Config& config) {
    std::ostringstream out;
    out << "sigma = " << format_double(config.params.sigma) << '\n'
        << "mass = " << format_double(config.params.mass) << '\n'
        << "hbar = " << format_double(config.params.hbar) << '\n'
        << "e0sq = " << format_double(config.params.e0sq) << '\n'
        << "x0 = " << format_double(config.scenario.x0) << '\n'
        << "p0 = " << format_double(config.scenario.p0) << '\n'
        << "model = " << to_string(config.scenario.model) << '\n'
        << "t_max = " << format_double(config.scenario.t_max) << '\n'
        << "rtol = " << format_double(config.scenario.rtol) << '\n'
        << "atol = " << format_double(config.scenario.atol) << '\n'
        << "event_tol = " << format_double(config.scenario.event_tol) << '\n';
    return out.str();
}

} // namespace qscatter
