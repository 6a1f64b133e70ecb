#ifndef QSCATTER_PARAMS_HPP
#define QSCATTER_PARAMS_HPP

#include <string>
#include <string_view>

namespace qscatter {

// Interaction/kinetic model for the relative coordinate of the two-packet
// system.  The two coherent models share the same t = 0 state; they differ
// in whether the packet width is held fixed or allowed to breathe in time.
enum class ModelKind {
    CoherentFrozen,     // fixed-width Gaussian packets
    CoherentSpreading,  // width grows as sqrt(1 + (omega t)^2)
    ClassicalCoulomb,   // point charges, potential e0^2 / (2|x|)
    Free,               // no interaction at all
};

std::string_view to_string(ModelKind kind);
ModelKind model_from_string(std::string_view name); // throws ValidationError

// Packet and interaction constants.  Natural units: the defaults make the
// width, mass, action scale and squared charge all 1.
struct PhysicalParams {
    double sigma = 1.0; // packet width parameter
    double mass = 1.0;  // single-particle mass (relative coordinate carries m/2)
    double hbar = 1.0;
    double e0sq = 1.0;  // squared elementary charge, Gaussian convention

    // Packet breathing frequency 2*sigma^2/(hbar*m).  Always recomputed from
    // its inputs so it can never go stale.
    double omega() const { return 2.0 * sigma * sigma / (hbar * mass); }

    bool operator==(const PhysicalParams&) const = default;

    void validate() const; // throws ValidationError naming the bad field
};

// One scattering scenario: packets released at separation 2*x0 with equal
// and opposite momenta, integrated until return/crossing or t_max.
struct ScenarioConfig {
    double x0 = 2.5;           // initial half-separation
    double p0 = 1.0;           // initial momentum magnitude (state starts at (x0, -p0))
    ModelKind model = ModelKind::CoherentFrozen;
    double t_max = 200.0;      // integration horizon
    double rtol = 1e-10;       // integrator relative tolerance
    double atol = 1e-12;       // integrator absolute tolerance
    double event_tol = 1e-8;   // localization tolerance for return events

    bool operator==(const ScenarioConfig&) const = default;

    void validate() const;
};

struct Config {
    PhysicalParams params;
    ScenarioConfig scenario;

    bool operator==(const Config&) const = default;
};

// Flat "key = value" text, one setting per line, '#' starts a comment.
// Keys are the CLI flag names with '-' replaced by '_' (sigma, mass, hbar,
// e0sq, x0, p0, model, t_max, rtol, atol, event_tol).  Unknown keys and
// malformed lines are reported with their line number.  Parsed values are
// range-checked via the validate() methods by the caller, not here.
Config parse_config_text(std::string_view text);
Config load_config_file(const std::string& path);

// Inverse of parse_config_text: parse(serialize(c)) == c exactly.
std::string serialize_config(const Config& config);

// Assign one key (config-file spelling) on a Config.  Shared by the file
// parser and anything that needs keyed assignment; throws ValidationError
// for unknown keys or unparseable values.
void apply_config_key(Config& config, std::string_view key, std::string_view value);

} // namespace qscatter

#endif
