#pragma once

#include <string>
#include <string_view>

namespace eca {

/// Every tunable of the estimator. Defaults are the published parameter
/// table; ransac_attempts is the only addition.
struct EcaConfig {
    int strip_count = 16;        ///< N, number of horizontal strips
    double alpha = 8.0;          ///< strip weighting towards top/bottom
    double t_g = 20.0;           ///< gradient magnitude soft threshold
    double t_theta = 30.0;       ///< gradient direction soft threshold, degrees
    double t_iota = 25.0;        ///< preceding max intensity soft threshold
    double t_px = 3.0;           ///< candidates this close to the frame edge are dropped
    double t_ps = 0.03;          ///< minimum candidate score
    double t_ri = 3.0;           ///< RANSAC inlier distance, pixels
    double t_cs = 0.06;          ///< circle score threshold
    double r_min = 0.1;          ///< minimum radius, fraction of width
    double r_max = 0.8;          ///< maximum radius, fraction of width
    double d_max = 0.2;          ///< maximum centre offset, fraction of width
    int ransac_attempts = 32;
    int ransac_iterations = 3;
    /// When true the acceptance threshold is t_cs * strip_count, otherwise t_cs.
    bool circle_score_normalized = true;

    /// Absolute circle score an accepted fit must reach.
    double circle_score_threshold() const { return circle_score_normalized ? t_cs * strip_count : t_cs; }

    /// Throws ConfigError if an invariant is violated.
    void validate() const;

    bool operator==(const EcaConfig&) const = default;
};

EcaConfig config_default();

/// `name = value` lines; shortest round-trip float formatting.
std::string serialize_config(const EcaConfig& cfg);

/// Applies every assignment in `text` on top of `base`. `#` starts a comment.
EcaConfig parse_config(std::string_view text, EcaConfig base = {});

EcaConfig load_config_file(const std::string& path, EcaConfig base = {});

/// Applies a single `name=value` override.
void apply_config_override(EcaConfig& cfg, std::string_view assignment);

} // namespace eca
