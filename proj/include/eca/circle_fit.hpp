#pragma once

#include "eca/config.hpp"
#include "eca/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace eca {

/// Frame quantities the geometry gates are expressed in.
struct FitGeometry {
    double width = 0.0;   ///< r_min, r_max and d_max are fractions of this
    Point2 center;        ///< reference point for the d_max gate

    static FitGeometry for_frame(FrameDims dims) { return {double(dims.width), dims.center()}; }
};

enum class RejectReason { NoCandidates, LowScore, GeometryGate };

struct AcceptedFit {
    Circle circle;
    double score = 0.0;
    int inlier_count = 0;
};

struct RejectedFit {
    RejectReason reason = RejectReason::NoCandidates;
};

using FitResult = std::variant<AcceptedFit, RejectedFit>;

const char* to_string(RejectReason r);

/// Drops candidates within t_px of any frame edge and those scoring below t_ps.
std::vector<EdgeCandidate> filter_candidates(std::span<const EdgeCandidate> cands, FrameDims frame,
                                             const EcaConfig& cfg);

/// Circumcircle of three points; nullopt when they are collinear (within a
/// 1e-9 determinant tolerance after normalising coordinates) or coincide.
std::optional<Circle> circle_from_triplet(Point2 p1, Point2 p2, Point2 p3);

/// Algebraic least-squares circle (Coope): minimises
/// sum (x^2 + y^2 - 2ax - 2by - c)^2, r = sqrt(c + a^2 + b^2).
/// nullopt for fewer than three points or a rank-deficient system.
std::optional<Circle> least_squares_circle(std::span<const Point2> points);

/// The quantity least_squares_circle minimises, evaluated for `c`.
double algebraic_residual(const Circle& c, std::span<const Point2> points);

/// |distance(p, centre) - r|
inline double radial_distance(const Circle& c, Point2 p) { return std::abs(std::hypot(p.x - c.cx, p.y - c.cy) - c.r); }

/// Both geometry gates (radius bounds and centre offset).
bool passes_geometry_gates(const Circle& c, const FitGeometry& geom, const EcaConfig& cfg);

/// Outcome of one triplet-seeded attempt, before gating and thresholding.
struct AttemptResult {
    bool valid = false;          ///< false when the seed triplet (or a refit) was degenerate
    Circle circle;
    double score = 0.0;          ///< sum of inlier scores
    std::vector<int> inliers;    ///< indices into the candidate list
};

/// Runs one attempt seeded by candidates (i, j, k): triplet circle, inlier
/// set within t_ri, then `ransac_iterations` rounds of least squares on the
/// inliers followed by inlier recomputation.
AttemptResult run_attempt(std::span<const EdgeCandidate> cands, int i, int j, int k, const EcaConfig& cfg);

/// RANSAC over `cfg.ransac_attempts` uniformly sampled triplets. Attempts
/// draw from independent streams derived from (seed, attempt index), so
/// the result does not depend on `threads`. Ties go to the lower attempt
/// index.
FitResult ransac_fit(std::span<const EdgeCandidate> cands, const FitGeometry& geom, const EcaConfig& cfg,
                     std::uint64_t seed, int threads = 1);

/// Same reduction as ransac_fit with one attempt per triplet, enumerated in
/// lexicographic order.
FitResult ransac_fit_exhaustive(std::span<const EdgeCandidate> cands, const FitGeometry& geom,
                                const EcaConfig& cfg);

} // namespace eca
