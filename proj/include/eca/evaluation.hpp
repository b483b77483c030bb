#pragma once

#include "eca/error.hpp"
#include "eca/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace eca {

/// Points along the boundary of the content-area region (disk intersected
/// with the sensor rectangle [-0.5, W-0.5] x [-0.5, H-0.5]), consecutive
/// samples at most `spacing` apart along each boundary piece.
struct BoundarySamples {
    std::vector<Point2> points;
};

BoundarySamples boundary_points(const ContentArea& area, FrameDims dims, double spacing = 1.0);

/// Directed distance max_a min_b |a - b|. Exact; B is indexed with a
/// uniform grid. Throws InvalidInput on empty input.
double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b);

/// max(h(A, B), h(B, A)).
double hausdorff(std::span<const Point2> a, std::span<const Point2> b);

/// Diagonal of the 1920x1080 reference frame.
double reference_diagonal();

/// Hausdorff distance scaled by reference_diagonal() / diagonal(W, H).
double normalized_hausdorff(std::span<const Point2> a, std::span<const Point2> b, FrameDims dims);

/// Normalised Hausdorff distance between the boundaries of two areas.
double area_distance(const ContentArea& predicted, const ContentArea& truth, FrameDims dims);

inline constexpr double kMissThresholdPx = 15.0;
inline constexpr double kBadMissThresholdPx = 25.0;

enum class HitClass { Hit, Miss, BadMiss };
const char* to_string(HitClass c);
HitClass classify_distance(double nh);

struct SampleResult {
    std::string sample_id;
    double distance = 0.0; ///< normalised Hausdorff, px
    HitClass cls = HitClass::Hit;
};

/// Miss % counts every sample above 15 px, bad misses included.
struct EvalReport {
    std::vector<SampleResult> per_sample;
    double avg_error_px = 0.0;
    double miss_pct = 0.0;
    double bad_miss_pct = 0.0;

    std::string to_json() const;
    /// One-row Markdown table: Avg. err. (px) | Miss (%) | Bad Miss (%).
    std::string to_markdown(const std::string& label) const;
};

struct PredictionRecord {
    std::string sample_id;
    ContentArea area;
};

struct TruthRecord {
    std::string sample_id;
    ContentArea area;
    FrameDims dims;
};

/// Thrown when predictions and truths do not cover the same ids.
class SampleMismatch : public InvalidInput {
public:
    SampleMismatch(std::vector<std::string> missing_predictions, std::vector<std::string> unknown_predictions);
    std::vector<std::string> missing_predictions;
    std::vector<std::string> unknown_predictions;
};

EvalReport evaluate_dataset(const std::vector<PredictionRecord>& predictions, const std::vector<TruthRecord>& truths);

} // namespace eca
