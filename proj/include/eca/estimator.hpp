#pragma once

#include "eca/circle_fit.hpp"
#include "eca/config.hpp"
#include "eca/edge_net.hpp"
#include "eca/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace eca {

struct HandcraftedVariant {};

struct LearnedVariant {
    std::shared_ptr<const EdgeNet> net;
};

using EstimatorVariant = std::variant<HandcraftedVariant, LearnedVariant>;

/// Loads a weights file into a learned variant. Throws on failure.
EstimatorVariant learned_variant_from_file(const std::string& path);

/// Everything the pipeline produced for one frame.
struct EstimateTrace {
    ContentArea area;
    std::vector<int> strip_rows;
    std::vector<EdgeCandidate> candidates; ///< two per strip, before filtering
    std::vector<EdgeCandidate> filtered;
    FitResult fit;
};

/// Full pipeline: strips, edge scoring with the chosen variant, candidate
/// filtering and RANSAC. Rejected fits give FullFrame. Throws InvalidInput
/// only for frames that fail require_pipeline_frame().
ContentArea estimate(const ImageFrame& frame, const EstimatorVariant& variant, const EcaConfig& cfg,
                     std::uint64_t seed);

EstimateTrace estimate_traced(const ImageFrame& frame, const EstimatorVariant& variant, const EcaConfig& cfg,
                              std::uint64_t seed);

/// Scores every strip and returns the two candidates of each.
std::vector<EdgeCandidate> collect_candidates(const ImageFrame& frame, const EstimatorVariant& variant,
                                              const EcaConfig& cfg, std::vector<int>* rows_out = nullptr);

struct BatchItem {
    std::size_t index = 0;
    std::optional<ContentArea> area; ///< empty when the frame was rejected
    std::string error;
};

/// Order-preserving; item i equals estimate(frames[i], ...). A bad frame
/// produces an item with an error message and the batch continues.
std::vector<BatchItem> estimate_batch(const std::vector<ImageFrame>& frames, const EstimatorVariant& variant,
                                      const EcaConfig& cfg, std::uint64_t seed, int threads = 1);

} // namespace eca
