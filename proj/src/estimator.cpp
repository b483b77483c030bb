#include "eca/estimator.hpp"

#include "eca/error.hpp"
#include "eca/handcrafted.hpp"
#include "eca/strips.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace eca {

EstimatorVariant learned_variant_from_file(const std::string& path) {
    return LearnedVariant{std::make_shared<const EdgeNet>(load_weights_file(path))};
}

std::vector<EdgeCandidate> collect_candidates(const ImageFrame& frame, const EstimatorVariant& variant,
                                              const EcaConfig& cfg, std::vector<int>* rows_out) {
    require_pipeline_frame(frame);
    const auto rows = strip_heights(frame.height(), cfg.strip_count, cfg.alpha);
    std::vector<EdgeCandidate> cands;
    cands.reserve(rows.size() * 2);

    thread_local StripWindow window;
    for (int row : rows) {
        StripScoreRow scored;
        if (const auto* learned = std::get_if<LearnedVariant>(&variant)) {
            if (!learned->net) throw InvalidInput("learned variant has no weights");
            scored = score_strip_learned(*learned->net, frame, row);
        } else {
            extract_strip_into(frame, row, window);
            scored = score_strip(window, frame.dims(), cfg);
        }
        cands.push_back(scored.left_best);
        cands.push_back(scored.right_best);
    }
    if (rows_out) *rows_out = rows;
    return cands;
}

EstimateTrace estimate_traced(const ImageFrame& frame, const EstimatorVariant& variant, const EcaConfig& cfg,
                              std::uint64_t seed) {
    EstimateTrace trace;
    trace.candidates = collect_candidates(frame, variant, cfg, &trace.strip_rows);
    trace.filtered = filter_candidates(trace.candidates, frame.dims(), cfg);
    trace.fit = ransac_fit(trace.filtered, FitGeometry::for_frame(frame.dims()), cfg, seed);
    if (const auto* acc = std::get_if<AcceptedFit>(&trace.fit)) {
        trace.area = CircularArea{acc->circle, acc->score};
    } else {
        trace.area = FullFrame{};
    }
    return trace;
}

ContentArea estimate(const ImageFrame& frame, const EstimatorVariant& variant, const EcaConfig& cfg,
                     std::uint64_t seed) {
    return estimate_traced(frame, variant, cfg, seed).area;
}

std::vector<BatchItem> estimate_batch(const std::vector<ImageFrame>& frames, const EstimatorVariant& variant,
                                      const EcaConfig& cfg, std::uint64_t seed, int threads) {
    std::vector<BatchItem> out(frames.size());
    auto run_one = [&](std::size_t i) {
        out[i].index = i;
        try {
            out[i].area = estimate(frames[i], variant, cfg, seed);
        } catch (const Error& e) {
            out[i].error = e.what();
        }
    };
    threads = std::max(1, std::min<int>(threads, static_cast<int>(frames.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < frames.size(); ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < frames.size(); i = next++) run_one(i);
            });
        }
    }
    return out;
}

} // namespace eca
