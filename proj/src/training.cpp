#include "eca/training.hpp"

#include "eca/dataset.hpp"
#include "eca/strips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace eca {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(target_blur_sigma > 0.0)) throw ConfigError("target_blur_sigma must be > 0");
    if (early_stop_patience < 1) throw ConfigError("early_stop_patience must be >= 1");
    if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
    if (strips_per_sample < 0) throw ConfigError("strips_per_sample must be >= 0");
}

TrainingSample make_training_sample(const ImageFrame& frame, const std::optional<Circle>& circle,
                                    const EcaConfig& eca_cfg, const TrainConfig& train_cfg, std::string sample_id) {
    require_pipeline_frame(frame);
    const int w = frame.width(), h = frame.height();
    const auto target = make_edge_target(circle, frame.dims(), {train_cfg.target_blur_sigma, true});

    TrainingSample sample;
    sample.sample_id = std::move(sample_id);
    auto add_band = [&](int y0, int rows) {
        TrainingStrip s;
        s.window = frame.cropped(0, y0, w, rows);
        s.y_offset = y0;
        s.full_height = h;
        s.target.reserve(std::size_t(rows - 6) * (w - 6));
        for (int y = y0 + 3; y < y0 + rows - 3; ++y) {
            const double* t = target.data() + std::size_t(y) * w;
            s.target.insert(s.target.end(), t + 3, t + w - 3);
        }
        sample.strips.push_back(std::move(s));
    };
    if (train_cfg.full_image) {
        add_band(0, h);
    } else {
        for (int row : strip_heights(h, eca_cfg.strip_count, eca_cfg.alpha)) {
            add_band(row - kStripHalfHeight, kStripPatchHeight);
        }
    }
    return sample;
}

ChannelNorm compute_channel_norm(std::span<const TrainingSample> samples) {
    std::array<double, 3> sum{}, sum_sq{};
    double count = 0.0;
    for (const auto& s : samples) {
        for (const auto& strip : s.strips) {
            const auto data = strip.window.data();
            for (std::size_t i = 0; i < data.size(); i += 3) {
                for (int c = 0; c < 3; ++c) {
                    sum[c] += data[i + c];
                    sum_sq[c] += double(data[i + c]) * data[i + c];
                }
            }
            count += double(data.size() / 3);
        }
    }
    ChannelNorm norm;
    if (count == 0.0) return norm;
    for (int c = 0; c < 3; ++c) {
        norm.mean[c] = sum[c] / count;
        const double var = std::max(0.0, sum_sq[c] / count - norm.mean[c] * norm.mean[c]);
        norm.stddev[c] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
    return norm;
}

double strip_loss(const EdgeNet& net, const TrainingStrip& strip, LossReduction reduction, EdgeNetGradients* grads) {
    const Tensor3 input = make_rgbxy_window(strip.window, strip.y_offset, strip.full_height, net.norm);
    ForwardCache cache;
    const Tensor3 logits = forward_logits(net, input, grads ? &cache : nullptr);
    Tensor3 grad;
    double loss = soft_bce_with_logits(logits, strip.target, grads ? &grad : nullptr);
    const double scale = reduction == LossReduction::RowSum ? 1.0 / logits.height
                                                            : 1.0 / double(logits.values.size());
    loss *= scale;
    if (grads) {
        for (double& g : grad.values) g *= scale;
        backward(net, cache, grad, *grads);
    }
    return loss;
}

double sgd_step(EdgeNet& net, std::span<const TrainingStrip* const> batch, const TrainConfig& cfg) {
    if (batch.empty()) return 0.0;
    auto grads = EdgeNetGradients::zeros_like(net);
    double loss = 0.0;
    for (const TrainingStrip* s : batch) loss += strip_loss(net, *s, cfg.reduction, &grads);
    const double n = double(batch.size());
    loss /= n;
    if (!std::isfinite(loss)) throw TrainingDiverged("training loss became non-finite");
    const double step = cfg.learning_rate / n;
    for (int l = 0; l < kEdgeNetLayers; ++l) {
        auto& layer = net.layers[l];
        const auto& g = grads.layers[l];
        for (std::size_t i = 0; i < layer.kernel.size(); ++i) layer.kernel[i] -= step * g.kernel[i];
        for (std::size_t i = 0; i < layer.bias.size(); ++i) layer.bias[i] -= step * g.bias[i];
    }
    return loss;
}

double dataset_loss(const EdgeNet& net, std::span<const TrainingSample> samples, LossReduction reduction) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& s : samples) {
        for (const auto& strip : s.strips) {
            total += strip_loss(net, strip, reduction);
            ++n;
        }
    }
    return n ? total / double(n) : 0.0;
}

TrainResult train(EdgeNet net, std::span<const TrainingSample> train_set, std::span<const TrainingSample> val_set,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
    cfg.validate();
    std::size_t total_strips = 0;
    for (const auto& s : train_set) total_strips += s.strips.size();
    if (total_strips == 0) throw InvalidInput("training set has no samples");
    if (cfg.compute_norm) net.norm = compute_channel_norm(train_set);

    std::mt19937_64 rng(cfg.seed);
    const auto monitor = val_set.empty() ? train_set : val_set;

    TrainResult result;
    result.net = net;
    result.best_val_loss = dataset_loss(net, monitor, cfg.reduction);
    if (!std::isfinite(result.best_val_loss)) throw TrainingDiverged("initial loss is non-finite");
    int since_best = 0;

    std::vector<const TrainingStrip*> order;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        order.clear();
        for (const auto& s : train_set) {
            const std::size_t n = s.strips.size();
            if (cfg.strips_per_sample == 0 || std::size_t(cfg.strips_per_sample) >= n) {
                for (const auto& strip : s.strips) order.push_back(&strip);
                continue;
            }
            // Partial Fisher-Yates to pick distinct strips.
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            for (int k = 0; k < cfg.strips_per_sample; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, n - 1);
                std::swap(idx[k], idx[pick(rng)]);
                order.push_back(&s.strips[idx[k]]);
            }
        }
        if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);

        double train_loss = 0.0;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t e = std::min(order.size(), b + cfg.batch_size);
            const std::span<const TrainingStrip* const> batch(order.data() + b, e - b);
            try {
                train_loss += sgd_step(net, batch, cfg) * double(batch.size());
            } catch (const TrainingDiverged&) {
                throw TrainingDiverged("loss became non-finite in epoch " + std::to_string(epoch) + " at strip " +
                                       std::to_string(b) + "; try a smaller learning rate");
            }
        }
        EpochStats stats{epoch, train_loss / double(order.size()), dataset_loss(net, monitor, cfg.reduction)};
        if (!std::isfinite(stats.val_loss)) {
            throw TrainingDiverged("validation loss became non-finite in epoch " + std::to_string(epoch));
        }
        result.history.push_back(stats);
        if (on_epoch) on_epoch(stats);
        if (stats.val_loss < result.best_val_loss) {
            result.best_val_loss = stats.val_loss;
            result.best_epoch = epoch;
            result.net = net;
            since_best = 0;
        } else if (++since_best >= cfg.early_stop_patience) {
            result.stopped_early = true;
            break;
        }
    }
    return result;
}

} // namespace eca
