#pragma once

#include "eca/config.hpp"
#include "eca/edge_net.hpp"
#include "eca/error.hpp"
#include "eca/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eca {

/// How per-pixel BCE terms are combined into one strip loss.
enum class LossReduction {
    RowSum,    ///< summed along each output row, averaged over rows
    PixelMean, ///< averaged over all output pixels
};

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 8;
    double target_blur_sigma = 3.0;
    int early_stop_patience = 5;
    int max_epochs = 40;
    int strips_per_sample = 0; ///< strips drawn per sample per epoch; 0 = all
    bool shuffle = true;
    bool full_image = false;   ///< train on whole frames instead of strips
    bool compute_norm = true;  ///< derive channel statistics from the training set
    LossReduction reduction = LossReduction::PixelMean;
    std::uint64_t seed = 1;

    /// Throws ConfigError on non-positive rate/batch or negative counts.
    void validate() const;
};

/// A band of rows from one frame with the blurred edge target of its
/// valid-convolution output (rows - 6) x (width - 6).
struct TrainingStrip {
    ImageFrame window;
    int y_offset = 0;
    int full_height = 0;
    std::vector<double> target;
};

struct TrainingSample {
    std::string sample_id;
    std::vector<TrainingStrip> strips;
};

/// Cuts the 7-row windows at the configured strip heights (or the whole
/// frame when `full_image`) and attaches their targets.
TrainingSample make_training_sample(const ImageFrame& frame, const std::optional<Circle>& circle,
                                    const EcaConfig& eca_cfg, const TrainConfig& train_cfg,
                                    std::string sample_id = {});

/// RGB mean and standard deviation over every stored window pixel.
/// A channel with zero spread gets std 1.
ChannelNorm compute_channel_norm(std::span<const TrainingSample> samples);

/// Thrown when the loss stops being finite.
class TrainingDiverged : public Error {
public:
    using Error::Error;
};

/// Loss of one strip under `reduction`; accumulates parameter gradients of
/// that loss into `grads` when non-null.
double strip_loss(const EdgeNet& net, const TrainingStrip& strip, LossReduction reduction,
                  EdgeNetGradients* grads = nullptr);

/// One plain SGD update on the batch mean loss. Returns that loss. Does
/// not validate `cfg`, so a zero learning rate is a no-op update.
double sgd_step(EdgeNet& net, std::span<const TrainingStrip* const> batch, const TrainConfig& cfg);

/// Mean strip loss over every strip of every sample.
double dataset_loss(const EdgeNet& net, std::span<const TrainingSample> samples, LossReduction reduction);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    EdgeNet net; ///< snapshot with the lowest validation loss
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_val_loss = 0.0;
    bool stopped_early = false;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// SGD with early stopping on validation loss. An epoch is one pass over
/// the training samples. Without validation samples the training loss is
/// monitored instead. Throws InvalidInput on an empty training set and
/// TrainingDiverged on a non-finite loss.
TrainResult train(EdgeNet net, std::span<const TrainingSample> train_set, std::span<const TrainingSample> val_set,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

} // namespace eca
