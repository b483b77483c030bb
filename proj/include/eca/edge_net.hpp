#pragma once

#include "eca/handcrafted.hpp"
#include "eca/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace eca {

/// Dense channel-major (C x H x W) tensor of doubles.
struct Tensor3 {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> values;

    Tensor3() = default;
    Tensor3(int c, int h, int w, double fill = 0.0)
        : channels(c), height(h), width(w), values(std::size_t(c) * h * w, fill) {}

    double* plane(int c) { return values.data() + std::size_t(c) * height * width; }
    const double* plane(int c) const { return values.data() + std::size_t(c) * height * width; }
    double& at(int c, int y, int x) { return plane(c)[std::size_t(y) * width + x]; }
    double at(int c, int y, int x) const { return plane(c)[std::size_t(y) * width + x]; }
};

/// Weights of one convolution: kernel laid out [out][in][ky][kx].
struct ConvLayer {
    int out_channels = 0;
    int in_channels = 0;
    int kernel_size = 0;
    std::vector<double> kernel;
    std::vector<double> bias;

    ConvLayer() = default;
    ConvLayer(int out_ch, int in_ch, int k)
        : out_channels(out_ch), in_channels(in_ch), kernel_size(k),
          kernel(std::size_t(out_ch) * in_ch * k * k, 0.0), bias(out_ch, 0.0) {}

    double& weight(int o, int i, int ky, int kx) {
        return kernel[((std::size_t(o) * in_channels + i) * kernel_size + ky) * kernel_size + kx];
    }
    double weight(int o, int i, int ky, int kx) const {
        return kernel[((std::size_t(o) * in_channels + i) * kernel_size + ky) * kernel_size + kx];
    }
};

/// Per-channel RGB normalisation statistics, in 0-255 units.
struct ChannelNorm {
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    std::array<double, 3> stddev{1.0, 1.0, 1.0};
};

inline constexpr int kEdgeNetInputChannels = 5; // R, G, B, X, Y
inline constexpr int kEdgeNetLayers = 4;

/// Conv3x3(5->8) ReLU Conv3x3(8->16) ReLU Conv3x3(16->32) ReLU Conv1x1(32->1)
/// Sigmoid, all valid (unpadded). A 7-row input yields a single output row.
struct EdgeNet {
    std::array<ConvLayer, kEdgeNetLayers> layers;
    ChannelNorm norm;

    /// Architecture with all weights and biases zero.
    static EdgeNet zeros();
    /// Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases.
    static EdgeNet initialized(std::uint64_t seed);

    /// Number of trainable scalars.
    std::size_t parameter_count() const;
};

/// Intermediate activations kept for back-propagation.
struct ForwardCache {
    std::array<Tensor3, kEdgeNetLayers> inputs; ///< input of each layer (post-ReLU of the previous)
    Tensor3 logits;                             ///< pre-sigmoid head output
};

/// 5 x H x W RGBXY tensor. RGB are (v - mean) / std; X and Y run from -0.5
/// at the first column/row to 0.5 at the last, 0 at the centre.
/// Throws ConfigError if any std is not positive.
Tensor3 make_rgbxy(const ImageFrame& frame, const ChannelNorm& norm);

/// RGBXY rows [first_row, first_row + rows) with full-frame coordinates.
Tensor3 make_rgbxy_rows(const ImageFrame& frame, int first_row, int rows, const ChannelNorm& norm);

/// RGBXY of a horizontal band cut from a frame `full_height` rows tall,
/// whose first row is frame row `y_offset`.
Tensor3 make_rgbxy_window(const ImageFrame& window, int y_offset, int full_height, const ChannelNorm& norm);

/// Probability map of shape 1 x (h-6) x (w-6). Throws InvalidInput if the
/// input is smaller than 7 x 7 or does not have 5 channels.
Tensor3 forward(const EdgeNet& net, const Tensor3& input);

/// Pre-sigmoid output, optionally filling `cache` for backward().
Tensor3 forward_logits(const EdgeNet& net, const Tensor3& input, ForwardCache* cache = nullptr);

/// Parameter gradients, same layout as EdgeNet::layers.
struct EdgeNetGradients {
    std::array<ConvLayer, kEdgeNetLayers> layers;

    static EdgeNetGradients zeros_like(const EdgeNet& net);
    void add(const EdgeNetGradients& other);
};

/// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(logits).
void backward(const EdgeNet& net, const ForwardCache& cache, const Tensor3& grad_logits, EdgeNetGradients& grads);

/// Soft binary cross entropy summed over all elements, computed from
/// logits. Writes d(loss)/d(logits) into `grad` when non-null.
double soft_bce_with_logits(const Tensor3& logits, std::span<const double> targets, Tensor3* grad);

// Weights file: little-endian. Magic "ECANET01", u32 layer count, then per
// layer u32 out, in, kh, kw followed by kernel and bias as f64, then the
// RGB means and stds as f64.
std::vector<std::uint8_t> save_weights(const EdgeNet& net);
EdgeNet load_weights(std::span<const std::uint8_t> bytes);
void save_weights_file(const EdgeNet& net, const std::string& path);
EdgeNet load_weights_file(const std::string& path);

/// Learned counterpart of score_strip: network probabilities on the 7-row
/// window at `strip_row`. The three columns lost on each side to valid
/// convolution score 0.
StripScoreRow score_strip_learned(const EdgeNet& net, const ImageFrame& frame, int strip_row);

} // namespace eca
