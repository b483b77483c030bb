#include "eca/edge_net.hpp"

#include "eca/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

namespace eca {
namespace {

constexpr std::array<std::array<int, 3>, kEdgeNetLayers> kArchitecture{{
    {8, 5, 3},
    {16, 8, 3},
    {32, 16, 3},
    {1, 32, 1},
}};

constexpr char kMagic[8] = {'E', 'C', 'A', 'N', 'E', 'T', '0', '1'};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Valid convolution; out must already have the right shape.
void conv_forward(const ConvLayer& layer, const Tensor3& in, Tensor3& out) {
    const int k = layer.kernel_size;
    const int oh = out.height, ow = out.width;
    for (int o = 0; o < layer.out_channels; ++o) {
        double* dst = out.plane(o);
        std::fill(dst, dst + std::size_t(oh) * ow, layer.bias[o]);
        for (int i = 0; i < layer.in_channels; ++i) {
            const double* src = in.plane(i);
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double w = layer.weight(o, i, ky, kx);
                    for (int y = 0; y < oh; ++y) {
                        double* drow = dst + std::size_t(y) * ow;
                        const double* srow = src + std::size_t(y + ky) * in.width + kx;
                        for (int x = 0; x < ow; ++x) drow[x] += w * srow[x];
                    }
                }
            }
        }
    }
}

void relu_inplace(Tensor3& t) {
    for (double& v : t.values) v = v > 0.0 ? v : 0.0;
}

// grad_in may be null for the first layer.
void conv_backward(const ConvLayer& layer, const Tensor3& in, const Tensor3& grad_out, ConvLayer& grad_layer,
                   Tensor3* grad_in) {
    const int k = layer.kernel_size;
    const int oh = grad_out.height, ow = grad_out.width;
    for (int o = 0; o < layer.out_channels; ++o) {
        const double* g = grad_out.plane(o);
        double bsum = 0.0;
        for (std::size_t n = 0; n < std::size_t(oh) * ow; ++n) bsum += g[n];
        grad_layer.bias[o] += bsum;
        for (int i = 0; i < layer.in_channels; ++i) {
            const double* src = in.plane(i);
            double* gin = grad_in ? grad_in->plane(i) : nullptr;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double w = layer.weight(o, i, ky, kx);
                    double acc = 0.0;
                    for (int y = 0; y < oh; ++y) {
                        const double* grow = g + std::size_t(y) * ow;
                        const double* srow = src + std::size_t(y + ky) * in.width + kx;
                        for (int x = 0; x < ow; ++x) acc += grow[x] * srow[x];
                        if (gin) {
                            double* girow = gin + std::size_t(y + ky) * in.width + kx;
                            for (int x = 0; x < ow; ++x) girow[x] += w * grow[x];
                        }
                    }
                    grad_layer.weight(o, i, ky, kx) += acc;
                }
            }
        }
    }
}

void check_input(const Tensor3& input) {
    if (input.channels != kEdgeNetInputChannels) {
        throw InvalidInput("EdgeNet expects 5 input channels, got " + std::to_string(input.channels));
    }
    if (input.height < 7 || input.width < 7) {
        throw InvalidInput("EdgeNet input must be at least 7x7, got " + std::to_string(input.height) + "x" +
                           std::to_string(input.width));
    }
}

// ---- little-endian serialisation helpers ----

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::span<const std::uint8_t> take(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw CorruptWeights("weights stream truncated at byte " + std::to_string(pos_));
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32() {
        auto s = take(4);
        std::uint32_t v = 0;
        for (int b = 3; b >= 0; --b) v = (v << 8) | s[b];
        return v;
    }
    double f64() {
        auto s = take(8);
        std::uint64_t v = 0;
        for (int b = 7; b >= 0; --b) v = (v << 8) | s[b];
        return std::bit_cast<double>(v);
    }
    bool at_end() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

EdgeNet EdgeNet::zeros() {
    EdgeNet net;
    for (int l = 0; l < kEdgeNetLayers; ++l) {
        const auto& a = kArchitecture[l];
        net.layers[l] = ConvLayer(a[0], a[1], a[2]);
    }
    return net;
}

EdgeNet EdgeNet::initialized(std::uint64_t seed) {
    EdgeNet net = zeros();
    std::mt19937_64 rng(seed);
    for (auto& layer : net.layers) {
        const double k2 = double(layer.kernel_size) * layer.kernel_size;
        const double limit = std::sqrt(6.0 / (layer.in_channels * k2 + layer.out_channels * k2));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (double& w : layer.kernel) w = dist(rng);
    }
    return net;
}

std::size_t EdgeNet::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.kernel.size() + l.bias.size();
    return n;
}

namespace {
// Rows of `window` sit at full-frame rows y_offset.. of a frame that is
// full_height tall and window.width() wide.
Tensor3 rgbxy_from(const ImageFrame& window, int src_row, int rows, int y_offset, int full_height,
                   const ChannelNorm& norm) {
    for (int c = 0; c < 3; ++c) {
        if (!(norm.stddev[c] > 0.0)) throw ConfigError("channel standard deviation must be > 0");
    }
    const int w = window.width();
    const double x_den = w > 1 ? double(w - 1) : 1.0;
    const double y_den = full_height > 1 ? double(full_height - 1) : 1.0;
    Tensor3 t(kEdgeNetInputChannels, rows, w);
    for (int r = 0; r < rows; ++r) {
        const int y = y_offset + r;
        const auto* px = window.row(src_row + r);
        const double ycoord = y / y_den - 0.5;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) t.at(c, r, x) = (px[3 * x + c] - norm.mean[c]) / norm.stddev[c];
            t.at(3, r, x) = x / x_den - 0.5;
            t.at(4, r, x) = ycoord;
        }
    }
    return t;
}
} // namespace

Tensor3 make_rgbxy_rows(const ImageFrame& frame, int first_row, int rows, const ChannelNorm& norm) {
    if (first_row < 0 || rows <= 0 || first_row + rows > frame.height()) {
        throw InvalidInput("RGBXY row range outside frame");
    }
    return rgbxy_from(frame, first_row, rows, first_row, frame.height(), norm);
}

Tensor3 make_rgbxy_window(const ImageFrame& window, int y_offset, int full_height, const ChannelNorm& norm) {
    if (y_offset < 0 || y_offset + window.height() > full_height) {
        throw InvalidInput("RGBXY window outside frame");
    }
    return rgbxy_from(window, 0, window.height(), y_offset, full_height, norm);
}

Tensor3 make_rgbxy(const ImageFrame& frame, const ChannelNorm& norm) {
    return make_rgbxy_rows(frame, 0, frame.height(), norm);
}

Tensor3 forward_logits(const EdgeNet& net, const Tensor3& input, ForwardCache* cache) {
    check_input(input);
    Tensor3 current = input;
    for (int l = 0; l < kEdgeNetLayers; ++l) {
        const auto& layer = net.layers[l];
        const int shrink = layer.kernel_size - 1;
        Tensor3 out(layer.out_channels, current.height - shrink, current.width - shrink);
        conv_forward(layer, current, out);
        if (cache) cache->inputs[l] = std::move(current);
        if (l + 1 < kEdgeNetLayers) relu_inplace(out);
        current = std::move(out);
    }
    if (cache) cache->logits = current;
    return current;
}

Tensor3 forward(const EdgeNet& net, const Tensor3& input) {
    Tensor3 out = forward_logits(net, input);
    for (double& v : out.values) v = sigmoid(v);
    return out;
}

EdgeNetGradients EdgeNetGradients::zeros_like(const EdgeNet& net) {
    EdgeNetGradients g;
    for (int l = 0; l < kEdgeNetLayers; ++l) {
        const auto& s = net.layers[l];
        g.layers[l] = ConvLayer(s.out_channels, s.in_channels, s.kernel_size);
    }
    return g;
}

void EdgeNetGradients::add(const EdgeNetGradients& other) {
    for (int l = 0; l < kEdgeNetLayers; ++l) {
        auto& a = layers[l];
        const auto& b = other.layers[l];
        for (std::size_t n = 0; n < a.kernel.size(); ++n) a.kernel[n] += b.kernel[n];
        for (std::size_t n = 0; n < a.bias.size(); ++n) a.bias[n] += b.bias[n];
    }
}

void backward(const EdgeNet& net, const ForwardCache& cache, const Tensor3& grad_logits, EdgeNetGradients& grads) {
    Tensor3 grad = grad_logits;
    for (int l = kEdgeNetLayers - 1; l >= 0; --l) {
        const Tensor3& in = cache.inputs[l];
        if (l == 0) {
            conv_backward(net.layers[l], in, grad, grads.layers[l], nullptr);
            break;
        }
        Tensor3 grad_in(in.channels, in.height, in.width);
        conv_backward(net.layers[l], in, grad, grads.layers[l], &grad_in);
        // `in` is post-ReLU, so a zero entry means the ReLU was inactive.
        for (std::size_t n = 0; n < grad_in.values.size(); ++n) {
            if (in.values[n] <= 0.0) grad_in.values[n] = 0.0;
        }
        grad = std::move(grad_in);
    }
}

double soft_bce_with_logits(const Tensor3& logits, std::span<const double> targets, Tensor3* grad) {
    if (targets.size() != logits.values.size()) throw InvalidInput("target size does not match output size");
    if (grad) *grad = Tensor3(logits.channels, logits.height, logits.width);
    double loss = 0.0;
    for (std::size_t n = 0; n < targets.size(); ++n) {
        const double z = logits.values[n];
        const double t = targets[n];
        loss += softplus(z) - t * z;
        if (grad) grad->values[n] = sigmoid(z) - t;
    }
    return loss;
}

std::vector<std::uint8_t> save_weights(const EdgeNet& net) {
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    put_u32(out, kEdgeNetLayers);
    for (const auto& l : net.layers) {
        put_u32(out, l.out_channels);
        put_u32(out, l.in_channels);
        put_u32(out, l.kernel_size);
        put_u32(out, l.kernel_size);
        for (double w : l.kernel) put_f64(out, w);
        for (double b : l.bias) put_f64(out, b);
    }
    for (double m : net.norm.mean) put_f64(out, m);
    for (double s : net.norm.stddev) put_f64(out, s);
    return out;
}

EdgeNet load_weights(std::span<const std::uint8_t> bytes) {
    Reader rd(bytes);
    const auto magic = rd.take(sizeof kMagic);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) throw CorruptWeights("bad magic header");
    const auto count = rd.u32();
    if (count != kEdgeNetLayers) throw CorruptWeights("expected 4 layers, found " + std::to_string(count));

    EdgeNet net = EdgeNet::zeros();
    for (int l = 0; l < kEdgeNetLayers; ++l) {
        const auto out_ch = rd.u32(), in_ch = rd.u32(), kh = rd.u32(), kw = rd.u32();
        const auto& want = kArchitecture[l];
        if (out_ch != std::uint32_t(want[0]) || in_ch != std::uint32_t(want[1]) || kh != std::uint32_t(want[2]) ||
            kw != std::uint32_t(want[2])) {
            throw CorruptWeights("layer " + std::to_string(l) + " has shape [" + std::to_string(out_ch) + "," +
                                 std::to_string(in_ch) + "," + std::to_string(kh) + "," + std::to_string(kw) + "]");
        }
        auto& layer = net.layers[l];
        for (double& w : layer.kernel) w = rd.f64();
        for (double& b : layer.bias) b = rd.f64();
        for (double w : layer.kernel)
            if (!std::isfinite(w)) throw CorruptWeights("non-finite weight in layer " + std::to_string(l));
        for (double b : layer.bias)
            if (!std::isfinite(b)) throw CorruptWeights("non-finite bias in layer " + std::to_string(l));
    }
    for (double& m : net.norm.mean) m = rd.f64();
    for (double& s : net.norm.stddev) {
        s = rd.f64();
        if (!(s > 0.0) || !std::isfinite(s)) throw CorruptWeights("channel std must be positive");
    }
    if (!rd.at_end()) throw CorruptWeights("trailing bytes after weights");
    return net;
}

void save_weights_file(const EdgeNet& net, const std::string& path) {
    const auto bytes = save_weights(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write weights file '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing weights file '" + path + "'");
}

EdgeNet load_weights_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open weights file '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_weights(bytes);
}

StripScoreRow score_strip_learned(const EdgeNet& net, const ImageFrame& frame, int strip_row) {
    if (strip_row < kStripHalfHeight || strip_row > frame.height() - 1 - kStripHalfHeight) {
        throw InvalidInput("strip row outside [3, H-4]");
    }
    const Tensor3 input = make_rgbxy_rows(frame, strip_row - kStripHalfHeight, kStripPatchHeight, net.norm);
    const Tensor3 probs = forward(net, input);
    StripScoreRow row;
    row.scores.assign(frame.width(), 0.0);
    for (int x = 0; x < probs.width; ++x) row.scores[x + kStripHalfHeight] = probs.values[x];
    select_best(row, strip_row);
    return row;
}

} // namespace eca
