#include "eca/synthetic.hpp"

#include "eca/circle_fit.hpp"
#include "eca/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace eca {
namespace {

std::uint32_t mix32(std::uint32_t h) {
    h ^= h >> 16;
    h *= 0x85ebca6bU;
    h ^= h >> 13;
    h *= 0xc2b2ae35U;
    h ^= h >> 16;
    return h;
}

std::uint32_t hash4(std::uint64_t seed, std::int64_t x, std::int64_t y, std::uint32_t salt) {
    std::uint32_t h = mix32(static_cast<std::uint32_t>(seed) ^ mix32(static_cast<std::uint32_t>(seed >> 32) + salt));
    h = mix32(h ^ static_cast<std::uint32_t>(x) * 0x8da6b343U);
    h = mix32(h ^ static_cast<std::uint32_t>(y) * 0xd8163841U);
    return h;
}

// Bilinear lattice noise in [0, 255], integer arithmetic only.
int value_noise(std::uint64_t seed, int x, int y, int cell, std::uint32_t salt) {
    const int gx = x / cell, gy = y / cell;
    const std::int64_t fx = x % cell, fy = y % cell;
    const std::int64_t v00 = hash4(seed, gx, gy, salt) & 255;
    const std::int64_t v10 = hash4(seed, gx + 1, gy, salt) & 255;
    const std::int64_t v01 = hash4(seed, gx, gy + 1, salt) & 255;
    const std::int64_t v11 = hash4(seed, gx + 1, gy + 1, salt) & 255;
    const std::int64_t top = v00 * (cell - fx) + v10 * fx;
    const std::int64_t bot = v01 * (cell - fx) + v11 * fx;
    return static_cast<int>((top * (cell - fy) + bot * fy) / (std::int64_t(cell) * cell));
}

// Zero-mean approximately normal integer noise (Irwin-Hall of four bytes,
// std ~147.8), scaled by sigma given in thousandths.
int gaussian_noise(std::uint32_t h, std::int64_t sigma_milli) {
    const std::int64_t s = std::int64_t(h & 255) + ((h >> 8) & 255) + ((h >> 16) & 255) + ((h >> 24) & 255) - 510;
    return static_cast<int>(s * sigma_milli / 147800);
}

std::uint8_t clamp_u8(std::int64_t v) { return static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255)); }

constexpr std::array<std::int64_t, 3> kTissue{205, 98, 78};

void draw_overlay(ImageFrame& frame, const OverlayBox& box, std::uint64_t seed) {
    const int x_end = std::min(frame.width(), box.x + box.width);
    const int y_end = std::min(frame.height(), box.y + box.height);
    const int x_begin = std::max(0, box.x), y_begin = std::max(0, box.y);
    if (!box.text) {
        for (int y = y_begin; y < y_end; ++y)
            for (int x = x_begin; x < x_end; ++x) frame.set_pixel(x, y, box.color[0], box.color[1], box.color[2]);
        return;
    }
    // 5x7 glyphs in 6x9 cells, scaled to the box height.
    const int scale = std::max(1, box.height / 9);
    const int cell_w = 6 * scale;
    for (int y = y_begin; y < y_end; ++y) {
        const int gy = (y - box.y) / scale;
        if (gy < 1 || gy > 7) continue;
        for (int x = x_begin; x < x_end; ++x) {
            const int cell = (x - box.x) / cell_w;
            const int gx = ((x - box.x) % cell_w) / scale;
            if (gx > 4) continue;
            const std::uint64_t bits = (std::uint64_t(hash4(seed, cell, 0, 0x7e77u)) << 32) | hash4(seed, cell, 1, 0x7e77u);
            if ((bits >> ((gy - 1) * 5 + gx)) & 1) frame.set_pixel(x, y, box.color[0], box.color[1], box.color[2]);
        }
    }
}

} // namespace

const char* to_string(SyntheticCase c) {
    switch (c) {
    case SyntheticCase::Clean: return "clean";
    case SyntheticCase::DarkContent: return "dark_content";
    case SyntheticCase::Bleed: return "bleed";
    case SyntheticCase::Overlay: return "overlay";
    case SyntheticCase::CornerOnly: return "corner_only";
    case SyntheticCase::NoBorder: return "no_border";
    }
    return "unknown";
}

SyntheticSpec random_spec(SyntheticCase kind, FrameDims dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(kind) + 1);
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

    const double w = dims.width, h = dims.height;
    const double half_diag = 0.5 * std::hypot(w, h);
    const Point2 center = dims.center();

    SyntheticSpec spec;
    spec.dims = dims;
    spec.border_noise_sigma = uni(1.0, 5.0);

    auto place_circle = [&](double r_lo, double r_hi, double max_offset) {
        const double r = uni(r_lo, r_hi);
        const double off = uni(0.0, max_offset);
        const double ang = uni(0.0, 2.0 * std::numbers::pi);
        spec.circle = Circle{center.x + off * std::cos(ang), center.y + off * std::sin(ang), r};
    };
    const double clean_lo = 0.4 * std::min(w, h);
    const double clean_hi = 0.85 * half_diag;

    switch (kind) {
    case SyntheticCase::Clean:
        place_circle(clean_lo, clean_hi, 0.06 * w);
        break;
    case SyntheticCase::DarkContent:
        place_circle(clean_lo, clean_hi, 0.06 * w);
        spec.content_brightness = uni(0.2, 0.35);
        spec.border_noise_sigma = uni(1.0, 3.0);
        break;
    case SyntheticCase::Bleed: {
        place_circle(clean_lo, clean_hi, 0.06 * w);
        BleedArtifact b;
        b.angle_deg = uni(0.0, 360.0);
        b.half_width_deg = uni(15.0, 35.0);
        b.length_px = uni(0.02, 0.06) * w;
        b.strength = uni(0.5, 0.9);
        spec.bleed = b;
        break;
    }
    case SyntheticCase::Overlay: {
        place_circle(clean_lo, clean_hi, 0.06 * w);
        if (uni(0.0, 1.0) < 0.6) {
            OverlayBox feed;
            feed.width = static_cast<int>(uni(0.15, 0.25) * w);
            feed.height = static_cast<int>(uni(0.15, 0.25) * h);
            spec.overlays.push_back(feed);
        }
        OverlayBox text;
        text.text = true;
        text.color = {235, 235, 235};
        text.height = std::max(9, static_cast<int>(0.03 * h));
        text.width = static_cast<int>(uni(0.15, 0.3) * w);
        text.x = static_cast<int>(uni(0.02, 0.6) * w);
        text.y = uni(0.0, 1.0) < 0.5 ? static_cast<int>(0.02 * h) : static_cast<int>(h - 0.02 * h - text.height);
        spec.overlays.push_back(text);
        break;
    }
    case SyntheticCase::CornerOnly:
        place_circle(0.5 * std::max(w, h) + 0.03 * w, 0.93 * half_diag, 0.02 * w);
        break;
    case SyntheticCase::NoBorder:
        spec.circle.reset();
        break;
    }
    return spec;
}

SyntheticSample render_synthetic(const SyntheticSpec& spec, std::uint64_t seed, const std::string& sample_id) {
    const int w = spec.dims.width, h = spec.dims.height;
    if (w <= 0 || h <= 0) throw InvalidInput("synthetic frame dimensions must be positive");
    if (spec.circle && !spec.circle->valid()) throw InvalidInput("synthetic circle must be valid");
    if (spec.circle && !spec.adversarial &&
        !passes_geometry_gates(*spec.circle, FitGeometry::for_frame(spec.dims), config_default())) {
        throw InvalidInput("synthetic circle violates the geometry gates; mark the spec adversarial");
    }

    ImageFrame frame(w, h);
    const std::int64_t sigma_milli = std::llround(std::max(0.0, spec.border_noise_sigma) * 1000.0);
    const std::int64_t bright256 = std::llround(std::max(0.0, spec.content_brightness) * 256.0);

    // Disk geometry in 1/256 px fixed point.
    std::int64_t cx = 0, cy = 0, r2 = 0;
    if (spec.circle) {
        cx = std::llround(spec.circle->cx * 256.0);
        cy = std::llround(spec.circle->cy * 256.0);
        const std::int64_t r = std::llround(spec.circle->r * 256.0);
        r2 = r * r;
    } else {
        cx = std::int64_t(w - 1) * 128;
        cy = std::int64_t(h - 1) * 128;
        const std::int64_t hx = std::int64_t(w) * 128, hy = std::int64_t(h) * 128;
        r2 = hx * hx + hy * hy;
    }
    const int coarse = std::max(8, w / 10);
    const int fine = std::max(4, w / 40);

    double bleed_ux = 0, bleed_uy = 0, bleed_cos = 1;
    if (spec.bleed) {
        const double a = spec.bleed->angle_deg * std::numbers::pi / 180.0;
        bleed_ux = std::cos(a);
        bleed_uy = std::sin(a);
        bleed_cos = std::cos(spec.bleed->half_width_deg * std::numbers::pi / 180.0);
    }

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int64_t dx = std::int64_t(x) * 256 - cx;
            const std::int64_t dy = std::int64_t(y) * 256 - cy;
            const std::int64_t d2 = dx * dx + dy * dy;
            std::array<std::int64_t, 3> px{0, 0, 0};
            if (!spec.circle || d2 <= r2) {
                const int t = (2 * value_noise(seed, x, y, coarse, 1) + value_noise(seed, x, y, fine, 2)) / 3;
                const std::int64_t shade = 96 + t * 5 / 8;
                const std::int64_t vignette = 256 - (90 * d2) / r2;
                for (int c = 0; c < 3; ++c) {
                    const int grain = static_cast<int>(hash4(seed, x, y, 10 + c) & 7) - 3;
                    px[c] = kTissue[c] * shade / 256 * vignette / 256 * bright256 / 256 + grain;
                }
            } else {
                for (int c = 0; c < 3; ++c) {
                    px[c] = std::abs(gaussian_noise(hash4(seed, x, y, 20 + c), sigma_milli));
                }
                if (spec.bleed) {
                    const double d = std::sqrt(double(d2)) / 256.0;
                    const double excess = d - spec.circle->r;
                    const double cosang = (double(dx) * bleed_ux + double(dy) * bleed_uy) / (256.0 * d);
                    if (excess < spec.bleed->length_px && cosang > bleed_cos) {
                        const double angular = (cosang - bleed_cos) / (1.0 - bleed_cos);
                        const double radial = 1.0 - excess / spec.bleed->length_px;
                        const double level = spec.bleed->strength * angular * radial * (bright256 / 256.0);
                        for (int c = 0; c < 3; ++c) px[c] += std::llround(level * double(kTissue[c]) * 1.1);
                    }
                }
            }
            frame.set_pixel(x, y, clamp_u8(px[0]), clamp_u8(px[1]), clamp_u8(px[2]));
        }
    }
    for (std::size_t i = 0; i < spec.overlays.size(); ++i) draw_overlay(frame, spec.overlays[i], seed + i);

    SyntheticSample out{std::move(frame), {}};
    out.annotation.sample_id = sample_id;
    out.annotation.source = DataSource::Synthetic;
    out.annotation.circle = spec.circle;
    out.annotation.image_path = sample_id + ".png";
    return out;
}

std::uint64_t frame_hash(const ImageFrame& frame) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint8_t b) {
        h ^= b;
        h *= 0x100000001b3ULL;
    };
    for (int v : {frame.width(), frame.height()})
        for (int b = 0; b < 4; ++b) feed(static_cast<std::uint8_t>(v >> (8 * b)));
    for (auto b : frame.data()) feed(b);
    return h;
}

} // namespace eca
