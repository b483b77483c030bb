#include "eca/dataset.hpp"

#include "eca/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eca {

std::optional<CropSample> crop_augment(const EcaAnnotation& annotation, const ImageFrame& frame) {
    if (!annotation.circle) return std::nullopt;
    const Circle& c = *annotation.circle;
    const int w = frame.width(), h = frame.height();

    // Half extents limited by the frame (pixel centres span [0, W-1]).
    const double dx = std::min(c.cx, w - 1 - c.cx);
    const double dy = std::min(c.cy, h - 1 - c.cy);
    if (dx < 0.0 || dy < 0.0) return std::nullopt;

    const double square = c.r / std::numbers::sqrt2;
    double ax = square, ay = square;
    if (dx < square && dy < square) {
        ax = dx;
        ay = dy;
    } else if (dx < square) {
        ax = dx;
        ay = std::min(dy, std::sqrt(c.r * c.r - dx * dx));
    } else if (dy < square) {
        ay = dy;
        ax = std::min(dx, std::sqrt(c.r * c.r - dy * dy));
    }

    int x0 = std::max(0, static_cast<int>(std::ceil(c.cx - ax)));
    int x1 = std::min(w - 1, static_cast<int>(std::floor(c.cx + ax)));
    int y0 = std::max(0, static_cast<int>(std::ceil(c.cy - ay)));
    int y1 = std::min(h - 1, static_cast<int>(std::floor(c.cy + ay)));

    // Rounding can leave a corner a hair outside the disk; pull it in.
    auto corners_inside = [&] {
        return circle_contains(c, x0, y0) && circle_contains(c, x1, y0) && circle_contains(c, x0, y1) &&
               circle_contains(c, x1, y1);
    };
    while (x0 <= x1 && y0 <= y1 && !corners_inside()) {
        const double ex = std::max(c.cx - x0, x1 - c.cx) / std::max(ax, 1e-12);
        const double ey = std::max(c.cy - y0, y1 - c.cy) / std::max(ay, 1e-12);
        if (ex >= ey) {
            if (c.cx - x0 > x1 - c.cx) ++x0; else --x1;
        } else {
            if (c.cy - y0 > y1 - c.cy) ++y0; else --y1;
        }
    }

    const int cw = x1 - x0 + 1, ch = y1 - y0 + 1;
    if (cw < 2 * kStripPatchHeight || ch < 2 * kStripPatchHeight) return std::nullopt;
    if (cw == w && ch == h) return std::nullopt;

    CropSample out;
    out.frame = frame.cropped(x0, y0, cw, ch);
    out.x0 = x0;
    out.y0 = y0;
    out.annotation = annotation;
    out.annotation.sample_id = annotation.sample_id + "_crop";
    out.annotation.circle.reset();
    const auto dot = annotation.image_path.rfind('.');
    const auto slash = annotation.image_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        out.annotation.image_path = annotation.image_path.substr(0, dot) + "_crop" + annotation.image_path.substr(dot);
    } else {
        out.annotation.image_path = annotation.image_path + "_crop";
    }
    return out;
}

std::vector<double> make_edge_target(const std::optional<Circle>& circle, FrameDims dims, const EdgeTargetOptions& opts) {
    if (dims.width <= 0 || dims.height <= 0) throw InvalidInput("edge target needs positive dimensions");
    if (!(opts.sigma > 0.0)) throw InvalidInput("edge target sigma must be > 0");
    const int w = dims.width, h = dims.height;
    std::vector<double> line(std::size_t(w) * h, 0.0);
    if (!circle) return line;

    // Unit line density along the arcs, bilinearly splatted.
    const Circle& c = *circle;
    const double circumference = 2.0 * std::numbers::pi * c.r;
    const auto steps = static_cast<long>(std::ceil(circumference / 0.25));
    const double seg = circumference / double(steps);
    for (long s = 0; s < steps; ++s) {
        const double t = 2.0 * std::numbers::pi * double(s) / double(steps);
        const double px = c.cx + c.r * std::cos(t);
        const double py = c.cy + c.r * std::sin(t);
        if (px < 0.0 || py < 0.0 || px > w - 1 || py > h - 1) continue;
        const int ix = std::min(static_cast<int>(px), w - 1);
        const int iy = std::min(static_cast<int>(py), h - 1);
        const double fx = px - ix, fy = py - iy;
        const int ix1 = std::min(ix + 1, w - 1), iy1 = std::min(iy + 1, h - 1);
        line[std::size_t(iy) * w + ix] += seg * (1 - fx) * (1 - fy);
        line[std::size_t(iy) * w + ix1] += seg * fx * (1 - fy);
        line[std::size_t(iy1) * w + ix] += seg * (1 - fx) * fy;
        line[std::size_t(iy1) * w + ix1] += seg * fx * fy;
    }

    const int radius = static_cast<int>(std::ceil(3.0 * opts.sigma));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * (k * k) / (opts.sigma * opts.sigma));
        ksum += kernel[k + radius];
    }
    for (double& k : kernel) k /= ksum;

    std::vector<double> tmp(line.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        const double* src = line.data() + std::size_t(y) * w;
        double* dst = tmp.data() + std::size_t(y) * w;
        for (int x = 0; x < w; ++x) {
            if (src[x] == 0.0) continue;
            const int lo = std::max(0, x - radius), hi = std::min(w - 1, x + radius);
            for (int xx = lo; xx <= hi; ++xx) dst[xx] += src[x] * kernel[xx - x + radius];
        }
    }
    std::fill(line.begin(), line.end(), 0.0);
    for (int y = 0; y < h; ++y) {
        const double* src = tmp.data() + std::size_t(y) * w;
        const int lo = std::max(0, y - radius), hi = std::min(h - 1, y + radius);
        for (int yy = lo; yy <= hi; ++yy) {
            const double k = kernel[yy - y + radius];
            double* dst = line.data() + std::size_t(yy) * w;
            for (int x = 0; x < w; ++x) dst[x] += k * src[x];
        }
    }

    if (opts.normalize_peak) {
        const double peak = *std::max_element(line.begin(), line.end());
        if (peak > 0.0) {
            for (double& v : line) v /= peak;
        }
    }
    return line;
}

} // namespace eca
