#include "eca/types.hpp"

#include "eca/error.hpp"

#include <cmath>
#include <string>

namespace eca {

ImageFrame::ImageFrame(int width, int height)
    : width_(width), height_(height), data_(std::size_t(width) * height * 3, 0) {
    if (width <= 0 || height <= 0) throw InvalidInput("frame dimensions must be positive");
}

ImageFrame::ImageFrame(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), data_(std::move(rgb)) {
    if (width <= 0 || height <= 0) throw InvalidInput("frame dimensions must be positive");
    if (data_.size() != std::size_t(width) * height * 3) {
        throw InvalidInput("frame data length " + std::to_string(data_.size()) + " != " +
                           std::to_string(width) + "x" + std::to_string(height) + "x3");
    }
}

ImageFrame ImageFrame::flipped_horizontally() const {
    ImageFrame out(width_, height_);
    for (int y = 0; y < height_; ++y) {
        const auto* src = row(y);
        auto* dst = out.row(y);
        for (int x = 0; x < width_; ++x) {
            const int m = width_ - 1 - x;
            dst[m * 3 + 0] = src[x * 3 + 0];
            dst[m * 3 + 1] = src[x * 3 + 1];
            dst[m * 3 + 2] = src[x * 3 + 2];
        }
    }
    return out;
}

ImageFrame ImageFrame::cropped(int x0, int y0, int w, int h) const {
    if (x0 < 0 || y0 < 0 || w <= 0 || h <= 0 || x0 + w > width_ || y0 + h > height_) {
        throw InvalidInput("crop rectangle outside frame");
    }
    ImageFrame out(w, h);
    for (int y = 0; y < h; ++y) {
        const auto* src = row(y0 + y) + x0 * 3;
        std::copy(src, src + w * 3, out.row(y));
    }
    return out;
}

void require_pipeline_frame(const ImageFrame& frame) {
    if (frame.width() < 8 || frame.height() < 2 * kStripPatchHeight) {
        throw InvalidInput("frame " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                           " too small: need width >= 8 and height >= " + std::to_string(2 * kStripPatchHeight));
    }
    if (frame.data().size() != std::size_t(frame.width()) * frame.height() * 3) {
        throw InvalidInput("frame data length inconsistent with dimensions");
    }
}

bool Circle::valid() const {
    return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(r) && r > 0.0;
}

bool circle_contains(const Circle& c, double x, double y) {
    const double dx = x - c.cx;
    const double dy = y - c.cy;
    return dx * dx + dy * dy <= c.r * c.r;
}

} // namespace eca
