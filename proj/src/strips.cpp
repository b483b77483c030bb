#include "eca/strips.hpp"

#include "eca/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eca {

double strip_height_exact(int frame_height, int count, double alpha, int index) {
    const double offset = index - (count - 1) * 0.5;
    return frame_height / (1.0 + std::exp(-(alpha / count) * offset));
}

std::vector<int> strip_heights(int frame_height, int count, double alpha) {
    if (frame_height < 2 * kStripPatchHeight) {
        throw InvalidInput("frame height " + std::to_string(frame_height) + " cannot host a strip window");
    }
    if (count < 2) throw InvalidInput("strip count must be >= 2");
    if (!(alpha > 0)) throw InvalidInput("alpha must be > 0");

    const int lo = kStripHalfHeight;
    const int hi = frame_height - 1 - kStripHalfHeight;
    std::vector<int> rows;
    rows.reserve(count);
    for (int i = 0; i < count; ++i) {
        const int h = static_cast<int>(std::floor(strip_height_exact(frame_height, count, alpha, i) + 0.5));
        const int clamped = std::clamp(h, lo, hi);
        if (rows.empty() || rows.back() != clamped) rows.push_back(clamped);
    }
    return rows;
}

void extract_strip_into(const ImageFrame& frame, int center_row, StripWindow& out) {
    if (center_row < kStripHalfHeight || center_row > frame.height() - 1 - kStripHalfHeight) {
        throw InvalidInput("strip row " + std::to_string(center_row) + " outside [3, H-4] for H=" +
                           std::to_string(frame.height()));
    }
    out.center_row = center_row;
    out.width = frame.width();
    const std::size_t row_bytes = std::size_t(frame.width()) * 3;
    out.rgb.resize(row_bytes * kStripPatchHeight);
    const auto* first = frame.row(center_row - kStripHalfHeight);
    std::copy(first, first + row_bytes * kStripPatchHeight, out.rgb.begin());
}

StripWindow extract_strip(const ImageFrame& frame, int center_row) {
    StripWindow w;
    extract_strip_into(frame, center_row, w);
    return w;
}

std::vector<StripWindow> extract_strips(const ImageFrame& frame, const std::vector<int>& rows) {
    std::vector<StripWindow> out;
    out.reserve(rows.size());
    for (int r : rows) out.push_back(extract_strip(frame, r));
    return out;
}

} // namespace eca
