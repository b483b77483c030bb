#pragma once

#include "eca/types.hpp"

#include <cstdint>
#include <vector>

namespace eca {

/// Real-valued sigmoid strip position for strip `index` of `count`:
/// H / (1 + exp(-(alpha/N) * (i - (N-1)/2))).
double strip_height_exact(int frame_height, int count, double alpha, int index);

/// Row indices of the strips, rounded half-up, clamped so a 7-row window
/// fits ([3, H-4]) and deduplicated. Strictly increasing.
/// Throws InvalidInput if H < 14, count < 2 or alpha <= 0.
std::vector<int> strip_heights(int frame_height, int count, double alpha);

/// Seven full-width rows of a frame centred on `center_row`, RGB interleaved.
struct StripWindow {
    int center_row = 0;
    int width = 0;
    std::vector<std::uint8_t> rgb; ///< kStripPatchHeight * width * 3 bytes

    const std::uint8_t* row(int r) const { return rgb.data() + std::size_t(r) * width * 3; }
    std::uint8_t at(int r, int x, int c) const { return row(r)[x * 3 + c]; }
};

/// Copies the window around one row. Requires 3 <= row <= H-4.
StripWindow extract_strip(const ImageFrame& frame, int center_row);
void extract_strip_into(const ImageFrame& frame, int center_row, StripWindow& out);

std::vector<StripWindow> extract_strips(const ImageFrame& frame, const std::vector<int>& rows);

} // namespace eca
