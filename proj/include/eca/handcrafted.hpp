#pragma once

#include "eca/config.hpp"
#include "eca/strips.hpp"
#include "eca/types.hpp"

#include <span>
#include <vector>

namespace eca {

/// Per-column edge scores for the centre row of one strip, plus the best
/// pixel of each half. Left half is x < W/2, right half is x >= W/2.
struct StripScoreRow {
    std::vector<double> scores;
    EdgeCandidate left_best;
    EdgeCandidate right_best;
};

/// Unweighted RGB mean, row-major 7 x W.
std::vector<double> intensity_rows(const StripWindow& window);

inline double intensity(std::uint8_t r, std::uint8_t g, std::uint8_t b) { return (double(r) + g + b) / 3.0; }

/// 3x3 Sobel response at column x of the centre row of a 7 x W grayscale
/// window. gx is positive when intensity increases with x, gy when it
/// increases with y. Requires 1 <= x <= W-2.
Point2 sobel_gradient(std::span<const double> gray, int width, int x);

/// s = s_g * s_theta * s_iota with
///   s_g = tanh(|g| / t_g), s_theta = 1 - tanh(theta / t_theta),
///   s_iota = 1 - tanh(iota / t_iota),
/// theta the angle in degrees between g and `toward_center`. A zero
/// gradient gets theta = 180; a zero `toward_center` gets theta = 0.
double score_pixel(Point2 g, Point2 toward_center, double iota, const EcaConfig& cfg);

/// Angle in degrees between two vectors, in [0, 180]. A zero `a` gives
/// 180 and a zero `b` gives 0.
double angle_between_deg(Point2 a, Point2 b);

/// Running maximum of the values strictly before each index, scanning from
/// the left edge (Left) or from the right edge (Right). The first scanned
/// element receives 0.
std::vector<double> preceding_max(std::span<const double> row, Side side);

/// Best-left / best-right selection over a score row. Ties prefer the
/// outermost column (smallest x on the left, largest on the right).
void select_best(StripScoreRow& row, int strip_row);

/// Scores every interior column of the strip's centre row. Border columns
/// (x = 0, W-1) score 0.
StripScoreRow score_strip(const StripWindow& window, FrameDims frame, const EcaConfig& cfg);

} // namespace eca
