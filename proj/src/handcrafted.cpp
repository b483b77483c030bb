#include "eca/handcrafted.hpp"

#include "eca/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eca {

std::vector<double> intensity_rows(const StripWindow& window) {
    std::vector<double> gray(std::size_t(kStripPatchHeight) * window.width);
    for (int r = 0; r < kStripPatchHeight; ++r) {
        const auto* px = window.row(r);
        double* out = gray.data() + std::size_t(r) * window.width;
        for (int x = 0; x < window.width; ++x) out[x] = intensity(px[3 * x], px[3 * x + 1], px[3 * x + 2]);
    }
    return gray;
}

Point2 sobel_gradient(std::span<const double> gray, int width, int x) {
    if (x < 1 || x > width - 2) throw InvalidInput("sobel column outside [1, W-2]");
    const double* up = gray.data() + std::size_t(kStripHalfHeight - 1) * width;
    const double* mid = up + width;
    const double* dn = mid + width;
    const double gx = (up[x + 1] - up[x - 1]) + 2.0 * (mid[x + 1] - mid[x - 1]) + (dn[x + 1] - dn[x - 1]);
    // Outer pair summed first so the result is exact under mirroring.
    const double gy = ((dn[x - 1] + dn[x + 1]) + 2.0 * dn[x]) - ((up[x - 1] + up[x + 1]) + 2.0 * up[x]);
    return {gx, gy};
}

double angle_between_deg(Point2 a, Point2 b) {
    if (a.x == 0.0 && a.y == 0.0) return 180.0;
    if (b.x == 0.0 && b.y == 0.0) return 0.0;
    const double cross = a.x * b.y - a.y * b.x;
    const double dot = a.x * b.x + a.y * b.y;
    return std::atan2(std::abs(cross), dot) * (180.0 / std::numbers::pi);
}

namespace {

// 1 - tanh(x) without the cancellation of the direct form for large x.
double one_minus_tanh(double x) { return x > 0.0 ? 2.0 / (1.0 + std::exp(2.0 * x)) : 1.0 - std::tanh(x); }

} // namespace

double score_pixel(Point2 g, Point2 toward_center, double iota, const EcaConfig& cfg) {
    const double mag = std::hypot(g.x, g.y);
    const double theta = angle_between_deg(g, toward_center);
    const double s_g = std::tanh(mag / cfg.t_g);
    const double s_theta = one_minus_tanh(theta / cfg.t_theta);
    const double s_iota = one_minus_tanh(iota / cfg.t_iota);
    return s_g * s_theta * s_iota;
}

std::vector<double> preceding_max(std::span<const double> row, Side side) {
    const std::size_t n = row.size();
    std::vector<double> out(n, 0.0);
    double running = 0.0;
    if (side == Side::Left) {
        for (std::size_t x = 0; x < n; ++x) {
            out[x] = running;
            running = std::max(running, row[x]);
        }
    } else {
        for (std::size_t i = n; i-- > 0;) {
            out[i] = running;
            running = std::max(running, row[i]);
        }
    }
    return out;
}

void select_best(StripScoreRow& row, int strip_row) {
    const int width = static_cast<int>(row.scores.size());
    const int half = width / 2;
    int best_left = 0;
    for (int x = 1; x < half; ++x) {
        if (row.scores[x] > row.scores[best_left]) best_left = x;
    }
    int best_right = width - 1;
    for (int x = width - 2; x >= half; --x) {
        if (row.scores[x] > row.scores[best_right]) best_right = x;
    }
    row.left_best = {best_left, strip_row, row.scores[best_left], Side::Left};
    row.right_best = {best_right, strip_row, row.scores[best_right], Side::Right};
}

StripScoreRow score_strip(const StripWindow& window, FrameDims frame, const EcaConfig& cfg) {
    const int width = window.width;
    const auto gray = intensity_rows(window);
    const std::span<const double> center_row(gray.data() + std::size_t(kStripHalfHeight) * width, width);
    const auto iota_left = preceding_max(center_row, Side::Left);
    const auto iota_right = preceding_max(center_row, Side::Right);

    const Point2 center = frame.center();
    const double dy = center.y - window.center_row;
    const int half = width / 2;

    StripScoreRow out;
    out.scores.assign(width, 0.0);
    for (int x = 1; x < width - 1; ++x) {
        const Point2 g = sobel_gradient(gray, width, x);
        const Point2 toward{center.x - x, dy};
        const double iota = x < half ? iota_left[x] : iota_right[x];
        out.scores[x] = score_pixel(g, toward, iota, cfg);
    }
    select_best(out, window.center_row);
    return out;
}

} // namespace eca
