#include "eca/evaluation.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

namespace eca {
namespace {

struct Rect {
    double x0, y0, x1, y1;
    bool contains(Point2 p, double eps = 1e-9) const {
        return p.x >= x0 - eps && p.x <= x1 + eps && p.y >= y0 - eps && p.y <= y1 + eps;
    }
};

Rect sensor_rect(FrameDims d) { return {-0.5, -0.5, d.width - 0.5, d.height - 0.5}; }

void sample_segment(Point2 a, Point2 b, double spacing, std::vector<Point2>& out) {
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int i = 0; i <= n; ++i) {
        const double t = double(i) / n;
        out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
}

void sample_arc(const Circle& c, double a0, double a1, double spacing, std::vector<Point2>& out) {
    const int n = std::max(1, static_cast<int>(std::ceil(c.r * (a1 - a0) / spacing)));
    for (int i = 0; i <= n; ++i) {
        const double t = a0 + (a1 - a0) * double(i) / n;
        out.push_back({c.cx + c.r * std::cos(t), c.cy + c.r * std::sin(t)});
    }
}

void sample_rectangle(const Rect& r, double spacing, std::vector<Point2>& out) {
    sample_segment({r.x0, r.y0}, {r.x1, r.y0}, spacing, out);
    sample_segment({r.x1, r.y0}, {r.x1, r.y1}, spacing, out);
    sample_segment({r.x1, r.y1}, {r.x0, r.y1}, spacing, out);
    sample_segment({r.x0, r.y1}, {r.x0, r.y0}, spacing, out);
}

// Uniform grid over a point set for exact nearest-neighbour queries.
class PointGrid {
public:
    explicit PointGrid(std::span<const Point2> pts) : pts_(pts) {
        min_x_ = min_y_ = std::numeric_limits<double>::infinity();
        double max_x = -min_x_, max_y = -min_y_;
        for (const auto& p : pts) {
            min_x_ = std::min(min_x_, p.x);
            min_y_ = std::min(min_y_, p.y);
            max_x = std::max(max_x, p.x);
            max_y = std::max(max_y, p.y);
        }
        const double span_x = max_x - min_x_, span_y = max_y - min_y_;
        // About two points per occupied cell along a curve.
        cell_ = std::max({2.0, (span_x + span_y) / std::max<double>(1.0, double(pts.size())) * 4.0, 1e-6});
        nx_ = static_cast<int>(span_x / cell_) + 1;
        ny_ = static_cast<int>(span_y / cell_) + 1;
        start_.assign(std::size_t(nx_) * ny_ + 1, 0);
        for (const auto& p : pts) ++start_[index_of(p) + 1];
        for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
        items_.resize(pts.size());
        auto fill = start_;
        for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[index_of(pts[i])]++] = static_cast<int>(i);
    }

    double nearest_sq(Point2 q) const {
        const int qi = std::clamp(static_cast<int>(std::floor((q.x - min_x_) / cell_)), 0, nx_ - 1);
        const int qj = std::clamp(static_cast<int>(std::floor((q.y - min_y_) / cell_)), 0, ny_ - 1);
        double best = std::numeric_limits<double>::infinity();
        const int max_ring = std::max(nx_, ny_);
        for (int k = 0; k <= max_ring; ++k) {
            // Every point in ring k+1 or beyond is at least k cells away.
            if (k > 0 && double(k - 1) * cell_ * double(k - 1) * cell_ > best) break;
            for (int j = qj - k; j <= qj + k; ++j) {
                if (j < 0 || j >= ny_) continue;
                const bool edge_row = (j == qj - k || j == qj + k);
                const int step = edge_row ? 1 : 2 * k;
                for (int i = qi - k; i <= qi + k; i += std::max(step, 1)) {
                    if (i < 0 || i >= nx_) continue;
                    const std::size_t cell = std::size_t(j) * nx_ + i;
                    for (int n = start_[cell]; n < start_[cell + 1]; ++n) {
                        const Point2& p = pts_[items_[n]];
                        const double d = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
                        best = std::min(best, d);
                    }
                }
            }
        }
        return best;
    }

private:
    std::size_t index_of(Point2 p) const {
        const int i = std::clamp(static_cast<int>((p.x - min_x_) / cell_), 0, nx_ - 1);
        const int j = std::clamp(static_cast<int>((p.y - min_y_) / cell_), 0, ny_ - 1);
        return std::size_t(j) * nx_ + i;
    }

    std::span<const Point2> pts_;
    double min_x_, min_y_, cell_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<int> start_;
    std::vector<int> items_;
};

} // namespace

BoundarySamples boundary_points(const ContentArea& area, FrameDims dims, double spacing) {
    if (dims.width <= 0 || dims.height <= 0) throw InvalidInput("boundary needs positive frame dimensions");
    if (!(spacing > 0.0)) throw InvalidInput("boundary spacing must be > 0");
    const Rect rect = sensor_rect(dims);
    BoundarySamples out;

    const auto* circular = std::get_if<CircularArea>(&area);
    if (!circular) {
        sample_rectangle(rect, spacing, out.points);
        return out;
    }
    const Circle& c = circular->circle;
    if (!c.valid()) throw InvalidInput("boundary of an invalid circle");

    const bool covers_rect = circle_contains(c, rect.x0, rect.y0) && circle_contains(c, rect.x1, rect.y0) &&
                             circle_contains(c, rect.x0, rect.y1) && circle_contains(c, rect.x1, rect.y1);
    if (covers_rect) {
        sample_rectangle(rect, spacing, out.points);
        return out;
    }

    // Split the circle at its crossings with the rectangle's lines and keep
    // the arcs that lie inside.
    std::vector<double> cuts{0.0, 2.0 * std::numbers::pi};
    auto add_crossings = [&](double offset, bool vertical_line) {
        const double d = vertical_line ? offset - c.cx : offset - c.cy;
        if (std::abs(d) >= c.r) return;
        const double base = vertical_line ? std::acos(d / c.r) : std::asin(d / c.r);
        for (double t : vertical_line ? std::array<double, 2>{base, -base}
                                      : std::array<double, 2>{base, std::numbers::pi - base}) {
            t = std::fmod(t, 2.0 * std::numbers::pi);
            if (t < 0) t += 2.0 * std::numbers::pi;
            cuts.push_back(t);
        }
    };
    add_crossings(rect.x0, true);
    add_crossings(rect.x1, true);
    add_crossings(rect.y0, false);
    add_crossings(rect.y1, false);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a0 = cuts[i], a1 = cuts[i + 1];
        if (a1 - a0 < 1e-12) continue;
        const double mid = 0.5 * (a0 + a1);
        if (rect.contains({c.cx + c.r * std::cos(mid), c.cy + c.r * std::sin(mid)})) {
            sample_arc(c, a0, a1, spacing, out.points);
        }
    }

    // Rectangle edge pieces covered by the disk.
    auto edge_piece = [&](Point2 from, Point2 to, bool horizontal) {
        const double fixed = horizontal ? from.y : from.x;
        const double d = fixed - (horizontal ? c.cy : c.cx);
        if (std::abs(d) >= c.r) return;
        const double half = std::sqrt(c.r * c.r - d * d);
        const double centre = horizontal ? c.cx : c.cy;
        const double lo = std::max(std::min(horizontal ? from.x : from.y, horizontal ? to.x : to.y), centre - half);
        const double hi = std::min(std::max(horizontal ? from.x : from.y, horizontal ? to.x : to.y), centre + half);
        if (hi <= lo) return;
        if (horizontal) {
            sample_segment({lo, fixed}, {hi, fixed}, spacing, out.points);
        } else {
            sample_segment({fixed, lo}, {fixed, hi}, spacing, out.points);
        }
    };
    edge_piece({rect.x0, rect.y0}, {rect.x1, rect.y0}, true);
    edge_piece({rect.x0, rect.y1}, {rect.x1, rect.y1}, true);
    edge_piece({rect.x0, rect.y0}, {rect.x0, rect.y1}, false);
    edge_piece({rect.x1, rect.y0}, {rect.x1, rect.y1}, false);

    if (out.points.empty()) {
        // Disk and frame do not overlap; fall back to the circle itself.
        sample_arc(c, 0.0, 2.0 * std::numbers::pi, spacing, out.points);
    }
    return out;
}

double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) throw InvalidInput("Hausdorff distance of an empty point set");
    const PointGrid grid(b);
    double worst = 0.0;
    for (const auto& p : a) worst = std::max(worst, grid.nearest_sq(p));
    return std::sqrt(worst);
}

double hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double reference_diagonal() { return std::sqrt(1080.0 * 1080.0 + 1920.0 * 1920.0); }

double normalized_hausdorff(std::span<const Point2> a, std::span<const Point2> b, FrameDims dims) {
    const double diag = std::sqrt(double(dims.width) * dims.width + double(dims.height) * dims.height);
    if (!(diag > 0.0)) throw InvalidInput("normalised Hausdorff needs positive frame dimensions");
    return reference_diagonal() / diag * hausdorff(a, b);
}

double area_distance(const ContentArea& predicted, const ContentArea& truth, FrameDims dims) {
    const auto a = boundary_points(predicted, dims);
    const auto b = boundary_points(truth, dims);
    return normalized_hausdorff(a.points, b.points, dims);
}

const char* to_string(HitClass c) {
    switch (c) {
    case HitClass::Hit: return "hit";
    case HitClass::Miss: return "miss";
    case HitClass::BadMiss: return "bad_miss";
    }
    return "hit";
}

HitClass classify_distance(double nh) {
    if (nh > kBadMissThresholdPx) return HitClass::BadMiss;
    if (nh > kMissThresholdPx) return HitClass::Miss;
    return HitClass::Hit;
}

namespace {
std::string join(const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id;
    return s;
}
} // namespace

SampleMismatch::SampleMismatch(std::vector<std::string> missing, std::vector<std::string> unknown)
    : InvalidInput("prediction/truth id mismatch; missing predictions: [" + join(missing) +
                   "], unknown predictions: [" + join(unknown) + "]"),
      missing_predictions(std::move(missing)), unknown_predictions(std::move(unknown)) {}

EvalReport evaluate_dataset(const std::vector<PredictionRecord>& predictions, const std::vector<TruthRecord>& truths) {
    std::map<std::string, const PredictionRecord*> by_id;
    std::vector<std::string> unknown;
    for (const auto& p : predictions) by_id[p.sample_id] = &p;
    std::map<std::string, bool> truth_ids;
    for (const auto& t : truths) truth_ids[t.sample_id] = true;
    for (const auto& p : predictions)
        if (!truth_ids.count(p.sample_id)) unknown.push_back(p.sample_id);
    std::vector<std::string> missing;
    for (const auto& t : truths)
        if (!by_id.count(t.sample_id)) missing.push_back(t.sample_id);
    if (!missing.empty() || !unknown.empty()) throw SampleMismatch(std::move(missing), std::move(unknown));

    EvalReport report;
    std::size_t misses = 0, bad = 0;
    double sum = 0.0;
    for (const auto& t : truths) {
        const double nh = area_distance(by_id.at(t.sample_id)->area, t.area, t.dims);
        const HitClass cls = classify_distance(nh);
        report.per_sample.push_back({t.sample_id, nh, cls});
        sum += nh;
        if (nh > kMissThresholdPx) ++misses;
        if (nh > kBadMissThresholdPx) ++bad;
    }
    if (!truths.empty()) {
        const double n = double(truths.size());
        report.avg_error_px = sum / n;
        report.miss_pct = 100.0 * double(misses) / n;
        report.bad_miss_pct = 100.0 * double(bad) / n;
    }
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["count"] = per_sample.size();
    j["avg_error_px"] = avg_error_px;
    j["miss_pct"] = miss_pct;
    j["bad_miss_pct"] = bad_miss_pct;
    j["miss_threshold_px"] = kMissThresholdPx;
    j["bad_miss_threshold_px"] = kBadMissThresholdPx;
    auto& rows = j["samples"] = nlohmann::json::array();
    for (const auto& s : per_sample) {
        rows.push_back({{"id", s.sample_id}, {"nh_px", s.distance}, {"class", to_string(s.cls)}});
    }
    return j.dump(2);
}

std::string EvalReport::to_markdown(const std::string& label) const {
    char row[256];
    std::snprintf(row, sizeof row, "| %s | %.2f | %.1f | %.1f |\n", label.c_str(), avg_error_px, miss_pct,
                  bad_miss_pct);
    return std::string("| Method | Avg. err. (px) | Miss (%) | Bad Miss (%) |\n"
                       "|---|---|---|---|\n") +
           row;
}

} // namespace eca
