#include "eca/circle_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <random>
#include <thread>

namespace eca {
namespace {

constexpr double kCollinearTolerance = 1e-9;
constexpr double kRankThreshold = 1e-10;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Point2 as_point(const EdgeCandidate& c) { return {double(c.x), double(c.y)}; }

std::vector<int> inliers_of(const Circle& circle, std::span<const EdgeCandidate> cands, double tol) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
        if (radial_distance(circle, as_point(cands[i])) <= tol) out.push_back(i);
    }
    return out;
}

double score_of(std::span<const int> idx, std::span<const EdgeCandidate> cands) {
    double s = 0.0;
    for (int i : idx) s += cands[i].score;
    return s;
}

// Samples three distinct indices from [0, n).
std::array<int, 3> sample_triplet(int n, std::uint64_t seed, int attempt) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(attempt))));
    int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
    int k = std::uniform_int_distribution<int>(0, n - 3)(rng);
    // Map j and k onto the indices not yet taken.
    if (j >= i) ++j;
    const int lo = std::min(i, j), hi = std::max(i, j);
    if (k >= lo) ++k;
    if (k >= hi) ++k;
    return {i, j, k};
}

FitResult reduce(std::span<const AttemptResult> attempts, const FitGeometry& geom, const EcaConfig& cfg) {
    const AttemptResult* best = nullptr;
    bool any_valid = false;
    for (const auto& a : attempts) {
        if (!a.valid) continue;
        any_valid = true;
        if (!passes_geometry_gates(a.circle, geom, cfg)) continue;
        if (best == nullptr || a.score > best->score) best = &a;
    }
    if (best == nullptr) {
        return RejectedFit{any_valid ? RejectReason::GeometryGate : RejectReason::LowScore};
    }
    if (best->score < cfg.circle_score_threshold()) return RejectedFit{RejectReason::LowScore};
    return AcceptedFit{best->circle, best->score, static_cast<int>(best->inliers.size())};
}

} // namespace

const char* to_string(RejectReason r) {
    switch (r) {
    case RejectReason::NoCandidates: return "no_candidates";
    case RejectReason::LowScore: return "low_score";
    case RejectReason::GeometryGate: return "geometry_gate";
    }
    return "unknown";
}

std::vector<EdgeCandidate> filter_candidates(std::span<const EdgeCandidate> cands, FrameDims frame,
                                             const EcaConfig& cfg) {
    std::vector<EdgeCandidate> out;
    out.reserve(cands.size());
    const double right = frame.width - 1;
    const double bottom = frame.height - 1;
    for (const auto& c : cands) {
        const double margin = std::min(std::min<double>(c.x, right - c.x), std::min<double>(c.y, bottom - c.y));
        if (margin < cfg.t_px) continue;
        if (c.score < cfg.t_ps) continue;
        out.push_back(c);
    }
    return out;
}

std::optional<Circle> circle_from_triplet(Point2 p1, Point2 p2, Point2 p3) {
    const Point2 m{(p1.x + p2.x + p3.x) / 3.0, (p1.y + p2.y + p3.y) / 3.0};
    double s = 0.0;
    for (const Point2& p : {p1, p2, p3}) s = std::max({s, std::abs(p.x - m.x), std::abs(p.y - m.y)});
    if (!(s > 0.0)) return std::nullopt;

    auto norm = [&](Point2 p) { return Point2{(p.x - m.x) / s, (p.y - m.y) / s}; };
    const Point2 q1 = norm(p1), q2 = norm(p2), q3 = norm(p3);
    const Point2 a{q2.x - q1.x, q2.y - q1.y};
    const Point2 b{q3.x - q1.x, q3.y - q1.y};
    const double cross = a.x * b.y - a.y * b.x;
    if (std::abs(cross) < kCollinearTolerance) return std::nullopt;

    const double aa = a.x * a.x + a.y * a.y;
    const double bb = b.x * b.x + b.y * b.y;
    const double ux = (b.y * aa - a.y * bb) / (2.0 * cross);
    const double uy = (a.x * bb - b.x * aa) / (2.0 * cross);
    Circle c{m.x + s * (q1.x + ux), m.y + s * (q1.y + uy), s * std::hypot(ux, uy)};
    if (!c.valid()) return std::nullopt;
    return c;
}

std::optional<Circle> least_squares_circle(std::span<const Point2> points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n < 3) return std::nullopt;

    Point2 m{};
    for (const auto& p : points) {
        m.x += p.x;
        m.y += p.y;
    }
    m.x /= double(n);
    m.y /= double(n);
    double spread = 0.0;
    for (const auto& p : points) spread += (p.x - m.x) * (p.x - m.x) + (p.y - m.y) * (p.y - m.y);
    const double s = std::sqrt(spread / double(n));
    if (!(s > 0.0)) return std::nullopt;

    // Normalised coordinates keep the system well conditioned for
    // image-scale inputs.
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = (points[i].x - m.x) / s;
        const double y = (points[i].y - m.y) / s;
        design(i, 0) = 2.0 * x;
        design(i, 1) = 2.0 * y;
        design(i, 2) = 1.0;
        rhs(i) = x * x + y * y;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < 3) return std::nullopt;
    const Eigen::Vector3d sol = qr.solve(rhs);

    const double r2 = sol(2) + sol(0) * sol(0) + sol(1) * sol(1);
    if (!(r2 > 0.0)) return std::nullopt;
    Circle c{m.x + s * sol(0), m.y + s * sol(1), s * std::sqrt(r2)};
    if (!c.valid()) return std::nullopt;
    return c;
}

double algebraic_residual(const Circle& c, std::span<const Point2> points) {
    double sum = 0.0;
    for (const auto& p : points) {
        const double e = (p.x - c.cx) * (p.x - c.cx) + (p.y - c.cy) * (p.y - c.cy) - c.r * c.r;
        sum += e * e;
    }
    return sum;
}

bool passes_geometry_gates(const Circle& c, const FitGeometry& geom, const EcaConfig& cfg) {
    if (!c.valid()) return false;
    if (c.r < cfg.r_min * geom.width || c.r > cfg.r_max * geom.width) return false;
    return std::hypot(c.cx - geom.center.x, c.cy - geom.center.y) <= cfg.d_max * geom.width;
}

AttemptResult run_attempt(std::span<const EdgeCandidate> cands, int i, int j, int k, const EcaConfig& cfg) {
    AttemptResult out;
    const auto seed = circle_from_triplet(as_point(cands[i]), as_point(cands[j]), as_point(cands[k]));
    if (!seed) return out;

    Circle circle = *seed;
    std::vector<int> inliers = inliers_of(circle, cands, cfg.t_ri);
    std::vector<Point2> pts;
    for (int it = 0; it < cfg.ransac_iterations; ++it) {
        pts.clear();
        for (int idx : inliers) pts.push_back(as_point(cands[idx]));
        const auto refit = least_squares_circle(pts);
        if (!refit) break;
        circle = *refit;
        auto next = inliers_of(circle, cands, cfg.t_ri);
        const bool fixed_point = next == inliers;
        inliers = std::move(next);
        if (fixed_point) break;
    }
    out.valid = true;
    out.circle = circle;
    out.score = score_of(inliers, cands);
    out.inliers = std::move(inliers);
    return out;
}

FitResult ransac_fit(std::span<const EdgeCandidate> cands, const FitGeometry& geom, const EcaConfig& cfg,
                     std::uint64_t seed, int threads) {
    const int n = static_cast<int>(cands.size());
    if (n < 3) return RejectedFit{RejectReason::NoCandidates};

    const int attempts = cfg.ransac_attempts;
    std::vector<AttemptResult> results(attempts);
    auto work = [&](int begin, int end) {
        for (int a = begin; a < end; ++a) {
            const auto t = sample_triplet(n, seed, a);
            results[a] = run_attempt(cands, t[0], t[1], t[2], cfg);
        }
    };
    threads = std::clamp(threads, 1, attempts);
    if (threads == 1) {
        work(0, attempts);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (attempts + threads - 1) / threads;
        for (int b = 0; b < attempts; b += chunk) pool.emplace_back(work, b, std::min(attempts, b + chunk));
    }
    return reduce(results, geom, cfg);
}

FitResult ransac_fit_exhaustive(std::span<const EdgeCandidate> cands, const FitGeometry& geom,
                                const EcaConfig& cfg) {
    const int n = static_cast<int>(cands.size());
    if (n < 3) return RejectedFit{RejectReason::NoCandidates};
    std::vector<AttemptResult> results;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) results.push_back(run_attempt(cands, i, j, k, cfg));
    return reduce(results, geom, cfg);
}

} // namespace eca
