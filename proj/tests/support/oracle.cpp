#include "oracle.hpp"

#include <mpfr.h>

#include <algorithm>

namespace oracle {
namespace {

constexpr mpfr_prec_t kPrec = 256;

// Minimal RAII holder.
struct Mp {
    mpfr_t v;
    Mp() { mpfr_init2(v, kPrec); }
    explicit Mp(double d) : Mp() { mpfr_set_d(v, d, MPFR_RNDN); }
    Mp(const Mp& o) : Mp() { mpfr_set(v, o.v, MPFR_RNDN); }
    Mp& operator=(const Mp& o) {
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Mp() { mpfr_clear(v); }
    double get() const { return mpfr_get_d(v, MPFR_RNDN); }
};

Mp operator+(const Mp& a, const Mp& b) { Mp r; mpfr_add(r.v, a.v, b.v, MPFR_RNDN); return r; }
Mp operator-(const Mp& a, const Mp& b) { Mp r; mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); return r; }
Mp operator*(const Mp& a, const Mp& b) { Mp r; mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); return r; }
Mp operator/(const Mp& a, const Mp& b) { Mp r; mpfr_div(r.v, a.v, b.v, MPFR_RNDN); return r; }
Mp mp_tanh(const Mp& a) { Mp r; mpfr_tanh(r.v, a.v, MPFR_RNDN); return r; }
Mp mp_exp(const Mp& a) { Mp r; mpfr_exp(r.v, a.v, MPFR_RNDN); return r; }
// 1 - tanh(x) = 2 / (1 + exp(2x)), free of cancellation at any precision.
Mp mp_one_minus_tanh(const Mp& a) { return Mp(2.0) / (Mp(1.0) + mp_exp(Mp(2.0) * a)); }
Mp mp_sqrt(const Mp& a) { Mp r; mpfr_sqrt(r.v, a.v, MPFR_RNDN); return r; }
Mp mp_abs(const Mp& a) { Mp r; mpfr_abs(r.v, a.v, MPFR_RNDN); return r; }
bool operator<(const Mp& a, const Mp& b) { return mpfr_less_p(a.v, b.v); }

Mp pi() { Mp r; mpfr_const_pi(r.v, MPFR_RNDN); return r; }

Mp sq_dist(const eca::Point2& p, const eca::Point2& q) {
    const Mp dx = Mp(p.x) - Mp(q.x), dy = Mp(p.y) - Mp(q.y);
    return dx * dx + dy * dy;
}

Mp directed(const std::vector<eca::Point2>& a, const std::vector<eca::Point2>& b) {
    Mp worst(0.0);
    for (const auto& p : a) {
        Mp best = sq_dist(p, b.front());
        for (const auto& q : b) {
            const Mp d = sq_dist(p, q);
            if (d < best) best = d;
        }
        if (worst < best) worst = best;
    }
    return worst;
}

} // namespace

double strip_height(int frame_height, int count, double alpha, int index) {
    const Mp n(count), i(index), a(alpha), h(frame_height);
    const Mp mid = (n - Mp(1.0)) / Mp(2.0);
    Mp e = (Mp(0.0) - a / n) * (i - mid);
    mpfr_exp(e.v, e.v, MPFR_RNDN);
    return (h / (Mp(1.0) + e)).get();
}

double score_pixel(double gx, double gy, double vx, double vy, double iota, double t_g, double t_theta,
                   double t_iota) {
    const Mp g_mag = mp_sqrt(Mp(gx) * Mp(gx) + Mp(gy) * Mp(gy));
    Mp theta;
    if (gx == 0.0 && gy == 0.0) {
        theta = Mp(180.0);
    } else if (vx == 0.0 && vy == 0.0) {
        theta = Mp(0.0);
    } else {
        const Mp cross = mp_abs(Mp(gx) * Mp(vy) - Mp(gy) * Mp(vx));
        const Mp dot = Mp(gx) * Mp(vx) + Mp(gy) * Mp(vy);
        Mp rad;
        mpfr_atan2(rad.v, cross.v, dot.v, MPFR_RNDN);
        theta = rad * Mp(180.0) / pi();
    }
    const Mp s_g = mp_tanh(g_mag / Mp(t_g));
    const Mp s_t = mp_one_minus_tanh(theta / Mp(t_theta));
    const Mp s_i = mp_one_minus_tanh(Mp(iota) / Mp(t_iota));
    return (s_g * s_t * s_i).get();
}

double hausdorff(const std::vector<eca::Point2>& a, const std::vector<eca::Point2>& b) {
    const Mp ab = directed(a, b), ba = directed(b, a);
    return mp_sqrt(ab < ba ? ba : ab).get();
}

double normalized_hausdorff(const std::vector<eca::Point2>& a, const std::vector<eca::Point2>& b, int width,
                            int height) {
    const Mp ab = directed(a, b), ba = directed(b, a);
    const Mp h = mp_sqrt(ab < ba ? ba : ab);
    const Mp ref = mp_sqrt(Mp(1920.0) * Mp(1920.0) + Mp(1080.0) * Mp(1080.0));
    const Mp diag = mp_sqrt(Mp(width) * Mp(width) + Mp(height) * Mp(height));
    return (ref / diag * h).get();
}

double tanh(double x) { return mp_tanh(Mp(x)).get(); }

} // namespace oracle
