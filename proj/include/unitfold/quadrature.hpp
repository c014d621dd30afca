#pragma once

#include "unitfold/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace unitfold {

struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdiv = 200;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0) || !(abs_tol > 0.0 && abs_tol < 1.0))
            throw std::invalid_argument("QuadConfig: tolerances must lie strictly inside (0, 1)");
        if (max_subdiv < 10)
            throw std::invalid_argument("QuadConfig: max_subdiv must be at least 10");
    }
};

namespace qk {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15 abscissae).
// Odd-index nodes are the Gauss-7 points; the rule never samples interval endpoints.
inline constexpr double nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double wk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

template <class F>
inline void rule15(F& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = wk[7] * fc;
    double resg = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * nodes[i];
        const double f1 = f(c - dx), f2 = f(c + dx);
        resk += wk[i] * (f1 + f2);
        if (i % 2 == 1) resg += wg[i / 2] * (f1 + f2);
    }
    value = resk * h;
    error = std::fabs((resk - resg) * h);
    if (!std::isfinite(value))
        throw QuadratureError("quadrature panel produced a non-finite value", error, value);
}

}  // namespace qk

// Globally adaptive bisection on the worst panel until the summed error estimate
// meets max(abs_tol, rel_tol * |integral|) or the panel budget is exhausted.
template <class F>
double integrate(F&& f, double a, double b, const QuadConfig& cfg = {}) {
    cfg.validate();
    if (a == b) return 0.0;
    if (!(a < b)) throw std::invalid_argument("integrate: requires a <= b");

    struct Seg {
        double a, b, v, e;
    };
    std::vector<Seg> segs;
    segs.reserve(64);
    {
        double v0, e0;
        qk::rule15(f, a, b, v0, e0);
        segs.push_back({a, b, v0, e0});
    }
    for (;;) {
        double tot = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            tot += segs[i].v;
            err += segs[i].e;
            if (segs[i].e > segs[worst].e) worst = i;
        }
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(tot));
        if (err <= tol) return tot;
        if (static_cast<int>(segs.size()) >= cfg.max_subdiv) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "adaptive quadrature stopped at %d panels; achieved error estimate %.3e "
                          "exceeds tolerance %.3e",
                          cfg.max_subdiv, err, tol);
            throw QuadratureError(msg, err, tot);
        }
        const Seg s = segs[worst];
        const double m = 0.5 * (s.a + s.b);
        if (!(s.a < m && m < s.b))
            throw QuadratureError("quadrature panel narrowed below floating point resolution",
                                  err, tot);
        double v1, e1, v2, e2;
        qk::rule15(f, s.a, m, v1, e1);
        qk::rule15(f, m, s.b, v2, e2);
        segs[worst] = {s.a, m, v1, e1};
        segs.push_back({m, s.b, v2, e2});
    }
}

// Integrate f over (a, b) when f behaves like (x-a)^(pow_a - 1) near a and
// (b-x)^(pow_b - 1) near b.  A power substitution flattens each integrable
// endpoint singularity (powers >= 1 need no treatment and get none).
template <class F>
double integrate_graded(F&& f, double a, double b, double pow_a, double pow_b,
                        const QuadConfig& cfg = {}) {
    cfg.validate();
    if (a == b) return 0.0;
    if (!(a < b)) throw std::invalid_argument("integrate_graded: requires a <= b");
    if (!(pow_a > 0.0 && pow_b > 0.0))
        throw std::invalid_argument("integrate_graded: grading powers must be positive");

    const double m = 0.5 * (a + b);
    QuadConfig part = cfg;
    part.abs_tol = 0.5 * cfg.abs_tol;

    double left;
    if (pow_a < 1.0) {
        const double inv = 1.0 / pow_a, scale = m - a;
        left = integrate(
            [&](double t) {
                const double tp = std::pow(t, inv);
                double x = a + scale * tp;
                // Deep panels can underflow onto the endpoint; the integrand
                // owns only the open interval, so step one ulp inside.
                if (x <= a) x = std::nextafter(a, b);
                return f(x) * scale * inv * tp / t;
            },
            0.0, 1.0, part);
    } else {
        left = integrate(f, a, m, part);
    }

    double right;
    if (pow_b < 1.0) {
        const double inv = 1.0 / pow_b, scale = b - m;
        right = integrate(
            [&](double t) {
                const double tp = std::pow(t, inv);
                double x = b - scale * tp;
                if (x >= b) x = std::nextafter(b, a);
                return f(x) * scale * inv * tp / t;
            },
            0.0, 1.0, part);
    } else {
        right = integrate(f, m, b, part);
    }
    return left + right;
}

// Integrate f over (0, inf) via x = t/(1-t).  f may behave like x^(left_power-1)
// at 0+ and must decay at least like x^(-tail_power), tail_power > 1, at infinity.
template <class F>
double integrate_semi_infinite(F&& f, double left_power, double tail_power,
                               const QuadConfig& cfg = {}) {
    if (!(tail_power > 1.0))
        throw std::invalid_argument("integrate_semi_infinite: tail_power must exceed 1");
    return integrate_graded(
        [&](double t) {
            const double om = 1.0 - t;
            return f(t / om) / (om * om);
        },
        0.0, 1.0, left_power, tail_power - 1.0, cfg);
}

}  // namespace unitfold
