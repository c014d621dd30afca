#include "unitfold/dists.hpp"

#include "unitfold/errors.hpp"
#include "unitfold/rng.hpp"
#include "unitfold/specfun.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace unitfold {

namespace {

void require_unit_open(double x, const char* who) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error(std::string(who) + ": argument must lie strictly inside (0, 1)");
}

// The fold point saturates one ulp below 1 so downstream logs stay finite.
double clamp_branch(double y) { return std::min(y, 1.0 - DBL_EPSILON / 2); }

double log_prefactor(const UnitDistSpec& s) {
    const auto& p = s.params;
    return -std::log(4.0 * s.r.r) - p.alpha2 * std::log(p.lambda1) -
           p.alpha1 * std::log(p.lambda2) - specfun::log_beta(p.alpha1, p.alpha2);
}

// Shared density core taking both logs of the argument, so callers near
// either endpoint can pass the accurate one.  lu = log u, l1m = log(1-u).
double log_pdf_core(const UnitDistSpec& s, double lu, double l1m) {
    const double r = s.r.r;
    if (s.family == Family::W) {
        // ym = (1 - u^(1/2r))/2 via expm1 keeps relative accuracy when the
        // fold point sits next to 1.
        const double ym = -0.5 * std::expm1(0.5 * lu / r);
        const double y = 1.0 - ym;
        return log_prefactor(s) + (0.5 / r - 1.0) * lu +
               log_g_kernel_pair(y, ym, s.params);
    }
    const double a = l1m / r;
    const double t = -std::expm1(a);  // 1 - (1-u)^(1/r), accurate for small t
    const double v = std::exp(a);     // (1-u)^(1/r), accurate for small v
    const double ym = 0.5 * v / (1.0 + std::sqrt(t));
    const double y = 1.0 - ym;
    return log_prefactor(s) + (1.0 / r - 1.0) * l1m - 0.5 * std::log(t) +
           log_g_kernel_pair(y, ym, s.params);
}

}  // namespace

double log_pdf(const UnitDistSpec& s, double u) {
    s.validate();
    require_unit_open(u, "pdf");
    return log_pdf_core(s, std::log(u), std::log1p(-u));
}

double log_pdf_complement(const UnitDistSpec& s, double eps) {
    s.validate();
    require_unit_open(eps, "pdf");
    return log_pdf_core(s, std::log1p(-eps), std::log(eps));
}

double pdf(const UnitDistSpec& s, double u) {
    const double lp = log_pdf(s, u);
    if (lp > 709.0) return DBL_MAX;
    return std::exp(lp);
}

double pdf_complement(const UnitDistSpec& s, double eps) {
    const double lp = log_pdf_complement(s, eps);
    if (lp > 709.0) return DBL_MAX;
    return std::exp(lp);
}

double cdf(const UnitDistSpec& s, double u, const QuadConfig& q) {
    s.validate();
    require_unit_open(u, "cdf");
    const double y =
        clamp_branch(s.family == Family::W ? w_sub(u, s.r) : z_sub(u, s.r));
    const double hi = ratio_cdf(y, s.params, q);
    const double lo = ratio_cdf(1.0 - y, s.params, q);
    return std::clamp(hi - lo, 0.0, 1.0);
}

double quantile(const UnitDistSpec& s, double prob, const QuadConfig& q) {
    s.validate();
    require_unit_open(prob, "quantile: prob");
    double lo = 1e-12, hi = 1.0 - 1e-12;
    double flo = cdf(s, lo, q) - prob;
    if (flo >= 0.0) return lo;
    double fhi = cdf(s, hi, q) - prob;
    if (fhi <= 0.0) return hi;
    double best = 0.5, fbest = HUGE_VAL;
    for (int it = 0; it < 200; ++it) {
        double mid;
        // Secant candidate on even steps, guarded bisection otherwise.
        if (it % 2 == 0 && fhi != flo) {
            mid = lo - flo * (hi - lo) / (fhi - flo);
            const double margin = 1e-3 * (hi - lo);
            if (!std::isfinite(mid) || mid <= lo + margin || mid >= hi - margin)
                mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        const double f = cdf(s, mid, q) - prob;
        if (std::fabs(f) < fbest) {
            fbest = std::fabs(f);
            best = mid;
        }
        if (std::fabs(f) <= 1e-9) return mid;
        if (f < 0.0) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
            fhi = f;
        }
        if (hi - lo < 1e-15) return best;
    }
    throw RootBracketError("quantile: 200 iterations without meeting |cdf - prob| <= 1e-9", lo,
                           hi);
}

SampleBatch sample(const UnitDistSpec& s, std::size_t n, std::uint64_t seed) {
    s.validate();
    if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
    Rng rng(seed);
    SampleBatch out;
    out.seed = seed;
    out.spec = s;
    out.values.reserve(n);
    while (out.values.size() < n) {
        const double x = rng.gamma(s.params.alpha1, s.params.lambda1);
        const double y = rng.gamma(s.params.alpha2, s.params.lambda2);
        const double u = x / (x + y);
        if (!(u > 0.0 && u < 1.0)) continue;
        const double v =
            s.family == Family::W ? s_transform(u, s.r) : t_transform(u, s.r);
        if (v > 0.0 && v < 1.0) out.values.push_back(v);
    }
    return out;
}

std::pair<double, double> edge_powers(const UnitDistSpec& s) {
    const double amin = std::min(s.params.alpha1, s.params.alpha2);
    if (s.family == Family::W) return {0.5 / s.r.r, amin};
    return {0.5, amin / s.r.r};
}

double moment_numeric(const UnitDistSpec& s, int order, const QuadConfig& q) {
    s.validate();
    if (order < 0) throw std::invalid_argument("moment_numeric: order must be >= 0");
    const auto [p0, p1] = edge_powers(s);
    auto f = [&](double u) {
        const double w = order == 0 ? 1.0 : std::pow(u, static_cast<double>(order));
        return w * pdf(s, u);
    };
    // Upper half in terms of the distance to 1, so the grading substitution
    // can dig arbitrarily close to the endpoint without losing the density's
    // argument to rounding.
    auto fc = [&](double e) {
        const double om = 1.0 - e;
        const double w = order == 0 ? 1.0 : std::pow(om, static_cast<double>(order));
        return w * pdf_complement(s, e);
    };
    QuadConfig half = q;
    half.abs_tol = 0.5 * q.abs_tol;
    return integrate_graded(f, 0.0, 0.5, p0 + order, 1.0, half) +
           integrate_graded(fc, 0.0, 0.5, p1, 1.0, half);
}

}  // namespace unitfold
