#include "unitfold/oracles.hpp"

#include "unitfold/ratio.hpp"

#include <cmath>
#include <stdexcept>

namespace unitfold {

namespace {

// Half-width of {u : fold(u) < x} around 1/2, i.e. the positive root of
// fold(1/2 + w/2) = x.
double fold_halfwidth(const UnitDistSpec& spec, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (spec.family == Family::W) return std::exp(0.5 * std::log(x) / spec.r.r);
    return std::sqrt(-std::expm1(std::log1p(-x) / spec.r.r));
}

// 1 - fold_halfwidth computed without cancellation.
double fold_halfwidth_complement(const UnitDistSpec& spec, double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    if (spec.family == Family::W) return -std::expm1(0.5 * std::log(x) / spec.r.r);
    const double a = std::log1p(-x) / spec.r.r;
    const double t = -std::expm1(a);
    return std::exp(a) / (1.0 + std::sqrt(t));
}

double tightened(double v, double factor, double floor_) {
    return std::max(v * factor, floor_);
}

}  // namespace

double interval_prob(const UnitDistSpec& spec, double a, double b, const QuadConfig& q) {
    spec.validate();
    q.validate();
    const double lo = std::max(a, 0.0);
    const double hi = std::min(b, 1.0);
    if (!(lo < hi)) return 0.0;
    const double qa = fold_halfwidth(spec, lo);
    const double qb = fold_halfwidth(spec, hi);
    auto f = [&](double v) { return ratio_pdf(v, spec.params); };

    const double l1 = 0.5 * (1.0 - qb), h1 = 0.5 * (1.0 - qa);
    const double l2 = 0.5 * (1.0 + qa), h2 = 0.5 * (1.0 + qb);
    QuadConfig half = q;
    half.abs_tol = 0.5 * q.abs_tol;
    double total = 0.0;
    if (l1 < h1)
        total += integrate_graded(f, l1, h1, l1 == 0.0 ? spec.params.alpha1 : 1.0, 1.0, half);
    if (l2 < h2) {
        if (h2 == 1.0) {
            // Mirror the upper branch into distance-to-1 coordinates so the
            // grading can approach the endpoint at full precision.
            auto fc = [&](double e) { return ratio_pdf_complement(e, spec.params); };
            total += integrate_graded(fc, 0.0, 0.5 * fold_halfwidth_complement(spec, lo),
                                      spec.params.alpha2, 1.0, half);
        } else {
            total += integrate_graded(f, l2, h2, 1.0, 1.0, half);
        }
    }
    return total;
}

Functional Functional::mean() { return raw_moment(1); }

Functional Functional::raw_moment(int n) {
    if (n < 1) throw std::domain_error("Functional::raw_moment requires n >= 1");
    Functional f;
    if (n == 1) {
        f.h = [](double u) { return u; };
    } else {
        f.h = [n](double u) { return std::pow(u, n); };
    }
    return f;
}

Functional Functional::interval(double a, double b) {
    if (!(a < b)) throw std::domain_error("Functional::interval requires a < b");
    Functional f;
    f.h = [a, b](double u) { return (u > a && u <= b) ? 1.0 : 0.0; };
    return f;
}

McEstimate mc_estimate(const UnitDistSpec& spec, const Functional& f, std::size_t n,
                       std::uint64_t seed, const QuadConfig&) {
    spec.validate();
    if (n < 1000) throw std::domain_error("mc_estimate requires n >= 1000");
    if (!f.h) throw std::invalid_argument("mc_estimate: functional has no evaluator");
    const SampleBatch batch = sample(spec, n, seed);
    double mean = 0.0;
    for (double u : batch.values) mean += f.h(u);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double u : batch.values) {
        const double dvi = f.h(u) - mean;
        ss += dvi * dvi;
    }
    McEstimate out;
    out.estimate = mean;
    out.std_error = std::sqrt(ss / (static_cast<double>(n) - 1.0) / static_cast<double>(n));
    out.n = n;
    return out;
}

double nested_quadrature_xi(double p, double alpha1, double alpha2, const QuadConfig& q) {
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw std::domain_error("nested_quadrature_xi: shape parameters must be positive");
    if (!(p > -1.0))
        throw std::domain_error("nested_quadrature_xi: requires p > -1");
    q.validate();
    const GammaRatioParams params{alpha1, alpha2, 1.0, 1.0};
    QuadConfig inner = q;
    inner.rel_tol = tightened(q.rel_tol, 1e-2, 1e-13);
    inner.abs_tol = tightened(q.abs_tol, 1e-2, 1e-280);
    auto density = [&](double v) { return ratio_pdf(v, params); };
    auto density_c = [&](double e) { return ratio_pdf_complement(e, params); };
    // With w = 1 - y the weight is (1-w)^p and the mass outside (1-y, y) is
    // the sum of the two tail integrals over (0, w), both anchored at an
    // exactly representable endpoint.
    auto outer = [&](double w) {
        const double tails = integrate_graded(density, 0.0, w, alpha1, 1.0, inner) +
                             integrate_graded(density_c, 0.0, w, alpha2, 1.0, inner);
        return std::exp(p * std::log1p(-w)) * tails;
    };
    return integrate_graded(outer, 0.0, 0.5, std::min(alpha1, alpha2) + 1.0, 1.0, q);
}

}  // namespace unitfold
