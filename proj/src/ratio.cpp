#include "unitfold/ratio.hpp"

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

// log of one addend of G: x^(a1-1) (1-x)^(a2-1) / D(x)^(a1+a2) with
// D(x) = x/lambda2 + (1-x)/lambda1; the caller supplies both halves of the
// pair and their logs so accuracy survives when either one is tiny.
double log_addend(double lx, double lxm, double x, double xm, const GammaRatioParams& p) {
    const double d = x / p.lambda2 + xm / p.lambda1;
    return (p.alpha1 - 1.0) * lx + (p.alpha2 - 1.0) * lxm -
           (p.alpha1 + p.alpha2) * std::log(d);
}

double checked_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
        throw std::domain_error(std::string("GammaRatioParams: ") + name +
                                " must be positive and finite");
    return v;
}

}  // namespace

void GammaRatioParams::validate() const {
    checked_positive(alpha1, "alpha1");
    checked_positive(alpha2, "alpha2");
    checked_positive(lambda1, "lambda1");
    checked_positive(lambda2, "lambda2");
}

void TransformPower::validate() const {
    if (!std::isfinite(r) || !(r > 0.0))
        throw std::domain_error("TransformPower: r must be positive and finite");
}

double s_transform(double x, TransformPower r) {
    require_unit_open(x, "s_transform");
    r.validate();
    const double d = 1.0 - 2.0 * x;
    if (d == 0.0) return 0.0;
    return std::pow(d * d, r.r);
}

double t_transform(double x, TransformPower r) {
    require_unit_open(x, "t_transform");
    r.validate();
    const double d = 1.0 - 2.0 * x;
    if (d == 0.0) return 0.0;
    // 1 - (1 - d^2)^r, kept accurate near both 0 and 1.
    return -std::expm1(r.r * std::log1p(-d * d));
}

double w_sub(double w, TransformPower r) {
    require_unit_open(w, "w_sub");
    r.validate();
    return 0.5 * (1.0 + std::pow(w, 0.5 / r.r));
}

double z_sub(double z, TransformPower r) {
    require_unit_open(z, "z_sub");
    r.validate();
    return 0.5 * (1.0 + std::sqrt(-std::expm1(std::log1p(-z) / r.r)));
}

double log_g_kernel_pair(double x, double xm, const GammaRatioParams& p) {
    if (!(x > 0.0) || !(xm > 0.0))
        throw std::domain_error("g_kernel: argument must lie strictly inside (0, 1)");
    // Take each log from the smaller partner so neither loses precision
    // when x sits within an ulp of 1.
    const double lx = x <= 0.5 ? std::log(x) : std::log1p(-xm);
    const double lxm = xm <= 0.5 ? std::log(xm) : std::log1p(-x);
    const double la = log_addend(lx, lxm, x, xm, p);
    const double lb = log_addend(lxm, lx, xm, x, p);
    const double m = std::max(la, lb);
    return m + std::log1p(std::exp(std::min(la, lb) - m));
}

double log_g_kernel(double x, const GammaRatioParams& p) {
    require_unit_open(x, "g_kernel");
    return log_g_kernel_pair(x, 1.0 - x, p);
}

double g_kernel(double x, const GammaRatioParams& p) {
    const double lg = log_g_kernel(x, p);
    if (lg > 709.0) return DBL_MAX;
    return std::exp(lg);
}

namespace {

double log_ratio_norm(const GammaRatioParams& p) {
    return p.alpha2 * std::log(p.lambda1) + p.alpha1 * std::log(p.lambda2) +
           specfun::log_beta(p.alpha1, p.alpha2);
}

}  // namespace

double log_ratio_pdf(double v, const GammaRatioParams& p) {
    p.validate();
    require_unit_open(v, "ratio_pdf");
    const double vm = 1.0 - v;
    const double lv = v <= 0.5 ? std::log(v) : std::log1p(-vm);
    return log_addend(lv, std::log(vm), v, vm, p) - log_ratio_norm(p);
}

double ratio_pdf(double v, const GammaRatioParams& p) {
    const double lp = log_ratio_pdf(v, p);
    if (lp > 709.0) return DBL_MAX;
    return std::exp(lp);
}

double ratio_pdf_complement(double eps, const GammaRatioParams& p) {
    p.validate();
    require_unit_open(eps, "ratio_pdf");
    const double v = 1.0 - eps;
    const double lp = log_addend(std::log1p(-eps), std::log(eps), v, eps, p) -
                      log_ratio_norm(p);
    if (lp > 709.0) return DBL_MAX;
    return std::exp(lp);
}

double ratio_cdf(double v, const GammaRatioParams& p, const QuadConfig& q) {
    p.validate();
    require_unit_open(v, "ratio_cdf");
    if (p.lambda1 == p.lambda2) return specfun::reg_inc_beta(v, p.alpha1, p.alpha2);
    double out;
    if (v <= 0.5) {
        auto f = [&](double u) { return ratio_pdf(u, p); };
        out = integrate_graded(f, 0.0, v, p.alpha1, 1.0, q);
    } else {
        // Integrate the upper tail in terms of the distance to 1; evaluating
        // the density at points formed as 1 - small would lose that distance.
        auto fc = [&](double e) { return ratio_pdf_complement(e, p); };
        out = 1.0 - integrate_graded(fc, 0.0, 1.0 - v, p.alpha2, 1.0, q);
    }
    return std::clamp(out, 0.0, 1.0);
}

}  // namespace unitfold
