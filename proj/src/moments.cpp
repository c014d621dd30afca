#include "unitfold/moments.hpp"

#include "unitfold/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace unitfold {

namespace {

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

double log_choose(int n, int k) {
    return specfun::log_gamma(n + 1.0) - specfun::log_gamma(k + 1.0) -
           specfun::log_gamma(n - k + 1.0);
}

double log_multinomial(int n, int i, int j) {
    return specfun::log_gamma(n + 1.0) - specfun::log_gamma(i + 1.0) -
           specfun::log_gamma(j + 1.0) - specfun::log_gamma(n - i - j + 1.0);
}

void require_positive_shapes(double a1, double a2, const char* who) {
    if (!(a1 > 0.0) || !(a2 > 0.0))
        throw std::domain_error(std::string(who) + ": shape parameters must be positive");
}

void require_integer_order(int r, int n, const char* who) {
    if (r < 1) throw std::domain_error(std::string(who) + ": requires integer r >= 1");
    if (n < 1) throw std::domain_error(std::string(who) + ": requires integer n >= 1");
}

}  // namespace

LaplaceMoments laplace_moments(const GammaRatioParams& p, double x) {
    p.validate();
    if (!(x >= 0.0)) throw std::domain_error("laplace_moments: requires x >= 0");
    const double l1 = std::log(p.lambda1), l2 = std::log(p.lambda2);
    const double s1 = std::log(x + p.lambda1), s2 = std::log(x + p.lambda2);
    LaplaceMoments out;
    out.exp_x = std::exp(p.alpha1 * (l1 - s1));
    out.x_exp_x = p.alpha1 * std::exp(p.alpha1 * l1 - (p.alpha1 + 1.0) * s1);
    out.exp_y = std::exp(p.alpha2 * (l2 - s2));
    out.y_exp_y = p.alpha2 * std::exp(p.alpha2 * l2 - (p.alpha2 + 1.0) * s2);
    return out;
}

PartialLaplaceIntegrals partial_laplace_integrals(const GammaRatioParams& p, double x) {
    p.validate();
    if (!(x >= 0.0)) throw std::domain_error("partial_laplace_integrals: requires x >= 0");
    const double a1 = p.alpha1, a2 = p.alpha2, s = a1 + a2;
    const double big = 2.0 * x + p.lambda1 + p.lambda2;
    const double arg = (x + p.lambda2) / big;
    const double lpre = a1 * std::log(p.lambda1) + a2 * std::log(p.lambda2);
    PartialLaplaceIntegrals out;
    out.u_weighted = std::exp(lpre - specfun::log_beta(a1, a2 + 1.0) -
                              (s + 1.0) * std::log(big)) *
                     specfun::hyp2f1(s + 1.0, 1.0, a2 + 1.0, arg);
    out.v_weighted = std::exp(lpre - specfun::log_beta(a1, a2) - s * std::log(big)) /
                     (x + p.lambda2) * (specfun::hyp2f1(s, 1.0, a2 + 1.0, arg) - 1.0);
    return out;
}

double mean_w_half(const GammaRatioParams& p, const QuadConfig& q) {
    p.validate();
    const double ratio = p.lambda2 / p.lambda1;
    if (!(ratio > 1.0 / 3.0 && ratio < 2.0))
        throw std::domain_error("mean_w_half: closed form requires 1/3 < lambda2/lambda1 < 2");
    const double a1 = p.alpha1, a2 = p.alpha2, s = a1 + a2;
    const double l1 = p.lambda1, l2 = p.lambda2;
    const double lpre = a1 * std::log(l1) + a2 * std::log(l2);
    const double pre = std::exp(lpre);

    const double t1 =
        a2 * pre * specfun::rational_tail_integral(1.0, l1, 1.0, l2, a1, a2 + 1.0);
    const double t2 =
        a1 * pre * specfun::rational_tail_integral(1.0, l1, 1.0, l2, a1 + 1.0, a2);

    auto arg = [&](double x) { return (x + l2) / (2.0 * x + l1 + l2); };
    const double i3 = integrate_semi_infinite(
        [&](double x) {
            return specfun::hyp2f1(s + 1.0, 1.0, a2 + 1.0, arg(x)) *
                   std::exp(-(s + 1.0) * std::log(2.0 * x + l1 + l2));
        },
        1.0, s + 1.0, q);
    const double t3 = 2.0 * std::exp(lpre - specfun::log_beta(a1, a2 + 1.0)) * i3;

    const double i4 = integrate_semi_infinite(
        [&](double x) {
            return specfun::hyp2f1(s, 1.0, a2 + 1.0, arg(x)) / (x + l2) *
                   std::exp(-s * std::log(2.0 * x + l1 + l2));
        },
        1.0, s + 1.0, q);
    const double lb = specfun::log_beta(a1, a2);
    const double t4 = 2.0 * std::exp(lpre - lb) * i4;

    const double t5 = 2.0 * std::exp(lpre - lb) *
                      specfun::rational_tail_integral(1.0, l2, 2.0, l1 + l2, 1.0, s);

    return t1 - t2 + t3 - t4 + t5;
}

double mean_w_half_equal_rates(double alpha1, double alpha2) {
    require_positive_shapes(alpha1, alpha2, "mean_w_half_equal_rates");
    const double s = alpha1 + alpha2;
    const double f1 = specfun::hyp2f1(s + 1.0, 1.0, alpha2 + 1.0, 0.5);
    const double f2 = specfun::hyp2f1(s, 1.0, alpha2 + 1.0, 0.5);
    const double scale = std::exp((1.0 - s) * std::log(2.0) - std::log(s) -
                                  specfun::log_beta(alpha1, alpha2));
    return (alpha2 - alpha1) / s + scale * (1.0 + 0.5 * s / alpha2 * f1 - f2);
}

double xi(double p, double alpha1, double alpha2) {
    require_positive_shapes(alpha1, alpha2, "xi");
    if (!(p > std::max({-1.0, -1.0 - alpha1, -1.0 - alpha2})))
        throw std::domain_error("xi: requires p > max{-1, -1-alpha1, -1-alpha2}");
    const double lb = specfun::log_beta(alpha1, alpha2);
    const double term1 = std::exp(specfun::log_beta(alpha1 + p + 1.0, alpha2) - lb) *
                         (1.0 - specfun::reg_inc_beta(0.5, alpha1 + p + 1.0, alpha2));
    const double term2 = std::exp(specfun::log_beta(alpha1, alpha2 + p + 1.0) - lb) *
                         specfun::reg_inc_beta(0.5, alpha1, alpha2 + p + 1.0);
    return (term1 + term2 - std::exp2(-(p + 1.0))) / (p + 1.0);
}

namespace {

// Extended-precision Lentz continued fraction for the incomplete beta,
// mirroring the double version in specfun.cpp. The alternating moment sums
// below amplify input errors by factors up to ~1e9 at large r*n, so their
// xi inputs are built entirely in long double.
long double betacf_ld(long double a, long double b, long double x) {
    constexpr long double tiny = 1e-4000L;
    const long double qab = a + b, qap = a + 1.0L, qam = a - 1.0L;
    long double c = 1.0L;
    long double d = 1.0L - qab * x / qap;
    if (fabsl(d) < tiny) d = tiny;
    d = 1.0L / d;
    long double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const int m2 = 2 * m;
        long double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0L + aa * d;
        if (fabsl(d) < tiny) d = tiny;
        c = 1.0L + aa / c;
        if (fabsl(c) < tiny) c = tiny;
        d = 1.0L / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0L + aa * d;
        if (fabsl(d) < tiny) d = tiny;
        c = 1.0L + aa / c;
        if (fabsl(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double del = d * c;
        h *= del;
        if (fabsl(del - 1.0L) < 1e-19L) return h;
    }
    throw NonConvergenceError("betacf_ld: continued fraction did not converge");
}

// Unnormalized upper incomplete beta at 1/2: int_{1/2}^1 y^(a-1)(1-y)^(b-1) dy.
long double upper_half_beta_ld(long double a, long double b) {
    const long double lbt = (a + b) * logl(0.5L);
    if (0.5L < (a + 1.0L) / (a + b + 2.0L)) {
        const long double lbeta = lgammal(a) + lgammal(b) - lgammal(a + b);
        const long double reg_lower = expl(lbt - lbeta) * betacf_ld(a, b, 0.5L) / a;
        return expl(lbeta) * (1.0L - reg_lower);
    }
    return expl(lbt) * betacf_ld(b, a, 0.5L) / b;
}

// xi(0..kmax) via the forward parameter recurrence of the upper incomplete
// beta, U(a+1,b) = (a U(a,b) + 2^-(a+b)) / (a+b). Every term is positive,
// so the table carries no cancellation of its own and stays accurate to
// long double roundoff; the cancellation lives solely in the alternating
// sums that consume it.
std::vector<long double> xi_table_ld(double alpha1, double alpha2, int kmax) {
    const long double a1 = alpha1, a2 = alpha2;
    const long double bfull = expl(lgammal(a1) + lgammal(a2) - lgammal(a1 + a2));
    long double u1 = upper_half_beta_ld(a1, a2);
    long double u2 = upper_half_beta_ld(a2, a1);
    long double half_pow = powl(0.5L, a1 + a2);
    std::vector<long double> out(static_cast<std::size_t>(kmax) + 1);
    for (int c = 0; c <= kmax; ++c) {
        u1 = ((a1 + c) * u1 + half_pow) / (a1 + a2 + c);
        u2 = ((a2 + c) * u2 + half_pow) / (a1 + a2 + c);
        half_pow *= 0.5L;
        out[c] = ((u1 + u2) / bfull - powl(0.5L, c + 1)) / (c + 1);
    }
    return out;
}

}  // namespace

double moment_w_integer_r(double alpha1, double alpha2, int r, int n, double* est_rel_err) {
    require_positive_shapes(alpha1, alpha2, "moment_w_integer_r");
    require_integer_order(r, n, "moment_w_integer_r");
    const int m = 2 * r * n;
    const auto xt = xi_table_ld(alpha1, alpha2, m - 1);
    long double sum = 0.0L, abssum = 0.0L;
    long double choose = 1.0L, pow2 = 1.0L;
    for (int k = 0; k < m; ++k) {
        const long double mag = choose * pow2 * xt[static_cast<std::size_t>(k)];
        sum += ((m - 1 - k) % 2 == 0) ? mag : -mag;
        abssum += mag;
        choose = choose * (m - 1 - k) / (k + 1);
        pow2 *= 2.0L;
    }
    const double value = static_cast<double>(4.0L * r * n * sum);
    if (est_rel_err) {
        *est_rel_err =
            sum != 0.0L ? static_cast<double>(1.1e-19L * abssum / fabsl(sum)) : HUGE_VAL;
    }
    return value;
}

double mean_z_half(const GammaRatioParams& p) {
    p.validate();
    const double ratio = p.lambda2 / p.lambda1;
    if (!(ratio < 2.0))
        throw std::domain_error("mean_z_half: closed form requires lambda2/lambda1 < 2");
    const double a1 = p.alpha1, a2 = p.alpha2, s = a1 + a2;
    const double lpre = std::log(2.0) + a2 * std::log(ratio) + specfun::log_gamma(a1 + 0.5) +
                        specfun::log_gamma(a2 + 0.5) - std::log(s) - specfun::log_gamma(a1) -
                        specfun::log_gamma(a2);
    return 1.0 - std::exp(lpre) * specfun::hyp2f1(a2 + 0.5, s, s + 1.0, 1.0 - ratio);
}

namespace {

// Literal multinomial expansion in the (2y - 2y^2) powers with a constant
// 4rn prefactor and xi evaluated at 2i + j. Kept for arbitration: it does
// not match direct quadrature.
double z_moment_multinomial(double a1, double a2, int r, int n) {
    Kahan sum;
    for (int k = 0; k <= n - 1; ++k) {
        const int rk = r * k;
        const double louter = log_choose(n - 1, k) + rk * std::log(2.0);
        const int souter = (k % 2 == 0) ? 1 : -1;
        for (int i = 0; i <= rk; ++i) {
            for (int j = 0; i + j <= rk; ++j) {
                const double mag = std::exp(louter + log_multinomial(rk, i, j) +
                                            i * std::log(2.0)) *
                                   xi(2.0 * i + j, a1, a2);
                const int sgn = souter * ((j % 2 == 0) ? 1 : -1);
                sum.add(sgn * mag);
            }
        }
    }
    return 4.0 * r * n * sum.s;
}

// Re-derived expansion carrying the substitution Jacobian:
// n r 4^r sum_k C(n-1,k)(-1)^k 4^(rk)
//          sum_j C(r(k+1)-1, j)(-1)^j [2 xi(r(k+1)+j) - xi(r(k+1)+j-1)].
double z_moment_binomial(double a1, double a2, int r, int n, double* est_rel_err) {
    const auto xt = xi_table_ld(a1, a2, 2 * r * n - 1);
    long double sum = 0.0L, abssum = 0.0L;
    long double choose_outer = 1.0L;  // C(n-1, k)
    for (int k = 0; k <= n - 1; ++k) {
        const int m = r * (k + 1);
        const long double louter = choose_outer * powl(4.0L, m - r);
        const int souter = (k % 2 == 0) ? 1 : -1;
        long double choose_inner = 1.0L;  // C(m-1, j)
        for (int j = 0; j < m; ++j) {
            const long double bracket =
                2.0L * xt[static_cast<std::size_t>(m + j)] -
                xt[static_cast<std::size_t>(m + j - 1)];
            const long double mag = louter * choose_inner * bracket;
            const int sgn = souter * ((j % 2 == 0) ? 1 : -1);
            sum += sgn * mag;
            abssum += fabsl(mag);
            choose_inner = choose_inner * (m - 1 - j) / (j + 1);
        }
        choose_outer = choose_outer * (n - 1 - k) / (k + 1);
    }
    const long double value = static_cast<long double>(n) * r * powl(4.0L, r) * sum;
    if (est_rel_err)
        *est_rel_err =
            sum != 0.0L ? static_cast<double>(1.1e-19L * abssum / fabsl(sum)) : HUGE_VAL;
    return static_cast<double>(value);
}

}  // namespace

ZMomentArbitration moment_z_integer_r_arbitrated(double alpha1, double alpha2, int r, int n,
                                                 const QuadConfig& q) {
    require_positive_shapes(alpha1, alpha2, "moment_z_integer_r");
    require_integer_order(r, n, "moment_z_integer_r");
    ZMomentArbitration out;
    out.binomial_form = z_moment_binomial(alpha1, alpha2, r, n, nullptr);
    out.multinomial_form = z_moment_multinomial(alpha1, alpha2, r, n);
    UnitDistSpec spec;
    spec.family = Family::Z;
    spec.params = {alpha1, alpha2, 1.0, 1.0};
    spec.r = {static_cast<double>(r)};
    out.quadrature_ref = moment_numeric(spec, n, q);
    const double db = std::fabs(out.binomial_form - out.quadrature_ref);
    const double dm = std::fabs(out.multinomial_form - out.quadrature_ref);
    out.binomial_chosen = db <= dm;
    out.value = out.binomial_chosen ? out.binomial_form : out.multinomial_form;
    out.forms_agree = std::fabs(out.binomial_form - out.multinomial_form) <=
                      1e-6 * std::max(1.0, std::fabs(out.binomial_form));
    return out;
}

double moment_z_integer_r(double alpha1, double alpha2, int r, int n) {
    return moment_z_integer_r_arbitrated(alpha1, alpha2, r, n).value;
}

double truncated_moment_residual(const UnitDistSpec& spec, double p, double eps, double delta,
                                 const QuadConfig& q) {
    spec.validate();
    if (!(p > 0.0)) throw std::domain_error("truncated_moment_residual: requires p > 0");
    if (!(eps >= 0.0 && eps < delta))
        throw std::domain_error("truncated_moment_residual: requires 0 <= eps < delta");
    auto survival = [&](double u) {
        if (u <= 0.0) return 1.0;
        if (u >= 1.0) return 0.0;
        return 1.0 - cdf(spec, u, q);
    };
    const auto [p0, p1] = edge_powers(spec);
    const double lo = eps, hi = std::min(delta, 1.0);

    double lhs = 0.0;
    if (lo < hi) {
        auto f = [&](double u) { return std::exp(p * std::log(u)) * pdf(spec, u); };
        lhs = integrate_graded(f, lo, hi, lo == 0.0 ? p0 + p : 1.0, hi == 1.0 ? p1 : 1.0, q);
    }

    double rhs = -(delta < 1.0 ? std::pow(delta, p) * survival(delta) : 0.0);
    if (eps > 0.0) rhs += std::pow(eps, p) * survival(eps);
    if (lo < hi) {
        auto g = [&](double u) { return std::exp((p - 1.0) * std::log(u)) * survival(u); };
        rhs += p * integrate_graded(g, lo, hi, lo == 0.0 ? p : 1.0, 1.0, q);
    }
    return std::fabs(lhs - rhs);
}

MomentResult moment(const MomentRequest& req, const QuadConfig& q) {
    req.spec.validate();
    if (req.order < 1) throw std::domain_error("moment: order must be >= 1");
    if (req.method == MomentMethod::quadrature)
        return {moment_numeric(req.spec, req.order, q), MomentMethod::quadrature};
    const auto& p = req.spec.params;
    const double r = req.spec.r.r;
    const bool integer_r = std::fabs(r - std::round(r)) < 1e-12 && r >= 1.0;
    const bool equal_rates = p.lambda1 == p.lambda2;
    const double ratio = p.lambda2 / p.lambda1;

    std::string unavailable;
    if (req.spec.family == Family::W) {
        if (r == 0.5 && req.order == 1) {
            if (equal_rates) return {mean_w_half_equal_rates(p.alpha1, p.alpha2),
                                     MomentMethod::closed_form};
            if (ratio > 1.0 / 3.0 && ratio < 2.0)
                return {mean_w_half(p, q), MomentMethod::closed_form};
            unavailable = "closed-form mean of family w at r=1/2 requires 1/3 < lambda2/lambda1 < 2";
        } else if (integer_r) {
            if (equal_rates)
                return {moment_w_integer_r(p.alpha1, p.alpha2, static_cast<int>(std::lround(r)),
                                           req.order),
                        MomentMethod::closed_form};
            unavailable = "closed-form moments of family w at integer r require lambda1 == lambda2";
        } else {
            unavailable = "no closed form for family w at this order and r";
        }
    } else {
        if (r == 0.5 && req.order == 1) {
            if (ratio < 2.0) return {mean_z_half(p), MomentMethod::closed_form};
            unavailable = "closed-form mean of family z at r=1/2 requires lambda2/lambda1 < 2";
        } else if (integer_r) {
            if (equal_rates)
                return {moment_z_integer_r(p.alpha1, p.alpha2, static_cast<int>(std::lround(r)),
                                           req.order),
                        MomentMethod::closed_form};
            unavailable = "closed-form moments of family z at integer r require lambda1 == lambda2";
        } else {
            unavailable = "no closed form for family z at this order and r";
        }
    }
    if (req.method == MomentMethod::closed_form) throw std::domain_error(unavailable);
    return {moment_numeric(req.spec, req.order, q), MomentMethod::quadrature};
}

}  // namespace unitfold
