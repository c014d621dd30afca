// Acceptance gate for the distribution engine.  Each numbered check prints
// exactly one PASS/FAIL line; the exit status is the number of failures.
// Tolerances are part of the library's published accuracy contract and are
// asserted here at full strength, not loosened to fit the hardware of the day.

#include "unitfold/dists.hpp"
#include "unitfold/mle.hpp"
#include "unitfold/moments.hpp"
#include "unitfold/oracles.hpp"
#include "unitfold/quadrature.hpp"
#include "unitfold/specfun.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace unitfold;

namespace {

const double kPi = std::acos(-1.0);

int g_failures = 0;

UnitDistSpec make(Family f, double a1, double a2, double l1, double l2, double r) {
    return {f, {a1, a2, l1, l2}, {r}};
}

struct Criterion {
    int id;
    const char* what;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst = 0.0;
    std::string detail;

    Criterion(int id_, const char* what_) : id(id_), what(what_) {}

    void track(double err, bool pass, const std::string& where) {
        if (err > worst) worst = err;
        if (!pass && ok) {
            ok = false;
            detail = where;
        }
    }

    void finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok) {
            std::printf("criterion %2d PASS  %s (worst %.3e, %.1fs)\n", id, what, worst, secs);
        } else {
            std::printf("criterion %2d FAIL  %s (worst %.3e at %s, %.1fs)\n", id, what, worst,
                        detail.c_str(), secs);
            ++g_failures;
        }
        std::fflush(stdout);
    }
};

std::string spec_name(const UnitDistSpec& s) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%c(%g,%g,%g,%g,r=%g)",
                  s.family == Family::W ? 'w' : 'z', s.params.alpha1, s.params.alpha2,
                  s.params.lambda1, s.params.lambda2, s.r.r);
    return buf;
}

// Closed-form cdf of the gamma ratio through the rate-warping map
// u* = l1 v / (l1 v + l2 (1-v)); used as a fast independent reference for
// the sampler-law check below (cross-checked against the library cdf first).
double mobius_ratio_cdf(double v, const GammaRatioParams& p) {
    const double num = p.lambda1 * v;
    const double ustar = num / (num + p.lambda2 * (1.0 - v));
    return specfun::reg_inc_beta(ustar, p.alpha1, p.alpha2);
}

double mobius_cdf(const UnitDistSpec& s, double u) {
    const double y = s.family == Family::W ? w_sub(u, s.r) : z_sub(u, s.r);
    return mobius_ratio_cdf(y, s.params) - mobius_ratio_cdf(1.0 - y, s.params);
}

void c1_normalization() {
    Criterion c(1, "pdf integrates to 1 over the full parameter grid (tol 1e-8)");
    const double rs[] = {0.3, 0.4, 0.5, 1, 2, 3};
    const double alphas[] = {0.5, 1, 2, 5};
    const double ratios[] = {0.5, 1, 1.8};
    for (Family f : {Family::W, Family::Z})
        for (double r : rs)
            for (double a1 : alphas)
                for (double a2 : alphas)
                    for (double lr : ratios) {
                        const auto spec = make(f, a1, a2, 1.0, lr, r);
                        const double err = std::fabs(moment_numeric(spec, 0) - 1.0);
                        c.track(err, err <= 1e-8, spec_name(spec));
                    }
    c.finish();
}

void c2_beta_recovery() {
    Criterion c(2, "equal rates reduce the ratio density to Beta (tol 1e-12)");
    for (auto [a1, a2] : {std::pair{0.5, 0.5}, std::pair{1.0, 2.0}, std::pair{2.0, 3.0},
                          std::pair{5.0, 1.5}}) {
        const GammaRatioParams p{a1, a2, 1.7, 1.7};
        const double lb = std::lgamma(a1) + std::lgamma(a2) - std::lgamma(a1 + a2);
        for (int i = 1; i <= 100; ++i) {
            const double v = i / 101.0;
            const double beta_pdf =
                std::exp((a1 - 1.0) * std::log(v) + (a2 - 1.0) * std::log1p(-v) - lb);
            const double err = std::fabs(ratio_pdf(v, p) - beta_pdf) /
                               std::max(1.0, std::fabs(beta_pdf));
            char where[64];
            std::snprintf(where, sizeof(where), "(%g,%g) v=%g", a1, a2, v);
            c.track(err, err <= 1e-12, where);
        }
    }
    c.finish();
}

void c3_r1_identity() {
    Criterion c(3, "the two families coincide at r=1 (tol 1e-12)");
    const UnitDistSpec sets[] = {
        make(Family::W, 1, 1, 1, 1, 1),     make(Family::W, 2, 3, 1, 1.5, 1),
        make(Family::W, 0.5, 1.2, 1, 4, 1), make(Family::W, 5, 2, 1, 0.7, 1),
        make(Family::W, 1.5, 0.8, 2, 1, 1),
    };
    for (const auto& ws : sets) {
        auto zs = ws;
        zs.family = Family::Z;
        for (int i = 1; i <= 100; ++i) {
            const double u = i / 101.0;
            const double pw = pdf(ws, u), pz = pdf(zs, u);
            const double err = std::fabs(pw - pz) / std::max(1.0, std::fabs(pw));
            c.track(err, err <= 1e-12, spec_name(ws));
        }
    }
    c.finish();
}

void c4_gini() {
    Criterion c(4, "equal-shape mean at r=1/2 matches the gamma-function form (tol 1e-10)");
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        const double closed = mean_w_half_equal_rates(a, a);
        const double gamma_form =
            std::exp(std::lgamma(a + 0.5) - std::lgamma(a)) / (std::sqrt(kPi) * a);
        const double err1 = std::fabs(closed - gamma_form);
        char where[48];
        std::snprintf(where, sizeof(where), "alpha=%g identity", a);
        c.track(err1, err1 <= 1e-10, where);

        const double numeric = moment_numeric(make(Family::W, a, a, 1, 1, 0.5), 1);
        const double err2 = std::fabs(closed - numeric);
        std::snprintf(where, sizeof(where), "alpha=%g quadrature", a);
        c.track(err2, err2 <= 1e-7, where);
    }
    c.finish();
}

void c5_mean_z() {
    Criterion c(5, "closed z mean at r=1/2 matches quadrature (tol 1e-7)");
    for (double a1 : {0.5, 1.0, 2.0})
        for (double a2 : {0.5, 1.0, 2.0})
            for (double lr : {0.6, 1.0, 1.9}) {
                const GammaRatioParams p{a1, a2, 1.0, lr};
                const double closed = mean_z_half(p);
                const double numeric = moment_numeric(make(Family::Z, a1, a2, 1, lr, 0.5), 1);
                const double err = std::fabs(closed - numeric);
                char where[64];
                std::snprintf(where, sizeof(where), "(%g,%g) ratio=%g", a1, a2, lr);
                c.track(err, err <= 1e-7, where);
            }
    c.finish();
}

void c6_mean_w() {
    Criterion c(6, "closed w mean at r=1/2 matches quadrature (tol 1e-6)");
    for (double a1 : {1.0, 2.5})
        for (double a2 : {1.0, 2.5})
            for (double lr : {0.4, 1.0, 1.9}) {
                const GammaRatioParams p{a1, a2, 1.0, lr};
                const double closed = mean_w_half(p);
                const double numeric = moment_numeric(make(Family::W, a1, a2, 1, lr, 0.5), 1);
                const double err = std::fabs(closed - numeric);
                char where[64];
                std::snprintf(where, sizeof(where), "(%g,%g) ratio=%g", a1, a2, lr);
                c.track(err, err <= 1e-6, where);
            }
    c.finish();
}

void c7_xi() {
    Criterion c(7, "closed xi matches the nested quadrature oracle (tol 1e-8)");
    for (double p : {0.0, 1.0, 2.5})
        for (auto [a1, a2] : {std::pair{1.0, 1.0}, std::pair{1.5, 0.8}, std::pair{3.0, 2.0}}) {
            const double err = std::fabs(xi(p, a1, a2) - nested_quadrature_xi(p, a1, a2));
            char where[64];
            std::snprintf(where, sizeof(where), "p=%g (%g,%g)", p, a1, a2);
            c.track(err, err <= 1e-8, where);
        }
    c.finish();
}

void c8_integer_r() {
    Criterion c(8, "integer-r moment sums match quadrature (rel tol 1e-6)");
    for (int r : {1, 2, 3})
        for (int n : {1, 2, 3})
            for (auto [a1, a2] :
                 {std::pair{1.0, 1.0}, std::pair{2.0, 2.0}, std::pair{1.0, 3.0}}) {
                const double wn = moment_numeric(make(Family::W, a1, a2, 1, 1, r), n);
                const double wc = moment_w_integer_r(a1, a2, r, n);
                const double werr = std::fabs(wc - wn) / std::fabs(wn);
                char where[64];
                std::snprintf(where, sizeof(where), "w r=%d n=%d (%g,%g)", r, n, a1, a2);
                c.track(werr, werr <= 1e-6, where);

                const double zn = moment_numeric(make(Family::Z, a1, a2, 1, 1, r), n);
                const double zc = moment_z_integer_r(a1, a2, r, n);
                const double zerr = std::fabs(zc - zn) / std::fabs(zn);
                std::snprintf(where, sizeof(where), "z r=%d n=%d (%g,%g)", r, n, a1, a2);
                c.track(zerr, zerr <= 1e-6, where);
            }
    // record the arbitration outcome between the two z-moment expansions
    const auto arb = moment_z_integer_r_arbitrated(2, 3, 2, 2);
    std::printf("    note: z integer-r expansions %s; %s form selected "
                "(binomial %.12g, multinomial %.12g, quadrature %.12g)\n",
                arb.forms_agree ? "agree" : "disagree",
                arb.binomial_chosen ? "binomial" : "multinomial", arb.binomial_form,
                arb.multinomial_form, arb.quadrature_ref);
    c.finish();
}

void c9_quantile_roundtrip() {
    Criterion c(9, "cdf(quantile(p)) returns p (tol 1e-8)");
    const UnitDistSpec sets[] = {
        make(Family::W, 1, 1, 1, 1, 0.5),  make(Family::W, 2, 3, 1, 1.5, 1),
        make(Family::W, 0.5, 1.2, 1, 2, 0.7), make(Family::Z, 2, 3, 1, 1.5, 1),
        make(Family::Z, 5, 2, 1, 0.7, 2),  make(Family::Z, 1.5, 0.8, 1, 1.8, 0.4),
    };
    for (const auto& spec : sets)
        for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
            const double err = std::fabs(cdf(spec, quantile(spec, p)) - p);
            char where[96];
            std::snprintf(where, sizeof(where), "%s p=%g", spec_name(spec).c_str(), p);
            c.track(err, err <= 1e-8, where);
        }
    c.finish();
}

void c10_sampler_ks() {
    Criterion c(10, "one-sample KS below the 1 percent critical value at n=1e5");
    const std::size_t n = 100000;
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));

    const UnitDistSpec sets[] = {
        make(Family::W, 1, 1, 2, 2, 0.5),     make(Family::W, 2, 3, 1, 1.5, 1),
        make(Family::W, 0.5, 1.2, 1, 1, 0.7), make(Family::W, 5, 2, 1, 1, 2),
        make(Family::W, 1.5, 1.8, 1, 1.8, 0.4), make(Family::Z, 1, 1, 1, 1, 0.5),
        make(Family::Z, 2, 3, 1, 1.5, 1),     make(Family::Z, 0.5, 1.2, 1, 4, 0.7),
        make(Family::Z, 5, 2, 1, 1, 2),       make(Family::Z, 1.5, 1.8, 1, 1.8, 0.4),
    };

    // anchor the closed-form reference cdf against the library cdf before
    // trusting it at scale
    for (const auto& spec : sets)
        for (double u : {0.12, 0.5, 0.9}) {
            const double err = std::fabs(mobius_cdf(spec, u) - cdf(spec, u));
            c.track(err, err <= 1e-9, spec_name(spec) + " cdf anchor");
        }

    std::uint64_t seed = 31000;
    for (const auto& spec : sets) {
        auto values = sample(spec, n, seed++).values;
        std::sort(values.begin(), values.end());
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fi = mobius_cdf(spec, values[i]);
            const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
            const double lo = static_cast<double>(i) / static_cast<double>(n);
            d = std::max({d, std::fabs(fi - hi), std::fabs(fi - lo)});
        }
        c.track(d, d < crit, spec_name(spec));
    }

    // the folded uniform case really is uniform: compare directly against u
    {
        auto values = sample(make(Family::W, 1, 1, 3, 3, 0.5), n, 777).values;
        std::sort(values.begin(), values.end());
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
            const double lo = static_cast<double>(i) / static_cast<double>(n);
            d = std::max({d, std::fabs(values[i] - hi), std::fabs(values[i] - lo)});
        }
        c.track(d, d < crit, "w uniform direct");
    }
    c.finish();
}

void c11_score_fd() {
    Criterion c(11, "analytic score matches central differences (rel tol 1e-5)");
    std::mt19937_64 gen(4242);
    std::uniform_real_distribution<double> shape(0.6, 3.0), rate(0.7, 2.0), power(0.4, 1.6);
    for (int inst = 0; inst < 10; ++inst) {
        const Family f = inst % 2 == 0 ? Family::W : Family::Z;
        const ThetaVector truth{shape(gen), shape(gen), 1.0, rate(gen), power(gen)};
        const auto data = sample(truth.spec(f), 80, 9000 + inst).values;
        const ThetaVector at{shape(gen), shape(gen), rate(gen), rate(gen), power(gen)};
        const auto sc = score(f, data, at);
        const auto arr = at.as_array();
        for (int j = 0; j < 5; ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(arr[j]));
            auto hi = arr, lo = arr;
            hi[j] += h;
            lo[j] -= h;
            const double fd = (loglik(f, data, ThetaVector::from_array(hi)) -
                               loglik(f, data, ThetaVector::from_array(lo))) /
                              (2.0 * h);
            const double err = std::fabs(sc[j] - fd) / std::max(1.0, std::fabs(fd));
            char where[48];
            std::snprintf(where, sizeof(where), "instance %d coord %d", inst, j);
            c.track(err, err <= 1e-5, where);
        }
    }
    c.finish();
}

void c12_mle_recovery() {
    Criterion c(12, "fit recovers truth within 3 SE in >= 45 of 50 replications per family");
    struct Study {
        Family family;
        ThetaVector truth;
        std::uint64_t seed_base;
    };
    // Truths selected by identifiability pilots on separate seed blocks:
    // strong rate asymmetry with one light edge keeps the likelihood
    // unimodal in practice. Near-symmetric truths, or truths with a
    // concentrated second variate, admit distant near-equivalent modes
    // that legitimately capture the MLE in a nontrivial share of samples.
    // The seed blocks below were fixed before these instances were ever
    // run and are used exactly once.
    const Study studies[] = {
        {Family::W, {2, 0.8, 1, 2.5, 1.2}, 7200},
        {Family::Z, {2, 0.6, 1, 3, 0.6}, 8200},
    };
    const int reps = 50, need = 45, n = 5000;
    for (const auto& st : studies) {
        int hits = 0, singular = 0, nonconv = 0;
        for (int rep = 0; rep < reps; ++rep) {
            const auto data = sample(st.truth.spec(st.family), n, st.seed_base + rep).values;
            FitOptions opts;
            opts.compute_std_errors = true;
            const auto res = fit(st.family, data, opts);
            if (!res.converged) ++nonconv;
            if (!res.std_errors) {
                ++singular;
                continue;
            }
            const auto& se = *res.std_errors;
            const auto est = res.theta.as_array();
            const auto direct = st.truth.as_array();
            // the fold makes the labeling of the two gamma variates
            // unidentifiable: the mirrored truth is an equally correct answer
            const std::array<double, 5> swapped = {direct[1], direct[0], 1.0,
                                                   1.0 / direct[3], direct[4]};
            bool ok_direct = true, ok_swapped = true;
            for (int j : {0, 1, 3, 4}) {
                if (!(std::fabs(est[j] - direct[j]) <= 3.0 * se[j])) ok_direct = false;
                if (!(std::fabs(est[j] - swapped[j]) <= 3.0 * se[j])) ok_swapped = false;
            }
            hits += (ok_direct || ok_swapped) ? 1 : 0;
        }
        std::printf("    %s: %d/%d within 3 SE (%d singular, %d not converged)\n",
                    spec_name(st.truth.spec(st.family)).c_str(), hits, reps, singular,
                    nonconv);
        char where[64];
        std::snprintf(where, sizeof(where), "%c family %d/%d",
                      st.family == Family::W ? 'w' : 'z', hits, reps);
        c.track(static_cast<double>(reps - hits), hits >= need, where);
    }
    c.finish();
}

void c13_scale_invariance() {
    Criterion c(13, "pdf, cdf, loglik invariant under joint rate scaling (tol 1e-10)");
    const auto data = sample(make(Family::Z, 2, 3, 1, 1.5, 0.7), 200, 55).values;
    for (Family f : {Family::W, Family::Z})
        for (double cscale : {0.1, 10.0}) {
            const auto base = make(f, 2, 3, 1, 1.5, 0.7);
            const auto scaled = make(f, 2, 3, cscale, cscale * 1.5, 0.7);
            for (double u : {0.05, 0.3, 0.6, 0.92}) {
                const double ep = std::fabs(pdf(scaled, u) - pdf(base, u));
                const double ec = std::fabs(cdf(scaled, u) - cdf(base, u));
                char where[48];
                std::snprintf(where, sizeof(where), "%c c=%g u=%g",
                              f == Family::W ? 'w' : 'z', cscale, u);
                c.track(ep, ep <= 1e-10, where);
                c.track(ec, ec <= 1e-10, where);
            }
            const ThetaVector tb{2, 3, 1, 1.5, 0.7};
            const ThetaVector ts{2, 3, cscale, cscale * 1.5, 0.7};
            const double el = std::fabs(loglik(f, data, tb) - loglik(f, data, ts)) /
                              std::max(1.0, std::fabs(loglik(f, data, tb)));
            char where[48];
            std::snprintf(where, sizeof(where), "%c loglik c=%g", f == Family::W ? 'w' : 'z',
                          cscale);
            c.track(el, el <= 1e-10, where);
        }
    c.finish();
}

void c14_law_crosscheck() {
    Criterion c(14, "interval probability from the preimage law equals cdf (tol 1e-9)");
    const UnitDistSpec sets[] = {
        make(Family::W, 1, 1, 1, 1, 0.5),   make(Family::W, 2, 3, 1, 1.5, 1),
        make(Family::W, 0.5, 1.2, 1, 2, 0.7), make(Family::W, 5, 2, 1, 0.7, 2),
        make(Family::W, 1.5, 0.8, 1, 1.8, 0.3), make(Family::Z, 1, 1, 1, 1, 0.5),
        make(Family::Z, 2, 3, 1, 1.5, 1),   make(Family::Z, 0.5, 1.2, 1, 2, 0.7),
        make(Family::Z, 5, 2, 1, 0.7, 2),   make(Family::Z, 1.5, 0.8, 1, 1.8, 0.3),
    };
    for (const auto& spec : sets)
        for (double u : {0.05, 0.25, 0.5, 0.75, 0.95}) {
            const double err = std::fabs(interval_prob(spec, 0.0, u) - cdf(spec, u));
            char where[96];
            std::snprintf(where, sizeof(where), "%s u=%g", spec_name(spec).c_str(), u);
            c.track(err, err <= 1e-9, where);
        }
    c.finish();
}

void c15_specfun_identities() {
    Criterion c(15, "special-function identity suite at module tolerances");
    // regularized beta reflection
    for (double a : {0.5, 1.0, 3.0})
        for (double b : {0.8, 2.0, 5.0})
            for (double x : {0.05, 0.3, 0.5, 0.77, 0.99}) {
                const double err = std::fabs(specfun::reg_inc_beta(x, a, b) +
                                             specfun::reg_inc_beta(1.0 - x, b, a) - 1.0);
                c.track(err, err <= 1e-12, "beta reflection");
            }
    // Legendre duplication
    for (double x : {0.5, 1.0, 2.5, 7.0}) {
        const double lhs = specfun::log_gamma(x) + specfun::log_gamma(x + 0.5);
        const double rhs = (1.0 - 2.0 * x) * std::log(2.0) + 0.5 * std::log(kPi) +
                           specfun::log_gamma(2.0 * x);
        const double err = std::fabs(lhs - rhs) / std::fabs(rhs);
        c.track(err, err <= 1e-12, "Legendre duplication");
    }
    // incomplete gamma recurrence
    for (double s : {0.5, 1.0, 3.0})
        for (double x : {0.1, 1.0, 10.0}) {
            const double lhs = specfun::lower_inc_gamma(s + 1.0, x);
            const double rhs =
                s * specfun::lower_inc_gamma(s, x) - std::pow(x, s) * std::exp(-x);
            const double err = std::fabs(lhs - rhs) / std::max(1e-300, std::fabs(lhs));
            c.track(err, err <= 1e-11, "incomplete gamma recurrence");
        }
    // the two z=1/2 hypergeometric evaluations
    for (double a : {0.5, 1.0, 2.0, 3.5}) {
        const double base = std::sqrt(kPi) *
                            std::exp(specfun::log_gamma(a + 1.0) - specfun::log_gamma(a + 0.5));
        const double e1 =
            std::fabs(specfun::hyp2f1(2.0 * a, 1.0, a + 1.0, 0.5) - base) / base;
        const double e2 =
            std::fabs(specfun::hyp2f1(2.0 * a + 1.0, 1.0, a + 1.0, 0.5) - (base + 1.0)) /
            (base + 1.0);
        c.track(e1, e1 <= 1e-10, "hyp2f1 z=1/2 first");
        c.track(e2, e2 <= 1e-10, "hyp2f1 z=1/2 shifted");
    }
    // tail integral against direct quadrature
    for (double a : {0.5, 1.0, 2.0})
        for (double cc : {0.7, 1.0, 1.6})
            for (double p : {1.0, 1.5, 2.5}) {
                const double b = 2.0, e = 1.0, q = 1.5;
                if (!(a * e < 2.0 * b * cc)) continue;
                const double closed = specfun::rational_tail_integral(a, b, cc, e, p, q);
                const double quad = integrate_semi_infinite(
                    [&](double x) {
                        return 1.0 / (std::pow(a * x + b, p) * std::pow(cc * x + e, q));
                    },
                    1.0, p + q);
                const double err = std::fabs(closed - quad) / std::fabs(quad);
                c.track(err, err <= 1e-8, "rational tail integral");
            }
    c.finish();
}

}  // namespace

int main() {
    std::printf("acceptance run: distribution engine for folded gamma-ratio families\n");
    c1_normalization();
    c2_beta_recovery();
    c3_r1_identity();
    c4_gini();
    c5_mean_z();
    c6_mean_w();
    c7_xi();
    c8_integer_r();
    c9_quantile_roundtrip();
    c10_sampler_ks();
    c11_score_fd();
    c12_mle_recovery();
    c13_scale_invariance();
    c14_law_crosscheck();
    c15_specfun_identities();
    if (g_failures == 0)
        std::printf("all criteria satisfied\n");
    else
        std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
