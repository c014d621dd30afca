#include "unitfold/mle.hpp"

#include "unitfold/errors.hpp"
#include "unitfold/rng.hpp"
#include "unitfold/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <stdexcept>
#include <vector>

namespace unitfold {

namespace {

#ifndef UNITFOLD_MAX_LOG_STEP
#define UNITFOLD_MAX_LOG_STEP 1.0
#endif
// Largest per-iteration move of any single log-parameter.
constexpr double kMaxLogStep = UNITFOLD_MAX_LOG_STEP;

struct PointEval {
    double logf = 0.0;
    double d_a1 = 0.0, d_a2 = 0.0, d_l1 = 0.0, d_l2 = 0.0, d_r = 0.0;
};

// Shared per-point kernel work given the fold point y. half = 2y - 1 and
// halfm = 1 - y are passed separately to keep accuracy near the edges.
struct KernelEval {
    double d_a1, d_a2, d_l1, d_l2, gp_over_g, log_g;
};

KernelEval kernel_eval(const ThetaVector& th, double y, double ym) {
    const double s = th.alpha1 + th.alpha2;
    // y is the upper branch, so ym <= 1/2 and log1p(-ym) keeps log y accurate
    // even when y rounds to 1.
    const double ly = std::log1p(-ym), lym = std::log(ym);
    const double d1 = y / th.lambda2 + ym / th.lambda1;
    const double d2 = ym / th.lambda2 + y / th.lambda1;
    const double ld1 = std::log(d1), ld2 = std::log(d2);
    const double la1 = (th.alpha1 - 1.0) * ly + (th.alpha2 - 1.0) * lym - s * ld1;
    const double la2 = (th.alpha1 - 1.0) * lym + (th.alpha2 - 1.0) * ly - s * ld2;
    const double m = std::max(la1, la2);
    const double log_g = m + std::log(std::exp(la1 - m) + std::exp(la2 - m));
    const double w1 = std::exp(la1 - log_g);
    const double w2 = std::exp(la2 - log_g);

    const double c = 1.0 / th.lambda2 - 1.0 / th.lambda1;
    const double b1 = (th.alpha1 - 1.0) / y - (th.alpha2 - 1.0) / ym - s * c / d1;
    const double b2 = (th.alpha1 - 1.0) / ym - (th.alpha2 - 1.0) / y - s * c / d2;

    KernelEval k;
    k.log_g = log_g;
    k.d_a1 = w1 * (ly - ld1) + w2 * (lym - ld2);
    k.d_a2 = w1 * (lym - ld1) + w2 * (ly - ld2);
    k.d_l1 = s / (th.lambda1 * th.lambda1) * (w1 * ym / d1 + w2 * y / d2);
    k.d_l2 = s / (th.lambda2 * th.lambda2) * (w1 * y / d1 + w2 * ym / d2);
    k.gp_over_g = w1 * b1 - w2 * b2;
    return k;
}

// logf only, for objective-only evaluations inside the line search.
double point_logf(const PreparedData& d, const ThetaVector& th, std::size_t i) {
    const double r = th.r;
    const double s = th.alpha1 + th.alpha2;
    double shape_term, y, ym;
    if (d.family == Family::W) {
        const double lu = d.log_u[i];
        ym = -0.5 * std::expm1(0.5 * lu / r);
        y = 1.0 - ym;
        shape_term = (0.5 / r - 1.0) * lu;
    } else {
        const double l1m = d.log1m_u[i];
        const double a = l1m / r;
        const double t = -std::expm1(a);
        ym = 0.5 * std::exp(a) / (1.0 + std::sqrt(t));
        y = 1.0 - ym;
        shape_term = (1.0 / r - 1.0) * l1m - 0.5 * std::log(t);
    }
    const double ly = std::log1p(-ym), lym = std::log(ym);
    const double ld1 = std::log(y / th.lambda2 + ym / th.lambda1);
    const double ld2 = std::log(ym / th.lambda2 + y / th.lambda1);
    const double la1 = (th.alpha1 - 1.0) * ly + (th.alpha2 - 1.0) * lym - s * ld1;
    const double la2 = (th.alpha1 - 1.0) * lym + (th.alpha2 - 1.0) * ly - s * ld2;
    const double m = std::max(la1, la2);
    return shape_term + m + std::log(std::exp(la1 - m) + std::exp(la2 - m));
}

PointEval point_eval(const PreparedData& d, const ThetaVector& th, std::size_t i) {
    PointEval out;
    const double r = th.r;
    if (d.family == Family::W) {
        const double lu = d.log_u[i];
        const double ym = -0.5 * std::expm1(0.5 * lu / r);
        const double y = 1.0 - ym;
        const double e = 1.0 - 2.0 * ym;
        const KernelEval k = kernel_eval(th, y, ym);
        out.logf = (0.5 / r - 1.0) * lu + k.log_g;
        out.d_a1 = k.d_a1;
        out.d_a2 = k.d_a2;
        out.d_l1 = k.d_l1;
        out.d_l2 = k.d_l2;
        const double dy_dr = -e * lu / (4.0 * r * r);
        out.d_r = -0.5 * lu / (r * r) + k.gp_over_g * dy_dr;
    } else {
        const double l1m = d.log1m_u[i];
        const double a = l1m / r;
        const double t = -std::expm1(a);
        const double v = std::exp(a);
        const double st = std::sqrt(t);
        const double ym = 0.5 * v / (1.0 + st);
        const double y = 1.0 - ym;
        const KernelEval k = kernel_eval(th, y, ym);
        out.logf = (1.0 / r - 1.0) * l1m - 0.5 * std::log(t) + k.log_g;
        out.d_a1 = k.d_a1;
        out.d_a2 = k.d_a2;
        out.d_l1 = k.d_l1;
        out.d_l2 = k.d_l2;
        const double rr = r * r;
        out.d_r = -l1m / rr - 0.5 * v * l1m / (rr * t) +
                  k.gp_over_g * v * l1m / (4.0 * rr * st);
    }
    return out;
}

double log_prefactor(const ThetaVector& th) {
    return -std::log(4.0 * th.r) - th.alpha2 * std::log(th.lambda1) -
           th.alpha1 * std::log(th.lambda2) - specfun::log_beta(th.alpha1, th.alpha2);
}

void check_theta(const ThetaVector& th) {
    th.validate();
    if (!(th.r > 0.0) || !std::isfinite(th.r))
        throw std::domain_error("ThetaVector: r must be positive and finite");
}

struct FullEval {
    double ll = kLoglikFloor;
    std::array<double, 5> sc{};
    bool finite = false;
};

FullEval eval_all(const PreparedData& d, const ThetaVector& th, bool want_score) {
    FullEval out;
    const double lpre = log_prefactor(th);
    if (!std::isfinite(lpre)) return out;
    const double n = static_cast<double>(d.size());
    double ll = 0.0;
    std::array<double, 5> sc{};
    if (want_score) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            const PointEval pe = point_eval(d, th, i);
            if (!std::isfinite(pe.logf)) return out;
            ll += pe.logf;
            sc[0] += pe.d_a1;
            sc[1] += pe.d_a2;
            sc[2] += pe.d_l1;
            sc[3] += pe.d_l2;
            sc[4] += pe.d_r;
        }
    } else {
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double lf = point_logf(d, th, i);
            if (!std::isfinite(lf)) return out;
            ll += lf;
        }
    }
    ll += n * lpre;
    if (!std::isfinite(ll)) return out;
    if (want_score) {
        const double s = th.alpha1 + th.alpha2;
        const double psis = specfun::digamma(s);
        sc[0] += n * (psis - specfun::digamma(th.alpha1) - std::log(th.lambda2));
        sc[1] += n * (psis - specfun::digamma(th.alpha2) - std::log(th.lambda1));
        sc[2] += -n * th.alpha2 / th.lambda1;
        sc[3] += -n * th.alpha1 / th.lambda2;
        sc[4] += -n / th.r;
#ifdef UNITFOLD_FD_SCORE
        // Compile-time fallback: replace the analytic score with central
        // differences of the log-likelihood. Slower; kept as a cross-check.
        {
            std::array<double, 5> base = th.as_array();
            for (int j = 0; j < 5; ++j) {
                const double hstep = 1e-6 * std::max(1.0, std::fabs(base[j]));
                std::array<double, 5> up = base, dn = base;
                up[j] += hstep;
                dn[j] -= hstep;
                const FullEval eu = eval_all(d, ThetaVector::from_array(up), false);
                const FullEval ed = eval_all(d, ThetaVector::from_array(dn), false);
                if (!eu.finite || !ed.finite) return out;
                sc[j] = (eu.ll - ed.ll) / (2.0 * hstep);
            }
        }
#endif
        for (double g : sc)
            if (!std::isfinite(g)) return out;
    }
    out.ll = ll;
    out.sc = sc;
    out.finite = true;
    return out;
}

std::vector<int> free_indices(FitProfile profile) {
    if (profile == FitProfile::full) return {0, 1, 2, 3, 4};
    return {0, 1, 3, 4};
}

// Dense k x k inverse via Gauss-Jordan with partial pivoting. Throws on a
// pivot collapse relative to the largest initial diagonal entry.
std::vector<double> invert_spd(std::vector<double> m, int k) {
    std::vector<double> inv(k * k, 0.0);
    for (int i = 0; i < k; ++i) inv[i * k + i] = 1.0;
    double maxd = 0.0;
    for (int i = 0; i < k; ++i) maxd = std::max(maxd, std::fabs(m[i * k + i]));
    if (!(maxd > 0.0))
        throw SingularHessianError("observed information matrix is numerically singular");
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int row = col + 1; row < k; ++row)
            if (std::fabs(m[row * k + col]) > std::fabs(m[piv * k + col])) piv = row;
        if (std::fabs(m[piv * k + col]) < 1e-10 * maxd)
            throw SingularHessianError("observed information matrix is numerically singular");
        if (piv != col)
            for (int j = 0; j < k; ++j) {
                std::swap(m[piv * k + j], m[col * k + j]);
                std::swap(inv[piv * k + j], inv[col * k + j]);
            }
        const double p = m[col * k + col];
        for (int j = 0; j < k; ++j) {
            m[col * k + j] /= p;
            inv[col * k + j] /= p;
        }
        for (int row = 0; row < k; ++row) {
            if (row == col) continue;
            const double f = m[row * k + col];
            if (f == 0.0) continue;
            for (int j = 0; j < k; ++j) {
                m[row * k + j] -= f * m[col * k + j];
                inv[row * k + j] -= f * inv[col * k + j];
            }
        }
    }
    return inv;
}

struct SingleFit {
    ThetaVector theta;
    double loglik = kLoglikFloor;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = std::numeric_limits<double>::infinity();
};

SingleFit run_single(const PreparedData& d, const ThetaVector& start, const FitOptions& opts) {
    const std::vector<int> idx = free_indices(opts.profile);
    const int k = static_cast<int>(idx.size());

    ThetaVector th = start;
    auto theta_at = [&](const std::vector<double>& eta) {
        ThetaVector t = start;
        std::array<double, 5> a = t.as_array();
        for (int j = 0; j < k; ++j) a[idx[j]] = std::exp(eta[j]);
        return ThetaVector::from_array(a);
    };

    std::vector<double> eta(k);
    {
        const std::array<double, 5> a = start.as_array();
        for (int j = 0; j < k; ++j) eta[j] = std::log(a[idx[j]]);
    }

    // Work on f = -loglik; gradient in eta space is -theta_j * score_j.
    // A step that lands outside the evaluable region (overflowed exp(eta),
    // a special-function failure) is treated as f = -kLoglikFloor so the
    // line search backs away from it.
    // Components outside [1e-8, 1e8] are rejected outright: far outside that
    // box the kernel's large-exponent cancellation can fabricate finite but
    // meaningless log-likelihood values.
    auto theta_ok = [](const ThetaVector& t) {
        for (double v : t.as_array())
            if (!std::isfinite(v) || !(v >= 1e-8 && v <= 1e8)) return false;
        return true;
    };
    auto eval_point = [&](const std::vector<double>& e, std::vector<double>& g,
                          double& score_inf) {
        const ThetaVector t = theta_at(e);
        score_inf = std::numeric_limits<double>::infinity();
        if (!theta_ok(t)) return -kLoglikFloor;
        FullEval fe;
        try {
            fe = eval_all(d, t, true);
        } catch (const std::exception&) {
            return -kLoglikFloor;
        }
        if (!fe.finite) return -kLoglikFloor;
        const std::array<double, 5> a = t.as_array();
        score_inf = 0.0;
        for (int j = 0; j < k; ++j) {
            g[j] = -a[idx[j]] * fe.sc[idx[j]];
            score_inf = std::max(score_inf, std::fabs(fe.sc[idx[j]]));
        }
        return -fe.ll;
    };
    auto eval_value = [&](const std::vector<double>& e) {
        const ThetaVector t = theta_at(e);
        if (!theta_ok(t)) return -kLoglikFloor;
        try {
            const FullEval fe = eval_all(d, t, false);
            return fe.finite ? -fe.ll : -kLoglikFloor;
        } catch (const std::exception&) {
            return -kLoglikFloor;
        }
    };

    std::vector<double> g(k), gnew(k), dir(k), enew(k), sstep(k), yv(k);
    std::vector<double> h(k * k, 0.0);
    auto reset_h = [&] {
        std::fill(h.begin(), h.end(), 0.0);
        for (int j = 0; j < k; ++j) h[j * k + j] = 1.0;
    };
    reset_h();

    double score_inf = 0.0;
    double f = eval_point(eta, g, score_inf);

    SingleFit out;
    int small_rel = 0;
    bool polishing = false;
    int polish_left = 0;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        if (score_inf < opts.grad_tol && f < -kLoglikFloor / 2.0) break;
        if (polishing && --polish_left <= 0) break;
        for (int i = 0; i < k; ++i) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j) acc += h[i * k + j] * g[j];
            dir[i] = -acc;
        }
        double slope = 0.0;
        for (int j = 0; j < k; ++j) slope += dir[j] * g[j];
        if (!(slope < 0.0)) {
            reset_h();
            for (int j = 0; j < k; ++j) dir[j] = -g[j];
            slope = 0.0;
            for (int j = 0; j < k; ++j) slope -= g[j] * g[j];
            if (!(slope < 0.0)) break;
        }
        // Cap the log-space step: one iteration may scale a parameter by a
        // bounded factor.  Raw-gradient directions on n-sized likelihoods are
        // huge, and uncapped jumps hop between basins of this multimodal
        // surface.
        double dinf = 0.0;
        for (int j = 0; j < k; ++j) dinf = std::max(dinf, std::fabs(dir[j]));
        if (dinf > kMaxLogStep) {
            const double shrink = kMaxLogStep / dinf;
            for (int j = 0; j < k; ++j) dir[j] *= shrink;
            slope *= shrink;
        }

        double step = 1.0;
        double fnew = f;
        bool accepted = false;
        while (step > 1e-14) {
            for (int j = 0; j < k; ++j) enew[j] = eta[j] + step * dir[j];
            fnew = eval_value(enew);
            if (fnew <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        // Second stopping criterion: two consecutive accepted steps with a
        // negligible relative change in the objective. The objective flattens
        // well before the gradient criterion bites (the likelihood scales with
        // n while the gradient tolerance does not), so switch to a polish
        // phase that lets the gradient catch up instead of stopping outright.
        // Whether the eventual stop counts as convergence is decided by the
        // gradient norm at the final point.
        if (!polishing) {
            const double rel_change = std::fabs(f - fnew) / (1.0 + std::fabs(fnew));
            small_rel = rel_change <= opts.loglik_rel_tol ? small_rel + 1 : 0;
            if (small_rel >= 2 && fnew < -kLoglikFloor / 2.0) {
                polishing = true;
                polish_left = 40;
            }
        }

        double snew_inf = 0.0;
        const double fcheck = eval_point(enew, gnew, snew_inf);
        (void)fcheck;
        for (int j = 0; j < k; ++j) {
            sstep[j] = step * dir[j];
            yv[j] = gnew[j] - g[j];
        }
        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (int j = 0; j < k; ++j) {
            sy += sstep[j] * yv[j];
            ss += sstep[j] * sstep[j];
            yy += yv[j] * yv[j];
        }
        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            // BFGS inverse update: H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T.
            const double rho = 1.0 / sy;
            std::vector<double> hy(k, 0.0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) hy[i] += h[i * k + j] * yv[j];
            double yhy = 0.0;
            for (int j = 0; j < k; ++j) yhy += yv[j] * hy[j];
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    h[i * k + j] += rho * rho * yhy * sstep[i] * sstep[j] -
                                    rho * (hy[i] * sstep[j] + sstep[i] * hy[j]) +
                                    rho * sstep[i] * sstep[j];
        } else {
            reset_h();
        }
        eta = enew;
        f = fnew;
        g = gnew;
        score_inf = snew_inf;
    }

    out.theta = theta_at(eta);
    out.loglik = -f;
    // The converged flag is reserved for genuine stationary points: a stop
    // with a large gradient (ascent still climbing, budget or stall) is
    // reported as non-convergence with the best point so far.
    out.converged = score_inf < opts.grad_tol && f < -kLoglikFloor / 2.0;
    out.iterations = iter;
    out.gradient_norm = score_inf;
    return out;
}

}  // namespace

PreparedData PreparedData::from(Family f, std::vector<double> data) {
    if (data.empty()) throw std::domain_error("fit requires a non-empty sample");
    for (double v : data)
        if (!(v > 0.0 && v < 1.0) || !std::isfinite(v))
            throw std::domain_error("data values must lie strictly inside (0, 1)");
    std::sort(data.begin(), data.end());
    PreparedData out;
    out.family = f;
    out.values = std::move(data);
    out.log_u.reserve(out.values.size());
    out.log1m_u.reserve(out.values.size());
    for (double v : out.values) {
        out.log_u.push_back(std::log(v));
        out.log1m_u.push_back(std::log1p(-v));
    }
    return out;
}

double loglik(const PreparedData& d, const ThetaVector& th) {
    check_theta(th);
    return eval_all(d, th, false).ll;
}

std::array<double, 5> score(const PreparedData& d, const ThetaVector& th) {
    check_theta(th);
    const FullEval fe = eval_all(d, th, true);
    if (!fe.finite)
        throw std::domain_error("score: log-likelihood is not finite at this point");
    return fe.sc;
}

double loglik(Family family, const std::vector<double>& data, const ThetaVector& th) {
    return loglik(PreparedData::from(family, data), th);
}

std::array<double, 5> score(Family family, const std::vector<double>& data,
                            const ThetaVector& th) {
    return score(PreparedData::from(family, data), th);
}

std::array<double, 5> std_errors(const PreparedData& d, const ThetaVector& th,
                                 FitProfile profile) {
    check_theta(th);
    // Scaling both rates by the same factor never changes the likelihood, so
    // under the full profile the information matrix has an exact null vector
    // (0, 0, lambda1, lambda2, 0). Finite differences can mask it; refuse
    // outright rather than report noise-driven standard errors.
    if (profile == FitProfile::full)
        throw SingularHessianError(
            "observed information is singular under the full profile: the "
            "likelihood is invariant under joint rate scaling");
    const std::vector<int> idx = free_indices(profile);
    const int k = static_cast<int>(idx.size());
    std::vector<double> info(k * k, 0.0);
    const std::array<double, 5> base = th.as_array();
    for (int j = 0; j < k; ++j) {
        const double hstep = 1e-6 * std::max(1.0, std::fabs(base[idx[j]]));
        std::array<double, 5> ap = base, am = base;
        ap[idx[j]] += hstep;
        am[idx[j]] -= hstep;
        const auto sp = score(d, ThetaVector::from_array(ap));
        const auto sm = score(d, ThetaVector::from_array(am));
        for (int i = 0; i < k; ++i)
            info[i * k + j] = -(sp[idx[i]] - sm[idx[i]]) / (2.0 * hstep);
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double avg = 0.5 * (info[i * k + j] + info[j * k + i]);
            info[i * k + j] = info[j * k + i] = avg;
        }
    const std::vector<double> inv = invert_spd(std::move(info), k);
    std::array<double, 5> out{};
    for (int j = 0; j < k; ++j) {
        const double v = inv[j * k + j];
        if (!(v > 0.0))
            throw SingularHessianError("observed information matrix is not positive definite");
        out[idx[j]] = std::sqrt(v);
    }
    return out;
}

ThetaVector initial_guess(const PreparedData& d) {
    double m = 0.0;
    for (double u : d.values) m += 0.5 * (1.0 + std::sqrt(u));
    m /= static_cast<double>(d.size());
    double v = 0.0;
    for (double u : d.values) {
        const double y = 0.5 * (1.0 + std::sqrt(u));
        v += (y - m) * (y - m);
    }
    v /= static_cast<double>(d.size());
    ThetaVector th;
    if (v > 1e-12 && m > 0.0 && m < 1.0) {
        const double common = m * (1.0 - m) / v - 1.0;
        if (common > 0.0) {
            th.alpha1 = std::clamp(m * common, 0.2, 50.0);
            th.alpha2 = std::clamp((1.0 - m) * common, 0.2, 50.0);
        }
    }
    return th;
}

FitResult fit(Family family, std::vector<double> data, const FitOptions& opts) {
    if (opts.max_iter < 1) throw std::invalid_argument("fit: max_iter must be >= 1");
    if (!(opts.grad_tol > 0.0)) throw std::invalid_argument("fit: grad_tol must be positive");
    if (opts.starts < 1) throw std::invalid_argument("fit: starts must be >= 1");
    if (!(opts.start_jitter >= 0.0))
        throw std::invalid_argument("fit: start_jitter must be non-negative");

    const PreparedData d = PreparedData::from(family, std::move(data));
    if (d.values.front() == d.values.back())
        throw std::domain_error("fit requires non-degenerate data: all values are identical");
    ThetaVector base = opts.init ? *opts.init : initial_guess(d);
    check_theta(base);

    const std::vector<int> idx = free_indices(opts.profile);
    std::vector<ThetaVector> starts;
    starts.push_back(base);
    for (int s = 1; s < opts.starts; ++s) {
        Rng rng(opts.seed + static_cast<std::uint64_t>(s));
        std::array<double, 5> a = base.as_array();
        for (int j : idx) a[j] *= std::exp(opts.start_jitter * (2.0 * rng.uniform() - 1.0));
        starts.push_back(ThetaVector::from_array(a));
    }

    std::vector<SingleFit> runs(starts.size());
    if (opts.concurrent_starts && starts.size() > 1) {
        std::vector<std::future<SingleFit>> futs;
        futs.reserve(starts.size());
        for (const auto& st : starts)
            futs.push_back(std::async(std::launch::async,
                                      [&d, st, &opts] { return run_single(d, st, opts); }));
        for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = run_single(d, starts[i], opts);
    }

    // Merge: best loglik among the starts that reached a stationary point,
    // ties broken by lowest start index. A start whose ascent stopped while
    // still climbing (a divergent likelihood ridge, or an exhausted budget)
    // found no maximizer, so it only wins when no start converged; the merged
    // result then reports non-convergence with the best point so far.
    std::size_t best = runs.size();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i].converged) continue;
        if (best == runs.size() || runs[i].loglik > runs[best].loglik) best = i;
    }
    if (best == runs.size()) {
        best = 0;
        for (std::size_t i = 1; i < runs.size(); ++i)
            if (runs[i].loglik > runs[best].loglik) best = i;
    }

    FitResult out;
    out.theta = runs[best].theta;
    out.loglik = runs[best].loglik;
    out.converged = runs[best].converged;
    out.iterations = runs[best].iterations;
    out.gradient_norm = runs[best].gradient_norm;
    out.profile = opts.profile;
    out.best_start = static_cast<int>(best);
    if (opts.compute_std_errors) {
        try {
            out.std_errors = std_errors(d, out.theta, opts.profile);
        } catch (const SingularHessianError&) {
            out.hessian_singular = true;
        }
    }
    return out;
}

}  // namespace unitfold
