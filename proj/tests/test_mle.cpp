#include "doctest.h"

#include "unitfold/dists.hpp"
#include "unitfold/errors.hpp"
#include "unitfold/mle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

using namespace unitfold;

namespace {

std::vector<double> draw(Family f, const ThetaVector& th, std::size_t n, std::uint64_t seed) {
    return sample(th.spec(f), n, seed).values;
}

// Fixed-shape downhill simplex over k log-parameters, small and dependency
// free; good enough to localize smooth 2-parameter optima to ~1e-6.
template <class F>
std::array<double, 2> maximize2(F&& negll, std::array<double, 2> start) {
    const int kIter = 400;
    std::array<std::array<double, 2>, 3> simplex{
        start, {start[0] + 0.25, start[1]}, {start[0], start[1] + 0.25}};
    std::array<double, 3> val{};
    for (int i = 0; i < 3; ++i) val[i] = negll(simplex[i]);
    for (int it = 0; it < kIter; ++it) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
        const auto& best = simplex[ord[0]];
        const auto& worst = simplex[ord[2]];
        std::array<double, 2> centroid{};
        for (int i = 0; i < 3; ++i)
            if (i != ord[2])
                for (int d = 0; d < 2; ++d) centroid[d] += 0.5 * simplex[i][d];
        std::array<double, 2> refl{}, exp2{}, contr{};
        for (int d = 0; d < 2; ++d) {
            refl[d] = centroid[d] + (centroid[d] - worst[d]);
            exp2[d] = centroid[d] + 2.0 * (centroid[d] - worst[d]);
            contr[d] = centroid[d] - 0.5 * (centroid[d] - worst[d]);
        }
        const double fr = negll(refl);
        if (fr < val[ord[0]]) {
            const double fe = negll(exp2);
            simplex[ord[2]] = fe < fr ? exp2 : refl;
            val[ord[2]] = std::min(fe, fr);
        } else if (fr < val[ord[1]]) {
            simplex[ord[2]] = refl;
            val[ord[2]] = fr;
        } else {
            const double fc = negll(contr);
            if (fc < val[ord[2]]) {
                simplex[ord[2]] = contr;
                val[ord[2]] = fc;
            } else {
                for (int i : {ord[1], ord[2]}) {
                    for (int d = 0; d < 2; ++d)
                        simplex[i][d] = best[d] + 0.5 * (simplex[i][d] - best[d]);
                    val[i] = negll(simplex[i]);
                }
            }
        }
        (void)it;
    }
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
    return simplex[ord[0]];
}

}  // namespace

TEST_CASE("loglik: uniform case is zero, single datum, additivity in the sample") {
    const ThetaVector uni{1, 1, 1, 1, 0.5};
    const std::vector<double> data{0.12, 0.5, 0.88, 0.999};
    CHECK(loglik(Family::W, data, uni) == doctest::Approx(0.0).epsilon(1e-12));

    const ThetaVector th{2, 3, 1, 1.5, 0.8};
    const std::vector<double> one{0.37};
    CHECK(loglik(Family::Z, one, th) ==
          doctest::Approx(std::log(pdf(th.spec(Family::Z), 0.37))).epsilon(1e-12));

    std::vector<double> doubled = data;
    doubled.insert(doubled.end(), data.begin(), data.end());
    CHECK(loglik(Family::W, doubled, th) ==
          doctest::Approx(2.0 * loglik(Family::W, data, th)).epsilon(1e-12));
}

TEST_CASE("loglik rate-scaling flat direction") {
    const auto data = draw(Family::W, {2, 3, 1, 1.5, 1}, 400, 5);
    const ThetaVector base{1.8, 2.5, 1.2, 1.9, 0.9};
    const double ref = loglik(Family::W, data, base);
    for (double c : {0.5, 2.0}) {
        const ThetaVector scaled{1.8, 2.5, c * 1.2, c * 1.9, 0.9};
        CHECK(loglik(Family::W, data, scaled) == doctest::Approx(ref).epsilon(1e-9));
    }
    // same statement through the analytic score: the directional derivative
    // along (0, 0, lambda1, lambda2, 0) vanishes
    const auto sc = score(Family::W, data, base);
    const double t1 = sc[2] * base.lambda1, t2 = sc[3] * base.lambda2;
    CHECK(std::fabs(t1 + t2) < 1e-8 * (1.0 + std::fabs(t1) + std::fabs(t2)));
}

TEST_CASE("score matches central finite differences") {
    const auto wdata = draw(Family::W, {2, 3, 1, 1.5, 1}, 60, 11);
    const auto zdata = draw(Family::Z, {0.8, 1.6, 1, 2, 0.6}, 60, 12);
    struct Inst {
        Family f;
        const std::vector<double>* data;
        ThetaVector th;
    };
    const Inst instances[] = {
        {Family::W, &wdata, {2.1, 2.7, 1.1, 1.4, 0.95}},
        {Family::W, &wdata, {0.7, 1.2, 0.9, 2.0, 0.5}},
        {Family::Z, &zdata, {0.9, 1.5, 1.0, 2.1, 0.66}},
        {Family::Z, &zdata, {2.0, 0.6, 1.5, 1.0, 1.4}},
    };
    for (const auto& inst : instances) {
        const auto sc = score(inst.f, *inst.data, inst.th);
        auto arr = inst.th.as_array();
        for (int j = 0; j < 5; ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(arr[j]));
            auto hi = arr, lo = arr;
            hi[j] += h;
            lo[j] -= h;
            const double fd = (loglik(inst.f, *inst.data, ThetaVector::from_array(hi)) -
                               loglik(inst.f, *inst.data, ThetaVector::from_array(lo))) /
                              (2.0 * h);
            CHECK(sc[j] == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("fit is bitwise equivariant under data permutation") {
    auto data = draw(Family::Z, {1.5, 1.0, 1, 2, 0.8}, 600, 21);
    FitOptions opts;
    opts.starts = 2;
    const auto r1 = fit(Family::Z, data, opts);
    std::mt19937_64 g(7);
    std::shuffle(data.begin(), data.end(), g);
    const auto r2 = fit(Family::Z, data, opts);
    CHECK(r1.theta.alpha1 == r2.theta.alpha1);
    CHECK(r1.theta.alpha2 == r2.theta.alpha2);
    CHECK(r1.theta.lambda2 == r2.theta.lambda2);
    CHECK(r1.theta.r == r2.theta.r);
    CHECK(r1.loglik == r2.loglik);
    CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("fit rejects degenerate data and out-of-range data") {
    const std::vector<double> same(50, 0.25);
    CHECK_THROWS_AS(fit(Family::W, same, {}), std::domain_error);
    const std::vector<double> bad{0.2, 1.0, 0.3};
    CHECK_THROWS_AS(fit(Family::W, bad, {}), std::domain_error);
}

TEST_CASE("fit from the truth ascends and stays at a stationary point") {
    const ThetaVector truth{2, 3, 1, 1.5, 1};
    const auto data = draw(Family::W, truth, 1500, 31);
    FitOptions opts;
    opts.starts = 1;
    opts.init = truth;
    const auto res = fit(Family::W, data, opts);
    CHECK(res.converged);
    CHECK(res.loglik >= loglik(Family::W, data, truth) - 1e-8);
    // stationarity at the optimum, free coordinates only
    const auto sc = score(Family::W, data, res.theta);
    for (int j : {0, 1, 3, 4}) CHECK(std::fabs(sc[j]) < 1e-5);
    CHECK(res.theta.lambda1 == 1.0);
}

TEST_CASE("truth beats large single-coordinate perturbations in aggregate") {
    // Pooled over five samples the Kullback-Leibler gap dominates sampling
    // noise for every coordinate; per-sample comparisons can legitimately
    // flip for the weakly identified shape/rate directions.
    const ThetaVector truth{2, 3, 1, 1.5, 1};
    for (double f : {0.6, 1.5})
        for (int j = 0; j < 5; ++j) {
            double gap = 0.0;
            for (int rep = 0; rep < 5; ++rep) {
                const auto data = draw(Family::W, truth, 1000, 100 + rep);
                auto pert = truth.as_array();
                pert[j] *= f;
                gap += loglik(Family::W, data, truth) -
                       loglik(Family::W, data, ThetaVector::from_array(pert));
            }
            INFO("factor ", f, " coord ", j, " gap ", gap);
            CHECK(gap > 0.0);
        }
}

TEST_CASE("std_errors: positive under lambda1_fixed, singular under full") {
    const ThetaVector truth{2, 3, 1, 1.5, 1};
    const auto data = draw(Family::W, truth, 1500, 41);
    FitOptions opts;
    opts.starts = 1;
    opts.init = truth;
    opts.compute_std_errors = true;
    const auto res = fit(Family::W, data, opts);
    REQUIRE(res.std_errors.has_value());
    const auto& se = *res.std_errors;
    CHECK(se[2] == 0.0);  // pinned coordinate
    for (int j : {0, 1, 3, 4}) {
        CHECK(se[j] > 0.0);
        CHECK(std::isfinite(se[j]));
    }

    const auto prepared = PreparedData::from(Family::W, data);
    CHECK_THROWS_AS(std_errors(prepared, res.theta, FitProfile::full), SingularHessianError);

    FitOptions full = opts;
    full.profile = FitProfile::full;
    const auto fres = fit(Family::W, data, full);
    CHECK(fres.hessian_singular);
    CHECK_FALSE(fres.std_errors.has_value());
}

TEST_CASE("standard errors shrink like one over sqrt n") {
    // Needs a well-identified instance and samples large enough for the
    // asymptotic regime; small samples of this family routinely land on
    // near-flat likelihood directions where the ratio is meaningless.
    const ThetaVector truth{0.5, 1.2, 1, 4, 0.7};
    FitOptions opts;
    opts.starts = 1;
    opts.init = truth;
    opts.compute_std_errors = true;

    const auto d1 = draw(Family::Z, truth, 5000, 51);
    const auto d4 = draw(Family::Z, truth, 20000, 52);
    const auto r1 = fit(Family::Z, d1, opts);
    const auto r4 = fit(Family::Z, d4, opts);
    REQUIRE(r1.std_errors.has_value());
    REQUIRE(r4.std_errors.has_value());
    for (int j : {0, 1, 3, 4}) {
        const double ratio = (*r1.std_errors)[j] / (*r4.std_errors)[j];
        CHECK(ratio > 1.5);  // 2.0 within 25 percent
        CHECK(ratio < 2.5);
    }
}

TEST_CASE("two-shape profile fit equals an independent folded-beta maximizer") {
    // with rates pinned at 1 and r pinned at truth, the family loglik differs
    // from the folded-beta loglik by a constant in the shapes, so both
    // objectives share their argmax exactly
    const ThetaVector truth{2.0, 3.5, 1, 1, 1.0};
    const auto data = draw(Family::W, truth, 2000, 61);
    const double r = truth.r;

    auto lib_obj = [&](const std::array<double, 2>& la) {
        const ThetaVector th{std::exp(la[0]), std::exp(la[1]), 1.0, 1.0, r};
        return -loglik(Family::W, data, th);
    };
    auto beta_obj = [&](const std::array<double, 2>& la) {
        const double a1 = std::exp(la[0]), a2 = std::exp(la[1]);
        const double lb = std::lgamma(a1) + std::lgamma(a2) - std::lgamma(a1 + a2);
        double acc = 0.0;
        for (double w : data) {
            const double v = 0.5 * (1.0 + std::pow(w, 0.5 / r));
            const double f1 = std::exp((a1 - 1.0) * std::log(v) +
                                       (a2 - 1.0) * std::log1p(-v) - lb);
            const double f2 = std::exp((a1 - 1.0) * std::log1p(-v) +
                                       (a2 - 1.0) * std::log(v) - lb);
            acc += std::log(f1 + f2);
        }
        return -acc;
    };

    const auto m1 = maximize2(lib_obj, {std::log(2.0), std::log(3.0)});
    const auto m2 = maximize2(beta_obj, {std::log(2.0), std::log(3.0)});
    const double a1_lib = std::exp(m1[0]), a2_lib = std::exp(m1[1]);
    const double a1_beta = std::exp(m2[0]), a2_beta = std::exp(m2[1]);
    const bool direct = std::fabs(a1_lib - a1_beta) < 1e-4 && std::fabs(a2_lib - a2_beta) < 1e-4;
    const bool swapped = std::fabs(a1_lib - a2_beta) < 1e-4 && std::fabs(a2_lib - a1_beta) < 1e-4;
    CHECK((direct || swapped));
}

TEST_CASE("initial_guess lands at positive parameters inside the box") {
    const auto data = draw(Family::Z, {1.2, 2.0, 1, 1.5, 0.7}, 300, 71);
    const auto prepared = PreparedData::from(Family::Z, data);
    const auto th = initial_guess(prepared);
    CHECK(th.alpha1 > 0);
    CHECK(th.alpha2 > 0);
    CHECK(th.lambda1 == 1.0);
    CHECK(th.r > 0);
}
