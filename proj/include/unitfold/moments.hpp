#pragma once

#include "unitfold/dists.hpp"
#include "unitfold/quadrature.hpp"
#include "unitfold/ratio.hpp"

namespace unitfold {

// Laplace-type moments of the two gamma variates at argument x >= 0:
// E[exp(-Xx)], E[X exp(-Xx)] and the Y counterparts.
struct LaplaceMoments {
    double exp_x;
    double x_exp_x;
    double exp_y;
    double y_exp_y;
};
LaplaceMoments laplace_moments(const GammaRatioParams& p, double x);

// The two nested-truncation integrals
//   u_weighted(x) = E[ X exp(-(X+Y)x) 1{Y < X} ]
//   v_weighted(x) = E[ Y exp(-(X+Y)x) 1{Y < X} ]
// in closed hypergeometric form.
struct PartialLaplaceIntegrals {
    double u_weighted;
    double v_weighted;
};
PartialLaplaceIntegrals partial_laplace_integrals(const GammaRatioParams& p, double x);

// Mean of the W family at r = 1/2.  Valid for 1/3 < lambda2/lambda1 < 2:
// two closed tail-integral terms, two numeric semi-infinite integrals, and a
// final closed tail-integral term.
double mean_w_half(const GammaRatioParams& p, const QuadConfig& q = {});

// Equal-rate reduction of mean_w_half; rates drop out entirely.
double mean_w_half_equal_rates(double alpha1, double alpha2);

// E(W^n) for integer r >= 1 and equal rates, as an alternating binomial sum
// over xi values.  est_rel_err (optional) receives a cancellation estimate;
// values above 1e-6 signal that the alternating sum lost too many digits.
double moment_w_integer_r(double alpha1, double alpha2, int r, int n,
                          double* est_rel_err = nullptr);

// Mean of the Z family at r = 1/2.  Valid for lambda2/lambda1 < 2.
double mean_z_half(const GammaRatioParams& p);

// xi(p) = int_{1/2}^1 y^p (1 - F_ratio(y) + F_ratio(1-y)) dy at equal rates,
// in closed incomplete-beta form.  Requires p > max{-1, -1-a1, -1-a2}.
double xi(double p, double alpha1, double alpha2);

// E(Z^n) for integer r >= 1 and equal rates.  Two candidate expansions are
// evaluated: a multinomial form and a binomial form that carries the
// substitution Jacobian.  The value returned is whichever agrees with direct
// quadrature; they differ, and the binomial form is the one that matches.
struct ZMomentArbitration {
    double value;
    double binomial_form;
    double multinomial_form;
    double quadrature_ref;
    bool forms_agree;
    bool binomial_chosen;
};
ZMomentArbitration moment_z_integer_r_arbitrated(double alpha1, double alpha2, int r, int n,
                                                 const QuadConfig& q = {});
double moment_z_integer_r(double alpha1, double alpha2, int r, int n);

// |lhs - rhs| of the truncated-moment identity
//   E(V^p 1{eps<V<delta}) = eps^p P(V>eps) - delta^p P(V>delta)
//                           + p int_eps^delta u^(p-1) P(V>u) du
// evaluated sample-free from cdf survival values and quadrature.
double truncated_moment_residual(const UnitDistSpec& spec, double p, double eps, double delta,
                                 const QuadConfig& q = {});

enum class MomentMethod { automatic, closed_form, quadrature };

struct MomentRequest {
    UnitDistSpec spec;
    int order = 1;
    MomentMethod method = MomentMethod::automatic;
};

struct MomentResult {
    double value;
    MomentMethod used;  // closed_form or quadrature
};

// Dispatcher used by the CLI: picks the closed form when the request falls in
// its validity region, otherwise quadrature; explicit closed_form requests
// outside validity raise a domain error naming the violated constraint.
MomentResult moment(const MomentRequest& req, const QuadConfig& q = {});

}  // namespace unitfold
