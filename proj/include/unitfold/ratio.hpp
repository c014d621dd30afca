#pragma once

#include "unitfold/quadrature.hpp"

namespace unitfold {

// Shapes and rates of the two independent gamma variates X and Y; densities
// use the rate convention, f(x) proportional to x^(alpha-1) exp(-lambda x).
// The ratio V = X/(X+Y) depends on the rates only through lambda2/lambda1.
struct GammaRatioParams {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    void validate() const;
};

// Exponent of the folding maps; must be positive and finite.
struct TransformPower {
    double r = 1.0;

    void validate() const;
};

// s(x) = (1 - 4x(1-x))^r = ((1-2x)^2)^r and t(x) = 1 - (4x(1-x))^r on (0,1).
// Both fold the unit interval around 1/2: s(x) = s(1-x), t(x) = t(1-x).
double s_transform(double x, TransformPower r);
double t_transform(double x, TransformPower r);

// Upper preimage branches: w_sub(w) = (1 + w^(1/2r))/2 and
// z_sub(z) = (1 + sqrt(1 - (1-z)^(1/r)))/2, both landing in (1/2, 1).
double w_sub(double w, TransformPower r);
double z_sub(double z, TransformPower r);

// G(x) = A(x) + A(1-x) with A(x) = x^(a1-1) (1-x)^(a2-1) / D(x)^(a1+a2),
// D(x) = x/lambda2 + (1-x)/lambda1.  Satisfies G(x) = G(1-x).
double g_kernel(double x, const GammaRatioParams& p);
double log_g_kernel(double x, const GammaRatioParams& p);

// Same kernel with 1-x supplied by the caller, for use when the smaller of
// the pair is known to more relative precision than 1-x would carry.
double log_g_kernel_pair(double x, double xm, const GammaRatioParams& p);

// Density and distribution function of V = X/(X+Y).
double ratio_pdf(double v, const GammaRatioParams& p);
double log_ratio_pdf(double v, const GammaRatioParams& p);

// Density evaluated at v = 1 - eps with eps given directly, so points close
// to 1 keep full relative precision in their distance to the endpoint.
double ratio_pdf_complement(double eps, const GammaRatioParams& p);

// Equal rates reduce exactly to the regularized incomplete beta; otherwise
// the density is integrated adaptively with endpoint grading.
double ratio_cdf(double v, const GammaRatioParams& p, const QuadConfig& q = {});

}  // namespace unitfold
