#pragma once

#include "unitfold/quadrature.hpp"
#include "unitfold/ratio.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace unitfold {

enum class Family { W, Z };

// One member of either family: the gamma-ratio parameters plus the folding
// power.  W applies s_transform to X/(X+Y), Z applies t_transform.
struct UnitDistSpec {
    Family family = Family::W;
    GammaRatioParams params;
    TransformPower r;

    void validate() const {
        params.validate();
        r.validate();
    }
};

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    UnitDistSpec spec;
};

double pdf(const UnitDistSpec& spec, double u);
double log_pdf(const UnitDistSpec& spec, double u);

// Density at u = 1 - eps with eps given directly; preserves the distance to
// the right endpoint that forming 1 - eps in the caller would round away.
double pdf_complement(const UnitDistSpec& spec, double eps);
double log_pdf_complement(const UnitDistSpec& spec, double eps);

// F(u) = ratio_cdf(y) - ratio_cdf(1-y) with y the upper preimage branch.
double cdf(const UnitDistSpec& spec, double u, const QuadConfig& q = {});

// Monotone bisection/secant hybrid on cdf(u) - prob, bracket (1e-12, 1-1e-12),
// stops once |cdf(u) - prob| <= 1e-9; throws RootBracketError after 200 steps.
double quantile(const UnitDistSpec& spec, double prob, const QuadConfig& q = {});

// Exact sampler: X and Y gamma draws pushed through the family transform.
// Draws that fold onto the interval boundary in floating point are redrawn.
SampleBatch sample(const UnitDistSpec& spec, std::size_t n, std::uint64_t seed);

// E(V^order) by graded adaptive quadrature, split at 1/2; order 0 integrates
// the bare density and is used for normalization checks.
double moment_numeric(const UnitDistSpec& spec, int order, const QuadConfig& q = {});

// Power-law exponents {p0, p1} of the density at the endpoints: pdf behaves
// like u^(p0-1) near 0 and (1-u)^(p1-1) near 1.  Shared by the quadrature
// grading and the curve-emission grids.
std::pair<double, double> edge_powers(const UnitDistSpec& spec);

}  // namespace unitfold
