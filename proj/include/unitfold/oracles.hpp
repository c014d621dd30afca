#pragma once

#include "unitfold/dists.hpp"

#include <cstdint>
#include <functional>

namespace unitfold {

// P(a < U <= b) obtained by integrating the gamma-ratio density over the
// preimage of the interval under the fold map. Shares no code with cdf,
// which makes it usable as a cross-check against it.
double interval_prob(const UnitDistSpec& spec, double a, double b, const QuadConfig& q = {});

// A scalar functional of the distribution, evaluated by Monte Carlo.
struct Functional {
    std::function<double(double)> h;
    static Functional mean();
    static Functional raw_moment(int n);
    static Functional interval(double a, double b);
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

// Sample mean of f.h over n draws plus its standard error. n must be at
// least 1000 so the error estimate means something.
McEstimate mc_estimate(const UnitDistSpec& spec, const Functional& f, std::size_t n,
                       std::uint64_t seed, const QuadConfig& q = {});

// xi(p) as a nested quadrature at unit rates: the outer integral runs
// y^p times the probability that the ratio falls outside (1-y, y), the
// inner integral evaluates that probability from the density directly.
// Deliberately avoids the incomplete beta function.
double nested_quadrature_xi(double p, double alpha1, double alpha2, const QuadConfig& q = {});

}  // namespace unitfold
