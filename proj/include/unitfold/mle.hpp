#pragma once

#include "unitfold/dists.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace unitfold {

enum class FitProfile { full, lambda1_fixed };

// Parameter point for likelihood work, always in the order
// (alpha1, alpha2, lambda1, lambda2, r).
struct ThetaVector {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double r = 1.0;

    std::array<double, 5> as_array() const { return {alpha1, alpha2, lambda1, lambda2, r}; }
    static ThetaVector from_array(const std::array<double, 5>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
    UnitDistSpec spec(Family f) const { return {f, {alpha1, alpha2, lambda1, lambda2}, {r}}; }
    void validate() const { spec(Family::W).validate(); }
};

// Sorted copy of the sample plus cached logs. Sorting makes every
// downstream reduction independent of input order, so fits are
// bitwise reproducible under permutation of the data file.
struct PreparedData {
    Family family = Family::W;
    std::vector<double> values;
    std::vector<double> log_u;
    std::vector<double> log1m_u;

    static PreparedData from(Family f, std::vector<double> data);
    std::size_t size() const { return values.size(); }
};

struct FitOptions {
    FitProfile profile = FitProfile::lambda1_fixed;
    int max_iter = 500;
    double grad_tol = 1e-6;
    double loglik_rel_tol = 1e-10;
    int starts = 5;
    double start_jitter = 0.5;
    std::uint64_t seed = 20240901;
    bool compute_std_errors = false;
    bool concurrent_starts = false;
    std::optional<ThetaVector> init;
};

struct FitResult {
    ThetaVector theta;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    // Max-norm of the score restricted to the coordinates the profile
    // actually optimizes.
    double gradient_norm = 0.0;
    FitProfile profile = FitProfile::lambda1_fixed;
    // Order (alpha1, alpha2, lambda1, lambda2, r); the lambda1 slot is 0
    // under the lambda1_fixed profile.
    std::optional<std::array<double, 5>> std_errors;
    bool hessian_singular = false;
    int best_start = 0;
};

// Returned instead of -inf when the likelihood is not evaluable at a
// parameter point, so line searches can back away from it.
inline constexpr double kLoglikFloor = -1e300;

// Sum of log densities over the sample; kLoglikFloor if any point fails
// to evaluate finitely.
double loglik(const PreparedData& d, const ThetaVector& th);
double loglik(Family family, const std::vector<double>& data, const ThetaVector& th);

// Analytic gradient of loglik in (alpha1, alpha2, lambda1, lambda2, r).
std::array<double, 5> score(const PreparedData& d, const ThetaVector& th);
std::array<double, 5> score(Family family, const std::vector<double>& data,
                            const ThetaVector& th);

// Standard errors from the observed information (finite differences of
// the analytic score). Throws SingularHessianError when the information
// matrix is not invertible; the full profile always is, since scaling
// both rates leaves the likelihood unchanged.
std::array<double, 5> std_errors(const PreparedData& d, const ThetaVector& th,
                                 FitProfile profile);

// Moment-matching start point: fold the data through the r=1 upper
// branch and fit a beta by mean and variance. Rates start at 1.
ThetaVector initial_guess(const PreparedData& d);

// Multi-start quasi-Newton maximization in log-parameter space. Iteration
// stops when the score max-norm drops below grad_tol or the relative
// loglik change stays below loglik_rel_tol; converged is true only for a
// stop at a stationary point (score max-norm below grad_tol), and the
// merge across starts prefers the best converged one. A result with
// converged false is the best point seen before the budget ran out.
FitResult fit(Family family, std::vector<double> data, const FitOptions& opts = {});

}  // namespace unitfold
