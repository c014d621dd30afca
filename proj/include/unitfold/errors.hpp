#pragma once

#include <stdexcept>
#include <string>

namespace unitfold {

// Adaptive quadrature gave up before reaching the requested tolerance.
// Carries the best value found and the error estimate it achieved.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double value)
        : std::runtime_error(what), achieved_error(achieved), best_value(value) {}
    double achieved_error;
    double best_value;
};

// A series or continued fraction exceeded its iteration budget.
class NonConvergenceError : public std::runtime_error {
public:
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Root finding ran out of iterations; carries the final bracket.
class RootBracketError : public std::runtime_error {
public:
    RootBracketError(const std::string& what, double lo_, double hi_)
        : std::runtime_error(what), lo(lo_), hi(hi_) {}
    double lo;
    double hi;
};

// Observed information matrix is numerically singular at the requested point.
class SingularHessianError : public std::runtime_error {
public:
    explicit SingularHessianError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace unitfold
