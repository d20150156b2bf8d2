#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace trunctail {

struct Integral {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod integration of a smooth integrand on [a, b].
/// Endpoint singularities must be removed by the caller (substitution)
/// before calling. Throws NumericError if the estimated relative error
/// exceeds `rel_tol` after the maximum refinement depth.
Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

/// Bisection for a sign change of f on [lo, hi]; stops when the bracket
/// is narrower than abs_tol. Throws ArgumentError when f(lo) and f(hi)
/// have the same sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol);

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values) noexcept;

/// floor(x) that treats values within a few ulps below an integer as that
/// integer, so products such as n * (m / n) land on m.
long long floor_guarded(double x) noexcept;

/// ceil(x) with the mirror-image guard of floor_guarded.
long long ceil_guarded(double x) noexcept;

}  // namespace trunctail
