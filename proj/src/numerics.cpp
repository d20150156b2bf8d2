#include "trunctail/numerics.hpp"

#include "trunctail/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace trunctail {

namespace {

constexpr double kGuard = 1e-12;

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    if (a == b) {
        return {};
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 25, rel_tol, &error, &l1);
    if (!std::isfinite(value)) {
        throw NumericError("integrate: non-finite result on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }
    // |Kronrod - Gauss| bounds the Gauss error; the Kronrod value returned is
    // far more accurate, so this only trips on genuinely unresolved integrands.
    const double abs_error = error;
    if (abs_error > 10.0 * rel_tol * std::max(std::abs(value), l1)) {
        throw NumericError("integrate: tolerance not reached (estimated error " +
                           std::to_string(abs_error) + ")");
    }
    return {value, abs_error};
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol)
{
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw ArgumentError("bisect: interval does not bracket a root");
    }
    while (hi - lo > abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fmid = f(mid);
        if (fmid == 0.0) {
            return mid;
        }
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void CompensatedSum::add(double x) noexcept
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double pairwise_sum(std::span<const double> values) noexcept
{
    constexpr std::size_t block = 128;
    if (values.size() <= block) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

long long floor_guarded(double x) noexcept
{
    const double r = std::round(x);
    if (std::abs(x - r) <= kGuard * std::max(1.0, std::abs(x))) {
        return static_cast<long long>(r);
    }
    return static_cast<long long>(std::floor(x));
}

long long ceil_guarded(double x) noexcept
{
    const double r = std::round(x);
    if (std::abs(x - r) <= kGuard * std::max(1.0, std::abs(x))) {
        return static_cast<long long>(r);
    }
    return static_cast<long long>(std::ceil(x));
}

}  // namespace trunctail
