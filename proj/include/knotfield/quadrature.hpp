#pragma once

#include "knotfield/errors.hpp"
#include "knotfield/vec3.hpp"

#include <array>
#include <cmath>
#include <string>

namespace knotfield {

template <class T>
struct QuadratureResult {
    T value{};
    /// Sum over accepted panels of |halves - whole|, an upper bound in the
    /// asymptotic regime.
    double error{0.0};
    long evaluations{0};
};

struct QuadratureOptions {
    double abs_tol{1e-10};
    int max_depth{40};
    /// Panels are split unconditionally down to this depth.
    int min_depth{2};
};

namespace detail {

inline double error_norm(double v) { return std::fabs(v); }
inline double error_norm(const Vec3& v) { return max_abs(v); }

// 5-point Gauss-Legendre on [-1, 1]; exact for degree 9.
inline constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

// Halving reduces the 5-point rule error by 2^10.
inline constexpr double kRichardsonDivisor = 1023.0;

template <class T, class F>
T gauss_panel(F& f, double a, double b, long& evals) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    T sum{};
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
        sum += f(mid + half * kGaussNodes[i]) * kGaussWeights[i];
    }
    evals += static_cast<long>(kGaussNodes.size());
    return sum * half;
}

template <class T, class F>
void adapt(F& f, double a, double b, const T& whole, double tol, int depth,
           const QuadratureOptions& opt, QuadratureResult<T>& acc) {
    const double mid = 0.5 * (a + b);
    const T left = gauss_panel<T>(f, a, mid, acc.evaluations);
    const T right = gauss_panel<T>(f, mid, b, acc.evaluations);
    const T halves = left + right;
    const T diff = halves - whole;
    const double err = error_norm(diff);
    if (depth >= opt.min_depth && err <= tol) {
        acc.value += halves + diff * (1.0 / kRichardsonDivisor);
        acc.error += err;
        return;
    }
    if (depth >= opt.max_depth || !(mid > a && mid < b)) {
        throw QuadratureError("adaptive quadrature did not reach tolerance " +
                              std::to_string(tol) + " on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "] (error " + std::to_string(err) + ")");
    }
    adapt(f, a, mid, left, 0.5 * tol, depth + 1, opt, acc);
    adapt(f, mid, b, right, 0.5 * tol, depth + 1, opt, acc);
}

}  // namespace detail

/// Adaptive interval-halving quadrature of f over [a, b] with a fixed 5-point
/// Gauss-Legendre rule and Richardson correction. T is double or Vec3; the
/// tolerance applies per component. Throws QuadratureError when max_depth is hit.
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt) {
    if (!(b > a)) {
        throw QuadratureError("empty integration interval");
    }
    if (!(opt.abs_tol > 0.0)) {
        throw QuadratureError("quadrature tolerance must be positive");
    }
    QuadratureResult<T> acc;
    const T whole = detail::gauss_panel<T>(f, a, b, acc.evaluations);
    detail::adapt(f, a, b, whole, opt.abs_tol, 0, opt, acc);
    return acc;
}

}  // namespace knotfield
