#pragma once

// Reference computations for the tests. They go through Boost.Math quadrature so
// that the library's own integrator is never its own oracle.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                        unsigned max_depth = 25) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol);
}

/// Integral over [0, inf) through z = e^u, u in [u_lo, u_hi].
inline double half_line(const std::function<double(double)>& f, double u_lo, double u_hi, double tol = 1e-13) {
    return integrate([&](double u) {
        const double z = std::exp(u);
        return f(z) * z;
    }, u_lo, u_hi, tol);
}

/// Inversion integral (1/pi) int_0^T exp(-t^a) cos(z t - b t^a) dt of the
/// standardized S1 stable density, b = beta tan(pi alpha / 2). T is where the
/// envelope is below 1e-18.
inline double stable_pdf(double z, double alpha, double beta) {
    const double b = beta * std::tan(std::numbers::pi * alpha / 2.0);
    const double upper = std::pow(41.5, 1.0 / alpha);
    const int pieces = 64;
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double lo = upper * i / pieces;
        const double hi = upper * (i + 1) / pieces;
        total += integrate([&](double t) {
            return std::exp(-std::pow(t, alpha)) * std::cos(z * t - b * std::pow(t, alpha));
        }, lo, hi, 1e-13, 15);
    }
    return total / std::numbers::pi;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double gaussian_var2_pdf(double z) { return std::exp(-z * z / 4.0) / (2.0 * std::sqrt(std::numbers::pi)); }

inline double cauchy_pdf(double z) { return 1.0 / (std::numbers::pi * (1.0 + z * z)); }

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size());
}

inline double excess_kurtosis(const std::vector<double>& xs) {
    const double m = mean(xs);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = (x - m) * (x - m);
        m2 += d;
        m4 += d * d;
    }
    m2 /= static_cast<double>(xs.size());
    m4 /= static_cast<double>(xs.size());
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace oracle
