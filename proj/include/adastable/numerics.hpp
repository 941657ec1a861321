#pragma once

#include <adastable/error.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace adastable {

/// Tolerances for the adaptive quadrature.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 1000;
    /// The semi-infinite domain is cut where the decay envelope drops below this.
    double truncation = 1e-16;

    void validate() const;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// ln|Gamma(x)| with the sign of Gamma(x), for any real x that is not a pole.
struct SignedLogGamma {
    double log_abs;
    int sign;
};
SignedLogGamma ln_gamma_signed(double x);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (21-point) integral of f over [a, b].
/// Throws AccuracyError when the subdivision budget runs out.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Integral of f over [0, inf). The domain is truncated where `envelope` (or |f|
/// probed on a grid, when no envelope is given) falls below spec.truncation.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {},
                               const std::function<double(double)>& envelope = {});

/// Piecewise-linear inverse of a table whose y column is strictly monotone.
class MonotoneTable {
public:
    MonotoneTable() = default;
    MonotoneTable(std::vector<double> xs, std::vector<double> ys);

    /// x such that the interpolated y(x) equals `y`; clamps outside the y range.
    double invert(double y) const;

    std::span<const double> xs() const { return xs_; }
    std::span<const double> ys() const { return ys_; }
    bool increasing() const { return increasing_; }
    std::size_t size() const { return xs_.size(); }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    bool increasing_ = true;
};

inline double interp_monotone(const MonotoneTable& table, double y_query) {
    return table.invert(y_query);
}

namespace detail {

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

template <class F>
Panel gauss_kronrod21(F& f, double a, double b) {
    // Nodes ascend from the centre; Gauss nodes sit at the odd Kronrod indices.
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    static const auto& xk = Kronrod::abscissa();
    static const auto& wk = Kronrod::weights();
    static const auto& wg = Gauss::weights();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    const double fc = f(centre);
    double res_gauss = 0.0;
    double res_kronrod = wk[0] * fc;
    double res_abs = std::abs(res_kronrod);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * xk[j + 1];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        const double sum = f1[j] + f2[j];
        res_kronrod += wk[j + 1] * sum;
        res_abs += wk[j + 1] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 0) res_gauss += wg[j / 2] * sum;
    }
    const double mean = 0.5 * res_kronrod;
    double res_asc = wk[0] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        res_asc += wk[j + 1] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double scale = std::abs(half);
    res_abs *= scale;
    res_asc *= scale;
    double err = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
    return {a, b, res_kronrod * half, err};
}

/// Globally adaptive bisection driver. `panels` seeds the initial partition.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                                    int panels = 1) {
    std::vector<Panel> heap;
    heap.reserve(static_cast<std::size_t>(std::max(panels, 1) + spec.max_subdivisions) + 1);
    const auto by_error = [](const Panel& l, const Panel& r) { return l.error < r.error; };

    double total = 0.0;
    double total_err = 0.0;
    const int n0 = std::max(panels, 1);
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
        Panel p = gauss_kronrod21(f, lo, hi);
        total += p.value;
        total_err += p.error;
        heap.push_back(p);
    }
    std::make_heap(heap.begin(), heap.end(), by_error);

    QuadratureResult out;
    int splits = 0;
    while (true) {
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (total_err <= target) {
            out.converged = true;
            break;
        }
        if (splits >= spec.max_subdivisions) break;
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_error);
            break;
        }
        const Panel left = gauss_kronrod21(f, worst.a, mid);
        const Panel right = gauss_kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        ++splits;
    }
    // Re-sum to shed the drift of the running totals.
    total = 0.0;
    total_err = 0.0;
    for (const Panel& p : heap) {
        total += p.value;
        total_err += p.error;
    }
    out.value = total;
    out.error = total_err;
    out.subdivisions = splits;
    if (!out.converged) {
        out.converged = total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    }
    return out;
}

}  // namespace detail
}  // namespace adastable
