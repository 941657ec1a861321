#include <adastable/baselines.hpp>

#include <adastable/error.hpp>
#include <adastable/stable.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace adastable {

void GarchParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("GARCH omega must be positive");
    if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("GARCH a and b must be non-negative");
    if (!(a + b < 1.0)) throw DomainError("GARCH requires a + b < 1");
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double mean_static_loglik(std::span<const double> xs, const StableTable& law, double log_sigma) {
    const double sigma = std::exp(log_sigma);
    double total = 0.0;
    for (const double x : xs) total += law.logpdf(x / sigma);
    return total / static_cast<double>(xs.size()) - log_sigma;
}

}  // namespace

StaticSigmaFit fit_static_sigma_mle(std::span<const double> xs, double alpha, double beta) {
    if (xs.empty()) throw DomainError("fit_static_sigma_mle: empty sample");
    validate_shape(alpha, beta);
    std::vector<double> mags;
    mags.reserve(xs.size());
    for (const double x : xs) {
        if (!std::isfinite(x)) throw DomainError("fit_static_sigma_mle: non-finite observation");
        if (x != 0.0) mags.push_back(std::abs(x));
    }
    if (mags.empty()) throw DegenerateSampleError("fit_static_sigma_mle: all observations are zero");
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    const double centre = std::log(mags[mags.size() / 2]);

    const StableTable law(alpha, beta);
    auto f = [&](double s) { return mean_static_loglik(xs, law, s); };

    // Bracket: walk outward until the middle point beats both ends.
    double lo = centre - 3.0;
    double hi = centre + 3.0;
    for (int guard = 0; guard < 40; ++guard) {
        const double mid = 0.5 * (lo + hi);
        const double f_lo = f(lo);
        const double f_mid = f(mid);
        const double f_hi = f(hi);
        if (f_mid >= f_lo && f_mid >= f_hi) break;
        if (f_lo > f_hi) {
            lo -= 3.0;
        } else {
            hi += 3.0;
        }
    }

    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    // ln-sigma width 1e-8 keeps sigma within 1e-8 relative, below the 1e-6 target.
    while (hi - lo > 1e-8) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    const double best = f1 >= f2 ? x1 : x2;
    return {std::exp(best), std::max(f1, f2)};
}

double garch11_loglik(std::span<const double> xs, const GarchParams& params, std::size_t prefix) {
    params.validate();
    if (prefix < 2) throw DomainError("garch11_loglik: prefix must hold at least 2 points");
    if (xs.size() <= prefix) throw DomainError("garch11_loglik: series shorter than the prefix");
    const auto head = xs.first(prefix);
    const double mean = std::accumulate(head.begin(), head.end(), 0.0) / static_cast<double>(prefix);
    double var0 = 0.0;
    for (const double x : head) var0 += (x - mean) * (x - mean);
    var0 /= static_cast<double>(prefix - 1);
    if (!(var0 > 0.0)) var0 = params.omega;

    constexpr double log_2pi = 1.8378770664093453;
    double v = var0;
    double total = 0.0;
    for (std::size_t t = 1; t < xs.size(); ++t) {
        v = params.omega + params.a * xs[t - 1] * xs[t - 1] + params.b * v;
        if (t >= prefix) total += -0.5 * (log_2pi + std::log(v) + xs[t] * xs[t] / v);
    }
    return total / static_cast<double>(xs.size() - prefix);
}

namespace {

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

GarchParams from_coords(const std::array<double, 3>& u) {
    const double persistence = logistic(u[1]);
    const double share = logistic(u[2]);
    return {std::exp(u[0]), persistence * share, persistence * (1.0 - share)};
}

}  // namespace

GarchFit garch11_fit(std::span<const double> xs, std::size_t prefix) {
    if (xs.size() < 1000) throw DomainError("garch11_fit: needs at least 1000 observations");
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double var = 0.0;
    for (const double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    if (!(var > 0.0)) throw DegenerateSampleError("garch11_fit: zero sample variance");

    auto objective = [&](const std::array<double, 3>& u) {
        const GarchParams p = from_coords(u);
        if (!(p.omega > 0.0) || !(p.a + p.b < 1.0)) return std::numeric_limits<double>::infinity();
        const double ll = garch11_loglik(xs, p, prefix);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
    };

    using Point = std::array<double, 3>;
    const Point start{std::log(0.1 * var), logit(0.95), logit(0.05 / 0.95)};
    std::array<Point, 4> simplex;
    std::array<double, 4> values{};
    simplex[0] = start;
    for (int i = 0; i < 3; ++i) {
        simplex[i + 1] = start;
        simplex[i + 1][i] += 0.5;
    }
    for (int i = 0; i < 4; ++i) values[i] = objective(simplex[i]);

    constexpr int kMaxIterations = 3000;
    GarchFit fit;
    int it = 0;
    for (; it < kMaxIterations; ++it) {
        std::array<int, 4> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int l, int r) { return values[l] < values[r]; });
        std::array<Point, 4> s2;
        std::array<double, 4> v2{};
        for (int i = 0; i < 4; ++i) {
            s2[i] = simplex[order[i]];
            v2[i] = values[order[i]];
        }
        simplex = s2;
        values = v2;

        double size = 0.0;
        for (int i = 1; i < 4; ++i) {
            for (int d = 0; d < 3; ++d) size = std::max(size, std::abs(simplex[i][d] - simplex[0][d]));
        }
        if (std::abs(values[3] - values[0]) < 1e-12 && size < 1e-7) {
            fit.converged = true;
            break;
        }

        Point centroid{};
        for (int i = 0; i < 3; ++i) {
            for (int d = 0; d < 3; ++d) centroid[d] += simplex[i][d] / 3.0;
        }
        auto along = [&](double t) {
            Point p;
            for (int d = 0; d < 3; ++d) p[d] = centroid[d] + t * (simplex[3][d] - centroid[d]);
            return p;
        };
        const Point reflected = along(-1.0);
        const double f_r = objective(reflected);
        if (f_r < values[0]) {
            const Point expanded = along(-2.0);
            const double f_e = objective(expanded);
            if (f_e < f_r) {
                simplex[3] = expanded;
                values[3] = f_e;
            } else {
                simplex[3] = reflected;
                values[3] = f_r;
            }
            continue;
        }
        if (f_r < values[2]) {
            simplex[3] = reflected;
            values[3] = f_r;
            continue;
        }
        const bool outside = f_r < values[3];
        const Point contracted = along(outside ? -0.5 : 0.5);
        const double f_c = objective(contracted);
        if (f_c < (outside ? f_r : values[3])) {
            simplex[3] = contracted;
            values[3] = f_c;
            continue;
        }
        for (int i = 1; i < 4; ++i) {
            for (int d = 0; d < 3; ++d) simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
            values[i] = objective(simplex[i]);
        }
    }
    const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
    fit.params = from_coords(simplex[best]);
    fit.mean_loglik = -values[best];
    fit.iterations = it;
    return fit;
}

std::vector<double> simulate_garch11(const GarchParams& params, std::size_t n, unsigned long long seed) {
    params.validate();
    // alpha = 2 stable draws are N(0, 2).
    const std::vector<double> shocks = sample_stable({0.0, std::numbers::sqrt2 / 2.0, 2.0, 0.0}, n, seed);
    std::vector<double> xs(n);
    double v = params.omega / (1.0 - params.a - params.b);
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) v = params.omega + params.a * prev * prev + params.b * v;
        xs[t] = std::sqrt(v) * shocks[t];
        prev = xs[t];
    }
    return xs;
}

}  // namespace adastable
