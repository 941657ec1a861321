#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adastable {

/// Points used to seed the GARCH variance; matches the tracker's default warmup
/// so that both evaluate the same observations.
inline constexpr std::size_t kGarchPrefix = 300;

struct GarchParams {
    double omega = 0.0;
    double a = 0.0;
    double b = 0.0;

    void validate() const;
};

struct StaticSigmaFit {
    double sigma;
    double mean_loglik;
};

/// Single scale maximizing the mean log density with mu = 0 and fixed (alpha, beta).
/// Golden-section search on ln(sigma).
StaticSigmaFit fit_static_sigma_mle(std::span<const double> xs, double alpha, double beta = 0.0);

/// Mean Gaussian one-step-ahead log-likelihood of the points after `prefix`, with
/// v_t = omega + a x_{t-1}^2 + b v_{t-1} seeded by the prefix sample variance.
double garch11_loglik(std::span<const double> xs, const GarchParams& params,
                      std::size_t prefix = kGarchPrefix);

struct GarchFit {
    GarchParams params;
    double mean_loglik = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Nelder-Mead maximization of garch11_loglik over transformed coordinates
/// (log omega, logistic persistence a + b, logistic share a / (a + b)).
GarchFit garch11_fit(std::span<const double> xs, std::size_t prefix = kGarchPrefix);

/// Deterministic GARCH(1,1) path with Gaussian innovations; for tests and fixtures.
std::vector<double> simulate_garch11(const GarchParams& params, std::size_t n, unsigned long long seed);

}  // namespace adastable
