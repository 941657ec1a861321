#pragma once

#include <adastable/tracker.hpp>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adastable {

/// Scaling exponents zeta(q) of E|x_{t+tau} - x_t|^q ~ tau^zeta(q).
struct ScalingEstimate {
    std::vector<double> qs;
    std::vector<std::size_t> taus;
    std::vector<double> zeta;  // NaN where undefined, see diagnostics
    std::vector<double> r2;
    std::vector<std::vector<double>> structure;  // structure[q][tau] = S_q(tau)
    std::vector<std::string> diagnostics;        // one per q, empty when fine
};

/// Powers of two 1, 2, 4, ... up to n / 10.
std::vector<std::size_t> default_taus(std::size_t n);

/// Structure-function scaling of a process-level series (e.g. cumulative log price):
/// least-squares slope of ln S_q(tau) against ln tau for each q.
ScalingEstimate structure_function(std::span<const double> series, std::span<const double> qs,
                                   std::span<const std::size_t> taus);

/// Hurst exponent 1 / alpha_t implied by each tracked stability; empty where q >= alpha_t.
std::vector<std::optional<double>> adaptive_hurst(const ParamTrack& track, double q);

/// Standard normal quantile.
double normal_quantile(double u);

/// Maps each tracked observation through its fitted distribution function and then
/// the standard normal quantile. `xs` is the full series the track was built from;
/// the result has one value per track entry.
std::vector<double> gaussianize(std::span<const double> xs, const ParamTrack& track);

/// n/6 (S^2 + K^2/4) with sample skewness S and excess kurtosis K.
double jarque_bera(std::span<const double> xs);

/// 99th percentile of chi-square with 2 degrees of freedom, -2 ln 0.01.
inline constexpr double kJarqueBeraCritical1Pct = 9.2103403719761836;

/// Track holding one parameter vector for n observations starting at `start`.
ParamTrack constant_track(const StableParams& theta, std::span<const double> xs, std::size_t start = 0);

/// Columns q,zeta,r2.
void write_scaling_csv(std::ostream& out, const ScalingEstimate& est);
/// Long format q,tau,S.
void write_structure_csv(std::ostream& out, const ScalingEstimate& est);

}  // namespace adastable
