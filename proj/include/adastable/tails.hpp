#pragma once

#include <adastable/tracker.hpp>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace adastable {

/// Tail probabilities of one standardized reference law at each threshold.
struct ModelTail {
    double alpha;
    std::vector<double> left;   // P(Z < -k)
    std::vector<double> right;  // P(Z > k)
};

/// Empirical exceedance frequencies of the normalized residuals next to model tails.
struct TailCurve {
    std::vector<double> ks;
    std::vector<double> left_emp;
    std::vector<double> right_emp;
    std::vector<ModelTail> models;
    std::size_t n = 0;  // residuals counted
};

/// (x_t - mu_t) / sigma_t for every tracked point.
std::vector<double> normalized_residuals(std::span<const double> xs, const ParamTrack& track);

/// Exceedance frequencies of the track-normalized residuals and symmetric stable
/// tails at each reference alpha. Pass a constant_track for static normalization.
TailCurve exceedance_curve(std::span<const double> xs, const ParamTrack& track,
                           std::span<const double> ks, std::span<const double> alphas);

struct ExtremeCount {
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t total() const { return left + right; }
};

/// Residuals with |z| > k.
ExtremeCount count_extreme(std::span<const double> xs, const ParamTrack& track, double k);

/// Long format k,side,source,probability with source "empirical" or "alpha=<value>".
void write_tail_csv(std::ostream& out, const TailCurve& curve);

}  // namespace adastable
