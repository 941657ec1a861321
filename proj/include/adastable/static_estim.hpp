#pragma once

#include <adastable/numerics.hpp>

#include <iosfwd>
#include <span>

namespace adastable {

/// Absolute-moment powers: p_sigma for the scale, (p1, p2) for the stability ratio.
struct MomentPowers {
    double p_sigma = 0.35;
    double p1 = 0.5;
    double p2 = 0.2;

    void validate() const;
    bool operator==(const MomentPowers&) const = default;
};

/// Monotone map alpha -> M(alpha, p1) / M(alpha, p2) on an inclusive alpha grid.
class AlphaTable {
public:
    AlphaTable(double p1, double p2, std::vector<double> alphas, std::vector<double> ratios);

    /// Interpolated alpha for an empirical ratio; clamps to [alpha_min, alpha_max].
    double alpha_for_ratio(double ratio) const { return grid_.invert(ratio); }

    double p1() const { return p1_; }
    double p2() const { return p2_; }
    double alpha_min() const { return grid_.xs().front(); }
    double alpha_max() const { return grid_.xs().back(); }
    std::span<const double> alphas() const { return grid_.xs(); }
    std::span<const double> ratios() const { return grid_.ys(); }
    const MonotoneTable& grid() const { return grid_; }

    /// Columns `alpha,ratio` with a header row, 17 significant digits.
    void write_csv(std::ostream& out) const;
    /// Reads what write_csv produced; the powers are not part of the file.
    static AlphaTable read_csv(std::istream& in, double p1, double p2);

private:
    double p1_;
    double p2_;
    MonotoneTable grid_;
};

/// Tabulates the moment ratio for p1 != p2 in (0, alpha_min) over
/// [alpha_min, alpha_max] in steps of `step` (endpoint included).
AlphaTable build_alpha_table(double p1, double p2, double alpha_min = 1.05,
                             double alpha_max = 2.0, double step = 0.005);

/// Sample mean; no law of large numbers backs it when alpha <= 1.
double estimate_mu(std::span<const double> xs);

/// (mean |x - mu|^p)^(1/p) / M(alpha, p).
double estimate_sigma(std::span<const double> xs, double mu, double alpha, double p);

/// Power with the smallest scale-estimator error: 2 at alpha == 2, (alpha - 1) / 2 below.
double optimal_sigma_power(double alpha);

/// Stability from the ratio of the p1- and p2-th root absolute moments.
double estimate_alpha(std::span<const double> xs, double mu, const AlphaTable& table);

/// p-th root of the mean absolute p-th power of residuals about mu.
double absolute_moment_root(std::span<const double> xs, double mu, double p);

}  // namespace adastable
