#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace adastable {

/// Smallest stability index the density, distribution function and sampler accept.
inline constexpr double kMinAlpha = 0.5;

/// Location/scale/stability/skewness of a stable law, characteristic function
/// exp(i t mu - |sigma t|^alpha (1 - i beta sgn(t) tan(pi alpha / 2))).
struct StableParams {
    double mu = 0.0;
    double sigma = 1.0;
    double alpha = 2.0;
    double beta = 0.0;

    void validate() const;
    bool operator==(const StableParams&) const = default;
};

/// Two-sided gluing of symmetric laws: alpha on the left, alpha - delta on the right.
struct GluedAsymmetry {
    double delta = 0.0;
    double sigma_l = 1.0;
    double sigma_r = 1.0;
};

/// Throws DomainError unless (alpha, beta) is a supported shape.
/// beta != 0 needs alpha in (1, 2]; at alpha == 2 beta has no effect.
void validate_shape(double alpha, double beta);

/// Density of the standardized (mu = 0, sigma = 1) law.
double stable_pdf(double z, double alpha, double beta = 0.0);

/// ln of stable_pdf; finite for every finite z.
double stable_logpdf(double z, double alpha, double beta = 0.0);

/// ln density of x under the full parameter vector.
double stable_logpdf_full(double x, const StableParams& params);

/// P(Z <= z) of the standardized law.
double stable_cdf(double z, double alpha, double beta = 0.0);

/// P(Z > z); accurate deep in the right tail where 1 - stable_cdf loses digits.
double stable_sf(double z, double alpha, double beta = 0.0);

/// p-th root of E|Z|^p for the standardized symmetric law, -1 < p < alpha, p != 0.
/// At alpha == 2 powers up to and including 2 are accepted.
double moment_constant(double alpha, double p);

/// Density of the standardized symmetric law at its centre, Gamma(1 + 1/alpha) / pi.
double rho0(double alpha);

/// Normalized density continuous at zero, left side alpha, right side alpha - delta.
double glued_pdf(double z, double alpha, const GluedAsymmetry& asym);

/// n i.i.d. variates by the Chambers-Mallows-Stuck transform; deterministic in `seed`.
std::vector<double> sample_stable(const StableParams& params, std::size_t n, std::uint64_t seed);

/// Derivative of stable_pdf in z.
double stable_pdf_derivative(double z, double alpha, double beta = 0.0);

/// Radius beyond which the tail series is used for both sides of the law.
double tail_series_radius(double alpha, double beta);

/// Fixed-shape evaluator: log density and distribution function tabulated on an
/// asinh-spaced grid with cubic Hermite interpolation, tail series outside the grid.
/// Immutable after construction.
class StableTable {
public:
    StableTable(double alpha, double beta, std::size_t half_nodes = 768);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    double logpdf(double z) const;
    double pdf(double z) const;
    double cdf(double z) const;
    double sf(double z) const;

private:
    double alpha_;
    double beta_;
    bool closed_form_;
    double radius_ = 0.0;
    double u_max_ = 0.0;
    double du_ = 0.0;
    std::vector<double> log_pdf_;
    std::vector<double> log_pdf_du_;
    // ln F is stored for nodes left of the centre, ln(1 - F) for nodes right of it.
    std::vector<double> log_cdf_;
    std::vector<double> log_cdf_du_;
    std::vector<double> log_sf_;
    std::vector<double> log_sf_du_;
    std::size_t centre_ = 0;

    double hermite(const std::vector<double>& f, const std::vector<double>& df, double u) const;
};

}  // namespace adastable
