#include <adastable/stable.hpp>

#include <adastable/error.hpp>
#include <adastable/numerics.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace adastable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLnPi = 1.1447298858494002;
// -ln(1e-16): the inversion integrands are cut where exp(-t^alpha) drops below 1e-16.
constexpr double kTruncationLog = 36.841361487904734;
// Below this |z| the tail series is never tried.
constexpr double kSeriesMinZ = 4.0;
// Beyond this |z| a tail that the series cannot resolve is treated as zero.
constexpr double kQuadratureMaxZ = 1e4;
constexpr int kMaxTerms = 90;
constexpr double kTinyDensity = std::numeric_limits<double>::min();

const QuadratureSpec kInversionSpec{1e-10, 2e-14, 4000, 1e-16};

double skew_term(double alpha, double beta) {
    if (beta == 0.0 || alpha == 2.0) return 0.0;
    return beta * std::tan(0.5 * kPi * alpha);
}

bool is_gaussian(double alpha) { return alpha == 2.0; }
bool is_cauchy(double alpha, double beta) { return alpha == 1.0 && beta == 0.0; }

const std::array<double, kMaxTerms + 2>& log_factorials() {
    static const auto table = [] {
        std::array<double, kMaxTerms + 2> t{};
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = ln_gamma(static_cast<double>(k) + 1.0);
        return t;
    }();
    return table;
}

enum class SeriesKind { Density, Derivative, Survival };

// Right-tail expansion, x > 0:
//   rho(x)  = (1/pi) sum_k (-1)^{k+1} g^k Gamma(k a + 1)/k! sin(k th) x^{-k a - 1}
//   S(x)    = (1/pi) sum_k (-1)^{k+1} g^k Gamma(k a)/k!     sin(k th) x^{-k a}
// with g = |1 - i b|, th = pi a / 2 + atan(b), b = beta tan(pi a / 2).
// Convergent for alpha < 1, asymptotic for alpha > 1. The value is
// exp(log_scale) * scaled so that huge x does not underflow.
struct SeriesSum {
    double log_scale = 0.0;
    double scaled = 0.0;
    bool ok = false;

    double value() const { return std::exp(log_scale) * scaled; }
    double log_abs() const { return log_scale + std::log(std::abs(scaled)); }
};

SeriesSum tail_series(double x, double alpha, double beta, SeriesKind kind) {
    const double b = skew_term(alpha, beta);
    const double log_g = 0.5 * std::log1p(b * b);
    const double theta = 0.5 * kPi * alpha + std::atan(b);
    const double log_x = std::log(x);
    const auto& lfact = log_factorials();

    SeriesSum out;
    double sum = 0.0;
    double max_term = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    bool converged = false;
    for (int k = 1; k <= kMaxTerms; ++k) {
        const double ka = k * alpha;
        double log_mag = k * log_g - lfact[static_cast<std::size_t>(k)];
        switch (kind) {
            case SeriesKind::Density:
                log_mag += ln_gamma(ka + 1.0) - (ka + 1.0) * log_x;
                break;
            case SeriesKind::Derivative:
                log_mag += ln_gamma(ka + 1.0) + std::log(ka + 1.0) - (ka + 2.0) * log_x;
                break;
            case SeriesKind::Survival:
                log_mag += ln_gamma(ka) - ka * log_x;
                break;
        }
        if (k == 1) out.log_scale = log_mag - kLnPi;
        const double mag = std::exp(log_mag - kLnPi - out.log_scale);
        if (mag > prev) break;  // asymptotic series started to diverge
        double term = mag * std::sin(k * theta);
        if (k % 2 == 0) term = -term;
        if (kind == SeriesKind::Derivative) term = -term;
        sum += term;
        max_term = std::max(max_term, mag);
        prev = mag;
        last = mag;
        if (mag < 1e-17 * std::abs(sum)) {
            converged = true;
            break;
        }
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const bool accurate = converged || last < 1e-13 * std::abs(sum);
    const bool well_conditioned = max_term * eps < 1e-13 * std::abs(sum);
    const bool sign_ok = kind == SeriesKind::Derivative ? sum < 0.0 : sum > 0.0;
    out.scaled = sum;
    out.ok = accurate && well_conditioned && sign_ok;
    return out;
}

double inversion_upper(double alpha) { return std::pow(kTruncationLog, 1.0 / alpha); }

int inversion_panels(double z, double alpha, double b, double upper) {
    const double freq = std::abs(z) + std::abs(b) * alpha * std::pow(upper, alpha - 1.0);
    const double periods = upper * freq / (2.0 * kPi);
    return static_cast<int>(std::clamp(std::ceil(periods) + 1.0, 2.0, 400.0));
}

// (1/pi) int_0^inf exp(-t^a) cos(z t - b t^a) dt
double pdf_quadrature(double z, double alpha, double b) {
    const double upper = inversion_upper(alpha);
    auto f = [z, alpha, b](double t) {
        const double ta = std::pow(t, alpha);
        return std::exp(-ta) * std::cos(z * t - b * ta);
    };
    const auto r = detail::integrate_adaptive(f, 0.0, upper, kInversionSpec,
                                              inversion_panels(z, alpha, b, upper));
    return r.value / kPi;
}

// -(1/pi) int_0^inf t exp(-t^a) sin(z t - b t^a) dt
double pdf_derivative_quadrature(double z, double alpha, double b) {
    const double upper = inversion_upper(alpha) * 1.1;
    auto f = [z, alpha, b](double t) {
        const double ta = std::pow(t, alpha);
        return t * std::exp(-ta) * std::sin(z * t - b * ta);
    };
    const auto r = detail::integrate_adaptive(f, 0.0, upper, kInversionSpec,
                                              inversion_panels(z, alpha, b, upper));
    return -r.value / kPi;
}

// 1/2 + (1/pi) int_0^inf exp(-t^a) sin(z t - b t^a) / t dt
double cdf_quadrature(double z, double alpha, double b) {
    const double upper = inversion_upper(alpha);
    auto f = [z, alpha, b](double t) {
        const double ta = std::pow(t, alpha);
        return std::exp(-ta) * std::sin(z * t - b * ta) / t;
    };
    const auto r = detail::integrate_adaptive(f, 0.0, upper, kInversionSpec,
                                              inversion_panels(z, alpha, b, upper));
    return std::clamp(0.5 + r.value / kPi, 0.0, 1.0);
}

struct Density {
    double value;
    double log;
};

Density density(double z, double alpha, double beta) {
    if (is_gaussian(alpha)) {
        // -z^2/4 overflows past |z| ~ 1e154; the lowest finite double stands in.
        const double log_v = std::max(-0.25 * z * z - std::log(2.0 * std::sqrt(kPi)),
                                      std::numeric_limits<double>::lowest());
        return {std::exp(log_v), log_v};
    }
    if (is_cauchy(alpha, beta)) {
        const double log_v = -kLnPi - std::log1p(z * z);
        return {std::exp(log_v), log_v};
    }
    const double az = std::abs(z);
    if (az >= kSeriesMinZ) {
        const SeriesSum s = tail_series(az, alpha, z > 0 ? beta : -beta, SeriesKind::Density);
        if (s.ok) return {s.value(), s.log_abs()};
        if (az > kQuadratureMaxZ) return {0.0, std::log(kTinyDensity)};
    }
    const double v = pdf_quadrature(z, alpha, skew_term(alpha, beta));
    return {std::max(v, 0.0), std::log(std::max(v, kTinyDensity))};
}

void check_finite_arg(double z) {
    if (std::isnan(z)) throw DomainError("stable law evaluated at NaN");
}

}  // namespace

void validate_shape(double alpha, double beta) {
    if (!std::isfinite(alpha) || alpha < kMinAlpha || alpha > 2.0) {
        throw DomainError("stability alpha must lie in [0.5, 2]");
    }
    if (!std::isfinite(beta) || beta < -1.0 || beta > 1.0) {
        throw DomainError("skewness beta must lie in [-1, 1]");
    }
    if (beta != 0.0 && alpha <= 1.0) {
        throw DomainError("nonzero skewness requires alpha in (1, 2]");
    }
}

void StableParams::validate() const {
    if (!std::isfinite(mu)) throw DomainError("location mu must be finite");
    if (!std::isfinite(sigma) || sigma <= 0.0) throw DomainError("scale sigma must be positive");
    validate_shape(alpha, beta);
}

double stable_pdf(double z, double alpha, double beta) {
    validate_shape(alpha, beta);
    check_finite_arg(z);
    if (std::isinf(z)) return 0.0;
    return density(z, alpha, beta).value;
}

double stable_logpdf(double z, double alpha, double beta) {
    validate_shape(alpha, beta);
    check_finite_arg(z);
    if (std::isinf(z)) return -std::numeric_limits<double>::infinity();
    return density(z, alpha, beta).log;
}

double stable_logpdf_full(double x, const StableParams& params) {
    params.validate();
    check_finite_arg(x);
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    const double z = (x - params.mu) / params.sigma;
    return density(z, params.alpha, params.beta).log - std::log(params.sigma);
}

double stable_pdf_derivative(double z, double alpha, double beta) {
    validate_shape(alpha, beta);
    check_finite_arg(z);
    if (std::isinf(z)) return 0.0;
    if (is_gaussian(alpha)) return -0.5 * z * density(z, alpha, beta).value;
    if (is_cauchy(alpha, beta)) {
        const double d = 1.0 + z * z;
        return -2.0 * z / (kPi * d * d);
    }
    const double az = std::abs(z);
    if (az >= kSeriesMinZ) {
        const SeriesSum s = tail_series(az, alpha, z > 0 ? beta : -beta, SeriesKind::Derivative);
        if (s.ok) return z > 0 ? s.value() : -s.value();
        if (az > kQuadratureMaxZ) return 0.0;
    }
    return pdf_derivative_quadrature(z, alpha, skew_term(alpha, beta));
}

double stable_cdf(double z, double alpha, double beta) {
    validate_shape(alpha, beta);
    check_finite_arg(z);
    if (z == -std::numeric_limits<double>::infinity()) return 0.0;
    if (z == std::numeric_limits<double>::infinity()) return 1.0;
    if (is_gaussian(alpha)) return 0.5 * std::erfc(-0.5 * z);
    if (is_cauchy(alpha, beta)) return std::atan2(1.0, -z) / kPi;
    if (z >= kSeriesMinZ) {
        const SeriesSum s = tail_series(z, alpha, beta, SeriesKind::Survival);
        if (s.ok) return 1.0 - s.value();
        if (z > kQuadratureMaxZ) return 1.0;
    } else if (z <= -kSeriesMinZ) {
        const SeriesSum s = tail_series(-z, alpha, -beta, SeriesKind::Survival);
        if (s.ok) return s.value();
        if (-z > kQuadratureMaxZ) return 0.0;
    }
    return cdf_quadrature(z, alpha, skew_term(alpha, beta));
}

double stable_sf(double z, double alpha, double beta) {
    validate_shape(alpha, beta);
    return stable_cdf(-z, alpha, -beta);
}

double tail_series_radius(double alpha, double beta) {
    validate_shape(alpha, beta);
    if (is_gaussian(alpha) || is_cauchy(alpha, beta)) return kSeriesMinZ;
    for (double z = kSeriesMinZ; z <= kQuadratureMaxZ; z *= 1.05) {
        bool ok = true;
        for (const double side : {beta, -beta}) {
            ok = ok && tail_series(z, alpha, side, SeriesKind::Density).ok &&
                 tail_series(z, alpha, side, SeriesKind::Survival).ok &&
                 tail_series(z, alpha, side, SeriesKind::Derivative).ok;
        }
        if (ok) return z;
    }
    return kQuadratureMaxZ;
}

double moment_constant(double alpha, double p) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 2.0) {
        throw DomainError("moment_constant: alpha must lie in (0, 2]");
    }
    const double p_max = alpha;
    const bool in_range = p > -1.0 && p != 0.0 && (p < p_max || (alpha == 2.0 && p <= 2.0));
    if (!std::isfinite(p) || !in_range) {
        throw DomainError("moment_constant: power must satisfy -1 < p < alpha, p != 0");
    }
    const double log_half_gamma = ln_gamma(0.5 * (1.0 + p));
    double log_moment;
    if (alpha == 2.0) {
        // Gaussian with variance 2: E|Z|^p = 2^p Gamma((1+p)/2) / sqrt(pi).
        log_moment = p * std::numbers::ln2 + log_half_gamma - 0.5 * kLnPi;
    } else {
        const SignedLogGamma num = ln_gamma_signed(-p / alpha);
        const SignedLogGamma den = ln_gamma_signed(-p / 2.0);
        if (num.sign * den.sign < 0) throw DomainError("moment_constant: moment is not finite");
        log_moment = (1.0 + p) * std::numbers::ln2 + log_half_gamma + num.log_abs -
                     (0.5 * kLnPi + std::log(alpha) + den.log_abs);
    }
    return std::exp(log_moment / p);
}

double rho0(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 2.0) {
        throw DomainError("rho0: alpha must lie in (0, 2]");
    }
    return std::exp(ln_gamma(1.0 + 1.0 / alpha)) / kPi;
}

double glued_pdf(double z, double alpha, const GluedAsymmetry& asym) {
    if (!(asym.delta >= 0.0) || !(asym.sigma_l > 0.0) || !(asym.sigma_r > 0.0)) {
        throw DomainError("glued_pdf: delta must be >= 0 and side scales positive");
    }
    const double alpha_right = alpha - asym.delta;
    validate_shape(alpha, 0.0);
    validate_shape(alpha_right, 0.0);
    check_finite_arg(z);
    const double r_left = rho0(alpha);
    const double r_right = rho0(alpha_right);
    const double norm = 2.0 / (asym.sigma_l / r_left + asym.sigma_r / r_right);
    if (z <= 0.0) return norm * stable_pdf(z / asym.sigma_l, alpha, 0.0) / r_left;
    return norm * stable_pdf(z / asym.sigma_r, alpha_right, 0.0) / r_right;
}

std::vector<double> sample_stable(const StableParams& params, std::size_t n, std::uint64_t seed) {
    params.validate();
    if (n == 0) throw DomainError("sample_stable: n must be at least 1");
    std::mt19937_64 engine(seed);
    // Open (0, 1) uniforms straight from the engine bits, identical across standard libraries.
    auto uniform = [&engine] { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };

    const double alpha = params.alpha;
    const double b = skew_term(alpha, params.beta);
    const double shift = std::atan(b) / alpha;
    const double scale = std::pow(1.0 + b * b, 1.0 / (2.0 * alpha));

    std::vector<double> out(n);
    for (auto& x : out) {
        const double v = kPi * (uniform() - 0.5);
        const double w = -std::log(uniform());
        double z;
        if (alpha == 1.0) {
            z = std::tan(v);
        } else {
            const double a_vb = alpha * (v + shift);
            z = scale * std::sin(a_vb) / std::pow(std::cos(v), 1.0 / alpha) *
                std::pow(std::cos(v - a_vb) / w, (1.0 - alpha) / alpha);
        }
        x = params.mu + params.sigma * z;
    }
    return out;
}

StableTable::StableTable(double alpha, double beta, std::size_t half_nodes)
    : alpha_(alpha), beta_(beta), closed_form_(is_gaussian(alpha) || is_cauchy(alpha, beta)) {
    validate_shape(alpha, beta);
    if (closed_form_) return;
    if (half_nodes < 8) throw DomainError("StableTable: too few nodes");
    radius_ = tail_series_radius(alpha, beta);
    u_max_ = std::asinh(radius_);
    du_ = u_max_ / static_cast<double>(half_nodes);
    centre_ = half_nodes;
    const std::size_t n = 2 * half_nodes + 1;
    log_pdf_.resize(n);
    log_pdf_du_.resize(n);
    log_cdf_.assign(n, 0.0);
    log_cdf_du_.assign(n, 0.0);
    log_sf_.assign(n, 0.0);
    log_sf_du_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) - static_cast<double>(centre_)) * du_;
        const double z = i == centre_ ? 0.0 : std::sinh(u);
        const double dz_du = std::cosh(u);
        const Density d = density(z, alpha, beta);
        const double dpdf = stable_pdf_derivative(z, alpha, beta);
        log_pdf_[i] = d.log;
        log_pdf_du_[i] = dpdf / d.value * dz_du;
        if (i <= centre_) {
            const double f = stable_cdf(z, alpha, beta);
            log_cdf_[i] = std::log(f);
            log_cdf_du_[i] = d.value * dz_du / f;
        }
        if (i >= centre_) {
            const double s = stable_sf(z, alpha, beta);
            log_sf_[i] = std::log(s);
            log_sf_du_[i] = -d.value * dz_du / s;
        }
    }
}

double StableTable::hermite(const std::vector<double>& f, const std::vector<double>& df,
                            double u) const {
    const double pos = u / du_ + static_cast<double>(centre_);
    std::size_t i = static_cast<std::size_t>(std::floor(pos));
    i = std::min(i, f.size() - 2);
    const double s = pos - static_cast<double>(i);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * f[i] + h10 * du_ * df[i] + h01 * f[i + 1] + h11 * du_ * df[i + 1];
}

double StableTable::logpdf(double z) const {
    if (closed_form_ || !(std::abs(z) < radius_)) return stable_logpdf(z, alpha_, beta_);
    return hermite(log_pdf_, log_pdf_du_, std::asinh(z));
}

double StableTable::pdf(double z) const { return std::exp(logpdf(z)); }

double StableTable::cdf(double z) const {
    if (closed_form_ || !(std::abs(z) < radius_)) return stable_cdf(z, alpha_, beta_);
    if (z <= 0.0) return std::exp(hermite(log_cdf_, log_cdf_du_, std::asinh(z)));
    return -std::expm1(hermite(log_sf_, log_sf_du_, std::asinh(z)));
}

double StableTable::sf(double z) const {
    if (closed_form_ || !(std::abs(z) < radius_)) return stable_sf(z, alpha_, beta_);
    if (z >= 0.0) return std::exp(hermite(log_sf_, log_sf_du_, std::asinh(z)));
    return -std::expm1(hermite(log_cdf_, log_cdf_du_, std::asinh(z)));
}

}  // namespace adastable
