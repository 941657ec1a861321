#include <adastable/hurst.hpp>

#include <adastable/csv.hpp>
#include <adastable/error.hpp>

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace adastable {

std::vector<std::size_t> default_taus(std::size_t n) {
    std::vector<std::size_t> taus;
    for (std::size_t tau = 1; tau <= n / 10; tau *= 2) taus.push_back(tau);
    return taus;
}

ScalingEstimate structure_function(std::span<const double> series, std::span<const double> qs,
                                   std::span<const std::size_t> taus) {
    if (taus.size() < 2) throw DomainError("structure_function: needs at least two lags");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] < 1 || (i > 0 && taus[i] <= taus[i - 1])) {
            throw DomainError("structure_function: lags must be >= 1 and strictly increasing");
        }
    }
    if (series.size() <= 4 * taus.back()) {
        throw DomainError("structure_function: series length must exceed 4 * max lag");
    }
    for (const double q : qs) {
        if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("structure_function: q must be positive");
    }
    for (const double x : series) {
        if (!std::isfinite(x)) throw DomainError("structure_function: non-finite value in series");
    }

    ScalingEstimate est;
    est.qs.assign(qs.begin(), qs.end());
    est.taus.assign(taus.begin(), taus.end());
    est.zeta.assign(qs.size(), std::numeric_limits<double>::quiet_NaN());
    est.r2.assign(qs.size(), std::numeric_limits<double>::quiet_NaN());
    est.structure.assign(qs.size(), std::vector<double>(taus.size(), 0.0));
    est.diagnostics.assign(qs.size(), std::string());

    std::vector<double> log_tau(taus.size());
    for (std::size_t j = 0; j < taus.size(); ++j) log_tau[j] = std::log(static_cast<double>(taus[j]));

    for (std::size_t j = 0; j < taus.size(); ++j) {
        const std::size_t tau = taus[j];
        const std::size_t m = series.size() - tau;
        std::vector<double> sums(qs.size(), 0.0);
        for (std::size_t t = 0; t < m; ++t) {
            const double inc = std::abs(series[t + tau] - series[t]);
            for (std::size_t i = 0; i < qs.size(); ++i) sums[i] += std::pow(inc, qs[i]);
        }
        for (std::size_t i = 0; i < qs.size(); ++i) est.structure[i][j] = sums[i] / static_cast<double>(m);
    }

    for (std::size_t i = 0; i < qs.size(); ++i) {
        const auto& s = est.structure[i];
        if (std::any_of(s.begin(), s.end(), [](double v) { return !std::isfinite(v); })) {
            est.diagnostics[i] = "structure function overflowed";
            continue;
        }
        if (std::any_of(s.begin(), s.end(), [](double v) { return !(v > 0.0); })) {
            est.diagnostics[i] = "structure function is zero at some lag";
            continue;
        }
        const auto k = static_cast<double>(taus.size());
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t j = 0; j < taus.size(); ++j) {
            mx += log_tau[j];
            my += std::log(s[j]);
        }
        mx /= k;
        my /= k;
        double sxx = 0.0;
        double sxy = 0.0;
        double syy = 0.0;
        for (std::size_t j = 0; j < taus.size(); ++j) {
            const double dx = log_tau[j] - mx;
            const double dy = std::log(s[j]) - my;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        const double slope = sxy / sxx;
        est.zeta[i] = slope;
        est.r2[i] = syy > 0.0 ? std::clamp(slope * sxy / syy, 0.0, 1.0) : 1.0;
    }
    return est;
}

std::vector<std::optional<double>> adaptive_hurst(const ParamTrack& track, double q) {
    if (!(q > 0.0)) throw DomainError("adaptive_hurst: q must be positive");
    std::vector<std::optional<double>> out;
    out.reserve(track.size());
    for (const StableParams& th : track.thetas) {
        // The q-th moment of increments is only guaranteed below alpha.
        if (q < th.alpha) {
            out.emplace_back(1.0 / th.alpha);
        } else {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("normal_quantile: probability must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

std::vector<double> gaussianize(std::span<const double> xs, const ParamTrack& track) {
    if (xs.size() != track.start + track.size() || track.logpdfs.size() != track.thetas.size()) {
        throw DomainError("gaussianize: track does not align with the series");
    }
    constexpr double lo = 1e-15;
    std::optional<StableTable> shared;
    if (!track.thetas.empty()) {
        const StableParams& first = track.thetas.front();
        const bool constant_shape =
            std::all_of(track.thetas.begin(), track.thetas.end(), [&](const StableParams& th) {
                return th.alpha == first.alpha && th.beta == first.beta;
            });
        if (constant_shape && track.size() > 64) shared.emplace(first.alpha, first.beta);
    }
    std::vector<double> out(track.size());
    for (std::size_t i = 0; i < track.size(); ++i) {
        const StableParams& th = track.thetas[i];
        const double z = (xs[track.start + i] - th.mu) / th.sigma;
        // Work from the nearer tail so both ends keep their relative precision.
        if (z > 0.0) {
            const double s = shared ? shared->sf(z) : stable_sf(z, th.alpha, th.beta);
            out[i] = -normal_quantile(std::clamp(s, lo, 1.0 - lo));
        } else {
            const double c = shared ? shared->cdf(z) : stable_cdf(z, th.alpha, th.beta);
            out[i] = normal_quantile(std::clamp(c, lo, 1.0 - lo));
        }
    }
    return out;
}

double jarque_bera(std::span<const double> xs) {
    if (xs.size() < 3) throw DomainError("jarque_bera: needs at least three values");
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw DegenerateSampleError("jarque_bera: zero variance");
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2) - 3.0;
    return n / 6.0 * (skew * skew + 0.25 * kurt * kurt);
}

ParamTrack constant_track(const StableParams& theta, std::span<const double> xs, std::size_t start) {
    theta.validate();
    if (start > xs.size()) throw DomainError("constant_track: start beyond the series");
    ParamTrack out;
    out.start = start;
    out.thetas.assign(xs.size() - start, theta);
    out.logpdfs.reserve(out.thetas.size());
    const StableTable law(theta.alpha, theta.beta);
    const double log_sigma = std::log(theta.sigma);
    double total = 0.0;
    for (std::size_t i = start; i < xs.size(); ++i) {
        const double lp = law.logpdf((xs[i] - theta.mu) / theta.sigma) - log_sigma;
        out.logpdfs.push_back(lp);
        total += lp;
    }
    out.mean_loglik = out.logpdfs.empty() ? 0.0 : total / static_cast<double>(out.logpdfs.size());
    return out;
}

void write_scaling_csv(std::ostream& out, const ScalingEstimate& est) {
    out << "q,zeta,r2\n";
    for (std::size_t i = 0; i < est.qs.size(); ++i) {
        out << format_double(est.qs[i]) << ',' << format_double(est.zeta[i]) << ','
            << format_double(est.r2[i]) << '\n';
    }
}

void write_structure_csv(std::ostream& out, const ScalingEstimate& est) {
    out << "q,tau,S\n";
    for (std::size_t i = 0; i < est.qs.size(); ++i) {
        for (std::size_t j = 0; j < est.taus.size(); ++j) {
            out << format_double(est.qs[i]) << ',' << est.taus[j] << ','
                << format_double(est.structure[i][j]) << '\n';
        }
    }
}

}  // namespace adastable
