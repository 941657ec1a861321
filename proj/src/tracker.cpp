#include <adastable/tracker.hpp>

#include <adastable/csv.hpp>
#include <adastable/error.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace adastable {

void LearningRates::validate() const {
    for (const double eta : {eta1, eta2, eta3}) {
        if (!(eta > 0.0 && eta < 1.0)) throw DomainError("learning rates must lie in (0, 1)");
    }
}

void TrackerConfig::validate() const {
    rates.validate();
    powers.validate();
    if (!(alpha_min >= kMinAlpha && alpha_min < alpha_max && alpha_max <= 2.0)) {
        throw DomainError("alpha grid needs 0.5 <= alpha_min < alpha_max <= 2");
    }
    if (!(alpha_step > 0.0)) throw DomainError("alpha_step must be positive");
    if (!(powers.p1 < alpha_min && powers.p2 < alpha_min)) {
        throw DomainError("alpha powers p1, p2 must lie below alpha_min");
    }
    if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("beta must lie in [-1, 1]");
    if (fixed_alpha) {
        validate_shape(*fixed_alpha, beta);
    } else if (beta != 0.0 && alpha_min <= 1.0) {
        throw DomainError("nonzero beta requires alpha_min > 1");
    }
    if (!(sigma_multiplier > 0.0) || !std::isfinite(sigma_multiplier)) {
        throw DomainError("sigma_multiplier must be positive");
    }
    if (!(sigma_floor > 0.0) || !std::isfinite(sigma_floor)) throw DomainError("sigma_floor must be positive");
    if (warmup < 2) throw DomainError("warmup must be at least 2");
    if (fixed_mu && !std::isfinite(*fixed_mu)) throw DomainError("fixed centre must be finite");
}

MovingEstimator::MovingEstimator(TrackerConfig config) : config_(std::move(config)) {
    config_.validate();
    if (config_.fixed_alpha) {
        density_ = std::make_shared<const StableTable>(*config_.fixed_alpha, config_.beta);
    } else {
        alpha_table_ = std::make_shared<const AlphaTable>(
            build_alpha_table(config_.powers.p1, config_.powers.p2, config_.alpha_min,
                              config_.alpha_max, config_.alpha_step));
    }
}

namespace {

// |r|^p, with r floored so that negative powers stay finite.
double residual_power(double r, double p, double floor) {
    if (p < 0.0) r = std::max(r, floor);
    return std::pow(r, p);
}

}  // namespace

MomentState MovingEstimator::warmup(std::span<const double> prefix) const {
    if (prefix.size() != config_.warmup) {
        throw DomainError("warmup prefix must hold exactly " + std::to_string(config_.warmup) + " values");
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (!std::isfinite(prefix[i])) throw StepError("non-finite observation in warmup", i);
    }
    MomentState s;
    s.mu = config_.fixed_mu ? *config_.fixed_mu : estimate_mu(prefix);
    const MomentPowers& pw = config_.powers;
    const double floor = config_.sigma_floor;
    bool spread = false;
    for (const double x : prefix) {
        const double r = std::abs(x - s.mu);
        spread = spread || r > 0.0;
        s.m_sigma += residual_power(r, pw.p_sigma, floor);
        s.m1 += residual_power(r, pw.p1, floor);
        s.m2 += residual_power(r, pw.p2, floor);
    }
    const auto n = static_cast<double>(prefix.size());
    if (spread) {
        s.m_sigma /= n;
        s.m1 /= n;
        s.m2 /= n;
    } else {
        s.m_sigma = std::pow(floor, pw.p_sigma);
        s.m1 = std::pow(floor, pw.p1);
        s.m2 = std::pow(floor, pw.p2);
    }
    s.t = prefix.size();
    return s;
}

StableParams MovingEstimator::params(const MomentState& state) const {
    const MomentPowers& pw = config_.powers;
    double alpha;
    if (config_.fixed_alpha) {
        alpha = *config_.fixed_alpha;
    } else if (state.m1 > 0.0 && state.m2 > 0.0) {
        const double ratio = std::pow(state.m1, 1.0 / pw.p1) / std::pow(state.m2, 1.0 / pw.p2);
        alpha = alpha_table_->alpha_for_ratio(ratio);
    } else {
        alpha = config_.alpha_max;
    }
    // The scale conversion needs p_sigma < alpha; hold the constant just above p_sigma.
    const double alpha_m = std::min(2.0, std::max(alpha, pw.p_sigma + 0.01));
    double raw = 0.0;
    if (state.m_sigma > 0.0 && std::isfinite(state.m_sigma)) {
        raw = std::pow(state.m_sigma, 1.0 / pw.p_sigma) / moment_constant(alpha_m, pw.p_sigma);
    }
    const double sigma = std::max(config_.sigma_multiplier * raw, config_.sigma_floor);
    const double mu = config_.fixed_mu ? *config_.fixed_mu : state.mu;
    return {mu, sigma, alpha, config_.beta};
}

double MovingEstimator::logpdf(double x, const StableParams& theta) const {
    if (density_) return density_->logpdf((x - theta.mu) / theta.sigma) - std::log(theta.sigma);
    return stable_logpdf_full(x, theta);
}

StepOutcome MovingEstimator::step(const MomentState& state, double x, std::size_t index) const {
    if (!std::isfinite(x)) throw StepError("non-finite observation", index);
    StepOutcome out;
    out.theta = params(state);
    out.logpdf = logpdf(x, out.theta);

    const LearningRates& eta = config_.rates;
    const MomentPowers& pw = config_.powers;
    const double floor = config_.sigma_floor;
    const double r = std::abs(x - state.mu);
    MomentState next = state;
    if (!config_.fixed_mu) next.mu = state.mu + eta.eta1 * (x - state.mu);
    next.m_sigma = state.m_sigma + eta.eta2 * (residual_power(r, pw.p_sigma, floor) - state.m_sigma);
    next.m1 = state.m1 + eta.eta3 * (residual_power(r, pw.p1, floor) - state.m1);
    next.m2 = state.m2 + eta.eta3 * (residual_power(r, pw.p2, floor) - state.m2);
    next.t = state.t + 1;
    out.state = next;
    return out;
}

ParamTrack MovingEstimator::track(std::span<const double> xs) const {
    const std::size_t w = config_.warmup;
    if (xs.size() <= w) {
        throw DomainError("series of length " + std::to_string(xs.size()) +
                          " is too short for warmup " + std::to_string(w));
    }
    ParamTrack out;
    out.start = w;
    out.thetas.reserve(xs.size() - w);
    out.logpdfs.reserve(xs.size() - w);
    MomentState state = warmup(xs.first(w));
    double total = 0.0;
    for (std::size_t i = w; i < xs.size(); ++i) {
        StepOutcome o = step(state, xs[i], i);
        out.thetas.push_back(o.theta);
        out.logpdfs.push_back(o.logpdf);
        total += o.logpdf;
        state = o.state;
    }
    out.mean_loglik = total / static_cast<double>(out.logpdfs.size());
    return out;
}

MomentState warmup(std::span<const double> prefix, const TrackerConfig& config) {
    return MovingEstimator(config).warmup(prefix);
}

StepOutcome step(const MomentState& state, double x, const TrackerConfig& config) {
    return MovingEstimator(config).step(state, x);
}

ParamTrack track(std::span<const double> xs, const TrackerConfig& config) {
    return MovingEstimator(config).track(xs);
}

std::vector<SweepPoint> sweep_fixed_alpha(std::span<const double> xs, std::span<const double> alphas,
                                          const TrackerConfig& base) {
    std::vector<SweepPoint> out(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        TrackerConfig c = base;
        c.fixed_alpha = alphas[i];
        c.fixed_mu = 0.0;
        c.validate();
        out[i].alpha = alphas[i];
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < alphas.size() && !failed; i = next++) {
            try {
                TrackerConfig c = base;
                c.fixed_alpha = alphas[i];
                c.fixed_mu = 0.0;
                out[i].mean_loglik = MovingEstimator(c).track(xs).mean_loglik;
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(alphas.size(), std::max(1u, std::thread::hardware_concurrency()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

void write_track_csv(std::ostream& out, std::span<const double> xs, const ParamTrack& track) {
    if (track.start + track.size() > xs.size()) throw DomainError("track does not align with series");
    out << "t,x,mu,sigma,alpha,beta,logpdf\n";
    for (std::size_t i = 0; i < track.size(); ++i) {
        const std::size_t t = track.start + i;
        const StableParams& th = track.thetas[i];
        out << t << ',' << format_double(xs[t]) << ',' << format_double(th.mu) << ','
            << format_double(th.sigma) << ',' << format_double(th.alpha) << ','
            << format_double(th.beta) << ',' << format_double(track.logpdfs[i]) << '\n';
    }
}

}  // namespace adastable
