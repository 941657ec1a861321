#pragma once

#include <adastable/stable.hpp>
#include <adastable/static_estim.hpp>

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace adastable {

/// EMA steps for the centre (eta1), the scale moment (eta2) and the stability moments (eta3).
struct LearningRates {
    double eta1 = 0.002;
    double eta2 = 0.03;
    double eta3 = 0.006;

    void validate() const;
    bool operator==(const LearningRates&) const = default;
};

struct TrackerConfig {
    LearningRates rates;
    MomentPowers powers;
    // Grid of the alpha lookup table.
    double alpha_min = 1.05;
    double alpha_max = 2.0;
    double alpha_step = 0.005;
    double beta = 0.0;
    double sigma_multiplier = 1.05;
    std::size_t warmup = 300;
    /// Set: alpha is held at this value instead of being read from the moment ratio.
    std::optional<double> fixed_alpha;
    double sigma_floor = 1e-12;
    /// Set: the centre is held here and never updated (evaluation sweeps use 0).
    std::optional<double> fixed_mu;

    void validate() const;
    bool operator==(const TrackerConfig&) const = default;
};

/// EMA accumulators after `t` observations have been folded in.
struct MomentState {
    double mu = 0.0;
    double m_sigma = 0.0;  // EMA of |x - mu|^p_sigma
    double m1 = 0.0;       // EMA of |x - mu|^p1
    double m2 = 0.0;       // EMA of |x - mu|^p2
    std::size_t t = 0;

    bool operator==(const MomentState&) const = default;
};

struct StepOutcome {
    MomentState state;
    StableParams theta;
    double logpdf;
};

/// Per-timestep parameters and one-step-ahead log densities; index i refers to xs[start + i].
struct ParamTrack {
    std::size_t start = 0;
    std::vector<StableParams> thetas;
    std::vector<double> logpdfs;
    double mean_loglik = 0.0;

    std::size_t size() const { return thetas.size(); }
    bool operator==(const ParamTrack&) const = default;
};

/// Immutable tracking context: configuration plus the lookup tables derived from it.
/// The state is passed in and out, so one instance can serve many streams at once.
class MovingEstimator {
public:
    explicit MovingEstimator(TrackerConfig config);

    const TrackerConfig& config() const { return config_; }
    /// Null in fixed-alpha mode.
    const AlphaTable* alpha_table() const { return alpha_table_.get(); }

    /// Seeds the accumulators with plain averages over the prefix (length == warmup).
    MomentState warmup(std::span<const double> prefix) const;

    /// Parameters implied by the accumulators, before the next observation arrives.
    StableParams params(const MomentState& state) const;

    /// Emits theta_t and ln rho_{theta_t}(x), then folds x into the accumulators.
    /// `index` only labels errors.
    StepOutcome step(const MomentState& state, double x, std::size_t index = 0) const;

    /// Warmup on the first `warmup` values, then step through the rest.
    ParamTrack track(std::span<const double> xs) const;

    double logpdf(double x, const StableParams& theta) const;

private:
    TrackerConfig config_;
    std::shared_ptr<const AlphaTable> alpha_table_;
    std::shared_ptr<const StableTable> density_;  // fixed-alpha mode only
};

MomentState warmup(std::span<const double> prefix, const TrackerConfig& config);
StepOutcome step(const MomentState& state, double x, const TrackerConfig& config);
ParamTrack track(std::span<const double> xs, const TrackerConfig& config);

struct SweepPoint {
    double alpha;
    double mean_loglik;
};

/// Mean out-of-sample log-likelihood per fixed alpha, with the centre held at 0
/// and the scale adapted. Points are evaluated concurrently.
std::vector<SweepPoint> sweep_fixed_alpha(std::span<const double> xs, std::span<const double> alphas,
                                          const TrackerConfig& base);

/// Columns t,x,mu,sigma,alpha,beta,logpdf.
void write_track_csv(std::ostream& out, std::span<const double> xs, const ParamTrack& track);

}  // namespace adastable
