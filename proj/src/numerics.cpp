#include <adastable/numerics.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <sstream>

namespace adastable {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
    if (!(truncation > 0.0)) throw DomainError("truncation threshold must be positive");
}

double ln_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError("ln_gamma: argument must be finite and positive");
    }
    return boost::math::lgamma(x);
}

SignedLogGamma ln_gamma_signed(double x) {
    if (!std::isfinite(x) || (x <= 0.0 && x == std::floor(x))) {
        throw DomainError("ln_gamma_signed: argument is a pole or non-finite");
    }
    int sign = 1;
    const double v = boost::math::lgamma(x, &sign);
    return {v, sign};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate: bounds must be finite");
    if (a == b) return 0.0;
    const QuadratureResult r = detail::integrate_adaptive(f, a, b, spec);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "quadrature did not converge after " << r.subdivisions
            << " subdivisions (estimate " << r.value << ", error bound " << r.error << ")";
        throw AccuracyError(msg.str(), r.value, r.error);
    }
    return r.value;
}

namespace {

// Largest t at which the envelope still exceeds `threshold`, found by doubling then bisection.
double truncation_point(const std::function<double(double)>& envelope, double threshold) {
    double hi = 1.0;
    if (envelope(hi) < threshold) {
        double lo = 0.0;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (envelope(mid) < threshold ? hi : lo) = mid;
        }
        return hi;
    }
    double lo = hi;
    while (envelope(hi) >= threshold) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw DomainError("integrate_semi_infinite: envelope does not decay");
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (envelope(mid) < threshold ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

double integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec,
                               const std::function<double(double)>& envelope) {
    spec.validate();
    std::function<double(double)> env = envelope;
    if (!env) {
        // Probe |f| on [t, 2t] so zero crossings of an oscillating f do not end the search early.
        env = [&f](double t) {
            double m = 0.0;
            for (int i = 0; i <= 32; ++i) m = std::max(m, std::abs(f(t * (1.0 + i / 32.0))));
            return m;
        };
    }
    const double upper = truncation_point(env, spec.truncation);
    return integrate(f, 0.0, upper, spec);
}

MonotoneTable::MonotoneTable(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) throw std::invalid_argument("monotone table: column lengths differ");
    if (xs_.size() < 2) throw std::invalid_argument("monotone table: needs at least two entries");
    increasing_ = ys_[1] > ys_[0];
    for (std::size_t i = 1; i < ys_.size(); ++i) {
        const bool ok = increasing_ ? ys_[i] > ys_[i - 1] : ys_[i] < ys_[i - 1];
        if (!ok || !std::isfinite(ys_[i]) || !std::isfinite(xs_[i])) {
            throw std::invalid_argument("monotone table: y column is not strictly monotone at row " +
                                        std::to_string(i));
        }
    }
}

double MonotoneTable::invert(double y) const {
    if (xs_.empty()) throw std::logic_error("monotone table is empty");
    if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
    // Index of the first node at or beyond y in the direction of the table.
    std::size_t hi;
    if (increasing_) {
        if (y <= ys_.front()) return xs_.front();
        if (y >= ys_.back()) return xs_.back();
        hi = static_cast<std::size_t>(std::lower_bound(ys_.begin(), ys_.end(), y) - ys_.begin());
    } else {
        if (y >= ys_.front()) return xs_.front();
        if (y <= ys_.back()) return xs_.back();
        hi = static_cast<std::size_t>(
            std::lower_bound(ys_.begin(), ys_.end(), y, std::greater<>()) - ys_.begin());
    }
    if (ys_[hi] == y) return xs_[hi];
    const std::size_t lo = hi - 1;
    const double w = (y - ys_[lo]) / (ys_[hi] - ys_[lo]);
    return xs_[lo] + w * (xs_[hi] - xs_[lo]);
}

}  // namespace adastable
