#include <adastable/tails.hpp>

#include <adastable/csv.hpp>
#include <adastable/error.hpp>

#include <algorithm>
#include <ostream>

namespace adastable {

std::vector<double> normalized_residuals(std::span<const double> xs, const ParamTrack& track) {
    if (track.start + track.size() > xs.size()) throw DomainError("track does not align with series");
    std::vector<double> z(track.size());
    for (std::size_t i = 0; i < track.size(); ++i) {
        const StableParams& th = track.thetas[i];
        z[i] = (xs[track.start + i] - th.mu) / th.sigma;
    }
    return z;
}

TailCurve exceedance_curve(std::span<const double> xs, const ParamTrack& track,
                           std::span<const double> ks, std::span<const double> alphas) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!(ks[i] > 0.0) || !std::isfinite(ks[i])) throw DomainError("tail thresholds must be positive");
        if (i > 0 && !(ks[i] > ks[i - 1])) throw DomainError("tail thresholds must be ascending");
    }
    for (const double a : alphas) validate_shape(a, 0.0);

    std::vector<double> z = normalized_residuals(xs, track);
    if (z.empty()) throw DomainError("exceedance_curve: empty track");
    std::sort(z.begin(), z.end());
    const auto n = static_cast<double>(z.size());

    TailCurve out;
    out.ks.assign(ks.begin(), ks.end());
    out.n = z.size();
    for (const double k : ks) {
        const auto below = std::lower_bound(z.begin(), z.end(), -k) - z.begin();
        const auto above = z.end() - std::upper_bound(z.begin(), z.end(), k);
        out.left_emp.push_back(static_cast<double>(below) / n);
        out.right_emp.push_back(static_cast<double>(above) / n);
    }
    for (const double a : alphas) {
        ModelTail m{a, {}, {}};
        for (const double k : ks) {
            m.left.push_back(stable_cdf(-k, a, 0.0));
            m.right.push_back(stable_sf(k, a, 0.0));
        }
        out.models.push_back(std::move(m));
    }
    return out;
}

ExtremeCount count_extreme(std::span<const double> xs, const ParamTrack& track, double k) {
    if (!(k > 0.0)) throw DomainError("count_extreme: threshold must be positive");
    ExtremeCount c;
    for (const double z : normalized_residuals(xs, track)) {
        if (z < -k) ++c.left;
        if (z > k) ++c.right;
    }
    return c;
}

void write_tail_csv(std::ostream& out, const TailCurve& curve) {
    out << "k,side,source,probability\n";
    auto emit = [&](const std::string& source, const std::vector<double>& left,
                    const std::vector<double>& right) {
        for (std::size_t i = 0; i < curve.ks.size(); ++i) {
            out << format_double(curve.ks[i]) << ",left," << source << ',' << format_double(left[i]) << '\n';
            out << format_double(curve.ks[i]) << ",right," << source << ',' << format_double(right[i]) << '\n';
        }
    };
    emit("empirical", curve.left_emp, curve.right_emp);
    for (const ModelTail& m : curve.models) emit("alpha=" + format_double(m.alpha), m.left, m.right);
}

}  // namespace adastable
