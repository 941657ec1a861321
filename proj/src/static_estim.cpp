#include <adastable/static_estim.hpp>

#include <adastable/csv.hpp>
#include <adastable/error.hpp>
#include <adastable/stable.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace adastable {

void MomentPowers::validate() const {
    if (!std::isfinite(p_sigma) || p_sigma <= -1.0 || p_sigma > 2.0 || p_sigma == 0.0) {
        throw DomainError("p_sigma must lie in (-1, 2] and be nonzero");
    }
    for (const double p : {p1, p2}) {
        if (!std::isfinite(p) || p <= 0.0 || p >= 2.0) {
            throw DomainError("alpha powers p1, p2 must lie in (0, 2)");
        }
    }
    if (p1 == p2) throw DomainError("alpha powers p1 and p2 must differ");
}

AlphaTable::AlphaTable(double p1, double p2, std::vector<double> alphas, std::vector<double> ratios)
    : p1_(p1), p2_(p2) {
    try {
        grid_ = MonotoneTable(std::move(alphas), std::move(ratios));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("alpha table for this power pair is unusable: ") +
                                    e.what());
    }
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        if (!(grid_.xs()[i] > grid_.xs()[i - 1])) {
            throw std::invalid_argument("alpha table: alpha column must be ascending");
        }
    }
}

void AlphaTable::write_csv(std::ostream& out) const {
    out << "alpha,ratio\n";
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        out << format_double(grid_.xs()[i]) << ',' << format_double(grid_.ys()[i]) << '\n';
    }
}

AlphaTable AlphaTable::read_csv(std::istream& in, double p1, double p2) {
    const CsvTable csv = read_csv_table(in);
    const std::size_t a = csv.column("alpha");
    const std::size_t r = csv.column("ratio");
    std::vector<double> alphas;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        alphas.push_back(csv.number(i, a));
        ratios.push_back(csv.number(i, r));
    }
    return AlphaTable(p1, p2, std::move(alphas), std::move(ratios));
}

AlphaTable build_alpha_table(double p1, double p2, double alpha_min, double alpha_max, double step) {
    if (!std::isfinite(p1) || !std::isfinite(p2) || p1 == p2) {
        throw DomainError("build_alpha_table: powers must be finite and distinct");
    }
    if (!(alpha_min >= kMinAlpha) || !(alpha_max <= 2.0) || !(alpha_min < alpha_max)) {
        throw DomainError("build_alpha_table: need 0.5 <= alpha_min < alpha_max <= 2");
    }
    if (!(p1 > 0.0 && p1 < alpha_min && p2 > 0.0 && p2 < alpha_min)) {
        throw DomainError("build_alpha_table: powers must lie in (0, alpha_min)");
    }
    if (!(step > 0.0)) throw DomainError("build_alpha_table: step must be positive");

    const double span = alpha_max - alpha_min;
    auto intervals = static_cast<std::size_t>(std::floor(span / step + 1e-9));
    std::vector<double> alphas;
    alphas.reserve(intervals + 2);
    for (std::size_t i = 0; i <= intervals; ++i) alphas.push_back(alpha_min + static_cast<double>(i) * step);
    // Snap the last node onto alpha_max, or append it when the step does not divide the span.
    if (alpha_max - alphas.back() > 1e-9 * step) {
        alphas.push_back(alpha_max);
    } else {
        alphas.back() = alpha_max;
    }
    std::vector<double> ratios;
    ratios.reserve(alphas.size());
    for (const double a : alphas) ratios.push_back(moment_constant(a, p1) / moment_constant(a, p2));
    return AlphaTable(p1, p2, std::move(alphas), std::move(ratios));
}

double estimate_mu(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("estimate_mu: empty sample");
    double sum = 0.0;
    for (const double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double absolute_moment_root(std::span<const double> xs, double mu, double p) {
    if (xs.empty()) throw DomainError("absolute moment of an empty sample");
    double sum = 0.0;
    bool spread = false;
    for (const double x : xs) {
        const double r = std::abs(x - mu);
        spread = spread || r > 0.0;
        sum += std::pow(r, p);
    }
    if (!spread) throw DegenerateSampleError("all residuals are zero");
    return std::pow(sum / static_cast<double>(xs.size()), 1.0 / p);
}

double estimate_sigma(std::span<const double> xs, double mu, double alpha, double p) {
    const double m = moment_constant(alpha, p);
    return absolute_moment_root(xs, mu, p) / m;
}

double optimal_sigma_power(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("optimal_sigma_power: alpha must lie in (1, 2]");
    if (alpha == 2.0) return 2.0;
    return 0.5 * (alpha - 1.0);
}

double estimate_alpha(std::span<const double> xs, double mu, const AlphaTable& table) {
    const double r = absolute_moment_root(xs, mu, table.p1()) / absolute_moment_root(xs, mu, table.p2());
    return table.alpha_for_ratio(r);
}

}  // namespace adastable
