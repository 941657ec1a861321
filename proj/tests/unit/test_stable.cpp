#include <adastable/error.hpp>
#include <adastable/stable.hpp>
#include <adastable/numerics.hpp>

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace adastable;
using std::numbers::pi;

TEST_CASE("pdf anchors at the centre") {
    CHECK(stable_pdf(0.0, 2.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(pi))).epsilon(1e-15));
    CHECK(stable_pdf(0.0, 1.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(stable_pdf(0.0, 1.5) == doctest::Approx(std::exp(ln_gamma(1.0 + 1.0 / 1.5)) / pi).epsilon(1e-11));
    CHECK(stable_pdf(0.0, 1.5) == doctest::Approx(std::tgamma(5.0 / 3.0) / pi).epsilon(1e-12));
}

TEST_CASE("pdf matches a direct inversion integral") {
    for (const double alpha : {0.7, 1.1, 1.5, 1.9}) {
        for (const double z : {-5.0, -1.0, 0.3, 3.0, 7.5}) {
            CAPTURE(alpha);
            CAPTURE(z);
            CHECK(stable_pdf(z, alpha) == doctest::Approx(oracle::stable_pdf(z, alpha, 0.0)).epsilon(1e-9));
        }
    }
    for (const double beta : {-0.3, 0.3, 1.0}) {
        for (const double z : {-4.0, -0.5, 0.0, 2.0, 6.0}) {
            CAPTURE(beta);
            CAPTURE(z);
            CHECK(stable_pdf(z, 1.5, beta) == doctest::Approx(oracle::stable_pdf(z, 1.5, beta)).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed forms over a grid") {
    for (double z = -10.0; z <= 10.0; z += 0.25) {
        CHECK(std::abs(stable_pdf(z, 2.0) - oracle::gaussian_var2_pdf(z)) < 1e-15);
        CHECK(std::abs(stable_pdf(z, 1.0) - oracle::cauchy_pdf(z)) < 1e-15);
        CHECK(stable_cdf(z, 2.0) == doctest::Approx(oracle::normal_cdf(z / std::numbers::sqrt2)).epsilon(1e-14));
    }
    // Shapes next to the closed forms go through the general path and must agree closely.
    for (const double z : {0.0, 0.7, 2.0}) {
        CHECK(stable_pdf(z, 1.9999) == doctest::Approx(stable_pdf(z, 2.0)).epsilon(1e-3));
        CHECK(stable_pdf(z, 1.0001) == doctest::Approx(stable_pdf(z, 1.0)).epsilon(1e-3));
    }
}

TEST_CASE("logpdf_full examples") {
    CHECK(stable_logpdf_full(0.4, {0.4, 1.0, 2.0, 0.0}) == doctest::Approx(-1.2655121).epsilon(1e-7));
    CHECK(stable_logpdf_full(3.0, {1.0, 2.0, 1.0, 0.0}) == doctest::Approx(std::log(1.0 / (2.0 * pi)) - std::log(2.0)));
    CHECK(stable_logpdf_full(1.0, {0.0, 1.0, 1.0, 0.0}) == doctest::Approx(-1.8378771).epsilon(1e-7));
    const StableParams th{0.3, 1.7, 1.6, -0.3};
    const StableParams scaled{0.6, 3.4, 1.6, -0.3};
    for (const double x : {-3.0, 0.1, 2.2, 40.0}) {
        CHECK(stable_logpdf_full(2.0 * x, scaled) == doctest::Approx(stable_logpdf_full(x, th) - std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("logpdf stays finite far out") {
    for (const double alpha : {0.6, 1.3, 1.8, 2.0}) {
        for (const double z : {1e3, 1e6, 1e12, 1e100, -1e200}) {
            CHECK(std::isfinite(stable_logpdf(z, alpha)));
        }
    }
    CHECK(stable_logpdf(1e200, 2.0) > -std::numeric_limits<double>::infinity());
}

TEST_CASE("symmetry of the symmetric law") {
    for (const double alpha : {0.8, 1.2, 1.5, 1.7, 1.95}) {
        for (const double z : {0.1, 0.9, 2.5, 8.0, 30.0}) {
            CHECK(std::abs(stable_pdf(z, alpha) - stable_pdf(-z, alpha)) < 1e-10);
        }
    }
}

TEST_CASE("cdf examples") {
    for (const double alpha : {0.6, 1.0, 1.3, 1.7, 2.0}) CHECK(stable_cdf(0.0, alpha) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stable_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(stable_cdf(1.0, 2.0) == doctest::Approx(0.7602500).epsilon(1e-7));
    // sf mirrors cdf for the symmetric law and keeps precision deep in the tail
    CHECK(stable_sf(5.0, 1.5) == doctest::Approx(stable_cdf(-5.0, 1.5)).epsilon(1e-12));
    CHECK(stable_sf(1e6, 1.5) > 0.0);
}

TEST_CASE("cdf is monotone and bounded") {
    for (const double alpha : {0.7, 1.2, 1.6, 1.95}) {
        for (const double beta : {0.0, 0.4}) {
            if (beta != 0.0 && alpha <= 1.0) continue;
            double prev = 0.0;
            for (double z = -60.0; z <= 60.0; z += 0.37) {
                const double c = stable_cdf(z, alpha, beta);
                CHECK(c >= prev);
                CHECK(c <= 1.0);
                prev = c;
            }
        }
    }
}

TEST_CASE("cdf differentiates to pdf") {
    const double h = 1e-4;
    for (const double alpha : {1.1, 1.5, 1.9}) {
        for (const double beta : {-0.3, 0.0, 0.3}) {
            for (double z = -6.0; z <= 6.0; z += 0.5) {
                const double deriv = (stable_cdf(z + h, alpha, beta) - stable_cdf(z - h, alpha, beta)) / (2.0 * h);
                CHECK(std::abs(deriv - stable_pdf(z, alpha, beta)) < 1e-4);
            }
        }
    }
}

TEST_CASE("pdf derivative matches finite differences") {
    const double h = 1e-5;
    for (const double alpha : {1.2, 1.7}) {
        for (const double z : {-3.0, -0.4, 0.8, 5.0}) {
            const double fd = (stable_pdf(z + h, alpha) - stable_pdf(z - h, alpha)) / (2.0 * h);
            CHECK(stable_pdf_derivative(z, alpha) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("power-law tail") {
    for (const double alpha : {1.2, 1.5, 1.8}) {
        const double ref = stable_pdf(20.0, alpha) * std::pow(20.0, alpha + 1.0);
        for (double z = 20.0; z <= 100.0; z += 5.0) {
            CHECK(stable_pdf(z, alpha) * std::pow(z, alpha + 1.0) == doctest::Approx(ref).epsilon(0.02));
            CHECK(stable_pdf(-z, alpha) * std::pow(z, alpha + 1.0) == doctest::Approx(ref).epsilon(0.02));
        }
    }
}

TEST_CASE("pdf is continuous across the tail switch") {
    for (const double alpha : {0.8, 1.3, 1.7}) {
        for (const double beta : {0.0, 0.5}) {
            if (beta != 0.0 && alpha <= 1.0) continue;
            const double r = tail_series_radius(alpha, beta);
            CHECK(stable_pdf(r * (1.0 + 1e-9), alpha, beta) == doctest::Approx(stable_pdf(r * (1.0 - 1e-9), alpha, beta)).epsilon(1e-8));
        }
    }
}

TEST_CASE("skewness flips with beta") {
    for (const double z : {-3.0, 0.5, 4.0}) {
        CHECK(stable_pdf(z, 1.6, 0.3) == doctest::Approx(stable_pdf(-z, 1.6, -0.3)).epsilon(1e-12));
    }
    // Positive beta puts the heavier tail on the right in this parameterization.
    CHECK(stable_pdf(20.0, 1.6, 0.5) > stable_pdf(-20.0, 1.6, 0.5));
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(stable_pdf(0.0, 0.4), DomainError);
    CHECK_THROWS_AS(stable_pdf(0.0, 2.1), DomainError);
    CHECK_THROWS_AS(stable_pdf(0.0, 1.0, 0.2), DomainError);
    CHECK_THROWS_AS(stable_pdf(0.0, 0.9, 0.2), DomainError);
    CHECK_THROWS_AS(stable_pdf(0.0, 1.5, 1.2), DomainError);
    CHECK_NOTHROW(stable_pdf(0.0, 2.0, 0.5));
    CHECK(stable_pdf(1.0, 2.0, 0.5) == stable_pdf(1.0, 2.0, 0.0));
    CHECK_THROWS_AS((StableParams{0.0, 0.0, 1.5, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((StableParams{0.0, -1.0, 1.5, 0.0}.validate()), DomainError);
}

TEST_CASE("moment_constant examples") {
    CHECK(moment_constant(1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(moment_constant(2.0, 1.0) == doctest::Approx(2.0 / std::sqrt(pi)).epsilon(1e-13));
    CHECK(moment_constant(2.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(moment_constant(1.5, 2.0), DomainError);
    CHECK_THROWS_AS(moment_constant(1.5, 0.0), DomainError);
    CHECK_THROWS_AS(moment_constant(1.5, -1.0), DomainError);
    // Cauchy E|X|^{1/2} by quadrature; its square is M(1, 1/2).
    const double q = 2.0 * oracle::half_line([](double z) { return std::sqrt(z) * oracle::cauchy_pdf(z); }, -60.0, 80.0);
    CHECK(q * q == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("moment_constant is continuous into the Gaussian branch") {
    for (const double p : {-0.5, 0.35, 1.0, 1.5}) {
        CHECK(moment_constant(1.99999, p) == doctest::Approx(moment_constant(2.0, p)).epsilon(1e-4));
    }
}

TEST_CASE("moment_constant against quadrature of the density") {
    for (const double alpha : {1.3, 1.7}) {
        for (const double p : {-0.4, 0.35, 0.9}) {
            const double m = oracle::half_line([&](double z) { return std::pow(z, p) * stable_pdf(z, alpha); },
                                               -80.0, 200.0 / (alpha - p), 1e-11);
            CHECK(std::pow(moment_constant(alpha, p), p) == doctest::Approx(2.0 * m).epsilon(1e-6));
        }
    }
}

TEST_CASE("rho0 examples") {
    CHECK(rho0(1.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(rho0(2.0) == doctest::Approx(0.2820948).epsilon(1e-7));
    CHECK(rho0(1.5) == doctest::Approx(0.2873530).epsilon(1e-6));
    CHECK_THROWS_AS(rho0(0.0), DomainError);
}

TEST_CASE("glued density") {
    for (const double z : {-4.0, -0.5, 0.0, 1.2, 9.0}) {
        CHECK(glued_pdf(z, 1.7, {0.0, 1.0, 1.0}) == doctest::Approx(stable_pdf(z, 1.7)).epsilon(1e-13));
    }
    const GluedAsymmetry asym{0.05, 1.0, 1.0};
    CHECK(glued_pdf(-1e-12, 1.9, asym) == doctest::Approx(glued_pdf(1e-12, 1.9, asym)).epsilon(1e-9));
    const GluedAsymmetry a2{0.05, 1.02, 0.98};
    const double left = oracle::half_line([&](double z) { return glued_pdf(-z, 1.95, a2); }, -60.0, 60.0, 1e-11);
    const double right = oracle::half_line([&](double z) { return glued_pdf(z, 1.95, a2); }, -60.0, 60.0, 1e-11);
    CHECK(left + right == doctest::Approx(1.0).epsilon(1e-7));
    CHECK_THROWS_AS(glued_pdf(0.0, 1.0, {0.6, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(glued_pdf(0.0, 1.5, {-0.1, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(glued_pdf(0.0, 1.5, {0.1, 0.0, 1.0}), DomainError);
}

TEST_CASE("sampler is deterministic and scale-equivariant") {
    const auto a = sample_stable({0.0, 1.0, 1.6, 0.0}, 1000, 42);
    const auto b = sample_stable({0.0, 1.0, 1.6, 0.0}, 1000, 42);
    const auto c = sample_stable({0.0, 1.0, 1.6, 0.0}, 1000, 43);
    CHECK(a == b);
    CHECK(a != c);
    CHECK_THROWS_AS(sample_stable({0.0, 1.0, 1.6, 0.0}, 0, 1), DomainError);
}

TEST_CASE("sampler moments at the closed-form shapes") {
    const auto g = sample_stable({0.0, 1.0, 2.0, 0.0}, 1000000, 11);
    CHECK(oracle::variance(g) == doctest::Approx(2.0).epsilon(0.005));
    auto c = sample_stable({5.0, 1.0, 1.0, 0.0}, 1000000, 12);
    std::nth_element(c.begin(), c.begin() + c.size() / 2, c.end());
    CHECK(std::abs(c[c.size() / 2] - 5.0) < 0.01);
}

TEST_CASE("sampler passes a Kolmogorov-Smirnov check") {
    for (const double beta : {0.0, -0.3}) {
        auto xs = sample_stable({0.0, 1.0, 1.7, beta}, 100000, 5);
        std::sort(xs.begin(), xs.end());
        const StableTable law(1.7, beta);
        double d = 0.0;
        const auto n = static_cast<double>(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double f = law.cdf(xs[i]);
            d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
        }
        CAPTURE(beta);
        CHECK(d < 1.63 / std::sqrt(n));
    }
}

TEST_CASE("stability under summation") {
    const double alpha = 1.5;
    const auto x = sample_stable({0.0, 1.0, alpha, 0.0}, 200000, 21);
    const auto y = sample_stable({0.0, 2.0, alpha, 0.0}, 200000, 22);
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + y[i];
    const double p = 0.4;
    double acc = 0.0;
    for (const double v : s) acc += std::pow(std::abs(v), p);
    const double sigma_sum = std::pow(acc / static_cast<double>(s.size()), 1.0 / p) / moment_constant(alpha, p);
    CHECK(sigma_sum == doctest::Approx(std::pow(1.0 + std::pow(2.0, alpha), 1.0 / alpha)).epsilon(0.01));
}

TEST_CASE("StableTable agrees with direct evaluation") {
    for (const double alpha : {0.8, 1.05, 1.5, 1.9}) {
        for (const double beta : {0.0, 0.3}) {
            if (beta != 0.0 && alpha <= 1.0) continue;
            const StableTable t(alpha, beta);
            for (const double z : {-250.0, -17.0, -3.3, -0.2, 0.0, 0.6, 2.9, 11.0, 90.0, 4000.0}) {
                CAPTURE(alpha);
                CAPTURE(beta);
                CAPTURE(z);
                CHECK(t.logpdf(z) == doctest::Approx(stable_logpdf(z, alpha, beta)).epsilon(1e-9));
                CHECK(t.cdf(z) == doctest::Approx(stable_cdf(z, alpha, beta)).epsilon(1e-9));
                CHECK(t.sf(z) == doctest::Approx(stable_sf(z, alpha, beta)).epsilon(1e-9));
            }
        }
    }
    const StableTable g(2.0, 0.0);
    CHECK(g.pdf(1.0) == doctest::Approx(oracle::gaussian_var2_pdf(1.0)).epsilon(1e-15));
}
