#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fermirdm/errors.hpp"
#include "fermirdm/oracles.hpp"
#include "fermirdm/special.hpp"

using namespace fermirdm;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

TEST_CASE("Gauss-Hermite is exact up to degree 2M - 1") {
    for (int m : {1, 2, 5, 12, 40, 90}) {
        const auto r = gauss_hermite(m);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(m));
        double wsum = 0.0;
        for (double w : r.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(std::fabs(wsum - kSqrtPi) < 1e-13);
        for (int k = 0; k <= 2 * m - 1; ++k) {
            double s = 0.0, scale = 0.0;
            for (int i = 0; i < m; ++i) {
                s += r.weights[i] * std::pow(r.nodes[i], k);
                scale += r.weights[i] * std::pow(std::fabs(r.nodes[i]), k);
            }
            CAPTURE(m);
            CAPTURE(k);
            if (k % 2) {
                CHECK(std::fabs(s) <= 1e-13 * scale);
            } else {
                const double exact = std::tgamma(0.5 * (k + 1));
                CHECK(std::fabs(s - exact) <= 1e-12 * exact);
            }
        }
    }
    CHECK_THROWS_AS(gauss_hermite(0), ValidationError);
}

TEST_CASE("Gauss-Legendre integrates polynomials on the box") {
    const auto r = gauss_legendre(8, 2.0);
    double s0 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        s0 += r.weights[i];
        s4 += r.weights[i] * std::pow(r.nodes[i], 4);
    }
    CHECK(s0 == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(s4 == doctest::Approx(2.0 * 32.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("Hermite polynomials") {
    CHECK(hermite_eval(0, 3.7) == 1.0);
    CHECK(hermite_eval(2, 1.0) == 2.0);
    CHECK(hermite_eval(5, 0.5) == doctest::Approx(41.0).epsilon(1e-15));
    CHECK(hermite_shift_identity_check(1, 1, 1).first == doctest::Approx(4.0));
    CHECK(hermite_shift_identity_check(1, 1, 1).second == doctest::Approx(4.0));
    const auto [l2, r2] = hermite_shift_identity_check(2, 0.3, -0.3);
    CHECK(l2 == doctest::Approx(-2.0));
    CHECK(r2 == doctest::Approx(-2.0));
    const auto [l6, r6] = hermite_shift_identity_check(6, 0.7, 1.1);
    CHECK(l6 == doctest::Approx(r6).epsilon(1e-12));
}

TEST_CASE("prefactor symmetries") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (double t : {0.05, 0.4, 1.0}) {
        const PrefactorEvaluator f(make_params(3, t));
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), y = u(rng);
            const double v = f(x, y);
            CHECK(std::fabs(v - f(y, x)) <= 1e-13 * std::max(1.0, std::fabs(v)));
            CHECK(f(-x, -y) == v);
        }
    }
    CHECK_THROWS_AS(exact_prefactor(make_params(3, 1.5), 0.0, 0.0), ValidationError);
}

TEST_CASE("prefactor on the diagonal is close to sqrt(pi) N at strong coupling") {
    const double t = 0.01;
    const auto p = make_params(3, t);
    CHECK(std::fabs(exact_prefactor(p, 0.0, 0.0) - 3.0 * kSqrtPi) <= 3.0 * kSqrtPi * 10.0 * t * t);
}

TEST_CASE("free N = 2 prefactor") {
    // t = 1: p = 0 and q = x / t, so F = sqrt(pi) (h0 h0 + h1(x) h1(y)) = sqrt(pi) (1 + 2 x y)
    const auto p = make_params(2, 1.0);
    CHECK(exact_prefactor(p, 0.3, -0.8) == doctest::Approx(kSqrtPi * (1.0 - 0.48)).epsilon(1e-13));
    CHECK(exact_prefactor(p, 0.0, 0.0) == doctest::Approx(kSqrtPi).epsilon(1e-14));
}

TEST_CASE("limit polynomial coefficients") {
    const auto f2 = limit_prefactor(2);
    REQUIRE(f2.coeffs.size() == 2);
    CHECK(f2.coeffs[0] == doctest::Approx(2.0 * kSqrtPi).epsilon(1e-15));
    CHECK(f2.coeffs[1] == doctest::Approx(-0.5 * kSqrtPi).epsilon(1e-15));
    CHECK(f2(1.3) == doctest::Approx(kSqrtPi * (2.0 - 1.69 / 2.0)).epsilon(1e-14));

    const auto f3 = limit_prefactor(3);
    CHECK(f3.coeffs[0] == doctest::Approx(3.0 * kSqrtPi).epsilon(1e-15));
    CHECK(f3.coeffs[1] == doctest::Approx(-1.5 * kSqrtPi).epsilon(1e-15));
    CHECK(f3.coeffs[2] == doctest::Approx(kSqrtPi / 8.0).epsilon(1e-15));

    for (int n = 2; n <= kMaxParticles; ++n) {
        const auto f = limit_prefactor(n);
        CHECK(f(0.0) == kSqrtPi * n);
        CHECK(f(1.7) == f(-1.7));
    }
    for (int n = 2; n <= 12; ++n) {
        const auto f = limit_prefactor(n);
        for (double z : {0.3, 1.1, 2.5, 4.0}) CHECK(f(z) == doctest::Approx(f.eval_monomial(z)).epsilon(1e-10));
    }
}

TEST_CASE("exact prefactor approaches the limit polynomial") {
    const double t = 1e-3;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uz(-10.0, 10.0), ux(-1.0, 1.0);
    for (int n = 2; n <= 12; ++n) {
        const auto f = limit_prefactor(n);
        const PrefactorEvaluator exact(make_params(n, t));
        double scale = 0.0;
        for (double z = -10.0; z <= 10.0; z += 0.05) scale = std::max(scale, std::fabs(f(z)));
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double z = uz(rng), x = std::sqrt(t) * ux(rng);
            worst = std::max(worst, std::fabs(exact(x, x - t * z) - f(z)) / scale);
        }
        CAPTURE(n);
        CHECK(worst < 0.05);
    }
}

TEST_CASE("limit moments against quadrature") {
    CHECK(limit_moments(2, 0) == 0.0);
    for (int n = 2; n <= 12; ++n) {
        for (int k = 0; k <= 10; ++k) {
            const double closed = limit_moments(n, k);
            const double quad = oracles::limit_moment_by_quadrature(n, k);
            CAPTURE(n);
            CAPTURE(k);
            // N = 2, k = 0 vanishes identically; the quadrature leaves ~1e-50
            CHECK(std::fabs(closed - quad) <= 1e-10 * std::max(std::fabs(quad), 1e-30));
        }
    }
    CHECK(limit_moments(3, 0) > 0.0);
}
