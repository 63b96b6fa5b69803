#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fermirdm/oracles.hpp"
#include "fermirdm/special.hpp"

using namespace fermirdm;

TEST_CASE("Jacobi oracle on a known matrix") {
    // [[2,1],[1,2]] -> 3, 1
    const auto v = oracles::jacobi_eigenvalues({2.0, 1.0, 1.0, 2.0}, 2);
    CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quadrature oracle for V at p = 0 reproduces the zeroth moment") {
    // V(0) = -t sqrt(N)/pi * moment_0
    for (int n : {3, 6, 10}) {
        const double t = 0.01;
        const double v0 = oracles::potential_by_quadrature(n, t, 0.0);
        const double m0 = oracles::limit_moment_by_quadrature(n, 0);
        CHECK(v0 == doctest::Approx(-t * std::sqrt(n) / std::numbers::pi * m0).epsilon(1e-13));
    }
}

TEST_CASE("moment oracle for N = 2 vanishes at n = 0 and matches a hand integral at n = 1") {
    // F~ = sqrt(pi) (2 - z^2 / 2), weight exp(-z^2 / 8)
    CHECK(std::fabs(oracles::limit_moment_by_quadrature(2, 0)) < 1e-14);
    const double s = std::sqrt(std::numbers::pi);
    // int z^2 e^{-z^2/8} = sqrt(8 pi) * 4, int z^4 e^{-z^2/8} = sqrt(8 pi) * 48
    const double expected = s * std::sqrt(8.0 * std::numbers::pi) * (2.0 * 4.0 - 0.5 * 48.0);
    CHECK(oracles::limit_moment_by_quadrature(2, 1) == doctest::Approx(expected).epsilon(1e-13));
}
