#include <doctest.h>

#include <cmath>
#include <limits>

#include "fermirdm/errors.hpp"
#include "fermirdm/model.hpp"

using namespace fermirdm;

TEST_CASE("noninteracting limit has B = b = 0") {
    const auto p = make_params(3, 1.0);
    CHECK(p.A == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.B == 0.0);
    CHECK(p.a == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.b == 0.0);
    CHECK(p.p_squared == 0.0);
}

TEST_CASE("N = 2, t = 0.5 by hand") {
    const auto p = make_params(2, 0.5);
    CHECK(p.A == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.B == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p.b == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(p.a == doctest::Approx(1.025).epsilon(1e-14));
    CHECK(p.diag_rate == doctest::Approx(2 * p.a - p.b).epsilon(1e-14));
}

TEST_CASE("domain violations") {
    CHECK_THROWS_AS(make_params(3, 0.0), ValidationError);
    CHECK_THROWS_AS(make_params(3, -1.0), ValidationError);
    CHECK_THROWS_AS(make_params(3, std::numeric_limits<double>::infinity()), ValidationError);
    CHECK_THROWS_AS(make_params(3, std::nan("")), ValidationError);
    CHECK_THROWS_AS(make_params(1, 0.5), ValidationError);
    CHECK_THROWS_AS(make_params(kMaxParticles + 1, 0.5), ValidationError);
    CHECK_NOTHROW(make_params(kMaxParticles, 0.5));
}

TEST_CASE("kernel Gaussian is positive definite over the whole range") {
    for (int n : {2, 3, 4, 7, 12, 30, 64}) {
        for (double t = 1e-3; t <= 1e4; t *= 1.7) {
            const auto p = make_params(n, t);
            CAPTURE(n);
            CAPTURE(t);
            CHECK(p.A > 0.0);
            CHECK(p.A - (n - 1) * p.B > 0.0);
            CHECK(2.0 * p.a > std::fabs(p.b));
            CHECK(p.diag_rate > 0.0);
        }
    }
}

TEST_CASE("coupling") {
    CHECK(coupling_from_t(make_params(4, 1.0)) == 0.0);
    CHECK(coupling_from_t(make_params(2, 0.5)) == doctest::Approx(7.5).epsilon(1e-14));
    CHECK(coupling_from_t(make_params(3, 1e4)) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.01; t < 100.0; t *= 1.3) {
        const double d = coupling_from_t(make_params(5, t));
        CHECK(d < prev);
        prev = d;
    }
    for (int n : {2, 3, 8, 20}) {
        for (double t : {0.003, 0.1, 0.9, 1.0, 1.3, 1.7}) {
            const double back = t_from_coupling(n, coupling_from_t(make_params(n, t)));
            CHECK(std::fabs(back - t) <= 1e-14 * t);
        }
        // toward D = -1/N the map loses t^-4 to cancellation in D itself:
        // relative condition ~ t^4 / 4
        const double t = 40.0;
        const double back = t_from_coupling(n, coupling_from_t(make_params(n, t)));
        CHECK(std::fabs(back - t) <= 1e-15 * std::pow(t, 4) * t);
    }
    CHECK_THROWS_AS(t_from_coupling(3, -1.0 / 3.0), ValidationError);
    CHECK_THROWS_AS(t_from_coupling(3, -1.0), ValidationError);
}
