#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "fermirdm/densities.hpp"
#include "fermirdm/errors.hpp"

using namespace fermirdm;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

// oscillator orbitals for hbar = m = omega = 1
double phi(int k, double x) {
    const double g = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
    if (k == 0) return g;
    if (k == 1) return std::sqrt(2.0) * x * g;
    return (2.0 * x * x - 1.0) / std::sqrt(2.0) * g;
}

}  // namespace

TEST_CASE("wavefunction antisymmetry") {
    const auto p = make_params(3, 0.6);
    const std::array<double, 3> a{0.1, -0.4, 0.9}, swapped{-0.4, 0.1, 0.9}, tied{0.3, 0.3, -1.0};
    CHECK(wavefunction(p, a) == doctest::Approx(-wavefunction(p, swapped)).epsilon(1e-14));
    CHECK(wavefunction(p, tied) == 0.0);
    const std::array<double, 2> wrong{0.0, 1.0};
    CHECK_THROWS_AS(wavefunction(p, wrong), ValidationError);
}

TEST_CASE("free N = 3 ground state is the Slater determinant of the three lowest orbitals") {
    const auto p = make_params(3, 1.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double ratio0 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::array<double, 3> x{u(rng), u(rng), u(rng)};
        double det = 0.0;
        // 3x3 determinant of phi_k(x_j)
        det += phi(0, x[0]) * (phi(1, x[1]) * phi(2, x[2]) - phi(1, x[2]) * phi(2, x[1]));
        det -= phi(0, x[1]) * (phi(1, x[0]) * phi(2, x[2]) - phi(1, x[2]) * phi(2, x[0]));
        det += phi(0, x[2]) * (phi(1, x[0]) * phi(2, x[1]) - phi(1, x[1]) * phi(2, x[0]));
        const double r = wavefunction(p, x) / det;
        if (i == 0) ratio0 = r;
        CHECK(r == doctest::Approx(ratio0).epsilon(1e-12));
    }
}

TEST_CASE("oracle agrees with the analytic kernel") {
    const auto xs = linspace(-2.0, 2.0, 20);
    for (auto [n, t] : {std::pair{3, 0.3}, {3, 0.7}, {3, 1.0}, {4, 0.5}, {4, 1.0}, {2, 0.4}}) {
        const auto p = make_params(n, t);
        const OracleRdm o(p);
        const auto k = build_kernel(p);
        double worst = 0.0;
        for (double x : xs)
            for (double y : xs) worst = std::max(worst, std::fabs(o(x, y) - k(x, y)) / std::fabs(o(x, y)));
        CAPTURE(n);
        CAPTURE(t);
        CHECK(worst < 1e-8);
    }
    CHECK_THROWS_AS(OracleRdm(make_params(kMaxOracleParticles + 1, 0.5)), ValidationError);
}

TEST_CASE("free N = 2 diagonal is |phi0|^2 + |phi1|^2") {
    const auto p = make_params(2, 1.0);
    for (double x : linspace(-3.0, 3.0, 13)) {
        const double ref = phi(0, x) * phi(0, x) + phi(1, x) * phi(1, x);
        CHECK(oracle_rdm(p, x, x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("oracle spectrum at t > 1 is physical") {
    const auto s = oracle_spectrum(make_params(3, 2.0));
    double sum = 0.0;
    for (double l : s.lambdas) {
        CHECK(l <= 1.0 + 1e-8);
        CHECK(l >= -1e-8);
        sum += l;
    }
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("shell structure of the one-particle density") {
    for (int n = 2; n <= 8; ++n) {
        const auto xs = linspace(-6.0, 6.0, 1201);
        CHECK(count_local_maxima(one_particle_density(make_params(n, 1.0), xs).values) == n);
        const auto xs1 = linspace(-4.0, 4.0, 801);
        if (n <= kMaxNystromParticles) CHECK(count_local_maxima(one_particle_density(make_params(n, 0.1), xs1).values) == 1);
    }
    // repulsive side through the oracle, on the natural length scale t
    const auto xs10 = linspace(-40.0, 40.0, 1601);
    const auto d10 = one_particle_density(make_params(3, 10.0), xs10);
    CHECK(count_local_maxima(d10.values) == 3);
    double integral = 0.0;
    for (std::size_t i = 1; i < xs10.size(); ++i) integral += 0.5 * (xs10[i] - xs10[i - 1]) * (d10.values[i] + d10.values[i - 1]);
    CHECK(integral == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("pair density") {
    const auto xs = linspace(-2.5, 2.5, 201);
    for (int n : {3, 4}) {
        const auto pd = two_particle_density(make_params(n, 0.1), xs, xs);
        double peak = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(pd.values(i, i) == 0.0);
            for (std::size_t j = 0; j < xs.size(); ++j) peak = std::max(peak, pd.values(i, j));
        }
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j) CHECK(std::fabs(pd.values(i, j) - pd.values(j, i)) <= 1e-14 * peak);
        CHECK(count_surface_maxima(pd.values) == 2);
    }
    // normalization: a coarse rule resolving the t = 0.5 surface
    const auto p = make_params(3, 0.5);
    const auto g = linspace(-6.0, 6.0, 241);
    const auto pd = two_particle_density(p, g, g);
    const double h = g[1] - g[0];
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) total += pd.values(i, j) * h * h;
    CHECK(total == doctest::Approx(3.0).epsilon(1e-6));
    CHECK_THROWS_AS(two_particle_density(make_params(kMaxPairDensityParticles + 1, 0.5), g, g), ValidationError);
}

TEST_CASE("correlation function") {
    const auto xs = linspace(-1.5, 1.5, 61);
    const auto p = make_params(3, 0.3);
    const auto pd = two_particle_density(p, xs, xs);
    const auto n1 = one_particle_density(p, xs);
    const auto c = correlation_function(pd, n1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(c.values(i, i) == 0.0);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            CHECK(c.values(i, j) == doctest::Approx(c.values(j, i)).epsilon(1e-13));
            CHECK(c.values(i, j) == doctest::Approx(pd.values(i, j) / (n1.values[i] * n1.values[j])).epsilon(1e-14));
        }
    }
    const auto other = linspace(-1.0, 1.0, 61);
    CHECK_THROWS_AS(correlation_function(pd, one_particle_density(p, other)), ValidationError);

    // lobe counts agree between N = 3 and N = 4 at t = 0.1
    const auto g = linspace(-2.5, 2.5, 201);
    int lobes[2];
    for (int n : {3, 4}) {
        const auto q = make_params(n, 0.1);
        const auto cf = correlation_function(two_particle_density(q, g, g), one_particle_density(q, g));
        linalg::Matrix masked = cf.values;
        for (std::size_t k = 0; k < cf.mask.size(); ++k)
            if (cf.mask[k]) masked.data()[k] = 0.0;
        lobes[n - 3] = count_surface_maxima(masked);
    }
    CHECK(lobes[0] == lobes[1]);
}

TEST_CASE("fermionic kernel is the bosonic kernel times the prefactor") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({u(rng), u(rng)});
    for (auto [n, t] : {std::pair{3, 0.2}, {2, 0.5}, {4, 1.0}}) {
        const auto p = make_params(n, t);
        CHECK(boson_fermion_ratio_check(p, pts) < 1e-12 * std::fabs(build_kernel(p)(0.0, 0.0)));
    }
}
