#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "fermirdm/errors.hpp"
#include "fermirdm/potential.hpp"
#include "fermirdm/spectra.hpp"

using namespace fermirdm;

namespace {

// Spectra reused across test cases; the t = 0.01 solves take seconds.
const SpectrumResult& nystrom(int n, double t) {
    static std::map<std::pair<int, double>, SpectrumResult> cache;
    auto it = cache.find({n, t});
    if (it == cache.end()) it = cache.emplace(std::pair{n, t}, solve_nystrom(build_kernel(make_params(n, t)))).first;
    return it->second;
}

void check_solver_invariants(const SpectrumResult& s, int n) {
    double sum = 0.0;
    for (double l : s.lambdas) {
        CHECK(l >= -1e-8);
        CHECK(l <= 1.0 + 1e-8);
        sum += l;
    }
    CHECK(std::fabs(sum - n) < 1e-8);
    CHECK(std::fabs(s.trace_error) < 1e-8);

    const std::size_t m = s.grid_nodes.size();
    const std::size_t nv = std::min<std::size_t>(s.orbitals.cols(), 10);
    for (std::size_t k = 0; k < nv; ++k) {
        for (std::size_t l = k; l < nv; ++l) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += s.grid_weights[i] * s.orbitals(i, k) * s.orbitals(i, l);
            CHECK(std::fabs(d - (k == l ? 1.0 : 0.0)) < 1e-8);
        }
        // the grid is symmetric, so reflection maps node i to node m - 1 - i
        double overlap = 0.0;
        for (std::size_t i = 0; i < m; ++i) overlap += s.grid_weights[i] * s.orbitals(i, k) * s.orbitals(m - 1 - i, k);
        CHECK(std::fabs(std::fabs(overlap) - 1.0) < 1e-6);
        CHECK(overlap * s.orbital_parity[k] > 0.0);
    }
}

}  // namespace

TEST_CASE("kernel symmetries and trace") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (auto [n, t] : {std::pair{2, 0.5}, {3, 0.3}, {4, 1.0}, {6, 0.05}}) {
        const auto k = build_kernel(make_params(n, t));
        const double r00 = k(0.0, 0.0);
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng), y = u(rng);
            CHECK(std::fabs(k(x, y) - k(y, x)) <= 1e-12 * std::fabs(r00));
            CHECK(k(-x, -y) == k(x, y));
        }
        // Gauss-Hermite in the scaled variable integrates the Gaussian diagonal
        const double c = k.params().diag_rate;
        const auto gh = gauss_hermite(n + 40);
        double trace = 0.0;
        for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
            const double x = gh.nodes[i] / std::sqrt(c);
            trace += gh.weights[i] * std::exp(c * x * x) * k.diagonal(x) / std::sqrt(c);
        }
        CHECK(trace == doctest::Approx(n).epsilon(1e-10));
    }
    const auto k3 = build_kernel(make_params(3, 1e-3));
    CHECK(k3.normalization() == doctest::Approx(std::sqrt(3.0) / std::numbers::pi).epsilon(1e-5));
    CHECK_THROWS_AS(build_kernel(make_params(3, 2.0)), ValidationError);
}

TEST_CASE("solver invariants") {
    for (auto [n, t] : {std::pair{2, 0.5}, {3, 0.3}, {4, 0.1}, {5, 0.05}, {3, 1.0}}) {
        CAPTURE(n);
        CAPTURE(t);
        check_solver_invariants(nystrom(n, t), n);
    }
    CHECK_THROWS_AS(solve_nystrom(build_kernel(make_params(kMaxNystromParticles + 1, 0.5))), ValidationError);
}

TEST_CASE("free fermions are idempotent") {
    const auto& s = nystrom(3, 1.0);
    for (int k = 0; k < 3; ++k) CHECK(s.lambdas[k] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::fabs(s.lambdas[3]) < 1e-10);
}

TEST_CASE("N = 2 occupations come in exact pairs") {
    for (double t : {0.2, 0.5, 0.9}) {
        const auto& l = nystrom(2, t).lambdas;
        for (std::size_t k = 0; k + 1 < l.size() && l[k] > 1e-12; k += 2) CHECK(l[k] - l[k + 1] < 1e-10 * l[0]);
        const auto seg = pairing_segments(l);
        REQUIRE(seg.size() == 1);
        CHECK(seg[0].label == RegimeLabel::paired);
    }
}

TEST_CASE("grid refinement changes the leading occupations below 1e-8") {
    const double t = 0.05;
    const auto& coarse = nystrom(3, t);
    const double h = coarse.grid_weights.front();
    const double hw = coarse.grid_nodes.back() + 0.5 * h;
    GridSpec fine;
    fine.spacing = h / 2;
    fine.half_width = hw;
    const auto f = solve_nystrom(build_kernel(make_params(3, t)), fine);
    for (int k = 0; k < 10; ++k) CHECK(std::fabs(f.lambdas[k] - coarse.lambdas[k]) < 1e-8);

    GridSpec coarse_spec;
    coarse_spec.spacing = t;
    CHECK_THROWS_AS(solve_nystrom(build_kernel(make_params(3, t)), coarse_spec), ValidationError);
}

TEST_CASE("strong coupling at t = 0.01: parity structure and cross-method agreement") {
    const double t = 0.01;
    for (int n : {3, 4, 5}) {
        const auto p = make_params(n, t);
        const auto pot = build_potential(p);
        const auto rep = find_extrema(pot);
        const auto& ny = nystrom(n, t);
        const auto sch = solve_momentum_schrodinger(p, pot, 20);
        for (int k = 0; k < 10; ++k) {
            CAPTURE(n);
            CAPTURE(k);
            CHECK(std::fabs(ny.lambdas[k] - sch.lambdas[k]) <= 10.0 * t * ny.lambdas[k]);
        }
        const auto hp = harmonic_params(pot, rep);
        const double spacing = t * t * hp.alpha * hp.beta;
        if (n % 2) {
            // central-well levels ahead of the first side-well level (k = 4 for N = 3, k = 2 for N = 5)
            for (int k = 0; k < (n == 3 ? 2 : 1); ++k) CHECK(ny.lambdas[k] - ny.lambdas[k + 1] > 0.1 * spacing);
            CHECK(segment_regimes(rep, ny).segments.front().label == RegimeLabel::isolated);
        } else {
            for (int k = 0; k < 6; k += 2) CHECK(ny.lambdas[k] - ny.lambdas[k + 1] < 1e-10 * ny.lambdas[0]);
            CHECK(segment_regimes(rep, ny).segments.front().label == RegimeLabel::paired);
        }
        const int ks = k_star(rep, ny);
        for (int k = 0; k + 1 < ks && k < static_cast<int>(ny.lambdas.size()); ++k) CHECK(ny.lambdas[k] > 0.0);
    }
}

TEST_CASE("k_star scales as 1/t") {
    const auto p1 = make_params(4, 0.01), p2 = make_params(4, 0.02);
    const auto v1 = build_potential(p1), v2 = build_potential(p2);
    const auto r1 = find_extrema(v1), r2 = find_extrema(v2);
    const int ks1 = k_star(r1, solve_momentum_schrodinger(p1, v1, 120));
    const int ks2 = k_star(r2, solve_momentum_schrodinger(p2, v2, 120));
    CHECK(ks1 >= 50);
    CHECK(ks1 <= 200);
    CHECK(std::abs(ks1 - 2 * ks2) <= 4);
    const int kn1 = k_star(r1, nystrom(4, 0.01)), kn2 = k_star(r2, nystrom(4, 0.02));
    CHECK(std::abs(kn1 - 2 * kn2) <= 4);

    SpectrumResult high;
    high.lambdas = {0.9, 0.8};
    CHECK(k_star(r1, high) == 3);
}

TEST_CASE("harmonic and tail formulas") {
    const auto pot = build_potential(make_params(4, 0.01));
    const auto hp = harmonic_params(pot, find_extrema(pot));
    const auto series = harmonic_series(hp, 0.01, ParityClass::even_like_degenerate_pair, 6);
    REQUIRE(series.size() == 6);
    CHECK(series[0] == series[1]);
    CHECK(series[2] == series[3]);
    const auto lvl = harmonic_spectrum(2.0, 3.0, 0.01, 1, ParityClass::odd_like_unique_zero_min);
    CHECK(lvl.value == doctest::Approx(0.01 * 2.0 * (1.0 - 0.01 * 3.0 * 0.5)));
    CHECK_FALSE(lvl.paired);
    CHECK_THROWS_AS(harmonic_spectrum(2.0, 3.0, 0.01, 31, ParityClass::odd_like_unique_zero_min), ValidationError);

    for (int n : {3, 4, 7}) {
        const double t = 0.05;
        const auto p = make_params(n, t);
        const double rate = std::exp(-2.0 * n * t / std::sqrt(n - 1.0));
        const int k = 2000;
        const double ratio = tail_spectrum(p, k + 1) / tail_spectrum(p, k);
        CHECK(ratio == doctest::Approx(std::pow((k + 1.0) / k, n - 1) * rate).epsilon(1e-12));
        CHECK(ratio == doctest::Approx(rate).epsilon(5e-3));
    }
    CHECK_THROWS_AS(tail_spectrum(make_params(3, 0.05), 10), ValidationError);
}

TEST_CASE("duality at the self-dual point and away from it") {
    const auto& s1 = nystrom(3, 1.0);
    CHECK(duality_check(3, 1.0, s1) < 1e-10);
    CHECK_THROWS_AS(duality_check(3, 2.0, s1), ValidationError);
}
