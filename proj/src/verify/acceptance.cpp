#include "fermirdm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "fermirdm/densities.hpp"
#include "fermirdm/errors.hpp"
#include "fermirdm/oracles.hpp"
#include "fermirdm/potential.hpp"
#include "fermirdm/special.hpp"
#include "fermirdm/spectra.hpp"

namespace fermirdm::acceptance {

namespace {

using Checks = std::vector<Check>;

struct Context {
    double scale = 1.0;
    Checks checks;

    /// Passes when value <= bound * scale.
    void at_most(std::string name, double value, double bound) {
        const double b = bound * scale;
        checks.push_back({std::move(name), value, b, value <= b});
    }
    /// Passes when value >= bound (bounds of this kind are not scaled).
    void at_least(std::string name, double value, double bound) {
        checks.push_back({std::move(name), value, bound, value >= bound});
    }
    void equal(std::string name, double value, double expected) {
        checks.push_back({std::move(name), value, expected, value == expected});
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// 1 and 2 share the scan.
void parity_scan(Context& ctx, bool counts_only) {
    const auto start = std::chrono::steady_clock::now();
    for (int n = 3; n <= 20; ++n) {
        const auto pot = build_potential(make_params(n, 0.1 / n));
        const auto rep = find_extrema(pot);
        const std::string tag = "N=" + std::to_string(n);
        if (counts_only) {
            ctx.equal(tag + " minima count", static_cast<double>(rep.minima.size()), n);
            continue;
        }
        if (n % 2) {
            ctx.equal(tag + " odd-like verdict",
                      rep.parity_class == ParityClass::odd_like_unique_zero_min ? 1.0 : 0.0, 1.0);
            ctx.equal(tag + " multiplicity", rep.global_min_multiplicity, 1);
            ctx.at_most(tag + " |p_min|", rep.global_min_location, 1e-9);
        } else {
            ctx.equal(tag + " even-like verdict",
                      rep.parity_class == ParityClass::even_like_degenerate_pair ? 1.0 : 0.0, 1.0);
            ctx.equal(tag + " multiplicity", rep.global_min_multiplicity, 2);
            // Values of the two minima of the pair.
            double lo = 0.0, hi = 0.0;
            for (const auto& m : rep.minima) {
                if (std::fabs(std::fabs(m.location) - rep.global_min_location) <= 1e-12 * rep.global_min_location) {
                    (m.location < 0 ? lo : hi) = m.value;
                }
            }
            ctx.at_most(tag + " pair value gap (rel)", std::fabs(lo - hi) / std::fabs(rep.global_min_value), 1e-9);
        }
    }
    ctx.at_most("runtime [s]", seconds_since(start), 10.0);
}

void free_fermions(Context& ctx) {
    const auto start = std::chrono::steady_clock::now();
    for (int n = 2; n <= 6; ++n) {
        GridSpec spec;
        spec.k_max = n + 2;
        const auto s = solve_nystrom(build_kernel(make_params(n, 1.0)), spec);
        double top = 0.0, rest = 0.0;
        for (int k = 0; k < n; ++k) top = std::max(top, std::fabs(s.lambdas[k] - 1.0));
        for (std::size_t k = n; k < s.lambdas.size(); ++k) rest = std::max(rest, std::fabs(s.lambdas[k]));
        const std::string tag = "N=" + std::to_string(n);
        ctx.at_most(tag + " max|lambda_k - 1|, k <= N", top, 1e-6);
        ctx.at_most(tag + " max|lambda_k|, k > N", rest, 1e-6);
        ctx.at_most(tag + " |trace - N|", s.trace_error, 1e-8);
    }
    ctx.at_most("runtime [s]", seconds_since(start), 30.0);
}

void two_particle_pairing(Context& ctx) {
    for (double t : {0.3, 0.7}) {
        const auto s = solve_nystrom(build_kernel(make_params(2, t)), GridSpec{});
        const double l1 = s.lambdas.front();
        double worst = 0.0;
        int pairs = 0;
        for (std::size_t k = 0; k + 1 < s.lambdas.size() && s.lambdas[k] > 1e-12; k += 2, ++pairs) {
            worst = std::max(worst, s.lambdas[k] - s.lambdas[k + 1]);
        }
        ctx.at_most(fmt("t=%g max intra-pair gap / lambda_1", t), worst / l1, 1e-10);
        ctx.at_least(fmt("t=%g pairs examined", t), pairs, 5);
    }
}

struct Cache {
    std::map<int, SpectrumResult> nystrom_t001;
};

const SpectrumResult& nystrom_t001(Cache& cache, int n) {
    auto it = cache.nystrom_t001.find(n);
    if (it == cache.nystrom_t001.end()) {
        GridSpec spec;
        spec.k_max = 40;
        it = cache.nystrom_t001.emplace(n, solve_nystrom(build_kernel(make_params(n, 0.01)), spec)).first;
    }
    return it->second;
}

void fig2_structure(Context& ctx, Cache& cache) {
    const auto start = std::chrono::steady_clock::now();
    const double t = 0.01;
    {
        const auto& s = nystrom_t001(cache, 3);
        const auto pot = build_potential(make_params(3, t));
        const auto hp = harmonic_params(pot, find_extrema(pot));
        const auto& l = s.lambdas;
        double min_gap = 1e300;
        for (int k = 0; k < 9; ++k) min_gap = std::min(min_gap, l[k] - l[k + 1]);
        ctx.at_least("N=3 min gap among leading 10 / (1e-6 lambda_1) [isolated if >= 1]", min_gap / (kPairingRelTol * l[0]),
                     1.0);
        const double slope = t * t * hp.alpha * hp.beta;
        ctx.at_most("N=3 |(lambda_1 - lambda_2) - t^2 alpha beta| / t^2 alpha beta",
                    std::fabs((l[0] - l[1]) - slope) / slope, 0.10);
        const double l1_harm = harmonic_spectrum(hp.alpha, hp.beta, t, 1, ParityClass::odd_like_unique_zero_min).value;
        ctx.at_most("N=3 |lambda_1 - harmonic| / harmonic", std::fabs(l[0] - l1_harm) / l1_harm, 0.05);
    }
    {
        const auto& s = nystrom_t001(cache, 4);
        const auto pot = build_potential(make_params(4, t));
        const auto hp = harmonic_params(pot, find_extrema(pot));
        const auto& l = s.lambdas;
        double worst = 0.0;
        for (int k = 0; k < 6; k += 2) worst = std::max(worst, l[k] - l[k + 1]);
        ctx.at_most("N=4 max intra-pair gap / lambda_1, leading 3 pairs", worst / l[0], 1e-10);
        const double slope = t * t * hp.alpha * hp.beta;
        double dev = 0.0;
        for (int k = 0; k < 4; k += 2) dev = std::max(dev, std::fabs((l[k] - l[k + 2]) - slope) / slope);
        ctx.at_most("N=4 max |inter-pair spacing - t^2 alpha beta| / t^2 alpha beta", dev, 0.50);
    }
    ctx.at_most("runtime [s]", seconds_since(start), 600.0);
}

void cross_method(Context& ctx, Cache& cache) {
    const double t = 0.01;
    for (int n : {3, 4}) {
        const auto params = make_params(n, t);
        const auto& ny = nystrom_t001(cache, n);
        const auto pot = build_potential(params);
        const auto sc = solve_momentum_schrodinger(params, pot, 10);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) worst = std::max(worst, std::fabs(sc.lambdas[k] - ny.lambdas[k]) / ny.lambdas[k]);
        ctx.at_most("N=" + std::to_string(n) + " max relative deviation, top 10", worst, 10.0 * t);
    }
}

void duality(Context& ctx) {
    for (auto [n, t] : {std::pair{3, 0.5}, std::pair{2, 0.8}}) {
        GridSpec spec;
        spec.k_max = 10;
        const auto inv = oracle_spectrum(make_params(n, 1.0 / t), spec);
        ctx.at_most(fmt("N=%g t=%g max|lambda(t) - lambda(1/t)|", n, t), duality_check(n, t, inv), 1e-6);
    }
}

void tail_law(Context& ctx) {
    const double t = 0.05;
    const int k_lo = static_cast<int>(std::lround(3.0 / t)), k_hi = static_cast<int>(std::lround(6.0 / t));
    for (int n : {3, 4}) {
        const auto params = make_params(n, t);
        GridSpec spec;
        spec.k_max = k_hi;
        const auto s = solve_nystrom(build_kernel(params), spec);
        // Least squares of log(lambda_k / (k t)^(N-1)) on k.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int k = k_lo; k <= k_hi; ++k, ++m) {
            const double y = std::log(s.lambdas[k - 1] / std::pow(k * t, n - 1));
            sx += k;
            sy += y;
            sxx += double(k) * k;
            sxy += k * y;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double expected = -2.0 * n * t / std::sqrt(n - 1.0);
        ctx.at_most("N=" + std::to_string(n) + fmt(" |slope/expected - 1| (slope %.5g, expected %.5g)", slope, expected),
                    std::fabs(slope / expected - 1.0), 0.05);
    }
}

void coefficient_identities(Context& ctx) {
    double worst_v = 0.0, worst_m = 0.0;
    for (int n = 2; n <= 12; ++n) {
        const double t = 0.1 / n;
        const auto pot = build_potential(make_params(n, t));
        for (int j = (n == 2 ? 1 : 0); j < 20; ++j) {
            const double p = 3.0 * j / 19.0 / std::sqrt(t);
            const double ref = oracles::potential_by_quadrature(n, t, p);
            worst_v = std::max(worst_v, std::fabs(pot(p) - ref) / std::fabs(ref));
        }
        for (int k = 0; k <= 10; ++k) {
            const double ref = oracles::limit_moment_by_quadrature(n, k);
            const double got = limit_moments(n, k);
            const double err = (n == 2 && k == 0) ? std::fabs(got - ref) : std::fabs(got - ref) / std::fabs(ref);
            worst_m = std::max(worst_m, err);
        }
    }
    ctx.at_most("max relative error V (coefficients vs quadrature), N <= 12", worst_v, 1e-10);
    ctx.at_most("max relative error moments vs quadrature, N <= 12, n <= 10", worst_m, 1e-10);
    double worst_f0 = 0.0;
    for (int n = 2; n <= 64; ++n) {
        const auto poly = limit_prefactor(n);
        const double exact = std::sqrt(std::numbers::pi) * n;
        worst_f0 = std::max({worst_f0, std::fabs(poly.coeffs[0] - exact), std::fabs(poly(0.0) - exact)});
    }
    ctx.equal("max |F~(0) - sqrt(pi) N|, N <= 64", worst_f0, 0.0);
    ctx.equal("v_{2,0}", build_potential(make_params(2, 0.05)).v_coeffs[0], 0.0);
}

void kernel_equivalence(Context& ctx) {
    const auto start = std::chrono::steady_clock::now();
    for (auto [n, t] : {std::pair{3, 0.3}, std::pair{3, 0.7}, std::pair{3, 1.0}, std::pair{4, 0.5}, std::pair{4, 1.0}}) {
        const auto params = make_params(n, t);
        const RdmKernel kernel(params);
        const OracleRdm oracle(params);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const double x = -2.0 + 4.0 * i / 19.0, y = -2.0 + 4.0 * j / 19.0;
                const double a = kernel(x, y), o = oracle(x, y);
                worst = std::max(worst, std::fabs(a - o) / std::fabs(o));
            }
        }
        ctx.at_most(fmt("N=%g t=%g max relative deviation", n, t), worst, 1e-8);
    }
    ctx.at_most("runtime [s]", seconds_since(start), 300.0);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

void densities(Context& ctx) {
    for (int n = 2; n <= 8; ++n) {
        const auto xs = linspace(-6.0, 6.0, 1201);
        const auto d = one_particle_density(make_params(n, 1.0), xs);
        ctx.equal("t=1 N=" + std::to_string(n) + " maxima of n(x)", count_local_maxima(d.values), n);
    }
    const auto xs1 = linspace(-4.0, 4.0, 801);
    for (int n : {3, 4}) {
        const auto d = one_particle_density(make_params(n, 0.1), xs1);
        ctx.equal("t=0.1 N=" + std::to_string(n) + " maxima of n(x)", count_local_maxima(d.values), 1);
    }
    // spacing t/4: the lobes sit within about t of the diagonal
    const auto grid = linspace(-2.5, 2.5, 201);
    int lobes[2] = {0, 0};
    for (int n : {3, 4}) {
        const auto pd = two_particle_density(make_params(n, 0.1), grid, grid);
        double peak = 0.0, diag = 0.0, asym = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j)
            for (std::size_t i = 0; i < grid.size(); ++i) peak = std::max(peak, pd.values(i, j));
        for (std::size_t j = 0; j < grid.size(); ++j) {
            diag = std::max(diag, std::fabs(pd.values(j, j)));
            for (std::size_t i = 0; i < grid.size(); ++i)
                asym = std::max(asym, std::fabs(pd.values(i, j) - pd.values(j, i)));
        }
        const std::string tag = "t=0.1 N=" + std::to_string(n);
        ctx.equal(tag + " max |n(x,x)|", diag, 0.0);
        ctx.at_most(tag + " max |n(x,y) - n(y,x)| / max n", asym / peak, 1e-14);
        lobes[n - 3] = count_surface_maxima(pd.values);
    }
    ctx.equal(fmt("lobes N=3 (%g) minus lobes N=4 (%g)", lobes[0], lobes[1]), lobes[0] - lobes[1], 0);
    ctx.equal("t=0.1 N=3 lobes", lobes[0], 2);
}

void splitting_scaling(Context& ctx) {
    std::vector<double> r;
    for (double t : {0.02, 0.01, 0.005}) {
        const auto pot = build_potential(make_params(4, t));
        const double est = tunneling_splitting_estimate(pot, find_extrema(pot));
        r.push_back(std::log(est) * t);
    }
    const double mean = (r[0] + r[1] + r[2]) / 3.0;
    double dev = 0.0;
    for (double v : r) dev = std::max(dev, std::fabs(v - mean) / std::fabs(mean));
    ctx.at_most(fmt("max relative spread of t log(estimate) (mean %.6g)", mean), dev, 0.20);
}

Cache& shared_cache() {
    static Cache cache;
    return cache;
}

}  // namespace

std::string criterion_title(int id) {
    switch (id) {
        case 1: return "parity verdict of the global minimum, N = 3..20";
        case 2: return "minima count equals N, N = 3..20";
        case 3: return "free fermions at t = 1, N = 2..6";
        case 4: return "N = 2 pairing at t = 0.3, 0.7";
        case 5: return "spectrum structure at t = 0.01, N = 3, 4";
        case 6: return "Nystrom vs momentum-space Schrodinger at t = 0.01";
        case 7: return "duality t <-> 1/t";
        case 8: return "tail law slope at t = 0.05";
        case 9: return "coefficient and moment identities";
        case 10: return "analytic kernel vs wavefunction oracle";
        case 11: return "one- and two-particle densities";
        case 12: return "tunneling estimate scales as exp(-c/t)";
        default: return "unknown";
    }
}

CriterionResult run_criterion(int id, const Options& options) {
    CriterionResult res;
    res.id = id;
    res.title = criterion_title(id);
    if (id < 1 || id > kCriterionCount) {
        res.note = "no such criterion";
        return res;
    }
    if (options.quick && (id == 5 || id == 6)) {
        res.status = Status::skipped;
        res.note = "skipped in quick mode";
        return res;
    }
    Context ctx;
    ctx.scale = options.tolerance_scale;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: parity_scan(ctx, false); break;
            case 2: parity_scan(ctx, true); break;
            case 3: free_fermions(ctx); break;
            case 4: two_particle_pairing(ctx); break;
            case 5: fig2_structure(ctx, shared_cache()); break;
            case 6: cross_method(ctx, shared_cache()); break;
            case 7: duality(ctx); break;
            case 8: tail_law(ctx); break;
            case 9: coefficient_identities(ctx); break;
            case 10: kernel_equivalence(ctx); break;
            case 11: densities(ctx); break;
            case 12: splitting_scaling(ctx); break;
        }
        const bool ok = !ctx.checks.empty() &&
                        std::all_of(ctx.checks.begin(), ctx.checks.end(), [](const Check& c) { return c.passed; });
        res.status = ok ? Status::passed : Status::failed;
    } catch (const std::exception& e) {
        res.status = Status::failed;
        res.note = e.what();
    }
    res.seconds = seconds_since(start);
    res.checks = std::move(ctx.checks);
    return res;
}

std::vector<CriterionResult> run_all(const Options& options,
                                     const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) {
        out.push_back(run_criterion(id, options));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    const char* tag = r.status == Status::passed ? "PASS" : r.status == Status::failed ? "FAIL" : "SKIP";
    char head[256];
    std::snprintf(head, sizeof head, "[%s] %2d  %s  (%.2f s)", tag, r.id, r.title.c_str(), r.seconds);
    os << head << '\n';
    for (const auto& c : r.checks) {
        char line[512];
        std::snprintf(line, sizeof line, "       %s %s: %.6g (bound %.6g)", c.passed ? "ok  " : "FAIL", c.name.c_str(),
                      c.value, c.bound);
        os << line << '\n';
    }
    if (!r.note.empty()) os << "       note: " << r.note << '\n';
    return os.str();
}

}  // namespace fermirdm::acceptance
