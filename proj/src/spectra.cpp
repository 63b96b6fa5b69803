#include "fermirdm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fermirdm/errors.hpp"

namespace fermirdm {

namespace {

constexpr double kTraceTolerance = 1e-6;
constexpr double kNegativeTolerance = 1e-6;
constexpr double kExponentFloor = -700.0;

void check_k_max(int k_max) {
    if (k_max < 1) throw ValidationError("k_max must be positive");
}

}  // namespace

RdmKernel::RdmKernel(const ModelParams& params) : params_(params), prefactor_(params) {
    const double c = params.diag_rate;
    const auto rule = gauss_hermite(params.n_particles + 20);
    const double scale = 1.0 / std::sqrt(c);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i] * scale;
        integral += rule.weights[i] * prefactor_(x, x);
    }
    integral *= scale;
    if (!(integral > 0.0)) throw NumericalError("kernel normalization integral is not positive");
    norm_ = params.n_particles / integral;
}

double RdmKernel::operator()(double x, double y) const {
    const double d = x - y;
    const double expo = -params_.a * d * d - params_.diag_rate * x * y;
    if (expo < kExponentFloor) return 0.0;
    return norm_ * prefactor_(x, y) * std::exp(expo);
}

RdmKernel build_kernel(const ModelParams& params) { return RdmKernel(params); }

SymmetricGrid make_symmetric_grid(double spacing, double half_width) {
    if (!(spacing > 0.0) || !(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ValidationError("grid spacing and half-width must be positive");
    }
    const auto m = static_cast<std::size_t>(std::ceil(half_width / spacing));
    if (m > 20000) throw ValidationError("grid exceeds 20000 nodes per half line");
    SymmetricGrid g;
    g.spacing = spacing;
    g.half_nodes.resize(m);
    for (std::size_t j = 0; j < m; ++j) g.half_nodes[j] = (static_cast<double>(j) + 0.5) * spacing;
    return g;
}

SymmetricGrid nystrom_grid(const std::function<double(double)>& diag, int n_particles, double t,
                           const GridSpec& spec) {
    check_k_max(spec.k_max);
    const double scale = std::max(t, 1.0);
    const double h_auto = std::min(std::min(t, 1.0) / 6.0, 0.1);
    const double w_orbital = 6.0 * std::sqrt(t * spec.k_max / n_particles);

    double w_tail = 0.0;
    if (!spec.half_width) {
        const double step = 0.02 * scale;
        const int n_scan = 3000;
        std::vector<double> vals(n_scan);
        double peak = 0.0;
        for (int i = 0; i < n_scan; ++i) {
            vals[i] = std::fabs(diag(i * step));
            peak = std::max(peak, vals[i]);
        }
        for (int i = n_scan - 1; i >= 0; --i) {
            if (vals[i] >= 1e-18 * peak) {
                w_tail = (i + 1) * step;
                break;
            }
        }
        if (w_tail >= (n_scan - 1) * step) throw NumericalError("density tail extends beyond the scan range");
    }

    const double h = spec.spacing.value_or(h_auto);
    const double width = spec.half_width.value_or(std::max(w_orbital, w_tail));
    if (spec.enforce_resolution) {
        if (h > h_auto * (1.0 + 1e-12)) {
            throw ValidationError("grid spacing " + std::to_string(h) + " is coarser than " + std::to_string(h_auto));
        }
        if (width < w_orbital * (1.0 - 1e-12)) {
            throw ValidationError("grid half-width " + std::to_string(width) + " is below " +
                                  std::to_string(w_orbital));
        }
    }
    return make_symmetric_grid(h, width);
}

SpectrumResult solve_nystrom_kernel(const std::function<double(double, double)>& kernel,
                                    const SymmetricGrid& grid, int k_max, int n_particles, double t) {
    check_k_max(k_max);
    const std::size_t m = grid.half_nodes.size();
    const double h = grid.spacing;
    const auto& x = grid.half_nodes;
    linalg::Matrix plus(m, m), minus(m, m);
    double diag_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = j; i < m; ++i) {
            const double k1 = kernel(x[i], x[j]);
            const double k2 = kernel(x[i], -x[j]);
            plus(i, j) = h * (k1 + k2);
            minus(i, j) = h * (k1 - k2);
            if (i == j) diag_sum += k1;
        }
    }
    SpectrumResult res;
    res.method = SpectrumMethod::nystrom_position;
    res.n_particles = n_particles;
    res.t = t;
    res.trace_error = std::fabs(2.0 * h * diag_sum - n_particles);
    if (!(res.trace_error <= kTraceTolerance)) {
        throw NumericalError("Nystrom trace deviates from N by " + std::to_string(res.trace_error) +
                             "; refine the grid");
    }

    const auto kk = static_cast<std::size_t>(k_max);
    auto even = linalg::eigh_descending(std::move(plus), kk);
    auto odd = linalg::eigh_descending(std::move(minus), kk);

    struct Entry {
        double value;
        int parity;
        std::size_t index;
    };
    std::vector<Entry> all;
    all.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) all.push_back({even.values[i], +1, i});
    for (std::size_t i = 0; i < m; ++i) all.push_back({odd.values[i], -1, i});
    std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });
    if (all.back().value < -kNegativeTolerance) {
        throw NumericalError("Nystrom spectrum has eigenvalue " + std::to_string(all.back().value) +
                             " below zero; refine the grid");
    }
    res.lambdas.reserve(all.size());
    for (const auto& e : all) res.lambdas.push_back(e.value);

    res.grid_nodes.resize(2 * m);
    res.grid_weights.assign(2 * m, h);
    for (std::size_t i = 0; i < m; ++i) {
        res.grid_nodes[m - 1 - i] = -x[i];
        res.grid_nodes[m + i] = x[i];
    }
    const std::size_t n_orb = std::min(kk, all.size());
    res.orbitals = linalg::Matrix(2 * m, n_orb);
    const double s = 1.0 / std::sqrt(2.0 * h);
    for (std::size_t k = 0; k < n_orb; ++k) {
        const auto& e = all[k];
        const auto& vecs = e.parity > 0 ? even.vectors : odd.vectors;
        auto v = vecs.column(e.index);
        auto col = res.orbitals.column(k);
        for (std::size_t i = 0; i < m; ++i) {
            col[m + i] = s * v[i];
            col[m - 1 - i] = e.parity * s * v[i];
        }
        res.orbital_parity.push_back(e.parity);
    }
    return res;
}

SpectrumResult solve_nystrom(const RdmKernel& kernel, const GridSpec& spec) {
    const auto& p = kernel.params();
    if (p.n_particles > kMaxNystromParticles) {
        throw ValidationError("dense Nystrom solve supports N <= " + std::to_string(kMaxNystromParticles));
    }
    const auto grid = nystrom_grid([&](double x) { return kernel.diagonal(x); }, p.n_particles, p.t, spec);
    return solve_nystrom_kernel([&](double x, double y) { return kernel(x, y); }, grid, spec.k_max,
                                p.n_particles, p.t);
}

SpectrumResult solve_momentum_schrodinger(const ModelParams& params, const EffectivePotential& pot, int k_max) {
    check_k_max(k_max);
    const int big_n = pot.n_particles;
    if (params.n_particles != big_n || params.t != pot.t) {
        throw ValidationError("potential was built for different parameters");
    }
    if (big_n < 3) throw ValidationError("momentum-space solve needs N >= 3");
    const double t = pot.t;
    const double v0 = pot(0.0);
    if (!(v0 < 0.0)) throw NumericalError("V(0) must be negative");
    const double kin = -t * big_n * v0;  // 1 / (2 m)

    // Domain: where |V| exceeds 1e-16 of its largest magnitude, plus 20%.
    const double w_end = std::sqrt(16.0 * big_n + 200.0);
    double v_scale = 0.0, p_end = 0.0;
    std::vector<std::pair<double, double>> scan;
    for (double w = 0.0; w <= w_end; w += 0.02) {
        const double p = w / std::sqrt(pot.kappa);
        const double v = std::fabs(pot(p));
        v_scale = std::max(v_scale, v);
        scan.emplace_back(p, v);
    }
    for (const auto& [p, v] : scan) {
        if (v >= 1e-16 * v_scale) p_end = p;
    }
    const double width = 1.2 * p_end;
    const double base = 1.0 / std::sqrt(t * big_n);
    const auto kk = static_cast<std::size_t>(k_max);

    struct Level {
        double energy;
        int parity;
        std::size_t index;
    };
    struct Solve {
        double h = 0.0;
        std::vector<double> nodes;
        linalg::EigenResult even, odd;
        std::vector<Level> levels;
    };
    auto solve = [&](double h) {
        Solve s;
        s.h = h;
        const auto n_half = static_cast<std::size_t>(std::ceil(width / h));
        if (n_half > 2000000) throw NumericalError("momentum grid too large");
        s.nodes.resize(n_half);
        std::vector<double> diag(n_half), off(n_half - 1, -kin / (h * h));
        for (std::size_t i = 0; i < n_half; ++i) {
            s.nodes[i] = (static_cast<double>(i) + 0.5) * h;
            diag[i] = pot(s.nodes[i]) + 2.0 * kin / (h * h);
        }
        // Reflection through p = 0 closes the first row with the mirror node.
        auto d_even = diag, d_odd = diag;
        d_even[0] -= kin / (h * h);
        d_odd[0] += kin / (h * h);
        s.even = linalg::tridiagonal_lowest(d_even, off, kk);
        s.odd = linalg::tridiagonal_lowest(d_odd, off, kk);
        for (std::size_t i = 0; i < s.even.values.size(); ++i) s.levels.push_back({s.even.values[i], +1, i});
        for (std::size_t i = 0; i < s.odd.values.size(); ++i) s.levels.push_back({s.odd.values[i], -1, i});
        std::stable_sort(s.levels.begin(), s.levels.end(),
                         [](const Level& a, const Level& b) { return a.energy < b.energy; });
        s.levels.resize(std::min(s.levels.size(), kk));
        return s;
    };

    double factor = 50.0;
    Solve prev = solve(base / factor);
    Solve cur;
    bool converged = false;
    for (int level = 0; level < 10; ++level) {
        factor *= 2.0;
        cur = solve(base / factor);
        const double l_prev = -prev.levels[0].energy;
        const double l_cur = -cur.levels[0].energy;
        if (std::fabs(l_cur - l_prev) <= 1e-6 * std::fabs(l_cur)) {
            converged = true;
            break;
        }
        prev = std::move(cur);
    }
    if (!converged) throw NumericalError("momentum-space spacing refinement did not converge");

    SpectrumResult res;
    res.method = SpectrumMethod::schrodinger_momentum;
    res.n_particles = big_n;
    res.t = t;
    const std::size_t m = cur.nodes.size();
    res.grid_nodes.resize(2 * m);
    res.grid_weights.assign(2 * m, cur.h);
    for (std::size_t i = 0; i < m; ++i) {
        res.grid_nodes[m - 1 - i] = -cur.nodes[i];
        res.grid_nodes[m + i] = cur.nodes[i];
    }
    res.orbitals = linalg::Matrix(2 * m, cur.levels.size());
    const double s = 1.0 / std::sqrt(2.0 * cur.h);
    for (std::size_t k = 0; k < cur.levels.size(); ++k) {
        const auto& lv = cur.levels[k];
        res.lambdas.push_back(-lv.energy);
        res.orbital_parity.push_back(lv.parity);
        auto v = (lv.parity > 0 ? cur.even : cur.odd).vectors.column(lv.index);
        auto col = res.orbitals.column(k);
        for (std::size_t i = 0; i < m; ++i) {
            col[m + i] = s * v[i];
            col[m - 1 - i] = lv.parity * s * v[i];
        }
    }
    return res;
}

HarmonicLevel harmonic_spectrum(double alpha, double beta, double t, int k, ParityClass parity) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(t > 0.0)) throw ValidationError("alpha, beta and t must be positive");
    if (k < 1 || k * t > 0.3 * (1.0 + 1e-12)) {
        throw ValidationError("harmonic levels are valid for 1 <= k <= 0.3/t");
    }
    return {t * alpha * (1.0 - t * beta * (k - 0.5)), parity == ParityClass::even_like_degenerate_pair};
}

std::vector<double> harmonic_series(const HarmonicParams& hp, double t, ParityClass parity, int count) {
    std::vector<double> out;
    for (int k = 1; static_cast<int>(out.size()) < count && k * t <= 0.3 * (1.0 + 1e-12); ++k) {
        const auto lv = harmonic_spectrum(hp.alpha, hp.beta, t, k, parity);
        out.push_back(lv.value);
        if (lv.paired && static_cast<int>(out.size()) < count) out.push_back(lv.value);
    }
    return out;
}

double tail_spectrum(const ModelParams& params, int k) {
    const double t = params.t;
    if (t > 1.0) throw ValidationError("tail law needs t <= 1");
    if (k * t < 3.0 * (1.0 - 1e-12)) throw ValidationError("tail law needs k >= 3/t");
    const int big_n = params.n_particles;
    const double rate = 2.0 * big_n / std::sqrt(big_n - 1.0) * t;
    return std::pow(k * t, big_n - 1) * std::exp(-rate * (k - 0.5));
}

int k_star(const ExtremaReport& report, const SpectrumResult& spectrum) {
    const auto& l = spectrum.lambdas;
    for (std::size_t k = 0; k < l.size(); ++k) {
        if (-l[k] >= report.highest_max_value) return static_cast<int>(k) + 1;
    }
    return static_cast<int>(l.size()) + 1;
}

std::vector<RegimeSegment> pairing_segments(const std::vector<double>& l, std::vector<double>* pair_gaps) {
    std::vector<RegimeSegment> segments;
    if (l.empty()) return segments;
    const double l1 = l.front();
    std::size_t count = 0;
    while (count < l.size() && l[count] > kSegmentationFloor * l1) ++count;

    auto push = [&](int first, int last, RegimeLabel label) {
        if (!segments.empty() && segments.back().label == label && segments.back().k_last + 1 == first) {
            segments.back().k_last = last;
        } else {
            segments.push_back({first, last, label});
        }
    };
    for (std::size_t k = 0; k < count;) {
        if (k + 1 < count && l[k] - l[k + 1] < kPairingRelTol * l1) {
            if (pair_gaps) pair_gaps->push_back(l[k] - l[k + 1]);
            push(static_cast<int>(k) + 1, static_cast<int>(k) + 2, RegimeLabel::paired);
            k += 2;
        } else {
            push(static_cast<int>(k) + 1, static_cast<int>(k) + 1, RegimeLabel::isolated);
            k += 1;
        }
    }
    return segments;
}

RegimeSegmentation segment_regimes(const ExtremaReport& report, const SpectrumResult& spectrum) {
    RegimeSegmentation seg;
    seg.k_star = k_star(report, spectrum);
    const auto& l = spectrum.lambdas;
    seg.segments = pairing_segments(l, &seg.pair_gaps);

    auto add_levels = [&](const std::vector<Extremum>& ext, bool is_max) {
        for (const auto& e : ext) {
            if (e.location < 0.0) continue;
            int k = static_cast<int>(l.size()) + 1;
            for (std::size_t j = 0; j < l.size(); ++j) {
                if (-l[j] >= e.value) {
                    k = static_cast<int>(j) + 1;
                    break;
                }
            }
            seg.crossings.push_back({k, e.value, is_max});
        }
    };
    add_levels(report.minima, false);
    add_levels(report.maxima, true);
    std::sort(seg.crossings.begin(), seg.crossings.end(),
              [](const BarrierCrossing& a, const BarrierCrossing& b) { return a.level < b.level; });
    return seg;
}

double duality_check(int n_particles, double t, const SpectrumResult& inverse_side) {
    if (!(t > 0.0) || t > 1.0) throw ValidationError("duality check solves the t <= 1 side; pass t in (0, 1]");
    if (inverse_side.n_particles != n_particles) throw ValidationError("particle numbers differ");
    if (std::fabs(inverse_side.t * t - 1.0) > 1e-12) throw ValidationError("supplied spectrum is not at 1/t");
    GridSpec spec;
    spec.k_max = 10;
    const auto direct = solve_nystrom(build_kernel(make_params(n_particles, t)), spec);
    const std::size_t count = std::min<std::size_t>({10, direct.lambdas.size(), inverse_side.lambdas.size()});
    double dev = 0.0;
    for (std::size_t k = 0; k < count; ++k) dev = std::max(dev, std::fabs(direct.lambdas[k] - inverse_side.lambdas[k]));
    return dev;
}

const char* to_string(SpectrumMethod method) {
    switch (method) {
        case SpectrumMethod::nystrom_position: return "nystrom";
        case SpectrumMethod::schrodinger_momentum: return "schrodinger";
        case SpectrumMethod::harmonic_approx: return "harmonic";
        case SpectrumMethod::tail_formula: return "tail";
    }
    return "unknown";
}

const char* to_string(RegimeLabel label) { return label == RegimeLabel::paired ? "paired" : "isolated"; }

const char* to_string(ParityClass parity) {
    return parity == ParityClass::even_like_degenerate_pair ? "even_like_degenerate_pair"
                                                            : "odd_like_unique_zero_min";
}

}  // namespace fermirdm
