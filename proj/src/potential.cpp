#include "fermirdm/potential.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fermirdm/errors.hpp"

namespace fermirdm {

using hp_float = boost::multiprecision::cpp_bin_float_50;

namespace detail {

/// Signed polynomial coefficients in g = kappa p^2, carried in extended precision.
struct PotentialSeries {
    std::vector<hp_float> p;   ///< P(g) = sum p_n g^n, p_n = (-1)^n v_n
    std::vector<hp_float> q;   ///< Q(g) = P'(g) - P(g)/2
    std::vector<hp_float> dq;  ///< Q'(g)
};

}  // namespace detail

namespace {

hp_float horner(const std::vector<hp_float>& c, const hp_float& g) {
    hp_float acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * g + *it;
    return acc;
}

std::vector<hp_float> derivative_coeffs(const std::vector<hp_float>& c) {
    std::vector<hp_float> d;
    for (std::size_t n = 1; n < c.size(); ++n) d.push_back(c[n] * static_cast<int>(n));
    if (d.empty()) d.push_back(0);
    return d;
}

std::vector<hp_float> potential_coefficients(int big_n) {
    // v_{N,n} = 2N/sqrt(N-1) sum_{m=n}^{N-1} (-1)^m (2(m-n)-1)!! / (2^m m!) C(N,m+1) C(2m,2n) r^m,
    // r = 2N/(N-1).
    std::vector<hp_float> fact(2 * big_n + 1);
    fact[0] = 1;
    for (int i = 1; i <= 2 * big_n; ++i) fact[i] = fact[i - 1] * i;
    auto binom = [&](int n, int k) { return fact[n] / (fact[k] * fact[n - k]); };
    auto dfact_odd = [](int j) {  // (2j-1)!!, with (-1)!! = 1
        hp_float v = 1;
        for (int i = 1; i <= j; ++i) v *= 2 * i - 1;
        return v;
    };
    const hp_float r = hp_float(2 * big_n) / (big_n - 1);
    const hp_float pref = hp_float(2 * big_n) / boost::multiprecision::sqrt(hp_float(big_n - 1));
    std::vector<hp_float> v(big_n);
    for (int n = 0; n < big_n; ++n) {
        hp_float sum = 0;
        for (int m = n; m < big_n; ++m) {
            hp_float term = dfact_odd(m - n) / (boost::multiprecision::pow(hp_float(2), m) * fact[m]) *
                            binom(big_n, m + 1) * binom(2 * m, 2 * n) * boost::multiprecision::pow(r, m);
            if (m % 2) term = -term;
            sum += term;
        }
        v[n] = pref * sum;
    }
    return v;
}

}  // namespace

double max_strong_coupling_t(int n_particles) { return 0.2 / n_particles; }

EffectivePotential build_potential(const ModelParams& params) {
    const int big_n = params.n_particles;
    if (big_n < 2 || big_n > kMaxParticles) throw ValidationError("particle number out of range");
    const double t_max = max_strong_coupling_t(big_n);
    if (!(params.t > 0.0) || params.t > t_max * (1.0 + 1e-12)) {
        throw ValidationError("the momentum-space potential needs t <= 0.2/N = " + std::to_string(t_max) +
                              ", got t = " + std::to_string(params.t));
    }
    auto series = std::make_shared<detail::PotentialSeries>();
    const auto v = potential_coefficients(big_n);
    EffectivePotential pot;
    pot.n_particles = big_n;
    pot.t = params.t;
    for (int n = 0; n < big_n; ++n) {
        pot.v_coeffs.push_back(static_cast<double>(v[n]));
        series->p.push_back(n % 2 ? hp_float(-v[n]) : v[n]);
    }
    const auto dp = derivative_coeffs(series->p);
    series->q.resize(series->p.size());
    for (std::size_t n = 0; n < series->p.size(); ++n) {
        series->q[n] = -series->p[n] / 2;
        if (n < dp.size()) series->q[n] += dp[n];
    }
    series->dq = derivative_coeffs(series->q);
    pot.kappa = 2.0 * params.t * big_n / (big_n - 1);
    pot.gaussian_rate = 0.5 * pot.kappa;
    pot.series = std::move(series);
    return pot;
}

double EffectivePotential::operator()(double p) const {
    const hp_float g = hp_float(kappa) * p * p;
    const double poly = static_cast<double>(horner(series->p, g));
    return -t * poly * std::exp(-0.5 * kappa * p * p);
}

double EffectivePotential::derivative(double p) const {
    // dV/dp = -2 t kappa p Q(g) exp(-g/2)
    const hp_float g = hp_float(kappa) * p * p;
    const double q = static_cast<double>(horner(series->q, g));
    return -2.0 * t * kappa * p * q * std::exp(-0.5 * kappa * p * p);
}

double EffectivePotential::second_derivative(double p) const {
    // d2V/dp2 = -2 t kappa exp(-g/2) [Q + 2 g (Q' - Q/2)]
    const hp_float g = hp_float(kappa) * p * p;
    const hp_float q = horner(series->q, g);
    const hp_float dq = horner(series->dq, g);
    const double bracket = static_cast<double>(q + 2 * g * (dq - q / 2));
    return -2.0 * t * kappa * bracket * std::exp(-0.5 * kappa * p * p);
}

double eval_potential(const EffectivePotential& potential, double p) { return potential(p); }

ExtremaReport find_extrema(const EffectivePotential& pot) {
    const int big_n = pot.n_particles;
    if (big_n < 3) throw ValidationError("extrema analysis needs N >= 3");
    const auto& q = pot.series->q;

    // Work in w = sqrt(g); the sign of V' for p > 0 is the sign of -Q(g).
    auto q_at = [&](const hp_float& w) { return horner(q, w * w); };
    const double w_end = std::sqrt(16.0 * big_n + 100.0);
    const double dw = 0.01;

    struct Root {
        double w;
        bool is_min;
    };
    std::vector<Root> roots;
    hp_float w_prev = 0;
    hp_float q_prev = q_at(w_prev);
    if (q_prev == 0) throw NumericalError("degenerate curvature at p = 0");
    for (double w = dw; w <= w_end; w += dw) {
        hp_float w_cur = w;
        hp_float q_cur = q_at(w_cur);
        if ((q_prev > 0) != (q_cur > 0)) {
            const bool is_min = q_prev > 0;  // V' goes from - to +
            hp_float lo = w_prev, hi = w_cur;
            hp_float q_lo = q_prev;
            for (int it = 0; it < 200 && hi - lo > 1e-30 * hi; ++it) {
                const hp_float mid = (lo + hi) / 2;
                const hp_float q_mid = q_at(mid);
                if ((q_mid > 0) == (q_lo > 0)) {
                    lo = mid;
                    q_lo = q_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push_back({static_cast<double>((lo + hi) / 2), is_min});
        }
        w_prev = w_cur;
        q_prev = q_cur;
    }

    const bool zero_is_min = pot.series->q[0] < 0;
    // Extrema along p >= 0 must alternate, and the outermost must be a minimum
    // since V -> 0 from below.
    bool expect_min = !zero_is_min;
    for (const auto& r : roots) {
        if (r.is_min != expect_min) throw NumericalError("minima and maxima fail to interleave");
        expect_min = !expect_min;
    }
    if (roots.empty() ? !zero_is_min : !roots.back().is_min) {
        throw NumericalError("outermost extremum is not a minimum");
    }

    ExtremaReport rep;
    auto make = [&](double p) { return Extremum{p, pot(p), pot.second_derivative(p)}; };
    std::vector<Extremum> pos_min, pos_max;
    for (const auto& r : roots) {
        const double p = r.w / std::sqrt(pot.kappa);
        (r.is_min ? pos_min : pos_max).push_back(make(p));
    }
    auto mirror = [](const std::vector<Extremum>& pos, const Extremum* zero) {
        std::vector<Extremum> out;
        for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back({-it->location, it->value, it->curvature});
        if (zero) out.push_back(*zero);
        out.insert(out.end(), pos.begin(), pos.end());
        return out;
    };
    const Extremum at_zero = make(0.0);
    rep.minima = mirror(pos_min, zero_is_min ? &at_zero : nullptr);
    rep.maxima = mirror(pos_max, zero_is_min ? nullptr : &at_zero);

    auto lowest = std::min_element(rep.minima.begin(), rep.minima.end(),
                                   [](const Extremum& a, const Extremum& b) { return a.value < b.value; });
    rep.global_min_value = lowest->value;
    rep.global_min_location = std::fabs(lowest->location);
    rep.global_min_multiplicity = 0;
    for (const auto& m : rep.minima) {
        if (std::fabs(m.value - rep.global_min_value) <= 1e-9 * std::fabs(rep.global_min_value)) {
            ++rep.global_min_multiplicity;
        }
    }
    if (rep.global_min_multiplicity == 1 && rep.global_min_location == 0.0) {
        rep.parity_class = ParityClass::odd_like_unique_zero_min;
    } else if (rep.global_min_multiplicity == 2) {
        rep.parity_class = ParityClass::even_like_degenerate_pair;
    } else {
        throw NumericalError("global minimum multiplicity " + std::to_string(rep.global_min_multiplicity) +
                             " fits neither parity class");
    }
    rep.highest_max_value = rep.maxima.front().value;
    for (const auto& m : rep.maxima) rep.highest_max_value = std::max(rep.highest_max_value, m.value);
    return rep;
}

HarmonicParams harmonic_params(const EffectivePotential& pot, const ExtremaReport& rep) {
    const double v_min = rep.global_min_value;
    double curv = 0.0;
    for (const auto& m : rep.minima) {
        if (std::fabs(std::fabs(m.location) - rep.global_min_location) <= 1e-12 * (1.0 + rep.global_min_location)) {
            curv = m.curvature;
            break;
        }
    }
    const double v0 = pot(0.0);
    if (!(v_min < 0.0) || !(curv > 0.0) || !(v0 < 0.0)) {
        throw NumericalError("harmonic expansion needs V_min < 0, V''_min > 0 and V(0) < 0");
    }
    const double t = pot.t;
    const int big_n = pot.n_particles;
    HarmonicParams hp;
    hp.alpha = -v_min / t;
    hp.beta = std::sqrt(2.0 * big_n * curv / (-t * v_min));
    hp.mass = 1.0 / (-2.0 * t * big_n * v0);
    return hp;
}

double tunneling_splitting_estimate(const EffectivePotential& pot, const ExtremaReport& rep) {
    if (rep.parity_class != ParityClass::even_like_degenerate_pair) {
        throw ValidationError("tunneling estimate needs a degenerate pair of minima");
    }
    const double p_min = rep.global_min_location;
    double barrier = -std::numeric_limits<double>::infinity();
    for (const auto& m : rep.maxima) {
        if (std::fabs(m.location) < p_min) barrier = std::max(barrier, m.value);
    }
    if (!std::isfinite(barrier)) throw NumericalError("no barrier between the degenerate minima");
    const double mass = harmonic_params(pot, rep).mass;
    const double dv = barrier - rep.global_min_value;
    return std::exp(-std::sqrt(mass * dv) * 2.0 * p_min);
}

}  // namespace fermirdm
