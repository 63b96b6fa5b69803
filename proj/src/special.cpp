#include "fermirdm/special.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fermirdm/errors.hpp"
#include "fermirdm/linalg.hpp"

namespace fermirdm {

namespace {

using hp_float = boost::multiprecision::cpp_bin_float_50;

constexpr int kMaxQuadratureOrder = 2000;

QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> off, double mu0) {
    const auto spec = linalg::tridiagonal_ql(std::move(diag), std::move(off));
    QuadratureRule rule;
    rule.nodes = spec.values;
    rule.weights.resize(spec.values.size());
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        rule.weights[i] = mu0 * spec.first_components[i] * spec.first_components[i];
    }
    // Symmetric weight functions: make the rule exactly symmetric.
    const std::size_t m = rule.nodes.size();
    for (std::size_t i = 0; i < m / 2; ++i) {
        const std::size_t j = m - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    return rule;
}

void check_order(int order) {
    if (order < 1 || order > kMaxQuadratureOrder) {
        throw ValidationError("quadrature order must lie in [1, " + std::to_string(kMaxQuadratureOrder) + "]");
    }
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
    check_order(order);
    std::vector<double> diag(order, 0.0);
    std::vector<double> off(order - 1);
    for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(0.5 * k);
    auto rule = golub_welsch(std::move(diag), std::move(off), std::sqrt(std::numbers::pi));
    rule.kind = QuadratureKind::gauss_hermite;
    rule.order = order;
    return rule;
}

QuadratureRule gauss_legendre(int order, double half_width) {
    check_order(order);
    if (!std::isfinite(half_width) || half_width <= 0.0) throw ValidationError("half_width must be positive");
    std::vector<double> diag(order, 0.0);
    std::vector<double> off(order - 1);
    for (int k = 1; k < order; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    auto rule = golub_welsch(std::move(diag), std::move(off), 2.0);
    for (auto& x : rule.nodes) x *= half_width;
    for (auto& w : rule.weights) w *= half_width;
    rule.kind = QuadratureKind::gauss_legendre_truncated;
    rule.order = order;
    return rule;
}

double hermite_eval(int k, double x) {
    if (k < 0 || k > 200) throw ValidationError("hermite_eval supports 0 <= k <= 200");
    long double h0 = 1.0L;
    if (k == 0) return 1.0;
    const long double lx = x;
    long double h1 = 2.0L * lx;
    for (int j = 1; j < k; ++j) {
        const long double h2 = 2.0L * lx * h1 - 2.0L * j * h0;
        h0 = h1;
        h1 = h2;
    }
    return static_cast<double>(h1);
}

std::pair<double, double> hermite_shift_identity_check(int k, double x, double y) {
    if (k < 0 || k > 30) throw ValidationError("shift identity check supports 0 <= k <= 30");
    const double lhs = hermite_eval(k, x + y);
    long double rhs = 0.0L;
    long double binom = 1.0L;
    for (int m = 0; m <= k; ++m) {
        rhs += binom * hermite_eval(m, x) * std::pow(2.0L * y, k - m);
        binom = binom * (k - m) / (m + 1);
    }
    return {lhs, static_cast<double>(rhs)};
}

PrefactorEvaluator::PrefactorEvaluator(const ModelParams& params) : n_(params.n_particles) {
    if (params.t > 1.0) {
        throw ValidationError("the prefactor integral needs t <= 1; use the duality path for t > 1");
    }
    p_ = std::sqrt(std::max(params.p_squared, 0.0));
    inv_t_ = 1.0 / params.t;
    half_p2_ = 0.5 * params.p_squared;
    rule_ = gauss_hermite(std::max(n_ + 2, 20));
}

double PrefactorEvaluator::operator()(double x, double y) const {
    const double q1 = inv_t_ * (x * (1.0 - half_p2_) - y * half_p2_);
    const double q2 = inv_t_ * (y * (1.0 - half_p2_) - x * half_p2_);
    auto term = [&](double node) {
        const double u1 = p_ * node + q1;
        const double u2 = p_ * node + q2;
        // Normalized Hermite functions without the Gaussian.
        double a0 = 1.0, b0 = 1.0;
        double a1 = std::numbers::sqrt2 * u1, b1 = std::numbers::sqrt2 * u2;
        double sum = 1.0;
        if (n_ > 1) sum += a1 * b1;
        for (int k = 1; k + 1 < n_; ++k) {
            const double ck = std::sqrt(static_cast<double>(k));
            const double inv = 1.0 / std::sqrt(static_cast<double>(k + 1));
            const double a2 = (std::numbers::sqrt2 * u1 * a1 - ck * a0) * inv;
            const double b2 = (std::numbers::sqrt2 * u2 * b1 - ck * b0) * inv;
            a0 = a1;
            a1 = a2;
            b0 = b1;
            b1 = b2;
            sum += a1 * b1;
        }
        return sum;
    };
    // (x, y) -> (-x, -y) maps node i onto its mirror exactly; adding mirror
    // pairs first keeps F(-x, -y) == F(x, y) bit for bit.
    const std::size_t m = rule_.nodes.size();
    double total = 0.0;
    for (std::size_t i = 0; i < m / 2; ++i) {
        total += rule_.weights[i] * (term(rule_.nodes[i]) + term(rule_.nodes[m - 1 - i]));
    }
    if (m % 2) total += rule_.weights[m / 2] * term(rule_.nodes[m / 2]);
    return total;
}

double exact_prefactor(const ModelParams& params, double x, double y) {
    return PrefactorEvaluator(params)(x, y);
}

double LimitPolynomial::operator()(double z) const {
    // sqrt(pi) L^(1)_{N-1}(z^2/2)
    const double u = 0.5 * z * z;
    const int deg = n_particles - 1;
    double l0 = 1.0;
    if (deg == 0) return std::sqrt(std::numbers::pi) * l0;
    double l1 = 2.0 - u;
    for (int k = 1; k < deg; ++k) {
        const double l2 = ((2.0 * k + 2.0 - u) * l1 - (k + 1.0) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return std::sqrt(std::numbers::pi) * l1;
}

double LimitPolynomial::eval_monomial(double z) const {
    const double z2 = z * z;
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z2 + *it;
    return acc;
}

LimitPolynomial limit_prefactor(int n_particles) {
    if (n_particles < 2 || n_particles > kMaxParticles) throw ValidationError("particle number out of range");
    LimitPolynomial poly;
    poly.n_particles = n_particles;
    poly.coeffs.resize(n_particles);
    double c = std::sqrt(std::numbers::pi) * n_particles;
    for (int m = 0; m < n_particles; ++m) {
        poly.coeffs[m] = c;
        c *= -static_cast<double>(n_particles - m - 1) / (2.0 * (m + 1) * (m + 2));
    }
    return poly;
}

double limit_moments(int n_particles, int n) {
    if (n_particles < 2 || n_particles > kMaxParticles) throw ValidationError("particle number out of range");
    if (n < 0 || n > 40) throw ValidationError("moment index must lie in [0, 40]");
    const int big_n = n_particles;
    const hp_float r = hp_float(2 * big_n) / (big_n - 1);
    hp_float sum = 0;
    // term_m = (-1)^m (2(n+m)-1)!! / (2^m m!) C(N, m+1) r^(m+n)
    hp_float dfact = 1;  // (2n-1)!!
    for (int j = 1; j <= n; ++j) dfact *= 2 * j - 1;
    hp_float term = dfact * big_n * boost::multiprecision::pow(r, n);
    for (int m = 0; m < big_n; ++m) {
        sum += term;
        // ratio to the next term
        term *= -hp_float(2 * (n + m) + 1) * (big_n - m - 1) * r / (hp_float(2) * (m + 1) * (m + 2));
    }
    const hp_float pi = boost::math::constants::pi<hp_float>();
    const hp_float pref = pi * boost::multiprecision::sqrt(hp_float(4 * big_n) / (big_n - 1));
    return static_cast<double>(pref * sum);
}

}  // namespace fermirdm
