#include "fermirdm/oracles.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "fermirdm/errors.hpp"
#include "fermirdm/special.hpp"

namespace fermirdm::oracles {

namespace {

using hp = boost::multiprecision::cpp_bin_float_50;

struct HpRule {
    std::vector<hp> x, w;
};

// Orthonormal Hermite recurrence; nodes polished by Newton on p_M, weights by
// the Christoffel function 1 / sum_k p_k(x)^2.
HpRule hp_gauss_hermite(int order) {
    static std::mutex mu;
    static std::map<int, HpRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(order); it != cache.end()) return it->second;

    const hp pi = boost::math::constants::pi<hp>();
    const hp p0 = 1 / boost::multiprecision::sqrt(boost::multiprecision::sqrt(pi));
    const auto seed = gauss_hermite(order);
    HpRule rule;
    for (int i = 0; i < order; ++i) {
        hp x = seed.nodes[i];
        hp christoffel = 0;
        for (int it = 0; it < 8; ++it) {
            hp a = p0, b = boost::multiprecision::sqrt(hp(2)) * x * p0;
            christoffel = a * a;
            for (int k = 1; k < order; ++k) {
                christoffel += b * b;
                const hp c = boost::multiprecision::sqrt(hp(2) / (k + 1)) * x * b -
                             boost::multiprecision::sqrt(hp(k) / (k + 1)) * a;
                a = b;
                b = c;
            }
            // b = p_M, a = p_{M-1}; p_M' = sqrt(2M) p_{M-1}
            const hp step = b / (boost::multiprecision::sqrt(hp(2 * order)) * a);
            x -= step;
            if (abs(step) < hp(1e-45)) break;
        }
        // Recompute the Christoffel sum at the converged node.
        hp a = p0, b = boost::multiprecision::sqrt(hp(2)) * x * p0;
        christoffel = a * a;
        for (int k = 1; k < order; ++k) {
            christoffel += b * b;
            const hp c = boost::multiprecision::sqrt(hp(2) / (k + 1)) * x * b -
                         boost::multiprecision::sqrt(hp(k) / (k + 1)) * a;
            a = b;
            b = c;
        }
        rule.x.push_back(x);
        rule.w.push_back(1 / christoffel);
    }
    cache.emplace(order, rule);
    return rule;
}

// F~(z) = sqrt(pi) sum_m (-1)^m C(N, m+1) / (2^m m!) z^(2m)
hp limit_poly(int n_particles, const hp& z) {
    const hp z2 = z * z;
    hp sum = 0, power = 1, fact = 1, two_m = 1, binom = n_particles;  // C(N,1)
    for (int m = 0; m < n_particles; ++m) {
        hp term = binom / (two_m * fact) * power;
        sum += (m % 2) ? hp(-term) : term;
        power *= z2;
        fact *= (m + 1);
        two_m *= 2;
        binom = binom * (n_particles - m - 1) / (m + 2);
    }
    return boost::multiprecision::sqrt(boost::math::constants::pi<hp>()) * sum;
}

void check_n(int n_particles) {
    if (n_particles < 2 || n_particles > 40) throw ValidationError("oracle supports 2 <= N <= 40");
}

}  // namespace

double potential_by_quadrature(int n_particles, double t, double p, int order) {
    check_n(n_particles);
    const auto rule = hp_gauss_hermite(order);
    const hp gamma = hp(n_particles - 1) / (4 * n_particles);
    const hp sg = boost::multiprecision::sqrt(gamma);
    const hp omega = boost::multiprecision::sqrt(hp(t)) * hp(p);
    hp sum = 0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const hp z = rule.x[i] / sg;
        sum += rule.w[i] * limit_poly(n_particles, z) * boost::multiprecision::cos(omega * z);
    }
    const hp pi = boost::math::constants::pi<hp>();
    const hp v = -hp(t) * boost::multiprecision::sqrt(hp(n_particles)) / pi * sum / sg;
    return static_cast<double>(v);
}

double limit_moment_by_quadrature(int n_particles, int n) {
    check_n(n_particles);
    if (n < 0 || n > 40) throw ValidationError("moment index out of range");
    const auto rule = hp_gauss_hermite(n_particles + n + 4);
    const hp gamma = hp(n_particles - 1) / (4 * n_particles);
    const hp sg = boost::multiprecision::sqrt(gamma);
    hp sum = 0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const hp z = rule.x[i] / sg;
        sum += rule.w[i] * boost::multiprecision::pow(z, 2 * n) * limit_poly(n_particles, z);
    }
    return static_cast<double>(sum / sg);
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (at(p, q) == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

}  // namespace fermirdm::oracles
