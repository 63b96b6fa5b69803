#pragma once

#include <utility>
#include <vector>

#include "fermirdm/model.hpp"

namespace fermirdm {

enum class QuadratureKind { gauss_hermite, gauss_legendre_truncated };

/// Nodes ascending, weights positive.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureKind kind = QuadratureKind::gauss_hermite;
    int order = 0;
};

/// Gauss-Hermite rule for weight exp(-x^2); exact for polynomials of degree <= 2M-1.
QuadratureRule gauss_hermite(int order);

/// Gauss-Legendre rule mapped onto [-half_width, half_width].
QuadratureRule gauss_legendre(int order, double half_width);

/// Physicists' Hermite polynomial H_k(x) by three-term recurrence, 0 <= k <= 200.
double hermite_eval(int k, double x);

/// Both sides of H_k(x+y) = sum_m C(k,m) H_m(x) (2y)^(k-m), 0 <= k <= 30.
std::pair<double, double> hermite_shift_identity_check(int k, double x, double y);

/**
 * Prefactor F(x,y) of the one-body density matrix for t <= 1, obtained by
 * Gauss-Hermite integration of sum_k h_k(p u + q(x,y)) h_k(p u + q(y,x)) with
 * normalized Hermite functions h_k = H_k / sqrt(2^k k!).
 */
class PrefactorEvaluator {
public:
    explicit PrefactorEvaluator(const ModelParams& params);
    double operator()(double x, double y) const;
    int quadrature_order() const { return static_cast<int>(rule_.nodes.size()); }

private:
    int n_ = 0;
    double p_ = 0.0;
    double inv_t_ = 0.0;
    double half_p2_ = 0.0;
    QuadratureRule rule_;
};

/// One-shot F(x,y). Throws ValidationError for t > 1.
double exact_prefactor(const ModelParams& params, double x, double y);

/// Strong-coupling limit of the prefactor, sqrt(pi) L^(1)_{N-1}(z^2/2).
struct LimitPolynomial {
    int n_particles = 0;
    /// coefficients c_m of z^(2m), m = 0..N-1
    std::vector<double> coeffs;

    /// Stable evaluation through the Laguerre recurrence.
    double operator()(double z) const;
    /// Horner evaluation in z^2 from the monomial coefficients.
    double eval_monomial(double z) const;
};

LimitPolynomial limit_prefactor(int n_particles);

/// Gaussian moment int z^(2n) F~(z) exp(-(N-1) z^2 / (4N)) dz in closed form, n <= 40.
double limit_moments(int n_particles, int n);

}  // namespace fermirdm
