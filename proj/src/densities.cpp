#include "fermirdm/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fermirdm/errors.hpp"
#include "fermirdm/special.hpp"

namespace fermirdm {

namespace {

double vandermonde(const double* x, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) v *= x[i] - x[j];
    return v;
}

/**
 * Tensor Gauss-Hermite rule for int P(xi) exp(-2A |xi|^2 + 2B S^2 + 2 beta S) d^d xi,
 * S = sum xi. A Householder reflection maps e_1 onto the centre-of-mass
 * direction 1/sqrt(d), where the precision is 2(A - B d); transverse
 * directions have precision 2A. Shifting every coordinate by beta / (2(A - B d))
 * completes the square, leaving the factor exp(beta^2 d / (2(A - B d))).
 */
class RotatedRule {
public:
    RotatedRule(int d, double A, double B, int order) : d_(d) {
        lam_par_ = 2.0 * (A - B * d);
        lam_perp_ = 2.0 * A;
        if (d > 0 && !(lam_par_ > 0.0)) throw NumericalError("centre-of-mass Gaussian is not normalizable");
        log_jacobian_ = d > 0 ? -0.5 * std::log(lam_par_) - 0.5 * (d - 1) * std::log(lam_perp_) : 0.0;
        if (d > 0) rule_ = gauss_hermite(order);
    }

    int dim() const { return d_; }
    double lambda_par() const { return lam_par_; }
    double log_jacobian() const { return log_jacobian_; }
    /// Per-coordinate shift for a linear term 2 beta S.
    double shift(double beta) const { return d_ > 0 ? beta / lam_par_ : 0.0; }
    /// Log of the constant left after completing the square.
    double log_constant(double beta) const { return d_ > 0 ? beta * beta * d_ / lam_par_ : 0.0; }

    /// Calls fn(xi0, weight) for every tensor node, xi0 unshifted.
    template <class Fn>
    void for_each(Fn&& fn) const {
        if (d_ == 0) {
            fn(static_cast<const double*>(nullptr), 1.0);
            return;
        }
        const int m = static_cast<int>(rule_.nodes.size());
        const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d_));
        // Householder vector w = e_1 - u, u = 1/sqrt(d) (1, ..., 1).
        std::vector<double> w(d_, -inv_sqrt_d);
        w[0] += 1.0;
        double ww = 0.0;
        for (double c : w) ww += c * c;
        std::vector<int> idx(d_, 0);
        std::vector<double> eta(d_), xi(d_);
        const double s_par = 1.0 / std::sqrt(lam_par_);
        const double s_perp = 1.0 / std::sqrt(lam_perp_);
        while (true) {
            double weight = 1.0;
            for (int k = 0; k < d_; ++k) {
                eta[k] = rule_.nodes[idx[k]] * (k == 0 ? s_par : s_perp);
                weight *= rule_.weights[idx[k]];
            }
            if (ww > 1e-300) {
                double proj = 0.0;
                for (int k = 0; k < d_; ++k) proj += w[k] * eta[k];
                const double f = 2.0 * proj / ww;
                for (int k = 0; k < d_; ++k) xi[k] = eta[k] - f * w[k];
            } else {
                xi = eta;
            }
            fn(static_cast<const double*>(xi.data()), weight);
            int k = 0;
            while (k < d_ && ++idx[k] == m) idx[k++] = 0;
            if (k == d_) break;
        }
    }

private:
    int d_;
    double lam_par_ = 1.0;
    double lam_perp_ = 1.0;
    double log_jacobian_ = 0.0;
    QuadratureRule rule_;
};

/// Integral of |Psi|^2 over R^N.
double gaussian_norm_integral(const ModelParams& p) {
    const int n = p.n_particles;
    const RotatedRule rule(n, p.A, p.B, n * (n - 1) / 2 + 2);
    double sum = 0.0;
    rule.for_each([&](const double* xi, double w) {
        const double v = vandermonde(xi, n);
        sum += w * v * v;
    });
    return std::exp(rule.log_jacobian()) * sum;
}

void check_oracle_size(const ModelParams& p, int limit, const char* what) {
    if (p.n_particles > limit) {
        throw ValidationError(std::string(what) + " supports N <= " + std::to_string(limit));
    }
}

}  // namespace

double wavefunction(const ModelParams& params, std::span<const double> xs) {
    if (static_cast<int>(xs.size()) != params.n_particles) {
        throw ValidationError("wavefunction needs exactly N coordinates");
    }
    double sum = 0.0, sum_sq = 0.0;
    for (double x : xs) {
        sum += x;
        sum_sq += x * x;
    }
    return vandermonde(xs.data(), params.n_particles) * std::exp(-params.A * sum_sq + params.B * sum * sum);
}

OracleRdm::OracleRdm(const ModelParams& params) : params_(params) {
    check_oracle_size(params, kMaxOracleParticles, "oracle_rdm");
    const int n = params.n_particles;
    const int d = n - 1;
    const RotatedRule rule(d, params.A, params.B, n * (n - 1) / 2 + 2);
    lambda_par_ = rule.lambda_par();
    log_jacobian_ = rule.log_jacobian();
    rule.for_each([&](const double* xi, double w) {
        // The Vandermonde factor of the integrated coordinates is shift invariant.
        const double v = d > 0 ? vandermonde(xi, d) : 1.0;
        weights_.push_back(w * v * v);
        for (int k = 0; k < d; ++k) offsets_.push_back(xi[k]);
    });
    z_ = gaussian_norm_integral(params);
}

double OracleRdm::operator()(double x, double y) const {
    const int d = params_.n_particles - 1;
    const double A = params_.A, B = params_.B;
    const double beta = B * (x + y);
    const double shift = beta / lambda_par_;
    const double log_outer = -(A - B) * (x * x + y * y) + beta * beta * d / lambda_par_;
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        double prod = weights_[i];
        const double* xi = offsets_.data() + i * d;
        for (int k = 0; k < d; ++k) {
            const double c = xi[k] + shift;
            prod *= (x - c) * (y - c);
        }
        sum += prod;
    }
    return params_.n_particles / z_ * std::exp(log_outer + log_jacobian_) * sum;
}

double oracle_rdm(const ModelParams& params, double x, double y) { return OracleRdm(params)(x, y); }

SpectrumResult oracle_spectrum(const ModelParams& params, const GridSpec& spec) {
    const OracleRdm oracle(params);
    const auto grid =
        nystrom_grid([&](double x) { return oracle.diagonal(x); }, params.n_particles, params.t, spec);
    return solve_nystrom_kernel([&](double x, double y) { return oracle(x, y); }, grid, spec.k_max,
                                params.n_particles, params.t);
}

DensityCurve one_particle_density(const ModelParams& params, std::span<const double> xs) {
    DensityCurve curve;
    curve.xs.assign(xs.begin(), xs.end());
    curve.n_particles = params.n_particles;
    curve.t = params.t;
    curve.values.reserve(xs.size());
    if (params.t <= 1.0) {
        const RdmKernel kernel(params);
        for (double x : xs) curve.values.push_back(kernel.diagonal(x));
    } else {
        const OracleRdm oracle(params);
        for (double x : xs) curve.values.push_back(oracle.diagonal(x));
    }
    return curve;
}

PairDensitySurface two_particle_density(const ModelParams& params, std::span<const double> xs,
                                        std::span<const double> ys) {
    check_oracle_size(params, kMaxPairDensityParticles, "two_particle_density");
    const int n = params.n_particles;
    const int d = n - 2;
    const double A = params.A, B = params.B;
    const RotatedRule rule(d, A, B, n * (n - 1) / 2 + 10);
    std::vector<double> offsets, weights;
    rule.for_each([&](const double* xi, double w) {
        const double v = d > 0 ? vandermonde(xi, d) : 1.0;
        weights.push_back(w * v * v);
        for (int k = 0; k < d; ++k) offsets.push_back(xi[k]);
    });

    PairDensitySurface out;
    out.xs.assign(xs.begin(), xs.end());
    out.ys.assign(ys.begin(), ys.end());
    out.n_particles = n;
    out.t = params.t;
    out.norm_integral = gaussian_norm_integral(params);
    out.values = linalg::Matrix(xs.size(), ys.size());
    const double pairs = 0.5 * n * (n - 1);
    const double scale = pairs / out.norm_integral;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double x = xs[i], y = ys[j];
            const double beta = 2.0 * B * (x + y);
            const double shift = rule.shift(beta);
            const double log_outer =
                -2.0 * A * (x * x + y * y) + 2.0 * B * (x + y) * (x + y) + rule.log_constant(beta);
            double sum = 0.0;
            for (std::size_t q = 0; q < weights.size(); ++q) {
                double prod = weights[q];
                const double* xi = offsets.data() + q * d;
                for (int k = 0; k < d; ++k) {
                    const double c = xi[k] + shift;
                    const double f = (x - c) * (y - c);
                    prod *= f * f;
                }
                sum += prod;
            }
            out.values(i, j) = scale * (x - y) * (x - y) * std::exp(log_outer + rule.log_jacobian()) * sum;
        }
    }
    return out;
}

CorrelationSurface correlation_function(const PairDensitySurface& pair, const DensityCurve& single) {
    if (pair.xs != single.xs || pair.ys != single.xs) {
        throw ValidationError("correlation needs the pair density sampled on the one-body grid in both axes");
    }
    CorrelationSurface out;
    out.xs = pair.xs;
    out.ys = pair.ys;
    const std::size_t nx = pair.xs.size(), ny = pair.ys.size();
    out.values = linalg::Matrix(nx, ny);
    out.mask.assign(nx * ny, 0);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double denom = single.values[i] * single.values[j];
            if (!(denom > 1e-300)) {
                out.values(i, j) = std::numeric_limits<double>::quiet_NaN();
                out.mask[j * nx + i] = 1;
            } else {
                out.values(i, j) = pair.values(i, j) / denom;
            }
        }
    }
    return out;
}

double boson_fermion_ratio_check(const ModelParams& params,
                                 std::span<const std::pair<double, double>> points) {
    const RdmKernel kernel(params);
    const PrefactorEvaluator prefactor(params);
    const double c = params.diag_rate;
    const double norm_b = params.n_particles * std::sqrt(c / std::numbers::pi);
    const double ratio = kernel.normalization() / norm_b;
    double worst = 0.0;
    for (const auto& [x, y] : points) {
        const double rho_b = norm_b * std::exp(-params.a * (x * x + y * y) + params.b * x * y);
        const double rho_f = kernel(x, y);
        worst = std::max(worst, std::fabs(rho_f - ratio * prefactor(x, y) * rho_b));
    }
    return worst;
}

int count_local_maxima(std::span<const double> values, double rel_floor) {
    const std::size_t n = values.size();
    if (n < 3) return 0;
    std::vector<double> s(values.begin(), values.end());
    for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
    const double peak = *std::max_element(s.begin(), s.end());
    int count = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i] > s[i - 1] && s[i] >= s[i + 1] && s[i] > rel_floor * peak) ++count;
    }
    return count;
}

int count_surface_maxima(const linalg::Matrix& v, double rel_floor) {
    const std::size_t nx = v.rows(), ny = v.cols();
    if (nx < 3 || ny < 3) return 0;
    double peak = 0.0;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) peak = std::max(peak, v(i, j));
    // Symmetric surfaces sampled off their peak give exact ties between
    // neighbours; a connected set of tied candidates counts once.
    const double tie = 1e-12 * peak;
    std::vector<unsigned char> cand(nx * ny, 0);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double c = v(i, j);
            if (!(c > rel_floor * peak)) continue;
            bool is_max = true;
            for (int dj = -1; dj <= 1 && is_max; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (!(c >= v(i + di, j + dj) - tie)) {
                        is_max = false;
                        break;
                    }
                }
            cand[j * nx + i] = is_max;
        }
    }
    int count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < cand.size(); ++start) {
        if (cand[start] != 1) continue;
        ++count;
        stack.assign(1, start);
        cand[start] = 2;
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const std::size_t i = k % nx, j = k / nx;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const std::size_t q = (j + dj) * nx + (i + di);
                    if (q < cand.size() && cand[q] == 1 && std::fabs(v(i, j) - v(i + di, j + dj)) <= tie) {
                        cand[q] = 2;
                        stack.push_back(q);
                    }
                }
        }
    }
    return count;
}

}  // namespace fermirdm
