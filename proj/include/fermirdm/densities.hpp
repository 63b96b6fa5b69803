#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fermirdm/linalg.hpp"
#include "fermirdm/model.hpp"
#include "fermirdm/spectra.hpp"

namespace fermirdm {

/// Unnormalized ground state Vandermonde(x) exp(-A sum x^2 + B (sum x)^2); xs.size() == N.
double wavefunction(const ModelParams& params, std::span<const double> xs);

/**
 * One-body density matrix by direct integration of the ground state over
 * N - 1 coordinates. The Gaussian is diagonalized by a Householder rotation
 * onto the centre-of-mass direction, after which a tensor Gauss-Hermite rule
 * of order N(N-1)/2 + 2 integrates the remaining polynomial exactly.
 * Valid for any t > 0. Cost grows as order^(N-1), so N <= 4.
 */
class OracleRdm {
public:
    explicit OracleRdm(const ModelParams& params);
    double operator()(double x, double y) const;
    double diagonal(double x) const { return (*this)(x, x); }
    const ModelParams& params() const { return params_; }
    /// Normalization integral of |Psi|^2 over R^N.
    double norm_integral() const { return z_; }

private:
    ModelParams params_;
    std::vector<double> offsets_;  ///< rotated nodes, (N-1) per point
    std::vector<double> weights_;  ///< product weights times Vandermonde^2
    double lambda_par_ = 0.0;
    double log_jacobian_ = 0.0;
    double z_ = 0.0;
};

inline constexpr int kMaxOracleParticles = 4;
inline constexpr int kMaxPairDensityParticles = 6;

double oracle_rdm(const ModelParams& params, double x, double y);

/// Nystrom spectrum of the oracle kernel; any t > 0, N <= 4.
SpectrumResult oracle_spectrum(const ModelParams& params, const GridSpec& spec = {});

struct DensityCurve {
    std::vector<double> xs;
    std::vector<double> values;
    int n_particles = 0;
    double t = 0.0;
};

/// n(x) = rho_1(x;x). Uses the analytic kernel for t <= 1 and the oracle otherwise.
DensityCurve one_particle_density(const ModelParams& params, std::span<const double> xs);

/// n(x,y) normalized to N(N-1)/2, by the same rotated quadrature over N - 2
/// coordinates with order N(N-1)/2 + 10. N <= 6.
struct PairDensitySurface {
    std::vector<double> xs;
    std::vector<double> ys;
    linalg::Matrix values;  ///< values(i, j) = n(xs[i], ys[j])
    int n_particles = 0;
    double t = 0.0;
    double norm_integral = 0.0;  ///< divide values by N(N-1)/2 and multiply by this for the raw surface
};

PairDensitySurface two_particle_density(const ModelParams& params, std::span<const double> xs,
                                        std::span<const double> ys);

/// C(x,y) = n(x,y) / (n(x) n(y)); entries with vanishing denominator are NaN and masked.
struct CorrelationSurface {
    std::vector<double> xs;
    std::vector<double> ys;
    linalg::Matrix values;
    std::vector<unsigned char> mask;  ///< 1 where masked, column-major like values
};

CorrelationSurface correlation_function(const PairDensitySurface& pair, const DensityCurve& single);

/// Largest |rho_f - (N_f / N_b) F rho_b| over the points, with rho_b the bosonic
/// kernel of the same model normalized to trace N. Requires t <= 1.
double boson_fermion_ratio_check(const ModelParams& params,
                                 std::span<const std::pair<double, double>> points);

/// Local maxima of a sampled curve after a width-3 moving average, ignoring
/// values below rel_floor times the maximum.
int count_local_maxima(std::span<const double> values, double rel_floor = 1e-8);

/// Grid points exceeding all eight neighbours, ignoring values below rel_floor times the maximum.
int count_surface_maxima(const linalg::Matrix& values, double rel_floor = 1e-6);

}  // namespace fermirdm
