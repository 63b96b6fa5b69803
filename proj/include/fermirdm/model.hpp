#pragma once

namespace fermirdm {

/// Largest particle number accepted anywhere in the library.
inline constexpr int kMaxParticles = 64;

/**
 * Parameters of N harmonically trapped fermions with harmonic two-body
 * interaction, in units hbar = m = omega = l_- = 1.
 *
 * The ground state is Vandermonde(x) * exp(-A sum x^2 + B (sum x)^2) and the
 * one-body density matrix carries the Gaussian exp(-a(x^2+y^2) + b x y).
 */
struct ModelParams {
    int n_particles = 0;
    double t = 0.0;  ///< l_+ / l_-
    double A = 0.0;
    double B = 0.0;
    double a = 0.0;
    double b = 0.0;
    double diag_rate = 0.0;  ///< 2a - b, Gaussian rate of the diagonal rho(x;x)
    double p_squared = 0.0;  ///< B / (A - (N-1) B); non-negative iff t <= 1
};

/// Builds the parameter set. Throws ValidationError unless 2 <= N <= 64 and t is finite and positive.
ModelParams make_params(int n_particles, double t);

/// Interaction strength D = (t^-4 - 1) / N.
double coupling_from_t(const ModelParams& params);

/// Inverse of coupling_from_t. Requires 1 + N D > 0.
double t_from_coupling(int n_particles, double coupling);

}  // namespace fermirdm
