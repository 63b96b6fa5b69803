#pragma once

#include <memory>
#include <vector>

#include "fermirdm/model.hpp"

namespace fermirdm {

namespace detail {
struct PotentialSeries;
}

/// Upper end of the strong-coupling regime in which the momentum-space
/// picture is used: t * N <= 0.2.
double max_strong_coupling_t(int n_particles);

/**
 * Effective momentum-space potential
 *   V_N(p) = -t * sum_n (-1)^n v_n (kappa p^2)^n * exp(-kappa p^2 / 2),
 * kappa = 2 t N / (N - 1). The variable p is the scaled momentum l_- p.
 *
 * The coefficient sums cancel badly in double precision for large N, so the
 * coefficients and all polynomial evaluations are carried in 50-digit binary
 * floating point and rounded on return.
 */
struct EffectivePotential {
    int n_particles = 0;
    double t = 0.0;
    std::vector<double> v_coeffs;  ///< v_{N,n}, n = 0..N-1, rounded to double
    double gaussian_rate = 0.0;    ///< t N / (N - 1)
    double kappa = 0.0;            ///< 2 t N / (N - 1)
    std::shared_ptr<const detail::PotentialSeries> series;

    double operator()(double p) const;
    double derivative(double p) const;
    double second_derivative(double p) const;
};

/// Requires N >= 2 and t <= 0.2 / N.
EffectivePotential build_potential(const ModelParams& params);

double eval_potential(const EffectivePotential& potential, double p);

enum class ParityClass { odd_like_unique_zero_min, even_like_degenerate_pair };

struct Extremum {
    double location = 0.0;
    double value = 0.0;
    double curvature = 0.0;
};

struct ExtremaReport {
    std::vector<Extremum> minima;  ///< full line, ascending location
    std::vector<Extremum> maxima;  ///< full line, ascending location
    double global_min_value = 0.0;
    double global_min_location = 0.0;  ///< |p| of the global minimum
    int global_min_multiplicity = 0;
    ParityClass parity_class = ParityClass::odd_like_unique_zero_min;
    double highest_max_value = 0.0;
};

/// Locates all extrema by scanning for sign changes of V' and bisecting. Requires N >= 3.
ExtremaReport find_extrema(const EffectivePotential& potential);

/// Harmonic approximation about the global minimum.
struct HarmonicParams {
    double alpha = 0.0;  ///< -V_min / t
    double beta = 0.0;   ///< sqrt(2 N V''_min / (-t V_min))
    double mass = 0.0;   ///< effective mass 1 / (-2 t N V(0))
};

HarmonicParams harmonic_params(const EffectivePotential& potential, const ExtremaReport& report);

/// exp(-sqrt(m dV) dp) across the barrier separating the two degenerate minima.
/// Only defined for the even-like parity class.
double tunneling_splitting_estimate(const EffectivePotential& potential, const ExtremaReport& report);

}  // namespace fermirdm
