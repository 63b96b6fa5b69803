#include "fermirdm/model.hpp"

#include <cmath>
#include <string>

#include "fermirdm/errors.hpp"

namespace fermirdm {

ModelParams make_params(int n_particles, double t) {
    if (n_particles < 2 || n_particles > kMaxParticles) {
        throw ValidationError("particle number must lie in [2, " + std::to_string(kMaxParticles) +
                              "], got " + std::to_string(n_particles));
    }
    if (!std::isfinite(t) || t <= 0.0) {
        throw ValidationError("t must be finite and positive");
    }
    const double n = n_particles;
    const double s = t * t;

    ModelParams p;
    p.n_particles = n_particles;
    p.t = t;
    p.A = 0.5 / s;
    p.B = (1.0 - s) / (2.0 * n * s);
    // Written so that no difference of large terms appears as t -> 0.
    const double one_minus_s = 1.0 - s;
    const double denom = 1.0 + (n - 1.0) * s;
    p.b = (n - 1.0) * one_minus_s * one_minus_s / (2.0 * n * s * denom);
    const double a_minus_b = (n - 1.0 + s) / (2.0 * n * s);  // A - B
    p.a = a_minus_b - 0.5 * p.b;
    p.diag_rate = ((n - 1.0) * (n + 1.0 - s) / denom + 1.0) / n;
    p.p_squared = one_minus_s / denom;
    return p;
}

double coupling_from_t(const ModelParams& params) {
    const double t2 = params.t * params.t;
    return (1.0 / (t2 * t2) - 1.0) / params.n_particles;
}

double t_from_coupling(int n_particles, double coupling) {
    if (n_particles < 2 || n_particles > kMaxParticles) {
        throw ValidationError("particle number out of range");
    }
    const double base = 1.0 + n_particles * coupling;
    if (!std::isfinite(base) || base <= 0.0) {
        throw ValidationError("coupling must satisfy 1 + N D > 0");
    }
    return std::pow(base, -0.25);
}

}  // namespace fermirdm
