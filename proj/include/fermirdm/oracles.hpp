#pragma once

#include <vector>

namespace fermirdm::oracles {

/// V_N(p) = -t (sqrt(N)/pi) int F~(z) cos(sqrt(t) p z) exp(-(N-1) z^2 / (4N)) dz by
/// 50-digit Gauss-Hermite quadrature, with F~ expanded from binomial coefficients.
double potential_by_quadrature(int n_particles, double t, double p, int order = 160);

/// int z^(2n) F~(z) exp(-(N-1) z^2 / (4N)) dz by 50-digit Gauss-Hermite quadrature.
double limit_moment_by_quadrature(int n_particles, int n);

/// Eigenvalues of a small dense symmetric matrix (row-major n x n) by cyclic Jacobi, decreasing.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n);

}  // namespace fermirdm::oracles
