#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fermirdm/linalg.hpp"
#include "fermirdm/model.hpp"
#include "fermirdm/potential.hpp"
#include "fermirdm/special.hpp"

namespace fermirdm {

/// Largest N accepted by the dense Nystrom solver.
inline constexpr int kMaxNystromParticles = 8;

/// rho_1(x;y) = norm * F(x,y) * exp(-a(x^2+y^2) + b x y), normalized to trace N. Requires t <= 1.
class RdmKernel {
public:
    explicit RdmKernel(const ModelParams& params);

    double operator()(double x, double y) const;
    double diagonal(double x) const { return (*this)(x, x); }
    double normalization() const { return norm_; }
    const ModelParams& params() const { return params_; }

private:
    ModelParams params_;
    PrefactorEvaluator prefactor_;
    double norm_ = 0.0;
};

RdmKernel build_kernel(const ModelParams& params);

enum class SpectrumMethod { nystrom_position, schrodinger_momentum, harmonic_approx, tail_formula };

struct SpectrumResult {
    std::vector<double> lambdas;       ///< decreasing
    std::vector<double> grid_nodes;    ///< full symmetric grid, ascending
    std::vector<double> grid_weights;
    linalg::Matrix orbitals;           ///< column k is the k-th orbital sampled on grid_nodes
    std::vector<int> orbital_parity;   ///< +1 even, -1 odd
    SpectrumMethod method = SpectrumMethod::nystrom_position;
    double trace_error = 0.0;
    int n_particles = 0;
    double t = 0.0;
};

/// Grid controls for the Nystrom solver. Unset values are chosen automatically.
struct GridSpec {
    std::optional<double> spacing;
    std::optional<double> half_width;
    int k_max = 40;
    /// Reject grids coarser than t/6 or narrower than the orbital envelope.
    bool enforce_resolution = true;
};

/// Midpoint grid x_j = (j + 1/2) h on the positive half line, mirrored for the full line.
struct SymmetricGrid {
    std::vector<double> half_nodes;
    double spacing = 0.0;
};

SymmetricGrid make_symmetric_grid(double spacing, double half_width);

/// Nystrom discretization of a symmetric kernel, K(x,y) = K(y,x) = K(-x,-y),
/// solved separately in the even and odd sectors.
SpectrumResult solve_nystrom_kernel(const std::function<double(double, double)>& kernel,
                                    const SymmetricGrid& grid, int k_max, int n_particles, double t);

/// Grid for a kernel with diagonal `diag`: spacing min(t, 1)/6 capped at 0.1,
/// half-width covering the orbital envelope 6 sqrt(t k_max / N) and the region
/// where the diagonal exceeds 1e-18 of its maximum. Explicit values in `spec`
/// override, subject to enforce_resolution.
SymmetricGrid nystrom_grid(const std::function<double(double)>& diag, int n_particles, double t,
                           const GridSpec& spec);

/// Natural orbitals and occupations of the one-body density matrix, N <= 8.
SpectrumResult solve_nystrom(const RdmKernel& kernel, const GridSpec& spec = {});

/// Occupations from the momentum-space Schrodinger equation
///   -(1/2m) zeta'' + V zeta = -lambda zeta,
/// finite differences with spacing halved until lambda_1 is stable to 1e-6.
SpectrumResult solve_momentum_schrodinger(const ModelParams& params, const EffectivePotential& potential,
                                          int k_max = 40);

struct HarmonicLevel {
    double value = 0.0;
    bool paired = false;  ///< degenerate pair lambda_{2k-1} = lambda_{2k}
};

/// t alpha [1 - t beta (k - 1/2)], valid for 1 <= k <= 0.3 / t.
HarmonicLevel harmonic_spectrum(double alpha, double beta, double t, int k, ParityClass parity);

/// First `count` occupations predicted by the harmonic approximation, pairs expanded.
std::vector<double> harmonic_series(const HarmonicParams& hp, double t, ParityClass parity, int count);

/// Tail shape (k t)^(N-1) exp(-(2N / sqrt(N-1)) t (k - 1/2)), k >= 3 / t. The
/// overall constant is not determined.
double tail_spectrum(const ModelParams& params, int k);

/// Smallest 1-based k with -lambda_k above the highest barrier; size + 1 if none.
int k_star(const ExtremaReport& report, const SpectrumResult& spectrum);

enum class RegimeLabel { isolated, paired };

struct RegimeSegment {
    int k_first = 0;  ///< 1-based
    int k_last = 0;
    RegimeLabel label = RegimeLabel::isolated;
};

struct BarrierCrossing {
    int k = 0;             ///< first k whose -lambda_k reaches the level
    double level = 0.0;    ///< extremum value of V
    bool is_maximum = false;
};

struct RegimeSegmentation {
    int k_star = 0;
    std::vector<RegimeSegment> segments;
    std::vector<BarrierCrossing> crossings;
    std::vector<double> pair_gaps;  ///< lambda_{k} - lambda_{k+1} for each recorded pair
};

/// Pairing threshold relative to lambda_1 used by segment_regimes.
inline constexpr double kPairingRelTol = 1e-6;
/// Occupations below this fraction of lambda_1 are not segmented.
inline constexpr double kSegmentationFloor = 1e-4;

RegimeSegmentation segment_regimes(const ExtremaReport& report, const SpectrumResult& spectrum);

/// Pairing walk of segment_regimes alone: labels for occupations above the floor,
/// consecutive equal labels merged. Gaps of recorded pairs are appended to pair_gaps if given.
std::vector<RegimeSegment> pairing_segments(const std::vector<double>& lambdas,
                                            std::vector<double>* pair_gaps = nullptr);

/// Largest |lambda_k(t) - lambda_k(1/t)| over the leading ten occupations, where
/// the t <= 1 side is solved here and the t >= 1 side is supplied.
double duality_check(int n_particles, double t, const SpectrumResult& inverse_side);

const char* to_string(SpectrumMethod method);
const char* to_string(RegimeLabel label);
const char* to_string(ParityClass parity);

}  // namespace fermirdm
