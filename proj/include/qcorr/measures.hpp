#pragma once

#include <array>
#include <functional>
#include <optional>

#include "qcorr/qstate.hpp"

namespace qcorr {

/// A measure value together with the optimizing measurement basis (when the
/// measure is defined through one) and convergence metadata. Values are in
/// bits for entropic measures and squared Hilbert-Schmidt units for the
/// geometric discord.
struct MeasureResult {
  double value = 0.0;
  std::optional<QubitBasis> argmin_basis;
  int optimizer_evals = 0;
  bool converged = true;
};

/// Two-stage search over one-qubit measurement bases: coarse grid over
/// (theta, phi), then derivative-free simplex refinement from the best three
/// grid points. The objective is smooth and two-dimensional; the grid
/// prevents capture by local optima.
struct OptimizerConfig {
  int grid_theta = 64;
  int grid_phi = 128;
  int refine_starts = 3;
  int refine_max_steps = 200;
  double refine_tol = 1e-10;
};
inline constexpr OptimizerConfig kOptimizer{};

struct Optimum {
  double best = 0.0;
  QubitBasis basis;
  int evals = 0;
  bool converged = false;
};

/// Maximizes objective(theta, phi) with the two-stage scheme above.
Optimum maximize_over_bases(const std::function<double(double, double)>& objective,
                            const OptimizerConfig& cfg = kOptimizer);

// --- entropic quantities -----------------------------------------------

/// Von Neumann entropy in bits; eigenvalues below 1e-12 contribute zero.
double vn_entropy(const DensityMatrix& rho);

/// S(rho_A) + S(rho_B) - S(rho_AB) for the given label bipartition.
double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                          const std::vector<std::string>& part_b);

/// Quantum discord with rank-1 projective measurements on `measured` (which
/// must be a qubit): I(rho) minus the classical correlations left by the best
/// measurement. POVMs are out of scope; the restriction is recorded in every
/// report.
MeasureResult discord(const DensityMatrix& rho, const std::string& measured);
MeasureResult discord(const DensityMatrix& rho, const std::string& measured,
                      const std::vector<std::string>& rest);

// --- geometric discord -------------------------------------------------

/// Minimal squared Hilbert-Schmidt distance from rho to the classical-quantum
/// states with respect to `measured` (a qubit; the other side may have any
/// finite dimension), computed as Tr rho^2 - max_basis Tr Pi(rho)^2 over
/// projective dephasings Pi.
MeasureResult geometric_discord(const DensityMatrix& rho, const std::string& measured);

/// Exact pure-state value 2(1-p)p, with p the larger eigenvalue of the
/// measured-side reduced state.
double geometric_discord_pure(const PureState& psi, std::size_t measured_index);

/// Purity of the state dephased on `measured` in the given basis, the
/// quantity the geometric-discord optimizer maximizes.
double dephased_purity(const DensityMatrix& rho, const std::string& measured,
                       const QubitBasis& basis);

// --- entanglement baselines ----------------------------------------------

/// Wootters concurrence of a two-qubit state, max(0, l1-l2-l3-l4) from the
/// spin-flipped spectrum.
double concurrence_2q(const DensityMatrix& rho);

/// One-vs-rest squared concurrence 4 det(rho_head) of a three-qubit pure
/// state.
double tangle_pure(const PureState& psi, std::size_t head_index);

// --- internals shared with the monogamy module ---------------------------

/// The four d x d blocks (<a| x I) rho (|b> x I) of a state whose `measured`
/// qubit has been brought to the front.
struct QubitHeadBlocks {
  std::array<std::array<ComplexMatrix, 2>, 2> block;
  Eigen::Index rest_dim = 0;
  double total_purity = 0.0;
};
QubitHeadBlocks qubit_head_blocks(const DensityMatrix& rho, const std::string& measured);

/// Dephased purity as a quadratic form on the Bloch sphere:
/// Tr Pi(rho)^2 = (Tr rho^2 + n^T W n) / 2 for the unit Bloch vector n of the
/// measurement basis. Returns the symmetric 3x3 matrix W with
/// W_jk = Tr[(sigma_j x I) rho (sigma_k x I) rho].
Eigen::Matrix3d bloch_quadratic_form(const QubitHeadBlocks& blocks);

}  // namespace qcorr
