#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Global numerical tolerances (double precision headroom at dims <= 2048).
inline constexpr double kTolStructural = 1e-9;  // hermiticity / positivity
inline constexpr double kTolTrace = 1e-7;
inline constexpr double kTolExact = 1e-12;  // exact-algebra identities

std::vector<std::string> default_labels(std::size_t n);

/// Hermitian, unit-trace, positive-semidefinite operator on a tensor product
/// of finite-dimensional subsystems. `dims` lists the subsystem dimensions in
/// tensor order (the first subsystem carries the most significant index) and
/// `labels` names them; A, B, C, ... by default. Subsystem order is positional
/// and explicit in every operation, no implicit reordering happens anywhere.
struct DensityMatrix {
  ComplexMatrix mat;
  std::vector<int> dims;
  std::vector<std::string> labels;

  Eigen::Index dim() const { return mat.rows(); }
  std::size_t subsystem(const std::string& label) const;  // throws UnknownLabel
  int dim_of(const std::string& label) const { return dims[subsystem(label)]; }
};

/// Normalized state vector on a tensor product of subsystems.
struct PureState {
  ComplexVector amps;
  std::vector<int> dims;

  Eigen::Index dim() const { return amps.size(); }
};

/// One-qubit orthonormal measurement basis {|n>, |-n>} parametrized by Bloch
/// angles: |n> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>.
struct QubitBasis {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  Eigen::Vector2cd ket() const;
  Eigen::Vector2cd ket_orth() const;
};

/// Completely positive trace-preserving map given by Kraus operators, each
/// output_dim x input_dim (rectangular allowed).
struct KrausChannel {
  std::vector<ComplexMatrix> ops;

  Eigen::Index input_dim() const;
  Eigen::Index output_dim() const;
};

// --- construction / validation ------------------------------------------

/// Checks the three state invariants (Hermitian to 1e-9, trace to 1e-7,
/// positive to -1e-9). Eigenvalues in [-1e-9, 0) are clipped to zero and the
/// spectrum renormalized; larger violations are hard errors.
DensityMatrix validate_density(const ComplexMatrix& m, std::vector<int> dims,
                               std::vector<std::string> labels = {});

PureState make_pure(ComplexVector amps, std::vector<int> dims);
DensityMatrix to_density(const PureState& psi, std::vector<std::string> labels = {});

// --- algebra ---------------------------------------------------------------

/// Tensor product with concatenated dims. Labels of `b` that clash with
/// labels of `a` are renamed to the first unused single letters.
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

PureState kron(const PureState& a, const PureState& b);

/// Reduced state on the kept subsystems. Kept subsystems stay in the order
/// they have in `rho` regardless of the order of `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

/// Rearranges the tensor factors to the given label order.
DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<std::string>& order);

/// Real spectrum sorted descending, with matching orthonormal eigenvectors as
/// columns. Ordering inside a degenerate eigenspace is unspecified and must
/// not be relied on.
std::pair<Eigen::VectorXd, ComplexMatrix> eig_hermitian(const ComplexMatrix& m);

/// Squared Hilbert-Schmidt distance Tr[(a-b)^dag (a-b)].
double hs_norm_sq(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr m^2 for Hermitian m.
double purity(const ComplexMatrix& m);

/// Projective dephasing of a qubit subsystem: sum_i (Pi_i x I) rho (Pi_i x I)
/// with Pi_i the rank-1 projectors of `basis` on `target`. The output is
/// classical-quantum with respect to `target`; the map is idempotent.
DensityMatrix dephase(const DensityMatrix& rho, const QubitBasis& basis, const std::string& target);

/// Canonical purification via the eigendecomposition: sum_i sqrt(l_i)|v_i>|i>
/// with eigenvalues ordered descending. The ancilla is appended as one
/// subsystem of dimension rho.dim().
PureState purify(const DensityMatrix& rho);

/// sum_k (I x K_k x I) rho (I x K_k x I)^dag on `target`; dims are updated
/// when the channel changes the output dimension.
DensityMatrix apply_local_channel(const DensityMatrix& rho, const KrausChannel& ch,
                                  const std::string& target);

// --- sampling ----------------------------------------------------------------

/// Unit vector distributed with the unitarily invariant (Haar) measure:
/// normalized vector of iid standard complex Gaussian entries.
PureState random_haar_pure(const std::vector<int>& dims, Rng& rng);
PureState random_haar_pure(const std::vector<int>& dims, std::uint64_t seed);

/// Partial trace of a Haar pure state on (dims..., ancilla_dim); full rank
/// with probability 1 once ancilla_dim >= prod(dims).
DensityMatrix random_density(const std::vector<int>& dims, int ancilla_dim, Rng& rng);
DensityMatrix random_density(const std::vector<int>& dims, int ancilla_dim, std::uint64_t seed);

/// Haar-distributed unitary (QR of a Gaussian matrix, phases fixed).
ComplexMatrix random_unitary(int dim, Rng& rng);

/// Random channel from a Stinespring dilation: Haar unitary on dim x env,
/// environment prepared in |0> and traced out. Returns `env` Kraus operators.
KrausChannel random_channel(int dim, int env, Rng& rng);

}  // namespace qcorr
