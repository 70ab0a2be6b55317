#pragma once

#include <complex>
#include <variant>

#include "qcorr/qstate.hpp"

namespace qcorr {

/// Five-parameter description (p, a, f, g, gamma) of a pure three-qubit
/// state. p, a, f are real in [0, 1], g is complex with f^2 + |g|^2 <= 1 and
/// gamma = sqrt(1 - f^2 - |g|^2) is derived.
struct BrunParams {
  double p = 0.0;
  double a = 0.0;
  double f = 0.0;
  std::complex<double> g;
  double gamma = 1.0;
};

BrunParams make_brun_params(double p, double a, double f, std::complex<double> g);

/// p, a, f uniform on [0,1]; g uniform on the disk of radius sqrt(1-f^2)
/// (uniform modulus-squared, uniform phase). The sampling measure is a tool
/// choice, recorded in every report, not a claim of the analysis.
BrunParams sample_brun(Rng& rng);
BrunParams sample_brun(std::uint64_t seed);

/// The canonical three-qubit pure state of the parametrization:
///   sqrt(p)|0>_A (a|00> + sqrt(1-a^2)|11>)_BC
/// + sqrt(1-p)|1>_A [gamma(sqrt(1-a^2)|00> - a|11>) + f|01> + g|10>]_BC.
PureState brun_state(const BrunParams& params);

/// Explicit ensemble {p_i, |psi_i>_A, |phi_i>_C} defining a separable state.
struct SeparableTerm {
  double weight = 0.0;
  PureState psi;  // first party
  PureState phi;  // second party
};

struct SeparableDecomposition {
  std::vector<SeparableTerm> terms;

  std::size_t size() const { return terms.size(); }
  int dim_psi() const;
  int dim_phi() const;
};

/// Checks weights sum to 1 within 1e-12, every ket is normalized, and all
/// kets on a side share one dimension. Zero weights are rejected so the
/// marker-register dimension stays well-defined.
SeparableDecomposition make_decomposition(std::vector<SeparableTerm> terms);

/// The two-party mixture sum_i p_i |psi_i><psi_i| x |phi_i><phi_i|.
DensityMatrix separable_state(const SeparableDecomposition& dec,
                              std::vector<std::string> labels = {"A", "C"});

/// The marked extension sum_i p_i |psi_i><psi_i|_A x |i><i|_B x |phi_i><phi_i|_C
/// with computational marker states on a register of dimension exactly the
/// number of terms. Its B marginal reproduces separable_state(dec).
DensityMatrix theorem1_extension(const SeparableDecomposition& dec);

/// Same construction with the C register reset:
/// sum_i p_i |psi_i><psi_i|_A x |i><i|_B x |0><0|_C. Its AB marginal equals
/// the AB marginal of theorem1_extension(dec) entrywise.
DensityMatrix sigma_extension(const SeparableDecomposition& dec);

/// sum_i p_i |psi_i><psi_i|_A x (|phi_i><phi_i|)^{x n} on A, B1, ..., Bn;
/// every AB_j marginal equals the original separable state. Guarded by
/// n log2(dim B) + log2(dim A) <= 12.
DensityMatrix symmetric_extension(const SeparableDecomposition& dec, int n);

enum class NamedState { GHZ, W, Bell, SeparableDiscordant };

NamedState named_state_from_string(const std::string& name);
std::string to_string(NamedState which);

/// Regression anchors: GHZ = (|000>+|111>)/sqrt2, W = (|001>+|010>+|100>)/sqrt3,
/// Bell = (|00>+|11>)/sqrt2, separable_discordant = {1/2,|0>,|0>; 1/2,|+>,|+>}.
std::variant<PureState, SeparableDecomposition> named_state(NamedState which);
std::variant<PureState, SeparableDecomposition> named_state(const std::string& name);

}  // namespace qcorr
