#pragma once

#include <optional>

#include "qcorr/families.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

enum class MeasureKind { GeometricDiscord, Discord, Tangle };

MeasureKind measure_from_string(const std::string& name);
std::string measure_name(MeasureKind kind);

/// Optimizer tolerance contribution of a measure; the deficit tolerance is
/// 1e-6 + 2x this value so optimizer noise cannot manufacture a violation.
double measure_opt_tolerance(MeasureKind kind);
double default_deficit_tolerance(MeasureKind kind);

enum class Verdict { Satisfied, Violated, Inconclusive };

std::string to_string(Verdict v);

/// The triple (Q^{A|BC}, Q^{A|B}, Q^{A|C}), the monogamy deficit
/// Q^{A|BC} - Q^{A|B} - Q^{A|C}, and a verdict at the stated tolerance.
/// Violated iff deficit < -tolerance; Satisfied iff deficit >= -tolerance and
/// all component evaluations converged; Inconclusive otherwise.
struct MonogamyReport {
  double q_a_bc = 0.0;
  double q_a_b = 0.0;
  double q_a_c = 0.0;
  double deficit = 0.0;
  std::string measure;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  bool converged = false;
};

/// Evaluates a bipartite measure with `measured` as the measured side and
/// everything else grouped. Tangle is not a bipartite-optimized measure and
/// is rejected here.
MeasureResult eval_measure(const DensityMatrix& rho, MeasureKind kind, const std::string& measured);

/// Monogamy deficit of a tripartite state, head measured against the two
/// marginals. The head defaults to the first subsystem; deficits with other
/// heads are computed on request but nothing is asserted about them.
MonogamyReport deficit(const DensityMatrix& rho, MeasureKind kind,
                       std::optional<std::string> head = std::nullopt,
                       std::optional<double> tolerance = std::nullopt);

// --- theorem 3: geometric discord is monogamous on pure three-qubit states --

struct BrunSampleRow {
  BrunParams params;
  double q_a_bc = 0.0, q_a_b = 0.0, q_a_c = 0.0, deficit = 0.0;
};

BrunSampleRow brun_deficit_row(const BrunParams& params);

/// Rows of a seeded parameter sweep, one per sample.
std::vector<BrunSampleRow> scan_brun(int samples, std::uint64_t seed);

struct Theorem3Summary {
  int samples = 0;
  std::uint64_t seed = 0;
  double min_deficit = 0.0;
  double max_deficit = 0.0;
  BrunParams argmin;
  std::vector<double> histogram_edges;
  std::vector<int> histogram_counts;
  bool pass = false;
};

/// Samples Brun parameters, builds the state, and evaluates the
/// geometric-discord deficit per sample. PASS iff min deficit >= -1e-6.
Theorem3Summary verify_theorem3(int samples, std::uint64_t seed);

/// Both sides of the pure-state bound: lhs = 2(1-p)p (the full-state
/// geometric discord), rhs_numeric from computational-basis dephasing of the
/// Brun state, rhs_closed = 2c(1-p)p, and the coefficient c.
struct ProofBound {
  double lhs = 0.0;
  double rhs_numeric = 0.0;
  double rhs_closed = 0.0;
  double c = 0.0;
};

ProofBound proof_bound_rhs(const BrunParams& params);

/// c = 1 + [4a^2(1-a^2) - 1] gamma^2, the raw value; the bound c <= 1 is
/// asserted by the verification suite.
double c_coefficient(const BrunParams& params);

// --- theorem 1: monogamous measures vanish on separable states -----------

struct ChainCheck {
  double q_sigma_ab = 0.0;   // Q^{A|B} of the reset extension's AB marginal
  double q_rho_abc = 0.0;    // Q^{A|BC} of the marked extension
  double marginal_residual = 0.0;  // max entrywise |rho_AB - sigma_AB|
  bool ok = false;
};

/// A replayable witness that the measure violates monogamy: the marked
/// extension of a separable-but-correlated state, its monogamy report with
/// deficit < -tolerance, and a re-derivation of every link of the chain.
struct ViolationCertificate {
  SeparableDecomposition decomposition;
  DensityMatrix state;  // the marked extension rho_ABC
  MonogamyReport report;
  ChainCheck chain;
};

/// Builds the certificate. MeasureVanishesOnInput when the separable state
/// carries no quantum correlations (no certificate possible); ChainViolated
/// signals an implementation bug, since the chain is measure-independent.
ViolationCertificate theorem1_certificate(const SeparableDecomposition& dec, MeasureKind kind);

// --- symmetric extension route ---------------------------------------------

struct ExtensionReport {
  int n = 0;
  double q_per_copy = 0.0;
  double q_joint = 0.0;
  double rhs = 0.0;    // n * q_per_copy
  double bound = 1.0;  // finiteness witness for a qubit measured side
  bool violated = false;
};

/// For n = 1..n_max, compares Q^{A|B1..Bn} of the symmetric extension with
/// n Q^{A|B}; a monogamous measure would have to satisfy the latter bound,
/// which must eventually break for any measure nonzero on the input.
std::vector<ExtensionReport> extension_check(const SeparableDecomposition& dec, MeasureKind kind,
                                             int n_max);

// --- theorem 2: maximality on pure states -----------------------------------

struct MaximalityResult {
  double max_pure = 0.0;
  double max_mixed = 0.0;
  bool pass = false;
};

/// Samples two-qubit mixed and pure states (the pure sweep starts from the
/// Bell state) and returns the extrema. The pass flag is asserted only for
/// measures that are non-increasing under unmeasured-side operations;
/// geometric discord is reported in demonstration mode.
MaximalityResult pure_maximality_check(MeasureKind kind, int mixed_samples, int pure_samples,
                                       std::uint64_t seed);

// --- no-increase under local channels -------------------------------------

struct ChannelSearchResult {
  double max_increase = 0.0;
  double before = 0.0;
  double after = 0.0;
  int witness_trial = -1;
  DensityMatrix witness_state;
  KrausChannel witness_channel;
};

/// Applies random channels to the unmeasured side of random two-qubit states
/// and reports the largest observed increase. For discord this is a
/// statistical no-increase check; for geometric discord it is a search for a
/// positive witness.
ChannelSearchResult channel_monotonicity_check(MeasureKind kind, int trials, std::uint64_t seed);

// --- discord non-monogamy on pure states -----------------------------------

struct PureViolationSearch {
  int samples_run = 0;
  bool found = false;
  int witness_index = -1;
  double min_deficit = 0.0;
  PureState witness;
  MonogamyReport report;
};

/// Seeded random search over Haar pure three-qubit states for a discord
/// deficit below -threshold; stops at the first witness.
PureViolationSearch discord_pure_violation_search(int max_samples, std::uint64_t seed,
                                                  double threshold = 1e-3);

}  // namespace qcorr
