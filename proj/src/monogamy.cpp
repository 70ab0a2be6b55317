#include "qcorr/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qcorr {

namespace {

Verdict classify(double deficit, double tolerance, bool converged) {
  if (deficit < -tolerance) return Verdict::Violated;
  if (converged) return Verdict::Satisfied;
  return Verdict::Inconclusive;
}

}  // namespace

MeasureKind measure_from_string(const std::string& name) {
  std::string low = name;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "gdiscord" || low == "geometric-discord" || low == "geometric_discord")
    return MeasureKind::GeometricDiscord;
  if (low == "discord") return MeasureKind::Discord;
  if (low == "tangle" || low == "squared-concurrence" || low == "csq") return MeasureKind::Tangle;
  fail(Errc::UnsupportedMeasure, "no measure named '" + name + "'");
}

std::string measure_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::GeometricDiscord: return "gdiscord";
    case MeasureKind::Discord: return "discord";
    case MeasureKind::Tangle: return "tangle";
  }
  return "?";
}

double measure_opt_tolerance(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::GeometricDiscord:
    case MeasureKind::Discord: return kOptimizer.refine_tol;
    case MeasureKind::Tangle: return 0.0;
  }
  return 0.0;
}

double default_deficit_tolerance(MeasureKind kind) {
  return 1e-6 + 2.0 * measure_opt_tolerance(kind);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "Satisfied";
    case Verdict::Violated: return "Violated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

MeasureResult eval_measure(const DensityMatrix& rho, MeasureKind kind,
                           const std::string& measured) {
  switch (kind) {
    case MeasureKind::GeometricDiscord: return geometric_discord(rho, measured);
    case MeasureKind::Discord: return discord(rho, measured);
    case MeasureKind::Tangle:
      fail(Errc::UnsupportedMeasure, "tangle is not a bipartite-optimized measure");
  }
  fail(Errc::UnsupportedMeasure, "unhandled measure");
}

MonogamyReport deficit(const DensityMatrix& rho, MeasureKind kind,
                       std::optional<std::string> head, std::optional<double> tolerance) {
  if (rho.labels.size() != 3) fail(Errc::WrongDims, "deficit needs a tripartite state");
  const std::string h = head.value_or(rho.labels.front());
  const auto h_pos = rho.subsystem(h);
  std::vector<std::string> others;
  for (const auto& l : rho.labels)
    if (l != h) others.push_back(l);

  MonogamyReport rep;
  rep.measure = measure_name(kind);
  rep.tolerance = tolerance.value_or(default_deficit_tolerance(kind));

  if (kind == MeasureKind::Tangle) {
    if (rho.dims != std::vector<int>{2, 2, 2})
      fail(Errc::WrongDims, "tangle deficit needs three qubits");
    auto [vals, vecs] = eig_hermitian(rho.mat);
    if (1.0 - vals(0) > 1e-7)
      fail(Errc::UnsupportedMeasure,
           "tangle deficit is defined here for pure states only (largest eigenvalue " +
               std::to_string(vals(0)) + ")");
    const PureState psi{vecs.col(0), rho.dims};
    rep.q_a_bc = tangle_pure(psi, h_pos);
    const double c_ab = concurrence_2q(partial_trace(rho, {h, others[0]}));
    const double c_ac = concurrence_2q(partial_trace(rho, {h, others[1]}));
    rep.q_a_b = c_ab * c_ab;
    rep.q_a_c = c_ac * c_ac;
    rep.converged = true;
  } else {
    if (rho.dim_of(h) != 2) fail(Errc::MeasuredNotQubit, "head subsystem must be a qubit");
    const MeasureResult full = eval_measure(rho, kind, h);
    const MeasureResult left = eval_measure(partial_trace(rho, {h, others[0]}), kind, h);
    const MeasureResult right = eval_measure(partial_trace(rho, {h, others[1]}), kind, h);
    rep.q_a_bc = full.value;
    rep.q_a_b = left.value;
    rep.q_a_c = right.value;
    rep.converged = full.converged && left.converged && right.converged;
  }
  rep.deficit = rep.q_a_bc - rep.q_a_b - rep.q_a_c;
  rep.verdict = classify(rep.deficit, rep.tolerance, rep.converged);
  return rep;
}

BrunSampleRow brun_deficit_row(const BrunParams& params) {
  const PureState psi = brun_state(params);
  const DensityMatrix rho = to_density(psi);
  const MonogamyReport rep = deficit(rho, MeasureKind::GeometricDiscord);
  return BrunSampleRow{params, rep.q_a_bc, rep.q_a_b, rep.q_a_c, rep.deficit};
}

std::vector<BrunSampleRow> scan_brun(int samples, std::uint64_t seed) {
  if (samples < 1) fail(Errc::InvalidParams, "samples must be at least 1");
  Rng rng(seed);
  std::vector<BrunSampleRow> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) rows.push_back(brun_deficit_row(sample_brun(rng)));
  return rows;
}

Theorem3Summary verify_theorem3(int samples, std::uint64_t seed) {
  const auto rows = scan_brun(samples, seed);

  Theorem3Summary out;
  out.samples = samples;
  out.seed = seed;
  out.min_deficit = rows.front().deficit;
  out.max_deficit = rows.front().deficit;
  out.argmin = rows.front().params;
  for (const auto& r : rows) {
    if (r.deficit < out.min_deficit) {
      out.min_deficit = r.deficit;
      out.argmin = r.params;
    }
    out.max_deficit = std::max(out.max_deficit, r.deficit);
  }

  constexpr int kBins = 25;
  const double lo = std::min(out.min_deficit, 0.0);
  const double hi = std::max(out.max_deficit, lo + 1e-12);
  const double width = (hi - lo) / kBins;
  out.histogram_counts.assign(kBins, 0);
  for (int b = 0; b <= kBins; ++b) out.histogram_edges.push_back(lo + b * width);
  for (const auto& r : rows) {
    int b = static_cast<int>((r.deficit - lo) / width);
    b = std::clamp(b, 0, kBins - 1);
    ++out.histogram_counts[static_cast<std::size_t>(b)];
  }
  out.pass = out.min_deficit >= -1e-6;
  return out;
}

double c_coefficient(const BrunParams& params) {
  make_brun_params(params.p, params.a, params.f, params.g);  // range check
  const double a2 = params.a * params.a;
  return 1.0 + (4.0 * a2 * (1.0 - a2) - 1.0) * params.gamma * params.gamma;
}

ProofBound proof_bound_rhs(const BrunParams& params) {
  const PureState psi = brun_state(params);
  const DensityMatrix rho = to_density(psi);
  const DensityMatrix sigma = dephase(rho, QubitBasis{0.0, 0.0}, "A");

  const DensityMatrix rho_ab = partial_trace(rho, {"A", "B"});
  const DensityMatrix rho_ac = partial_trace(rho, {"A", "C"});
  const DensityMatrix sig_ab = partial_trace(sigma, {"A", "B"});
  const DensityMatrix sig_ac = partial_trace(sigma, {"A", "C"});

  ProofBound out;
  out.lhs = 2.0 * (1.0 - params.p) * params.p;
  out.rhs_numeric = hs_norm_sq(rho_ab.mat, sig_ab.mat) + hs_norm_sq(rho_ac.mat, sig_ac.mat);
  out.c = c_coefficient(params);
  out.rhs_closed = 2.0 * out.c * (1.0 - params.p) * params.p;
  return out;
}

ViolationCertificate theorem1_certificate(const SeparableDecomposition& dec, MeasureKind kind) {
  const double tol = default_deficit_tolerance(kind);

  const DensityMatrix rho_ac_sep = separable_state(dec);
  const MeasureResult on_input = eval_measure(rho_ac_sep, kind, "A");
  if (on_input.value <= 10.0 * tol) {
    std::ostringstream os;
    os << measure_name(kind) << " = " << on_input.value
       << " on the separable input; no certificate possible";
    fail(Errc::MeasureVanishesOnInput, os.str());
  }

  ViolationCertificate cert;
  cert.decomposition = dec;
  cert.state = theorem1_extension(dec);
  const DensityMatrix sigma = sigma_extension(dec);

  const DensityMatrix rho_ab = partial_trace(cert.state, {"A", "B"});
  const DensityMatrix sig_ab = partial_trace(sigma, {"A", "B"});
  cert.chain.marginal_residual = (rho_ab.mat - sig_ab.mat).cwiseAbs().maxCoeff();
  cert.chain.q_sigma_ab = eval_measure(sig_ab, kind, "A").value;
  cert.chain.q_rho_abc = eval_measure(cert.state, kind, "A").value;
  cert.chain.ok = cert.chain.marginal_residual <= kTolExact &&
                  cert.chain.q_sigma_ab >= cert.chain.q_rho_abc - 1e-6;
  if (!cert.chain.ok) {
    std::ostringstream os;
    os << "proof chain failed: Q(sigma_AB) = " << cert.chain.q_sigma_ab
       << ", Q(rho_ABC) = " << cert.chain.q_rho_abc
       << ", marginal residual = " << cert.chain.marginal_residual
       << " (measure-independent given the basic properties; this indicts the implementation)";
    fail(Errc::ChainViolated, os.str());
  }

  cert.report = deficit(cert.state, kind);
  if (cert.report.verdict != Verdict::Violated) {
    std::ostringstream os;
    os << "expected a violated report but deficit = " << cert.report.deficit
       << " at tolerance " << cert.report.tolerance;
    fail(Errc::ChainViolated, os.str());
  }
  return cert;
}

std::vector<ExtensionReport> extension_check(const SeparableDecomposition& dec, MeasureKind kind,
                                             int n_max) {
  if (n_max < 1) fail(Errc::InvalidParams, "n_max must be at least 1");
  const double tol = default_deficit_tolerance(kind);

  const DensityMatrix rho_ab = separable_state(dec, {"A", "B"});
  const double q_per_copy = eval_measure(rho_ab, kind, "A").value;
  if (q_per_copy <= 10.0 * tol) {
    std::ostringstream os;
    os << measure_name(kind) << " = " << q_per_copy << " on the separable input";
    fail(Errc::MeasureVanishesOnInput, os.str());
  }

  std::vector<ExtensionReport> out;
  for (int n = 1; n <= n_max; ++n) {
    const DensityMatrix ext = symmetric_extension(dec, n);  // TooLarge guards memory
    ExtensionReport rep;
    rep.n = n;
    rep.q_per_copy = q_per_copy;
    rep.q_joint = eval_measure(ext, kind, "A").value;
    rep.rhs = n * q_per_copy;
    rep.bound = 1.0;  // q_joint = Tr rho^2 - Tr Pi(rho)^2 <= 1 for a qubit head
    rep.violated = rep.q_joint + 1e-6 < rep.rhs;
    out.push_back(rep);
  }
  return out;
}

MaximalityResult pure_maximality_check(MeasureKind kind, int mixed_samples, int pure_samples,
                                       std::uint64_t seed) {
  if (mixed_samples < 1 || pure_samples < 1)
    fail(Errc::InvalidParams, "sample counts must be at least 1");
  Rng rng(seed);

  MaximalityResult out;
  for (int i = 0; i < mixed_samples; ++i) {
    const DensityMatrix rho = random_density({2, 2}, 4, rng);
    out.max_mixed = std::max(out.max_mixed, eval_measure(rho, kind, "A").value);
  }
  // the pure sweep starts from the Bell state, the known discord maximizer
  const PureState bell = std::get<PureState>(named_state(NamedState::Bell));
  out.max_pure = eval_measure(to_density(bell), kind, "A").value;
  for (int i = 1; i < pure_samples; ++i) {
    const DensityMatrix rho = to_density(random_haar_pure({2, 2}, rng));
    out.max_pure = std::max(out.max_pure, eval_measure(rho, kind, "A").value);
  }
  out.pass = out.max_pure >= out.max_mixed - 1e-4;
  return out;
}

ChannelSearchResult channel_monotonicity_check(MeasureKind kind, int trials, std::uint64_t seed) {
  if (trials < 1) fail(Errc::InvalidParams, "trials must be at least 1");
  Rng rng(seed);

  ChannelSearchResult out;
  out.max_increase = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const DensityMatrix rho = random_density({2, 2}, 4, rng);
    const KrausChannel ch = random_channel(2, 2, rng);
    const double before = eval_measure(rho, kind, "A").value;
    const DensityMatrix mapped = apply_local_channel(rho, ch, "B");
    const double after = eval_measure(mapped, kind, "A").value;
    if (after - before > out.max_increase) {
      out.max_increase = after - before;
      out.before = before;
      out.after = after;
      out.witness_trial = t;
      out.witness_state = rho;
      out.witness_channel = ch;
    }
  }
  return out;
}

PureViolationSearch discord_pure_violation_search(int max_samples, std::uint64_t seed,
                                                  double threshold) {
  if (max_samples < 1) fail(Errc::InvalidParams, "max_samples must be at least 1");
  Rng rng(seed);

  PureViolationSearch out;
  out.min_deficit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < max_samples; ++i) {
    const PureState psi = random_haar_pure({2, 2, 2}, rng);
    const MonogamyReport rep = deficit(to_density(psi), MeasureKind::Discord);
    out.samples_run = i + 1;
    if (rep.deficit < out.min_deficit) {
      out.min_deficit = rep.deficit;
      out.witness = psi;
      out.report = rep;
      out.witness_index = i;
    }
    if (rep.deficit < -threshold) {
      out.found = true;
      break;
    }
  }
  return out;
}

}  // namespace qcorr
