#include "qcorr/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcorr {

namespace {

ComplexVector normalized(const ComplexVector& v) { return v / v.norm(); }

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

}  // namespace

int SeparableDecomposition::dim_psi() const {
  return terms.empty() ? 0 : static_cast<int>(terms.front().psi.dim());
}

int SeparableDecomposition::dim_phi() const {
  return terms.empty() ? 0 : static_cast<int>(terms.front().phi.dim());
}

BrunParams make_brun_params(double p, double a, double f, std::complex<double> g) {
  require(p >= 0.0 && p <= 1.0, Errc::InvalidParams, "p must lie in [0, 1]");
  require(a >= 0.0 && a <= 1.0, Errc::InvalidParams, "a must lie in [0, 1]");
  require(f >= 0.0 && f <= 1.0, Errc::InvalidParams, "f must lie in [0, 1]");
  const double fg = f * f + std::norm(g);
  require(fg <= 1.0 + kTolExact, Errc::InvalidParams, "f^2 + |g|^2 must not exceed 1");
  BrunParams out;
  out.p = p;
  out.a = a;
  out.f = f;
  out.g = g;
  out.gamma = std::sqrt(std::max(0.0, 1.0 - fg));
  return out;
}

BrunParams sample_brun(Rng& rng) {
  const double p = rng.uniform();
  const double a = rng.uniform();
  const double f = rng.uniform();
  const double mod_sq = rng.uniform() * (1.0 - f * f);
  const double phase = 2.0 * M_PI * rng.uniform();
  return make_brun_params(p, a, f, std::polar(std::sqrt(mod_sq), phase));
}

BrunParams sample_brun(std::uint64_t seed) {
  Rng rng(seed);
  return sample_brun(rng);
}

PureState brun_state(const BrunParams& params) {
  const double p = params.p, a = params.a, f = params.f, gamma = params.gamma;
  require(p >= 0.0 && p <= 1.0 && a >= 0.0 && a <= 1.0 && f >= 0.0 && f <= 1.0 &&
              f * f + std::norm(params.g) <= 1.0 + kTolExact,
          Errc::InvalidParams, "parameters out of range");
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);

  ComplexVector amps = ComplexVector::Zero(8);
  amps(0) = sp * a;               // |000>
  amps(3) = sp * b;               // |011>
  amps(4) = sq * gamma * b;       // |100>
  amps(5) = sq * f;               // |101>
  amps(6) = sq * params.g;        // |110>
  amps(7) = -sq * gamma * a;      // |111>
  return PureState{std::move(amps), {2, 2, 2}};
}

SeparableDecomposition make_decomposition(std::vector<SeparableTerm> terms) {
  require(!terms.empty(), Errc::EmptyDecomposition, "decomposition has no terms");
  double total = 0.0;
  for (const auto& t : terms) {
    require(t.weight > 0.0, Errc::InvalidParams, "weights must be strictly positive");
    require(t.psi.dim() == terms.front().psi.dim() && t.phi.dim() == terms.front().phi.dim(),
            Errc::DimensionMismatch, "all terms must share the two party dimensions");
    require(std::abs(t.psi.amps.squaredNorm() - 1.0) <= kTolStructural, Errc::ValidationError,
            "psi kets must be normalized");
    require(std::abs(t.phi.amps.squaredNorm() - 1.0) <= kTolStructural, Errc::ValidationError,
            "phi kets must be normalized");
    total += t.weight;
  }
  require(std::abs(total - 1.0) <= kTolExact, Errc::InvalidParams, "weights must sum to 1");
  return SeparableDecomposition{std::move(terms)};
}

DensityMatrix separable_state(const SeparableDecomposition& dec,
                              std::vector<std::string> labels) {
  require(!dec.terms.empty(), Errc::EmptyDecomposition, "decomposition has no terms");
  const auto d = static_cast<Eigen::Index>(dec.dim_psi()) * dec.dim_phi();
  ComplexMatrix mat = ComplexMatrix::Zero(d, d);
  for (const auto& t : dec.terms) {
    ComplexVector v = ComplexVector::Zero(d);
    const ComplexVector psi = normalized(t.psi.amps), phi = normalized(t.phi.amps);
    for (Eigen::Index i = 0; i < psi.size(); ++i)
      v.segment(i * phi.size(), phi.size()) = psi(i) * phi;
    mat.noalias() += t.weight * v * v.adjoint();
  }
  return DensityMatrix{std::move(mat), {dec.dim_psi(), dec.dim_phi()}, std::move(labels)};
}

namespace {

// rho = sum_i w_i |psi_i x e_i x chi_i><...| with marker register of dimension k
DensityMatrix marked_extension(const SeparableDecomposition& dec, bool reset_third) {
  require(!dec.terms.empty(), Errc::EmptyDecomposition, "decomposition has no terms");
  const int k = static_cast<int>(dec.size());
  const int da = dec.dim_psi(), dc = dec.dim_phi();
  const Eigen::Index d = static_cast<Eigen::Index>(da) * k * dc;

  ComplexMatrix mat = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    const auto& t = dec.terms[static_cast<std::size_t>(i)];
    const ComplexVector psi = normalized(t.psi.amps);
    ComplexVector chi;
    if (reset_third) {
      chi = ComplexVector::Zero(dc);
      chi(0) = 1.0;
    } else {
      chi = normalized(t.phi.amps);
    }
    ComplexVector v = ComplexVector::Zero(d);
    for (Eigen::Index x = 0; x < da; ++x)
      v.segment((x * k + i) * dc, dc) = psi(x) * chi;
    mat.noalias() += t.weight * v * v.adjoint();
  }
  return DensityMatrix{std::move(mat), {da, k, dc}, {"A", "B", "C"}};
}

}  // namespace

DensityMatrix theorem1_extension(const SeparableDecomposition& dec) {
  return marked_extension(dec, false);
}

DensityMatrix sigma_extension(const SeparableDecomposition& dec) {
  return marked_extension(dec, true);
}

DensityMatrix symmetric_extension(const SeparableDecomposition& dec, int n) {
  require(!dec.terms.empty(), Errc::EmptyDecomposition, "decomposition has no terms");
  require(n >= 1, Errc::InvalidParams, "n must be at least 1");
  const int da = dec.dim_psi(), db = dec.dim_phi();
  const double bits = n * std::log2(static_cast<double>(db)) + std::log2(static_cast<double>(da));
  if (bits > 12.0 + 1e-9) {
    std::ostringstream os;
    os << "extension needs " << bits << " qubits worth of space (guard: 12)";
    fail(Errc::TooLarge, os.str());
  }

  Eigen::Index dn = 1;
  for (int j = 0; j < n; ++j) dn *= db;
  const Eigen::Index d = da * dn;

  ComplexMatrix mat = ComplexMatrix::Zero(d, d);
  for (const auto& t : dec.terms) {
    const ComplexVector psi = normalized(t.psi.amps), phi = normalized(t.phi.amps);
    ComplexVector copies = ComplexVector::Ones(1);
    for (int j = 0; j < n; ++j) {
      ComplexVector next(copies.size() * db);
      for (Eigen::Index x = 0; x < copies.size(); ++x)
        next.segment(x * db, db) = copies(x) * phi;
      copies.swap(next);
    }
    ComplexVector v(d);
    for (Eigen::Index x = 0; x < da; ++x) v.segment(x * dn, dn) = psi(x) * copies;
    mat.noalias() += t.weight * v * v.adjoint();
  }

  std::vector<int> dims{da};
  std::vector<std::string> labels{"A"};
  for (int j = 1; j <= n; ++j) {
    dims.push_back(db);
    labels.push_back("B" + std::to_string(j));
  }
  return DensityMatrix{std::move(mat), std::move(dims), std::move(labels)};
}

NamedState named_state_from_string(const std::string& name) {
  std::string low = name;
  std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
  if (low == "ghz") return NamedState::GHZ;
  if (low == "w") return NamedState::W;
  if (low == "bell") return NamedState::Bell;
  if (low == "separable_discordant") return NamedState::SeparableDiscordant;
  fail(Errc::UnknownName, "no named state '" + name + "'");
}

std::string to_string(NamedState which) {
  switch (which) {
    case NamedState::GHZ: return "GHZ";
    case NamedState::W: return "W";
    case NamedState::Bell: return "Bell";
    case NamedState::SeparableDiscordant: return "separable_discordant";
  }
  return "?";
}

std::variant<PureState, SeparableDecomposition> named_state(NamedState which) {
  const double r2 = 1.0 / std::sqrt(2.0);
  switch (which) {
    case NamedState::GHZ: {
      ComplexVector v = ComplexVector::Zero(8);
      v(0) = v(7) = r2;
      return PureState{std::move(v), {2, 2, 2}};
    }
    case NamedState::W: {
      ComplexVector v = ComplexVector::Zero(8);
      v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
      return PureState{std::move(v), {2, 2, 2}};
    }
    case NamedState::Bell: {
      ComplexVector v = ComplexVector::Zero(4);
      v(0) = v(3) = r2;
      return PureState{std::move(v), {2, 2}};
    }
    case NamedState::SeparableDiscordant: {
      ComplexVector zero(2), plus(2);
      zero << 1.0, 0.0;
      plus << r2, r2;
      std::vector<SeparableTerm> terms;
      terms.push_back({0.5, PureState{zero, {2}}, PureState{zero, {2}}});
      terms.push_back({0.5, PureState{plus, {2}}, PureState{plus, {2}}});
      return make_decomposition(std::move(terms));
    }
  }
  fail(Errc::UnknownName, "unhandled named state");
}

std::variant<PureState, SeparableDecomposition> named_state(const std::string& name) {
  return named_state(named_state_from_string(name));
}

}  // namespace qcorr
