#include "qcorr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qcorr {

namespace {

constexpr double kEntropyCutoff = 1e-12;

double entropy_bits(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > kEntropyCutoff) s -= l * std::log2(l);
  }
  return s;
}

double clip_nonnegative(double v) {
  return (v < 0.0 && v > -kTolStructural) ? 0.0 : v;
}

// eigenvalues of a 2x2 Hermitian matrix, descending
std::array<double, 2> eig2(const Eigen::Matrix2cd& m) {
  const double tr = m(0, 0).real() + m(1, 1).real();
  const double det = m(0, 0).real() * m(1, 1).real() - (m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

// q * S(A/q) for an unnormalized PSD block A with q = Tr A
class BlockEntropy {
 public:
  explicit BlockEntropy(Eigen::Index dim) : dim_(dim) {}

  double operator()(const ComplexMatrix& a, double q) {
    if (q < 1e-14) return 0.0;
    double s = 0.0;
    if (dim_ == 2) {
      Eigen::Matrix2cd m = a;
      for (double l : eig2(m)) {
        l /= q;
        if (l > kEntropyCutoff) s -= l * std::log2(l);
      }
    } else if (dim_ == 4) {
      Eigen::Matrix4cd m = a;
      solver4_.compute(m, Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < 4; ++i) {
        const double l = solver4_.eigenvalues()(i) / q;
        if (l > kEntropyCutoff) s -= l * std::log2(l);
      }
    } else {
      solver_.compute(a, Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < dim_; ++i) {
        const double l = solver_.eigenvalues()(i) / q;
        if (l > kEntropyCutoff) s -= l * std::log2(l);
      }
    }
    return q * s;
  }

 private:
  Eigen::Index dim_;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver4_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
};

struct SimplexPoint {
  double theta, phi, value;
};

// Nelder-Mead on (theta, phi), maximizing. Terminates when the objective
// spread across the simplex drops below tol or after max_steps steps.
struct RefineOutcome {
  SimplexPoint best;
  bool converged;
};

RefineOutcome refine(const std::function<double(double, double)>& f, double theta0, double phi0,
                     double step, double tol, int max_steps, int& evals) {
  auto eval = [&](double t, double p) {
    ++evals;
    return SimplexPoint{t, p, f(t, p)};
  };
  std::array<SimplexPoint, 3> s = {eval(theta0, phi0), eval(theta0 + step, phi0),
                                   eval(theta0, phi0 + step)};
  auto by_value = [](const SimplexPoint& a, const SimplexPoint& b) { return a.value > b.value; };
  std::sort(s.begin(), s.end(), by_value);

  bool converged = false;
  for (int it = 0; it < max_steps; ++it) {
    if (s[0].value - s[2].value < tol) {
      converged = true;
      break;
    }
    const double ct = (s[0].theta + s[1].theta) / 2.0;
    const double cp = (s[0].phi + s[1].phi) / 2.0;
    const SimplexPoint refl = eval(2 * ct - s[2].theta, 2 * cp - s[2].phi);
    if (refl.value > s[0].value) {
      const SimplexPoint expd = eval(3 * ct - 2 * s[2].theta, 3 * cp - 2 * s[2].phi);
      s[2] = (expd.value > refl.value) ? expd : refl;
    } else if (refl.value > s[1].value) {
      s[2] = refl;
    } else {
      const SimplexPoint contr = eval((ct + s[2].theta) / 2.0, (cp + s[2].phi) / 2.0);
      if (contr.value > s[2].value) {
        s[2] = contr;
      } else {
        s[1] = eval((s[0].theta + s[1].theta) / 2.0, (s[0].phi + s[1].phi) / 2.0);
        s[2] = eval((s[0].theta + s[2].theta) / 2.0, (s[0].phi + s[2].phi) / 2.0);
      }
    }
    std::sort(s.begin(), s.end(), by_value);
  }
  return {s[0], converged};
}

QubitBasis folded(double theta, double phi) {
  theta = std::fmod(theta, 2.0 * M_PI);
  if (theta < 0) theta += 2.0 * M_PI;
  if (theta > M_PI) {
    theta = 2.0 * M_PI - theta;
    phi += M_PI;
  }
  phi = std::fmod(phi, 2.0 * M_PI);
  if (phi < 0) phi += 2.0 * M_PI;
  return QubitBasis{theta, phi};
}

const std::array<Eigen::Matrix2cd, 3>& pauli_matrices() {
  static const std::array<Eigen::Matrix2cd, 3> p = [] {
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return p;
}

}  // namespace

Optimum maximize_over_bases(const std::function<double(double, double)>& objective,
                            const OptimizerConfig& cfg) {
  int evals = 0;
  // coarse grid, cell-centered to stay clear of the poles
  std::array<SimplexPoint, 3> top{};
  for (auto& t : top) t.value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.grid_theta; ++i) {
    const double theta = (i + 0.5) * M_PI / cfg.grid_theta;
    for (int j = 0; j < cfg.grid_phi; ++j) {
      const double phi = (j + 0.5) * 2.0 * M_PI / cfg.grid_phi;
      ++evals;
      const double v = objective(theta, phi);
      if (v > top[2].value) {
        top[2] = {theta, phi, v};
        if (top[2].value > top[1].value) std::swap(top[1], top[2]);
        if (top[1].value > top[0].value) std::swap(top[0], top[1]);
      }
    }
  }

  const double step = M_PI / cfg.grid_theta;
  Optimum out;
  out.best = top[0].value;
  out.basis = folded(top[0].theta, top[0].phi);
  out.converged = true;
  for (int k = 0; k < cfg.refine_starts; ++k) {
    const auto r =
        refine(objective, top[k].theta, top[k].phi, step, cfg.refine_tol, cfg.refine_max_steps, evals);
    out.converged = out.converged && r.converged;
    if (r.best.value > out.best) {
      out.best = r.best.value;
      out.basis = folded(r.best.theta, r.best.phi);
    }
  }
  out.evals = evals;
  return out;
}

double vn_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.mat, Eigen::EigenvaluesOnly);
  return entropy_bits(es.eigenvalues());
}

double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                          const std::vector<std::string>& part_b) {
  if (part_a.empty() || part_b.empty()) fail(Errc::BadSplit, "both parts must be nonempty");
  std::set<std::string> seen;
  for (const auto& l : part_a) seen.insert(l);
  for (const auto& l : part_b)
    if (!seen.insert(l).second) fail(Errc::BadSplit, "label '" + l + "' appears on both sides");
  if (seen.size() != rho.labels.size())
    fail(Errc::BadSplit, "split does not cover every subsystem");
  for (const auto& l : rho.labels)
    if (!seen.count(l)) fail(Errc::BadSplit, "split does not cover subsystem '" + l + "'");

  const double s_a = vn_entropy(partial_trace(rho, part_a));
  const double s_b = vn_entropy(partial_trace(rho, part_b));
  const double s_ab = vn_entropy(rho);
  return clip_nonnegative(s_a + s_b - s_ab);
}

QubitHeadBlocks qubit_head_blocks(const DensityMatrix& rho, const std::string& measured) {
  const auto pos = rho.subsystem(measured);
  if (rho.dims[pos] != 2)
    fail(Errc::MeasuredNotQubit, "measured subsystem '" + measured + "' is not a qubit");

  const DensityMatrix* work = &rho;
  DensityMatrix permuted;
  if (pos != 0) {
    std::vector<std::string> order{measured};
    for (const auto& l : rho.labels)
      if (l != measured) order.push_back(l);
    permuted = permute_subsystems(rho, order);
    work = &permuted;
  }
  QubitHeadBlocks out;
  out.rest_dim = work->dim() / 2;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out.block[a][b] = work->mat.block(a * out.rest_dim, b * out.rest_dim, out.rest_dim,
                                        out.rest_dim);
  out.total_purity = purity(work->mat);
  return out;
}

Eigen::Matrix3d bloch_quadratic_form(const QubitHeadBlocks& blocks) {
  // t[c][b][d][a] = Tr[R_cb R_da]; W_jk = sum sigma_j(a,c) sigma_k(b,d) t[c][b][d][a]
  std::array<std::array<std::array<std::array<std::complex<double>, 2>, 2>, 2>, 2> t;
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d)
        for (int a = 0; a < 2; ++a)
          t[c][b][d][a] =
              blocks.block[c][b].cwiseProduct(blocks.block[d][a].transpose()).sum();

  const auto& sigma = pauli_matrices();
  Eigen::Matrix3d w;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      std::complex<double> acc = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) acc += sigma[j](a, c) * sigma[k](b, d) * t[c][b][d][a];
      w(j, k) = acc.real();
    }
  return w;
}

double dephased_purity(const DensityMatrix& rho, const std::string& measured,
                       const QubitBasis& basis) {
  const auto blocks = qubit_head_blocks(rho, measured);
  const Eigen::Vector2cd v = basis.ket(), w = basis.ket_orth();
  double out = 0.0;
  for (const auto& u : {v, w}) {
    ComplexMatrix acc = ComplexMatrix::Zero(blocks.rest_dim, blocks.rest_dim);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) acc.noalias() += std::conj(u(a)) * u(b) * blocks.block[a][b];
    out += acc.squaredNorm();
  }
  return out;
}

MeasureResult geometric_discord(const DensityMatrix& rho, const std::string& measured) {
  const auto blocks = qubit_head_blocks(rho, measured);
  const Eigen::Matrix3d w = bloch_quadratic_form(blocks);
  const double total = blocks.total_purity;

  // Tr Pi(rho)^2 = (Tr rho^2 + n^T W n)/2 on the Bloch sphere
  auto objective = [&](double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const Eigen::Vector3d n(st * std::cos(phi), st * std::sin(phi), ct);
    return 0.5 * (total + n.dot(w * n));
  };
  const Optimum opt = maximize_over_bases(objective);

  MeasureResult res;
  res.value = std::max(0.0, total - opt.best);
  res.argmin_basis = opt.basis;
  res.optimizer_evals = opt.evals;
  res.converged = opt.converged;
  return res;
}

double geometric_discord_pure(const PureState& psi, std::size_t measured_index) {
  if (measured_index >= psi.dims.size()) fail(Errc::UnknownLabel, "subsystem index out of range");
  if (psi.dims[measured_index] != 2)
    fail(Errc::MeasuredNotQubit, "measured subsystem is not a qubit");

  // amplitude matrix with the measured qubit as row index
  long long pre = 1, post = 1;
  for (std::size_t i = 0; i < measured_index; ++i) pre *= psi.dims[i];
  for (std::size_t i = measured_index + 1; i < psi.dims.size(); ++i) post *= psi.dims[i];
  Eigen::Matrix2cd red = Eigen::Matrix2cd::Zero();
  for (long long x = 0; x < pre; ++x)
    for (long long y = 0; y < post; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          red(a, b) += psi.amps((x * 2 + a) * post + y) * std::conj(psi.amps((x * 2 + b) * post + y));

  const double p = eig2(red)[0];
  return 2.0 * (1.0 - p) * p;
}

MeasureResult discord(const DensityMatrix& rho, const std::string& measured) {
  return discord(rho, measured, {});
}

MeasureResult discord(const DensityMatrix& rho, const std::string& measured,
                      const std::vector<std::string>& rest) {
  if (!rest.empty()) {
    std::set<std::string> expected;
    for (const auto& l : rho.labels)
      if (l != measured) expected.insert(l);
    if (std::set<std::string>(rest.begin(), rest.end()) != expected)
      fail(Errc::BadSplit, "rest must name exactly the unmeasured subsystems");
  }
  const auto blocks = qubit_head_blocks(rho, measured);
  const auto d = blocks.rest_dim;

  Eigen::Matrix2cd marg_a;
  marg_a << blocks.block[0][0].trace(), blocks.block[0][1].trace(), blocks.block[1][0].trace(),
      blocks.block[1][1].trace();
  const ComplexMatrix marg_rest = blocks.block[0][0] + blocks.block[1][1];

  BlockEntropy block_entropy(d);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es;
  es.compute(marg_rest, Eigen::EigenvaluesOnly);
  const double s_rest = entropy_bits(es.eigenvalues());
  const auto eig_a = eig2(marg_a);
  const double s_a = entropy_bits(Eigen::Vector2d(eig_a[0], eig_a[1]));
  es.compute(rho.mat, Eigen::EigenvaluesOnly);
  const double s_total = entropy_bits(es.eigenvalues());
  const double mutual = s_a + s_rest - s_total;

  // classical correlations left by measuring in the (theta, phi) basis:
  // J = S(rho_rest) - sum_i q_i S(rho_rest | outcome i)
  ComplexMatrix work(d, d);
  auto objective = [&](double theta, double phi) {
    const QubitBasis basis{theta, phi};
    double conditional = 0.0;
    for (const auto& u : {basis.ket(), basis.ket_orth()}) {
      work.setZero();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          work.noalias() += std::conj(u(a)) * u(b) * blocks.block[a][b];
      conditional += block_entropy(work, work.trace().real());
    }
    return s_rest - conditional;
  };
  const Optimum opt = maximize_over_bases(objective);

  MeasureResult res;
  res.value = std::max(0.0, mutual - opt.best);
  res.argmin_basis = opt.basis;
  res.optimizer_evals = opt.evals;
  res.converged = opt.converged;
  return res;
}

double concurrence_2q(const DensityMatrix& rho) {
  if (rho.dims != std::vector<int>{2, 2}) fail(Errc::WrongDims, "concurrence needs a two-qubit state");

  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();  // sigma_y x sigma_y
  s(0, 3) = -1;
  s(1, 2) = 1;
  s(2, 1) = 1;
  s(3, 0) = -1;

  // Hermitian route: R = sqrt(rho) S rho* S sqrt(rho), spectrum in [0, 1]
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.mat);
  Eigen::Vector4d clipped = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho = es.eigenvectors() *
                                    clipped.cwiseSqrt().asDiagonal() *
                                    es.eigenvectors().adjoint();
  const Eigen::Matrix4cd r = sqrt_rho * s * rho.mat.conjugate() * s * sqrt_rho;
  es.compute((r + r.adjoint()) / 2.0, Eigen::EigenvaluesOnly);

  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const double c = lam(3) - lam(2) - lam(1) - lam(0);
  return std::clamp(c, 0.0, 1.0);
}

double tangle_pure(const PureState& psi, std::size_t head_index) {
  if (psi.dims != std::vector<int>{2, 2, 2})
    fail(Errc::WrongDims, "tangle needs a three-qubit pure state");

  long long pre = 1, post = 1;
  for (std::size_t i = 0; i < head_index; ++i) pre *= psi.dims[i];
  for (std::size_t i = head_index + 1; i < psi.dims.size(); ++i) post *= psi.dims[i];
  Eigen::Matrix2cd red = Eigen::Matrix2cd::Zero();
  for (long long x = 0; x < pre; ++x)
    for (long long y = 0; y < post; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          red(a, b) += psi.amps((x * 2 + a) * post + y) * std::conj(psi.amps((x * 2 + b) * post + y));

  const double det = (red(0, 0) * red(1, 1) - red(0, 1) * red(1, 0)).real();
  return std::clamp(4.0 * det, 0.0, 1.0);
}

}  // namespace qcorr
