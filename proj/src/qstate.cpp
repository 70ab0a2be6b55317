#include "qcorr/qstate.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qcorr {

namespace {

long long product_of(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) p *= d;
  return p;
}

void check_dims(const std::vector<int>& dims, Eigen::Index matrix_dim) {
  if (dims.empty()) fail(Errc::DimensionMismatch, "subsystem dimension list is empty");
  for (int d : dims)
    if (d <= 0) fail(Errc::DimensionMismatch, "subsystem dimension must be positive");
  if (product_of(dims) != matrix_dim) {
    std::ostringstream os;
    os << "product of dims (" << product_of(dims) << ") != dimension " << matrix_dim;
    fail(Errc::DimensionMismatch, os.str());
  }
}

std::vector<std::string> resolve_labels(std::vector<std::string> labels, std::size_t n) {
  if (labels.empty()) return default_labels(n);
  if (labels.size() != n) fail(Errc::DimensionMismatch, "label count != subsystem count");
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) fail(Errc::ValidationError, "duplicate subsystem label '" + l + "'");
  return labels;
}

// Row/column strides of each subsystem, first subsystem most significant.
std::vector<long long> strides_of(const std::vector<int>& dims) {
  std::vector<long long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

// Linear offsets of every multi-index over the chosen subsystem positions.
std::vector<long long> offsets_of(const std::vector<int>& dims,
                                  const std::vector<long long>& strides,
                                  const std::vector<std::size_t>& positions) {
  long long total = 1;
  for (auto p : positions) total *= dims[p];
  std::vector<long long> off(static_cast<std::size_t>(total), 0);
  long long repeat = total;
  for (auto p : positions) {
    repeat /= dims[p];
    long long idx = 0;
    while (idx < total) {
      for (int digit = 0; digit < dims[p]; ++digit)
        for (long long r = 0; r < repeat; ++r, ++idx) off[idx] += digit * strides[p];
    }
  }
  return off;
}

}  // namespace

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < 26)
      out.emplace_back(1, static_cast<char>('A' + i));
    else
      out.push_back("S" + std::to_string(i));
  }
  return out;
}

std::size_t DensityMatrix::subsystem(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  fail(Errc::UnknownLabel, "no subsystem named '" + label + "'");
}

Eigen::Vector2cd QubitBasis::ket() const {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {std::complex<double>(c, 0), std::polar(s, phi)};
}

Eigen::Vector2cd QubitBasis::ket_orth() const {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {std::complex<double>(-s, 0), std::polar(c, phi)};
}

Eigen::Index KrausChannel::input_dim() const {
  return ops.empty() ? 0 : ops.front().cols();
}

Eigen::Index KrausChannel::output_dim() const {
  return ops.empty() ? 0 : ops.front().rows();
}

DensityMatrix validate_density(const ComplexMatrix& m, std::vector<int> dims,
                               std::vector<std::string> labels) {
  if (m.rows() != m.cols()) fail(Errc::DimensionMismatch, "matrix is not square");
  check_dims(dims, m.rows());
  auto labs = resolve_labels(std::move(labels), dims.size());

  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kTolStructural) {
    std::ostringstream os;
    os << "max |M - M^dag| entry = " << herm;
    fail(Errc::NotHermitian, os.str());
  }
  const double tr_err = std::abs(m.trace() - std::complex<double>(1.0, 0.0));
  if (tr_err > kTolTrace) {
    std::ostringstream os;
    os << "|Tr M - 1| = " << tr_err;
    fail(Errc::NotUnitTrace, os.str());
  }

  ComplexMatrix herm_part = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm_part);
  const Eigen::VectorXd& evs = es.eigenvalues();
  const double min_ev = evs.minCoeff();
  if (min_ev < -kTolStructural) {
    std::ostringstream os;
    os << "smallest eigenvalue = " << min_ev;
    fail(Errc::NotPositive, os.str());
  }
  if (min_ev < 0.0) {
    // Partial traces of numerically constructed states accumulate noise;
    // clip the in-tolerance negatives and renormalize the spectrum.
    Eigen::VectorXd clipped = evs.cwiseMax(0.0);
    clipped /= clipped.sum();
    herm_part = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  }
  return DensityMatrix{std::move(herm_part), std::move(dims), std::move(labs)};
}

PureState make_pure(ComplexVector amps, std::vector<int> dims) {
  check_dims(dims, amps.size());
  const double norm_err = std::abs(amps.squaredNorm() - 1.0);
  if (norm_err > kTolStructural) {
    std::ostringstream os;
    os << "| ||v||^2 - 1 | = " << norm_err;
    fail(Errc::ValidationError, os.str());
  }
  return PureState{std::move(amps), std::move(dims)};
}

DensityMatrix to_density(const PureState& psi, std::vector<std::string> labels) {
  auto labs = resolve_labels(std::move(labels), psi.dims.size());
  ComplexMatrix m = psi.amps * psi.amps.adjoint();
  return DensityMatrix{std::move(m), psi.dims, std::move(labs)};
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  ComplexMatrix m = Eigen::kroneckerProduct(a.mat, b.mat);
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());

  std::set<std::string> used(a.labels.begin(), a.labels.end());
  std::vector<std::string> labels = a.labels;
  for (const auto& l : b.labels) {
    std::string name = l;
    for (char c = 'A'; used.count(name) && c <= 'Z'; ++c) name = std::string(1, c);
    if (used.count(name)) fail(Errc::TooLarge, "ran out of single-letter subsystem labels");
    used.insert(name);
    labels.push_back(name);
  }
  return DensityMatrix{std::move(m), std::move(dims), std::move(labels)};
}

PureState kron(const PureState& a, const PureState& b) {
  ComplexVector v = Eigen::kroneckerProduct(a.amps, b.amps);
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return PureState{std::move(v), std::move(dims)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) fail(Errc::UnknownLabel, "keep set is empty");
  std::set<std::size_t> keep_pos;
  for (const auto& l : keep) keep_pos.insert(rho.subsystem(l));

  std::vector<std::size_t> kept, traced;
  for (std::size_t i = 0; i < rho.dims.size(); ++i)
    (keep_pos.count(i) ? kept : traced).push_back(i);

  if (traced.empty()) return rho;

  const auto strides = strides_of(rho.dims);
  const auto off_k = offsets_of(rho.dims, strides, kept);
  const auto off_t = offsets_of(rho.dims, strides, traced);
  const auto dk = static_cast<Eigen::Index>(off_k.size());

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      std::complex<double> acc = 0;
      for (long long t : off_t) acc += rho.mat(off_k[i] + t, off_k[j] + t);
      out(i, j) = acc;
    }

  std::vector<int> dims;
  std::vector<std::string> labels;
  for (auto p : kept) {
    dims.push_back(rho.dims[p]);
    labels.push_back(rho.labels[p]);
  }
  return DensityMatrix{std::move(out), std::move(dims), std::move(labels)};
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<std::string>& order) {
  if (order.size() != rho.labels.size())
    fail(Errc::BadSplit, "permutation must list every subsystem exactly once");
  std::vector<std::size_t> src;
  std::set<std::size_t> seen;
  for (const auto& l : order) {
    const auto p = rho.subsystem(l);
    if (!seen.insert(p).second) fail(Errc::BadSplit, "label '" + l + "' repeated in permutation");
    src.push_back(p);
  }

  std::vector<int> new_dims;
  for (auto p : src) new_dims.push_back(rho.dims[p]);
  const auto old_strides = strides_of(rho.dims);
  const auto new_strides = strides_of(new_dims);

  const auto n = rho.dims.size();
  const auto D = rho.dim();
  std::vector<long long> map(static_cast<std::size_t>(D));
  for (long long idx = 0; idx < D; ++idx) {
    long long rest = idx, to = 0;
    std::vector<int> digit(n);
    for (std::size_t s = 0; s < n; ++s) {
      digit[s] = static_cast<int>(rest / old_strides[s]);
      rest %= old_strides[s];
    }
    for (std::size_t s = 0; s < n; ++s) to += digit[src[s]] * new_strides[s];
    map[static_cast<std::size_t>(idx)] = to;
  }

  ComplexMatrix out(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) out(map[i], map[j]) = rho.mat(i, j);

  std::vector<std::string> labels(order.begin(), order.end());
  return DensityMatrix{std::move(out), std::move(new_dims), std::move(labels)};
}

std::pair<Eigen::VectorXd, ComplexMatrix> eig_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail(Errc::DimensionMismatch, "matrix is not square");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kTolStructural) {
    std::ostringstream os;
    os << "max |M - M^dag| entry = " << herm;
    fail(Errc::NotHermitian, os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0);
  const auto d = m.rows();
  Eigen::VectorXd vals(d);
  ComplexMatrix vecs(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    vals(i) = es.eigenvalues()(d - 1 - i);
    vecs.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return {std::move(vals), std::move(vecs)};
}

double hs_norm_sq(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(Errc::DimensionMismatch, "operands have different shapes");
  return (a - b).squaredNorm();
}

double purity(const ComplexMatrix& m) { return m.squaredNorm(); }

DensityMatrix dephase(const DensityMatrix& rho, const QubitBasis& basis,
                      const std::string& target) {
  const auto pos = rho.subsystem(target);
  if (rho.dims[pos] != 2) fail(Errc::TargetNotQubit, "dephasing target '" + target + "' is not a qubit");

  // Bring the target to the front, project, then restore the original order.
  std::vector<std::string> front_order{target};
  for (const auto& l : rho.labels)
    if (l != target) front_order.push_back(l);
  const bool already_front = (pos == 0);
  DensityMatrix work = already_front ? rho : permute_subsystems(rho, front_order);

  const auto d = work.dim() / 2;
  const Eigen::Vector2cd v = basis.ket(), w = basis.ket_orth();
  ComplexMatrix out = ComplexMatrix::Zero(work.dim(), work.dim());
  for (const auto& u : {v, w}) {
    ComplexMatrix block = ComplexMatrix::Zero(d, d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        block.noalias() += std::conj(u(a)) * u(b) * work.mat.block(a * d, b * d, d, d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        out.block(a * d, b * d, d, d).noalias() += u(a) * std::conj(u(b)) * block;
  }
  DensityMatrix res{std::move(out), work.dims, work.labels};
  return already_front ? res : permute_subsystems(res, rho.labels);
}

PureState purify(const DensityMatrix& rho) {
  auto [vals, vecs] = eig_hermitian(rho.mat);
  const auto d = rho.dim();
  ComplexVector out = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lam = std::max(0.0, vals(i));
    if (lam == 0.0) continue;
    ComplexVector col = vecs.col(i);
    // fix the eigenvector phase: largest-magnitude component real positive
    Eigen::Index peak;
    col.cwiseAbs().maxCoeff(&peak);
    col *= std::polar(1.0, -std::arg(col(peak)));
    const double w = std::sqrt(lam);
    for (Eigen::Index r = 0; r < d; ++r) out(r * d + i) += w * col(r);
  }
  std::vector<int> dims = rho.dims;
  dims.push_back(static_cast<int>(d));
  return PureState{std::move(out), std::move(dims)};
}

DensityMatrix apply_local_channel(const DensityMatrix& rho, const KrausChannel& ch,
                                  const std::string& target) {
  const auto pos = rho.subsystem(target);
  if (ch.ops.empty()) fail(Errc::IncompleteChannel, "channel has no Kraus operators");
  const auto din = ch.input_dim();
  const auto dout = ch.output_dim();
  for (const auto& k : ch.ops)
    if (k.rows() != dout || k.cols() != din)
      fail(Errc::DimensionMismatch, "Kraus operators have inconsistent shapes");
  if (din != rho.dims[pos])
    fail(Errc::DimensionMismatch, "channel input dimension != target dimension");

  ComplexMatrix comp = ComplexMatrix::Zero(din, din);
  for (const auto& k : ch.ops) comp.noalias() += k.adjoint() * k;
  const double comp_err = (comp - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (comp_err > kTolStructural) {
    std::ostringstream os;
    os << "sum K^dag K deviates from identity by " << comp_err;
    fail(Errc::IncompleteChannel, os.str());
  }

  long long pre = 1, post = 1;
  for (std::size_t i = 0; i < pos; ++i) pre *= rho.dims[i];
  for (std::size_t i = pos + 1; i < rho.dims.size(); ++i) post *= rho.dims[i];
  const ComplexMatrix eye_pre = ComplexMatrix::Identity(pre, pre);
  const ComplexMatrix eye_post = ComplexMatrix::Identity(post, post);

  const auto dnew = pre * dout * post;
  ComplexMatrix out = ComplexMatrix::Zero(dnew, dnew);
  for (const auto& k : ch.ops) {
    ComplexMatrix full =
        Eigen::kroneckerProduct(eye_pre, Eigen::kroneckerProduct(k, eye_post).eval()).eval();
    out.noalias() += full * rho.mat * full.adjoint();
  }
  std::vector<int> dims = rho.dims;
  dims[pos] = static_cast<int>(dout);
  return DensityMatrix{std::move(out), std::move(dims), rho.labels};
}

PureState random_haar_pure(const std::vector<int>& dims, Rng& rng) {
  if (dims.empty()) fail(Errc::DimensionMismatch, "subsystem dimension list is empty");
  const auto d = product_of(dims);
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.gaussian_complex();
  v /= v.norm();
  return PureState{std::move(v), dims};
}

PureState random_haar_pure(const std::vector<int>& dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_haar_pure(dims, rng);
}

DensityMatrix random_density(const std::vector<int>& dims, int ancilla_dim, Rng& rng) {
  if (ancilla_dim <= 0) fail(Errc::DimensionMismatch, "ancilla dimension must be positive");
  const auto d = product_of(dims);
  ComplexMatrix m(d, ancilla_dim);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < ancilla_dim; ++c) m(r, c) = rng.gaussian_complex();
  m /= m.norm();
  ComplexMatrix rho = m * m.adjoint();
  return DensityMatrix{std::move(rho), dims, default_labels(dims.size())};
}

DensityMatrix random_density(const std::vector<int>& dims, int ancilla_dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dims, ancilla_dim, rng);
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = rng.gaussian_complex();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const auto piv = r(j, j);
    if (std::abs(piv) > 0) q.col(j) *= piv / std::abs(piv);
  }
  return q;
}

KrausChannel random_channel(int dim, int env, Rng& rng) {
  const ComplexMatrix u = random_unitary(dim * env, rng);
  KrausChannel ch;
  // K_j = (I x <j|_env) U (I x |0>_env), environment index least significant
  for (int j = 0; j < env; ++j) {
    ComplexMatrix k(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) k(r, c) = u(r * env + j, c * env + 0);
    ch.ops.push_back(std::move(k));
  }
  return ch;
}

}  // namespace qcorr
