#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_helpers.hpp"

#include <cmath>

using namespace qcorr;
using qtest::thrown_code;

namespace {

DensityMatrix maximally_mixed_qubit() {
  return validate_density(ComplexMatrix::Identity(2, 2) / 2.0, {2});
}

}  // namespace

TEST_CASE("validate_density accepts the maximally mixed qubit") {
  const DensityMatrix rho = maximally_mixed_qubit();
  auto [vals, vecs] = eig_hermitian(rho.mat);
  CHECK(vals(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vals(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho.labels == std::vector<std::string>{"A"});
}

TEST_CASE("validate_density rejects the documented violations") {
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2) * 0.45;
  CHECK(thrown_code([&] { validate_density(bad_trace, {2}); }) == Errc::NotUnitTrace);

  ComplexMatrix not_herm = ComplexMatrix::Zero(2, 2);
  not_herm(0, 0) = 1.0;
  not_herm(0, 1) = 0.5;
  CHECK(thrown_code([&] { validate_density(not_herm, {2}); }) == Errc::NotHermitian);

  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK(thrown_code([&] { validate_density(neg, {2}); }) == Errc::NotPositive);

  CHECK(thrown_code([&] { validate_density(ComplexMatrix::Identity(4, 4) / 4.0, {2, 3}); }) ==
        Errc::DimensionMismatch);
}

TEST_CASE("validate_density accepts a pure projector and reports rank 1") {
  const DensityMatrix rho = to_density(qtest::bell());
  const DensityMatrix again = validate_density(rho.mat, {2, 2});
  auto [vals, vecs] = eig_hermitian(again.mat);
  CHECK(vals(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(vals(1)) < 1e-12);
}

TEST_CASE("validate_density clips in-tolerance negative eigenvalues") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0 + 5e-10;
  m(1, 1) = -5e-10;
  const DensityMatrix rho = validate_density(m, {2});
  auto [vals, vecs] = eig_hermitian(rho.mat);
  CHECK(vals(1) >= 0.0);
  CHECK(std::abs(rho.mat.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("kron concatenates dims and preserves the trace") {
  const DensityMatrix q = maximally_mixed_qubit();
  const DensityMatrix joint = kron(q, q);
  CHECK(joint.dims == std::vector<int>{2, 2});
  CHECK(joint.labels == std::vector<std::string>{"A", "B"});
  CHECK((joint.mat - ComplexMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = random_density({2}, 2, rng);
    const DensityMatrix b = random_density({3}, 3, rng);
    const DensityMatrix ab = kron(a, b);
    CHECK(std::abs(ab.mat.trace().real() - 1.0) < 1e-12);
    // marginals recover the factors
    CHECK((partial_trace(ab, {"A"}).mat - a.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((partial_trace(ab, {"B"}).mat - b.mat).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("kron attaches a ground-state ancilla") {
  Rng rng(7);
  const DensityMatrix rho = qtest::random_two_qubit(rng);
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const DensityMatrix anc = validate_density(ground, {2}, {"C"});
  const DensityMatrix ext = kron(rho, anc);
  CHECK(ext.dims == std::vector<int>{2, 2, 2});
  CHECK(ext.labels == std::vector<std::string>{"A", "B", "C"});
  CHECK((partial_trace(ext, {"A", "B"}).mat - rho.mat).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial_trace of a Bell state leaves the maximally mixed qubit") {
  const DensityMatrix bell = to_density(qtest::bell());
  const DensityMatrix a = partial_trace(bell, {"A"});
  CHECK((a.mat - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(thrown_code([&] { partial_trace(bell, {"Q"}); }) == Errc::UnknownLabel);
}

TEST_CASE("partial_trace keeps subsystem order and the trace") {
  Rng rng(11);
  const DensityMatrix rho = random_density({2, 3, 2}, 12, rng);
  const DensityMatrix ac = partial_trace(rho, {"C", "A"});  // set semantics
  CHECK(ac.labels == std::vector<std::string>{"A", "C"});
  CHECK(ac.dims == std::vector<int>{2, 2});
  CHECK(std::abs(ac.mat.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("theorem-1 state and its reset twin share the AB marginal") {
  const auto dec = qtest::sep_disc();
  const DensityMatrix rho = theorem1_extension(dec);
  const DensityMatrix sigma = sigma_extension(dec);
  const double residual = (partial_trace(rho, {"A", "B"}).mat -
                           partial_trace(sigma, {"A", "B"}).mat)
                              .cwiseAbs()
                              .maxCoeff();
  CHECK(residual < 1e-15);
}

TEST_CASE("eig_hermitian sorts descending and reconstructs") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.3;
  m(1, 1) = 0.7;
  auto [vals, vecs] = eig_hermitian(m);
  CHECK(vals(0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(vals(1) == doctest::Approx(0.3).epsilon(1e-14));

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_density({2, 2}, 4, rng);
    auto [l, v] = eig_hermitian(rho.mat);
    const ComplexMatrix rebuilt = v * l.asDiagonal() * v.adjoint();
    CHECK((rebuilt - rho.mat).cwiseAbs().maxCoeff() < 1e-9 * rho.dim());
    CHECK((v.adjoint() * v - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    for (int k = 1; k < 4; ++k) CHECK(l(k - 1) >= l(k));
  }

  ComplexMatrix not_herm = ComplexMatrix::Zero(2, 2);
  not_herm(0, 1) = 1.0;
  CHECK(thrown_code([&] { eig_hermitian(not_herm); }) == Errc::NotHermitian);
}

TEST_CASE("hs_norm_sq basics") {
  const DensityMatrix bell = to_density(qtest::bell());
  CHECK(hs_norm_sq(bell.mat, bell.mat) == 0.0);

  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(hs_norm_sq(p0, p1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(thrown_code([&] { hs_norm_sq(p0, ComplexMatrix::Identity(4, 4)); }) ==
        Errc::DimensionMismatch);
}

TEST_CASE("dephasing identity: distance to the dephased state equals the purity drop") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = qtest::random_two_qubit(rng);
    const QubitBasis basis{rng.uniform(0.0, M_PI), rng.uniform(0.0, 2.0 * M_PI)};
    const DensityMatrix deph = dephase(rho, basis, "A");
    const double lhs = hs_norm_sq(rho.mat, deph.mat);
    const double rhs = purity(rho.mat) - purity(deph.mat);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("dephase is idempotent, trace preserving, and fixes CQ states") {
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix rho = qtest::random_two_qubit(rng);
    const QubitBasis basis{rng.uniform(0.0, M_PI), rng.uniform(0.0, 2.0 * M_PI)};
    const DensityMatrix once = dephase(rho, basis, "A");
    const DensityMatrix twice = dephase(once, basis, "A");
    CHECK((once.mat - twice.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(once.mat.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("dephase in the computational basis collapses the GHZ state") {
  const DensityMatrix ghz = to_density(qtest::ghz());
  const DensityMatrix deph = dephase(ghz, QubitBasis{0.0, 0.0}, "A");
  ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
  expected(0, 0) = 0.5;
  expected(7, 7) = 0.5;
  CHECK((deph.mat - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dephase works on a non-leading subsystem") {
  Rng rng(19);
  const DensityMatrix rho = random_density({2, 2, 2}, 8, rng);
  const QubitBasis basis{1.1, 2.2};
  const DensityMatrix deph = dephase(rho, basis, "B");
  CHECK(deph.labels == rho.labels);
  CHECK(std::abs(deph.mat.trace().real() - 1.0) < 1e-12);
  // idempotence again through the permutation path
  CHECK((dephase(deph, basis, "B").mat - deph.mat).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(thrown_code([&] { dephase(rho, basis, "Q"); }) == Errc::UnknownLabel);

  const DensityMatrix qutrit = random_density({3}, 3, rng);
  CHECK(thrown_code([&] { dephase(qutrit, basis, "A"); }) == Errc::TargetNotQubit);
}

TEST_CASE("purify reproduces the spectral construction") {
  const DensityMatrix rho = qtest::qubit_density(0.7, 0.3);
  const PureState psi = purify(rho);
  CHECK(psi.dims == std::vector<int>{2, 2});
  CHECK(std::abs(psi.amps(0) - std::sqrt(0.7)) < 1e-12);
  CHECK(std::abs(psi.amps(3) - std::sqrt(0.3)) < 1e-12);
  CHECK(std::abs(psi.amps(1)) < 1e-12);
  CHECK(std::abs(psi.amps(2)) < 1e-12);
}

TEST_CASE("purify round-trips through the partial trace") {
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_density({2, 2}, 4, rng);
    const PureState psi = purify(rho);
    const DensityMatrix joint = to_density(psi);
    const DensityMatrix back = partial_trace(joint, {"A", "B"});
    CHECK((back.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-9);
  }

  const DensityMatrix mixed = maximally_mixed_qubit();
  const PureState bellish = purify(mixed);
  const DensityMatrix red = partial_trace(to_density(bellish), {"A"});
  CHECK((red.mat - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_local_channel basics") {
  Rng rng(29);
  const DensityMatrix rho = qtest::random_two_qubit(rng);

  KrausChannel identity;
  identity.ops.push_back(ComplexMatrix::Identity(2, 2));
  const DensityMatrix same = apply_local_channel(rho, identity, "B");
  CHECK((same.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-15);

  // trace-and-replace with |0><0| on B
  KrausChannel replace;
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(0, 1) = 1.0;
  replace.ops = {k0, k1};
  const DensityMatrix replaced = apply_local_channel(rho, replace, "B");
  const DensityMatrix a = partial_trace(rho, {"A"});
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) = a.mat;  // wrong slots if B were most significant
  // expected = rho_A x |0><0| with B the second subsystem: entries at (2i, 2j)
  expected.setZero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expected(i * 2, j * 2) = a.mat(i, j);
  CHECK((replaced.mat - expected).cwiseAbs().maxCoeff() < 1e-12);

  // fully dephasing channel on B of a Bell state
  KrausChannel dephasing;
  ComplexMatrix d0 = ComplexMatrix::Zero(2, 2), d1 = ComplexMatrix::Zero(2, 2);
  d0(0, 0) = 1.0;
  d1(1, 1) = 1.0;
  dephasing.ops = {d0, d1};
  const DensityMatrix bell = to_density(qtest::bell());
  const DensityMatrix collapsed = apply_local_channel(bell, dephasing, "B");
  ComplexMatrix classical = ComplexMatrix::Zero(4, 4);
  classical(0, 0) = 0.5;
  classical(3, 3) = 0.5;
  CHECK((collapsed.mat - classical).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("apply_local_channel validates the channel") {
  Rng rng(31);
  const DensityMatrix rho = qtest::random_two_qubit(rng);

  KrausChannel leaky;
  leaky.ops.push_back(ComplexMatrix::Identity(2, 2) * 0.9);
  CHECK(thrown_code([&] { apply_local_channel(rho, leaky, "B"); }) == Errc::IncompleteChannel);

  KrausChannel wrong;
  wrong.ops.push_back(ComplexMatrix::Identity(3, 3));
  CHECK(thrown_code([&] { apply_local_channel(rho, wrong, "B"); }) == Errc::DimensionMismatch);
}

TEST_CASE("random channels preserve trace and positivity") {
  Rng rng(37);
  for (int i = 0; i < 25; ++i) {
    const DensityMatrix rho = qtest::random_two_qubit(rng);
    const KrausChannel ch = random_channel(2, 2, rng);
    const DensityMatrix mapped = apply_local_channel(rho, ch, "B");
    CHECK(std::abs(mapped.mat.trace().real() - 1.0) < 1e-9);
    auto [vals, vecs] = eig_hermitian(mapped.mat);
    CHECK(vals(vals.size() - 1) > -1e-9);
  }
}

TEST_CASE("rectangular channels update the dims") {
  Rng rng(41);
  const DensityMatrix rho = qtest::random_two_qubit(rng);
  // isometry |b> -> |b>|0>: one 4x2 Kraus operator
  KrausChannel embed;
  ComplexMatrix v = ComplexMatrix::Zero(4, 2);
  v(0, 0) = 1.0;
  v(2, 1) = 1.0;
  embed.ops.push_back(v);
  const DensityMatrix grown = apply_local_channel(rho, embed, "B");
  CHECK(grown.dims == std::vector<int>{2, 4});
  CHECK(std::abs(grown.mat.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("random_haar_pure is deterministic and normalized") {
  const PureState a = random_haar_pure({2, 2}, 99u);
  const PureState b = random_haar_pure({2, 2}, 99u);
  CHECK((a.amps - b.amps).norm() == 0.0);
  CHECK(std::abs(a.amps.squaredNorm() - 1.0) < 1e-12);

  const PureState q = random_haar_pure({2}, 1u);
  CHECK(std::abs(q.amps.squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("haar mean reduced purity matches the known two-qubit average") {
  // E[Tr rho_A^2] = (d_A + d_B) / (d_A d_B + 1) = 4/5 for two qubits
  Rng rng(12345);
  double acc = 0.0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const PureState psi = random_haar_pure({2, 2}, rng);
    const DensityMatrix red = partial_trace(to_density(psi), {"A"});
    acc += purity(red.mat);
  }
  CHECK(std::abs(acc / samples - 0.8) < 0.01);
}

TEST_CASE("random_density basics") {
  const DensityMatrix a = random_density({2}, 2, 7u);
  const DensityMatrix b = random_density({2}, 2, 7u);
  CHECK((a.mat - b.mat).cwiseAbs().maxCoeff() == 0.0);

  // ancilla 1 leaves a pure state
  const DensityMatrix pure = random_density({2, 2}, 1, 3u);
  CHECK(purity(pure.mat) == doctest::Approx(1.0).epsilon(1e-12));

  auto [vals, vecs] = eig_hermitian(random_density({2}, 2, 5u).mat);
  CHECK(vals.minCoeff() > -1e-12);
}

TEST_CASE("product marginals come back exactly") {
  Rng rng(43);
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix a = random_density({2}, 2, rng);
    const DensityMatrix b = random_density({2}, 2, rng);
    const DensityMatrix ab = kron(a, b);
    CHECK((partial_trace(ab, {"A"}).mat - a.mat).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("permute_subsystems composes to the identity") {
  Rng rng(47);
  const DensityMatrix rho = random_density({2, 3, 2}, 12, rng);
  const DensityMatrix swapped = permute_subsystems(rho, {"C", "A", "B"});
  CHECK(swapped.dims == std::vector<int>{2, 2, 3});
  const DensityMatrix back = permute_subsystems(swapped, {"A", "B", "C"});
  CHECK((back.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("closure: random pipelines keep the state invariants") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    DensityMatrix rho = random_density({2, 2}, 1 + static_cast<int>(rng.uniform() * 4), rng);
    const double pick = rng.uniform();
    if (pick < 0.25) {
      rho = kron(partial_trace(rho, {"A"}), partial_trace(rho, {"B"}));
    } else if (pick < 0.5) {
      rho = dephase(rho, QubitBasis{rng.uniform(0.0, M_PI), rng.uniform(0.0, 2 * M_PI)}, "B");
    } else if (pick < 0.75) {
      rho = apply_local_channel(rho, random_channel(2, 2, rng), "A");
    } else {
      rho = partial_trace(kron(rho, random_density({2}, 2, rng)), {"A", "B"});
    }
    // validate_density re-checks hermiticity, trace, and positivity
    const DensityMatrix checked_state = validate_density(rho.mat, rho.dims, rho.labels);
    CHECK(checked_state.dim() == rho.dim());
    ++checked;
  }
  CHECK(checked == 1000);
}
