#pragma once

// Independent oracles for cross-checking the library. Everything here walks
// its own arithmetic route so an implementation bug cannot cancel against
// itself: the classical-quantum minimizer works on the explicit sigma
// parametrization, the concurrence oracle uses the non-Hermitian eigenvalue
// route, the discord oracle sweeps a dense basis grid through full dephased
// matrices.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "qcorr/measures.hpp"
#include "qcorr/qstate.hpp"

namespace oracle {

using qcorr::ComplexMatrix;
using qcorr::DensityMatrix;
using qcorr::QubitBasis;
using qcorr::Rng;

// --- generic Nelder-Mead minimizer (n-dimensional) -------------------------

inline std::vector<double> nelder_mead_min(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double step, int max_iter, double tol) {
  const std::size_t n = x0.size();
  struct Vertex {
    std::vector<double> x;
    double f;
  };
  std::vector<Vertex> s;
  s.push_back({x0, f(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += step;
    s.push_back({x, f(x)});
  }
  auto cmp = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::sort(s.begin(), s.end(), cmp);

  for (int it = 0; it < max_iter; ++it) {
    if (s.back().f - s.front().f < tol) break;
    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s[v].x[i] / static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (centroid[i] - s.back().x[i]);
      return x;
    };
    const auto xr = blend(1.0);
    const double fr = f(xr);
    if (fr < s.front().f) {
      const auto xe = blend(2.0);
      const double fe = f(xe);
      s.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < s[n - 1].f) {
      s.back() = {xr, fr};
    } else {
      const auto xc = blend(-0.5);
      const double fc = f(xc);
      if (fc < s.back().f) {
        s.back() = {xc, fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t i = 0; i < n; ++i) s[v].x[i] = (s[v].x[i] + s[0].x[i]) / 2.0;
          s[v].f = f(s[v].x);
        }
      }
    }
    std::sort(s.begin(), s.end(), cmp);
  }
  return s.front().x;
}

// --- brute-force classical-quantum minimization ------------------------------

// Builds sigma = q |v><v| x tau_0 + (1-q) |v_perp><v_perp| x tau_1 from a raw
// 9-parameter vector: (theta, phi, logit q, bloch_0 (3), bloch_1 (3)). Bloch
// vectors longer than 1 are pulled back to the ball.
inline ComplexMatrix cq_state_from_params(const std::vector<double>& x) {
  const QubitBasis basis{x[0], x[1]};
  const double q = 1.0 / (1.0 + std::exp(-x[2]));

  auto tau = [](double bx, double by, double bz) {
    const double r = std::sqrt(bx * bx + by * by + bz * bz);
    if (r > 1.0) {
      bx /= r;
      by /= r;
      bz /= r;
    }
    Eigen::Matrix2cd t;
    t << 1.0 + bz, std::complex<double>(bx, -by), std::complex<double>(bx, by), 1.0 - bz;
    return Eigen::Matrix2cd(t / 2.0);
  };
  const Eigen::Matrix2cd tau0 = tau(x[3], x[4], x[5]);
  const Eigen::Matrix2cd tau1 = tau(x[6], x[7], x[8]);

  const Eigen::Vector2cd v = basis.ket(), w = basis.ket_orth();
  const Eigen::Matrix2cd pv = v * v.adjoint(), pw = w * w.adjoint();

  ComplexMatrix sigma(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      sigma.block(a * 2, b * 2, 2, 2) = q * pv(a, b) * tau0 + (1.0 - q) * pw(a, b) * tau1;
  return sigma;
}

// min_sigma ||rho - sigma||_2^2 over explicit two-qubit classical-quantum
// states, multistart Nelder-Mead over the 9 free parameters.
inline double cq_bruteforce_min(const DensityMatrix& rho, Rng& rng, int restarts = 30) {
  auto objective = [&](const std::vector<double>& x) {
    return (rho.mat - cq_state_from_params(x)).squaredNorm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0 = {rng.uniform(0.0, M_PI),
                              rng.uniform(0.0, 2.0 * M_PI),
                              rng.uniform(-2.0, 2.0),
                              rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0)};
    const auto x = nelder_mead_min(objective, x0, 0.25, 4000, 1e-13);
    best = std::min(best, objective(x));
  }
  return best;
}

// --- concurrence via the non-Hermitian spectrum ------------------------------

// C = max(0, l1 - l2 - l3 - l4) with l_i the square roots of the eigenvalues
// of rho (sy x sy) rho* (sy x sy), computed with a general complex
// eigensolver.
inline double concurrence_eig_route(const DensityMatrix& rho) {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  s(0, 3) = -1;
  s(1, 2) = 1;
  s(2, 1) = 1;
  s(3, 0) = -1;
  const Eigen::Matrix4cd r = rho.mat * s * rho.mat.conjugate() * s;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r, false);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// --- discord via a dense grid through full dephased matrices -----------------

inline double discord_finegrid(const DensityMatrix& rho, const std::string& measured,
                               int n_theta = 256, int n_phi = 512) {
  using namespace qcorr;
  std::vector<std::string> rest;
  for (const auto& l : rho.labels)
    if (l != measured) rest.push_back(l);
  const double total_mi = mutual_information(rho, {measured}, rest);

  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_theta; ++i) {
    const double theta = (i + 0.5) * M_PI / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * 2.0 * M_PI / n_phi;
      const DensityMatrix deph = dephase(rho, QubitBasis{theta, phi}, measured);
      best = std::max(best, mutual_information(deph, {measured}, rest));
    }
  }
  return std::max(0.0, total_mi - best);
}

// --- geometric discord via the closed quadratic form -------------------------

// D_G = (Tr rho^2 - lambda_max(W)) / 2, with W built from full matrix
// products rather than head blocks.
inline double gdiscord_lambda_max(const DensityMatrix& rho, const std::string& measured) {
  using namespace qcorr;
  std::vector<std::string> order{measured};
  for (const auto& l : rho.labels)
    if (l != measured) order.push_back(l);
  const DensityMatrix work =
      rho.labels.front() == measured ? rho : permute_subsystems(rho, order);

  const auto d = work.dim() / 2;
  std::array<Eigen::Matrix2cd, 3> sigma;
  sigma[0] << 0, 1, 1, 0;
  sigma[1] << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  sigma[2] << 1, 0, 0, -1;

  Eigen::Matrix3d w;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      ComplexMatrix sj = ComplexMatrix::Zero(2 * d, 2 * d);
      ComplexMatrix sk = ComplexMatrix::Zero(2 * d, 2 * d);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          sj.block(a * d, b * d, d, d) = sigma[static_cast<std::size_t>(j)](a, b) * ComplexMatrix::Identity(d, d);
          sk.block(a * d, b * d, d, d) = sigma[static_cast<std::size_t>(k)](a, b) * ComplexMatrix::Identity(d, d);
        }
      w(j, k) = (sj * work.mat * sk * work.mat).trace().real();
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(w, Eigen::EigenvaluesOnly);
  return 0.5 * (purity(work.mat) - es.eigenvalues()(2));
}

}  // namespace oracle
