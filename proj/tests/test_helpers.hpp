#pragma once

#include "doctest.h"

#include "qcorr/families.hpp"
#include "qcorr/qstate.hpp"

namespace qtest {

using namespace qcorr;

// Runs f and returns the error code it throws; fails the test if it does not
// throw a qcorr::Error.
template <typename F>
Errc thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  } catch (...) {
    FAIL("threw something other than qcorr::Error");
  }
  FAIL("expected a qcorr::Error but nothing was thrown");
  return Errc::UsageError;  // unreachable
}

inline PureState bell() { return std::get<PureState>(named_state(NamedState::Bell)); }
inline PureState ghz() { return std::get<PureState>(named_state(NamedState::GHZ)); }
inline PureState w_state() { return std::get<PureState>(named_state(NamedState::W)); }
inline SeparableDecomposition sep_disc() {
  return std::get<SeparableDecomposition>(named_state(NamedState::SeparableDiscordant));
}

inline DensityMatrix random_two_qubit(Rng& rng, int ancilla = 4) {
  return random_density({2, 2}, ancilla, rng);
}

inline DensityMatrix qubit_density(double z0, double z1) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = z0;
  m(1, 1) = z1;
  return validate_density(m, {2});
}

}  // namespace qtest
