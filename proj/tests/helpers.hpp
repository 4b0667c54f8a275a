#pragma once

#include <cmath>
#include <vector>

#include "oneshot/pmf.hpp"
#include "oneshot/rng.hpp"

namespace testutil {

// Dirichlet(1,...,1) via exponential spacings; full support.
inline oneshot::Pmf random_pmf(oneshot::RngStream& rng, std::size_t k) {
  std::vector<double> mass(k);
  double sum = 0.0;
  for (double& m : mass) {
    m = -std::log(1.0 - rng.next_unit());
    sum += m;
  }
  for (double& m : mass) m /= sum;
  return oneshot::Pmf(oneshot::Alphabet::indexed(k), std::move(mass));
}

inline oneshot::JointPmf random_joint(oneshot::RngStream& rng, std::size_t nx, std::size_t ny) {
  std::vector<double> mass(nx * ny);
  double sum = 0.0;
  for (double& m : mass) {
    m = -std::log(1.0 - rng.next_unit());
    sum += m;
  }
  for (double& m : mass) m /= sum;
  return oneshot::JointPmf({oneshot::Axis{"X", oneshot::Alphabet::indexed(nx, "x")},
                            oneshot::Axis{"Y", oneshot::Alphabet::indexed(ny, "y")}},
                           std::move(mass));
}

inline oneshot::Pmf bern(double p) {
  return oneshot::Pmf(oneshot::Alphabet::binary(), {1.0 - p, p});
}

// X uniform bit, Y = X xor noise(flip); mass order (00, 01, 10, 11).
inline oneshot::JointPmf correlated_bits(double flip) {
  const double agree = (1.0 - flip) / 2.0, differ = flip / 2.0;
  return oneshot::JointPmf({oneshot::Axis{"X", oneshot::Alphabet::binary()},
                            oneshot::Axis{"Y", oneshot::Alphabet::binary()}},
                           {agree, differ, differ, agree});
}

inline oneshot::JointPmf independent_bits() { return correlated_bits(0.5); }

}  // namespace testutil
