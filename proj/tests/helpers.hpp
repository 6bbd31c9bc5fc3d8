#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qmemcap/chanrep.hpp"
#include "qmemcap/linalg.hpp"

namespace testutil {

using qmemcap::Channel;
using qmemcap::cplx;
using qmemcap::Mat;

inline Mat ket_bra(int d, int i, int j) { return qmemcap::mat_unit(d, i, j); }

// Pauli-form depolarizing channel, written out independently of the zoo
inline Channel pauli_depolarizing(double p) {
  return Channel({std::sqrt(1.0 - 3.0 * p / 4.0) * qmemcap::pauli('i'), std::sqrt(p / 4.0) * qmemcap::pauli('x'),
                  std::sqrt(p / 4.0) * qmemcap::pauli('y'), std::sqrt(p / 4.0) * qmemcap::pauli('z')});
}

// Phi(X) by explicit Kraus sums, without the library's transfer matrices
inline Mat kraus_apply(const Channel& ch, const Mat& x) {
  Mat out = Mat::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out += k * x * k.adjoint();
  return out;
}

// Direct sum of a unitary block on C^du and a mixing random channel on
// C^dm; the periphery is then nontrivial by construction.
inline Channel unitary_plus_mixing(int du, int dm, std::mt19937_64& rng) {
  const int d = du + dm;
  Mat u = qmemcap::haar_unitary(du, rng);
  Channel mix = qmemcap::random_channel(dm, 2, rng);
  std::vector<Mat> kraus;
  Mat k0 = Mat::Zero(d, d);
  k0.topLeftCorner(du, du) = u;
  kraus.push_back(k0);
  for (const auto& k : mix.kraus()) {
    Mat kk = Mat::Zero(d, d);
    kk.bottomRightCorner(dm, dm) = k;
    kraus.push_back(kk);
  }
  return Channel(kraus);
}

}  // namespace testutil
