#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qmemcap/chanrep.hpp"

namespace qmemcap {

struct SpectrumReport {
  // sorted by descending modulus, then by argument in (-pi, pi]
  std::vector<cplx> eigenvalues;
  std::vector<int> peripheral_indices;
  double mu = 0.0;
  double gap_margin = 0.0;
  std::vector<std::string> warnings;
};

struct PeripheralProjector {
  Channel projector_channel;
  int rank = 0;
  Mat transfer;          // T_P, exact spectral projector
  Mat range_basis;       // d^2 x rank, orthonormal, spans range(T_P)
  std::vector<cplx> peripheral_eigenvalues;
  double mu = 0.0;
  double gap_margin = 0.0;
  std::vector<std::string> warnings;
};

constexpr double kDefaultTolPeri = 1e-8;

SpectrumReport spectrum(const Channel& ch, double tol_peri = kDefaultTolPeri, bool strict = false);
PeripheralProjector peripheral_projector(const Channel& ch, double tol_peri = kDefaultTolPeri,
                                         bool strict = false);
Channel asymptotic_part(const Channel& ch, const PeripheralProjector& p);
Mat asymptotic_transfer(const Channel& ch, const PeripheralProjector& p);
double spectral_gap(const Channel& ch, double tol_peri = kDefaultTolPeri);

nlohmann::json to_json(const SpectrumReport& s);

}  // namespace qmemcap
