#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmemcap/chanrep.hpp"
#include "qmemcap/spectral.hpp"

namespace qmemcap {

struct Block {
  int d = 0;      // dim H_{k,1}, the protected factor
  int m = 0;      // dim H_{k,2}
  Mat delta;      // m x m, positive definite
  Mat isometry;   // dim x (d*m), column i*m + j is e_i (x) f_j
};

// H = H_0 (+) sum_k H_{k,1} (x) H_{k,2}. The peripheral dynamics is
//   Psi(W_k (x (x) delta_k) W_k^+) = W_r (U_r^+ x U_r (x) delta_r) W_r^+
// with r = inverse_permutation[k], i.e. permutation[r] = k.
struct PeripheralStructure {
  int dim = 0;
  int h0_dim = 0;
  std::vector<Block> blocks;
  std::vector<int> permutation;
  std::vector<Mat> unitaries;
  std::vector<cplx> peripheral_eigenvalues;
  bool has_dynamics = false;
  Mat rho_bar;             // P(1/d)
  Mat projector_transfer;  // T_P
  Mat range_basis;         // orthonormal columns spanning range(T_P)
  std::vector<std::string> warnings;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  std::vector<int> block_dims() const;
  std::vector<int> multiplicities() const;
  int max_d() const;
  int sum_d() const;
  int sum_d2() const;
};

constexpr double kTolPd = 1e-9;

std::vector<Mat> peripheral_basis(const Channel& ch, const PeripheralProjector& p);
PeripheralStructure decompose_structure(const Channel& ch, const PeripheralProjector& p, std::mt19937_64& rng);
PeripheralStructure extract_dynamics(const Channel& ch, PeripheralStructure ps);
Channel reversal_channel(const Channel& ch, const PeripheralStructure& ps);

// W_k (x (x) delta_k) W_k^+
Mat embed_block(const PeripheralStructure& ps, int k, const Mat& x);
// Tr_2 W_k^+ X W_k
Mat compress_block(const PeripheralStructure& ps, int k, const Mat& x);

// Principal-angle distance between range(P) and span{W_k (E_ab (x) delta_k) W_k^+}.
double reconstruction_distance(const PeripheralStructure& ps);

// spectrum + projector + decomposition + dynamics in one call
PeripheralStructure analyze_structure(const Channel& ch, std::mt19937_64& rng,
                                      double tol_peri = kDefaultTolPeri, bool strict = false);

nlohmann::json to_json(const PeripheralStructure& ps);

}  // namespace qmemcap
