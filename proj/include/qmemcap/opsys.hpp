#pragma once

#include <random>
#include <vector>

#include <json.hpp>

#include "qmemcap/chanrep.hpp"

namespace qmemcap {

struct OperatorSystemSpace {
  int dim = 0;
  Mat basis;  // dim^2 x n, orthonormal columns (vec of the basis matrices)
  bool contains_identity = false;

  int size() const { return static_cast<int>(basis.cols()); }
  std::vector<Mat> matrices() const;
};

// Operator-system convention: S = sum_k 1_{d'_k} (x) B(C^{m'_k}), so the
// multiplicity sits in the first slot.
struct AlgebraBlockStructure {
  struct Entry {
    int mult = 0;   // d'_k
    int size = 0;   // m'_k
    Mat isometry;   // column a*size + b is e_a (x) f_b
  };
  int ambient = 0;
  std::vector<Entry> blocks;
};

struct IndependenceNumbers {
  long alpha = 0;
  long alpha_p = 0;
  long alpha_q = 0;
  long alpha_ea = 0;
};

struct ChainResult {
  std::vector<OperatorSystemSpace> chain;  // chain[l-1] = S_{Psi^l}
  int stabilization_index = 0;             // first l with S_{Psi^l} = S_{Psi^{l+1}}
};

struct StarAlgebraCheck {
  bool is_algebra = false;
  double residual = 0.0;
};

struct ZeroErrorReport {
  // bits
  double c0 = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;
  double cea0 = 0.0;
  IndependenceNumbers numbers;
  AlgebraBlockStructure structure;
  int stabilization_index = 0;
  double stabilization_distance = 0.0;
  OperatorSystemSpace stabilized;
  std::vector<int> chain_dims;
};

constexpr double kSubspaceTol = 1e-7;

OperatorSystemSpace make_operator_system(const std::vector<Mat>& spanning, int d, double rel_cut = 1e-10);
OperatorSystemSpace operator_system(const Channel& ch);
OperatorSystemSpace operator_system_of(const std::vector<Mat>& kraus);
ChainResult opsys_chain(const Channel& ch, int max_l);
StarAlgebraCheck is_star_algebra(const OperatorSystemSpace& s, double tol = 1e-7, unsigned long seed = 7);
AlgebraBlockStructure algebra_block_structure(const OperatorSystemSpace& s, std::mt19937_64& rng);
IndependenceNumbers independence_numbers(const AlgebraBlockStructure& a);
ZeroErrorReport zero_error_capacities(const Channel& ch, std::mt19937_64& rng, double tol_peri = 1e-8);

// Orthonormal basis of the tensor product of two operator systems.
OperatorSystemSpace tensor_systems(const OperatorSystemSpace& a, const OperatorSystemSpace& b);
// V^+ S V for an isometry V
OperatorSystemSpace compress_system(const OperatorSystemSpace& s, const Mat& v);

nlohmann::json to_json(const OperatorSystemSpace& s);
nlohmann::json to_json(const ZeroErrorReport& z);

}  // namespace qmemcap
