#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "qmemcap/types.hpp"

namespace qmemcap {

using SpMat = Eigen::SparseMatrix<cplx>;

// One constraint S(x) = c + unvec(a x) >= 0, with c Hermitian (m x m) and the
// columns of a (m^2 x N) holding vec of Hermitian matrices.
struct LmiBlock {
  Mat c;
  SpMat a;
};

struct LmiResult {
  RVec x;
  std::vector<Mat> slacks;
  std::vector<Mat> duals;  // S_k^{-1} / t on the central path
  double barrier_gap = 0.0;
  bool converged = false;
};

// min cost.x s.t. every block is PSD, by following the log-barrier central
// path from the strictly feasible x0. Stops when sum_k m_k / t <= gap_tol.
LmiResult lmi_minimize(const RVec& cost, const std::vector<LmiBlock>& blocks, RVec x0, double gap_tol,
                       int max_outer = 60);

// Orthonormal real basis of the n x n Hermitian matrices: diagonal units,
// then (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2 for i < j.
std::vector<Mat> hermitian_units(int n);
// coordinates of a Hermitian matrix in hermitian_units(n)
RVec hermitian_coords(const Mat& x);
Mat from_hermitian_coords(const RVec& c, int n);

}  // namespace qmemcap
