#pragma once

#include <random>
#include <vector>

#include "qmemcap/types.hpp"

namespace qmemcap {

// One simple summand B(C^d) (x) 1_m of a finite-dimensional *-algebra.
// isometry is ambient x (d*m); column i*m + j is e_i (x) f_j.
struct AlgebraBlock {
  int d = 0;
  int m = 0;
  Mat isometry;
};

struct AlgebraDecomposition {
  std::vector<AlgebraBlock> blocks;
  int algebra_dim = 0;
  int center_dim = 0;
  double closure_residual = 0.0;
};

// Hermitian basis of span{ms}, orthonormal for the trace inner product, hence
// also an orthonormal complex basis of the (assumed *-closed) span. If
// expected_dim > 0, exactly that many elements are kept.
std::vector<Mat> hermitian_basis(const std::vector<Mat>& ms, double rel_cut = 1e-9, int expected_dim = -1);

// Max relative residual of products of basis pairs outside the span. All
// pairs are checked up to 4096 of them, otherwise 4096 random pairs.
double closure_residual(const std::vector<Mat>& herm_basis, std::mt19937_64& rng);

// Wedderburn decomposition of a unital *-algebra given by an orthonormal
// Hermitian basis. Throws AlgebraClosureFailure when the span is not closed
// within closure_tol and DegenerateSample after two unlucky draws.
AlgebraDecomposition decompose_star_algebra(const std::vector<Mat>& herm_basis, std::mt19937_64& rng,
                                            double closure_tol = 1e-6);

// Eigenvalue groups of a sorted ascending list; gaps below
// max(rel * spread, abs_floor) are merged.
std::vector<std::vector<int>> cluster_sorted(const RVec& ev, double rel = 1e-6, double abs_floor = 1e-9);

}  // namespace qmemcap
