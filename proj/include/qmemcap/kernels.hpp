#pragma once

#include <utility>
#include <vector>

#include "qmemcap/types.hpp"

// Hot loops with an OpenMP version and a plain serial reference. The serial
// versions exist for the equivalence tests and the benchmark.
namespace qmemcap::kernels {

// sum_i conj(K_i) (x) K_i
Mat transfer_from_kraus(const std::vector<Mat>& kraus);
Mat transfer_from_kraus_serial(const std::vector<Mat>& kraus);

// Largest relative residual ||(1 - Q Q^+) vec(A_i A_j)|| / (||A_i|| ||A_j||) over the
// given index pairs; q has orthonormal columns spanning the candidate algebra.
double product_residual(const std::vector<Mat>& mats, const Mat& q,
                        const std::vector<std::pair<int, int>>& pairs);
double product_residual_serial(const std::vector<Mat>& mats, const Mat& q,
                               const std::vector<std::pair<int, int>>& pairs);

// Columns vec(K_i^+ X_l K_j) over all i, j, l; one operator-system chain step.
Mat sandwich_columns(const std::vector<Mat>& kraus, const std::vector<Mat>& xs);
Mat sandwich_columns_serial(const std::vector<Mat>& kraus, const std::vector<Mat>& xs);

}  // namespace qmemcap::kernels
