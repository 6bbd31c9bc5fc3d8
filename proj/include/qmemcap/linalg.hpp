#pragma once

#include <functional>
#include <random>

#include "qmemcap/types.hpp"

namespace qmemcap {

// Column-stacking vectorization: vec(X)[i + j*rows] = X(i, j).
Vec vec(const Mat& x);
Mat unvec(const Vec& v, int rows, int cols);
Mat unvec(const Vec& v, int d);

Mat kron(const Mat& a, const Mat& b);
Mat dagger(const Mat& x);
Mat herm_part(const Mat& x);

// X on C^{d1} (x) C^{d2}
Mat ptrace_first(const Mat& x, int d1, int d2);
Mat ptrace_second(const Mat& x, int d1, int d2);

Mat mat_unit(int d, int i, int j);

// f applied to the eigenvalues of the Hermitian part of x
Mat herm_func(const Mat& x, const std::function<double(double)>& f);
Mat psd_sqrt(const Mat& x);
RVec herm_eigenvalues(const Mat& x);

double trace_norm(const Mat& x);
double op_norm(const Mat& x);

// Orthonormal (Frobenius) basis of span{ms}, as columns of a d*d-row matrix.
// Singular values below rel_cut * sigma_max are dropped.
Mat span_basis(const std::vector<Mat>& ms, double rel_cut = 1e-10);
Mat span_basis_cols(const Mat& cols, double rel_cut = 1e-10);
std::vector<Mat> columns_to_matrices(const Mat& q, int d);

// Largest principal-angle sine between the column spans of orthonormal qa, qb.
// Returns 1 when the dimensions differ.
double subspace_distance(const Mat& qa, const Mat& qb);
// ||(1 - qb qb^+) qa||_2: zero iff span(qa) is inside span(qb)
double containment_residual(const Mat& qa, const Mat& qb);

Mat complex_gaussian(int rows, int cols, std::mt19937_64& rng);
Mat haar_unitary(int d, std::mt19937_64& rng);
// Haar-random isometry C^cols -> C^rows
Mat haar_isometry(int rows, int cols, std::mt19937_64& rng);
Mat random_density(int d, std::mt19937_64& rng, int rank = -1);

bool all_finite(const Mat& x);

}  // namespace qmemcap
