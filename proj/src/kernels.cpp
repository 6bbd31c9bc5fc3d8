#include "qmemcap/kernels.hpp"

#include <algorithm>

#include "qmemcap/linalg.hpp"

namespace qmemcap::kernels {

namespace {

void transfer_column_block(const std::vector<Mat>& kraus, int j, Mat& t) {
  const int dout = static_cast<int>(kraus[0].rows());
  const int din = static_cast<int>(kraus[0].cols());
  for (const auto& k : kraus)
    for (int i = 0; i < din; ++i) {
      const int col = i + j * din;
      for (int b = 0; b < dout; ++b) {
        const cplx cb = std::conj(k(b, j));
        if (cb == cplx(0.0)) continue;
        for (int a = 0; a < dout; ++a) t(a + b * dout, col) += cb * k(a, i);
      }
    }
}

double pair_residual(const std::vector<Mat>& mats, const Mat& q, int i, int j) {
  Mat p = mats[i] * mats[j];
  // scale by the factor norms; products that nearly vanish stay small
  double nrm = mats[i].norm() * mats[j].norm();
  if (nrm == 0.0) return 0.0;
  Vec v = vec(p);
  Vec r = v - q * (q.adjoint() * v);
  return r.norm() / nrm;
}

}  // namespace

Mat transfer_from_kraus(const std::vector<Mat>& kraus) {
  const int dout = static_cast<int>(kraus[0].rows());
  const int din = static_cast<int>(kraus[0].cols());
  Mat t = Mat::Zero(dout * dout, din * din);
#pragma omp parallel for schedule(static) if (din * dout > 16)
  for (int j = 0; j < din; ++j) transfer_column_block(kraus, j, t);
  return t;
}

Mat transfer_from_kraus_serial(const std::vector<Mat>& kraus) {
  const int dout = static_cast<int>(kraus[0].rows());
  const int din = static_cast<int>(kraus[0].cols());
  Mat t = Mat::Zero(dout * dout, din * din);
  for (int j = 0; j < din; ++j) transfer_column_block(kraus, j, t);
  return t;
}

double product_residual(const std::vector<Mat>& mats, const Mat& q,
                        const std::vector<std::pair<int, int>>& pairs) {
  double worst = 0.0;
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(max : worst)
  for (long p = 0; p < n; ++p)
    worst = std::max(worst, pair_residual(mats, q, pairs[p].first, pairs[p].second));
  return worst;
}

double product_residual_serial(const std::vector<Mat>& mats, const Mat& q,
                               const std::vector<std::pair<int, int>>& pairs) {
  double worst = 0.0;
  for (const auto& [i, j] : pairs) worst = std::max(worst, pair_residual(mats, q, i, j));
  return worst;
}

Mat sandwich_columns(const std::vector<Mat>& kraus, const std::vector<Mat>& xs) {
  const long n = static_cast<long>(kraus.size());
  const long m = static_cast<long>(xs.size());
  const int d = static_cast<int>(kraus[0].cols());
  Mat cols(static_cast<Eigen::Index>(d) * d, n * n * m);
#pragma omp parallel for schedule(static) collapse(2)
  for (long i = 0; i < n; ++i)
    for (long l = 0; l < m; ++l) {
      Mat left = kraus[i].adjoint() * xs[l];
      for (long j = 0; j < n; ++j) cols.col((i * n + j) * m + l) = vec(left * kraus[j]);
    }
  return cols;
}

Mat sandwich_columns_serial(const std::vector<Mat>& kraus, const std::vector<Mat>& xs) {
  const long n = static_cast<long>(kraus.size());
  const long m = static_cast<long>(xs.size());
  const int d = static_cast<int>(kraus[0].cols());
  Mat cols(static_cast<Eigen::Index>(d) * d, n * n * m);
  for (long i = 0; i < n; ++i)
    for (long l = 0; l < m; ++l) {
      Mat left = kraus[i].adjoint() * xs[l];
      for (long j = 0; j < n; ++j) cols.col((i * n + j) * m + l) = vec(left * kraus[j]);
    }
  return cols;
}

}  // namespace qmemcap::kernels
