#include "qmemcap/linalg.hpp"

#include <cmath>

namespace qmemcap {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NonSquareChannel: return "NonSquareChannel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownChannel: return "UnknownChannel";
    case ErrorKind::EigSolverFailure: return "EigSolverFailure";
    case ErrorKind::AmbiguousPeriphery: return "AmbiguousPeriphery";
    case ErrorKind::ProjectorNotCP: return "ProjectorNotCP";
    case ErrorKind::AlgebraClosureFailure: return "AlgebraClosureFailure";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::PermutationAmbiguity: return "PermutationAmbiguity";
    case ErrorKind::ChainNotMonotone: return "ChainNotMonotone";
    case ErrorKind::NotAlgebra: return "NotAlgebra";
    case ErrorKind::StabilizationMismatch: return "StabilizationMismatch";
    case ErrorKind::SolverNotConverged: return "SolverNotConverged";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NumericalNonHermitian: return "NumericalNonHermitian";
  }
  return "Unknown";
}

bool is_data_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotTracePreserving:
    case ErrorKind::NonSquareChannel:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::UnknownChannel:
    case ErrorKind::PreconditionViolated:
      return true;
    default:
      return false;
  }
}

Vec vec(const Mat& x) {
  return Eigen::Map<const Vec>(x.data(), x.size());
}

Mat unvec(const Vec& v, int rows, int cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Mat unvec(const Vec& v, int d) { return unvec(v, d, d); }

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat dagger(const Mat& x) { return x.adjoint(); }

Mat herm_part(const Mat& x) { return 0.5 * (x + x.adjoint()); }

Mat ptrace_first(const Mat& x, int d1, int d2) {
  Mat out = Mat::Zero(d2, d2);
  for (int k = 0; k < d1; ++k) out += x.block(k * d2, k * d2, d2, d2);
  return out;
}

Mat ptrace_second(const Mat& x, int d1, int d2) {
  Mat out(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) out(i, j) = x.block(i * d2, j * d2, d2, d2).trace();
  return out;
}

Mat mat_unit(int d, int i, int j) {
  Mat e = Mat::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

Mat herm_func(const Mat& x, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(x));
  RVec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = f(ev(i));
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat psd_sqrt(const Mat& x) {
  return herm_func(x, [](double v) { return v > 0 ? std::sqrt(v) : 0.0; });
}

RVec herm_eigenvalues(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_norm(const Mat& x) {
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues().sum();
}

double op_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues()(0);
}

Mat span_basis_cols(const Mat& cols, double rel_cut) {
  if (cols.cols() == 0) return Mat(cols.rows(), 0);
  RVec s;
  Mat u;
  Eigen::BDCSVD<Mat> svd(cols, Eigen::ComputeThinU);
  if (svd.matrixU().allFinite() && svd.singularValues().allFinite()) {
    s = svd.singularValues();
    u = svd.matrixU();
  } else {
    Eigen::JacobiSVD<Mat> jac(cols, Eigen::ComputeThinU);
    s = jac.singularValues();
    u = jac.matrixU();
  }
  if (s.size() == 0 || s(0) == 0.0) return Mat(cols.rows(), 0);
  int r = 0;
  while (r < s.size() && s(r) > rel_cut * s(0)) ++r;
  return u.leftCols(r);
}

Mat span_basis(const std::vector<Mat>& ms, double rel_cut) {
  if (ms.empty()) return Mat(0, 0);
  Mat cols(ms[0].size(), static_cast<Eigen::Index>(ms.size()));
  for (size_t i = 0; i < ms.size(); ++i) cols.col(i) = vec(ms[i]);
  return span_basis_cols(cols, rel_cut);
}

std::vector<Mat> columns_to_matrices(const Mat& q, int d) {
  std::vector<Mat> out;
  out.reserve(q.cols());
  for (Eigen::Index i = 0; i < q.cols(); ++i) out.push_back(unvec(q.col(i), d));
  return out;
}

double containment_residual(const Mat& qa, const Mat& qb) {
  if (qa.cols() == 0) return 0.0;
  if (qb.cols() == 0) return 1.0;
  Mat r = qa - qb * (qb.adjoint() * qa);
  return op_norm(r);
}

double subspace_distance(const Mat& qa, const Mat& qb) {
  if (qa.cols() != qb.cols()) return 1.0;
  return std::max(containment_residual(qa, qb), containment_residual(qb, qa));
}

Mat complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      double re = n01(rng);
      double im = n01(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Mat haar_isometry(int rows, int cols, std::mt19937_64& rng) {
  Mat g = complex_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(rows, cols);
  Mat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  // fix column phases so the distribution is Haar rather than QR-biased
  for (int j = 0; j < cols; ++j) {
    cplx rjj = r(j, j);
    double a = std::abs(rjj);
    if (a > 0) q.col(j) *= rjj / a;
  }
  return q;
}

Mat haar_unitary(int d, std::mt19937_64& rng) { return haar_isometry(d, d, rng); }

Mat random_density(int d, std::mt19937_64& rng, int rank) {
  if (rank <= 0) rank = d;
  Mat g = complex_gaussian(d, rank, rng);
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

bool all_finite(const Mat& x) { return x.allFinite(); }

}  // namespace qmemcap
