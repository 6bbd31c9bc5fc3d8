#include "qmemcap/chanrep.hpp"

#include <cmath>
#include <sstream>

#include "qmemcap/kernels.hpp"
#include "qmemcap/linalg.hpp"

namespace qmemcap {

Channel::Channel(std::vector<Mat> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorKind::InvalidArgument, "channel needs at least one Kraus operator");
  dout_ = static_cast<int>(kraus_[0].rows());
  din_ = static_cast<int>(kraus_[0].cols());
  for (const auto& k : kraus_)
    if (k.rows() != dout_ || k.cols() != din_)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators have inconsistent shapes");
  transfer_ = kernels::transfer_from_kraus(kraus_);
  choi_ = Mat::Zero(din_ * dout_, din_ * dout_);
  for (const auto& k : kraus_) {
    Vec v = vec(k);
    choi_.noalias() += v * v.adjoint();
  }
}

Channel validate_channel(std::vector<Mat> kraus, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (kraus.empty()) throw Error(ErrorKind::DimensionMismatch, "empty Kraus list");
  const auto r = kraus[0].rows(), c = kraus[0].cols();
  if (r == 0 || c == 0) throw Error(ErrorKind::DimensionMismatch, "empty Kraus operator");
  Mat s = Mat::Zero(c, c);
  for (size_t i = 0; i < kraus.size(); ++i) {
    const Mat& k = kraus[i];
    if (k.rows() != r || k.cols() != c) {
      std::ostringstream os;
      os << "Kraus operator " << i << " is " << k.rows() << "x" << k.cols() << ", expected " << r
         << "x" << c;
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    if (!k.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite Kraus entry");
    s.noalias() += k.adjoint() * k;
  }
  double dev = (s - Mat::Identity(c, c)).norm();
  if (dev > tol) {
    std::ostringstream os;
    os << "||sum K^+K - 1||_F = " << dev << " exceeds " << tol;
    throw Error(ErrorKind::NotTracePreserving, os.str());
  }
  return Channel(std::move(kraus));
}

Mat to_choi(const Channel& ch) { return ch.choi(); }

Mat to_transfer(const Channel& ch) {
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "transfer matrix of a non-square channel");
  return ch.transfer();
}

Mat choi_from_transfer(const Mat& t, int din, int dout) {
  Mat j(din * dout, din * dout);
  for (int i = 0; i < din; ++i)
    for (int jj = 0; jj < din; ++jj)
      for (int a = 0; a < dout; ++a)
        for (int b = 0; b < dout; ++b) j(i * dout + a, jj * dout + b) = t(a + b * dout, i + jj * din);
  return j;
}

Mat transfer_from_choi(const Mat& j, int din, int dout) {
  Mat t(dout * dout, din * din);
  for (int i = 0; i < din; ++i)
    for (int jj = 0; jj < din; ++jj)
      for (int a = 0; a < dout; ++a)
        for (int b = 0; b < dout; ++b) t(a + b * dout, i + jj * din) = j(i * dout + a, jj * dout + b);
  return t;
}

std::vector<Mat> choi_to_kraus(const Mat& j, int din, int dout, double rel_cut, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(j));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "Choi eigendecomposition failed");
  const RVec& ev = es.eigenvalues();
  double top = ev.maxCoeff();
  if (ev.minCoeff() < -psd_tol * std::max(1.0, top)) {
    std::ostringstream os;
    os << "Choi matrix has eigenvalue " << ev.minCoeff();
    throw Error(ErrorKind::ProjectorNotCP, os.str());
  }
  std::vector<Mat> out;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) <= rel_cut * top) break;
    out.push_back(std::sqrt(ev(i)) * unvec(es.eigenvectors().col(i), dout, din));
  }
  if (out.empty()) out.push_back(Mat::Zero(dout, din));
  return out;
}

Channel from_choi(const Mat& j, int din, int dout, double psd_tol) {
  return Channel(choi_to_kraus(j, din, dout, 1e-12, psd_tol));
}

Channel from_transfer(const Mat& t, int din, int dout, double psd_tol) {
  return from_choi(choi_from_transfer(t, din, dout), din, dout, psd_tol);
}

Channel compose(const Channel& a, const Channel& b) {
  if (a.dim_in() != b.dim_out())
    throw Error(ErrorKind::DimensionMismatch, "compose: a.dim_in != b.dim_out");
  std::vector<Mat> ks;
  ks.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& x : a.kraus())
    for (const auto& y : b.kraus()) ks.push_back(x * y);
  return Channel(std::move(ks));
}

Channel power(const Channel& ch, int t) {
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "power of a non-square channel");
  if (t < 0) throw Error(ErrorKind::InvalidArgument, "negative power");
  const int d = ch.dim_in();
  if (t == 0) return identity_channel(d);
  if (t == 1) return ch;
  Mat tp = Mat::Identity(d * d, d * d);
  Mat base = ch.transfer();
  int e = t;
  while (e > 0) {
    if (e & 1) tp = tp * base;
    base = base * base;
    e >>= 1;
  }
  return from_transfer(tp, d, d);
}

Channel tensor(const Channel& a, const Channel& b) {
  std::vector<Mat> ks;
  ks.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& x : a.kraus())
    for (const auto& y : b.kraus()) ks.push_back(kron(x, y));
  return Channel(std::move(ks));
}

Mat stinespring(const Channel& ch) {
  const int n = static_cast<int>(ch.kraus().size());
  const int dout = ch.dim_out();
  Mat v = Mat::Zero(dout * n, ch.dim_in());
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < dout; ++b) v.row(b * n + i) = ch.kraus()[i].row(b);
  return v;
}

Channel complementary_channel(const Channel& ch) {
  const int n = static_cast<int>(ch.kraus().size());
  std::vector<Mat> fs;
  fs.reserve(ch.dim_out());
  for (int b = 0; b < ch.dim_out(); ++b) {
    Mat f(n, ch.dim_in());
    for (int i = 0; i < n; ++i) f.row(i) = ch.kraus()[i].row(b);
    fs.push_back(std::move(f));
  }
  return Channel(std::move(fs));
}

Channel adjoint_channel(const Channel& ch) {
  std::vector<Mat> ks;
  for (const auto& k : ch.kraus()) ks.push_back(k.adjoint());
  return Channel(std::move(ks));
}

Mat apply(const Channel& ch, const Mat& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in())
    throw Error(ErrorKind::DimensionMismatch, "apply: operator does not match channel input");
  Mat out = Mat::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

Mat apply_second(const Channel& ch, const Mat& x, int dr) {
  if (x.rows() != dr * ch.dim_in())
    throw Error(ErrorKind::DimensionMismatch, "apply_second: bipartite dimension mismatch");
  const int dout = ch.dim_out();
  Mat out = Mat::Zero(dr * dout, dr * dout);
  for (const auto& k : ch.kraus()) {
    Mat big = kron(Mat::Identity(dr, dr), k);
    out.noalias() += big * x * big.adjoint();
  }
  return out;
}

void check_density(const Mat& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols()) throw Error(ErrorKind::DimensionMismatch, "density matrix must be square");
  if (!rho.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite density entry");
  if ((rho - rho.adjoint()).norm() > tol.herm)
    throw Error(ErrorKind::NumericalNonHermitian, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > tol.trace)
    throw Error(ErrorKind::InvalidArgument, "density matrix trace differs from 1");
  if (herm_eigenvalues(rho).minCoeff() < -tol.psd)
    throw Error(ErrorKind::InvalidArgument, "density matrix is not positive semidefinite");
}

Channel identity_channel(int d) { return Channel({Mat::Identity(d, d)}); }

Channel unitary_channel(const Mat& u) { return Channel({u}); }

Channel replacer_channel(int din, const Mat& sigma) {
  // X -> Tr(X) sigma, Kraus sqrt(s_a)|a><i| over the eigenbasis of sigma
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(sigma));
  const int dout = static_cast<int>(sigma.rows());
  std::vector<Mat> ks;
  for (int a = 0; a < dout; ++a) {
    double s = es.eigenvalues()(a);
    if (s <= 0) continue;
    for (int i = 0; i < din; ++i) {
      Mat k = Mat::Zero(dout, din);
      k.col(i) = std::sqrt(s) * es.eigenvectors().col(a);
      ks.push_back(std::move(k));
    }
  }
  return Channel(std::move(ks));
}

Channel random_channel(int din, int dout, int kraus_count, std::mt19937_64& rng) {
  Mat v = haar_isometry(dout * kraus_count, din, rng);
  std::vector<Mat> ks(kraus_count, Mat(dout, din));
  for (int i = 0; i < kraus_count; ++i)
    for (int b = 0; b < dout; ++b) ks[i].row(b) = v.row(b * kraus_count + i);
  return Channel(std::move(ks));
}

Channel random_channel(int d, int kraus_count, std::mt19937_64& rng) {
  return random_channel(d, d, kraus_count, rng);
}

Mat pauli(char which) {
  Mat p = Mat::Zero(2, 2);
  switch (which) {
    case 'i': p(0, 0) = 1; p(1, 1) = 1; break;
    case 'x': p(0, 1) = 1; p(1, 0) = 1; break;
    case 'y': p(0, 1) = cplx(0, -1); p(1, 0) = cplx(0, 1); break;
    case 'z': p(0, 0) = 1; p(1, 1) = -1; break;
    default: throw Error(ErrorKind::InvalidArgument, "unknown Pauli label");
  }
  return p;
}

}  // namespace qmemcap
