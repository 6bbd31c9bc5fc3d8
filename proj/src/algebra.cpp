#include "qmemcap/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmemcap/kernels.hpp"
#include "qmemcap/linalg.hpp"

namespace qmemcap {

namespace {

constexpr int kMaxPairs = 4096;

RVec real_pack(const Mat& h) {
  RVec v(2 * h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    v(2 * i) = h.data()[i].real();
    v(2 * i + 1) = h.data()[i].imag();
  }
  return v;
}

Mat real_unpack(const RVec& v, Eigen::Index rows) {
  Mat h(rows, rows);
  for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = cplx(v(2 * i), v(2 * i + 1));
  return h;
}

Mat generic_element(const std::vector<Mat>& basis, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat a = Mat::Zero(basis[0].rows(), basis[0].cols());
  for (const auto& h : basis) a += n01(rng) * h;
  return herm_part(a);
}

struct DrawFailure {
  std::string why;
};

// Polar unitary part via SVD; fails if the matrix is close to singular.
Mat polar_unitary(const Mat& x) {
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  if (s(s.size() - 1) < 1e-8 * std::max(1.0, s(0))) throw DrawFailure{"near-singular block coupling"};
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Basis of the center (as Hermitian-basis coefficient vectors, columns).
Mat center_coefficients(const std::vector<Mat>& basis, std::mt19937_64& rng) {
  const Eigen::Index s = basis[0].rows();
  const Eigen::Index r = static_cast<Eigen::Index>(basis.size());
  const int probes = 3;
  std::vector<Mat> g;
  for (int t = 0; t < probes; ++t) g.push_back(generic_element(basis, rng));
  Mat m(probes * s * s, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (int t = 0; t < probes; ++t) {
      Mat c = basis[j] * g[t] - g[t] * basis[j];
      m.block(t * s * s, j, s * s, 1) = vec(c);
    }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  // basis elements have unit norm, so commutators are O(1) unless central
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * std::max(1.0, sv(0))) ++rank;
  return svd.matrixV().rightCols(r - rank);
}

AlgebraDecomposition decompose_once(const std::vector<Mat>& basis, std::mt19937_64& rng) {
  const Eigen::Index s = basis[0].rows();
  AlgebraDecomposition out;
  out.algebra_dim = static_cast<int>(basis.size());

  Mat zc = center_coefficients(basis, rng);
  out.center_dim = static_cast<int>(zc.cols());
  if (out.center_dim == 0) throw DrawFailure{"empty center"};

  Mat w = complex_gaussian(static_cast<int>(zc.cols()), 1, rng);
  Vec coeff = zc * w.col(0);
  Mat z = Mat::Zero(s, s);
  for (size_t j = 0; j < basis.size(); ++j) z += coeff(j) * basis[j];
  z = herm_part(z);
  Eigen::SelfAdjointEigenSolver<Mat> ez(z);
  auto central = cluster_sorted(ez.eigenvalues());
  if (static_cast<int>(central.size()) != out.center_dim) {
    std::ostringstream os;
    os << "central element has " << central.size() << " eigenvalue clusters, center has dimension "
       << out.center_dim;
    throw DrawFailure{os.str()};
  }

  const Mat a = generic_element(basis, rng);
  const Mat b = generic_element(basis, rng);
  int total = 0;
  for (const auto& cl : central) {
    Mat p(s, static_cast<Eigen::Index>(cl.size()));
    for (size_t c = 0; c < cl.size(); ++c) p.col(c) = ez.eigenvectors().col(cl[c]);
    Mat ak = herm_part(p.adjoint() * a * p);
    Mat bk = p.adjoint() * b * p;
    Eigen::SelfAdjointEigenSolver<Mat> ea(ak);
    auto groups = cluster_sorted(ea.eigenvalues());
    const int dk = static_cast<int>(groups.size());
    const int nk = static_cast<int>(cl.size());
    if (nk % dk != 0) throw DrawFailure{"uneven eigenvalue multiplicities inside a block"};
    const int mk = nk / dk;
    for (const auto& g : groups)
      if (static_cast<int>(g.size()) != mk) throw DrawFailure{"uneven eigenvalue multiplicities inside a block"};

    std::vector<Mat> e(dk);
    for (int i = 0; i < dk; ++i) {
      e[i].resize(nk, mk);
      for (int j = 0; j < mk; ++j) e[i].col(j) = ea.eigenvectors().col(groups[i][j]);
    }
    Mat iso(s, static_cast<Eigen::Index>(dk) * mk);
    for (int i = 0; i < dk; ++i) {
      Mat f = (i == 0) ? e[0] : Mat(e[i] * polar_unitary(e[i].adjoint() * bk * e[0]));
      iso.middleCols(static_cast<Eigen::Index>(i) * mk, mk) = p * f;
    }
    out.blocks.push_back({dk, mk, iso});
    total += dk * dk;
  }
  if (total != out.algebra_dim) {
    std::ostringstream os;
    os << "block dimensions account for " << total << " of " << out.algebra_dim << " algebra dimensions";
    throw DrawFailure{os.str()};
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> cluster_sorted(const RVec& ev, double rel, double abs_floor) {
  std::vector<std::vector<int>> out;
  if (ev.size() == 0) return out;
  const double spread = ev(ev.size() - 1) - ev(0);
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double gap = std::max(rel * spread, abs_floor * scale);
  out.push_back({0});
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev(i) - ev(i - 1) > gap)
      out.push_back({static_cast<int>(i)});
    else
      out.back().push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<Mat> hermitian_basis(const std::vector<Mat>& ms, double rel_cut, int expected_dim) {
  if (ms.empty()) return {};
  const Eigen::Index s = ms[0].rows();
  RMat cols(2 * s * s, 2 * static_cast<Eigen::Index>(ms.size()));
  const cplx i2(0.0, 2.0);
  for (size_t k = 0; k < ms.size(); ++k) {
    cols.col(2 * k) = real_pack(0.5 * (ms[k] + ms[k].adjoint()));
    cols.col(2 * k + 1) = real_pack((ms[k] - ms[k].adjoint()) / i2);
  }
  // BDCSVD returns NaN columns on some exactly rank-deficient inputs
  Eigen::JacobiSVD<RMat> svd(cols, Eigen::ComputeThinU);
  const RVec& sv = svd.singularValues();
  int r = 0;
  if (expected_dim > 0) {
    r = std::min<int>(expected_dim, static_cast<int>(sv.size()));
  } else {
    while (r < sv.size() && sv(r) > rel_cut * sv(0)) ++r;
  }
  std::vector<Mat> out;
  for (int k = 0; k < r; ++k) out.push_back(herm_part(real_unpack(svd.matrixU().col(k), s)));
  return out;
}

double closure_residual(const std::vector<Mat>& basis, std::mt19937_64& rng) {
  if (basis.empty()) return 0.0;
  const int r = static_cast<int>(basis.size());
  Mat q(basis[0].size(), r);
  for (int j = 0; j < r; ++j) q.col(j) = vec(basis[j]);
  std::vector<std::pair<int, int>> pairs;
  if (static_cast<long>(r) * r <= kMaxPairs) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) pairs.emplace_back(i, j);
  } else {
    std::uniform_int_distribution<int> pick(0, r - 1);
    for (int k = 0; k < kMaxPairs; ++k) pairs.emplace_back(pick(rng), pick(rng));
  }
  return kernels::product_residual(basis, q, pairs);
}

AlgebraDecomposition decompose_star_algebra(const std::vector<Mat>& basis, std::mt19937_64& rng,
                                            double closure_tol) {
  if (basis.empty()) throw Error(ErrorKind::InvalidArgument, "empty algebra basis");
  const double res = closure_residual(basis, rng);
  if (res > closure_tol) {
    std::ostringstream os;
    os << "span is not closed under multiplication (residual " << res << ")";
    throw Error(ErrorKind::AlgebraClosureFailure, os.str());
  }
  std::string last;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      AlgebraDecomposition out = decompose_once(basis, rng);
      out.closure_residual = res;
      return out;
    } catch (const DrawFailure& f) {
      last = f.why;
    }
  }
  throw Error(ErrorKind::DegenerateSample, "generic-element sampling failed twice: " + last);
}

}  // namespace qmemcap
