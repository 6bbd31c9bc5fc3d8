#include "qmemcap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Jacobi>

#include "qmemcap/linalg.hpp"

namespace qmemcap {

namespace {

bool is_peripheral(cplx l, double tol_peri) { return 1.0 - std::abs(l) <= tol_peri; }

// Sort by descending modulus; moduli within 1e-12 are ordered by argument.
std::vector<int> spectral_order(const std::vector<cplx>& ev) {
  std::vector<int> idx(ev.size());
  for (size_t i = 0; i < ev.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(ev[a]) > std::abs(ev[b]); });
  size_t start = 0;
  while (start < idx.size()) {
    size_t end = start + 1;
    while (end < idx.size() && std::abs(ev[idx[start]]) - std::abs(ev[idx[end]]) < 1e-12) ++end;
    std::stable_sort(idx.begin() + start, idx.begin() + end,
                     [&](int a, int b) { return std::arg(ev[a]) < std::arg(ev[b]); });
    start = end;
  }
  return idx;
}

struct Schur {
  Mat t;
  Mat q;
};

Schur complex_schur(const Mat& a) {
  Eigen::ComplexSchur<Mat> cs(a);
  if (cs.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "complex Schur did not converge");
  return {cs.matrixT(), cs.matrixU()};
}

// Adjacent swap of diagonal entries k, k+1 of an upper triangular t.
void swap_schur(Schur& s, Eigen::Index k) {
  Eigen::JacobiRotation<cplx> rot;
  rot.makeGivens(s.t(k, k + 1), s.t(k + 1, k + 1) - s.t(k, k));
  s.t.applyOnTheLeft(k, k + 1, rot.adjoint());
  s.t.applyOnTheRight(k, k + 1, rot);
  s.q.applyOnTheRight(k, k + 1, rot);
  s.t(k + 1, k) = 0.0;
}

// Move the selected eigenvalues to the leading block; returns its size.
int reorder_leading(Schur& s, double tol_peri) {
  const Eigen::Index n = s.t.rows();
  int r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!is_peripheral(s.t(i, i), tol_peri)) continue;
    for (Eigen::Index k = i - 1; k >= r; --k) swap_schur(s, k);
    ++r;
  }
  return r;
}

// Solve S11 Y - Y S22 = S12 for upper triangular S11, S22.
Mat triangular_sylvester(const Mat& s11, const Mat& s22, const Mat& s12) {
  const Eigen::Index r = s11.rows(), m = s22.rows();
  Mat y(r, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Vec rhs = s12.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += y.col(i) * s22(i, j);
    Mat a = s11;
    a.diagonal().array() -= s22(j, j);
    y.col(j) = a.triangularView<Eigen::Upper>().solve(rhs);
  }
  return y;
}

void check_gap(double gap, double tol_peri, bool strict, std::vector<std::string>& warnings) {
  if (gap >= 10.0 * tol_peri) return;
  std::ostringstream os;
  os << "gap margin " << gap << " is below 10*tol_peri; peripheral set may be misclassified";
  if (strict) throw Error(ErrorKind::AmbiguousPeriphery, os.str());
  warnings.push_back(os.str());
}

// Index of the eigenvalue nearest 1; it is 1 exactly for any channel.
int snap_unit(std::vector<cplx>& ev) {
  int best = -1;
  double dist = 1e300;
  for (size_t i = 0; i < ev.size(); ++i) {
    double e = std::abs(ev[i] - 1.0);
    if (e < dist) { dist = e; best = static_cast<int>(i); }
  }
  if (best < 0 || dist > 1e-6) throw Error(ErrorKind::EigSolverFailure, "no eigenvalue near 1; is the map trace preserving?");
  ev[best] = 1.0;
  return best;
}

}  // namespace

SpectrumReport spectrum(const Channel& ch, double tol_peri, bool strict) {
  if (!(tol_peri > 0 && tol_peri < 0.5)) throw Error(ErrorKind::InvalidArgument, "tol_peri must lie in (0, 0.5)");
  Schur s = complex_schur(to_transfer(ch));
  std::vector<cplx> raw(s.t.rows());
  for (Eigen::Index i = 0; i < s.t.rows(); ++i) raw[i] = s.t(i, i);
  snap_unit(raw);

  SpectrumReport rep;
  for (int i : spectral_order(raw)) rep.eigenvalues.push_back(raw[i]);
  double min_kept = 1e300;
  rep.mu = 0.0;
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    double a = std::abs(rep.eigenvalues[i]);
    if (is_peripheral(rep.eigenvalues[i], tol_peri)) {
      rep.peripheral_indices.push_back(static_cast<int>(i));
      min_kept = std::min(min_kept, a);
    } else {
      rep.mu = std::max(rep.mu, a);
    }
  }
  rep.gap_margin = min_kept - rep.mu;
  check_gap(rep.gap_margin, tol_peri, strict, rep.warnings);
  return rep;
}

PeripheralProjector peripheral_projector(const Channel& ch, double tol_peri, bool strict) {
  if (!(tol_peri > 0 && tol_peri < 0.5)) throw Error(ErrorKind::InvalidArgument, "tol_peri must lie in (0, 0.5)");
  const Mat t = to_transfer(ch);
  const int d = ch.dim_in();
  const Eigen::Index n = t.rows();
  Schur s = complex_schur(t);
  const int r = reorder_leading(s, tol_peri);
  if (r == 0) throw Error(ErrorKind::EigSolverFailure, "no peripheral eigenvalue found");

  PeripheralProjector p;
  p.rank = r;
  double min_kept = 1e300;
  for (int i = 0; i < r; ++i) {
    p.peripheral_eigenvalues.push_back(s.t(i, i));
    min_kept = std::min(min_kept, std::abs(s.t(i, i)));
  }
  snap_unit(p.peripheral_eigenvalues);
  p.mu = 0.0;
  for (Eigen::Index i = r; i < n; ++i) p.mu = std::max(p.mu, std::abs(s.t(i, i)));
  p.gap_margin = min_kept - p.mu;
  check_gap(p.gap_margin, tol_peri, strict, p.warnings);

  const Mat q1 = s.q.leftCols(r);
  if (r < n) {
    const Mat y = triangular_sylvester(s.t.topLeftCorner(r, r), s.t.bottomRightCorner(n - r, n - r),
                                       s.t.topRightCorner(r, n - r));
    p.transfer = q1 * (q1.adjoint() + y * s.q.rightCols(n - r).adjoint());
  } else {
    p.transfer = Mat::Identity(n, n);
  }
  p.range_basis = q1;
  p.projector_channel = from_transfer(p.transfer, d, d, 1e-7);
  return p;
}

Mat asymptotic_transfer(const Channel& ch, const PeripheralProjector& p) {
  return to_transfer(ch) * p.transfer;
}

Channel asymptotic_part(const Channel& ch, const PeripheralProjector& p) {
  return from_transfer(asymptotic_transfer(ch, p), ch.dim_in(), ch.dim_in(), 1e-7);
}

double spectral_gap(const Channel& ch, double tol_peri) { return spectrum(ch, tol_peri).mu; }

nlohmann::json to_json(const SpectrumReport& s) {
  nlohmann::json ev = nlohmann::json::array();
  for (cplx l : s.eigenvalues) ev.push_back({l.real(), l.imag()});
  return {{"schema", "1"},
          {"eigenvalues", ev},
          {"peripheral_indices", s.peripheral_indices},
          {"mu", s.mu},
          {"gap_margin", s.gap_margin},
          {"warnings", s.warnings}};
}

}  // namespace qmemcap
