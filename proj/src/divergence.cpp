#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmemcap/capacity.hpp"
#include "qmemcap/linalg.hpp"

namespace qmemcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportCut = 1e-12;
constexpr double kSupportTol = 1e-8;

struct Eig {
  RVec lam;
  Mat vecs;
  double cut = 0.0;  // eigenvalues above cut span the support
};

Eig eig(const Mat& x, const char* name) {
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if ((x - x.adjoint()).norm() > 1e-9 * scale) {
    std::ostringstream os;
    os << name << " is not Hermitian (||X - X^+||_F = " << (x - x.adjoint()).norm() << ")";
    throw Error(ErrorKind::NumericalNonHermitian, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(x));
  Eig e{es.eigenvalues(), es.eigenvectors(), 0.0};
  e.cut = kSupportCut * std::max(e.lam.cwiseAbs().maxCoeff(), 1e-300);
  return e;
}

Mat support_projector(const Eig& e) {
  const int n = static_cast<int>(e.lam.size());
  Mat p = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (e.lam(i) > e.cut) p += e.vecs.col(i) * e.vecs.col(i).adjoint();
  return p;
}

// f on the support, zero elsewhere
Mat support_func(const Eig& e, const std::function<double(double)>& f) {
  const int n = static_cast<int>(e.lam.size());
  RVec g = RVec::Zero(n);
  for (int i = 0; i < n; ++i)
    if (e.lam(i) > e.cut) g(i) = f(e.lam(i));
  return e.vecs * g.cast<cplx>().asDiagonal() * e.vecs.adjoint();
}

bool support_contained(const Eig& r, const Eig& s) {
  Mat pr = support_projector(r);
  Mat ps = support_projector(s);
  return (pr - ps * pr).norm() <= kSupportTol;
}

double log2_or_inf(double x) { return x > 0.0 ? std::log2(x) : -kInf; }

double umegaki(const Eig& r, const Eig& s, const Mat& rho) {
  if (!support_contained(r, s)) return kInf;
  Mat lr = support_func(r, [](double l) { return std::log2(l); });
  Mat ls = support_func(s, [](double l) { return std::log2(l); });
  return (rho * (lr - ls)).trace().real();
}

double petz(double a, const Eig& r, const Eig& s) {
  if (a > 1.0 && !support_contained(r, s)) return kInf;
  Mat ra = support_func(r, [a](double l) { return std::pow(l, a); });
  Mat sa = support_func(s, [a](double l) { return std::pow(l, 1.0 - a); });
  double q = (ra * sa).trace().real();
  if (a < 1.0 && q <= 0.0) return kInf;  // rho sigma = 0
  return log2_or_inf(q) / (a - 1.0);
}

double sandwiched(double a, const Eig& r, const Eig& s, const Mat& rho) {
  if (a > 1.0 && !support_contained(r, s)) return kInf;
  const double p = (1.0 - a) / (2.0 * a);
  Mat sp = support_func(s, [p](double l) { return std::pow(l, p); });
  Mat inner = herm_part(sp * rho * sp);
  RVec ev = herm_eigenvalues(inner);
  double q = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) q += std::pow(ev(i), a);
  if (a < 1.0 && q <= 0.0) return kInf;
  return log2_or_inf(q) / (a - 1.0);
}

double dmax(const Eig& r, const Eig& s, const Mat& rho) {
  if (!support_contained(r, s)) return kInf;
  Mat si = support_func(s, [](double l) { return 1.0 / std::sqrt(l); });
  return std::log2(op_norm(herm_part(si * rho * si)));
}

double dmin(const Eig& r, const Mat& sigma) {
  double q = (support_projector(r) * sigma).trace().real();
  if (q <= kSupportCut * std::max(1.0, sigma.trace().real())) return kInf;
  return -std::log2(q);
}

// Tr(P_{t rho - sigma > 0} rho); nondecreasing in t
double positive_mass(double t, const Mat& rho, const Mat& sigma, Eig* out = nullptr) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(t * rho - sigma));
  double g = 0.0;
  const int n = static_cast<int>(rho.rows());
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.0) g += (es.eigenvectors().col(i).adjoint() * rho * es.eigenvectors().col(i))(0, 0).real();
  if (out) *out = Eig{es.eigenvalues(), es.eigenvectors(), 0.0};
  return g;
}

double hypothesis(double eps, const Eig& r, const Mat& rho, const Mat& sigma) {
  if (eps <= 0.0) return dmin(r, sigma);
  if (eps >= 1.0) return kInf;
  const double target = 1.0 - eps;

  double lo = 0.0;
  double hi = 1.0;
  int grow = 0;
  while (positive_mass(hi, rho, sigma) < target && grow < 200) {
    lo = hi;
    hi *= 2.0;
    ++grow;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (positive_mass(mid, rho, sigma) < target)
      lo = mid;
    else
      hi = mid;
  }

  // Optimal test at t*: eigenvectors of t* rho - sigma by descending eigenvalue,
  // with a fractional weight on the one that crosses 1 - eps.
  Eig e;
  positive_mass(lo, rho, sigma, &e);
  const int n = static_cast<int>(rho.rows());
  double mass = 0.0;
  double beta = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    Vec v = e.vecs.col(i);
    double pr = (v.adjoint() * rho * v)(0, 0).real();
    double ps = (v.adjoint() * sigma * v)(0, 0).real();
    if (mass + pr >= target) {
      double w = pr > 0.0 ? (target - mass) / pr : 0.0;
      beta += w * ps;
      mass = target;
      break;
    }
    mass += pr;
    beta += ps;
  }
  if (beta <= 0.0) return kInf;
  return -std::log2(beta);
}

}  // namespace

double relative_entropy(const DivergenceKind& kind, const Mat& rho, const Mat& sigma) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw Error(ErrorKind::DimensionMismatch, "relative_entropy needs square matrices of equal size");
  const double a = kind.param;
  if ((kind.tag == DivergenceKind::Petz || kind.tag == DivergenceKind::Sandwiched) && (a <= 0.0 || a == 1.0))
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1) or (1,inf)");
  if (kind.tag == DivergenceKind::Hypothesis && (a < 0.0 || a > 1.0))
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in [0,1]");

  Eig r = eig(rho, "rho");
  Eig s = eig(sigma, "sigma");
  switch (kind.tag) {
    case DivergenceKind::Umegaki:
      return umegaki(r, s, rho);
    case DivergenceKind::Petz:
      return petz(a, r, s);
    case DivergenceKind::Sandwiched:
      return sandwiched(a, r, s, herm_part(rho));
    case DivergenceKind::Max:
      return dmax(r, s, herm_part(rho));
    case DivergenceKind::Min:
      return dmin(r, herm_part(sigma));
    case DivergenceKind::Hypothesis:
      return hypothesis(a, r, herm_part(rho), herm_part(sigma));
  }
  return kInf;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double e_max_pure(const std::vector<double>& schmidt) {
  double total = 0.0;
  for (double x : schmidt) {
    if (x < -1e-12) throw Error(ErrorKind::InvalidArgument, "Schmidt coefficients must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "Schmidt coefficients must sum to 1");
  // (sum sqrt s_i)^2 expanded pairwise, exact for uniform coefficients
  double sq = 0.0;
  for (double x : schmidt)
    for (double y : schmidt) sq += std::sqrt(std::max(0.0, x) * std::max(0.0, y));
  return std::log2(sq);
}

}  // namespace qmemcap
