#include <algorithm>
#include <cmath>
#include <random>

#include "qmemcap/convergence.hpp"
#include "qmemcap/linalg.hpp"
#include "qmemcap/lmi.hpp"

namespace qmemcap {

namespace {

// (A (x) 1) J (A (x) 1)^+ with psi(r*din + i) = A(r, i): the output of
// id (x) Theta on |psi><psi|, reference factor first.
Mat output_on(const Mat& j, const Vec& psi, int din, int dout) {
  Mat a(din, din);
  for (int r = 0; r < din; ++r)
    for (int i = 0; i < din; ++i) a(r, i) = psi(r * din + i);
  Mat ak = kron(a, Mat::Identity(dout, dout));
  return herm_part(ak * j * ak.adjoint());
}

// Quadratic form G with <psi|G|psi> = Tr S (id (x) Theta)(psi psi^+).
Mat linearization(const Mat& j, const Mat& s, int din, int dout) {
  const int n = din * din;
  Mat g = Mat::Zero(n, n);
  for (int r = 0; r < din; ++r)
    for (int jj = 0; jj < din; ++jj)
      for (int r2 = 0; r2 < din; ++r2)
        for (int i = 0; i < din; ++i) {
          cplx acc = 0.0;
          for (int a = 0; a < dout; ++a)
            for (int b = 0; b < dout; ++b) acc += s(r * dout + b, r2 * dout + a) * j(i * dout + a, jj * dout + b);
          g(r * din + jj, r2 * din + i) = acc;
        }
  return herm_part(g);
}

// Each step jumps to the top eigenvector of the linearization at the current
// sign matrix; the trace norm never decreases along the way.
double ascent_lower(const Mat& j, int din, int dout, unsigned long seed, int restarts) {
  std::mt19937_64 rng(seed);
  const int n = din * din;
  double best = 0.0;
  for (int rs = 0; rs <= restarts; ++rs) {
    Vec psi(n);
    if (rs == 0) {
      psi.setZero();
      for (int i = 0; i < din; ++i) psi(i * din + i) = 1.0;
    } else {
      psi = complex_gaussian(n, 1, rng).col(0);
    }
    psi.normalize();
    double f_old = -1.0;
    for (int it = 0; it < 300; ++it) {
      Eigen::SelfAdjointEigenSolver<Mat> es(output_on(j, psi, din, dout));
      const RVec& lam = es.eigenvalues();
      double f = lam.cwiseAbs().sum();
      best = std::max(best, f);
      if (f <= f_old + 1e-13 * std::max(1.0, f)) break;
      f_old = f;
      RVec sg = lam.unaryExpr([](double l) { return l >= 0.0 ? 1.0 : -1.0; });
      Mat s = es.eigenvectors() * sg.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
      Eigen::SelfAdjointEigenSolver<Mat> eg(linearization(j, s, din, dout));
      psi = eg.eigenvectors().col(n - 1);
    }
  }
  return best;
}

std::vector<Eigen::Triplet<cplx>> triplets_of(const Vec& v, int col) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (Eigen::Index r = 0; r < v.size(); ++r)
    if (std::abs(v(r)) > 0.0) t.emplace_back(static_cast<int>(r), col, v(r));
  return t;
}

}  // namespace

NormInterval diamond_norm_interval(const Mat& j_in, int din, int dout, unsigned long seed, int restarts) {
  const int n = din * dout;
  if (j_in.rows() != n || j_in.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix does not match din * dout");
  const Mat j = herm_part(j_in);
  if (j.norm() <= 1e-12) return {0.0, 0.0, true};

  const double lower_ascent = ascent_lower(j, din, dout, seed, restarts);

  // loose certified fallback: Y = |J| is feasible
  Mat abs_j = herm_func(j, [](double l) { return std::abs(l); });
  const double loose = op_norm(herm_part(ptrace_second(abs_j, din, dout)));

  const std::vector<Mat> g = hermitian_units(n);
  const int ny = static_cast<int>(g.size());
  const int nv = ny + 1;
  std::vector<Eigen::Triplet<cplx>> ty, tb;
  for (int a = 0; a < ny; ++a) {
    auto t1 = triplets_of(vec(g[a]), a);
    ty.insert(ty.end(), t1.begin(), t1.end());
    auto t2 = triplets_of(vec(Mat(-ptrace_second(g[a], din, dout))), a);
    tb.insert(tb.end(), t2.begin(), t2.end());
  }
  auto ts = triplets_of(vec(Mat::Identity(din, din)), ny);
  tb.insert(tb.end(), ts.begin(), ts.end());

  LmiBlock minus{-j, SpMat(n * n, nv)};
  minus.a.setFromTriplets(ty.begin(), ty.end());
  LmiBlock plus{j, minus.a};
  LmiBlock tr{Mat::Zero(din, din), SpMat(din * din, nv)};
  tr.a.setFromTriplets(tb.begin(), tb.end());

  RVec cost = RVec::Zero(nv);
  cost(ny) = 1.0;
  RVec x0(nv);
  const double pad = std::max(1e-3, 1e-2 * op_norm(j));
  x0.head(ny) = hermitian_coords(abs_j + pad * Mat::Identity(n, n));
  x0(ny) = loose + pad * dout + 1.0;

  LmiResult r = lmi_minimize(cost, {minus, plus, tr}, x0, 1e-9);
  NormInterval out;
  out.lower = lower_ascent;
  out.upper = loose;
  out.converged = false;
  if (r.x.size() == 0) return out;

  Mat y = from_hermitian_coords(r.x.head(ny), n);
  out.upper = std::min(loose, op_norm(herm_part(ptrace_second(y, din, dout))));

  // dual certificate: rescale (Z1, Z2) so that Z1 + Z2 = rho (x) 1 exactly
  Mat z3 = herm_part(r.duals[2]);
  const double tz = z3.trace().real();
  if (tz > 0.0) {
    Mat rho = z3 / tz;
    Mat m = herm_part(r.duals[0] + r.duals[1]);
    Mat mi = herm_func(m, [](double l) { return l > 0.0 ? 1.0 / std::sqrt(l) : 0.0; });
    Mat nn = kron(psd_sqrt(rho), Mat::Identity(dout, dout)) * mi;
    Mat z1 = nn * r.duals[0] * nn.adjoint();
    Mat z2 = nn * r.duals[1] * nn.adjoint();
    const double dual = (j * (z1 - z2)).trace().real();
    out.lower = std::max(out.lower, dual);
  }
  out.upper = std::max(out.upper, out.lower);
  out.converged = r.converged && out.upper - out.lower <= 1e-5;
  return out;
}

NormInterval diamond_norm_interval(const Channel& a, const Channel& b, unsigned long seed) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw Error(ErrorKind::DimensionMismatch, "diamond norm of channels with different shapes");
  if (a.dim_in() > 4 || a.dim_out() > 4)
    throw Error(ErrorKind::PreconditionViolated, "diamond_norm_interval supports dimensions up to 4");
  NormInterval n = diamond_norm_interval(Mat(a.choi() - b.choi()), a.dim_in(), a.dim_out(), seed);
  n.upper = std::min(n.upper, 2.0);
  n.lower = std::min(n.lower, n.upper);
  return n;
}

}  // namespace qmemcap
