#include "qmemcap/lmi.hpp"

#include <cmath>

#include "qmemcap/linalg.hpp"

namespace qmemcap {

std::vector<Mat> hermitian_units(int n) {
  std::vector<Mat> g;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) g.push_back(mat_unit(n, i, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      g.push_back(r * (mat_unit(n, i, j) + mat_unit(n, j, i)));
      g.push_back(cplx(0.0, r) * (mat_unit(n, i, j) - mat_unit(n, j, i)));
    }
  return g;
}

RVec hermitian_coords(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  RVec c(n * n);
  const double s = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i) c(k++) = x(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      c(k++) = s * x(i, j).real();
      c(k++) = s * x(i, j).imag();
    }
  return c;
}

Mat from_hermitian_coords(const RVec& c, int n) {
  Mat x = Mat::Zero(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i) x(i, i) = c(k++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cplx v(r * c(k), r * c(k + 1));
      x(i, j) = v;
      x(j, i) = std::conj(v);
      k += 2;
    }
  return x;
}

namespace {

struct Eval {
  bool feasible = false;
  double value = 0.0;
  std::vector<Mat> s;
  std::vector<Eigen::LLT<Mat>> llt;
};

Eval evaluate(const RVec& cost, const std::vector<LmiBlock>& blocks, const RVec& x, double t) {
  Eval e;
  e.value = t * cost.dot(x);
  Vec xc = x.cast<cplx>();
  for (const auto& b : blocks) {
    const int m = static_cast<int>(b.c.rows());
    Vec v = b.a * xc;
    Mat s = herm_part(b.c + unvec(v, m));
    Eigen::LLT<Mat> llt(s);
    if (llt.info() != Eigen::Success) return e;
    RVec diag = llt.matrixLLT().diagonal().real();
    if ((diag.array() <= 0.0).any()) return e;
    e.value -= 2.0 * diag.array().log().sum();
    e.s.push_back(std::move(s));
    e.llt.push_back(std::move(llt));
  }
  e.feasible = true;
  return e;
}

}  // namespace

LmiResult lmi_minimize(const RVec& cost, const std::vector<LmiBlock>& blocks, RVec x, double gap_tol,
                       int max_outer) {
  const int n = static_cast<int>(x.size());
  double total_m = 0.0;
  for (const auto& b : blocks) total_m += static_cast<double>(b.c.rows());
  LmiResult res;
  double t = 1.0;
  Eval cur = evaluate(cost, blocks, x, t);
  if (!cur.feasible) return res;

  for (int outer = 0; outer < max_outer; ++outer) {
    for (int it = 0; it < 80; ++it) {
      RVec grad = t * cost;
      RMat hess = RMat::Zero(n, n);
      for (size_t k = 0; k < blocks.size(); ++k) {
        const int m = static_cast<int>(cur.s[k].rows());
        Mat si = cur.llt[k].solve(Mat::Identity(m, m));
        si = herm_part(si);
        grad -= (blocks[k].a.adjoint() * vec(si)).real();
        // Hessian of -log det: Tr(S^-1 A_a S^-1 A_b) = vec(A_a)^+ (conj(S^-1) (x) S^-1) vec(A_b)
        Mat kk = kron(si.conjugate(), si);
        Mat ka = kk * blocks[k].a;
        hess += (blocks[k].a.adjoint() * ka).real();
      }
      hess.diagonal().array() += 1e-14 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      RVec step = hess.ldlt().solve(-grad);
      const double dec = -grad.dot(step);
      if (!(dec > 1e-16)) break;
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        RVec xn = x + alpha * step;
        Eval next = evaluate(cost, blocks, xn, t);
        if (next.feasible && next.value <= cur.value - 0.25 * alpha * dec) {
          x = xn;
          cur = std::move(next);
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved || dec < 1e-12) break;
    }
    res.barrier_gap = total_m / t;
    if (res.barrier_gap <= gap_tol) {
      res.converged = true;
      break;
    }
    t *= 8.0;
    cur = evaluate(cost, blocks, x, t);
  }
  res.x = x;
  res.slacks = cur.s;
  for (size_t k = 0; k < blocks.size(); ++k) {
    const int m = static_cast<int>(cur.s[k].rows());
    res.duals.push_back(herm_part(cur.llt[k].solve(Mat::Identity(m, m))) / t);
  }
  return res;
}

}  // namespace qmemcap
