#include <cmath>
#include <sstream>

#include "qmemcap/capacity.hpp"
#include "qmemcap/linalg.hpp"
#include "qmemcap/lmi.hpp"

namespace qmemcap {

// With Y = lambda sigma the program is  min Tr Y  s.t.  1 (x) Y >= J,
// J the (unnormalized) Choi matrix. Its dual is  max Tr J Z  s.t.
// Z >= 0, Tr_R Z = 1; a barrier dual rescaled onto Tr_R Z = 1 certifies the gap.
IMaxResult i_max_of_channel(const Channel& ch) {
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "i_max_of_channel needs a square channel");
  const int d = ch.dim_in();
  if (d > 4) throw Error(ErrorKind::PreconditionViolated, "i_max_of_channel supports d <= 4");
  const Mat j = herm_part(ch.choi());
  const Mat id = Mat::Identity(d, d);
  const std::vector<Mat> g = hermitian_units(d);
  const int nv = static_cast<int>(g.size());

  LmiBlock blk;
  blk.c = -j;
  blk.a.resize(d * d * d * d, nv);
  std::vector<Eigen::Triplet<cplx>> trip;
  RVec cost(nv);
  for (int a = 0; a < nv; ++a) {
    Vec v = vec(kron(id, g[a]));
    for (Eigen::Index r = 0; r < v.size(); ++r)
      if (v(r) != cplx(0.0)) trip.emplace_back(static_cast<int>(r), a, v(r));
    cost(a) = g[a].trace().real();
  }
  blk.a.setFromTriplets(trip.begin(), trip.end());

  RVec x0 = hermitian_coords((op_norm(j) + 1.0) * id);
  LmiResult r = lmi_minimize(cost, {blk}, x0, 1e-10);
  if (r.x.size() == 0) throw Error(ErrorKind::SolverNotConverged, "i_max start point infeasible");

  Mat y = from_hermitian_coords(r.x, d);
  Mat z = r.duals[0];
  Mat mz = herm_part(ptrace_first(z, d, d));
  Mat mi = herm_func(mz, [](double l) { return l > 0.0 ? 1.0 / std::sqrt(l) : 0.0; });
  Mat w = kron(id, mi);
  Mat zf = herm_part(w * z * w);
  const double primal = y.trace().real();
  const double dual = (j * zf).trace().real();
  const double gap = dual > 0.0 ? std::log2(primal) - std::log2(dual) : 1.0;

  IMaxResult out;
  out.value = std::log2(primal);
  out.gap = std::max(gap, 0.0);
  out.sigma = y / primal;
  if (gap <= 1e-6) return out;
  std::ostringstream os;
  os << "i_max duality gap " << gap << " bits exceeds 1e-6";
  throw Error(ErrorKind::SolverNotConverged, os.str());
}

}  // namespace qmemcap
