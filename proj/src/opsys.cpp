#include "qmemcap/opsys.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmemcap/algebra.hpp"
#include "qmemcap/kernels.hpp"
#include "qmemcap/linalg.hpp"
#include "qmemcap/spectral.hpp"

namespace qmemcap {

std::vector<Mat> OperatorSystemSpace::matrices() const { return columns_to_matrices(basis, dim); }

namespace {

OperatorSystemSpace from_columns(const Mat& cols, int d, double rel_cut) {
  OperatorSystemSpace s;
  s.dim = d;
  s.basis = span_basis_cols(cols, rel_cut);
  Vec id = vec(Mat::Identity(d, d)) / std::sqrt(static_cast<double>(d));
  Vec r = id - s.basis * (s.basis.adjoint() * id);
  s.contains_identity = r.norm() <= 1e-9;
  return s;
}

}  // namespace

OperatorSystemSpace make_operator_system(const std::vector<Mat>& spanning, int d, double rel_cut) {
  Mat cols(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(spanning.size()));
  for (size_t i = 0; i < spanning.size(); ++i) cols.col(i) = vec(spanning[i]);
  return from_columns(cols, d, rel_cut);
}

OperatorSystemSpace operator_system_of(const std::vector<Mat>& kraus) {
  const int d = static_cast<int>(kraus[0].cols());
  return from_columns(kernels::sandwich_columns(kraus, {Mat::Identity(kraus[0].rows(), kraus[0].rows())}), d,
                      1e-10);
}

OperatorSystemSpace operator_system(const Channel& ch) { return operator_system_of(ch.kraus()); }

ChainResult opsys_chain(const Channel& ch, int max_l) {
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "operator-system chain of a non-square channel");
  const int d = ch.dim_in();
  if (max_l < d * d) throw Error(ErrorKind::InvalidArgument, "max_l must be at least d^2");
  ChainResult res;
  res.chain.push_back(operator_system(ch));
  for (int l = 1; l <= max_l; ++l) {
    const OperatorSystemSpace& cur = res.chain.back();
    OperatorSystemSpace next = from_columns(kernels::sandwich_columns(ch.kraus(), cur.matrices()), d, 1e-10);
    double leak = containment_residual(cur.basis, next.basis);
    if (leak > kSubspaceTol || next.size() < cur.size()) {
      std::ostringstream os;
      os << "S_{Psi^" << l << "} is not contained in S_{Psi^" << l + 1 << "} (residual " << leak << ")";
      throw Error(ErrorKind::ChainNotMonotone, os.str());
    }
    if (next.size() == cur.size()) {
      res.stabilization_index = l;
      return res;
    }
    res.chain.push_back(std::move(next));
  }
  throw Error(ErrorKind::ChainNotMonotone, "operator-system chain did not stabilize within max_l");
}

StarAlgebraCheck is_star_algebra(const OperatorSystemSpace& s, double tol, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::vector<Mat> ms = s.matrices();
  StarAlgebraCheck out;
  double adj = 0.0;
  for (const auto& m : ms) {
    Vec v = vec(m.adjoint());
    adj = std::max(adj, (v - s.basis * (s.basis.adjoint() * v)).norm());
  }
  out.residual = std::max(adj, closure_residual(ms, rng));
  out.is_algebra = out.residual <= tol;
  return out;
}

AlgebraBlockStructure algebra_block_structure(const OperatorSystemSpace& s, std::mt19937_64& rng) {
  StarAlgebraCheck chk = is_star_algebra(s);
  if (!chk.is_algebra) {
    std::ostringstream os;
    os << "operator system is not a *-algebra (residual " << chk.residual << ")";
    throw Error(ErrorKind::NotAlgebra, os.str());
  }
  std::vector<Mat> hb = hermitian_basis(s.matrices(), 1e-9, s.size());
  AlgebraDecomposition dec = decompose_star_algebra(hb, rng, 1e-6);
  AlgebraBlockStructure out;
  out.ambient = s.dim;
  for (const auto& b : dec.blocks) {
    // algebra block is B(C^d) (x) 1_m; swap to 1_m (x) B(C^d)
    AlgebraBlockStructure::Entry e;
    e.mult = b.m;
    e.size = b.d;
    e.isometry.resize(b.isometry.rows(), b.isometry.cols());
    for (int i = 0; i < b.d; ++i)
      for (int j = 0; j < b.m; ++j) e.isometry.col(j * b.d + i) = b.isometry.col(i * b.m + j);
    out.blocks.push_back(std::move(e));
  }
  std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const auto& a, const auto& b) {
    if (a.mult != b.mult) return a.mult > b.mult;
    return a.size > b.size;
  });
  return out;
}

IndependenceNumbers independence_numbers(const AlgebraBlockStructure& a) {
  IndependenceNumbers n;
  for (const auto& b : a.blocks) {
    n.alpha += b.mult;
    n.alpha_ea += static_cast<long>(b.mult) * b.mult;
    n.alpha_q = std::max<long>(n.alpha_q, b.mult);
  }
  n.alpha_p = n.alpha_q;
  return n;
}

OperatorSystemSpace tensor_systems(const OperatorSystemSpace& a, const OperatorSystemSpace& b) {
  std::vector<Mat> ms;
  for (const auto& x : a.matrices())
    for (const auto& y : b.matrices()) ms.push_back(kron(x, y));
  return make_operator_system(ms, a.dim * b.dim);
}

OperatorSystemSpace compress_system(const OperatorSystemSpace& s, const Mat& v) {
  std::vector<Mat> ms;
  for (const auto& x : s.matrices()) ms.push_back(v.adjoint() * x * v);
  return make_operator_system(ms, static_cast<int>(v.cols()));
}

ZeroErrorReport zero_error_capacities(const Channel& ch, std::mt19937_64& rng, double tol_peri) {
  const int d = ch.dim_in();
  ChainResult chain = opsys_chain(ch, d * d);
  ZeroErrorReport z;
  z.stabilization_index = chain.stabilization_index;
  for (const auto& s : chain.chain) z.chain_dims.push_back(s.size());
  z.stabilized = chain.chain.back();

  PeripheralProjector p = peripheral_projector(ch, tol_peri);
  OperatorSystemSpace sp = operator_system(p.projector_channel);
  z.stabilization_distance = subspace_distance(z.stabilized.basis, sp.basis);
  if (z.stabilization_distance > kSubspaceTol) {
    std::ostringstream os;
    os << "stabilized operator system differs from S_P (distance " << z.stabilization_distance << ", dims "
       << z.stabilized.size() << " vs " << sp.size() << ")";
    throw Error(ErrorKind::StabilizationMismatch, os.str());
  }

  // restrict to H_0^perp = supp P(1/d), where the system is a *-algebra
  Mat rho = herm_part(unvec(p.transfer * vec(Mat::Identity(d, d) / static_cast<double>(d)), d));
  Eigen::SelfAdjointEigenSolver<Mat> er(rho);
  std::vector<int> keep;
  for (int i = 0; i < d; ++i)
    if (er.eigenvalues()(i) > 1e-9) keep.push_back(i);
  Mat v(d, static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) v.col(c) = er.eigenvectors().col(keep[c]);
  OperatorSystemSpace restricted = keep.size() == static_cast<size_t>(d) ? z.stabilized : compress_system(z.stabilized, v);

  z.structure = algebra_block_structure(restricted, rng);
  z.numbers = independence_numbers(z.structure);
  z.c0 = std::log2(static_cast<double>(z.numbers.alpha));
  z.p0 = std::log2(static_cast<double>(z.numbers.alpha_p));
  z.q0 = std::log2(static_cast<double>(z.numbers.alpha_q));
  z.cea0 = std::log2(static_cast<double>(z.numbers.alpha_ea));
  return z;
}

nlohmann::json to_json(const OperatorSystemSpace& s) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& m : s.matrices()) basis.push_back(matrix_to_json(m));
  return {{"dim", s.dim}, {"size", s.size()}, {"contains_identity", s.contains_identity}, {"basis", basis}};
}

nlohmann::json to_json(const ZeroErrorReport& z) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : z.structure.blocks) blocks.push_back({{"mult", b.mult}, {"size", b.size}});
  return {{"schema", "1"},
          {"c0", z.c0},
          {"p0", z.p0},
          {"q0", z.q0},
          {"cea0", z.cea0},
          {"alpha", z.numbers.alpha},
          {"alpha_p", z.numbers.alpha_p},
          {"alpha_q", z.numbers.alpha_q},
          {"alpha_ea", z.numbers.alpha_ea},
          {"algebra_blocks", blocks},
          {"stabilization_index", z.stabilization_index},
          {"stabilization_distance", z.stabilization_distance}};
}

}  // namespace qmemcap
