#include "qmemcap/blockstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmemcap/algebra.hpp"
#include "qmemcap/linalg.hpp"

namespace qmemcap {

std::vector<int> PeripheralStructure::block_dims() const {
  std::vector<int> v;
  for (const auto& b : blocks) v.push_back(b.d);
  return v;
}

std::vector<int> PeripheralStructure::multiplicities() const {
  std::vector<int> v;
  for (const auto& b : blocks) v.push_back(b.m);
  return v;
}

int PeripheralStructure::max_d() const {
  int m = 0;
  for (const auto& b : blocks) m = std::max(m, b.d);
  return m;
}

int PeripheralStructure::sum_d() const {
  int s = 0;
  for (const auto& b : blocks) s += b.d;
  return s;
}

int PeripheralStructure::sum_d2() const {
  int s = 0;
  for (const auto& b : blocks) s += b.d * b.d;
  return s;
}

std::vector<Mat> peripheral_basis(const Channel& ch, const PeripheralProjector& p) {
  return columns_to_matrices(p.range_basis, ch.dim_in());
}

namespace {

double embedded_position(const Mat& iso) {
  RVec w = (iso * iso.adjoint()).diagonal().real();
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += static_cast<double>(i) * w(i);
  return s / static_cast<double>(iso.cols());
}

void sort_blocks(std::vector<Block>& blocks) {
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.d != b.d) return a.d > b.d;
    if (a.m != b.m) return a.m > b.m;
    return embedded_position(a.isometry) < embedded_position(b.isometry);
  });
}

Mat apply_transfer(const Mat& t, const Mat& x) {
  return unvec(t * vec(x), static_cast<int>(x.rows()));
}

}  // namespace

Mat embed_block(const PeripheralStructure& ps, int k, const Mat& x) {
  const Block& b = ps.blocks.at(k);
  return b.isometry * kron(x, b.delta) * b.isometry.adjoint();
}

Mat compress_block(const PeripheralStructure& ps, int k, const Mat& x) {
  const Block& b = ps.blocks.at(k);
  return ptrace_second(b.isometry.adjoint() * x * b.isometry, b.d, b.m);
}

PeripheralStructure decompose_structure(const Channel& ch, const PeripheralProjector& p, std::mt19937_64& rng) {
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "peripheral structure of a non-square channel");
  const int d = ch.dim_in();
  PeripheralStructure ps;
  ps.dim = d;
  ps.projector_transfer = p.transfer;
  ps.range_basis = p.range_basis;
  ps.peripheral_eigenvalues = p.peripheral_eigenvalues;
  ps.warnings = p.warnings;

  ps.rho_bar = herm_part(apply_transfer(p.transfer, Mat::Identity(d, d) / static_cast<double>(d)));
  Eigen::SelfAdjointEigenSolver<Mat> er(ps.rho_bar);
  const RVec& lam = er.eigenvalues();
  std::vector<int> support;
  for (int i = 0; i < d; ++i)
    if (lam(i) > kTolPd) support.push_back(i);
  const int s = static_cast<int>(support.size());
  if (s == 0) throw Error(ErrorKind::AlgebraClosureFailure, "P(1/d) has empty support");
  ps.h0_dim = d - s;
  Mat ws(d, s);
  RVec inv(s);
  const double cut = 1e-12 * lam.cwiseAbs().maxCoeff();
  for (int c = 0; c < s; ++c) {
    ws.col(c) = er.eigenvectors().col(support[c]);
    double l = lam(support[c]);
    inv(c) = l > cut ? 1.0 / l : 0.0;
  }

  // X rho_bar^{-1} turns the distorted blocks x (x) delta_k into x' (x) 1
  std::vector<Mat> as;
  for (const Mat& b : peripheral_basis(ch, p)) {
    Mat c = ws.adjoint() * b * ws;
    as.push_back(c * inv.cast<cplx>().asDiagonal());
  }
  std::vector<Mat> hb = hermitian_basis(as, 1e-9, p.rank);
  AlgebraDecomposition alg = decompose_star_algebra(hb, rng, 1e-6);

  for (const auto& ab : alg.blocks) {
    Block b;
    b.d = ab.d;
    b.m = ab.m;
    b.isometry = ws * ab.isometry;
    Mat red = ptrace_first(b.isometry.adjoint() * ps.rho_bar * b.isometry, b.d, b.m);
    red = herm_part(red);
    b.delta = red / red.trace().real();
    if (herm_eigenvalues(b.delta).minCoeff() <= kTolPd)
      ps.warnings.push_back("delta_k is not positive definite within tol_pd");
    ps.blocks.push_back(std::move(b));
  }
  sort_blocks(ps.blocks);
  const int k = ps.num_blocks();
  ps.permutation.resize(k);
  std::iota(ps.permutation.begin(), ps.permutation.end(), 0);
  for (const auto& b : ps.blocks) ps.unitaries.push_back(Mat::Identity(b.d, b.d));
  return ps;
}

PeripheralStructure extract_dynamics(const Channel& ch, PeripheralStructure ps) {
  const int kk = ps.num_blocks();
  std::vector<int> perm(kk, -1);
  std::vector<Mat> us(kk);
  std::vector<Mat> proj(kk);
  for (int r = 0; r < kk; ++r) proj[r] = ps.blocks[r].isometry * ps.blocks[r].isometry.adjoint();

  for (int k = 0; k < kk; ++k) {
    const Block& bk = ps.blocks[k];
    Mat y = qmemcap::apply(ch, embed_block(ps, k, Mat::Identity(bk.d, bk.d)));
    const double total = y.squaredNorm();
    int best = -1;
    double best_share = -1.0;
    for (int r = 0; r < kk; ++r) {
      double share = (proj[r] * y * proj[r]).squaredNorm() / total;
      if (share > best_share) { best_share = share; best = r; }
    }
    if (best_share <= 1.0 - 1e-6 || perm[best] != -1 || ps.blocks[best].d != bk.d) {
      std::ostringstream os;
      os << "block " << k << " output is not carried by a single free block of equal dimension (share "
         << best_share << ")";
      throw Error(ErrorKind::PermutationAmbiguity, os.str());
    }
    const int r = best;
    perm[r] = k;
    if (ps.blocks[r].m != bk.m) {
      std::ostringstream os;
      os << "peripheral permutation maps block " << k << " (m=" << bk.m << ") to block " << r
         << " (m=" << ps.blocks[r].m << ")";
      ps.warnings.push_back(os.str());
    }

    const int dk = bk.d;
    std::vector<Mat> ya(dk);
    for (int a = 0; a < dk; ++a)
      ya[a] = compress_block(ps, r, qmemcap::apply(ch, embed_block(ps, k, mat_unit(dk, a, 0))));
    Eigen::SelfAdjointEigenSolver<Mat> e11(herm_part(ya[0]));
    Vec u1 = e11.eigenvectors().col(dk - 1);
    Mat udag(dk, dk);
    for (int a = 0; a < dk; ++a) udag.col(a) = ya[a] * u1;
    Eigen::JacobiSVD<Mat> svd(udag, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat u = (svd.matrixU() * svd.matrixV().adjoint()).adjoint();
    for (int i = 0; i < dk; ++i) {
      if (std::abs(u(i, 0)) > 1e-8) {
        u *= std::conj(u(i, 0)) / std::abs(u(i, 0));
        break;
      }
    }
    us[r] = u;
  }
  ps.permutation = perm;
  ps.unitaries = us;
  ps.has_dynamics = true;
  return ps;
}

Channel reversal_channel(const Channel& ch, const PeripheralStructure& ps) {
  if (!ps.has_dynamics) throw Error(ErrorKind::InvalidArgument, "reversal_channel needs extracted dynamics");
  const int d = ch.dim_in();
  const int kk = ps.num_blocks();
  Mat tr = Mat::Zero(d * d, d * d);
  for (int col = 0; col < d * d; ++col) {
    Mat px = unvec(ps.projector_transfer.col(col), d);
    Mat out = Mat::Zero(d, d);
    for (int k = 0; k < kk; ++k) {
      const int src = ps.permutation[k];
      Mat xk = compress_block(ps, k, px);
      out += embed_block(ps, src, ps.unitaries[k] * xk * ps.unitaries[k].adjoint());
    }
    tr.col(col) = vec(out);
  }
  return from_transfer(tr, d, d, 1e-7);
}

double reconstruction_distance(const PeripheralStructure& ps) {
  std::vector<Mat> ms;
  for (int k = 0; k < ps.num_blocks(); ++k) {
    const int dk = ps.blocks[k].d;
    for (int a = 0; a < dk; ++a)
      for (int b = 0; b < dk; ++b) ms.push_back(embed_block(ps, k, mat_unit(dk, a, b)));
  }
  return subspace_distance(span_basis(ms, 1e-10), ps.range_basis);
}

PeripheralStructure analyze_structure(const Channel& ch, std::mt19937_64& rng, double tol_peri, bool strict) {
  PeripheralProjector p = peripheral_projector(ch, tol_peri, strict);
  return extract_dynamics(ch, decompose_structure(ch, p, rng));
}

nlohmann::json to_json(const PeripheralStructure& ps) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : ps.blocks)
    blocks.push_back({{"d", b.d}, {"m", b.m}, {"delta", matrix_to_json(b.delta)},
                      {"isometry", matrix_to_json(b.isometry)}});
  nlohmann::json us = nlohmann::json::array();
  for (const auto& u : ps.unitaries) us.push_back(matrix_to_json(u));
  nlohmann::json ev = nlohmann::json::array();
  for (cplx l : ps.peripheral_eigenvalues) ev.push_back({l.real(), l.imag()});
  return {{"schema", "1"},
          {"dim", ps.dim},
          {"h0_dim", ps.h0_dim},
          {"num_blocks", ps.num_blocks()},
          {"block_dims", ps.block_dims()},
          {"multiplicities", ps.multiplicities()},
          {"blocks", blocks},
          {"permutation", ps.permutation},
          {"unitaries", us},
          {"peripheral_eigenvalues", ev},
          {"warnings", ps.warnings}};
}

}  // namespace qmemcap
