#include "qmemcap/codes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmemcap/linalg.hpp"

namespace qmemcap {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Mat transfer_power(const Mat& t, long n) {
  Mat result = Mat::Identity(t.rows(), t.cols());
  Mat base = t;
  while (n > 0) {
    if (n & 1) result = base * result;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

// Y -> Tr_2 W_k^+ Y W_k, with the complement of range(W_k) sent to |0><0|
Channel block_decoder(const PeripheralStructure& ps, int k) {
  const Block& b = ps.blocks.at(k);
  const int d = ps.dim;
  std::vector<Mat> kraus;
  for (int j = 0; j < b.m; ++j) {
    Mat a(b.d, d);
    for (int i = 0; i < b.d; ++i) a.row(i) = b.isometry.col(i * b.m + j).adjoint();
    kraus.push_back(a);
  }
  const int rest = d - b.d * b.m;
  if (rest > 0) {
    Eigen::HouseholderQR<Mat> qr(b.isometry);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    for (int c = b.d * b.m; c < d; ++c) {
      Mat a = Mat::Zero(b.d, d);
      a.row(0) = q.col(c).adjoint();
      kraus.push_back(a);
    }
  }
  return Channel(kraus);
}

// X -> W_k (X (x) delta_k) W_k^+
Channel block_encoder(const PeripheralStructure& ps, int k) {
  const Block& b = ps.blocks.at(k);
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(b.delta));
  std::vector<Mat> kraus;
  for (int j = 0; j < b.m; ++j) {
    const double lam = es.eigenvalues()(j);
    if (lam <= 1e-15) continue;
    Mat e = Mat::Zero(ps.dim, b.d);
    for (int i = 0; i < b.d; ++i)
      for (int l = 0; l < b.m; ++l) e.col(i) += es.eigenvectors()(l, j) * b.isometry.col(i * b.m + l);
    kraus.push_back(std::sqrt(lam) * e);
  }
  return Channel(kraus);
}

Vec max_entangled(int d) {
  Vec v = Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

double worst_fidelity_estimate(const Mat& t, int d, unsigned long seed) {
  std::mt19937_64 rng(seed);
  double worst = 1.0;
  for (int s = 0; s < 20; ++s) {
    Vec psi = complex_gaussian(d, 1, rng).col(0).normalized();
    for (int it = 0; it < 200; ++it) {
      Mat p = psi * psi.adjoint();
      Mat out = unvec(t * vec(p), d);
      Mat back = unvec(t.adjoint() * vec(p), d);
      Mat g = herm_part(out + back);
      double f = (psi.adjoint() * out * psi)(0, 0).real();
      worst = std::min(worst, f);
      Vec grad = g * psi - (psi.adjoint() * g * psi)(0, 0) * psi;
      if (grad.norm() < 1e-12) break;
      psi = (psi - 0.5 * grad).normalized();
    }
    Mat p = psi * psi.adjoint();
    worst = std::min(worst, (psi.adjoint() * unvec(t * vec(p), d) * psi)(0, 0).real());
  }
  return worst;
}

}  // namespace

Mat weyl(int d, int a, int b) {
  Mat x = Mat::Zero(d, d);
  Mat z = Mat::Zero(d, d);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < d; ++i) {
    x((i + a) % d, i) = 1.0;
    z(i, i) = std::polar(1.0, 2.0 * pi * b * i / d);
  }
  return x * z;
}

BlockOrbit evolve_block(const PeripheralStructure& ps, int k, long t) {
  if (!ps.has_dynamics) throw Error(ErrorKind::InvalidArgument, "block orbit needs extracted dynamics");
  const int kk = ps.num_blocks();
  std::vector<int> inv(kk);
  for (int r = 0; r < kk; ++r) inv[ps.permutation[r]] = r;
  BlockOrbit o{k, Mat::Identity(ps.blocks.at(k).d, ps.blocks.at(k).d)};
  for (long s = 0; s < t; ++s) {
    const int r = inv[o.block];
    o.v = ps.unitaries[r].adjoint() * o.v;
    o.block = r;
  }
  return o;
}

QuantumCode build_quantum_code(const PeripheralStructure& ps, int k, const Channel& r) {
  if (k < 0 || k >= ps.num_blocks()) throw Error(ErrorKind::InvalidArgument, "block index out of range");
  QuantumCode c;
  c.block = k;
  c.log_dim = std::log2(static_cast<double>(ps.blocks[k].d));
  c.encoder = block_encoder(ps, k);
  const Mat dec = block_decoder(ps, k).transfer();
  const Mat rt = r.transfer();
  const int d = ps.dim;
  const int dk = ps.blocks[k].d;
  c.decoder_builder = [dec, rt, d, dk](long t) { return from_transfer(dec * transfer_power(rt, t), d, dk); };
  return c;
}

QuantumCode isometry_code(const Mat& v) {
  const int d = static_cast<int>(v.rows());
  const int k = static_cast<int>(v.cols());
  QuantumCode c;
  c.log_dim = std::log2(static_cast<double>(k));
  c.encoder = Channel({v});
  std::vector<Mat> kraus{v.adjoint()};
  if (d > k) {
    Eigen::HouseholderQR<Mat> qr(v);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    for (int col = k; col < d; ++col) {
      Mat a = Mat::Zero(k, d);
      a.row(0) = q.col(col).adjoint();
      kraus.push_back(a);
    }
  }
  Channel dec(kraus);
  c.decoder_builder = [dec](long) { return dec; };
  return c;
}

ClassicalCode build_classical_code(const PeripheralStructure& ps) {
  ClassicalCode c;
  for (int k = 0; k < ps.num_blocks(); ++k)
    for (int i = 0; i < ps.blocks[k].d; ++i) c.message_states.push_back(embed_block(ps, k, mat_unit(ps.blocks[k].d, i, i)));
  c.decode_povm_builder = [ps](long t) {
    std::vector<Mat> povm;
    Mat rest = Mat::Identity(ps.dim, ps.dim);
    for (int k = 0; k < ps.num_blocks(); ++k) {
      BlockOrbit o = evolve_block(ps, k, t);
      const Block& b = ps.blocks[o.block];
      for (int i = 0; i < ps.blocks[k].d; ++i) {
        Vec v = o.v.col(i);
        Mat e = b.isometry * kron(v * v.adjoint(), Mat::Identity(b.m, b.m)) * b.isometry.adjoint();
        rest -= e;
        povm.push_back(e);
      }
    }
    povm.push_back(herm_part(rest));
    return povm;
  };
  return c;
}

EACode build_ea_code(const PeripheralStructure& ps) {
  EACode c;
  for (int k = 0; k < ps.num_blocks(); ++k) {
    const int dk = ps.blocks[k].d;
    c.dims.push_back(dk);
    c.encoders.push_back(block_encoder(ps, k));
    for (int a = 0; a < dk; ++a)
      for (int b = 0; b < dk; ++b) c.messages.push_back({k, a, b});
  }
  auto msgs = c.messages;
  c.decode_builder = [ps, msgs](long t) {
    std::vector<Mat> out;
    for (const auto& m : msgs) {
      const int dk = ps.blocks[m.block].d;
      BlockOrbit o = evolve_block(ps, m.block, t);
      const Block& b = ps.blocks[o.block];
      Vec phi = kron(Mat::Identity(dk, dk), o.v * weyl(dk, m.a, m.b)) * max_entangled(dk);
      Mat p = kron(phi * phi.adjoint(), Mat::Identity(b.m, b.m));
      Mat w = kron(Mat::Identity(dk, dk), b.isometry);
      out.push_back(w * p * w.adjoint());
    }
    return out;
  };
  return c;
}

CodeEvaluation evaluate_code(const Channel& ch_t, const QuantumCode& code, long t, unsigned long seed) {
  Channel dec = code.decoder_builder(t);
  if (code.encoder.dim_out() != ch_t.dim_in() || ch_t.dim_out() != dec.dim_in() ||
      dec.dim_out() != code.encoder.dim_in())
    throw Error(ErrorKind::DimensionMismatch, "code does not compose with the channel");
  const int k = code.encoder.dim_in();
  Mat total = dec.transfer() * ch_t.transfer() * code.encoder.transfer();
  CodeEvaluation e;
  e.entanglement_fidelity = total.trace().real() / (static_cast<double>(k) * k);
  e.worst_case_estimate = worst_fidelity_estimate(total, k, seed);
  e.success_prob = kNan;
  e.max_overlap = kNan;
  return e;
}

CodeEvaluation evaluate_code(const Channel& ch_t, const ClassicalCode& code, long t) {
  std::vector<Mat> povm = code.decode_povm_builder(t);
  if (povm.size() != code.message_states.size() + 1)
    throw Error(ErrorKind::DimensionMismatch, "POVM size does not match the message count");
  CodeEvaluation e{kNan, kNan, 1.0, kNan};
  for (size_t m = 0; m < code.message_states.size(); ++m) {
    if (code.message_states[m].rows() != ch_t.dim_in())
      throw Error(ErrorKind::DimensionMismatch, "message state does not match the channel input");
    Mat out = qmemcap::apply(ch_t, code.message_states[m]);
    e.success_prob = std::min(e.success_prob, (povm[m] * out).trace().real());
  }
  return e;
}

CodeEvaluation evaluate_code(const Channel& ch_t, const EACode& code, long t) {
  std::vector<Mat> proj = code.decode_builder(t);
  std::vector<Mat> states;
  std::vector<Mat> marginals;
  CodeEvaluation e{kNan, kNan, 1.0, 0.0};
  for (size_t i = 0; i < code.messages.size(); ++i) {
    const auto& m = code.messages[i];
    const int dk = code.dims[m.block];
    Vec phi = kron(Mat::Identity(dk, dk), weyl(dk, m.a, m.b)) * max_entangled(dk);
    Mat enc = apply_second(code.encoders[m.block], phi * phi.adjoint(), dk);
    if (code.encoders[m.block].dim_out() != ch_t.dim_in())
      throw Error(ErrorKind::DimensionMismatch, "EA code does not compose with the channel");
    Mat s = apply_second(ch_t, enc, dk);
    e.success_prob = std::min(e.success_prob, (proj[i] * s).trace().real());
    marginals.push_back(ptrace_first(s, dk, ch_t.dim_out()));
    states.push_back(std::move(s));
  }
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = i + 1; j < states.size(); ++j) {
      const bool same = code.messages[i].block == code.messages[j].block;
      const Mat& x = same ? states[i] : marginals[i];
      const Mat& y = same ? states[j] : marginals[j];
      double ov = std::abs((x * y).trace()) / (x.norm() * y.norm());
      e.max_overlap = std::max(e.max_overlap, ov);
    }
  return e;
}

nlohmann::json to_json(const CodeEvaluation& e) {
  auto num = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
  return {{"entanglement_fidelity", num(e.entanglement_fidelity)},
          {"worst_case_estimate", num(e.worst_case_estimate)},
          {"success_prob", num(e.success_prob)},
          {"max_overlap", num(e.max_overlap)}};
}

}  // namespace qmemcap
