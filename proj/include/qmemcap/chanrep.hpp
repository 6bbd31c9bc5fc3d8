#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmemcap/types.hpp"

namespace qmemcap {

// CPTP map held as Kraus operators (dim_out x dim_in). Choi and transfer
// matrices are computed once at construction; the object is immutable.
//
// Conventions (column-stacking vec):
//   transfer T = sum_i conj(K_i) (x) K_i, T vec(X) = vec(Phi(X)),
//     T has dim_out^2 rows and dim_in^2 columns;
//   choi J = sum_ij |i><j| (x) Phi(|i><j|), input factor first.
class Channel {
 public:
  Channel() = default;
  // No validation; use validate_channel for untrusted input.
  explicit Channel(std::vector<Mat> kraus);

  int dim_in() const { return din_; }
  int dim_out() const { return dout_; }
  bool square() const { return din_ == dout_; }
  const std::vector<Mat>& kraus() const { return kraus_; }
  const Mat& choi() const { return choi_; }
  const Mat& transfer() const { return transfer_; }

 private:
  int din_ = 0;
  int dout_ = 0;
  std::vector<Mat> kraus_;
  Mat choi_;
  Mat transfer_;
};

Channel validate_channel(std::vector<Mat> kraus, double tol = 1e-9);

Mat to_choi(const Channel& ch);
Mat to_transfer(const Channel& ch);

Mat choi_from_transfer(const Mat& t, int din, int dout);
Mat transfer_from_choi(const Mat& j, int din, int dout);

// Minimal Kraus set from a Choi matrix; eigenvalues below rel_cut * max are
// dropped. Negative eigenvalues below -psd_tol raise ProjectorNotCP.
std::vector<Mat> choi_to_kraus(const Mat& j, int din, int dout, double rel_cut = 1e-12,
                               double psd_tol = 1e-7);
Channel from_choi(const Mat& j, int din, int dout, double psd_tol = 1e-7);
Channel from_transfer(const Mat& t, int din, int dout, double psd_tol = 1e-7);

// a after b
Channel compose(const Channel& a, const Channel& b);
// t-fold self composition, computed on transfer matrices
Channel power(const Channel& ch, int t);
Channel tensor(const Channel& a, const Channel& b);
Channel complementary_channel(const Channel& ch);
// Stinespring isometry V: C^din -> C^dout (x) C^n, output factor first.
Mat stinespring(const Channel& ch);
Channel adjoint_channel(const Channel& ch);

Mat apply(const Channel& ch, const Mat& rho);
// Phi applied to the second factor of a bipartite operator on C^dr (x) C^din
Mat apply_second(const Channel& ch, const Mat& x, int dr);

void check_density(const Mat& rho, const Tolerances& tol = {});

Channel identity_channel(int d);
Channel unitary_channel(const Mat& u);
Channel replacer_channel(int din, const Mat& sigma);
Channel random_channel(int d, int kraus_count, std::mt19937_64& rng);
Channel random_channel(int din, int dout, int kraus_count, std::mt19937_64& rng);

Mat pauli(char which);

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const Channel& ch);
Channel channel_from_json(const nlohmann::json& j, double tol = 1e-9);
Channel load_channel(const std::string& path, double tol = 1e-9);

}  // namespace qmemcap
