#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "qmemcap/capacity.hpp"
#include "qmemcap/convergence.hpp"

using namespace qmemcap;

namespace {

// qubit states on a grid of the Bloch ball, including the centre
std::vector<Mat> bloch_grid(int radial, int polar, int azimuthal) {
  std::vector<Mat> out{Mat::Identity(2, 2) / 2.0};
  const double pi = std::acos(-1.0);
  for (int ir = 1; ir <= radial; ++ir) {
    const double r = static_cast<double>(ir) / radial;
    for (int it = 0; it <= polar; ++it) {
      const double th = pi * it / polar;
      for (int ip = 0; ip < azimuthal; ++ip) {
        const double ph = 2 * pi * ip / azimuthal;
        Mat rho = Mat::Identity(2, 2) / 2.0;
        rho += 0.5 * r *
               (std::sin(th) * std::cos(ph) * pauli('x') + std::sin(th) * std::sin(ph) * pauli('y') +
                std::cos(th) * pauli('z'));
        out.push_back(rho);
        if (it == 0 || it == polar) break;
      }
    }
  }
  return out;
}

// log2 of the largest generalized eigenvalue of (rho, s), s invertible
double dmax_oracle(const Mat& rho, const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  Mat inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                 es.eigenvectors().adjoint();
  Mat m = inv_sqrt * rho * inv_sqrt;
  Eigen::SelfAdjointEigenSolver<Mat> em(0.5 * (m + m.adjoint()));
  return std::log2(em.eigenvalues().maxCoeff());
}

double imax_grid(const Channel& ch) {
  const Mat rho = ch.choi() / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for (const Mat& s : bloch_grid(20, 16, 24)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    if (es.eigenvalues().minCoeff() < 1e-9) continue;
    best = std::min(best, dmax_oracle(rho, kron(Mat::Identity(2, 2) / 2.0, s)));
  }
  return best;
}

double diamond_grid(const Mat& j) {
  double best = 0.0;
  for (const Mat& rho : bloch_grid(10, 16, 24)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    Mat sq = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<cplx>().asDiagonal() *
             es.eigenvectors().adjoint();
    // input factor first; transpose is irrelevant for the trace norm maximum over all rho
    Mat w = kron(sq, Mat::Identity(2, 2));
    Eigen::SelfAdjointEigenSolver<Mat> em(w * j * w);
    best = std::max(best, em.eigenvalues().cwiseAbs().sum());
  }
  return best;
}

}  // namespace

TEST_SUITE("sdp") {
  TEST_CASE("i_max examples") {
    IMaxResult id = i_max_of_channel(identity_channel(2));
    CHECK(id.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(id.gap <= 1e-6);
    CHECK(imax_grid(identity_channel(2)) == doctest::Approx(2.0).epsilon(1e-12));

    IMaxResult rep = i_max_of_channel(replacer_channel(2, Mat::Identity(2, 2) / 2.0));
    CHECK(std::abs(rep.value) < 1e-6);

    Channel deph({mat_unit(2, 0, 0), mat_unit(2, 1, 1)});
    IMaxResult dp = i_max_of_channel(deph);
    CHECK(dp.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(imax_grid(deph) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("i_max agrees with a Bloch-ball grid search") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
      CAPTURE(trial);
      Channel ch = random_channel(2, 1 + trial % 3, rng);
      IMaxResult r = i_max_of_channel(ch);
      const double grid = imax_grid(ch);
      CHECK(r.value <= grid + 1e-6);
      CHECK(r.value >= grid - 0.02);
      // the returned sigma attains the value
      CHECK(dmax_oracle(ch.choi() / 2.0, kron(Mat::Identity(2, 2) / 2.0, r.sigma)) ==
            doctest::Approx(r.value).epsilon(1e-5));
    }
  }

  TEST_CASE("diamond norm of the zero map") {
    NormInterval z = diamond_norm_interval(testutil::pauli_depolarizing(0.3), testutil::pauli_depolarizing(0.3));
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);
  }

  TEST_CASE("identity against full depolarizing") {
    Channel id = identity_channel(2), dep = testutil::pauli_depolarizing(1.0);
    NormInterval n = diamond_norm_interval(id, dep);
    CHECK(n.converged);
    CHECK(n.lower <= n.upper + 1e-9);
    CHECK(n.lower == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(n.upper == doctest::Approx(1.5).epsilon(1e-6));
    const double grid = diamond_grid(Mat(id.choi() - dep.choi()));
    CHECK(grid <= n.upper + 1e-9);
    CHECK(grid == doctest::Approx(1.5).epsilon(1e-9));
  }

  TEST_CASE("depolarizing pairs") {
    const std::vector<std::pair<double, double>> pq = {{0.1, 0.4}, {0.5, 0.55}, {0.0, 0.9}};
    for (auto [p, q] : pq) {
      CAPTURE(p);
      CAPTURE(q);
      NormInterval n = diamond_norm_interval(testutil::pauli_depolarizing(p), testutil::pauli_depolarizing(q));
      CHECK(n.lower >= std::abs(p - q) - 1e-9);
      CHECK(n.lower <= 1.5 * std::abs(p - q) + 1e-6);
      CHECK(n.upper >= 1.5 * std::abs(p - q) - 1e-6);
      CHECK(n.upper - n.lower <= 1e-5);
    }
  }

  TEST_CASE("random channel pairs bracket the grid value") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 5; ++trial) {
      CAPTURE(trial);
      Channel a = random_channel(2, 2, rng), b = random_channel(2, 2, rng);
      NormInterval n = diamond_norm_interval(a, b);
      const double grid = diamond_grid(Mat(a.choi() - b.choi()));
      CHECK(n.lower <= n.upper + 1e-9);
      CHECK(grid <= n.upper + 1e-7);
      CHECK(n.lower >= grid - 1e-2);
      CHECK(n.converged);
    }
    Channel a = random_channel(3, 2, rng), b = random_channel(3, 3, rng);
    NormInterval n3 = diamond_norm_interval(a, b);
    CHECK(n3.converged);
    CHECK(n3.lower <= n3.upper + 1e-9);
    CHECK(n3.upper - n3.lower <= 1e-4);
  }
}
