#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qmemcap/spectral.hpp"

using namespace qmemcap;

namespace {

std::vector<double> sorted_moduli(const Mat& t) {
  Eigen::ComplexEigenSolver<Mat> es(t);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(v.begin(), v.end());
  return v;
}

Channel amp_damp(double g) {
  Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1 - g);
  k1(0, 1) = std::sqrt(g);
  return Channel({k0, k1});
}

Channel deph(double q) { return Channel({std::sqrt((1 + q) / 2) * pauli('i'), std::sqrt((1 - q) / 2) * pauli('z')}); }

// transfer of X -> Tr(X) sigma
Mat replacer_transfer(const Mat& sigma) {
  const int d = static_cast<int>(sigma.rows());
  return vec(sigma) * vec(Mat::Identity(d, d)).adjoint();
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("spectrum examples") {
    SpectrumReport s = spectrum(testutil::pauli_depolarizing(0.5));
    CHECK(s.eigenvalues.size() == 4);
    CHECK(s.peripheral_indices.size() == 1);
    CHECK(s.mu == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<double> want{1.0, 0.5, 0.5, 0.5};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(s.eigenvalues[i] - cplx(want[i], 0)) < 1e-12);

    SpectrumReport sd = spectrum(deph(0.3));
    CHECK(sd.peripheral_indices.size() == 2);
    CHECK(sd.mu == doctest::Approx(0.3).epsilon(1e-12));

    SpectrumReport sx = spectrum(unitary_channel(pauli('x')));
    CHECK(sx.peripheral_indices.size() == 4);
    CHECK(sx.mu == 0.0);
    int minus = 0;
    for (cplx l : sx.eigenvalues) minus += std::abs(l + 1.0) < 1e-12;
    CHECK(minus == 2);
  }

  TEST_CASE("spectral gap examples") {
    CHECK(spectral_gap(testutil::pauli_depolarizing(0.25)) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(spectral_gap(amp_damp(0.36)) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(spectral_gap(identity_channel(3)) == 0.0);
  }

  TEST_CASE("peripheral projector examples") {
    CHECK((peripheral_projector(identity_channel(2)).transfer - Mat::Identity(4, 4)).norm() < 1e-10);
    PeripheralProjector pd = peripheral_projector(testutil::pauli_depolarizing(0.5));
    CHECK(pd.rank == 1);
    CHECK((pd.transfer - replacer_transfer(Mat::Identity(2, 2) / 2.0)).norm() < 1e-10);
    PeripheralProjector pa = peripheral_projector(amp_damp(0.5));
    CHECK((pa.transfer - replacer_transfer(mat_unit(2, 0, 0))).norm() < 1e-10);
  }

  TEST_CASE("asymptotic part examples") {
    Channel id = identity_channel(2);
    CHECK((asymptotic_part(id, peripheral_projector(id)).transfer() - Mat::Identity(4, 4)).norm() < 1e-10);
    Channel dep = testutil::pauli_depolarizing(0.4);
    CHECK((asymptotic_part(dep, peripheral_projector(dep)).transfer() - replacer_transfer(Mat::Identity(2, 2) / 2.0))
              .norm() < 1e-10);
    std::mt19937_64 rng(3);
    Channel u = unitary_channel(haar_unitary(3, rng));
    CHECK((asymptotic_part(u, peripheral_projector(u)).transfer() - u.transfer()).norm() < 1e-9);
  }

  TEST_CASE("projector invariants on random channels") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + trial % 3;
      Channel ch = trial % 2 ? random_channel(d, 1 + trial % 3, rng)
                             : testutil::unitary_plus_mixing(d > 2 ? 2 : 1, d > 2 ? d - 2 : 1, rng);
      PeripheralProjector p = peripheral_projector(ch);
      const Mat& tp = p.transfer;
      CHECK((tp * tp - tp).norm() <= 1e-8);
      CHECK((tp * ch.transfer() - ch.transfer() * tp).norm() <= 1e-8);
      SpectrumReport s = spectrum(ch);
      CHECK(p.rank == static_cast<int>(s.peripheral_indices.size()));
      bool has_one = false;
      for (int i : s.peripheral_indices) has_one |= std::abs(s.eigenvalues[i] - 1.0) < 1e-8;
      CHECK(has_one);
      for (size_t i = 0; i < s.eigenvalues.size(); ++i)
        if (std::find(s.peripheral_indices.begin(), s.peripheral_indices.end(), static_cast<int>(i)) ==
            s.peripheral_indices.end())
          CHECK(std::abs(s.eigenvalues[i]) <= s.mu + 1e-10);

      // Psi_inf spectrum: peripheral moduli plus zeros
      const int dd = ch.dim_in() * ch.dim_in();
      std::vector<double> got = sorted_moduli(asymptotic_transfer(ch, p));
      std::vector<double> want(dd - p.rank, 0.0);
      for (int i : s.peripheral_indices) want.push_back(std::abs(s.eigenvalues[i]));
      std::sort(want.begin(), want.end());
      for (int i = 0; i < dd; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8).scale(1.0));
    }
  }

  TEST_CASE("distance to the asymptotic dynamics decreases past t0") {
    std::mt19937_64 rng(22);
    int checked = 0;
    for (int trial = 0; trial < 20 && checked < 5; ++trial) {
      Channel ch = random_channel(2 + trial % 2, 2, rng);
      SpectrumReport s = spectrum(ch);
      if (s.gap_margin <= 0.1) continue;
      ++checked;
      PeripheralProjector p = peripheral_projector(ch);
      const long t0 = static_cast<long>(std::ceil(s.mu / (1.0 - s.mu)));
      Mat tt = Mat::Identity(ch.transfer().rows(), ch.transfer().cols());
      for (long t = 0; t < t0; ++t) tt = ch.transfer() * tt;
      double prev = (tt - tt * p.transfer).norm();
      for (int step = 0; step < 20; ++step) {
        tt = ch.transfer() * tt;
        const double cur = (tt - tt * p.transfer).norm();
        CHECK(cur <= prev + 1e-15);
        prev = cur;
      }
    }
    CHECK(checked == 5);
  }

  TEST_CASE("strict mode rejects an ambiguous periphery") {
    // eigenvalue 1 - 5e-8 lies outside tol_peri = 1e-8 but within 10 tol_peri of it
    Channel near = testutil::pauli_depolarizing(5e-8);
    CHECK_NOTHROW(spectrum(near));
    try {
      spectrum(near, 1e-8, true);
      FAIL("expected AmbiguousPeriphery");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AmbiguousPeriphery);
    }
  }
}
