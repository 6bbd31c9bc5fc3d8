#include <doctest.h>

#include <algorithm>
#include <complex>

#include "helpers.hpp"
#include "qmemcap/chanrep.hpp"
#include "qmemcap/linalg.hpp"

using namespace qmemcap;
using testutil::kraus_apply;

namespace {

std::vector<double> sorted_real(const Eigen::VectorXcd& ev) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev(i).imag()) < 1e-10);
    v.push_back(ev(i).real());
  }
  std::sort(v.begin(), v.end());
  return v;
}

// Transfer built entrywise from the definition T vec(X) = vec(Phi(X)).
Mat transfer_oracle(const Channel& ch) {
  const int din = ch.dim_in();
  const int dout = ch.dim_out();
  Mat t(dout * dout, din * din);
  for (int j = 0; j < din; ++j)
    for (int i = 0; i < din; ++i) {
      Mat out = kraus_apply(ch, mat_unit(din, i, j));
      for (int b = 0; b < dout; ++b)
        for (int a = 0; a < dout; ++a) t(a + b * dout, i + j * din) = out(a, b);
    }
  return t;
}

}  // namespace

TEST_SUITE("chanrep") {
  TEST_CASE("validate_channel accepts CPTP Kraus sets and rejects violations") {
    Channel id = validate_channel({Mat::Identity(2, 2)});
    CHECK(id.dim_in() == 2);
    const double p = 0.5;
    CHECK_NOTHROW(validate_channel({std::sqrt(1 - p) * pauli('i'), std::sqrt(p / 3) * pauli('x'),
                                    std::sqrt(p / 3) * pauli('y'), std::sqrt(p / 3) * pauli('z')}));
    try {
      validate_channel({Mat::Identity(2, 2), Mat::Identity(2, 2)});
      FAIL("expected NotTracePreserving");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotTracePreserving);
    }
    try {
      validate_channel({Mat::Identity(2, 2), Mat::Identity(3, 3)});
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
  }

  TEST_CASE("Choi matrices of identity, full depolarizing and a replacer") {
    Mat omega = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) omega(i * 2 + i, j * 2 + j) = 1.0;
    CHECK((identity_channel(2).choi() - omega).norm() < 1e-12);
    CHECK((testutil::pauli_depolarizing(1.0).choi() - Mat::Identity(4, 4) / 2.0).norm() < 1e-12);
    std::mt19937_64 rng(4);
    Mat delta = random_density(3, rng);
    CHECK((replacer_channel(2, delta).choi() - kron(Mat::Identity(2, 2), delta)).norm() < 1e-12);
  }

  TEST_CASE("transfer spectra of depolarizing and amplitude damping") {
    CHECK((identity_channel(2).transfer() - Mat::Identity(4, 4)).norm() < 1e-14);
    const double p = 0.3;
    auto ev = sorted_real(Eigen::ComplexEigenSolver<Mat>(testutil::pauli_depolarizing(p).transfer()).eigenvalues());
    std::vector<double> want{1 - p, 1 - p, 1 - p, 1.0};
    for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(want[i]).epsilon(1e-12));

    const double g = 0.36;
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - g);
    k1(0, 1) = std::sqrt(g);
    auto ea = sorted_real(Eigen::ComplexEigenSolver<Mat>(Channel({k0, k1}).transfer()).eigenvalues());
    std::vector<double> wa{1 - g, std::sqrt(1 - g), std::sqrt(1 - g), 1.0};
    std::sort(wa.begin(), wa.end());
    for (int i = 0; i < 4; ++i) CHECK(ea[i] == doctest::Approx(wa[i]).epsilon(1e-12));
  }

  TEST_CASE("transfer agrees with the entrywise definition") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      Channel ch = random_channel(2 + trial % 3, 1 + trial % 4, rng);
      CHECK((ch.transfer() - transfer_oracle(ch)).norm() < 1e-12);
      CHECK((transfer_from_choi(ch.choi(), ch.dim_in(), ch.dim_out()) - ch.transfer()).norm() < 1e-12);
    }
  }

  TEST_CASE("compose matches the closed forms for depolarizing and dephasing") {
    Channel a = testutil::pauli_depolarizing(0.2);
    CHECK((compose(identity_channel(2), a).transfer() - a.transfer()).norm() < 1e-12);
    Channel b = testutil::pauli_depolarizing(0.5);
    Channel ab = testutil::pauli_depolarizing(0.2 + 0.5 - 0.2 * 0.5);
    CHECK((compose(a, b).transfer() - ab.transfer()).norm() < 1e-12);

    auto deph = [](double q) {
      return Channel({std::sqrt((1 + q) / 2) * pauli('i'), std::sqrt((1 - q) / 2) * pauli('z')});
    };
    CHECK((compose(deph(0.3), deph(0.6)).transfer() - deph(0.18).transfer()).norm() < 1e-12);
    CHECK_THROWS_AS(compose(identity_channel(2), identity_channel(3)), Error);
  }

  TEST_CASE("tensor products") {
    CHECK((tensor(identity_channel(2), identity_channel(2)).transfer() - Mat::Identity(16, 16)).norm() < 1e-12);
    Channel full = tensor(testutil::pauli_depolarizing(1.0), testutil::pauli_depolarizing(1.0));
    for (int i = 0; i < 4; ++i)
      CHECK((qmemcap::apply(full, mat_unit(4, i, i)) - Mat::Identity(4, 4) / 4.0).norm() < 1e-12);
    std::mt19937_64 rng(6);
    Channel t = tensor(random_channel(2, 2, rng), random_channel(3, 2, rng));
    CHECK(t.dim_in() == 6);
    CHECK(t.dim_out() == 6);
  }

  TEST_CASE("tensor transfer is a permuted Kronecker product") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const int da = 2, db = 2 + trial % 2;
      Channel a = random_channel(da, 2, rng), b = random_channel(db, 3, rng);
      Mat t = tensor(a, b).transfer();
      // vec(X (x) Y) = perm * (vec X (x) vec Y) with column stacking
      const int d = da * db;
      Mat perm = Mat::Zero(d * d, d * d);
      for (int i1 = 0; i1 < da; ++i1)
        for (int j1 = 0; j1 < da; ++j1)
          for (int i2 = 0; i2 < db; ++i2)
            for (int j2 = 0; j2 < db; ++j2) {
              const int row = (i1 * db + i2) + (j1 * db + j2) * d;
              const int col = (i1 + j1 * da) * db * db + (i2 + j2 * db);
              perm(row, col) = 1.0;
            }
      Mat want = perm * kron(a.transfer(), b.transfer()) * perm.transpose();
      CHECK((t - want).norm() < 1e-10);
    }
  }

  TEST_CASE("complementary channels and Stinespring marginals") {
    Channel c = complementary_channel(identity_channel(2));
    CHECK(c.dim_out() == 1);
    CHECK(std::abs(qmemcap::apply(c, mat_unit(2, 0, 0))(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(qmemcap::apply(c, mat_unit(2, 0, 1))(0, 0)) < 1e-14);

    Channel deph({mat_unit(2, 0, 0), mat_unit(2, 1, 1)});
    Channel dc = complementary_channel(deph);
    std::mt19937_64 rng(8);
    Mat rho = random_density(2, rng);
    Mat want = Mat::Zero(2, 2);
    want(0, 0) = rho(0, 0);
    want(1, 1) = rho(1, 1);
    CHECK((qmemcap::apply(dc, rho) - want).norm() < 1e-14);

    Channel r3 = random_channel(3, 3, rng);
    Mat v = stinespring(r3);
    CHECK((v.adjoint() * v - Mat::Identity(3, 3)).norm() < 1e-12);
    Mat x = random_density(3, rng);
    Mat big = v * x * v.adjoint();
    CHECK((ptrace_second(big, 3, 3) - qmemcap::apply(r3, x)).norm() < 1e-12);
    CHECK((ptrace_first(big, 3, 3) - qmemcap::apply(complementary_channel(r3), x)).norm() < 1e-12);
  }

  TEST_CASE("apply examples") {
    std::mt19937_64 rng(9);
    Mat rho = random_density(2, rng);
    CHECK((qmemcap::apply(identity_channel(2), rho) - rho).norm() < 1e-14);
    CHECK((qmemcap::apply(testutil::pauli_depolarizing(1.0), rho) - Mat::Identity(2, 2) / 2.0).norm() < 1e-12);
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 0) = 1;
    k1(0, 1) = 1;
    CHECK((qmemcap::apply(Channel({k0, k1}), rho) - mat_unit(2, 0, 0)).norm() < 1e-12);
    CHECK_THROWS_AS(qmemcap::apply(identity_channel(3), rho), Error);
  }

  TEST_CASE("Choi to Kraus round trip on matrix units") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + trial % 3;
      Channel ch = random_channel(d, 1 + trial % 5, rng);
      Channel back = from_choi(ch.choi(), d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          CHECK((kraus_apply(back, mat_unit(d, i, j)) - kraus_apply(ch, mat_unit(d, i, j))).norm() < 1e-10);
    }
  }

  TEST_CASE("random channels validate and their representations agree") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + trial % 3;
      Channel ch = random_channel(d, 1 + trial % 4, rng);
      Channel v = validate_channel(ch.kraus());
      CHECK((v.transfer() - transfer_oracle(ch)).norm() < 1e-10);
      CHECK((choi_from_transfer(ch.transfer(), d, d) - ch.choi()).norm() < 1e-10);
      CHECK(herm_eigenvalues(ch.choi()).minCoeff() > -1e-10);
      CHECK((ptrace_second(ch.choi(), d, d) - Mat::Identity(d, d)).norm() < 1e-10);
    }
  }

  TEST_CASE("transfer multiplicativity under composition") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + trial % 3;
      Channel a = random_channel(d, 1 + trial % 3, rng), b = random_channel(d, 2, rng);
      CHECK((compose(a, b).transfer() - a.transfer() * b.transfer()).norm() < 1e-10);
    }
  }

  TEST_CASE("channel JSON round trip and ragged input") {
    std::mt19937_64 rng(13);
    Channel ch = random_channel(2, 2, rng);
    Channel back = channel_from_json(channel_to_json(ch));
    CHECK((back.transfer() - ch.transfer()).norm() < 1e-14);
    auto ragged = nlohmann::json::parse(R"({"dim_in":2,"dim_out":2,"kraus":[[[[1,0],[0,0]],[[0,0]]]]})");
    try {
      channel_from_json(ragged);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
}
