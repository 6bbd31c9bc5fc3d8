#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qmemcap/codes.hpp"
#include "qmemcap/convergence.hpp"

using namespace qmemcap;

TEST_SUITE("convergence") {
  TEST_CASE("analytic bound examples") {
    // d = 2, mu = 1/2, l = 40 written out term by term
    const double e2 = std::exp(2.0);
    const double want = 4 * e2 * 2 * 5 / std::pow(1 - (41.0 / 40.0) * 0.5, 1.5) * std::pow(40 * 0.75 / 0.5, 3) *
                        std::pow(0.5, 40);
    CHECK(analytic_bound(40, 0.5, 2) == doctest::Approx(want).epsilon(1e-12));

    CHECK(analytic_bound(5, 0.0, 2) == 0.0);
    CHECK(analytic_bound(1, 0.0, 1) == 0.0);
    // at mu = 0 only l = D - 1 leaves a finite nonzero limit
    CHECK(analytic_bound(3, 0.0, 2) == doctest::Approx(4 * e2 * 2 * 5 * 27.0).epsilon(1e-12));
    CHECK(std::isinf(analytic_bound(2, 0.0, 2)));
    CHECK_THROWS_AS(analytic_bound(1, 0.5, 2), Error);

    // eventually decreasing
    double prev = analytic_bound(20, 0.5, 2);
    for (long l = 21; l <= 200; ++l) {
      const double cur = analytic_bound(l, 0.5, 2);
      CHECK(cur < prev);
      prev = cur;
    }
  }

  TEST_CASE("the analytic bound dominates the measured distance at l = 40") {
    std::vector<MeasuredPoint> m = measured_curve(testutil::pauli_depolarizing(0.5), 40);
    CHECK(analytic_bound(40, 0.5, 2) >= m.back().delta.lower);
  }

  TEST_CASE("time to threshold") {
    CHECK(time_to_threshold(0.9, 0.01, 0.5, 2) <= 10);
    long prev = 0;
    for (double delta : {0.5, 0.1, 0.01}) {
      const long t = time_to_threshold(delta, 0.5, 0.9, 2);
      CHECK(t >= prev);
      prev = t;
    }
    // D^alpha (t(1-mu^2)/mu)^D mu^t <= delta' at the returned time, D = 4
    const double mu = 0.5, mu0 = 0.9, delta = 0.01, a = 1.5;
    const long t = time_to_threshold(delta, mu, mu0, 2, a);
    const double dp = delta * std::pow(1 - mu0, 1.5) / (8 * std::exp(2.0));
    const double lhs = std::pow(4.0, a) * std::pow(t * (1 - mu * mu) / mu, 4) * std::pow(mu, t);
    CHECK(lhs <= dp);
    CHECK(t >= mu / (mu0 - mu));
  }

  TEST_CASE("threshold self-consistency grid") {
    for (double mu : {0.1, 0.5, 0.8})
      for (double delta : {0.3, 0.05, 0.001})
        for (int d : {2, 3}) {
          CAPTURE(mu);
          CAPTURE(delta);
          CAPTURE(d);
          const double mu0 = 0.5 * (1 + mu);
          const long t = time_to_threshold(delta, mu, mu0, d);
          CHECK(t >= mu / (mu0 - mu));
          CHECK(analytic_bound(t, mu, d) <= delta);
        }
  }

  TEST_CASE("iid thresholds") {
    const double mu = 0.5, mu0 = 0.9, delta = 0.01;
    CHECK(iid_time_to_threshold(1, 2, mu, mu0, delta) == time_to_threshold(delta, mu, mu0, 2));
    const long t100 = iid_time_to_threshold(100, 2, mu, mu0, delta);
    CHECK(100 * analytic_bound(t100, mu, 2) <= delta);
    const long t1 = iid_time_to_threshold(1, 2, mu, mu0, delta);
    const long t32 = iid_time_to_threshold(32, 2, mu, mu0, delta);
    const long t1024 = iid_time_to_threshold(1024, 2, mu, mu0, delta);
    CHECK(t1024 > t1);
    CHECK(std::abs((t1024 - t32) - (t32 - t1)) <= 2);
  }

  TEST_CASE("memory lifetime") {
    std::mt19937_64 rng(41);
    PeripheralStructure dep = analyze_structure(testutil::pauli_depolarizing(0.5), rng);
    MemoryLifetime m = memory_lifetime_bound(dep, 0.25, 0.5, 0.75);
    CHECK(m.ceiling == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(m.t_useless.has_value());
    CHECK(*m.t_useless == time_to_threshold(0.25, 0.5, 0.75, 2));
    for (const auto& [t, c] : m.curve) CHECK(c >= 0.0);

    Mat u = haar_unitary(2, rng);
    Channel noise = unitary_channel(u);
    Channel fixed = compose(unitary_channel(u.adjoint()), noise);
    PeripheralStructure full = analyze_structure(fixed, rng);
    CHECK_FALSE(memory_lifetime_bound(full, 0.25, 0.0, 0.5).t_useless.has_value());

    long prev = 0;
    for (long copies : {1L, 4L, 16L, 64L}) {
      MemoryLifetime mc = memory_lifetime_bound(dep, 0.25, 0.5, 0.75, copies);
      REQUIRE(mc.t_useless.has_value());
      CHECK(*mc.t_useless >= prev);
      prev = *mc.t_useless;
    }
    CHECK_THROWS_AS(memory_lifetime_bound(dep, 0.6, 0.5, 0.75), Error);
  }

  TEST_CASE("measured curves are bracketed and sit below the analytic bound") {
    std::mt19937_64 rng(42);
    std::vector<Channel> chans = {testutil::pauli_depolarizing(0.5), amplitude_damping(0.5), dephasing(0.3),
                                  shift_channel(3), random_channel(3, 2, rng)};
    for (size_t c = 0; c < chans.size(); ++c) {
      CAPTURE(c);
      const Channel& ch = chans[c];
      const double mu = spectrum(ch).mu;
      const int d = ch.dim_in();
      std::vector<MeasuredPoint> m = measured_curve(ch, 60);
      for (const auto& p : m) {
        CAPTURE(p.t);
        CHECK(p.delta.lower <= p.delta.upper + 1e-9);
        CHECK(p.delta.upper <= 2.0 + 1e-9);
        if (static_cast<double>(p.t) > mu / (1 - mu)) CHECK(analytic_bound(p.t, mu, d) >= p.delta.lower);
      }
    }
  }

  TEST_CASE("unitary channels have zero distance to their asymptotic part") {
    std::mt19937_64 rng(43);
    for (const auto& p : measured_curve(unitary_channel(haar_unitary(2, rng)), 10)) {
      CHECK(p.delta.lower == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
      CHECK(p.delta.upper == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("convergence report and CSV") {
    ConvergenceReport r = convergence_report(testutil::pauli_depolarizing(0.5), 5);
    CHECK(r.mu == doctest::Approx(0.5));
    CHECK(r.measured_curve.size() == 5);
    const std::string csv = to_csv(r);
    CHECK(csv.rfind("t,bound,lower,upper\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  }
}
