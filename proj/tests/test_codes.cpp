#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qmemcap/codes.hpp"
#include "qmemcap/convergence.hpp"
#include "qmemcap/opsys.hpp"

using namespace qmemcap;
using testutil::kraus_apply;

namespace {

// <psi+|(id (x) Phi)(psi+)|psi+> from the Kraus operators of dec o ch o enc
double ent_fidelity_oracle(const Channel& enc, const Channel& ch, const Channel& dec) {
  const int k = enc.dim_in();
  double f = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Mat out = kraus_apply(dec, kraus_apply(ch, kraus_apply(enc, mat_unit(k, i, j))));
      f += out(i, j).real();
    }
  return f / (static_cast<double>(k) * k);
}

// dimension of {X : [K_i, X] = [K_i^+, X] = 0}
int commutant_dim(const std::vector<Mat>& ops) {
  const int d = static_cast<int>(ops[0].rows());
  const Mat id = Mat::Identity(d, d);
  Mat stack(0, d * d);
  for (const Mat& k : ops)
    for (const Mat& a : {k, Mat(k.adjoint())}) {
      // vec(AX - XA) = (1 (x) A - A^T (x) 1) vec X
      Mat c = kron(id, a) - kron(a.transpose(), id);
      Mat grown(stack.rows() + c.rows(), d * d);
      grown << stack, c;
      stack = grown;
    }
  Eigen::JacobiSVD<Mat> svd(stack);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 1e-9;
  return d * d - rank;
}

struct Counts {
  int classical;
  int ea;
};

void check_codes(const Channel& ch, const std::vector<long>& times, std::mt19937_64& rng) {
  PeripheralStructure ps = analyze_structure(ch, rng);
  Channel r = reversal_channel(ch, ps);
  ClassicalCode cc = build_classical_code(ps);
  EACode ea = build_ea_code(ps);
  for (long t : times) {
    CAPTURE(t);
    Channel cht = power(ch, static_cast<int>(t));
    for (int k = 0; k < ps.num_blocks(); ++k) {
      QuantumCode q = build_quantum_code(ps, k, r);
      CodeEvaluation e = evaluate_code(cht, q, t);
      CHECK(e.entanglement_fidelity >= 1 - 1e-8);
      CHECK(e.worst_case_estimate >= 1 - 1e-8);
      CHECK(ent_fidelity_oracle(q.encoder, cht, q.decoder_builder(t)) >= 1 - 1e-8);
    }
    CHECK(evaluate_code(cht, cc, t).success_prob >= 1 - 1e-8);
    CodeEvaluation ee = evaluate_code(cht, ea, t);
    CHECK(ee.success_prob >= 1 - 1e-8);
    CHECK(ee.max_overlap <= 1e-8);
    // the POVM is a resolution of the identity
    std::vector<Mat> povm = cc.decode_povm_builder(t);
    Mat sum = Mat::Zero(ch.dim_in(), ch.dim_in());
    for (const Mat& e : povm) {
      sum += e;
      CHECK(herm_eigenvalues(e).minCoeff() > -1e-9);
    }
    CHECK((sum - Mat::Identity(ch.dim_in(), ch.dim_in())).norm() < 1e-9);
  }
}

}  // namespace

TEST_SUITE("codes") {
  TEST_CASE("code sizes") {
    std::mt19937_64 rng(51);
    auto counts = [&](const Channel& ch) {
      PeripheralStructure ps = analyze_structure(ch, rng);
      return Counts{static_cast<int>(build_classical_code(ps).message_states.size()),
                    static_cast<int>(build_ea_code(ps).messages.size())};
    };
    Counts id = counts(identity_channel(2));
    CHECK(id.classical == 2);
    CHECK(id.ea == 4);
    Counts dep = counts(testutil::pauli_depolarizing(0.5));
    CHECK(dep.classical == 1);
    CHECK(dep.ea == 1);
    Counts deph = counts(dephasing(0.3));
    CHECK(deph.classical == 2);
    CHECK(deph.ea == 2);

    PeripheralStructure pd = analyze_structure(dephasing(0.3), rng);
    for (int k = 0; k < pd.num_blocks(); ++k)
      CHECK(build_quantum_code(pd, k, reversal_channel(dephasing(0.3), pd)).log_dim == 0.0);
  }

  TEST_CASE("identity code on the identity channel") {
    std::mt19937_64 rng(52);
    Channel id = identity_channel(2);
    PeripheralStructure ps = analyze_structure(id, rng);
    QuantumCode q = build_quantum_code(ps, 0, reversal_channel(id, ps));
    CodeEvaluation e = evaluate_code(id, q, 1);
    CHECK(e.entanglement_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.worst_case_estimate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isnan(e.success_prob));
    CHECK(to_json(e)["success_prob"].is_null());
    CodeEvaluation v = evaluate_code(id, isometry_code(Mat::Identity(2, 2)), 3);
    CHECK(v.entanglement_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("structure codes are exact on small channels") {
    std::mt19937_64 rng(53);
    const std::vector<long> times{1, 2, 3, 7};
    check_codes(identity_channel(2), times, rng);
    check_codes(dephasing(cplx(0.2, 0.3)), times, rng);
    check_codes(amplitude_damping(0.4), times, rng);
    check_codes(shift_channel(3), times, rng);
    check_codes(testutil::unitary_plus_mixing(2, 1, rng), times, rng);
    check_codes(unitary_channel(pauli('x')), times, rng);
  }

  TEST_CASE("three-qubit correlated Pauli noise stores two qubits") {
    Channel cp = correlated_pauli(3, 0.4, 0.2, 0.15, 0.25);
    // unital mixed-unitary channel: the fixed points are the commutant of the
    // Kraus operators, here M_4 (x) 1_2 of dimension 16 with a trivial centre
    CHECK(commutant_dim(cp.kraus()) == 16);
    std::mt19937_64 rng(54);
    PeripheralStructure ps = analyze_structure(cp, rng);
    REQUIRE(ps.num_blocks() == 1);
    QuantumCode q = build_quantum_code(ps, 0, reversal_channel(cp, ps));
    CHECK(q.log_dim == 2.0);
    for (long t : {1L, 5L, 20L, 50L}) {
      Channel cht = power(cp, static_cast<int>(t));
      CHECK(evaluate_code(cht, q, t).entanglement_fidelity >= 1 - 1e-9);
    }
    CHECK(build_ea_code(ps).messages.size() == 16);
  }

  TEST_CASE("random codes on strong depolarizing noise") {
    std::mt19937_64 rng(55);
    Channel dep = testutil::pauli_depolarizing(0.9);
    Channel dep10 = power(dep, 10);
    for (int trial = 0; trial < 5; ++trial) {
      QuantumCode q = isometry_code(haar_isometry(2, 2, rng));
      CodeEvaluation e = evaluate_code(dep10, q, 10);
      CHECK(e.entanglement_fidelity <= 0.3);
      CHECK(e.entanglement_fidelity == doctest::Approx(ent_fidelity_oracle(q.encoder, dep10, q.decoder_builder(10))));
    }
  }

  TEST_CASE("fidelity of any code is capped by the replacer value plus the convergence bound") {
    std::mt19937_64 rng(56);
    const double mu = 0.5;
    Channel dep = testutil::pauli_depolarizing(0.5);
    for (long t = 2; t <= 20; t += 3) {
      Channel cht = power(dep, static_cast<int>(t));
      for (int trial = 0; trial < 3; ++trial) {
        QuantumCode q = isometry_code(haar_isometry(2, 2, rng));
        const double f = evaluate_code(cht, q, t).entanglement_fidelity;
        CHECK(f <= 0.25 + analytic_bound(t, mu, 2));
      }
    }
  }

  TEST_CASE("zero-error classical capacity is achieved by the classical code") {
    std::mt19937_64 rng(57);
    for (const std::string spec : {"identity:d=3", "dephasing", "shift:d=3", "depolarizing", "amplitude_damping"}) {
      CAPTURE(spec);
      Channel ch = zoo_from_spec(spec).channel;
      PeripheralStructure ps = analyze_structure(ch, rng);
      ZeroErrorReport z = zero_error_capacities(ch, rng);
      CHECK(z.c0 == doctest::Approx(std::log2(static_cast<double>(build_classical_code(ps).message_states.size()))));
      CHECK(z.cea0 == doctest::Approx(std::log2(static_cast<double>(build_ea_code(ps).messages.size()))));
      CHECK(z.q0 == doctest::Approx(std::log2(static_cast<double>(ps.max_d()))));
    }
  }

  TEST_CASE("zoo lookup") {
    CHECK(zoo_names().size() == 9);
    CHECK(zoo("depolarizing", {{"p", 0.1}, {"d", 3}}).channel.dim_in() == 3);
    try {
      zoo("nonsense");
      FAIL("expected UnknownChannel");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownChannel);
    }
    try {
      zoo_from_spec("depolarizing:q=0.1");
      FAIL("expected InvalidArgument");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
    try {
      zoo_from_spec("depolarizing:p=abc");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
    ExpectedStructure sw = schur_weyl_qubits(3);
    CHECK(sw.d == std::vector<int>{2, 1});
    CHECK(sw.m == std::vector<int>{2, 4});
    ExpectedStructure sw4 = schur_weyl_qubits(4);
    CHECK(sw4.d == std::vector<int>{3, 2, 1});
    CHECK(sw4.m == std::vector<int>{3, 1, 5});
  }
}
