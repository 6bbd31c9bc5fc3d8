#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmemcap/blockstruct.hpp"
#include "qmemcap/chanrep.hpp"

namespace qmemcap {

struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool converged = true;  // false: SDP failed, upper is the loose fallback
};

// Diamond norm of the Hermitian-preserving map with Choi matrix j (input
// factor first). Lower: ascent over pure inputs (restarts seeded by seed).
// Upper: min ||Tr_B Y||_inf s.t. Y >= J, Y >= -J.
NormInterval diamond_norm_interval(const Mat& j, int din, int dout, unsigned long seed = 11, int restarts = 20);
NormInterval diamond_norm_interval(const Channel& a, const Channel& b, unsigned long seed = 11);

// 4e^2 d (d^2+1) / (1-(1+1/l)mu)^{3/2} (l(1-mu^2)/mu)^{d^2-1} mu^l, for l > mu/(1-mu).
// At mu = 0 the mu -> 0 limit is returned.
double analytic_bound(long l, double mu, int d);

// Smallest t >= mu/(mu0-mu) meeting the Lambert-surrogate threshold with
// D = d^2 and exponent D + alpha; guarantees analytic_bound(t) <= delta.
long time_to_threshold(double delta, double mu, double mu0, int d, double alpha = 1.5);
// Same for Gamma^{(x)n} through n ||Gamma^t - Gamma_inf^t|| <= delta.
long iid_time_to_threshold(long n, int q, double mu, double mu0, double delta);

struct MeasuredPoint {
  long t = 0;
  NormInterval delta;
};

struct ConvergenceReport {
  double mu = 0.0;
  double mu0 = 0.0;
  double delta = 0.0;
  long t_threshold = 0;
  std::vector<std::pair<long, double>> bound_curve;
  std::vector<MeasuredPoint> measured_curve;
};

// ||Psi^t - Psi_inf^t||_diamond for t = 1..t_max
std::vector<MeasuredPoint> measured_curve(const Channel& ch, long t_max, double tol_peri = 1e-8);
ConvergenceReport convergence_report(const Channel& ch, long t_max, double delta = 0.01, double mu0 = -1.0,
                                     double tol_peri = 1e-8);

struct MemoryLifetime {
  std::optional<long> t_useless;  // empty: storage never becomes useless
  double ceiling = 0.0;           // Q_eps ceiling past t_useless (bits)
  std::vector<std::pair<long, double>> curve;  // (t, ceiling on m_eps(t))
};

// ps describes Psi = Psi_ecc o Psi_noise (copies = 1) or the local channel
// Gamma of Psi = Gamma^{(x)copies}.
MemoryLifetime memory_lifetime_bound(const PeripheralStructure& ps, double eps, double mu, double mu0,
                                     long copies = 1, long t_max = 200);

nlohmann::json to_json(const NormInterval& n);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const MemoryLifetime& m);
std::string to_csv(const ConvergenceReport& r);

}  // namespace qmemcap
