#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmemcap/blockstruct.hpp"
#include "qmemcap/chanrep.hpp"

namespace qmemcap {

// ---- divergences (bits) ----

struct DivergenceKind {
  enum Tag { Umegaki, Petz, Sandwiched, Max, Min, Hypothesis };
  Tag tag = Umegaki;
  double param = 0.0;  // alpha for Petz/Sandwiched, epsilon for Hypothesis

  static DivergenceKind umegaki() { return {Umegaki, 0.0}; }
  static DivergenceKind petz(double a) { return {Petz, a}; }
  static DivergenceKind sandwiched(double a) { return {Sandwiched, a}; }
  static DivergenceKind max() { return {Max, 0.0}; }
  static DivergenceKind min() { return {Min, 0.0}; }
  static DivergenceKind hypothesis(double eps) { return {Hypothesis, eps}; }
};

// Returns +infinity where the support conditions fail.
double relative_entropy(const DivergenceKind& kind, const Mat& rho, const Mat& sigma);

double binary_entropy(double p);

// 2 log2(sum sqrt(s_i))
double e_max_pure(const std::vector<double>& schmidt);

struct IMaxResult {
  double value = 0.0;  // bits
  double gap = 0.0;    // certified duality gap, bits
  Mat sigma;
};
// min_sigma D_max(Phi(psi+) || 1/d (x) sigma) via a log-barrier interior point
IMaxResult i_max_of_channel(const Channel& ch);

// ---- closed-form bound evaluators ----

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool valid = true;
};

struct CapacityReport {
  std::string regime;
  std::vector<int> block_dims;
  double q_inf = 0.0;
  double p_inf = 0.0;
  double c_inf = 0.0;
  double cea_inf = 0.0;
  Interval quantum;
  Interval priv;
  Interval classical;
  Interval ea;
  // regime-specific intervals, e.g. "quantum_assisted"
  std::map<std::string, Interval> extra;
};

CapacityReport storage_bounds(const std::vector<int>& block_dims, double eps, double delta_t);
CapacityReport transmission_bounds(const std::vector<int>& block_dims, double delta_l, double alpha, int d);
CapacityReport blocklength_bounds(const std::vector<int>& block_dims, double delta_l, long n, double eps,
                                  double alpha, int d);

struct GammaCapacities {
  double c = 0.0;
  double p = 0.0;
  double q = 0.0;
};
// Psi^l (x) Gamma given Gamma's capacities; potential-capacity intervals
// (extra "c_pot", "p_pot", "q_pot") use q_out as the contextual output dim.
CapacityReport strong_additivity_bounds(const std::vector<int>& block_dims, double delta_l, int d_a, int d_c,
                                        const GammaCapacities& gamma, int q_out = 0);

struct ContinuitySlacks {
  double c = 0.0;
  double p = 0.0;
  double q = 0.0;
  double cea = 0.0;
  bool afw_branch = false;  // delta beyond 1 - 1/d_B^2: per-use cap log d_B^2
};
ContinuitySlacks continuity_bounds(double delta, int d_b);

CapacityReport storage_bounds(const PeripheralStructure& ps, double eps, double delta_t);
CapacityReport transmission_bounds(const PeripheralStructure& ps, double delta_l, double alpha, int d);
CapacityReport blocklength_bounds(const PeripheralStructure& ps, double delta_l, long n, double eps, double alpha,
                                  int d);

nlohmann::json to_json(const Interval& i);
nlohmann::json to_json(const CapacityReport& r);

}  // namespace qmemcap
