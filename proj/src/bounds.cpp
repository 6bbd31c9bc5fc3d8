#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qmemcap/capacity.hpp"

namespace qmemcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Logs {
  double max_d = 0.0;
  double sum_d = 0.0;
  double sum_d2 = 0.0;
};

Logs block_logs(const std::vector<int>& dims) {
  if (dims.empty()) throw Error(ErrorKind::InvalidArgument, "block_dims is empty");
  long mx = 0;
  long s = 0;
  long s2 = 0;
  for (int d : dims) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "block dimensions must be positive");
    mx = std::max<long>(mx, d);
    s += d;
    s2 += static_cast<long>(d) * d;
  }
  return {std::log2(static_cast<double>(mx)), std::log2(static_cast<double>(s)),
          std::log2(static_cast<double>(s2))};
}

Interval interval(double lower, double slack, bool valid) {
  if (!valid) return {lower, kInf, false};
  return {lower, lower + slack, true};
}

CapacityReport base_report(const std::string& regime, const std::vector<int>& dims) {
  Logs l = block_logs(dims);
  CapacityReport r;
  r.regime = regime;
  r.block_dims = dims;
  r.q_inf = l.max_d;
  r.p_inf = l.max_d;
  r.c_inf = l.sum_d;
  r.cea_inf = l.sum_d2;
  return r;
}

// delta log(n - 1) + h(delta), with the AFW cap log n past 1 - 1/n
double afw(double delta, double n) {
  if (delta <= 0.0) return 0.0;
  if (delta > 1.0 - 1.0 / n) return std::log2(n);
  return delta * std::log2(n - 1.0) + binary_entropy(delta);
}

double alpha_slack(double delta_l, double alpha, int d) {
  return alpha / (alpha - 1.0) * std::log2(1.0 + delta_l * std::pow(d, (alpha - 1.0) / alpha) / 2.0);
}

double max_slack(double delta_l, int d) { return std::log2(1.0 + delta_l * d / 2.0); }

void check_common(double delta, double alpha, int d) {
  if (delta < 0.0 || !std::isfinite(delta)) throw Error(ErrorKind::InvalidArgument, "delta must be finite and >= 0");
  if (!(alpha > 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must exceed 1");
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
}

}  // namespace

CapacityReport storage_bounds(const std::vector<int>& block_dims, double eps, double delta_t) {
  if (eps < 0.0 || eps >= 1.0) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in [0,1)");
  if (delta_t < 0.0) throw Error(ErrorKind::InvalidArgument, "delta_t must be >= 0");
  CapacityReport r = base_report("storage", block_dims);
  const bool valid = eps + delta_t < 1.0;
  const double slack = valid ? -std::log2(1.0 - eps - delta_t) : kInf;
  r.quantum = interval(r.q_inf, slack, valid);
  r.priv = interval(r.p_inf, slack, valid);
  r.classical = interval(r.c_inf, slack, valid);
  r.ea = interval(r.cea_inf, slack, valid);
  return r;
}

CapacityReport transmission_bounds(const std::vector<int>& block_dims, double delta_l, double alpha, int d) {
  check_common(delta_l, alpha, d);
  CapacityReport r = base_report("transmission", block_dims);
  const bool qp_valid = delta_l < 2.0;
  const double qp = alpha_slack(delta_l, alpha, d);
  r.quantum = interval(r.q_inf, qp, qp_valid);
  r.priv = interval(r.p_inf, qp, qp_valid);
  const double dd = static_cast<double>(d) * d;
  const bool c_valid = delta_l / 2.0 <= 1.0 - 1.0 / dd;
  const double cs = d > 1 ? delta_l * std::log2(dd - 1.0) + 2.0 * binary_entropy(delta_l / 2.0) : 0.0;
  r.classical = interval(r.c_inf, cs, c_valid);
  r.ea = interval(r.cea_inf, cs, c_valid);
  r.extra["assisted"] = interval(r.q_inf, max_slack(delta_l, d), qp_valid);
  return r;
}

CapacityReport blocklength_bounds(const std::vector<int>& block_dims, double delta_l, long n, double eps,
                                  double alpha, int d) {
  check_common(delta_l, alpha, d);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (eps < 0.0 || eps >= 1.0) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in [0,1)");
  CapacityReport r = base_report("blocklength", block_dims);
  const bool valid = delta_l < 2.0;
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d) * d;
  // log(n^{d^2} / (1 - eps)) expanded to stay finite for large n
  const double fin_alpha = alpha / (nn * (alpha - 1.0)) * (dd * std::log2(nn) - std::log2(1.0 - eps));
  const double fin_max = -std::log2(1.0 - eps) / nn;
  const double a = alpha_slack(delta_l, alpha, d) + fin_alpha;
  const double m = max_slack(delta_l, d) + fin_max;
  r.quantum = interval(r.q_inf, a, valid);
  r.priv = interval(r.p_inf, a, valid);
  r.extra["quantum_max"] = interval(r.q_inf, m, valid);
  r.extra["private_max"] = interval(r.p_inf, m, valid);
  r.extra["assisted"] = interval(r.q_inf, m, valid);
  // no finite-blocklength converse for C and C_ea here
  r.classical = {r.c_inf, kInf, false};
  r.ea = {r.cea_inf, kInf, false};
  return r;
}

CapacityReport strong_additivity_bounds(const std::vector<int>& block_dims, double delta_l, int d_a, int d_c,
                                        const GammaCapacities& gamma, int q_out) {
  if (delta_l < 0.0) throw Error(ErrorKind::InvalidArgument, "delta_l must be >= 0");
  if (d_a < 1 || d_c < 1) throw Error(ErrorKind::InvalidArgument, "dimensions must be positive");
  CapacityReport r = base_report("additivity", block_dims);
  const double h = binary_entropy(delta_l / 2.0);

  const double n = static_cast<double>(d_a) * d_a * d_c * d_c;
  const bool valid = delta_l / 2.0 <= 1.0 - 1.0 / n;
  const double l = n > 1.0 ? std::log2(n - 1.0) : 0.0;
  r.classical = interval(r.c_inf + gamma.c, delta_l * l + 2.0 * h, valid);
  r.priv = interval(r.p_inf + gamma.p, 2.0 * delta_l * l + 4.0 * h, valid);
  r.quantum = interval(r.q_inf + gamma.q, delta_l * l + 2.0 * h, valid);
  r.ea = {r.cea_inf, kInf, false};

  if (q_out > 0) {
    const double np = static_cast<double>(q_out) * q_out * d_a * d_a;
    const bool pvalid = delta_l / 2.0 <= 1.0 - 1.0 / np;
    const double lp = np > 1.0 ? std::log2(np - 1.0) : 0.0;
    r.extra["c_pot"] = interval(r.c_inf, delta_l * lp + 2.0 * h, pvalid);
    r.extra["p_pot"] = interval(r.p_inf, 2.0 * delta_l * lp + 4.0 * h, pvalid);
    r.extra["q_pot"] = interval(r.q_inf, delta_l * lp + 2.0 * h, pvalid);
  }
  return r;
}

ContinuitySlacks continuity_bounds(double delta, int d_b) {
  if (delta < 0.0) throw Error(ErrorKind::InvalidArgument, "delta must be >= 0");
  if (d_b < 1) throw Error(ErrorKind::InvalidArgument, "d_B must be positive");
  const double n = static_cast<double>(d_b) * d_b;
  ContinuitySlacks s;
  s.afw_branch = delta > 1.0 - 1.0 / n;
  const double f = afw(delta, n);
  s.c = 2.0 * f;
  s.q = 2.0 * f;
  s.cea = 2.0 * f;
  s.p = 4.0 * f;
  return s;
}

CapacityReport storage_bounds(const PeripheralStructure& ps, double eps, double delta_t) {
  return storage_bounds(ps.block_dims(), eps, delta_t);
}

CapacityReport transmission_bounds(const PeripheralStructure& ps, double delta_l, double alpha, int d) {
  return transmission_bounds(ps.block_dims(), delta_l, alpha, d);
}

CapacityReport blocklength_bounds(const PeripheralStructure& ps, double delta_l, long n, double eps, double alpha,
                                  int d) {
  return blocklength_bounds(ps.block_dims(), delta_l, n, eps, alpha, d);
}

nlohmann::json to_json(const Interval& i) {
  nlohmann::json up = std::isfinite(i.upper) ? nlohmann::json(i.upper) : nlohmann::json(nullptr);
  return {{"lower", i.lower}, {"upper", up}, {"valid", i.valid}};
}

nlohmann::json to_json(const CapacityReport& r) {
  nlohmann::json j = {{"schema", "1"},
                      {"regime", r.regime},
                      {"block_dims", r.block_dims},
                      {"q_inf", r.q_inf},
                      {"p_inf", r.p_inf},
                      {"c_inf", r.c_inf},
                      {"cea_inf", r.cea_inf},
                      {"quantum", to_json(r.quantum)},
                      {"private", to_json(r.priv)},
                      {"classical", to_json(r.classical)},
                      {"ea", to_json(r.ea)}};
  for (const auto& [k, v] : r.extra) j[k] = to_json(v);
  return j;
}

}  // namespace qmemcap
