#include "qmemcap/convergence.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "qmemcap/linalg.hpp"
#include "qmemcap/spectral.hpp"

namespace qmemcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kE2 = std::exp(2.0);

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw Error(ErrorKind::InvalidArgument, "mu must lie in [0,1)");
}

// Lambert-surrogate threshold for D^alpha (t(1-mu^2)/mu)^D mu^t <= delta';
// log_scale = ln(D^{D+alpha} / delta'). Returns 0 when the constraint is vacuous.
double lambert_time(double big_d, double log_scale, double mu) {
  const double lm = std::log(1.0 / mu);
  const double x = log_scale / big_d - std::log(mu * lm / (1.0 - mu * mu));
  const double u = x - 1.0;
  // the W_{-1} argument lies below -1/e: every t satisfies the constraint
  if (u < 0.0) return 0.0;
  return big_d / lm * (x + std::sqrt(2.0) * std::sqrt(u));
}

long threshold_impl(double delta, double mu, double mu0, int d, double alpha, double n_copies) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0,1)");
  check_mu(mu);
  if (!(mu0 > mu && mu0 < 1.0)) throw Error(ErrorKind::InvalidArgument, "mu0 must lie in (mu,1)");
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  const double big_d = static_cast<double>(d) * d;
  long t = 1;
  if (mu > 0.0) {
    const double dp = delta * std::pow(1.0 - mu0, 1.5) / (8.0 * kE2);
    const double log_scale = std::log(n_copies) + (big_d + alpha) * std::log(big_d) - std::log(dp);
    const double tl = lambert_time(big_d, log_scale, mu);
    t = std::max<long>(1, static_cast<long>(std::ceil(std::max(mu / (mu0 - mu), tl) - 1e-12)));
    if (static_cast<double>(t) < mu / (mu0 - mu)) ++t;
  }
  // self-check against the bound itself; at mu = 0 this is the whole search
  for (int guard = 0; n_copies * analytic_bound(t, mu, d) > delta; ++guard) {
    if (guard > 100000) throw Error(ErrorKind::SolverNotConverged, "threshold search did not terminate");
    ++t;
  }
  return t;
}

}  // namespace

double analytic_bound(long l, double mu, int d) {
  check_mu(mu);
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  if (static_cast<double>(l) <= mu / (1.0 - mu)) {
    std::ostringstream os;
    os << "analytic bound needs l > mu/(1-mu) = " << mu / (1.0 - mu) << ", got l = " << l;
    throw Error(ErrorKind::PreconditionViolated, os.str());
  }
  const double big_d = static_cast<double>(d) * d;
  const double dl = static_cast<double>(l);
  const double pre = std::log(4.0 * kE2 * d * (big_d + 1.0));
  if (mu == 0.0) {
    // (l(1-mu^2)/mu)^{D-1} mu^l ~ l^{D-1} mu^{l-D+1}
    if (dl > big_d - 1.0) return 0.0;
    if (dl < big_d - 1.0) return kInf;
    return std::exp(pre + (big_d - 1.0) * std::log(dl));
  }
  const double lb = pre - 1.5 * std::log(1.0 - (1.0 + 1.0 / dl) * mu) +
                    (big_d - 1.0) * std::log(dl * (1.0 - mu * mu) / mu) + dl * std::log(mu);
  return std::exp(lb);
}

long time_to_threshold(double delta, double mu, double mu0, int d, double alpha) {
  return threshold_impl(delta, mu, mu0, d, alpha, 1.0);
}

long iid_time_to_threshold(long n, int q, double mu, double mu0, double delta) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  return threshold_impl(delta, mu, mu0, q, 1.5, static_cast<double>(n));
}

std::vector<MeasuredPoint> measured_curve(const Channel& ch, long t_max, double tol_peri) {
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "convergence of a non-square channel");
  const int d = ch.dim_in();
  if (d > 4) throw Error(ErrorKind::PreconditionViolated, "measured curves support d <= 4");
  PeripheralProjector p = peripheral_projector(ch, tol_peri);
  const Mat& tm = ch.transfer();
  const Mat comp = Mat::Identity(d * d, d * d) - p.transfer;
  Vec one = vec(Mat::Identity(d, d));

  std::vector<Mat> chois(static_cast<size_t>(t_max));
  Mat tt = tm;
  for (long t = 1; t <= t_max; ++t) {
    if (t > 1) tt = tm * tt;
    if (t % 16 == 0) {
      // trace preservation: one^+ T = one^+
      Eigen::Matrix<cplx, 1, Eigen::Dynamic> drift = one.adjoint() * tt - one.adjoint();
      tt -= one * drift / static_cast<double>(d);
    }
    chois[t - 1] = choi_from_transfer(tt * comp, d, d);
  }

  std::vector<MeasuredPoint> out(static_cast<size_t>(t_max));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long t = 1; t <= t_max; ++t) {
    try {
      NormInterval n = diamond_norm_interval(chois[t - 1], d, d, 11 + static_cast<unsigned long>(t));
      n.upper = std::min(n.upper, 2.0);
      n.lower = std::min(n.lower, n.upper);
      out[t - 1] = {t, n};
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

ConvergenceReport convergence_report(const Channel& ch, long t_max, double delta, double mu0, double tol_peri) {
  SpectrumReport s = spectrum(ch, tol_peri);
  ConvergenceReport r;
  r.mu = s.mu;
  r.mu0 = mu0 > 0.0 ? mu0 : 0.5 * (1.0 + s.mu);
  r.delta = delta;
  const int d = ch.dim_in();
  r.t_threshold = time_to_threshold(delta, r.mu, r.mu0, d);
  for (long t = 1; t <= t_max; ++t)
    if (static_cast<double>(t) > r.mu / (1.0 - r.mu)) r.bound_curve.emplace_back(t, analytic_bound(t, r.mu, d));
  r.measured_curve = measured_curve(ch, t_max, tol_peri);
  return r;
}

MemoryLifetime memory_lifetime_bound(const PeripheralStructure& ps, double eps, double mu, double mu0, long copies,
                                     long t_max) {
  if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1/2)");
  if (copies < 1) throw Error(ErrorKind::InvalidArgument, "copies must be >= 1");
  check_mu(mu);
  MemoryLifetime m;
  const double cn = static_cast<double>(copies);
  const double base = cn * std::log2(static_cast<double>(ps.max_d()));
  m.ceiling = base + std::log2(1.0 / (1.0 - 2.0 * eps));
  if (ps.max_d() == 1) {
    m.t_useless = copies == 1 ? time_to_threshold(eps, mu, mu0, ps.dim)
                              : iid_time_to_threshold(copies, ps.dim, mu, mu0, eps);
  }
  for (long t = 1; t <= t_max; ++t) {
    if (static_cast<double>(t) <= mu / (1.0 - mu)) continue;
    const double dt = cn * analytic_bound(t, mu, ps.dim);
    if (eps + dt < 1.0) m.curve.emplace_back(t, base + std::log2(1.0 / (1.0 - eps - dt)));
  }
  return m;
}

nlohmann::json to_json(const NormInterval& n) {
  return {{"lower", n.lower}, {"upper", n.upper}, {"converged", n.converged}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json bc = nlohmann::json::array();
  for (const auto& [t, b] : r.bound_curve)
    bc.push_back({{"t", t}, {"bound", std::isfinite(b) ? nlohmann::json(b) : nlohmann::json(nullptr)}});
  nlohmann::json mc = nlohmann::json::array();
  for (const auto& p : r.measured_curve) {
    nlohmann::json e = to_json(p.delta);
    e["t"] = p.t;
    mc.push_back(e);
  }
  return {{"schema", "1"}, {"mu", r.mu},           {"mu0", r.mu0},         {"delta", r.delta},
          {"t_threshold", r.t_threshold}, {"bound_curve", bc}, {"measured_curve", mc}};
}

nlohmann::json to_json(const MemoryLifetime& m) {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& [t, v] : m.curve) c.push_back({{"t", t}, {"ceiling", v}});
  return {{"t_useless", m.t_useless ? nlohmann::json(*m.t_useless) : nlohmann::json(nullptr)},
          {"ceiling", m.ceiling},
          {"curve", c}};
}

std::string to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "t,bound,lower,upper\n";
  size_t bi = 0;
  for (const auto& p : r.measured_curve) {
    while (bi < r.bound_curve.size() && r.bound_curve[bi].first < p.t) ++bi;
    os << p.t << ',';
    if (bi < r.bound_curve.size() && r.bound_curve[bi].first == p.t && std::isfinite(r.bound_curve[bi].second))
      os << r.bound_curve[bi].second;
    os << ',' << p.delta.lower << ',' << p.delta.upper << '\n';
  }
  return os.str();
}

}  // namespace qmemcap
