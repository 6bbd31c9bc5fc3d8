#include "qmemcap/cli.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "qmemcap/blockstruct.hpp"
#include "qmemcap/capacity.hpp"
#include "qmemcap/codes.hpp"
#include "qmemcap/convergence.hpp"
#include "qmemcap/opsys.hpp"
#include "qmemcap/report.hpp"
#include "qmemcap/spectral.hpp"

namespace qmemcap {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::string label;
  Channel channel;
};

Loaded load(const AnalysisConfig& cfg) {
  if (cfg.input.empty() == cfg.zoo.empty()) throw UsageError("exactly one of --input and --zoo is required");
  if (!cfg.zoo.empty()) return {cfg.zoo, zoo_from_spec(cfg.zoo).channel};
  return {cfg.input, load_channel(cfg.input)};
}

void check_config(const AnalysisConfig& cfg) {
  if (!(cfg.eps >= 0.0 && cfg.eps < 1.0)) throw UsageError("--eps must lie in [0,1)");
  if (!(cfg.alpha > 1.0)) throw UsageError("--alpha must be > 1");
  if (cfg.n < 1) throw UsageError("--n must be >= 1");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.tgrid && (cfg.tgrid->first < 1 || cfg.tgrid->second < cfg.tgrid->first))
    throw UsageError("--tgrid must be A..B with 1 <= A <= B");
}

void write_json(const AnalysisConfig& cfg, const std::string& name, const nlohmann::json& j) {
  write_atomic(fs::path(cfg.out) / name, dump_report(j));
}

nlohmann::json zero_error_fields(const ZeroErrorReport& z) {
  return {{"c0", z.c0}, {"p0", z.p0}, {"q0", z.q0}, {"cea0", z.cea0}};
}

std::pair<long, long> parse_grid(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw UsageError("--tgrid expects A..B");
  try {
    size_t u1 = 0, u2 = 0;
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const long lo = std::stol(a, &u1);
    const long hi = std::stol(b, &u2);
    if (u1 != a.size() || u2 != b.size()) throw UsageError("--tgrid expects integers A..B");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--tgrid expects integers A..B");
  }
}

}  // namespace

int cmd_analyze(const AnalysisConfig& cfg, std::ostream& log) {
  check_config(cfg);
  Loaded in = load(cfg);
  const Channel& ch = in.channel;
  std::mt19937_64 rng(cfg.seed);
  SpectrumReport s = spectrum(ch, cfg.tol, cfg.strict);
  PeripheralStructure ps = analyze_structure(ch, rng, cfg.tol, cfg.strict);
  ZeroErrorReport z = zero_error_capacities(ch, rng, cfg.tol);

  // the evaluators take delta_l from the analytic bound at its own 1e-2 threshold
  const int d = ch.dim_in();
  const double mu0 = 0.5 * (1.0 + s.mu);
  const long l = time_to_threshold(0.01, s.mu, mu0, d);
  const double delta_l = analytic_bound(l, s.mu, d);

  nlohmann::json caps = {
      {"channel", in.label},
      {"mu", s.mu},
      {"l", l},
      {"delta_l", delta_l},
      {"eps", cfg.eps},
      {"alpha", cfg.alpha},
      {"n", cfg.n},
      {"zero_error", zero_error_fields(z)},
      {"storage", to_json(storage_bounds(ps, cfg.eps, delta_l))},
      {"transmission", to_json(transmission_bounds(ps, delta_l, cfg.alpha, d))},
      {"blocklength", to_json(blocklength_bounds(ps, delta_l, cfg.n, cfg.eps, cfg.alpha, d))},
  };
  write_json(cfg, "spectrum.json", to_json(s));
  write_json(cfg, "structure.json", to_json(ps));
  write_json(cfg, "capacities.json", caps);
  log << "K=" << ps.num_blocks() << " Q_inf=" << std::log2(ps.max_d()) << " C_inf=" << std::log2(ps.sum_d())
      << " Cea_inf=" << std::log2(ps.sum_d2()) << '\n';
  return 0;
}

int cmd_converge(const AnalysisConfig& cfg, std::ostream& log) {
  check_config(cfg);
  if (!cfg.tgrid) throw UsageError("converge needs --tgrid A..B");
  Loaded in = load(cfg);
  const Channel& ch = in.channel;
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "converge needs a square channel");
  std::mt19937_64 rng(cfg.seed);
  const auto [lo, hi] = *cfg.tgrid;
  ConvergenceReport r = convergence_report(ch, hi, 0.01, -1.0, cfg.tol);
  const int d = ch.dim_in();

  std::ostringstream csv;
  csv.precision(12);
  csv << "t,analytic,lower,upper\n";
  for (const auto& p : r.measured_curve) {
    if (p.t < lo) continue;
    csv << p.t << ',';
    if (static_cast<double>(p.t) > r.mu / (1.0 - r.mu)) {
      const double b = analytic_bound(p.t, r.mu, d);
      if (std::isfinite(b)) csv << b;
    }
    csv << ',' << p.delta.lower << ',' << p.delta.upper << '\n';
  }

  nlohmann::json iid = nlohmann::json::array();
  iid.push_back({{"n", cfg.n}, {"t", iid_time_to_threshold(cfg.n, d, r.mu, r.mu0, r.delta)}});
  nlohmann::json lifetime = nullptr;
  if (cfg.eps > 0.0 && cfg.eps < 0.5) {
    PeripheralStructure ps = analyze_structure(ch, rng, cfg.tol, cfg.strict);
    lifetime = to_json(memory_lifetime_bound(ps, cfg.eps, r.mu, r.mu0, cfg.n, hi));
  }
  nlohmann::json th = {{"channel", in.label}, {"mu", r.mu},  {"mu0", r.mu0},           {"delta", r.delta},
                       {"t_threshold", r.t_threshold}, {"iid", iid}, {"lifetime", lifetime}};
  write_atomic(fs::path(cfg.out) / "convergence.csv", csv.str());
  write_json(cfg, "thresholds.json", th);
  log << "mu=" << r.mu << " t_threshold=" << r.t_threshold << '\n';
  return 0;
}

int cmd_opsys(const AnalysisConfig& cfg, std::ostream& log) {
  check_config(cfg);
  Loaded in = load(cfg);
  std::mt19937_64 rng(cfg.seed);
  ZeroErrorReport z = zero_error_capacities(in.channel, rng, cfg.tol);
  StarAlgebraCheck alg = is_star_algebra(z.stabilized, 1e-7, cfg.seed);
  write_json(cfg, "chain.json", {{"channel", in.label}, {"dims", z.chain_dims}, {"L", z.stabilization_index}});
  nlohmann::json st = to_json(z.stabilized);
  st["is_algebra"] = alg.is_algebra;
  st["closure_residual"] = alg.residual;
  st["distance_to_peripheral_system"] = z.stabilization_distance;
  write_json(cfg, "stabilized.json", st);
  write_json(cfg, "zero_error.json", to_json(z));
  log << "L=" << z.stabilization_index << " dim=" << z.stabilized.size() << '\n';
  return 0;
}

int cmd_simulate(const AnalysisConfig& cfg, std::ostream& log) {
  check_config(cfg);
  Loaded in = load(cfg);
  const Channel& ch = in.channel;
  if (!ch.square()) throw Error(ErrorKind::NonSquareChannel, "simulate needs a square channel");
  std::mt19937_64 rng(cfg.seed);
  PeripheralStructure ps = analyze_structure(ch, rng, cfg.tol, cfg.strict);
  const Channel rev = reversal_channel(ch, ps);
  const auto [lo, hi] = cfg.tgrid.value_or(std::pair<long, long>{1, 20});

  std::vector<QuantumCode> qcodes;
  for (int k = 0; k < ps.num_blocks(); ++k) qcodes.push_back(build_quantum_code(ps, k, rev));
  const ClassicalCode cc = build_classical_code(ps);
  const EACode ea = build_ea_code(ps);

  nlohmann::json codes = nlohmann::json::array();
  for (const auto& q : qcodes)
    codes.push_back({{"type", "quantum"}, {"block", q.block}, {"log_dim", q.log_dim},
                     {"encoder", channel_to_json(q.encoder)}});
  codes.push_back({{"type", "classical"}, {"messages", cc.message_states.size()},
                   {"log_size", std::log2(static_cast<double>(cc.message_states.size()))}});
  codes.push_back({{"type", "ea"}, {"messages", ea.messages.size()},
                   {"log_size", std::log2(static_cast<double>(ea.messages.size()))}});

  const long count = hi - lo + 1;
  std::vector<std::string> rows(static_cast<size_t>(count));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      const long t = lo + i;
      const Channel cht = power(ch, static_cast<int>(t));
      std::ostringstream os;
      os.precision(12);
      for (const auto& q : qcodes) {
        CodeEvaluation e = evaluate_code(cht, q, t, cfg.seed);
        os << t << ",quantum:" << q.block << ',' << e.entanglement_fidelity << ',' << e.worst_case_estimate << ",\n";
      }
      CodeEvaluation c = evaluate_code(cht, cc, t);
      os << t << ",classical,,," << c.success_prob << '\n';
      CodeEvaluation a = evaluate_code(cht, ea, t);
      os << t << ",ea,,," << a.success_prob << '\n';
      rows[static_cast<size_t>(i)] = os.str();
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::string csv = "t,code,ent_fidelity,worst_est,success_prob\n";
  for (const auto& r : rows) csv += r;

  write_json(cfg, "codes.json", {{"channel", in.label}, {"codes", codes}});
  write_atomic(fs::path(cfg.out) / "fidelity.csv", csv);
  log << "codes=" << codes.size() << " t=" << lo << ".." << hi << '\n';
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Peripheral structure, capacity bounds and convergence of quantum memory channels", "qmemcap"};
  app.require_subcommand(1);
  AnalysisConfig cfg;
  std::string grid;

  auto add_common = [&](CLI::App* sub) {
    auto* in = sub->add_option("--input", cfg.input, "channel JSON file");
    auto* zo = sub->add_option("--zoo", cfg.zoo, "zoo channel, NAME:k=v,...");
    in->excludes(zo);
    sub->add_option("--tol", cfg.tol, "peripheral tolerance");
    sub->add_option("--tgrid", grid, "time grid A..B");
    sub->add_option("--eps", cfg.eps, "error tolerance in [0,1)");
    sub->add_option("--alpha", cfg.alpha, "Renyi order > 1");
    sub->add_option("--n", cfg.n, "blocklength or number of copies");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_flag("--strict", cfg.strict, "fail on ambiguous periphery");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "structure, spectrum and capacity bounds");
  CLI::App* converge = app.add_subcommand("converge", "convergence curves and thresholds");
  CLI::App* opsys = app.add_subcommand("opsys", "operator-system chain and zero-error capacities");
  CLI::App* simulate = app.add_subcommand("simulate", "zero-error codes evaluated over a time grid");
  app.add_subcommand("zoo-list", "list zoo channels");
  for (CLI::App* sub : {analyze, converge, opsys, simulate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << dump_report({{"error", "UsageError"}, {"message", e.what()}});
    return 1;
  }

  try {
    if (!grid.empty()) cfg.tgrid = parse_grid(grid);
    if (app.got_subcommand("zoo-list")) {
      out << zoo_help();
      return 0;
    }
    if (app.got_subcommand(analyze)) return cmd_analyze(cfg, out);
    if (app.got_subcommand(converge)) return cmd_converge(cfg, out);
    if (app.got_subcommand(opsys)) return cmd_opsys(cfg, out);
    return cmd_simulate(cfg, out);
  } catch (const UsageError& e) {
    err << dump_report({{"error", "UsageError"}, {"message", e.what()}});
    return 1;
  } catch (const Error& e) {
    err << dump_report(error_json(e.kind(), e.what()));
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << dump_report(error_json(ErrorKind::ParseError, e.what()));
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << dump_report(error_json(ErrorKind::InvalidArgument, e.what()));
    return 2;
  }
}

}  // namespace qmemcap
