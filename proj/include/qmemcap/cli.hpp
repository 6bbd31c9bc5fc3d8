#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

namespace qmemcap {

struct AnalysisConfig {
  std::string input;  // channel JSON path
  std::string zoo;    // or "name:k=v,..."
  double tol = 1e-8;
  std::optional<std::pair<long, long>> tgrid;
  double eps = 0.01;
  double alpha = 1.5;
  long n = 1;
  std::string out = ".";
  unsigned long seed = 1;
  bool strict = false;
};

int cmd_analyze(const AnalysisConfig& cfg, std::ostream& log);
int cmd_converge(const AnalysisConfig& cfg, std::ostream& log);
int cmd_opsys(const AnalysisConfig& cfg, std::ostream& log);
int cmd_simulate(const AnalysisConfig& cfg, std::ostream& log);

// Full command line. Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical failure.
// Errors are reported as one JSON object on err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmemcap
