#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmemcap {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

enum class ErrorKind {
  DimensionMismatch,
  NotTracePreserving,
  NonSquareChannel,
  InvalidArgument,
  ParseError,
  UnknownChannel,
  EigSolverFailure,
  AmbiguousPeriphery,
  ProjectorNotCP,
  AlgebraClosureFailure,
  DegenerateSample,
  PermutationAmbiguity,
  ChainNotMonotone,
  NotAlgebra,
  StabilizationMismatch,
  SolverNotConverged,
  PreconditionViolated,
  NumericalNonHermitian,
};

const char* to_string(ErrorKind k);

// true for errors caused by bad input rather than a numerical breakdown
bool is_data_error(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerances {
  double tp = 1e-9;
  double herm = 1e-9;
  double rep = 1e-9;
  double psd = 1e-10;
  double trace = 1e-9;
};

}  // namespace qmemcap
