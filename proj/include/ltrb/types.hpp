#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <stdexcept>
#include <string>

namespace ltrb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;
using Point2 = Eigen::Vector2d;

/// Interior nodal coefficients of a P1 finite-element function.
using NodalField = Vec;

/// Mesh/geometry defect (non-conforming input, degenerate triangle, ...).
class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Factorization breakdown or other numerical failure.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A persisted basis does not match the discretization it is applied to.
class IncompatibleBasisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration-file problem; carries the offending line when known.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

} // namespace ltrb
