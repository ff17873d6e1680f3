#ifndef QMARKOV_OPERATORS_HPP
#define QMARKOV_OPERATORS_HPP

#include <complex>

#include <Eigen/Dense>

#include "qmarkov/layout.hpp"
#include "qmarkov/tolerances.hpp"

namespace qmarkov {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// A square matrix over the composite basis of a SystemLayout.
class Operator {
public:
  Operator(SystemLayout layout, Matrix entries);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& entries() const { return entries_; }
  Matrix& entries() { return entries_; }
  int dim() const { return layout_.total_dim(); }

private:
  SystemLayout layout_;
  Matrix entries_;
};

Operator identity_operator(const SystemLayout& layout);

// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
public:
  // Checks hermiticity, positive semidefiniteness, and unit trace; throws
  // ValidationError naming the violated invariant.
  static DensityOperator validated(Operator op,
                                   const Tolerances& tols = default_tolerances());
  // Skips the spectral check; for callers that guarantee the invariants.
  static DensityOperator trusted(Operator op);

  const Operator& op() const { return op_; }
  const SystemLayout& layout() const { return op_.layout(); }
  const Matrix& entries() const { return op_.entries(); }
  int dim() const { return op_.dim(); }

private:
  explicit DensityOperator(Operator op) : op_(std::move(op)) {}
  Operator op_;
};

}  // namespace qmarkov

#endif
