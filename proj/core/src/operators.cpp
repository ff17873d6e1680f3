#include "qmarkov/operators.hpp"

#include <Eigen/Eigenvalues>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"

namespace qmarkov {

Operator::Operator(SystemLayout layout, Matrix entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
  const int d = layout_.total_dim();
  if (entries_.rows() != d || entries_.cols() != d)
    throw LayoutError("operator entries are " + std::to_string(entries_.rows()) +
                      "x" + std::to_string(entries_.cols()) + ", layout needs " +
                      std::to_string(d) + "x" + std::to_string(d));
}

Operator identity_operator(const SystemLayout& layout) {
  return Operator(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()));
}

DensityOperator DensityOperator::validated(Operator op, const Tolerances& tols) {
  const Matrix& m = op.entries();
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tols.hermiticity)
    throw ValidationError("hermitian: max |M - M^dag| = " + num_str(herm));
  const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_err > tols.trace_one)
    throw ValidationError("trace: |Tr M - 1| = " + num_str(tr_err));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      ((m + m.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensolver failed during density validation");
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tols.psd_slack)
    throw ValidationError("psd: min eigenvalue = " + num_str(min_eig));
  return DensityOperator(std::move(op));
}

DensityOperator DensityOperator::trusted(Operator op) {
  return DensityOperator(std::move(op));
}

}  // namespace qmarkov
