#ifndef QMARKOV_TEST_SUPPORT_HPP
#define QMARKOV_TEST_SUPPORT_HPP

#include <vector>

#include "qmarkov/instance_gen.hpp"
#include "qmarkov/operators.hpp"
#include "qmarkov/random.hpp"
#include "qmarkov/tensor.hpp"

namespace qmtest {

using namespace qmarkov;

// Full-rank random density operator over the given layout.
inline DensityOperator random_state(const SystemLayout& layout, Rng& rng) {
  const int d = layout.total_dim();
  Matrix g = gaussian_matrix(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityOperator::validated(Operator(layout, std::move(rho)));
}

inline DensityOperator pure_state(const SystemLayout& layout,
                                  const Eigen::VectorXcd& psi) {
  Matrix rho = psi * psi.adjoint();
  return DensityOperator::validated(Operator(layout, std::move(rho)));
}

inline DensityOperator bell_pair() {
  SystemLayout layout({{"A", 2}, {"B", 2}});
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(3) = 1.0 / std::sqrt(2.0);
  return pure_state(layout, psi);
}

inline DensityOperator ghz_pure() {
  SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(7) = 1.0 / std::sqrt(2.0);
  return pure_state(layout, psi);
}

inline DensityOperator ghz_classical() {
  SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
  Matrix m = Matrix::Zero(8, 8);
  m(0, 0) = 0.5;
  m(7, 7) = 0.5;
  return DensityOperator::validated(Operator(layout, std::move(m)));
}

inline Operator diag_op(const SystemLayout& layout, std::vector<double> diag) {
  Matrix m = Matrix::Zero(diag.size(), diag.size());
  for (size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return Operator(layout, std::move(m));
}

}  // namespace qmtest

#endif
