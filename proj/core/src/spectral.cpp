#include "qmarkov/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"

namespace qmarkov {

Spectrum hermitian_eig(const Matrix& m, double hermiticity_tol) {
  if (m.rows() != m.cols()) throw NumericError("hermitian_eig: matrix not square");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > hermiticity_tol)
    throw NumericError("hermitian_eig: max |M - M^dag| = " + num_str(herm) +
                       " exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(((m + m.adjoint()) / 2.0).eval());
  if (solver.info() != Eigen::Success)
    throw NumericError("hermitian_eig: solver did not converge");

  const Eigen::Index d = m.rows();
  Spectrum spec;
  spec.eigenvalues.resize(d);
  spec.eigenvectors.resize(d, d);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < d; ++i) {
    spec.eigenvalues(i) = solver.eigenvalues()(d - 1 - i);
    spec.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return spec;
}

Spectrum hermitian_eig(const Operator& op, double hermiticity_tol) {
  return hermitian_eig(op.entries(), hermiticity_tol);
}

Matrix support_projector(const Matrix& psd, double eig_cutoff) {
  Spectrum spec = hermitian_eig(psd, 1e-9);
  Matrix p = Matrix::Zero(psd.rows(), psd.cols());
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
    if (spec.eigenvalues(i) > eig_cutoff)
      p += spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint();
  return p;
}

Operator support_projector(const Operator& psd, double eig_cutoff) {
  return Operator(psd.layout(), support_projector(psd.entries(), eig_cutoff));
}

Matrix range_basis(const Matrix& projector) {
  Spectrum spec = hermitian_eig(projector, 1e-8);
  int rank = 0;
  while (rank < spec.eigenvalues.size() && spec.eigenvalues(rank) > 0.5) ++rank;
  return spec.eigenvectors.leftCols(rank);
}

Matrix inverse_sqrt_on_support(const Matrix& psd, double eig_cutoff) {
  Spectrum spec = hermitian_eig(psd, 1e-9);
  Matrix out = Matrix::Zero(psd.rows(), psd.cols());
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
    if (spec.eigenvalues(i) > eig_cutoff)
      out += (1.0 / std::sqrt(spec.eigenvalues(i))) *
             (spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint());
  return out;
}

int psd_rank(const Matrix& psd, double eig_cutoff) {
  Spectrum spec = hermitian_eig(psd, 1e-9);
  int rank = 0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
    if (spec.eigenvalues(i) > eig_cutoff) ++rank;
  return rank;
}

Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace qmarkov
