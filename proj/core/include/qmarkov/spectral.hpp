#ifndef QMARKOV_SPECTRAL_HPP
#define QMARKOV_SPECTRAL_HPP

#include "qmarkov/operators.hpp"

namespace qmarkov {

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending,
// eigenvectors as orthonormal columns in matching order.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

// Throws NumericError if the input is not Hermitian within hermiticity_tol
// or the solver fails.
Spectrum hermitian_eig(const Matrix& m,
                       double hermiticity_tol = default_tolerances().hermiticity);
Spectrum hermitian_eig(const Operator& op,
                       double hermiticity_tol = default_tolerances().hermiticity);

// Projector onto the span of eigenvectors with eigenvalue > eig_cutoff.
Matrix support_projector(const Matrix& psd,
                         double eig_cutoff = default_tolerances().eig_cutoff);
Operator support_projector(const Operator& psd,
                           double eig_cutoff = default_tolerances().eig_cutoff);

// Orthonormal columns spanning the range of a projector (eigenvalue > 1/2).
Matrix range_basis(const Matrix& projector);

// rho^{-1/2} on the support of rho, zero on the kernel.
Matrix inverse_sqrt_on_support(const Matrix& psd,
                               double eig_cutoff = default_tolerances().eig_cutoff);

int psd_rank(const Matrix& psd, double eig_cutoff = default_tolerances().eig_cutoff);

// Unitary factor of the polar decomposition (via SVD).
Matrix polar_unitary(const Matrix& m);

}  // namespace qmarkov

#endif
