#ifndef QMARKOV_STAR_ALGEBRA_HPP
#define QMARKOV_STAR_ALGEBRA_HPP

#include <cstdint>
#include <vector>

#include "qmarkov/operators.hpp"
#include "qmarkov/tolerances.hpp"

namespace qmarkov {

// Orthonormal (Hilbert-Schmidt) basis of a finite-dimensional *-algebra of
// matrices. The adjoined unit is the projector onto the joint support of the
// generators, not the ambient identity, so the algebra lives on that range.
struct AlgebraBasis {
  int ambient_dim = 0;
  std::vector<Matrix> basis_ops;
  Matrix unit;  // zero matrix for the empty algebra

  int dim() const { return static_cast<int>(basis_ops.size()); }
  int unit_rank() const;
};

// Smallest *-algebra containing the generators and their joint-support unit.
AlgebraBasis span_closure(const std::vector<Matrix>& generators, int ambient_dim,
                          double residual_tol = default_tolerances().span_residual);

// Minimal central projections of the algebra: pairwise orthogonal, commuting
// with every basis element, summing to the unit, none further splittable.
// Computed by eigen-splitting a seeded random Hermitian central element, with
// retries on eigenvalue gaps below gap_tol. Throws DegeneracyError when the
// retry budget is exhausted.
std::vector<Matrix> central_projections(const AlgebraBasis& alg,
                                        double gap_tol = default_tolerances().gap_tol,
                                        std::uint64_t rng_seed = 0,
                                        int retry_budget = default_tolerances().retry_budget);

// Tensor factorization of one central block: an isometry W with
// W X W^dag = M(X) (x) I_{d2} for every algebra element X.
struct BlockFactorization {
  int d1 = 0;
  int d2 = 0;
  Matrix isometry;  // (d1*d2) x ambient, W W^dag = I, W^dag W = P
};

BlockFactorization factor_block(const AlgebraBasis& alg, const Matrix& projector,
                                std::uint64_t rng_seed = 0,
                                const Tolerances& tols = default_tolerances());

struct WedderburnBlock {
  Matrix projector;
  Matrix isometry;
  int d1 = 0;
  int d2 = 0;
};

struct WedderburnStructure {
  int ambient_dim = 0;
  Matrix unit;
  std::vector<WedderburnBlock> blocks;
};

// span_closure, then central_projections, then factor_block per block.
// Blocks are sorted canonically: d1 descending, d2 descending, then
// lexicographically by the rounded spectrum of P * G1 * P where G1 is the
// first generator.
WedderburnStructure wedderburn(const std::vector<Matrix>& generators,
                               int ambient_dim,
                               const Tolerances& tols = default_tolerances(),
                               std::uint64_t rng_seed = 0);

// The d1 x d1 matrix M with W X W^dag ~ M (x) I_{d2}; also reports the
// Frobenius residual of that tensor form.
Matrix block_component(const WedderburnBlock& block, const Matrix& x,
                       double* residual = nullptr);

// Basis of the commutant of the algebra within the range of its unit.
std::vector<Matrix> commutant_basis(const AlgebraBasis& alg);

}  // namespace qmarkov

#endif
