#ifndef QMARKOV_MARKOV_STRUCTURE_HPP
#define QMARKOV_MARKOV_STRUCTURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qmarkov/entropy.hpp"
#include "qmarkov/operators.hpp"
#include "qmarkov/star_algebra.hpp"

namespace qmarkov {

// One block of a direct-sum (x) tensor-product decomposition of the Y side
// of a state: the isometry maps the block subspace of Y onto coordinates
// C^{d1} (x) C^{d2}, the first factor lives on X (x) Y1, the second on
// tail (x) Y2 (the tail is empty for a plain bipartite decomposition).
struct DecompositionBlock {
  Matrix isometry;  // (d1*d2) x dim(Y), iso iso^dag = I, iso^dag iso = P_k
  int d1 = 0;
  int d2 = 0;
  double weight = 0.0;
  DensityOperator factor_xy1;
  DensityOperator factor_y2;

  Matrix projector() const { return isometry.adjoint() * isometry; }
};

struct BlockDecomposition {
  SystemLayout layout;                   // layout of the decomposed state
  std::vector<std::string> x_labels;     // X side, in layout order
  std::vector<std::string> y_labels;     // decomposed side, in layout order
  std::vector<std::string> tail_labels;  // joined to the y2 factors, may be empty
  std::string y1_label;                  // synthetic label used by factor_xy1
  std::string y2_label;                  // synthetic label used by factor_y2
  std::vector<DecompositionBlock> blocks;
  Matrix support;  // support projector on the Y space

  int block_count() const { return static_cast<int>(blocks.size()); }
  std::vector<std::pair<int, int>> dims() const;
};

// The operators o_i = rho_Y^{-1/2} Tr_X[(F_i (x) I) rho] rho_Y^{-1/2} over a
// Hermitian operator basis {F_i} of the X side; the *-algebra they generate
// fixes the block structure of Y.
std::vector<Matrix> conditional_generators(const DensityOperator& rho,
                                           const std::vector<std::string>& x_labels,
                                           double eig_cutoff = default_tolerances().eig_cutoff);

// Minimal direct-sum (x) tensor-product decomposition of the non-X side,
// computed on the support of rho_Y. Throws StructureError when the
// reconstruction residual exceeds tols.recon_tol.
BlockDecomposition block_decompose(const DensityOperator& rho,
                                   const std::vector<std::string>& x_labels,
                                   const Tolerances& tols = default_tolerances(),
                                   std::uint64_t rng_seed = 0);

struct BlockSkeleton {
  Matrix isometry;
  int d1 = 0;
  int d2 = 0;
  double weight = 0.0;
};

// Extracts the per-block factor pair from the state for the given block
// isometries and verifies the reconstruction within tols.recon_tol; the
// shared path behind the decomposition entry points.
BlockDecomposition assemble_decomposition(
    const DensityOperator& rho, const std::vector<std::string>& x_labels,
    const std::vector<std::string>& y_labels,
    const std::vector<std::string>& tail_labels,
    const std::vector<BlockSkeleton>& skeletons, const Matrix& support,
    const Tolerances& tols = default_tolerances());

// Assembles sum_k weight_k * embed(factor_xy1 (x) factor_y2) back into the
// original layout.
DensityOperator build_state(const BlockDecomposition& dec,
                            const Tolerances& tols = default_tolerances());

// Decomposition of the pivot of a Markov chain, with the tail joined to the
// y2 factors. Throws NotMarkovError if the chain fails, StructureError if
// the tail does not factor onto the y2 side.
BlockDecomposition markov_decompose(const DensityOperator& rho,
                                    const MarkovChainSpec& chain,
                                    const Tolerances& tols = default_tolerances(),
                                    std::uint64_t rng_seed = 0);

struct MinimalityVerdict {
  bool minimal = true;
  enum class Violation { none, reducible_factor, equivalent_pair } violation =
      Violation::none;
  int block_a = -1;
  int block_b = -1;
  std::string detail;
};

// Checks that every first factor is irreducible (its conditional-generator
// algebra is full on the Y1 support) and that no two first factors are
// related by a unitary acting on Y1 alone.
MinimalityVerdict is_minimal(const BlockDecomposition& dec,
                             const Tolerances& tols = default_tolerances(),
                             std::uint64_t rng_seed = 0);

struct DecompositionMatch {
  std::vector<int> bijection;          // block k of dec1 -> block of dec2
  std::vector<Matrix> block_unitaries; // change of tensor factorization per block
  double max_residual = 0.0;
};

// Matches blocks of two decompositions of the same state by subspace overlap
// and solves for the per-block factorization change. Throws MatchError when
// no bijective overlap pattern exists or residuals exceed tols.match_tol.
DecompositionMatch match_decompositions(const BlockDecomposition& dec1,
                                        const BlockDecomposition& dec2,
                                        const Tolerances& tols = default_tolerances());

// Unitary U on Y1 with (I (x) U) sigma (I (x) U)^dag = tau, if one exists.
// Returns true and fills `u` on success. `x_dim` is the dimension of the
// leading X factor.
bool local_unitary_equivalent(const Matrix& sigma, const Matrix& tau, int x_dim,
                              Matrix* u = nullptr,
                              const Tolerances& tols = default_tolerances());

}  // namespace qmarkov

#endif
