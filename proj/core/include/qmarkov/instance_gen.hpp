#ifndef QMARKOV_INSTANCE_GEN_HPP
#define QMARKOV_INSTANCE_GEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qmarkov/double_markov.hpp"
#include "qmarkov/markov_structure.hpp"
#include "qmarkov/operators.hpp"

namespace qmarkov {

// Block request for the generators: dimensions of the two tensor factors and
// the mixture weight.
struct GenBlock {
  int d1 = 1;
  int d2 = 1;
  double weight = 1.0;
};

struct GenSpec {
  int dim_a = 2;
  int dim_b = 2;  // per-side block dims for the double-Markov generator
  int dim_c = 2;
  std::vector<GenBlock> blocks = {{1, 1, 1.0}};
  bool full_support = true;
  double min_distinguishability = 0.1;  // trace distance between label states
  std::uint64_t seed = 0;
};

// Hilbert-Schmidt-induced random state of exact rank, deterministic per seed.
DensityOperator random_density(int dim, int rank, std::uint64_t seed);
DensityOperator random_density(int dim, int rank, Rng& rng);

struct MarkovInstance {
  DensityOperator state;       // on systems A, B, C
  BlockDecomposition truth;    // ground-truth pivot decomposition
};

// A tripartite Markov state assembled from sampled block factors, hidden by
// a random unitary on the pivot. The ground truth is minimal by rejection.
MarkovInstance gen_markov_state(const GenSpec& spec);

struct DoubleMarkovInstance {
  DensityOperator state;  // on systems A, B, C
  CommonLabel truth;
};

// A state of the form sum_j q_j rho_{A|j} (x) sigma_{BC|j} with the sigma
// blocks on orthogonal subspaces of both sides, hidden by local unitaries.
// blocks[j] is read as (dim of the B block, dim of the C block).
DoubleMarkovInstance gen_double_markov_state(const GenSpec& spec);

struct ConditionalInstance {
  DensityOperator state;     // on systems A, B, C, D
  BlockDecomposition truth;  // ground-truth decomposition of D
};

// A strictly positive four-party state with D split into blocks carrying the
// A factor on one side and the BC factor on the other.
ConditionalInstance gen_thm2_state(const GenSpec& spec, int dim_bc_b = 2,
                                   int dim_bc_c = 2);

enum class NegativeKind {
  one_way_tripartite,    // I(A;C|B) = 0 but I(A;B|C) = ln 2
  entangled_not_markov,  // pure GHZ, both chain CMIs = ln 2
  thm2_rank_deficient,   // conditional structure with a rank-deficient factor
};

DensityOperator gen_negative(NegativeKind kind, std::uint64_t seed = 0);

}  // namespace qmarkov

#endif
