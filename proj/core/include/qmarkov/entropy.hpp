#ifndef QMARKOV_ENTROPY_HPP
#define QMARKOV_ENTROPY_HPP

#include <string>
#include <vector>

#include "qmarkov/operators.hpp"

namespace qmarkov {

// A chain head - pivot - tail of disjoint, nonempty label groups.
struct MarkovChainSpec {
  std::vector<std::string> head;
  std::vector<std::string> pivot;
  std::vector<std::string> tail;

  void validate(const SystemLayout& layout) const;
};

struct MarkovVerdict {
  double cmi_value = 0.0;  // nats
  double tolerance = 0.0;
  bool holds = false;
};

// All entropic quantities are in nats.

double von_neumann_entropy(const DensityOperator& rho,
                           double eig_cutoff = default_tolerances().eig_cutoff);

// S(target | given) = S(target,given) - S(given).
double conditional_entropy(const DensityOperator& rho,
                           const std::vector<std::string>& target,
                           const std::vector<std::string>& given,
                           double eig_cutoff = default_tolerances().eig_cutoff);

// I(A;C|B) = S(AB) + S(BC) - S(B) - S(ABC). An empty `given_b` degrades to
// the mutual information I(A;C).
double cmi(const DensityOperator& rho, const std::vector<std::string>& sys_a,
           const std::vector<std::string>& sys_c,
           const std::vector<std::string>& given_b,
           double eig_cutoff = default_tolerances().eig_cutoff);

MarkovVerdict assert_markov(const DensityOperator& rho, const MarkovChainSpec& spec,
                            double tol = default_tolerances().cmi_tol,
                            double eig_cutoff = default_tolerances().eig_cutoff);

}  // namespace qmarkov

#endif
