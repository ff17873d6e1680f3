#ifndef QMARKOV_DOUBLE_MARKOV_HPP
#define QMARKOV_DOUBLE_MARKOV_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmarkov/markov_structure.hpp"
#include "qmarkov/operators.hpp"
#include "qmarkov/random.hpp"

namespace qmarkov {

// Joint distribution of the fine block indices (K, L) from the two pivot
// decompositions, with the conditional states of A on the surviving pairs.
struct FineLabelTable {
  Eigen::MatrixXd joint;               // p_{K,L}
  std::vector<Matrix> proj_b;          // M_{B,k} on the B space
  std::vector<Matrix> proj_c;          // M_{C,l} on the C space
  std::map<std::pair<int, int>, DensityOperator> cond_a;  // surviving (k,l)
};

// Certificate that a tripartite state is Markov in both directions: PVMs on
// B and C whose common classical label J screens A off (B, C).
struct CommonLabel {
  std::vector<int> labels;                    // 0 .. |J|-1
  std::vector<Matrix> pvm_b;                  // E_{B,j} on the B space
  std::vector<Matrix> pvm_c;                  // E_{C,j} on the C space
  std::vector<double> p_j;
  std::vector<DensityOperator> rho_a_given_j; // on the A space
  std::vector<int> g1;                        // fine index k -> j
  std::vector<int> g2;                        // fine index l -> j
  FineLabelTable fine;

  int label_count() const { return static_cast<int>(labels.size()); }
};

// Builds the common-label certificate for the double Markov chains
// A - B - C and A - C - B. Throws NotMarkovError when either chain fails,
// StructureError when grouping breaks down, CertificateError when the final
// CMI check on the label-extended state fails.
CommonLabel certify_double_markov(const DensityOperator& rho,
                                  const std::vector<std::string>& a_labels,
                                  const std::vector<std::string>& b_labels,
                                  const std::vector<std::string>& c_labels,
                                  const Tolerances& tols = default_tolerances(),
                                  std::uint64_t rng_seed = 0);

struct LabelCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
};

struct LabelVerdict {
  std::vector<LabelCheck> checks;
  bool pass = true;

  void add(const std::string& name, bool ok, double value) {
    checks.push_back({name, ok, value});
    pass = pass && ok;
  }
};

// Re-checks every certificate invariant against the state: projector sums,
// reconstruction, distinctness of the conditional states, S(J|B) and S(J|C),
// and the chain CMIs.
LabelVerdict verify_common_label(const DensityOperator& rho, const CommonLabel& cert,
                                 const std::vector<std::string>& a_labels,
                                 const std::vector<std::string>& b_labels,
                                 const std::vector<std::string>& c_labels,
                                 const Tolerances& tols = default_tolerances());

// The state extended by the classical label system J, as in the certificate.
DensityOperator label_extended_state(const DensityOperator& rho,
                                     const CommonLabel& cert,
                                     const std::vector<std::string>& b_labels,
                                     const std::vector<std::string>& c_labels);

// Certificate of the four-party conditional equivalence on a strictly
// positive state: the D system decomposes so that A attaches to one factor
// and (B, C) to the other.
struct ConditionalCertificate {
  BlockDecomposition d_decomposition;   // x = A, y = D, tail = (B, C)
  std::vector<int> l_of_k;              // block map between the two pivots
  BlockDecomposition bd_decomposition;  // pivot (B, D)
  BlockDecomposition cd_decomposition;  // pivot (C, D)
  double final_cmi = 0.0;               // I(A; BC | D)
};

// Runs the full pipeline: the two pivot decompositions, their extension and
// matching, the locality check of the first factor, and the assembly of the
// D-only decomposition. Throws FullSupportError, NotMarkovError, or
// StructureError.
ConditionalCertificate certify_conditional_double_markov(
    const DensityOperator& rho, const std::vector<std::string>& a_labels,
    const std::vector<std::string>& b_labels,
    const std::vector<std::string>& c_labels,
    const std::vector<std::string>& d_labels,
    const Tolerances& tols = default_tolerances(), std::uint64_t rng_seed = 0);

struct ConverseVerdict {
  double cmi_a_bc_given_d = 0.0;  // I(A;BC|D)
  double cmi_a_c_given_bd = 0.0;  // I(A;C|B,D)
  double cmi_a_b_given_cd = 0.0;  // I(A;B|C,D)
  bool premise = false;           // I(A;BC|D) <= tol
  bool conclusion_ok = true;      // both chains within tol + slack when premise
};

// If I(A;BC|D) <= tol, both conditional chains must hold within tol + slack.
ConverseVerdict conditional_converse_check(
    const DensityOperator& rho, const std::vector<std::string>& a_labels,
    const std::vector<std::string>& b_labels,
    const std::vector<std::string>& c_labels,
    const std::vector<std::string>& d_labels,
    const Tolerances& tols = default_tolerances());

}  // namespace qmarkov

#endif
