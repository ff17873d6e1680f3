#ifndef QMARKOV_CLASSICAL_HPP
#define QMARKOV_CLASSICAL_HPP

#include <map>
#include <string>
#include <vector>

#include "qmarkov/operators.hpp"

namespace qmarkov {

struct Alphabet {
  std::string label;
  int size = 1;
  bool operator==(const Alphabet&) const = default;
};

// A finite joint probability tensor with labeled alphabets. The flat index
// follows the same convention as SystemLayout: last alphabet fastest.
class JointPmf {
public:
  JointPmf(std::vector<Alphabet> alphabets, std::vector<double> probs);

  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const std::vector<double>& probs() const { return probs_; }
  int cells() const { return static_cast<int>(probs_.size()); }
  const SystemLayout& layout() const { return layout_; }

  double prob(const std::vector<int>& values) const;

private:
  std::vector<Alphabet> alphabets_;
  std::vector<double> probs_;
  SystemLayout layout_;  // mirrors the alphabets for index arithmetic
};

JointPmf pmf_marginal(const JointPmf& pmf, const std::vector<std::string>& keep);

// Shannon conditional mutual information I(A;C|B) in nats; an empty `given_b`
// degrades to the mutual information.
double classical_cmi(const JointPmf& pmf, const std::vector<std::string>& sys_a,
                     const std::vector<std::string>& sys_c,
                     const std::vector<std::string>& given_b);

// The common summary label of a three-variable PMF whose two chains
// A - B - C and A - C - B both hold.
struct ClassicalLabel {
  std::vector<std::vector<int>> partition_b;  // blocks of B values, by j
  std::vector<std::vector<int>> partition_c;  // blocks of C values, by j
  std::map<int, int> g1;                      // b value -> j
  std::map<int, int> g2;                      // c value -> j
  int label_count() const { return static_cast<int>(partition_b.size()); }
};

// Partitions the B and C alphabets of a 3-variable PMF (order A, B, C) by
// equality of the conditional distributions of A, aligns the two partitions
// through the positive-mass pairs, and verifies A is independent of (B,C)
// given the label. Throws NotMarkovError / StructureError.
ClassicalLabel common_label_partition(const JointPmf& pmf, double eq_tol = 1e-10,
                                      double chain_tol = default_tolerances().cmi_tol);

struct ClassicalConditionalVerdict {
  double cmi_c_given_bd = 0.0;  // I(A;C|B,D)
  double cmi_b_given_cd = 0.0;  // I(A;B|C,D)
  double max_conditional_dev = 0.0;  // max |p(a|b,c,d) - p(a|d)|
  bool chain_bd_holds = false;
  bool chain_cd_holds = false;
  bool conclusion_holds = false;  // p(a|b,c,d) = p(a|d) everywhere
  bool holds() const { return chain_bd_holds && chain_cd_holds && conclusion_holds; }
};

// Checks the 4-variable conditional double-Markov property of a PMF with
// alphabets in order A, B, C, D. With pos_required, every cell must be
// strictly positive (FullSupportError otherwise).
ClassicalConditionalVerdict conditional_double_markov_check(
    const JointPmf& pmf, bool pos_required = true,
    double chain_tol = default_tolerances().cmi_tol, double cond_tol = 1e-10);

// The PMF as a diagonal density operator over one subsystem per alphabet.
DensityOperator embed_diagonal(const JointPmf& pmf);

}  // namespace qmarkov

#endif
