#include "qmarkov/entropy.hpp"

#include <cmath>
#include <set>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"
#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"

namespace qmarkov {

namespace {

void require_disjoint(const std::vector<std::string>& a,
                      const std::vector<std::string>& b, const char* what) {
  std::set<std::string> sa(a.begin(), a.end());
  for (const auto& l : b)
    if (sa.count(l))
      throw LayoutError(std::string(what) + ": label '" + l +
                        "' appears in both groups");
}

double entropy_of_eigenvalues(const RealVector& eigenvalues, double cutoff) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues(i);
    if (lam < -1e-10)
      throw NumericError("entropy: eigenvalue " + num_str(lam) +
                         " below the PSD slack");
    if (lam > cutoff) s -= lam * std::log(lam);
  }
  return s;
}

double subsystem_entropy(const Operator& rho,
                         const std::vector<std::string>& keep, double cutoff) {
  Operator marg = partial_trace(rho, keep);
  return entropy_of_eigenvalues(hermitian_eig(marg.entries(), 1e-9).eigenvalues,
                                cutoff);
}

std::vector<std::string> joined(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

void MarkovChainSpec::validate(const SystemLayout& layout) const {
  if (head.empty() || pivot.empty() || tail.empty())
    throw LayoutError("chain groups must be nonempty");
  require_disjoint(head, pivot, "chain");
  require_disjoint(head, tail, "chain");
  require_disjoint(pivot, tail, "chain");
  layout.positions(joined(joined(head, pivot), tail));
}

double von_neumann_entropy(const DensityOperator& rho, double eig_cutoff) {
  const double s = entropy_of_eigenvalues(
      hermitian_eig(rho.entries(), 1e-9).eigenvalues, eig_cutoff);
  return s < 0.0 ? 0.0 : s;
}

double conditional_entropy(const DensityOperator& rho,
                           const std::vector<std::string>& target,
                           const std::vector<std::string>& given,
                           double eig_cutoff) {
  require_disjoint(target, given, "conditional_entropy");
  const double s_joint =
      subsystem_entropy(rho.op(), joined(target, given), eig_cutoff);
  const double s_given = subsystem_entropy(rho.op(), given, eig_cutoff);
  return s_joint - s_given;
}

double cmi(const DensityOperator& rho, const std::vector<std::string>& sys_a,
           const std::vector<std::string>& sys_c,
           const std::vector<std::string>& given_b, double eig_cutoff) {
  require_disjoint(sys_a, sys_c, "cmi");
  require_disjoint(sys_a, given_b, "cmi");
  require_disjoint(sys_c, given_b, "cmi");
  if (sys_a.empty() || sys_c.empty()) throw LayoutError("cmi: empty label group");

  const Operator& op = rho.op();
  if (given_b.empty()) {
    const double s_a = subsystem_entropy(op, sys_a, eig_cutoff);
    const double s_c = subsystem_entropy(op, sys_c, eig_cutoff);
    const double s_ac = subsystem_entropy(op, joined(sys_a, sys_c), eig_cutoff);
    return s_a + s_c - s_ac;
  }
  const double s_ab = subsystem_entropy(op, joined(sys_a, given_b), eig_cutoff);
  const double s_bc = subsystem_entropy(op, joined(sys_c, given_b), eig_cutoff);
  const double s_b = subsystem_entropy(op, given_b, eig_cutoff);
  const double s_abc =
      subsystem_entropy(op, joined(joined(sys_a, given_b), sys_c), eig_cutoff);
  return s_ab + s_bc - s_b - s_abc;
}

MarkovVerdict assert_markov(const DensityOperator& rho, const MarkovChainSpec& spec,
                            double tol, double eig_cutoff) {
  spec.validate(rho.layout());
  MarkovVerdict v;
  v.cmi_value = cmi(rho, spec.head, spec.tail, spec.pivot, eig_cutoff);
  v.tolerance = tol;
  v.holds = v.cmi_value <= tol;
  return v;
}

}  // namespace qmarkov
