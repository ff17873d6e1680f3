#include "qmarkov/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"

namespace qmarkov {

namespace {

SystemLayout layout_of(const std::vector<Alphabet>& alphabets) {
  std::vector<SubSystem> systems;
  systems.reserve(alphabets.size());
  for (const auto& a : alphabets) systems.push_back({a.label, a.size});
  return SystemLayout(std::move(systems));
}

}  // namespace

JointPmf::JointPmf(std::vector<Alphabet> alphabets, std::vector<double> probs)
    : alphabets_(std::move(alphabets)),
      probs_(std::move(probs)),
      layout_(layout_of(alphabets_)) {
  if (static_cast<int>(probs_.size()) != layout_.total_dim())
    throw LayoutError("pmf has " + std::to_string(probs_.size()) +
                      " entries, alphabets need " +
                      std::to_string(layout_.total_dim()));
  double sum = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw ValidationError("pmf: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("pmf: total mass = " + num_str(sum));
}

double JointPmf::prob(const std::vector<int>& values) const {
  return probs_[layout_.compose(values)];
}

JointPmf pmf_marginal(const JointPmf& pmf, const std::vector<std::string>& keep) {
  const SystemLayout& L = pmf.layout();
  auto keep_pos = L.positions(keep);
  std::sort(keep_pos.begin(), keep_pos.end());

  std::vector<Alphabet> out_alpha;
  for (int p : keep_pos) out_alpha.push_back(pmf.alphabets()[p]);
  SystemLayout out_layout = layout_of(out_alpha);

  std::vector<double> out(out_layout.total_dim(), 0.0);
  std::vector<int> digits, sub(keep_pos.size());
  for (int i = 0; i < L.total_dim(); ++i) {
    L.decompose(i, digits);
    for (size_t s = 0; s < keep_pos.size(); ++s) sub[s] = digits[keep_pos[s]];
    out[out_layout.compose(sub)] += pmf.probs()[i];
  }
  // renormalize rounding dust so that nested marginals stay valid
  double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (sum > 0.0 && std::abs(sum - 1.0) <= 1e-12)
    for (auto& p : out) p /= sum;
  return JointPmf(std::move(out_alpha), std::move(out));
}

namespace {

std::vector<std::string> joined(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double shannon_entropy(const JointPmf& pmf) {
  double s = 0.0;
  for (double p : pmf.probs())
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

double group_entropy(const JointPmf& pmf, const std::vector<std::string>& keep) {
  return shannon_entropy(pmf_marginal(pmf, keep));
}

}  // namespace

double classical_cmi(const JointPmf& pmf, const std::vector<std::string>& sys_a,
                     const std::vector<std::string>& sys_c,
                     const std::vector<std::string>& given_b) {
  std::set<std::string> seen;
  for (const auto& group : {sys_a, sys_c, given_b})
    for (const auto& l : group)
      if (!seen.insert(l).second)
        throw LayoutError("classical_cmi: label '" + l + "' repeated");

  if (given_b.empty()) {
    return group_entropy(pmf, sys_a) + group_entropy(pmf, sys_c) -
           group_entropy(pmf, joined(sys_a, sys_c));
  }
  return group_entropy(pmf, joined(sys_a, given_b)) +
         group_entropy(pmf, joined(sys_c, given_b)) -
         group_entropy(pmf, given_b) -
         group_entropy(pmf, joined(joined(sys_a, given_b), sys_c));
}

namespace {

// p(A | X = x) as a dense vector, for the 2-variable marginal (A, X).
std::vector<double> conditional_of(const JointPmf& ax, int x_value, int a_size,
                                   double px) {
  std::vector<double> cond(a_size, 0.0);
  for (int a = 0; a < a_size; ++a) cond[a] = ax.prob({a, x_value}) / px;
  return cond;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0.0;
  for (size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

// Partition the values of X (with positive mass) by total-variation equality
// of p(A|X=x). Returns blocks of values plus one representative conditional
// per block.
struct SidePartition {
  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<double>> conditionals;
  std::map<int, int> block_of;
};

SidePartition partition_side(const JointPmf& pmf, const std::string& a_label,
                             const std::string& x_label, double eq_tol) {
  JointPmf ax = pmf_marginal(pmf, {a_label, x_label});
  JointPmf xm = pmf_marginal(pmf, {x_label});
  const int a_size = ax.alphabets()[0].size;
  const int x_size = ax.alphabets()[1].size;

  SidePartition part;
  for (int x = 0; x < x_size; ++x) {
    const double px = xm.probs()[x];
    if (px <= 0.0) continue;  // excluded from the partition
    auto cond = conditional_of(ax, x, a_size, px);
    int found = -1;
    for (size_t b = 0; b < part.blocks.size(); ++b)
      if (total_variation(cond, part.conditionals[b]) <= eq_tol) {
        found = static_cast<int>(b);
        break;
      }
    if (found < 0) {
      part.blocks.push_back({x});
      part.conditionals.push_back(std::move(cond));
      found = static_cast<int>(part.blocks.size()) - 1;
    } else {
      part.blocks[found].push_back(x);
    }
    part.block_of[x] = found;
  }
  return part;
}

}  // namespace

ClassicalLabel common_label_partition(const JointPmf& pmf, double eq_tol,
                                      double chain_tol) {
  if (pmf.alphabets().size() != 3)
    throw LayoutError("common_label_partition needs exactly three alphabets");
  const std::string a = pmf.alphabets()[0].label;
  const std::string b = pmf.alphabets()[1].label;
  const std::string c = pmf.alphabets()[2].label;

  const double chain_bc = classical_cmi(pmf, {a}, {c}, {b});
  const double chain_cb = classical_cmi(pmf, {a}, {b}, {c});
  if (chain_bc > chain_tol || chain_cb > chain_tol)
    throw NotMarkovError("chains fail: I(A;C|B) = " + num_str(chain_bc) +
                         ", I(A;B|C) = " + num_str(chain_cb));

  SidePartition pb = partition_side(pmf, a, b, eq_tol);
  SidePartition pc = partition_side(pmf, a, c, eq_tol);

  // Union-find over B-blocks and C-blocks, linked by positive joint mass.
  const int nb = static_cast<int>(pb.blocks.size());
  const int nc = static_cast<int>(pc.blocks.size());
  std::vector<int> parent(nb + nc);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) { parent[find(x)] = find(y); };

  JointPmf bc = pmf_marginal(pmf, {b, c});
  for (const auto& [bv, bblock] : pb.block_of)
    for (const auto& [cv, cblock] : pc.block_of)
      if (bc.prob({bv, cv}) > 0.0) unite(bblock, nb + cblock);

  // Any two sides of one component must share the conditional distribution.
  for (const auto& [bv, bblock] : pb.block_of)
    for (const auto& [cv, cblock] : pc.block_of)
      if (find(bblock) == find(nb + cblock) &&
          total_variation(pb.conditionals[bblock], pc.conditionals[cblock]) >
              10 * eq_tol)
        throw StructureError(
            "aligned blocks disagree on the conditional distribution of A");

  // Components in first-appearance order over B-blocks, then C-blocks.
  std::map<int, int> label_of_root;
  ClassicalLabel out;
  auto label_for = [&](int root) {
    auto it = label_of_root.find(root);
    if (it != label_of_root.end()) return it->second;
    const int j = static_cast<int>(out.partition_b.size());
    label_of_root[root] = j;
    out.partition_b.emplace_back();
    out.partition_c.emplace_back();
    return j;
  };
  for (int bblock = 0; bblock < nb; ++bblock) label_for(find(bblock));
  for (int cblock = 0; cblock < nc; ++cblock) label_for(find(nb + cblock));

  for (const auto& [bv, bblock] : pb.block_of) {
    const int j = label_for(find(bblock));
    out.partition_b[j].push_back(bv);
    out.g1[bv] = j;
  }
  for (const auto& [cv, cblock] : pc.block_of) {
    const int j = label_for(find(nb + cblock));
    out.partition_c[j].push_back(cv);
    out.g2[cv] = j;
  }

  // g1(b) = g2(c) whenever p(b,c) > 0.
  for (const auto& [bv, j1] : out.g1)
    for (const auto& [cv, j2] : out.g2)
      if (bc.prob({bv, cv}) > 0.0 && j1 != j2)
        throw StructureError("positive-mass pair crosses label blocks");

  // Verify A independent of (B,C) given J on the extended PMF.
  const int m = out.label_count();
  std::vector<Alphabet> ext_alpha = pmf.alphabets();
  ext_alpha.push_back({fresh_label(pmf.layout(), "J"), m});
  SystemLayout ext_layout = layout_of(ext_alpha);
  std::vector<double> ext(ext_layout.total_dim(), 0.0);
  std::vector<int> digits;
  for (int i = 0; i < pmf.layout().total_dim(); ++i) {
    const double p = pmf.probs()[i];
    if (p <= 0.0) continue;
    pmf.layout().decompose(i, digits);
    std::vector<int> cell = {digits[0], digits[1], digits[2],
                             out.g1.at(digits[1])};
    ext[ext_layout.compose(cell)] += p;
  }
  JointPmf ext_pmf(ext_alpha, ext);
  const std::string j_label = ext_alpha[3].label;
  const double resid = classical_cmi(ext_pmf, {a}, {b, c}, {j_label});
  if (resid > chain_tol)
    throw StructureError("I(A;B,C|J) = " + num_str(resid) +
                         " after grouping");
  return out;
}

ClassicalConditionalVerdict conditional_double_markov_check(const JointPmf& pmf,
                                                            bool pos_required,
                                                            double chain_tol,
                                                            double cond_tol) {
  if (pmf.alphabets().size() != 4)
    throw LayoutError("conditional_double_markov_check needs four alphabets");
  if (pos_required)
    for (double p : pmf.probs())
      if (p <= 0.0)
        throw FullSupportError("pmf has a zero cell but positivity is required");

  const std::string a = pmf.alphabets()[0].label;
  const std::string b = pmf.alphabets()[1].label;
  const std::string c = pmf.alphabets()[2].label;
  const std::string d = pmf.alphabets()[3].label;

  ClassicalConditionalVerdict v;
  v.cmi_c_given_bd = classical_cmi(pmf, {a}, {c}, {b, d});
  v.cmi_b_given_cd = classical_cmi(pmf, {a}, {b}, {c, d});
  v.chain_bd_holds = v.cmi_c_given_bd <= chain_tol;
  v.chain_cd_holds = v.cmi_b_given_cd <= chain_tol;

  // p(a|b,c,d) = p(a|d) on every cell with positive conditioning mass.
  JointPmf ad = pmf_marginal(pmf, {a, d});
  JointPmf dm = pmf_marginal(pmf, {d});
  JointPmf bcd = pmf_marginal(pmf, {b, c, d});
  const auto& alpha = pmf.alphabets();
  for (int bv = 0; bv < alpha[1].size; ++bv)
    for (int cv = 0; cv < alpha[2].size; ++cv)
      for (int dv = 0; dv < alpha[3].size; ++dv) {
        const double pbcd = bcd.prob({bv, cv, dv});
        const double pd = dm.probs()[dv];
        if (pbcd <= 0.0 || pd <= 0.0) continue;
        for (int av = 0; av < alpha[0].size; ++av) {
          const double lhs = pmf.prob({av, bv, cv, dv}) / pbcd;
          const double rhs = ad.prob({av, dv}) / pd;
          v.max_conditional_dev = std::max(v.max_conditional_dev,
                                           std::abs(lhs - rhs));
        }
      }
  v.conclusion_holds = v.max_conditional_dev <= cond_tol;
  return v;
}

DensityOperator embed_diagonal(const JointPmf& pmf) {
  const int d = pmf.layout().total_dim();
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = pmf.probs()[i];
  return DensityOperator::validated(Operator(pmf.layout(), std::move(m)));
}

}  // namespace qmarkov
