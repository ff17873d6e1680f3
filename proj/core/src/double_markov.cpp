#include "qmarkov/double_markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"
#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"

namespace qmarkov {

namespace {

std::vector<std::string> concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> in_layout_order(const SystemLayout& layout,
                                         const std::vector<std::string>& labels) {
  auto pos = layout.positions(labels);
  std::sort(pos.begin(), pos.end());
  return layout.labels_at(pos);
}

int dims_product(const SystemLayout& layout, const std::vector<std::string>& labels) {
  int d = 1;
  for (const auto& l : labels) d *= layout.system(layout.position(l)).dim;
  return d;
}

void require_partition(const SystemLayout& layout,
                       const std::vector<std::vector<std::string>>& groups) {
  std::set<std::string> seen;
  size_t total = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw LayoutError("empty label group");
    for (const auto& l : g) {
      layout.position(l);
      if (!seen.insert(l).second)
        throw LayoutError("label '" + l + "' appears in two groups");
      ++total;
    }
  }
  if (total != static_cast<size_t>(layout.count()))
    throw LayoutError("label groups must cover every subsystem");
}

}  // namespace

DensityOperator label_extended_state(const DensityOperator& rho,
                                     const CommonLabel& cert,
                                     const std::vector<std::string>& b_labels,
                                     const std::vector<std::string>& c_labels) {
  const SystemLayout& L = rho.layout();
  const int m = cert.label_count();
  const std::string j_label = fresh_label(L, "J");

  std::vector<SubSystem> ext_systems = L.systems();
  ext_systems.push_back({j_label, m});
  SystemLayout ext_layout(std::move(ext_systems));

  const int d = L.total_dim();
  Matrix ext = Matrix::Zero(d * m, d * m);
  for (int j = 0; j < m; ++j) {
    const Matrix pb = embed_operator(L, b_labels, cert.pvm_b[j]).entries();
    const Matrix pc = embed_operator(L, c_labels, cert.pvm_c[j]).entries();
    const Matrix proj = pb * pc;
    const Matrix blockj = proj * rho.entries() * proj.adjoint();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) ext(r * m + j, c * m + j) = blockj(r, c);
  }
  ext = ((ext + ext.adjoint()) / 2.0).eval();
  return DensityOperator::trusted(Operator(ext_layout, std::move(ext)));
}

CommonLabel certify_double_markov(const DensityOperator& rho,
                                  const std::vector<std::string>& a_labels,
                                  const std::vector<std::string>& b_labels,
                                  const std::vector<std::string>& c_labels,
                                  const Tolerances& tols, std::uint64_t rng_seed) {
  const SystemLayout& L = rho.layout();
  require_partition(L, {a_labels, b_labels, c_labels});

  const MarkovChainSpec chain_b{a_labels, b_labels, c_labels};
  const MarkovChainSpec chain_c{a_labels, c_labels, b_labels};
  const MarkovVerdict vb = assert_markov(rho, chain_b, tols.cmi_tol, tols.eig_cutoff);
  const MarkovVerdict vc = assert_markov(rho, chain_c, tols.cmi_tol, tols.eig_cutoff);
  if (!vb.holds || !vc.holds)
    throw NotMarkovError("I(A;C|B) = " + num_str(vb.cmi_value) +
                         ", I(A;B|C) = " + num_str(vc.cmi_value) +
                         ", tolerance " + num_str(tols.cmi_tol));

  Rng seeder(rng_seed);
  const BlockDecomposition dec_b = markov_decompose(rho, chain_b, tols, seeder());
  const BlockDecomposition dec_c = markov_decompose(rho, chain_c, tols, seeder());

  const int nk = dec_b.block_count();
  const int nl = dec_c.block_count();

  CommonLabel cert;
  cert.fine.joint = Eigen::MatrixXd::Zero(nk, nl);
  for (const auto& b : dec_b.blocks) cert.fine.proj_b.push_back(b.projector());
  for (const auto& c : dec_c.blocks) cert.fine.proj_c.push_back(c.projector());

  // Conditional states of A on the surviving fine pairs.
  struct FinePair {
    int k, l;
    double p;
  };
  std::vector<FinePair> pairs;
  std::vector<DensityOperator> pair_states;
  for (int k = 0; k < nk; ++k) {
    const Matrix mb = embed_operator(L, b_labels, cert.fine.proj_b[k]).entries();
    for (int l = 0; l < nl; ++l) {
      const Matrix mc = embed_operator(L, c_labels, cert.fine.proj_c[l]).entries();
      const Matrix proj = mb * mc;
      Matrix compressed = proj * rho.entries() * proj.adjoint();
      const double p = compressed.trace().real();
      cert.fine.joint(k, l) = p;
      if (p <= tols.weight_floor) continue;
      compressed = ((compressed + compressed.adjoint()) / 2.0).eval();
      Operator comp_op(L, std::move(compressed));
      Operator amarg = partial_trace(comp_op, a_labels);
      amarg.entries() /= p;
      pairs.push_back({k, l, p});
      DensityOperator cond = DensityOperator::trusted(std::move(amarg));
      cert.fine.cond_a.emplace(std::make_pair(k, l), cond);
      pair_states.push_back(std::move(cond));
    }
  }
  if (pairs.empty()) throw StructureError("no fine pair carries weight");

  // Single-link clustering of the conditional states within group_tol.
  const int np = static_cast<int>(pairs.size());
  std::vector<int> parent(np);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  Eigen::MatrixXd dist(np, np);
  for (int i = 0; i < np; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < np; ++j) {
      dist(i, j) = dist(j, i) = trace_distance(pair_states[i], pair_states[j]);
      if (dist(i, j) <= tols.group_tol) parent[find(i)] = find(j);
    }
  }
  // Cluster diameters must stay far below the merge band.
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j)
      if (find(i) == find(j) && dist(i, j) > 10 * tols.group_tol)
        throw StructureError("grouping band exceeded: conditional states " +
                             num_str(dist(i, j)) + " apart inside one label");

  // Fine indices must group consistently on both sides.
  cert.g1.assign(nk, -1);
  cert.g2.assign(nl, -1);
  std::map<int, std::vector<int>> members;  // root -> pair indices
  for (int i = 0; i < np; ++i) members[find(i)].push_back(i);

  // Canonical label order: descending cluster weight, then smallest fine k.
  struct Cluster {
    double weight = 0.0;
    int min_k = 0;
    int min_l = 0;
    std::vector<int> pair_idx;
  };
  std::vector<Cluster> clusters;
  for (auto& [root, idxs] : members) {
    Cluster c;
    c.min_k = nk;
    c.min_l = nl;
    for (int i : idxs) {
      c.weight += pairs[i].p;
      c.min_k = std::min(c.min_k, pairs[i].k);
      c.min_l = std::min(c.min_l, pairs[i].l);
    }
    c.pair_idx = idxs;
    clusters.push_back(std::move(c));
  }
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.min_k != b.min_k) return a.min_k < b.min_k;
    return a.min_l < b.min_l;
  });

  const int db = dims_product(L, b_labels);
  const int dc = dims_product(L, c_labels);
  for (size_t j = 0; j < clusters.size(); ++j) {
    const auto& cl = clusters[j];
    Matrix eb = Matrix::Zero(db, db);
    Matrix ec = Matrix::Zero(dc, dc);
    Matrix acc = Matrix::Zero(dims_product(L, a_labels), dims_product(L, a_labels));
    std::set<int> ks, ls;
    for (int i : cl.pair_idx) {
      const auto& fp = pairs[i];
      if (cert.g1[fp.k] != -1 && cert.g1[fp.k] != static_cast<int>(j))
        throw StructureError("fine index k = " + std::to_string(fp.k) +
                             " maps to two labels");
      if (cert.g2[fp.l] != -1 && cert.g2[fp.l] != static_cast<int>(j))
        throw StructureError("fine index l = " + std::to_string(fp.l) +
                             " maps to two labels");
      cert.g1[fp.k] = static_cast<int>(j);
      cert.g2[fp.l] = static_cast<int>(j);
      if (ks.insert(fp.k).second) eb += cert.fine.proj_b[fp.k];
      if (ls.insert(fp.l).second) ec += cert.fine.proj_c[fp.l];
      acc += fp.p * pair_states[i].entries();
    }
    cert.labels.push_back(static_cast<int>(j));
    cert.pvm_b.push_back(std::move(eb));
    cert.pvm_c.push_back(std::move(ec));
    cert.p_j.push_back(cl.weight);
    acc /= cl.weight;
    acc = ((acc + acc.adjoint()) / 2.0).eval();
    SystemLayout a_layout = L.sub(L.positions(in_layout_order(L, a_labels)));
    cert.rho_a_given_j.push_back(
        DensityOperator::trusted(Operator(a_layout, std::move(acc))));
  }

  // Fine indices with no surviving pair would leave holes in the PVMs; they
  // carry at most weight_floor mass and signal a tolerance breakdown.
  for (int k = 0; k < nk; ++k)
    if (cert.g1[k] < 0)
      throw StructureError("fine index k = " + std::to_string(k) +
                           " carries no weight above the floor");
  for (int l = 0; l < nl; ++l)
    if (cert.g2[l] < 0)
      throw StructureError("fine index l = " + std::to_string(l) +
                           " carries no weight above the floor");

  // Block-diagonal reconstruction through the coarse PVMs.
  Matrix recon = Matrix::Zero(L.total_dim(), L.total_dim());
  for (size_t j = 0; j < cert.labels.size(); ++j) {
    const Matrix proj = embed_operator(L, b_labels, cert.pvm_b[j]).entries() *
                        embed_operator(L, c_labels, cert.pvm_c[j]).entries();
    recon += proj * rho.entries() * proj.adjoint();
  }
  const double recon_resid = (recon - rho.entries()).norm();
  if (recon_resid > tols.recon_tol)
    throw CertificateError("pinching through the PVMs changes the state by " +
                           num_str(recon_resid));

  // The label must screen A off (B, C).
  const DensityOperator ext = label_extended_state(rho, cert, b_labels, c_labels);
  const std::string j_label = ext.layout().system(ext.layout().count() - 1).label;
  const double label_cmi =
      cmi(ext, a_labels, concat(b_labels, c_labels), {j_label}, tols.eig_cutoff);
  if (label_cmi > tols.cmi_tol)
    throw CertificateError("I(A;BC|J) = " + num_str(label_cmi) +
                           " exceeds " + num_str(tols.cmi_tol));
  return cert;
}

LabelVerdict verify_common_label(const DensityOperator& rho, const CommonLabel& cert,
                                 const std::vector<std::string>& a_labels,
                                 const std::vector<std::string>& b_labels,
                                 const std::vector<std::string>& c_labels,
                                 const Tolerances& tols) {
  const SystemLayout& L = rho.layout();
  require_partition(L, {a_labels, b_labels, c_labels});
  LabelVerdict verdict;

  const Operator rho_b = partial_trace(rho.op(), b_labels);
  const Operator rho_c = partial_trace(rho.op(), c_labels);

  double worst_proj = 0.0;
  for (const auto& group : {cert.pvm_b, cert.pvm_c})
    for (const auto& e : group) {
      worst_proj = std::max(worst_proj, (e * e - e).norm());
      worst_proj = std::max(worst_proj, (e - Matrix(e.adjoint())).norm());
    }
  verdict.add("pvm elements are projectors", worst_proj <= 1e-9, worst_proj);

  Matrix sum_b = Matrix::Zero(rho_b.dim(), rho_b.dim());
  for (const auto& e : cert.pvm_b) sum_b += e;
  const double supp_b_resid =
      (sum_b - support_projector(rho_b.entries(), tols.eig_cutoff)).norm();
  verdict.add("pvm on B sums to the support of rho_B", supp_b_resid <= 1e-9,
              supp_b_resid);

  Matrix sum_c = Matrix::Zero(rho_c.dim(), rho_c.dim());
  for (const auto& e : cert.pvm_c) sum_c += e;
  const double supp_c_resid =
      (sum_c - support_projector(rho_c.entries(), tols.eig_cutoff)).norm();
  verdict.add("pvm on C sums to the support of rho_C", supp_c_resid <= 1e-9,
              supp_c_resid);

  Matrix recon = Matrix::Zero(L.total_dim(), L.total_dim());
  for (size_t j = 0; j < cert.pvm_b.size(); ++j) {
    const Matrix proj = embed_operator(L, b_labels, cert.pvm_b[j]).entries() *
                        embed_operator(L, c_labels, cert.pvm_c[j]).entries();
    recon += proj * rho.entries() * proj.adjoint();
  }
  const double recon_resid = (recon - rho.entries()).norm();
  verdict.add("pinching through the PVMs preserves the state",
              recon_resid <= tols.recon_tol, recon_resid);

  double min_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cert.rho_a_given_j.size(); ++i)
    for (size_t j = i + 1; j < cert.rho_a_given_j.size(); ++j)
      min_dist = std::min(
          min_dist, trace_distance(cert.rho_a_given_j[i], cert.rho_a_given_j[j]));
  if (cert.rho_a_given_j.size() < 2) min_dist = 1.0;
  verdict.add("conditional states of A are pairwise distinct",
              min_dist >= tols.group_tol, min_dist);

  const DensityOperator ext = label_extended_state(rho, cert, b_labels, c_labels);
  const std::string j_label = ext.layout().system(ext.layout().count() - 1).label;

  const double s_j_b = conditional_entropy(ext, {j_label}, b_labels, tols.eig_cutoff);
  verdict.add("S(J|B) vanishes", std::abs(s_j_b) <= tols.cmi_tol, s_j_b);
  const double s_j_c = conditional_entropy(ext, {j_label}, c_labels, tols.eig_cutoff);
  verdict.add("S(J|C) vanishes", std::abs(s_j_c) <= tols.cmi_tol, s_j_c);

  const double label_cmi =
      cmi(ext, a_labels, concat(b_labels, c_labels), {j_label}, tols.eig_cutoff);
  verdict.add("I(A;BC|J) vanishes", label_cmi <= tols.cmi_tol, label_cmi);

  const double chain_b = cmi(rho, a_labels, c_labels, b_labels, tols.eig_cutoff);
  verdict.add("I(A;C|B) vanishes", chain_b <= tols.cmi_tol, chain_b);
  const double chain_c = cmi(rho, a_labels, b_labels, c_labels, tols.eig_cutoff);
  verdict.add("I(A;B|C) vanishes", chain_c <= tols.cmi_tol, chain_c);

  return verdict;
}

namespace {

// Extend a pivot decomposition (x = A, y = pivot, tail = rest) to a
// decomposition of everything but A, folding the tail into the y2 factors.
BlockDecomposition extend_to_full_y(const BlockDecomposition& dec) {
  const SystemLayout& L = dec.layout;
  auto yo_ext = in_layout_order(L, concat(dec.y_labels, dec.tail_labels));
  const SystemLayout ext_layout = L.sub(L.positions(yo_ext));

  // Positions of the pivot and inserted systems inside the extended order.
  std::vector<int> pivot_pos, ins_pos;
  for (int i = 0; i < ext_layout.count(); ++i) {
    const std::string& lab = ext_layout.system(i).label;
    if (std::find(dec.y_labels.begin(), dec.y_labels.end(), lab) !=
        dec.y_labels.end())
      pivot_pos.push_back(i);
    else
      ins_pos.push_back(i);
  }
  const SystemLayout pivot_layout = ext_layout.sub(pivot_pos);
  const SystemLayout ins_layout = ext_layout.sub(ins_pos);
  const int d_ext = ext_layout.total_dim();
  const int d_ins = ins_layout.total_dim();

  BlockDecomposition out;
  out.layout = L;
  out.x_labels = dec.x_labels;
  out.y_labels = yo_ext;
  out.tail_labels = {};
  out.y1_label = fresh_label(L, "y1");
  out.y2_label = fresh_label(L, "y2");

  Matrix support = Matrix::Zero(d_ext, d_ext);
  std::vector<int> digits, pdig(pivot_pos.size()), idig(ins_pos.size());
  for (const auto& b : dec.blocks) {
    const int d2_ext = d_ins * b.d2;
    Matrix iso = Matrix::Zero(b.d1 * d2_ext, d_ext);
    for (int e = 0; e < d_ext; ++e) {
      ext_layout.decompose(e, digits);
      for (size_t s = 0; s < pivot_pos.size(); ++s) pdig[s] = digits[pivot_pos[s]];
      for (size_t s = 0; s < ins_pos.size(); ++s) idig[s] = digits[ins_pos[s]];
      const int yp = pivot_layout.compose(pdig);
      const int yi = ins_layout.compose(idig);
      for (int i1 = 0; i1 < b.d1; ++i1)
        for (int i2 = 0; i2 < b.d2; ++i2)
          iso(i1 * d2_ext + yi * b.d2 + i2, e) = b.isometry(i1 * b.d2 + i2, yp);
    }
    support += iso.adjoint() * iso;

    // The y2 factor of the pivot decomposition already carries its tail
    // systems in front, so its entries match the fused index (ins, i2).
    SystemLayout fused_layout({{out.y2_label, d2_ext}});
    DensityOperator f2_ext = DensityOperator::trusted(
        Operator(fused_layout, b.factor_y2.entries()));

    // Re-label the first factor's synthetic system if the fresh names differ.
    DensityOperator f1 = b.factor_xy1;
    if (dec.y1_label != out.y1_label) {
      std::vector<SubSystem> systems = f1.layout().systems();
      for (auto& s : systems)
        if (s.label == dec.y1_label) s.label = out.y1_label;
      f1 = DensityOperator::trusted(
          Operator(SystemLayout(std::move(systems)), f1.entries()));
    }
    out.blocks.push_back({std::move(iso), b.d1, d2_ext, b.weight, std::move(f1),
                          std::move(f2_ext)});
  }
  out.support = support;
  return out;
}

}  // namespace

ConditionalCertificate certify_conditional_double_markov(
    const DensityOperator& rho, const std::vector<std::string>& a_labels,
    const std::vector<std::string>& b_labels,
    const std::vector<std::string>& c_labels,
    const std::vector<std::string>& d_labels, const Tolerances& tols,
    std::uint64_t rng_seed) {
  const SystemLayout& L = rho.layout();
  require_partition(L, {a_labels, b_labels, c_labels, d_labels});

  const double min_eig = hermitian_eig(rho.entries(), 1e-9).eigenvalues.minCoeff();
  if (min_eig < tols.pos_floor)
    throw FullSupportError("min eigenvalue " + num_str(min_eig) +
                           " below the positivity floor " +
                           num_str(tols.pos_floor));

  const MarkovChainSpec chain_bd{a_labels, concat(b_labels, d_labels), c_labels};
  const MarkovChainSpec chain_cd{a_labels, concat(c_labels, d_labels), b_labels};
  const MarkovVerdict v1 = assert_markov(rho, chain_bd, tols.cmi_tol, tols.eig_cutoff);
  const MarkovVerdict v2 = assert_markov(rho, chain_cd, tols.cmi_tol, tols.eig_cutoff);
  if (!v1.holds || !v2.holds)
    throw NotMarkovError("I(A;C|BD) = " + num_str(v1.cmi_value) +
                         ", I(A;B|CD) = " + num_str(v2.cmi_value) +
                         ", tolerance " + num_str(tols.cmi_tol));

  Rng seeder(rng_seed);
  ConditionalCertificate cert;
  cert.bd_decomposition = markov_decompose(rho, chain_bd, tols, seeder());
  cert.cd_decomposition = markov_decompose(rho, chain_cd, tols, seeder());

  // Both extend to decompositions of everything but A; full support makes
  // the minimal decomposition unique, so the blocks must match.
  const BlockDecomposition ext_bd = extend_to_full_y(cert.bd_decomposition);
  const BlockDecomposition ext_cd = extend_to_full_y(cert.cd_decomposition);
  DecompositionMatch match;
  try {
    match = match_decompositions(ext_bd, ext_cd, tols);
  } catch (const MatchError& e) {
    throw StructureError(std::string("pivot decompositions do not match: ") +
                         e.what());
  }
  cert.l_of_k = match.bijection;

  // The first factor of each (B,D) block must act on D alone.
  const auto bd_order =
      in_layout_order(L, concat(b_labels, d_labels));
  const SystemLayout bd_layout = L.sub(L.positions(bd_order));
  const int d_b = dims_product(L, b_labels);
  const int d_d = dims_product(L, d_labels);

  std::vector<BlockSkeleton> d_skeletons;
  const Operator rho_d = partial_trace(rho.op(), d_labels);
  for (const auto& block : cert.bd_decomposition.blocks) {
    if (block.d2 % d_b != 0)
      throw StructureError("second factor dimension " + std::to_string(block.d2) +
                           " is not a multiple of dim(B)");
    const int d2d = block.d2 / d_b;

    // Algebra of the first factor, pushed to the (B,D) space; every element
    // must be I_B (x) (operator on D).
    std::vector<Matrix> d_side;
    double worst_leak = 0.0;
    for (const Matrix& f : hermitian_basis(block.d1)) {
      const Matrix lifted = block.isometry.adjoint() *
                            kron2(f, Matrix::Identity(block.d2, block.d2)) *
                            block.isometry;
      Operator lifted_op(bd_layout, lifted);
      Operator s = partial_trace(lifted_op, d_labels);
      s.entries() /= double(d_b);
      const Matrix rebuilt =
          embed_operator(bd_layout, d_labels, s.entries()).entries();
      worst_leak = std::max(worst_leak, (lifted - rebuilt).norm());
      d_side.push_back(s.entries());
    }
    if (worst_leak > tols.match_tol * 10)
      throw StructureError("first factor leaks onto B: residual " +
                           num_str(worst_leak));

    // Factorize the D-side algebra of this block.
    AlgebraBasis alg = span_closure(d_side, d_d, tols.span_residual);
    auto projectors = central_projections(alg, tols.gap_tol, seeder(),
                                          tols.retry_budget);
    if (projectors.size() != 1)
      throw StructureError("D-side block algebra is not a single factor");
    BlockFactorization fac = factor_block(alg, projectors[0], seeder(), tols);
    if (fac.d1 != block.d1 || fac.d2 != d2d)
      throw StructureError("D-side factorization has dims (" +
                           std::to_string(fac.d1) + "," + std::to_string(fac.d2) +
                           "), expected (" + std::to_string(block.d1) + "," +
                           std::to_string(d2d) + ")");
    const double weight = (projectors[0] * rho_d.entries()).trace().real();
    d_skeletons.push_back({fac.isometry, fac.d1, fac.d2, weight});
  }

  cert.d_decomposition = assemble_decomposition(
      rho, a_labels, d_labels, concat(b_labels, c_labels), d_skeletons,
      support_projector(rho_d.entries(), tols.eig_cutoff), tols);

  cert.final_cmi =
      cmi(rho, a_labels, concat(b_labels, c_labels), d_labels, tols.eig_cutoff);
  if (cert.final_cmi > tols.cmi_tol)
    throw StructureError("I(A;BC|D) = " + num_str(cert.final_cmi) +
                         " exceeds " + num_str(tols.cmi_tol));
  return cert;
}

ConverseVerdict conditional_converse_check(const DensityOperator& rho,
                                           const std::vector<std::string>& a_labels,
                                           const std::vector<std::string>& b_labels,
                                           const std::vector<std::string>& c_labels,
                                           const std::vector<std::string>& d_labels,
                                           const Tolerances& tols) {
  const SystemLayout& L = rho.layout();
  require_partition(L, {a_labels, b_labels, c_labels, d_labels});

  ConverseVerdict v;
  v.cmi_a_bc_given_d =
      cmi(rho, a_labels, concat(b_labels, c_labels), d_labels, tols.eig_cutoff);
  v.cmi_a_c_given_bd =
      cmi(rho, a_labels, c_labels, concat(b_labels, d_labels), tols.eig_cutoff);
  v.cmi_a_b_given_cd =
      cmi(rho, a_labels, b_labels, concat(c_labels, d_labels), tols.eig_cutoff);
  v.premise = v.cmi_a_bc_given_d <= tols.cmi_tol;
  if (v.premise)
    v.conclusion_ok = v.cmi_a_c_given_bd <= tols.cmi_tol + tols.cmi_slack &&
                      v.cmi_a_b_given_cd <= tols.cmi_tol + tols.cmi_slack;
  return v;
}

}  // namespace qmarkov
