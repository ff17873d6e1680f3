#include "qmarkov/markov_structure.hpp"

#include <algorithm>
#include <cmath>

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

int dims_product(const SystemLayout& layout, const std::vector<std::string>& labels) {
  int d = 1;
  for (const auto& l : labels) d *= layout.system(layout.position(l)).dim;
  return d;
}

// Labels in layout order.
std::vector<std::string> in_layout_order(const SystemLayout& layout,
                                         const std::vector<std::string>& labels) {
  auto pos = layout.positions(labels);
  std::sort(pos.begin(), pos.end());
  return layout.labels_at(pos);
}

}  // namespace

std::vector<std::pair<int, int>> BlockDecomposition::dims() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.emplace_back(b.d1, b.d2);
  return out;
}

std::vector<Matrix> conditional_generators(const DensityOperator& rho,
                                           const std::vector<std::string>& x_labels,
                                           double eig_cutoff) {
  const SystemLayout& L = rho.layout();
  auto xo = in_layout_order(L, x_labels);
  auto yo = L.labels_at(L.complement(xo));
  if (yo.empty()) throw LayoutError("conditional_generators: no Y side left");

  const Operator perm = permute_systems(rho.op(), concat(xo, yo));
  const Operator rho_y = partial_trace(rho.op(), yo);
  const Matrix isr = inverse_sqrt_on_support(rho_y.entries(), eig_cutoff);

  const int dx = dims_product(L, xo);
  const int dy = dims_product(L, yo);
  const Matrix& full = perm.entries();

  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(dx) * dx);
  for (const Matrix& f : hermitian_basis(dx)) {
    // T = Tr_X[(F (x) I) rho], taken directly from the permuted entries.
    Matrix t = Matrix::Zero(dy, dy);
    for (int x1 = 0; x1 < dx; ++x1)
      for (int x2 = 0; x2 < dx; ++x2) {
        const Complex fc = f(x1, x2);
        if (fc == Complex(0.0, 0.0)) continue;
        t += fc * full.block(x2 * dy, x1 * dy, dy, dy);
      }
    out.push_back(isr * t * isr);
  }
  return out;
}

namespace {

SystemLayout block_layout(const SystemLayout& L, const std::vector<std::string>& xo,
                          const std::vector<std::string>& to,
                          const std::string& y1_label, int d1,
                          const std::string& y2_label, int d2) {
  std::vector<SubSystem> systems;
  for (const auto& l : xo) systems.push_back(L.system(L.position(l)));
  for (const auto& l : to) systems.push_back(L.system(L.position(l)));
  systems.push_back({y1_label, d1});
  systems.push_back({y2_label, d2});
  return SystemLayout(std::move(systems));
}

DecompositionBlock make_block(const Operator& permuted, const SystemLayout& L,
                              const std::vector<std::string>& xo,
                              const std::vector<std::string>& to,
                              const std::string& y1_label,
                              const std::string& y2_label, const Matrix& iso,
                              int d1, int d2, double weight,
                              double* attach_residual) {
  const int dxt = dims_product(L, xo) * dims_product(L, to);
  const Matrix embed = kron2(Matrix::Identity(dxt, dxt), iso);
  Matrix sig = (embed * permuted.entries() * embed.adjoint()) / weight;
  sig = ((sig + sig.adjoint()) / 2.0).eval();

  SystemLayout bl = block_layout(L, xo, to, y1_label, d1, y2_label, d2);
  Operator sigma(bl, std::move(sig));

  Operator f1 = partial_trace(sigma, concat(xo, {y1_label}));
  Operator f2 = partial_trace(sigma, concat(to, {y2_label}));
  f1.entries() = ((f1.entries() + f1.entries().adjoint()) / 2.0).eval();
  f2.entries() = ((f2.entries() + f2.entries().adjoint()) / 2.0).eval();
  f1.entries() /= f1.entries().trace().real();
  f2.entries() /= f2.entries().trace().real();

  if (attach_residual) {
    Operator prod = kron({f1, f2});  // [x..., y1, tail..., y2]
    Operator prod_perm = permute_systems(prod, bl.labels());
    *attach_residual = frob_dist(prod_perm, sigma);
  }

  DecompositionBlock block{
      iso, d1, d2, weight,
      DensityOperator::trusted(std::move(f1)),
      DensityOperator::trusted(std::move(f2))};
  return block;
}

}  // namespace

BlockDecomposition assemble_decomposition(
    const DensityOperator& rho, const std::vector<std::string>& x_labels,
    const std::vector<std::string>& y_labels,
    const std::vector<std::string>& tail_labels,
    const std::vector<BlockSkeleton>& skeletons, const Matrix& support,
    const Tolerances& tols) {
  const SystemLayout& L = rho.layout();
  auto xo = in_layout_order(L, x_labels);
  auto to = in_layout_order(L, tail_labels);
  auto yo = in_layout_order(L, y_labels);
  if (xo.size() + to.size() + yo.size() != static_cast<size_t>(L.count()))
    throw LayoutError("decomposition groups must cover every subsystem");

  BlockDecomposition dec;
  dec.layout = L;
  dec.x_labels = xo;
  dec.y_labels = yo;
  dec.tail_labels = to;
  dec.y1_label = fresh_label(L, "y1");
  dec.y2_label = fresh_label(L, "y2");
  dec.support = support;

  const Operator permuted = permute_systems(rho.op(), concat(concat(xo, to), yo));
  for (const auto& sk : skeletons) {
    if (sk.weight < tols.weight_floor)
      throw StructureError("block weight " + num_str(sk.weight) +
                           " below the weight floor");
    dec.blocks.push_back(make_block(permuted, L, xo, to, dec.y1_label,
                                    dec.y2_label, sk.isometry, sk.d1, sk.d2,
                                    sk.weight, nullptr));
  }

  const DensityOperator rebuilt = build_state(dec, tols);
  const double resid = frob_dist(rebuilt.op(), rho.op());
  if (resid > tols.recon_tol)
    throw StructureError("reconstruction residual " + num_str(resid) +
                         " exceeds " + num_str(tols.recon_tol));
  return dec;
}

BlockDecomposition block_decompose(const DensityOperator& rho,
                                   const std::vector<std::string>& x_labels,
                                   const Tolerances& tols, std::uint64_t rng_seed) {
  const SystemLayout& L = rho.layout();
  auto xo = in_layout_order(L, x_labels);
  auto yo = L.labels_at(L.complement(xo));
  if (xo.empty()) throw LayoutError("block_decompose: empty X side");
  if (yo.empty()) throw LayoutError("block_decompose: empty Y side");

  auto gens = conditional_generators(rho, xo, tols.eig_cutoff);
  const int dy = dims_product(L, yo);
  WedderburnStructure ws = wedderburn(gens, dy, tols, rng_seed);
  if (ws.blocks.empty()) throw StructureError("no blocks found");

  const Operator rho_y = partial_trace(rho.op(), yo);
  std::vector<BlockSkeleton> skeletons;
  skeletons.reserve(ws.blocks.size());
  for (const auto& wb : ws.blocks) {
    const double p = (wb.projector * rho_y.entries()).trace().real();
    skeletons.push_back({wb.isometry, wb.d1, wb.d2, p});
  }
  return assemble_decomposition(rho, xo, yo, {}, skeletons, ws.unit, tols);
}

DensityOperator build_state(const BlockDecomposition& dec, const Tolerances& tols) {
  const SystemLayout& L = dec.layout;
  const auto& xo = dec.x_labels;
  const auto& to = dec.tail_labels;
  const auto& yo = dec.y_labels;

  double wsum = 0.0;
  for (const auto& b : dec.blocks) {
    if (b.weight <= tols.weight_floor)
      throw StructureError("block weight " + num_str(b.weight) +
                           " is numerically empty");
    wsum += b.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-8)
    throw StructureError("block weights sum to " + num_str(wsum));

  const int dxt = dims_product(L, xo) * dims_product(L, to);
  const int dy = dims_product(L, yo);

  Matrix total = Matrix::Zero(dxt * dy, dxt * dy);
  for (const auto& b : dec.blocks) {
    if (b.isometry.rows() != b.d1 * b.d2 || b.isometry.cols() != dy)
      throw StructureError("block isometry has inconsistent dimensions");
    if (b.factor_xy1.dim() * b.factor_y2.dim() != dxt * b.d1 * b.d2)
      throw StructureError("block factors have inconsistent dimensions");
    Operator prod = kron({b.factor_xy1.op(), b.factor_y2.op()});
    Operator prod_perm = permute_systems(
        prod, concat(concat(concat(xo, to), {dec.y1_label}), {dec.y2_label}));
    const Matrix embed = kron2(Matrix::Identity(dxt, dxt), b.isometry.adjoint());
    total += b.weight * (embed * prod_perm.entries() * embed.adjoint());
  }
  total = ((total + total.adjoint()) / 2.0).eval();

  // The fused Y index expands into the y systems directly.
  std::vector<SubSystem> systems;
  for (const auto& l : concat(concat(xo, to), yo))
    systems.push_back(L.system(L.position(l)));
  Operator assembled(SystemLayout(std::move(systems)), std::move(total));
  Operator in_order = permute_systems(assembled, L.labels());
  return DensityOperator::validated(std::move(in_order), Tolerances{});
}

BlockDecomposition markov_decompose(const DensityOperator& rho,
                                    const MarkovChainSpec& chain,
                                    const Tolerances& tols, std::uint64_t rng_seed) {
  const SystemLayout& L = rho.layout();
  chain.validate(L);
  if (chain.head.size() + chain.pivot.size() + chain.tail.size() !=
      static_cast<size_t>(L.count()))
    throw LayoutError("markov_decompose: chain must cover every subsystem");

  const MarkovVerdict verdict = assert_markov(rho, chain, tols.cmi_tol, tols.eig_cutoff);
  if (!verdict.holds)
    throw NotMarkovError("I(head;tail|pivot) = " + num_str(verdict.cmi_value) +
                         " exceeds " + num_str(verdict.tolerance));

  auto xo = in_layout_order(L, chain.head);
  auto to = in_layout_order(L, chain.tail);
  auto yo = in_layout_order(L, chain.pivot);

  // Decompose the pivot from the (head, pivot) marginal, then attach the
  // tail to the y2 factors.
  const Operator rho_xy = partial_trace(rho.op(), concat(xo, yo));
  BlockDecomposition pivot_dec =
      block_decompose(DensityOperator::trusted(rho_xy), xo, tols, rng_seed);

  std::vector<BlockSkeleton> skeletons;
  skeletons.reserve(pivot_dec.blocks.size());
  for (const auto& b : pivot_dec.blocks)
    skeletons.push_back({b.isometry, b.d1, b.d2, b.weight});
  try {
    return assemble_decomposition(rho, xo, yo, to, skeletons, pivot_dec.support,
                                  tols);
  } catch (const StructureError& e) {
    throw StructureError(std::string("tail does not factor onto the y2 side: ") +
                         e.what());
  }
}

bool local_unitary_equivalent(const Matrix& sigma, const Matrix& tau, int x_dim,
                              Matrix* u_out, const Tolerances& tols) {
  if (sigma.rows() != tau.rows()) return false;
  const int total = static_cast<int>(sigma.rows());
  if (total % x_dim != 0) throw LayoutError("x_dim does not divide factor dimension");
  const int dy = total / x_dim;

  if (dy == 1) {
    if (frob_dist(sigma, tau) <= tols.match_tol) {
      if (u_out) *u_out = Matrix::Identity(1, 1);
      return true;
    }
    return false;
  }

  // Cheap filters: matching spectra of the factors and of their X marginals.
  auto sorted_eigs = [](const Matrix& m) {
    return hermitian_eig(m, 1e-8).eigenvalues;
  };
  const RealVector es = sorted_eigs(sigma);
  const RealVector et = sorted_eigs(tau);
  if ((es - et).cwiseAbs().maxCoeff() > 1e-7) return false;

  auto x_marginal = [&](const Matrix& m) {
    Matrix out = Matrix::Zero(x_dim, x_dim);
    for (int a = 0; a < x_dim; ++a)
      for (int b = 0; b < x_dim; ++b)
        for (int y = 0; y < dy; ++y) out(a, b) += m(a * dy + y, b * dy + y);
    return out;
  };
  const RealVector ems = sorted_eigs(x_marginal(sigma));
  const RealVector emt = sorted_eigs(tau.rows() ? x_marginal(tau) : tau);
  if ((ems - emt).cwiseAbs().maxCoeff() > 1e-7) return false;

  // Constraints on U: (I (x) U) must map matched eigenspaces of sigma onto
  // those of tau, and U must intertwine the Y marginals.
  const Spectrum ss = hermitian_eig(sigma, 1e-8);
  const Spectrum st = hermitian_eig(tau, 1e-8);

  std::vector<std::pair<Matrix, Matrix>> pairs_xy;  // on X (x) Y1
  int start = 0;
  for (int i = 1; i <= total; ++i) {
    if (i == total || std::abs(ss.eigenvalues(i) - ss.eigenvalues(i - 1)) > 1e-8) {
      Matrix ps = Matrix::Zero(total, total);
      Matrix pt = Matrix::Zero(total, total);
      for (int t = start; t < i; ++t) {
        ps += ss.eigenvectors.col(t) * ss.eigenvectors.col(t).adjoint();
        pt += st.eigenvectors.col(t) * st.eigenvectors.col(t).adjoint();
      }
      pairs_xy.emplace_back(std::move(ps), std::move(pt));
      start = i;
    }
  }
  pairs_xy.emplace_back(sigma, tau);

  auto y_marginal = [&](const Matrix& m) {
    Matrix out = Matrix::Zero(dy, dy);
    for (int y1 = 0; y1 < dy; ++y1)
      for (int y2 = 0; y2 < dy; ++y2)
        for (int a = 0; a < x_dim; ++a) out(y1, y2) += m(a * dy + y1, a * dy + y2);
    return out;
  };

  // Gram matrix of the stacked linear constraints on vec(U), column-major.
  Matrix gram = Matrix::Zero(dy * dy, dy * dy);
  {
    const Matrix id = Matrix::Identity(dy, dy);
    const Matrix s = y_marginal(sigma);
    const Matrix t = y_marginal(tau);
    const Matrix k = kron2(s.transpose(), id) - kron2(id, t);
    gram += k.adjoint() * k;
  }
  for (const auto& [s, t] : pairs_xy) {
    Matrix k = Matrix::Zero(total * total, dy * dy);
    for (int a = 0; a < x_dim; ++a)
      for (int y = 0; y < dy; ++y)
        for (int b = 0; b < x_dim; ++b)
          for (int z = 0; z < dy; ++z) {
            const int row = (a * dy + y) * total + (b * dy + z);
            for (int w = 0; w < dy; ++w) {
              // + U[y,w] * S[(a,w),(b,z)]
              k(row, w * dy + y) += s(a * dy + w, b * dy + z);
              // - T[(a,y),(b,w)] * U[w,z]
              k(row, z * dy + w) -= t(a * dy + y, b * dy + w);
            }
          }
    gram += k.adjoint() * k;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success)
    throw NumericError("intertwiner eigensolver failed");
  const double lmax = std::max(1.0, solver.eigenvalues().maxCoeff());

  for (Eigen::Index idx = 0; idx < solver.eigenvalues().size(); ++idx) {
    if (solver.eigenvalues()(idx) > 1e-10 * lmax) continue;
    Matrix cand(dy, dy);
    for (int col = 0; col < dy; ++col)
      for (int row = 0; row < dy; ++row)
        cand(row, col) = solver.eigenvectors()(col * dy + row, idx);
    const Matrix u = polar_unitary(cand);
    const Matrix iu = kron2(Matrix::Identity(x_dim, x_dim), u);
    if ((iu * sigma * iu.adjoint() - tau).norm() <= tols.match_tol) {
      if (u_out) *u_out = u;
      return true;
    }
  }
  return false;
}

MinimalityVerdict is_minimal(const BlockDecomposition& dec, const Tolerances& tols,
                             std::uint64_t rng_seed) {
  (void)rng_seed;
  MinimalityVerdict v;

  // (i) every first factor must generate the full matrix algebra on its Y1
  // support.
  for (int k = 0; k < dec.block_count(); ++k) {
    const auto& b = dec.blocks[k];
    auto gens = conditional_generators(b.factor_xy1, dec.x_labels, tols.eig_cutoff);
    const Operator y1_marg = partial_trace(b.factor_xy1.op(), {dec.y1_label});
    const int s = psd_rank(y1_marg.entries(), tols.eig_cutoff);
    AlgebraBasis alg = span_closure(gens, b.d1, tols.span_residual);
    if (alg.dim() != s * s) {
      v.minimal = false;
      v.violation = MinimalityVerdict::Violation::reducible_factor;
      v.block_a = k;
      v.detail = "factor " + std::to_string(k) + " generates a dimension-" +
                 std::to_string(alg.dim()) + " algebra on a rank-" +
                 std::to_string(s) + " support";
      return v;
    }
  }

  // (ii) no two first factors related by a unitary on Y1 alone.
  const SystemLayout& L = dec.layout;
  const int dx = dims_product(L, dec.x_labels);
  for (int k = 0; k < dec.block_count(); ++k)
    for (int k2 = k + 1; k2 < dec.block_count(); ++k2) {
      if (dec.blocks[k].d1 != dec.blocks[k2].d1) continue;
      if (local_unitary_equivalent(dec.blocks[k].factor_xy1.entries(),
                                   dec.blocks[k2].factor_xy1.entries(), dx,
                                   nullptr, tols)) {
        v.minimal = false;
        v.violation = MinimalityVerdict::Violation::equivalent_pair;
        v.block_a = k;
        v.block_b = k2;
        v.detail = "factors " + std::to_string(k) + " and " + std::to_string(k2) +
                   " are related by a unitary on the Y1 factor";
        return v;
      }
    }
  return v;
}

DecompositionMatch match_decompositions(const BlockDecomposition& dec1,
                                        const BlockDecomposition& dec2,
                                        const Tolerances& tols) {
  if (!(dec1.layout == dec2.layout) || dec1.x_labels != dec2.x_labels ||
      dec1.y_labels != dec2.y_labels || dec1.tail_labels != dec2.tail_labels)
    throw MatchError("decompositions do not describe the same split");
  if (dec1.block_count() != dec2.block_count())
    throw MatchError("block counts differ: " + std::to_string(dec1.block_count()) +
                     " vs " + std::to_string(dec2.block_count()));

  const int n = dec1.block_count();
  std::vector<Matrix> p1(n), p2(n);
  for (int k = 0; k < n; ++k) {
    p1[k] = dec1.blocks[k].projector();
    p2[k] = dec2.blocks[k].projector();
  }

  DecompositionMatch match;
  match.bijection.assign(n, -1);
  std::vector<bool> used(n, false);
  for (int k = 0; k < n; ++k) {
    const double rank_k = p1[k].trace().real();
    int hit = -1;
    for (int k2 = 0; k2 < n; ++k2) {
      const double overlap = (p1[k] * p2[k2]).trace().real();
      if (overlap >= rank_k - 0.1) {
        if (hit >= 0) throw MatchError("block overlap pattern is not bijective");
        hit = k2;
      }
    }
    if (hit < 0 || used[hit])
      throw MatchError("block " + std::to_string(k) +
                       " has no full-overlap partner");
    const double rank_hit = p2[hit].trace().real();
    if (std::abs(rank_hit - rank_k) > 0.1)
      throw MatchError("matched blocks have different ranks");
    used[hit] = true;
    match.bijection[k] = hit;
  }

  const SystemLayout& L = dec1.layout;
  const int dxt =
      dims_product(L, dec1.x_labels) * dims_product(L, dec1.tail_labels);

  auto assembled = [&](const BlockDecomposition& dec, int k) {
    const auto& b = dec.blocks[k];
    Operator prod = kron({b.factor_xy1.op(), b.factor_y2.op()});
    Operator perm = permute_systems(
        prod, concat(concat(concat(dec.x_labels, dec.tail_labels), {dec.y1_label}),
                     {dec.y2_label}));
    return (b.weight * perm.entries()).eval();
  };

  for (int k = 0; k < n; ++k) {
    const int k2 = match.bijection[k];
    const auto& b1 = dec1.blocks[k];
    const auto& b2 = dec2.blocks[k2];
    if (b1.d1 != b2.d1 || b1.d2 != b2.d2)
      throw MatchError("matched blocks have different factor dimensions (" +
                       std::to_string(b1.d1) + "," + std::to_string(b1.d2) +
                       ") vs (" + std::to_string(b2.d1) + "," +
                       std::to_string(b2.d2) + ")");
    const Matrix u = b2.isometry * b1.isometry.adjoint();
    const Matrix lift = kron2(Matrix::Identity(dxt, dxt), u);
    const double resid =
        (lift * assembled(dec1, k) * lift.adjoint() - assembled(dec2, k2)).norm();
    match.max_residual = std::max(match.max_residual, resid);
    match.block_unitaries.push_back(u);
  }
  if (match.max_residual > tols.match_tol)
    throw MatchError("matched blocks do not transport: residual " +
                     num_str(match.max_residual));
  return match;
}

}  // namespace qmarkov
