#include "qmarkov/instance_gen.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"
#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"

namespace qmarkov {

Matrix random_unitary(int dim, Rng& rng) {
  Matrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

DensityOperator random_density(int dim, int rank, Rng& rng) {
  if (rank < 1 || rank > dim)
    throw GenError("random_density: rank " + std::to_string(rank) +
                   " out of range for dim " + std::to_string(dim));
  const Matrix g = gaussian_matrix(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityOperator::validated(
      Operator(SystemLayout({{"q", dim}}), std::move(rho)));
}

DensityOperator random_density(int dim, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

namespace {

void check_weights(const std::vector<GenBlock>& blocks) {
  if (blocks.empty()) throw GenError("spec has no blocks");
  double sum = 0.0;
  for (const auto& b : blocks) {
    if (b.weight <= 0.0) throw GenError("block weights must be positive");
    if (b.d1 < 1 || b.d2 < 1) throw GenError("block dims must be >= 1");
    sum += b.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw GenError("block weights sum to " + num_str(sum));
}

// 0/1 isometry picking `size` consecutive coordinates starting at `offset`.
Matrix slot_isometry(int size, int offset, int ambient) {
  Matrix iso = Matrix::Zero(size, ambient);
  for (int i = 0; i < size; ++i) iso(i, offset + i) = 1.0;
  return iso;
}

DensityOperator relabel(const Matrix& entries, SystemLayout layout) {
  return DensityOperator::trusted(Operator(std::move(layout), entries));
}

bool factor_irreducible(const DensityOperator& factor,
                        const std::vector<std::string>& x_labels,
                        const std::string& y1_label, int d1,
                        const Tolerances& tols) {
  if (d1 == 1) return true;
  auto gens = conditional_generators(factor, x_labels, tols.eig_cutoff);
  const Operator y1_marg = partial_trace(factor.op(), {y1_label});
  const int s = psd_rank(y1_marg.entries(), tols.eig_cutoff);
  AlgebraBasis alg = span_closure(gens, d1, tols.span_residual);
  return alg.dim() == s * s;
}

}  // namespace

MarkovInstance gen_markov_state(const GenSpec& spec) {
  check_weights(spec.blocks);
  const Tolerances tols{};
  const int da = spec.dim_a;
  const int dc = spec.dim_c;
  int db = 0;
  for (const auto& b : spec.blocks) db += b.d1 * b.d2;

  SystemLayout layout({{"A", da}, {"B", db}, {"C", dc}});
  const std::string y1l = fresh_label(layout, "y1");
  const std::string y2l = fresh_label(layout, "y2");

  Rng rng(spec.seed);

  // Sample first factors with minimality enforced by rejection.
  std::vector<DensityOperator> f1s;
  for (size_t k = 0; k < spec.blocks.size(); ++k) {
    const int d1 = spec.blocks[k].d1;
    SystemLayout fl({{"A", da}, {y1l, d1}});
    bool placed = false;
    for (int attempt = 0; attempt < tols.gen_budget; ++attempt) {
      DensityOperator cand =
          relabel(random_density(da * d1, da * d1, rng).entries(), fl);
      if (!factor_irreducible(cand, {"A"}, y1l, d1, tols)) continue;
      bool clash = false;
      for (size_t k2 = 0; k2 < f1s.size(); ++k2)
        if (spec.blocks[k2].d1 == d1 &&
            local_unitary_equivalent(f1s[k2].entries(), cand.entries(), da,
                                     nullptr, tols)) {
          clash = true;
          break;
        }
      if (clash) continue;
      f1s.push_back(std::move(cand));
      placed = true;
      break;
    }
    if (!placed)
      throw GenError("could not sample a minimal first factor for block " +
                     std::to_string(k));
  }

  const Matrix hide = random_unitary(db, rng);

  BlockDecomposition truth;
  truth.layout = layout;
  truth.x_labels = {"A"};
  truth.y_labels = {"B"};
  truth.tail_labels = {"C"};
  truth.y1_label = y1l;
  truth.y2_label = y2l;

  int offset = 0;
  Matrix support0 = Matrix::Zero(db, db);
  for (size_t k = 0; k < spec.blocks.size(); ++k) {
    const auto& gb = spec.blocks[k];
    const int size = gb.d1 * gb.d2;
    SystemLayout f2_layout({{"C", dc}, {y2l, gb.d2}});
    DensityOperator f2 =
        relabel(random_density(dc * gb.d2, dc * gb.d2, rng).entries(), f2_layout);
    Matrix iso = slot_isometry(size, offset, db) * hide.adjoint();
    support0 += slot_isometry(size, offset, db).adjoint() *
                slot_isometry(size, offset, db);
    truth.blocks.push_back(
        {std::move(iso), gb.d1, gb.d2, gb.weight, f1s[k], std::move(f2)});
    offset += size;
  }
  truth.support = hide * support0 * hide.adjoint();

  MarkovInstance out{build_state(truth), std::move(truth)};
  return out;
}

DoubleMarkovInstance gen_double_markov_state(const GenSpec& spec) {
  check_weights(spec.blocks);
  const Tolerances tols{};
  const int da = spec.dim_a;
  const int m = static_cast<int>(spec.blocks.size());
  int db = 0, dc = 0;
  for (const auto& b : spec.blocks) {
    db += b.d1;  // B-side block dimension
    dc += b.d2;  // C-side block dimension
  }

  Rng rng(spec.seed);

  // Conditional states of A, pairwise separated in trace distance.
  std::vector<DensityOperator> rho_a;
  for (int j = 0; j < m; ++j) {
    bool placed = false;
    for (int attempt = 0; attempt < tols.gen_budget; ++attempt) {
      DensityOperator cand = random_density(da, da, rng);
      bool close = false;
      for (const auto& prev : rho_a)
        if (trace_distance(prev, cand) < spec.min_distinguishability) {
          close = true;
          break;
        }
      if (close) continue;
      rho_a.push_back(std::move(cand));
      placed = true;
      break;
    }
    if (!placed)
      throw GenError("could not separate the conditional states of A by delta");
  }

  SystemLayout layout({{"A", da}, {"B", db}, {"C", dc}});
  Matrix rho0 = Matrix::Zero(da * db * dc, da * db * dc);
  std::vector<Matrix> proj_b0, proj_c0;
  std::vector<DensityOperator> sigma_bc;
  int boff = 0, coff = 0;
  for (int j = 0; j < m; ++j) {
    const int dbj = spec.blocks[j].d1;
    const int dcj = spec.blocks[j].d2;
    DensityOperator sigma = random_density(dbj * dcj, dbj * dcj, rng);

    Matrix scatter = Matrix::Zero(db * dc, dbj * dcj);
    for (int beta = 0; beta < dbj; ++beta)
      for (int gamma = 0; gamma < dcj; ++gamma)
        scatter((boff + beta) * dc + (coff + gamma), beta * dcj + gamma) = 1.0;
    rho0 += spec.blocks[j].weight *
            kron2(rho_a[j].entries(), scatter * sigma.entries() * scatter.adjoint());

    Matrix pb = Matrix::Zero(db, db);
    for (int beta = 0; beta < dbj; ++beta) pb(boff + beta, boff + beta) = 1.0;
    Matrix pc = Matrix::Zero(dc, dc);
    for (int gamma = 0; gamma < dcj; ++gamma) pc(coff + gamma, coff + gamma) = 1.0;
    proj_b0.push_back(std::move(pb));
    proj_c0.push_back(std::move(pc));
    sigma_bc.push_back(std::move(sigma));
    boff += dbj;
    coff += dcj;
  }

  const Matrix ub = random_unitary(db, rng);
  const Matrix uc = random_unitary(dc, rng);
  const Matrix w = kron2(Matrix::Identity(da, da), kron2(ub, uc));
  Matrix hidden = w * rho0 * w.adjoint();
  hidden = ((hidden + hidden.adjoint()) / 2.0).eval();

  DoubleMarkovInstance out{
      DensityOperator::validated(Operator(layout, std::move(hidden))), {}};

  CommonLabel& truth = out.truth;
  truth.fine.joint = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    truth.labels.push_back(j);
    truth.pvm_b.push_back(ub * proj_b0[j] * ub.adjoint());
    truth.pvm_c.push_back(uc * proj_c0[j] * uc.adjoint());
    truth.p_j.push_back(spec.blocks[j].weight);
    truth.rho_a_given_j.push_back(rho_a[j]);
    truth.g1.push_back(j);
    truth.g2.push_back(j);
    truth.fine.joint(j, j) = spec.blocks[j].weight;
    truth.fine.proj_b.push_back(truth.pvm_b.back());
    truth.fine.proj_c.push_back(truth.pvm_c.back());
    truth.fine.cond_a.emplace(std::make_pair(j, j), rho_a[j]);
  }
  return out;
}

ConditionalInstance gen_thm2_state(const GenSpec& spec, int dim_bc_b,
                                   int dim_bc_c) {
  check_weights(spec.blocks);
  if (!spec.full_support)
    throw GenError("conditional instances require full_support");
  const Tolerances tols{};
  const int da = spec.dim_a;
  const int db = dim_bc_b;
  const int dc = dim_bc_c;
  int dd = 0;
  for (const auto& b : spec.blocks) dd += b.d1 * b.d2;

  SystemLayout layout({{"A", da}, {"B", db}, {"C", dc}, {"D", dd}});
  const std::string y1l = fresh_label(layout, "y1");
  const std::string y2l = fresh_label(layout, "y2");
  const double floor = 1e-8;

  Rng rng(spec.seed);
  for (int round = 0; round < tols.gen_budget; ++round) {
    std::vector<DensityOperator> f1s;
    bool ok = true;
    for (size_t k = 0; k < spec.blocks.size() && ok; ++k) {
      const int d1 = spec.blocks[k].d1;
      SystemLayout fl({{"A", da}, {y1l, d1}});
      bool placed = false;
      for (int attempt = 0; attempt < tols.gen_budget; ++attempt) {
        DensityOperator cand =
            relabel(random_density(da * d1, da * d1, rng).entries(), fl);
        if (!factor_irreducible(cand, {"A"}, y1l, d1, tols)) continue;
        bool clash = false;
        for (size_t k2 = 0; k2 < f1s.size(); ++k2)
          if (spec.blocks[k2].d1 == d1 &&
              local_unitary_equivalent(f1s[k2].entries(), cand.entries(), da,
                                       nullptr, tols)) {
            clash = true;
            break;
          }
        if (clash) continue;
        f1s.push_back(std::move(cand));
        placed = true;
        break;
      }
      ok = placed;
    }
    if (!ok) continue;

    const Matrix hide = random_unitary(dd, rng);
    BlockDecomposition truth;
    truth.layout = layout;
    truth.x_labels = {"A"};
    truth.y_labels = {"D"};
    truth.tail_labels = {"B", "C"};
    truth.y1_label = y1l;
    truth.y2_label = y2l;

    int offset = 0;
    Matrix support0 = Matrix::Zero(dd, dd);
    for (size_t k = 0; k < spec.blocks.size(); ++k) {
      const auto& gb = spec.blocks[k];
      const int size = gb.d1 * gb.d2;
      SystemLayout f2_layout({{"B", db}, {"C", dc}, {y2l, gb.d2}});
      DensityOperator f2 = relabel(
          random_density(db * dc * gb.d2, db * dc * gb.d2, rng).entries(),
          f2_layout);
      Matrix iso = slot_isometry(size, offset, dd) * hide.adjoint();
      support0 +=
          slot_isometry(size, offset, dd).adjoint() * slot_isometry(size, offset, dd);
      truth.blocks.push_back(
          {std::move(iso), gb.d1, gb.d2, gb.weight, f1s[k], std::move(f2)});
      offset += size;
    }
    truth.support = hide * support0 * hide.adjoint();

    DensityOperator state = build_state(truth);
    const double min_eig =
        hermitian_eig(state.entries(), 1e-9).eigenvalues.minCoeff();
    if (min_eig < floor) continue;
    return {std::move(state), std::move(truth)};
  }
  throw GenError("positivity floor unattainable for the requested blocks");
}

DensityOperator gen_negative(NegativeKind kind, std::uint64_t seed) {
  switch (kind) {
    case NegativeKind::one_way_tripartite: {
      // A = B uniform copy, C a constant one-dimensional system.
      SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 1}});
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = 0.5;  // |00>
      m(3, 3) = 0.5;  // |11>
      return DensityOperator::validated(Operator(layout, std::move(m)));
    }
    case NegativeKind::entangled_not_markov: {
      SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
      v(0) = 1.0 / std::sqrt(2.0);
      v(7) = 1.0 / std::sqrt(2.0);
      Matrix m = v * v.adjoint();
      return DensityOperator::validated(Operator(layout, std::move(m)));
    }
    case NegativeKind::thm2_rank_deficient: {
      // Conditional block structure with one rank-deficient second factor.
      const int da = 2, db = 2, dc = 2;
      const std::vector<GenBlock> blocks = {{1, 2, 0.5}, {1, 2, 0.5}};
      int dd = 0;
      for (const auto& b : blocks) dd += b.d1 * b.d2;
      SystemLayout layout({{"A", da}, {"B", db}, {"C", dc}, {"D", dd}});
      const std::string y1l = fresh_label(layout, "y1");
      const std::string y2l = fresh_label(layout, "y2");
      Rng rng(seed);

      BlockDecomposition dec;
      dec.layout = layout;
      dec.x_labels = {"A"};
      dec.y_labels = {"D"};
      dec.tail_labels = {"B", "C"};
      dec.y1_label = y1l;
      dec.y2_label = y2l;
      const Matrix hide = random_unitary(dd, rng);
      int offset = 0;
      Matrix support0 = Matrix::Zero(dd, dd);
      for (size_t k = 0; k < blocks.size(); ++k) {
        const auto& gb = blocks[k];
        const int size = gb.d1 * gb.d2;
        SystemLayout f1_layout({{"A", da}, {y1l, gb.d1}});
        SystemLayout f2_layout({{"B", db}, {"C", dc}, {y2l, gb.d2}});
        const int f2_dim = db * dc * gb.d2;
        // Block 0 carries the rank deficiency.
        const int f2_rank = (k == 0) ? f2_dim - 1 : f2_dim;
        DensityOperator f1 =
            relabel(random_density(da * gb.d1, da * gb.d1, rng).entries(), f1_layout);
        DensityOperator f2 =
            relabel(random_density(f2_dim, f2_rank, rng).entries(), f2_layout);
        Matrix iso = slot_isometry(size, offset, dd) * hide.adjoint();
        support0 += slot_isometry(size, offset, dd).adjoint() *
                    slot_isometry(size, offset, dd);
        dec.blocks.push_back(
            {std::move(iso), gb.d1, gb.d2, gb.weight, std::move(f1), std::move(f2)});
        offset += size;
      }
      dec.support = hide * support0 * hide.adjoint();
      return build_state(dec);
    }
  }
  throw GenError("unknown negative kind");
}

}  // namespace qmarkov
