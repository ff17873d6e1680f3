#include "qmarkov/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qmarkov/errors.hpp"
#include "qmarkov/format.hpp"
#include "qmarkov/random.hpp"
#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"

namespace qmarkov {

namespace {

// Orthonormalize `x` against `basis` (twice, for stability) and append it
// when the residual direction is genuinely new.
bool gram_schmidt_push(std::vector<Matrix>& basis, Matrix x, double residual_tol) {
  const double n0 = x.norm();
  if (n0 < 1e-14) return false;
  x /= n0;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) x -= hs_inner(b, x) * b;
  const double r = x.norm();
  if (r <= residual_tol) return false;
  basis.push_back(x / r);
  return true;
}

Matrix joint_support(const std::vector<Matrix>& generators, int ambient_dim) {
  Matrix s = Matrix::Zero(ambient_dim, ambient_dim);
  bool any = false;
  for (const auto& g : generators) {
    const double n = g.norm();
    if (n < 1e-14) continue;
    const Matrix gn = g / n;
    s += gn * gn.adjoint() + gn.adjoint() * gn;
    any = true;
  }
  if (!any) return Matrix::Zero(ambient_dim, ambient_dim);
  const double lmax = hermitian_eig(s, 1e-9).eigenvalues(0);
  return support_projector(s, 1e-12 * std::max(1.0, lmax));
}

// Nullspace of the stacked linear maps c -> sum_i c_i columns[i], found from
// the Gram matrix of the columns. Returns orthonormal coefficient vectors.
std::vector<Eigen::VectorXcd> gram_nullspace(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success)
    throw NumericError("nullspace eigensolver failed");
  const double lmax = std::max(1.0, solver.eigenvalues().maxCoeff());
  std::vector<Eigen::VectorXcd> null;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) <= 1e-12 * lmax)
      null.push_back(solver.eigenvectors().col(i));
  return null;
}

// Coefficient vectors of the center of the algebra, in the basis_ops frame.
std::vector<Eigen::VectorXcd> center_coefficients(const AlgebraBasis& alg) {
  const int n = alg.dim();
  Matrix gram = Matrix::Zero(n, n);
  std::vector<std::vector<Matrix>> comms(n);
  for (int i = 0; i < n; ++i) {
    comms[i].reserve(n);
    for (int j = 0; j < n; ++j)
      comms[i].push_back(alg.basis_ops[i] * alg.basis_ops[j] -
                         alg.basis_ops[j] * alg.basis_ops[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j < n; ++j) acc += hs_inner(comms[i][j], comms[k][j]);
      gram(i, k) = acc;
      if (k != i) gram(k, i) = std::conj(acc);
    }
  return gram_nullspace(gram);
}

Matrix from_coefficients(const AlgebraBasis& alg, const Eigen::VectorXcd& c) {
  Matrix m = Matrix::Zero(alg.ambient_dim, alg.ambient_dim);
  for (int i = 0; i < alg.dim(); ++i) m += c(i) * alg.basis_ops[i];
  return m;
}

// Cluster sorted eigenvalues by consecutive gaps larger than gap_tol.
std::vector<std::pair<int, int>> eig_clusters(const RealVector& sorted,
                                              double gap_tol) {
  std::vector<std::pair<int, int>> clusters;
  int start = 0;
  for (int i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || std::abs(sorted(i) - sorted(i - 1)) > gap_tol) {
      clusters.emplace_back(start, i - start);
      start = i;
    }
  }
  return clusters;
}

}  // namespace

int AlgebraBasis::unit_rank() const {
  if (unit.size() == 0) return 0;
  return static_cast<int>(std::lround(unit.trace().real()));
}

AlgebraBasis span_closure(const std::vector<Matrix>& generators, int ambient_dim,
                          double residual_tol) {
  for (const auto& g : generators)
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw LayoutError("generator dimension does not match ambient_dim");

  AlgebraBasis alg;
  alg.ambient_dim = ambient_dim;
  alg.unit = joint_support(generators, ambient_dim);
  if (alg.unit.norm() < 1e-14) return alg;  // zero algebra

  // Seed with the unit, the generators, and their adjoints; the seed set is
  // self-adjoint, so the multiplicative closure span is a *-algebra.
  gram_schmidt_push(alg.basis_ops, alg.unit, residual_tol);
  for (const auto& g : generators) {
    gram_schmidt_push(alg.basis_ops, g, residual_tol);
    gram_schmidt_push(alg.basis_ops, g.adjoint(), residual_tol);
  }

  const size_t cap = static_cast<size_t>(ambient_dim) * ambient_dim;
  for (size_t i = 0; i < alg.basis_ops.size() && alg.basis_ops.size() < cap; ++i) {
    for (size_t j = 0; j <= i && alg.basis_ops.size() < cap; ++j) {
      gram_schmidt_push(alg.basis_ops, alg.basis_ops[i] * alg.basis_ops[j],
                        residual_tol);
      if (j != i)
        gram_schmidt_push(alg.basis_ops, alg.basis_ops[j] * alg.basis_ops[i],
                          residual_tol);
    }
  }
  return alg;
}

std::vector<Matrix> central_projections(const AlgebraBasis& alg, double gap_tol,
                                        std::uint64_t rng_seed, int retry_budget) {
  if (alg.dim() == 0) return {};
  auto center = center_coefficients(alg);
  const int m = static_cast<int>(center.size());
  if (m < 1) throw StructureError("algebra has an empty center");
  if (m == 1) return {alg.unit};

  const Matrix v = range_basis(alg.unit);
  const int r = static_cast<int>(v.cols());

  Rng rng(rng_seed);
  std::string last_gaps;
  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    // Random Hermitian central element.
    Matrix z = Matrix::Zero(alg.ambient_dim, alg.ambient_dim);
    for (const auto& c : center) z += complex_gaussian(rng) * from_coefficients(alg, c);
    z = ((z + z.adjoint()) / 2.0).eval();

    const Matrix zr = v.adjoint() * z * v;
    Spectrum spec = hermitian_eig(zr, 1e-8);
    RealVector ascending = spec.eigenvalues.reverse();
    auto clusters = eig_clusters(ascending, gap_tol);
    if (static_cast<int>(clusters.size()) != m) {
      last_gaps = "found " + std::to_string(clusters.size()) + " clusters, center dimension " +
                  std::to_string(m);
      continue;
    }
    std::vector<Matrix> projectors;
    projectors.reserve(m);
    for (const auto& [start, len] : clusters) {
      Matrix q = Matrix::Zero(r, r);
      for (int t = start; t < start + len; ++t) {
        // spec columns are descending; ascending index t maps to r-1-t
        const auto col = spec.eigenvectors.col(r - 1 - t);
        q += col * col.adjoint();
      }
      projectors.push_back(v * q * v.adjoint());
    }
    // Deterministic order: descending cluster eigenvalue.
    std::reverse(projectors.begin(), projectors.end());
    return projectors;
  }
  throw DegeneracyError("central splitting failed after " +
                        std::to_string(retry_budget) + " retries (" + last_gaps + ")");
}

BlockFactorization factor_block(const AlgebraBasis& alg, const Matrix& projector,
                                std::uint64_t rng_seed, const Tolerances& tols) {
  const Matrix v = range_basis(projector);
  const int r = static_cast<int>(v.cols());
  if (r == 0) throw StructureError("factor_block: projector has empty range");

  // Compressed algebra basis and its linear dimension, which is d1^2 for a
  // minimal central block.
  std::vector<Matrix> compressed;
  compressed.reserve(alg.dim());
  Matrix gram = Matrix::Zero(alg.dim(), alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    compressed.push_back(v.adjoint() * alg.basis_ops[i] * v);
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = i; j < alg.dim(); ++j) {
      gram(i, j) = hs_inner(compressed[i], compressed[j]);
      if (j != i) gram(j, i) = std::conj(gram(i, j));
    }
  Eigen::SelfAdjointEigenSolver<Matrix> gsolve(gram);
  const double gmax = std::max(1.0, gsolve.eigenvalues().maxCoeff());
  int block_dim = 0;
  for (Eigen::Index i = 0; i < gsolve.eigenvalues().size(); ++i)
    if (gsolve.eigenvalues()(i) > 1e-12 * gmax) ++block_dim;

  const int d1 = static_cast<int>(std::lround(std::sqrt(double(block_dim))));
  if (d1 * d1 != block_dim)
    throw StructureError("compressed block dimension " + std::to_string(block_dim) +
                         " is not a square");
  if (r % d1 != 0)
    throw StructureError("block rank " + std::to_string(r) +
                         " not divisible by d1 = " + std::to_string(d1));
  const int d2 = r / d1;

  BlockFactorization out;
  out.d1 = d1;
  out.d2 = d2;

  Rng rng(rng_seed);
  std::string diag;
  for (int attempt = 0; attempt < tols.retry_budget; ++attempt) {
    Matrix wc(r, r);  // columns ordered (i, b) = i*d2 + b
    if (d1 == 1) {
      wc = Matrix::Identity(r, r);
    } else {
      // Random Hermitian algebra element, compressed. Its spectrum must show
      // d1 clusters of multiplicity d2.
      Matrix h = Matrix::Zero(r, r);
      for (const auto& b : compressed) {
        const Complex g = complex_gaussian(rng);
        h += g * b + std::conj(g) * b.adjoint();
      }
      h = ((h + h.adjoint()) / 2.0).eval();
      Spectrum spec = hermitian_eig(h, 1e-8);
      auto clusters = eig_clusters(spec.eigenvalues, tols.gap_tol);
      if (static_cast<int>(clusters.size()) != d1 ||
          std::any_of(clusters.begin(), clusters.end(),
                      [&](const auto& c) { return c.second != d2; })) {
        diag = "eigenvalue multiplicity pattern did not match (" +
               std::to_string(clusters.size()) + " clusters)";
        continue;
      }
      std::vector<Matrix> eigenspaces;
      for (const auto& [start, len] : clusters)
        eigenspaces.push_back(spec.eigenvectors.middleCols(start, len));

      // Second random element aligns the multiplicity bases across
      // eigenspaces; each connector must be a scalar times a unitary.
      Matrix g2 = Matrix::Zero(r, r);
      for (const auto& b : compressed) {
        const Complex g = complex_gaussian(rng);
        g2 += g * b + std::conj(g) * b.adjoint();
      }
      g2 = ((g2 + g2.adjoint()) / 2.0).eval();

      bool ok = true;
      wc.leftCols(d2) = eigenspaces[0];
      for (int i = 1; i < d1; ++i) {
        const Matrix t = eigenspaces[i].adjoint() * g2 * eigenspaces[0];
        Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin < 1e-6 * std::max(1.0, smax)) {
          diag = "connector between eigenspaces nearly singular";
          ok = false;
          break;
        }
        wc.middleCols(i * d2, d2) =
            eigenspaces[i] * (svd.matrixU() * svd.matrixV().adjoint());
      }
      if (!ok) continue;
    }

    Matrix iso = wc.adjoint() * v.adjoint();

    // Verify the tensor form on every basis element.
    double worst = 0.0;
    for (const auto& b : alg.basis_ops) {
      const Matrix y = iso * b * iso.adjoint();
      Matrix m = Matrix::Zero(d1, d1);
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j) {
          Complex acc(0.0, 0.0);
          for (int bb = 0; bb < d2; ++bb) acc += y(i * d2 + bb, j * d2 + bb);
          m(i, j) = acc / double(d2);
        }
      worst = std::max(worst, (y - kron2(m, Matrix::Identity(d2, d2))).norm());
    }
    if (worst <= tols.algebra_residual) {
      out.isometry = std::move(iso);
      return out;
    }
    diag = "tensor-form residual " + num_str(worst);
  }
  throw StructureError("factor_block failed: " + diag);
}

WedderburnStructure wedderburn(const std::vector<Matrix>& generators,
                               int ambient_dim, const Tolerances& tols,
                               std::uint64_t rng_seed) {
  AlgebraBasis alg = span_closure(generators, ambient_dim, tols.span_residual);

  WedderburnStructure ws;
  ws.ambient_dim = ambient_dim;
  ws.unit = alg.unit.size() == 0 ? Matrix::Zero(ambient_dim, ambient_dim)
                                 : alg.unit;
  if (alg.dim() == 0) return ws;

  Rng seeder(rng_seed);
  auto projectors =
      central_projections(alg, tols.gap_tol, seeder(), tols.retry_budget);
  for (const auto& p : projectors) {
    auto fac = factor_block(alg, p, seeder(), tols);
    ws.blocks.push_back({p, fac.isometry, fac.d1, fac.d2});
  }

  // Canonical ordering: d1 desc, d2 desc, then lexicographic on the rounded
  // spectrum of P * G1 * P with G1 the first generator.
  std::vector<std::vector<double>> keys(ws.blocks.size());
  if (!generators.empty()) {
    const Matrix g1h =
        ((generators[0] + generators[0].adjoint()) / 2.0).eval();
    for (size_t k = 0; k < ws.blocks.size(); ++k) {
      const Matrix pgp = ws.blocks[k].projector * g1h * ws.blocks[k].projector;
      RealVector ev = hermitian_eig(pgp, 1e-8).eigenvalues;
      keys[k].resize(ev.size());
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        keys[k][i] = std::round(ev(i) * 1e6) / 1e6;
    }
  } else {
    for (size_t k = 0; k < ws.blocks.size(); ++k) keys[k] = {};
  }
  std::vector<size_t> order(ws.blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (ws.blocks[a].d1 != ws.blocks[b].d1) return ws.blocks[a].d1 > ws.blocks[b].d1;
    if (ws.blocks[a].d2 != ws.blocks[b].d2) return ws.blocks[a].d2 > ws.blocks[b].d2;
    return keys[a] > keys[b];
  });
  std::vector<WedderburnBlock> sorted;
  sorted.reserve(ws.blocks.size());
  for (size_t idx : order) sorted.push_back(std::move(ws.blocks[idx]));
  ws.blocks = std::move(sorted);
  return ws;
}

Matrix block_component(const WedderburnBlock& block, const Matrix& x,
                       double* residual) {
  const Matrix y = block.isometry * x * block.isometry.adjoint();
  const int d1 = block.d1;
  const int d2 = block.d2;
  Matrix m = Matrix::Zero(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) {
      Complex acc(0.0, 0.0);
      for (int b = 0; b < d2; ++b) acc += y(i * d2 + b, j * d2 + b);
      m(i, j) = acc / double(d2);
    }
  if (residual)
    *residual = (y - kron2(m, Matrix::Identity(d2, d2))).norm();
  return m;
}

std::vector<Matrix> commutant_basis(const AlgebraBasis& alg) {
  if (alg.dim() == 0) return {};
  const Matrix v = range_basis(alg.unit);
  const int r = static_cast<int>(v.cols());

  // Unknown z (r x r) with [z, b_i] = 0 for every compressed basis element.
  // vec(z b) = (b^T (x) I) vec(z), vec(b z) = (I (x) b) vec(z).
  Matrix gram = Matrix::Zero(r * r, r * r);
  const Matrix id = Matrix::Identity(r, r);
  for (int i = 0; i < alg.dim(); ++i) {
    const Matrix b = v.adjoint() * alg.basis_ops[i] * v;
    const Matrix k = kron2(b.transpose(), id) - kron2(id, b);
    gram += k.adjoint() * k;
  }
  auto null = gram_nullspace(gram);

  std::vector<Matrix> out;
  out.reserve(null.size());
  for (const auto& c : null) {
    Matrix z(r, r);
    for (int col = 0; col < r; ++col)
      for (int row = 0; row < r; ++row) z(row, col) = c(col * r + row);
    out.push_back(v * z * v.adjoint());
  }
  return out;
}

}  // namespace qmarkov
