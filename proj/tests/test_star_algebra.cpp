#include <doctest.h>

#include <algorithm>

#include "qmarkov/instance_gen.hpp"
#include "qmarkov/star_algebra.hpp"
#include "qmarkov/tensor.hpp"

using namespace qmarkov;

TEST_SUITE_BEGIN("star_algebra");

namespace {

Matrix unit_matrix(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// Is x inside the span of the (orthonormal) basis, up to tol?
double span_residual(const std::vector<Matrix>& basis, Matrix x) {
  const double n = x.norm();
  if (n < 1e-15) return 0.0;
  x /= n;
  for (const auto& b : basis) x -= hs_inner(b, x) * b;
  return x.norm();
}

std::vector<Matrix> scrambled_block_algebra_generators(
    const std::vector<int>& block_sizes, const Matrix& u, Rng& rng) {
  int d = 0;
  for (int s : block_sizes) d += s;
  std::vector<Matrix> gens;
  for (int rep = 0; rep < 2; ++rep) {
    Matrix g = Matrix::Zero(d, d);
    int off = 0;
    for (int s : block_sizes) {
      g.block(off, off, s, s) = gaussian_matrix(s, s, rng);
      off += s;
    }
    gens.push_back(u * g * u.adjoint());
  }
  return gens;
}

std::vector<std::pair<int, int>> block_dims(const WedderburnStructure& ws) {
  std::vector<std::pair<int, int>> dims;
  for (const auto& b : ws.blocks) dims.emplace_back(b.d1, b.d2);
  std::sort(dims.begin(), dims.end());
  return dims;
}

}  // namespace

TEST_CASE("span closure of the identity is one-dimensional") {
  const int d = 3;
  AlgebraBasis alg = span_closure({Matrix::Identity(d, d)}, d);
  REQUIRE(alg.dim() == 1);
  CHECK((alg.basis_ops[0] - Matrix::Identity(d, d) / std::sqrt(3.0)).norm() <
        1e-12);
  CHECK((alg.unit - Matrix::Identity(d, d)).norm() < 1e-10);
}

TEST_CASE("span closure of all matrix units is the full algebra") {
  const int d = 3;
  std::vector<Matrix> gens;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gens.push_back(unit_matrix(d, i, j));
  AlgebraBasis alg = span_closure(gens, d);
  CHECK(alg.dim() == d * d);
}

TEST_CASE("a nondegenerate diagonal generates the diagonal algebra") {
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = 2.0;
  g(2, 2) = 3.0;
  AlgebraBasis alg = span_closure({g}, 3);
  REQUIRE(alg.dim() == 3);
  for (const auto& b : alg.basis_ops)
    CHECK((b - Matrix(b.diagonal().asDiagonal())).norm() < 1e-10);
}

TEST_CASE("span closure is idempotent and closed") {
  Rng rng(113);
  Matrix g = gaussian_matrix(4, 4, rng);
  AlgebraBasis alg = span_closure({g}, 4);

  AlgebraBasis again = span_closure(alg.basis_ops, 4);
  CHECK(again.dim() == alg.dim());
  for (const auto& b : again.basis_ops)
    CHECK(span_residual(alg.basis_ops, b) < 1e-8);

  // Gram matrix identity and closure under products and adjoints.
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = 0; j < alg.dim(); ++j) {
      const Complex g_ij = hs_inner(alg.basis_ops[i], alg.basis_ops[j]);
      CHECK(std::abs(g_ij - (i == j ? 1.0 : 0.0)) < 1e-9);
      CHECK(span_residual(alg.basis_ops,
                          alg.basis_ops[i] * alg.basis_ops[j]) < 1e-8);
    }
  for (const auto& b : alg.basis_ops)
    CHECK(span_residual(alg.basis_ops, b.adjoint()) < 1e-8);
}

TEST_CASE("empty generators give the zero algebra") {
  AlgebraBasis alg = span_closure({}, 3);
  CHECK(alg.dim() == 0);
  CHECK(central_projections(alg).empty());
}

TEST_CASE("central projections of the full matrix algebra") {
  Rng rng(127);
  std::vector<Matrix> gens = {gaussian_matrix(3, 3, rng), gaussian_matrix(3, 3, rng)};
  AlgebraBasis alg = span_closure(gens, 3);
  REQUIRE(alg.dim() == 9);
  auto projs = central_projections(alg);
  REQUIRE(projs.size() == 1);
  CHECK((projs[0] - Matrix::Identity(3, 3)).norm() < 1e-9);
}

TEST_CASE("central projections of the diagonal algebra are rank one") {
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = 2.0;
  g(2, 2) = 3.0;
  AlgebraBasis alg = span_closure({g}, 3);
  auto projs = central_projections(alg, 1e-7, 5);
  REQUIRE(projs.size() == 3);
  Matrix sum = Matrix::Zero(3, 3);
  for (const auto& p : projs) {
    CHECK(std::abs(p.trace().real() - 1.0) < 1e-9);
    CHECK((p * p - p).norm() < 1e-9);
    sum += p;
  }
  CHECK((sum - alg.unit).norm() < 1e-9);
}

TEST_CASE("central projections split a two-block algebra") {
  Rng rng(131);
  const Matrix u = random_unitary(4, rng);
  auto gens = scrambled_block_algebra_generators({2, 2}, u, rng);
  AlgebraBasis alg = span_closure(gens, 4);
  REQUIRE(alg.dim() == 8);
  auto projs = central_projections(alg, 1e-7, 7);
  REQUIRE(projs.size() == 2);
  for (const auto& p : projs) {
    CHECK(std::abs(p.trace().real() - 2.0) < 1e-8);
    for (const auto& b : alg.basis_ops) CHECK((p * b - b * p).norm() < 1e-8);
  }
}

TEST_CASE("factor_block on a full block, a tensor block, and scalars") {
  Rng rng(137);

  // Full matrix algebra: d1 = d, d2 = 1.
  AlgebraBasis full = span_closure(
      {gaussian_matrix(3, 3, rng), gaussian_matrix(3, 3, rng)}, 3);
  BlockFactorization f = factor_block(full, full.unit, 3);
  CHECK(f.d1 == 3);
  CHECK(f.d2 == 1);

  // {X (x) I_2}: d1 = 2, d2 = 2.
  std::vector<Matrix> tensor_gens;
  for (int rep = 0; rep < 2; ++rep)
    tensor_gens.push_back(
        kron2(gaussian_matrix(2, 2, rng), Matrix::Identity(2, 2)));
  AlgebraBasis tensor_alg = span_closure(tensor_gens, 4);
  REQUIRE(tensor_alg.dim() == 4);
  BlockFactorization ft = factor_block(tensor_alg, tensor_alg.unit, 5);
  CHECK(ft.d1 == 2);
  CHECK(ft.d2 == 2);
  // Tensor form on every basis element.
  for (const auto& b : tensor_alg.basis_ops) {
    WedderburnBlock wb{tensor_alg.unit, ft.isometry, ft.d1, ft.d2};
    double resid = 0.0;
    block_component(wb, b, &resid);
    CHECK(resid < 1e-8);
  }

  // Scalars: d1 = 1, d2 = d.
  AlgebraBasis scalars = span_closure({Matrix::Identity(4, 4)}, 4);
  BlockFactorization fs = factor_block(scalars, scalars.unit, 7);
  CHECK(fs.d1 == 1);
  CHECK(fs.d2 == 4);
}

TEST_CASE("wedderburn of the identity is a single (1, d) block") {
  WedderburnStructure ws = wedderburn({Matrix::Identity(4, 4)}, 4);
  REQUIRE(ws.blocks.size() == 1);
  CHECK(ws.blocks[0].d1 == 1);
  CHECK(ws.blocks[0].d2 == 4);
}

TEST_CASE("wedderburn recovers a scrambled M2 + M3 block algebra") {
  Rng rng(139);
  const Matrix u = random_unitary(5, rng);
  auto gens = scrambled_block_algebra_generators({2, 3}, u, rng);
  WedderburnStructure ws = wedderburn(gens, 5);
  CHECK(block_dims(ws) == std::vector<std::pair<int, int>>{{2, 1}, {3, 1}});
  // Canonical order puts the larger d1 first.
  CHECK(ws.blocks[0].d1 == 3);
}

TEST_CASE("wedderburn finds the (2,2) tensor block") {
  Rng rng(149);
  std::vector<Matrix> gens = {
      kron2(gaussian_matrix(2, 2, rng), Matrix::Identity(2, 2)),
      Matrix::Identity(4, 4)};
  WedderburnStructure ws = wedderburn(gens, 4);
  REQUIRE(ws.blocks.size() == 1);
  CHECK(ws.blocks[0].d1 == 2);
  CHECK(ws.blocks[0].d2 == 2);
}

TEST_CASE("wedderburn reconstruction reproduces the generators") {
  Rng rng(151);
  const Matrix u = random_unitary(6, rng);
  auto gens = scrambled_block_algebra_generators({2, 4}, u, rng);
  // Add a tensor substructure in the size-4 block.
  WedderburnStructure ws = wedderburn(gens, 6, {}, 17);

  for (const auto& g : gens) {
    Matrix rebuilt = Matrix::Zero(6, 6);
    for (const auto& b : ws.blocks) {
      const Matrix comp = block_component(b, g, nullptr);
      rebuilt += b.isometry.adjoint() *
                 kron2(comp, Matrix::Identity(b.d2, b.d2)) * b.isometry;
    }
    const Matrix projected = ws.unit * g * ws.unit;
    CHECK((rebuilt - projected).norm() < 1e-7);
  }
}

TEST_CASE("commutant duality swaps the block dimensions") {
  Rng rng(157);
  const Matrix u = random_unitary(5, rng);
  auto gens = scrambled_block_algebra_generators({2, 3}, u, rng);
  AlgebraBasis alg = span_closure(gens, 5);
  auto comm = commutant_basis(alg);
  // Commutant of M2 + M3 is C + C: two dimensions.
  REQUIRE(comm.size() == 2);
  WedderburnStructure ws = wedderburn(comm, 5);
  CHECK(block_dims(ws) == std::vector<std::pair<int, int>>{{1, 2}, {1, 3}});

  // And the commutant of {X (x) I} is {I (x) Y}: block (2, 2).
  std::vector<Matrix> tensor_gens = {
      kron2(gaussian_matrix(2, 2, rng), Matrix::Identity(2, 2)),
      kron2(gaussian_matrix(2, 2, rng), Matrix::Identity(2, 2))};
  AlgebraBasis tensor_alg = span_closure(tensor_gens, 4);
  auto tensor_comm = commutant_basis(tensor_alg);
  REQUIRE(tensor_comm.size() == 4);
  for (const auto& z : tensor_comm)
    for (const auto& b : tensor_alg.basis_ops)
      CHECK((z * b - b * z).norm() < 1e-8);
}

TEST_CASE("unitary conjugation of the generators conjugates the structure") {
  Rng rng(163);
  auto gens = scrambled_block_algebra_generators({2, 3},
                                                 Matrix::Identity(5, 5).eval(), rng);
  WedderburnStructure base = wedderburn(gens, 5, {}, 23);

  const Matrix u = random_unitary(5, rng);
  std::vector<Matrix> conj;
  for (const auto& g : gens) conj.push_back(u * g * u.adjoint());
  WedderburnStructure rotated = wedderburn(conj, 5, {}, 23);

  CHECK(block_dims(base) == block_dims(rotated));
  // Projectors are conjugated by u, after matching blocks by dimension key.
  for (size_t k = 0; k < base.blocks.size(); ++k) {
    const Matrix expect = u * base.blocks[k].projector * u.adjoint();
    double best = 1e9;
    for (const auto& rb : rotated.blocks)
      best = std::min(best, (rb.projector - expect).norm());
    CHECK(best < 1e-7);
  }
}

TEST_CASE("central splitting reports degeneracy when gaps cannot open") {
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = 2.0;
  g(2, 2) = 3.0;
  AlgebraBasis alg = span_closure({g}, 3);
  // With an absurd gap tolerance every splitting attempt merges clusters.
  CHECK_THROWS_AS(central_projections(alg, 1e6, 11), DegeneracyError);
}

TEST_CASE("factor_block rejects non-algebra input") {
  Rng rng(251);
  AlgebraBasis fake;
  fake.ambient_dim = 3;
  fake.unit = Matrix::Identity(3, 3);
  // Three Hermitian elements that do not span a square-dimensional algebra.
  for (int i = 0; i < 3; ++i) {
    Matrix h = gaussian_matrix(3, 3, rng);
    h = ((h + h.adjoint()) / 2.0).eval();
    h /= h.norm();
    fake.basis_ops.push_back(h);
  }
  CHECK_THROWS_AS(factor_block(fake, fake.unit, 1), StructureError);
}

TEST_CASE("wedderburn is deterministic for a fixed seed") {
  Rng rng(167);
  auto gens = scrambled_block_algebra_generators({2, 2}, random_unitary(4, rng), rng);
  WedderburnStructure a = wedderburn(gens, 4, {}, 31);
  WedderburnStructure b = wedderburn(gens, 4, {}, 31);
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (size_t k = 0; k < a.blocks.size(); ++k) {
    CHECK(a.blocks[k].d1 == b.blocks[k].d1);
    CHECK(a.blocks[k].d2 == b.blocks[k].d2);
    CHECK((a.blocks[k].projector - b.blocks[k].projector).norm() == 0.0);
    CHECK((a.blocks[k].isometry - b.blocks[k].isometry).norm() == 0.0);
  }
}

TEST_SUITE_END();
