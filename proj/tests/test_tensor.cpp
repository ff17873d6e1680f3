#include <doctest.h>

#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"
#include "test_support.hpp"

using namespace qmarkov;
using qmtest::bell_pair;
using qmtest::diag_op;
using qmtest::random_state;

TEST_SUITE_BEGIN("tensor");

TEST_CASE("layout strides follow the last-fastest convention") {
  SystemLayout layout({{"A", 2}, {"B", 3}, {"C", 4}});
  CHECK(layout.total_dim() == 24);
  CHECK(layout.stride(0) == 12);
  CHECK(layout.stride(1) == 4);
  CHECK(layout.stride(2) == 1);
  std::vector<int> digits;
  layout.decompose(1 * 12 + 2 * 4 + 3, digits);
  CHECK(digits == std::vector<int>{1, 2, 3});
  CHECK(layout.compose({1, 2, 3}) == 23);
}

TEST_CASE("layout rejects bad labels") {
  CHECK_THROWS_AS(SystemLayout({{"A", 2}, {"A", 2}}), LayoutError);
  CHECK_THROWS_AS(SystemLayout({{"", 2}}), LayoutError);
  CHECK_THROWS_AS(SystemLayout({{"A", 0}}), LayoutError);
}

TEST_CASE("kron of identities is the identity") {
  Operator i2a = identity_operator(SystemLayout({{"A", 2}}));
  Operator i2b = identity_operator(SystemLayout({{"B", 2}}));
  Operator out = kron({i2a, i2b});
  CHECK(out.dim() == 4);
  CHECK((out.entries() - Matrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("kron of diagonal projectors follows the indexing convention") {
  Operator a = diag_op(SystemLayout({{"A", 2}}), {1.0, 0.0});
  Operator b = diag_op(SystemLayout({{"B", 2}}), {0.0, 1.0});
  Operator out = kron({a, b});
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1.0;  // index 0*2 + 1
  CHECK((out.entries() - expect).norm() == 0.0);
}

TEST_CASE("kron matches the element-indexing oracle on random parts") {
  Rng rng(7);
  Matrix sigma = gaussian_matrix(2, 2, rng);
  Matrix tau = gaussian_matrix(2, 2, rng);
  Operator out = kron({Operator(SystemLayout({{"A", 2}}), sigma),
                       Operator(SystemLayout({{"B", 2}}), tau)});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          CHECK(out.entries()(i * 2 + k, j * 2 + l) == sigma(i, j) * tau(k, l));
}

TEST_CASE("kron rejects duplicate labels") {
  Operator a = identity_operator(SystemLayout({{"A", 2}}));
  CHECK_THROWS_AS(kron({a, a}), LayoutError);
}

TEST_CASE("kron is associative up to layout concatenation") {
  Rng rng(11);
  Operator a(SystemLayout({{"A", 2}}), gaussian_matrix(2, 2, rng));
  Operator b(SystemLayout({{"B", 3}}), gaussian_matrix(3, 3, rng));
  Operator c(SystemLayout({{"C", 2}}), gaussian_matrix(2, 2, rng));
  Operator left = kron({kron({a, b}), c});
  Operator right = kron({a, kron({b, c})});
  CHECK((left.entries() - right.entries()).norm() <
        1e-13 * left.entries().norm());
}

TEST_CASE("trace of kron is the product of traces") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Operator a(SystemLayout({{"A", 3}}), gaussian_matrix(3, 3, rng));
    Operator b(SystemLayout({{"B", 2}}), gaussian_matrix(2, 2, rng));
    const Complex lhs = kron({a, b}).entries().trace();
    const Complex rhs = a.entries().trace() * b.entries().trace();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("partial trace of a product state returns the kept factor") {
  Rng rng(17);
  DensityOperator rho_a = qmtest::random_state(SystemLayout({{"A", 2}}), rng);
  DensityOperator rho_b = qmtest::random_state(SystemLayout({{"B", 3}}), rng);
  Operator joint = kron({rho_a.op(), rho_b.op()});
  Operator back = partial_trace(joint, {"A"});
  CHECK(frob_dist(back, rho_a.op()) < 1e-13);
}

TEST_CASE("partial trace of the Bell state is maximally mixed") {
  Operator half = partial_trace(bell_pair().op(), {"A"});
  CHECK((half.entries() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("partial trace keeping everything is the identity map") {
  Rng rng(19);
  DensityOperator rho = random_state(SystemLayout({{"A", 2}, {"B", 2}}), rng);
  Operator same = partial_trace(rho.op(), {"A", "B"});
  CHECK(frob_dist(same, rho.op()) == 0.0);
}

TEST_CASE("partial trace preserves the trace and rejects unknown labels") {
  Rng rng(23);
  DensityOperator rho = random_state(SystemLayout({{"A", 2}, {"B", 3}}), rng);
  Operator marg = partial_trace(rho.op(), {"B"});
  CHECK(std::abs(marg.entries().trace() - rho.entries().trace()) < 1e-12);
  CHECK_THROWS_AS(partial_trace(rho.op(), {"Z"}), LayoutError);
}

TEST_CASE("tracing B then C equals tracing both at once") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    DensityOperator rho =
        random_state(SystemLayout({{"A", 2}, {"B", 2}, {"C", 3}}), rng);
    Operator two_step = partial_trace(partial_trace(rho.op(), {"A", "C"}), {"A"});
    Operator one_step = partial_trace(rho.op(), {"A"});
    CHECK(frob_dist(two_step, one_step) < 1e-12);
  }
}

TEST_CASE("permute_systems round trips and reorders indices") {
  Rng rng(31);
  DensityOperator rho =
      random_state(SystemLayout({{"A", 2}, {"B", 3}, {"C", 2}}), rng);
  Operator perm = permute_systems(rho.op(), {"C", "A", "B"});
  CHECK(perm.layout().labels() == std::vector<std::string>{"C", "A", "B"});
  Operator back = permute_systems(perm, {"A", "B", "C"});
  CHECK(frob_dist(back, rho.op()) == 0.0);
  // Marginals are unchanged by permutation.
  CHECK(frob_dist(partial_trace(perm, {"B"}), partial_trace(rho.op(), {"B"})) <
        1e-13);
}

TEST_CASE("embed_operator acts as identity elsewhere") {
  Rng rng(37);
  SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
  Matrix x = gaussian_matrix(2, 2, rng);
  Operator embedded = embed_operator(layout, {"B"}, x);
  Operator direct = kron({identity_operator(SystemLayout({{"A", 2}})),
                          Operator(SystemLayout({{"B", 2}}), x),
                          identity_operator(SystemLayout({{"C", 2}}))});
  CHECK(frob_dist(embedded, direct) < 1e-14);
}

TEST_CASE("hermitian_eig sorts descending and reconstructs") {
  Spectrum spec = hermitian_eig(diag_op(SystemLayout({{"A", 3}}), {3, 1, 2}));
  CHECK(spec.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(spec.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(spec.eigenvalues(2) == doctest::Approx(1.0));

  Spectrum ident = hermitian_eig(Matrix::Identity(5, 5));
  CHECK((ident.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-14);

  Rng rng(41);
  Matrix g = gaussian_matrix(6, 6, rng);
  Matrix h = ((g + g.adjoint()) / 2.0).eval();
  Spectrum s = hermitian_eig(h);
  Matrix rebuilt =
      s.eigenvectors * s.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
      s.eigenvectors.adjoint();
  CHECK((rebuilt - h).norm() <= 1e-9 * h.norm());
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(6, 6))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Rng rng(43);
  Matrix g = gaussian_matrix(3, 3, rng);
  CHECK_THROWS_AS(hermitian_eig(g, 1e-12), NumericError);
}

TEST_CASE("support projector handles rank deficiency and full rank") {
  Operator rho = diag_op(SystemLayout({{"A", 3}}), {0.5, 0.5, 0.0});
  Matrix p = support_projector(rho.entries());
  Matrix expect = Matrix::Zero(3, 3);
  expect(0, 0) = 1.0;
  expect(1, 1) = 1.0;
  CHECK((p - expect).norm() < 1e-12);

  Rng rng(47);
  DensityOperator full = random_state(SystemLayout({{"A", 4}}), rng);
  CHECK((support_projector(full.entries()) - Matrix::Identity(4, 4)).norm() <
        1e-10);

  // A pure state projects onto itself.
  Eigen::VectorXcd psi = gaussian_matrix(4, 1, rng).col(0);
  psi.normalize();
  Matrix pure = psi * psi.adjoint();
  CHECK((support_projector(pure) - pure).norm() < 1e-10);
}

TEST_CASE("support projector is idempotent and commutes with its input") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix g = gaussian_matrix(5, 3, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    Matrix p = support_projector(rho);
    CHECK((p * p - p).norm() < 1e-10);
    CHECK((p - Matrix(p.adjoint())).norm() < 1e-12);
    CHECK((p * rho - rho * p).norm() < 1e-9);
    CHECK((p * rho * p - rho).norm() < 1e-9);
  }
}

TEST_CASE("frob_dist basics and the triangle inequality") {
  Operator m = diag_op(SystemLayout({{"A", 2}}), {1.0, 0.0});
  Operator n = diag_op(SystemLayout({{"A", 2}}), {0.0, 1.0});
  CHECK(frob_dist(m, m) == 0.0);
  CHECK(frob_dist(m, n) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(frob_dist(m, identity_operator(SystemLayout({{"B", 3}}))),
                  LayoutError);

  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = gaussian_matrix(4, 4, rng);
    Matrix b = gaussian_matrix(4, 4, rng);
    Matrix c = gaussian_matrix(4, 4, rng);
    CHECK(frob_dist(a, c) <= frob_dist(a, b) + frob_dist(b, c) + 1e-12);
  }
}

TEST_CASE("density validation names the violated invariant") {
  SystemLayout layout({{"A", 2}});
  Matrix bad_trace = 0.49 * Matrix::Identity(2, 2);
  CHECK_THROWS_WITH_AS(
      DensityOperator::validated(Operator(layout, bad_trace)),
      doctest::Contains("trace"), ValidationError);

  Matrix not_herm(2, 2);
  not_herm << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_WITH_AS(
      DensityOperator::validated(Operator(layout, not_herm)),
      doctest::Contains("hermitian"), ValidationError);

  Matrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_WITH_AS(DensityOperator::validated(Operator(layout, neg)),
                       doctest::Contains("psd"), ValidationError);
}

TEST_SUITE_END();
