#include <doctest.h>

#include <cmath>

#include "qmarkov/classical.hpp"
#include "qmarkov/entropy.hpp"
#include "qmarkov/random.hpp"
#include "qmarkov/tensor.hpp"

using namespace qmarkov;

TEST_SUITE_BEGIN("classical");

namespace {

JointPmf random_pmf(const std::vector<Alphabet>& alphabets, Rng& rng,
                    double floor = 0.02) {
  int cells = 1;
  for (const auto& a : alphabets) cells *= a.size;
  std::uniform_real_distribution<double> unif(floor, 1.0);
  std::vector<double> probs(cells);
  double sum = 0.0;
  for (auto& p : probs) {
    p = unif(rng);
    sum += p;
  }
  for (auto& p : probs) p /= sum;
  return JointPmf(alphabets, probs);
}

// p(a,b,c,d) = p(d) p(a|d) p(b|d) p(c|d), strictly positive.
JointPmf conditionally_independent_pmf(int na, int nb, int nc, int nd, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  auto column = [&](int n) {
    std::vector<double> v(n);
    double s = 0.0;
    for (auto& x : v) {
      x = unif(rng);
      s += x;
    }
    for (auto& x : v) x /= s;
    return v;
  };
  std::vector<double> pd = column(nd);
  std::vector<std::vector<double>> pa(nd), pb(nd), pc(nd);
  for (int d = 0; d < nd; ++d) {
    pa[d] = column(na);
    pb[d] = column(nb);
    pc[d] = column(nc);
  }
  std::vector<double> probs;
  probs.reserve(na * nb * nc * nd);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nc; ++c)
        for (int d = 0; d < nd; ++d)
          probs.push_back(pd[d] * pa[d][a] * pb[d][b] * pc[d][c]);
  // normalize away rounding dust
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (auto& p : probs) p /= sum;
  return JointPmf({{"A", na}, {"B", nb}, {"C", nc}, {"D", nd}}, probs);
}

}  // namespace

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {-0.5, 1.5}), ValidationError);
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {1.0}), LayoutError);
}

TEST_CASE("classical cmi on products and copies") {
  // Product PMF.
  JointPmf prod({{"A", 2}, {"B", 2}, {"C", 2}},
                std::vector<double>(8, 1.0 / 8.0));
  CHECK(std::abs(classical_cmi(prod, {"A"}, {"C"}, {"B"})) < 1e-12);

  // A = C perfect copy, B constant: I(A;C|B) = ln|A|.
  std::vector<double> copy(2 * 1 * 2, 0.0);
  copy[0] = 0.5;  // a=0, b=0, c=0
  copy[3] = 0.5;  // a=1, b=0, c=1
  JointPmf copy_pmf({{"A", 2}, {"B", 1}, {"C", 2}}, copy);
  CHECK(std::abs(classical_cmi(copy_pmf, {"A"}, {"C"}, {"B"}) - std::log(2.0)) <
        1e-12);
  CHECK(classical_cmi(copy_pmf, {"A"}, {"C"}, {"B"}) >= -1e-12);
}

TEST_CASE("classical cmi is nonnegative over random PMFs") {
  Rng rng(307);
  for (int trial = 0; trial < 50; ++trial) {
    JointPmf pmf = random_pmf({{"A", 2}, {"B", 2}, {"C", 2}}, rng, 0.0001);
    CHECK(classical_cmi(pmf, {"A"}, {"C"}, {"B"}) >= -1e-12);
    CHECK(classical_cmi(pmf, {"A"}, {"C"}, {}) >= -1e-12);
  }
}

TEST_CASE("classical cmi matches the quantum value on embeddings") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    JointPmf pmf = random_pmf({{"A", 2}, {"B", 2}, {"C", 3}}, rng);
    const double c = classical_cmi(pmf, {"A"}, {"C"}, {"B"});
    const double q = cmi(embed_diagonal(pmf), {"A"}, {"C"}, {"B"});
    CHECK(std::abs(c - q) < 1e-10);
  }
}

TEST_CASE("common label partition on the doubled-bit example") {
  // A = J uniform bit, B = 2J + U, C = 2J + V with U, V independent bits.
  std::vector<double> probs(2 * 4 * 4, 0.0);
  SystemLayout layout({{"A", 2}, {"B", 4}, {"C", 4}});
  for (int j = 0; j < 2; ++j)
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v)
        probs[layout.compose({j, 2 * j + u, 2 * j + v})] = 1.0 / 8.0;
  JointPmf pmf({{"A", 2}, {"B", 4}, {"C", 4}}, probs);

  ClassicalLabel label = common_label_partition(pmf);
  REQUIRE(label.label_count() == 2);
  // Blocks {0,1} and {2,3} on both sides.
  auto norm = [](std::vector<std::vector<int>> blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    return blocks;
  };
  CHECK(norm(label.partition_b) ==
        std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  CHECK(norm(label.partition_c) ==
        std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c)
      if (pmf.prob({0, b, c}) + pmf.prob({1, b, c}) > 0)
        CHECK(label.g1.at(b) == label.g2.at(c));
}

TEST_CASE("common label partition on independent and copy cases") {
  Rng rng(103);
  // A independent of (B, C): one label.
  JointPmf indep({{"A", 2}, {"B", 2}, {"C", 2}},
                 std::vector<double>(8, 1.0 / 8.0));
  CHECK(common_label_partition(indep).label_count() == 1);

  // B = C = A: one singleton block per value.
  std::vector<double> copy(8, 0.0);
  SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
  copy[layout.compose({0, 0, 0})] = 0.4;
  copy[layout.compose({1, 1, 1})] = 0.6;
  ClassicalLabel label =
      common_label_partition(JointPmf({{"A", 2}, {"B", 2}, {"C", 2}}, copy));
  CHECK(label.label_count() == 2);
  for (const auto& block : label.partition_b) CHECK(block.size() == 1);
}

TEST_CASE("common label partition rejects non-Markov inputs") {
  // A = B, C = A xor B is not doubly Markov: actually make C = A to break
  // the A - B - C chain while keeping A - C - B... simplest: a pure-GHZ-like
  // classical parity PMF where neither chain holds.
  std::vector<double> probs(8, 0.0);
  SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
  // p(a, b, c) uniform over a = b xor c: I(A;C|B) = ln 2 > 0.
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c) probs[layout.compose({b ^ c, b, c})] = 0.25;
  CHECK_THROWS_AS(
      common_label_partition(JointPmf({{"A", 2}, {"B", 2}, {"C", 2}}, probs)),
      NotMarkovError);
}

TEST_CASE("conditional double markov check on structured and broken PMFs") {
  Rng rng(107);
  JointPmf good = conditionally_independent_pmf(2, 2, 2, 3, rng);
  ClassicalConditionalVerdict v = conditional_double_markov_check(good);
  CHECK(v.holds());
  CHECK(v.cmi_c_given_bd <= 1e-10);
  CHECK(v.cmi_b_given_cd <= 1e-10);
  CHECK(v.max_conditional_dev <= 1e-10);

  // A PMF where A - (B,D) - C holds but A - (C,D) - B fails:
  // B = A (copy), C independent of everything.
  std::vector<double> probs(2 * 2 * 2 * 2, 0.0);
  SystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}});
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) probs[layout.compose({a, a, c, d})] = 1.0 / 8.0;
  JointPmf one_way({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}}, probs);
  ClassicalConditionalVerdict w = conditional_double_markov_check(one_way, false);
  CHECK(w.chain_bd_holds);        // I(A;C|B,D) = 0
  CHECK_FALSE(w.chain_cd_holds);  // I(A;B|C,D) = ln 2
  CHECK(std::abs(w.cmi_b_given_cd - std::log(2.0)) < 1e-10);
  CHECK_FALSE(w.holds());

  CHECK_THROWS_AS(conditional_double_markov_check(one_way, true),
                  FullSupportError);
}

TEST_CASE("diagonal embedding basics") {
  // Uniform bit.
  JointPmf bit({{"A", 2}}, {0.5, 0.5});
  DensityOperator rho = embed_diagonal(bit);
  CHECK((rho.entries() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);

  // Copy PMF on two bits.
  JointPmf copy({{"A", 2}, {"B", 2}}, {0.5, 0.0, 0.0, 0.5});
  DensityOperator rho2 = embed_diagonal(copy);
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 0.5;
  expect(3, 3) = 0.5;
  CHECK((rho2.entries() - expect).norm() < 1e-15);
}

TEST_CASE("embedding commutes with marginalization") {
  Rng rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    JointPmf pmf = random_pmf({{"A", 2}, {"B", 3}, {"C", 2}}, rng);
    Operator lhs = partial_trace(embed_diagonal(pmf).op(), {"A", "C"});
    Operator rhs = embed_diagonal(pmf_marginal(pmf, {"A", "C"})).op();
    CHECK(frob_dist(lhs, rhs) < 1e-12);
  }
}

TEST_SUITE_END();
