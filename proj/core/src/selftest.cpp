#include "qmarkov/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "qmarkov/classical.hpp"
#include "qmarkov/double_markov.hpp"
#include "qmarkov/entropy.hpp"
#include "qmarkov/errors.hpp"
#include "qmarkov/instance_gen.hpp"
#include "qmarkov/io.hpp"
#include "qmarkov/markov_structure.hpp"
#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"

namespace qmarkov {

namespace {

namespace fs = std::filesystem;

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

void close(double value, double target, double tol, const std::string& what) {
  if (std::abs(value - target) > tol)
    throw Failure{what + ": " + std::to_string(value) + " vs " +
                  std::to_string(target)};
}

void below(double value, double bound, const std::string& what) {
  if (value > bound)
    throw Failure{what + ": " + std::to_string(value) + " > " +
                  std::to_string(bound)};
}

DensityOperator random_full_rank(const SystemLayout& layout, Rng& rng) {
  const int d = layout.total_dim();
  Matrix g = gaussian_matrix(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityOperator::trusted(Operator(layout, std::move(rho)));
}

std::vector<double> random_simplex(int n, Rng& rng, double floor = 0.1) {
  std::uniform_real_distribution<double> unif(floor, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = unif(rng);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  // close the simplex exactly so generator weight checks stay tight
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) acc += w[i];
  w[n - 1] = 1.0 - acc;
  return w;
}

JointPmf random_positive_pmf(const std::vector<Alphabet>& alphabets, Rng& rng) {
  int cells = 1;
  for (const auto& a : alphabets) cells *= a.size;
  return JointPmf(alphabets, random_simplex(cells, rng, 0.05));
}

// p(a,b,c,d) = p(d) p(a|d) p(b|d) p(c|d), strictly positive.
JointPmf conditional_product_pmf(int na, int nb, int nc, int nd, Rng& rng) {
  auto pd = random_simplex(nd, rng);
  std::vector<std::vector<double>> pa(nd), pb(nd), pc(nd);
  for (int d = 0; d < nd; ++d) {
    pa[d] = random_simplex(na, rng);
    pb[d] = random_simplex(nb, rng);
    pc[d] = random_simplex(nc, rng);
  }
  std::vector<double> probs;
  probs.reserve(na * nb * nc * nd);
  double sum = 0.0;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nc; ++c)
        for (int d = 0; d < nd; ++d) {
          probs.push_back(pd[d] * pa[d][a] * pb[d][b] * pc[d][c]);
          sum += probs.back();
        }
  for (auto& p : probs) p /= sum;
  return JointPmf({{"A", na}, {"B", nb}, {"C", nc}, {"D", nd}}, probs);
}

// Label-structured three-variable PMF: disjoint B and C supports per label,
// with well-separated conditional distributions of A.
JointPmf labeled_pmf(int na, const std::vector<int>& b_sizes,
                     const std::vector<int>& c_sizes, Rng& rng) {
  const int m = static_cast<int>(b_sizes.size());
  int nb = 0, nc = 0;
  for (int s : b_sizes) nb += s;
  for (int s : c_sizes) nc += s;
  auto qj = random_simplex(m, rng);
  SystemLayout layout({{"A", na}, {"B", nb}, {"C", nc}});
  std::vector<double> probs(layout.total_dim(), 0.0);
  std::vector<std::vector<double>> pa(m);
  for (int j = 0; j < m; ++j) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      pa[j] = random_simplex(na, rng, 0.02);
      bool far = true;
      for (int t = 0; t < j && far; ++t) {
        double tv = 0.0;
        for (int a = 0; a < na; ++a) tv += std::abs(pa[j][a] - pa[t][a]);
        if (tv / 2.0 < 0.15) far = false;
      }
      if (far) break;
    }
  }
  int boff = 0, coff = 0;
  for (int j = 0; j < m; ++j) {
    auto pb = random_simplex(b_sizes[j], rng);
    auto pc = random_simplex(c_sizes[j], rng);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < b_sizes[j]; ++b)
        for (int c = 0; c < c_sizes[j]; ++c)
          probs[layout.compose({a, boff + b, coff + c})] =
              qj[j] * pa[j][a] * pb[b] * pc[c];
    boff += b_sizes[j];
    coff += c_sizes[j];
  }
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (auto& p : probs) p /= sum;
  return JointPmf({{"A", na}, {"B", nb}, {"C", nc}}, probs);
}

// Partition of basis indices carried by a list of diagonal projectors.
std::vector<std::vector<int>> projector_partition(const std::vector<Matrix>& pvms) {
  std::vector<std::vector<int>> blocks;
  for (const auto& e : pvms) {
    std::vector<int> block;
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      if (e(i, i).real() > 0.5) block.push_back(static_cast<int>(i));
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Serialized summaries used for the bit-level determinism checks.
std::string summarize(const CommonLabel& cert) {
  std::ostringstream out;
  out << cert.label_count();
  for (int j = 0; j < cert.label_count(); ++j) {
    out << '|' << fmt17(cert.p_j[j]);
    const Matrix& e = cert.pvm_b[j];
    for (Eigen::Index r = 0; r < e.rows(); ++r)
      for (Eigen::Index c = 0; c < e.cols(); ++c)
        out << ',' << fmt17(e(r, c).real()) << ',' << fmt17(e(r, c).imag());
  }
  return out.str();
}

std::string summarize(const BlockDecomposition& dec) {
  std::ostringstream out;
  out << dec.block_count();
  for (const auto& b : dec.blocks) {
    out << '|' << b.d1 << 'x' << b.d2 << ':' << fmt17(b.weight);
    for (Eigen::Index r = 0; r < b.isometry.rows(); ++r)
      for (Eigen::Index c = 0; c < b.isometry.cols(); ++c)
        out << ',' << fmt17(b.isometry(r, c).real()) << ','
            << fmt17(b.isometry(r, c).imag());
  }
  return out.str();
}

using BlockList = std::vector<GenBlock>;

const std::vector<BlockList>& markov_configs() {
  static const std::vector<BlockList> configs = {
      {{1, 1, 1.0}},
      {{1, 2, 0.5}, {1, 1, 0.5}},
      {{2, 1, 0.4}, {1, 2, 0.6}},
      {{1, 1, 0.3}, {1, 1, 0.3}, {1, 1, 0.4}},
      {{2, 2, 0.55}, {1, 1, 0.45}},
      {{1, 2, 0.25}, {2, 1, 0.35}, {1, 1, 0.4}},
  };
  return configs;
}

const std::vector<BlockList>& double_markov_configs() {
  static const std::vector<BlockList> configs = {
      {{2, 2, 1.0}},
      {{1, 1, 0.5}, {1, 1, 0.5}},
      {{2, 1, 0.4}, {1, 2, 0.6}},
      {{1, 1, 0.2}, {2, 2, 0.8}},
      {{1, 2, 0.3}, {2, 1, 0.3}, {1, 1, 0.4}},
  };
  return configs;
}

const std::vector<BlockList>& conditional_configs() {
  static const std::vector<BlockList> configs = {
      {{1, 2, 1.0}},
      {{1, 1, 0.5}, {1, 1, 0.5}},
      {{1, 2, 0.45}, {1, 2, 0.55}},
      {{1, 1, 0.3}, {1, 3, 0.7}},
      {{2, 1, 0.5}, {1, 2, 0.5}},
      {{1, 1, 0.25}, {1, 1, 0.35}, {1, 2, 0.4}},
  };
  return configs;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out, std::uint64_t seed) {
  std::vector<CriterionResult> results;

  auto run = [&](int index, const std::string& name, double time_limit,
                 const std::function<std::string()>& body) {
    CriterionResult r;
    r.index = index;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.detail = body();
      r.pass = true;
    } catch (const Failure& f) {
      r.detail = f.detail;
      r.pass = false;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
      r.pass = false;
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (r.pass && time_limit > 0.0 && r.seconds > time_limit) {
      r.pass = false;
      r.detail = "runtime " + std::to_string(r.seconds) + " s exceeds " +
                 std::to_string(time_limit) + " s";
    }
    char line[320];
    std::snprintf(line, sizeof(line), "[%s] %2d. %-56s (%5.1fs)  %s\n",
                  r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(), r.seconds,
                  r.detail.c_str());
    out << line;
    out.flush();
    results.push_back(std::move(r));
  };

  run(1, "strong subadditivity on 200 random tripartite states", 10.0, [&] {
    Rng rng(seed + 1);
    std::uniform_int_distribution<int> dim(2, 3);
    double min_cmi = 1e9;
    for (int trial = 0; trial < 200; ++trial) {
      SystemLayout layout({{"A", dim(rng)}, {"B", dim(rng)}, {"C", dim(rng)}});
      DensityOperator rho = random_full_rank(layout, rng);
      const double v = cmi(rho, {"A"}, {"C"}, {"B"});
      min_cmi = std::min(min_cmi, v);
      require(v >= -1e-9, "cmi = " + std::to_string(v) + " below -1e-9");
    }
    return "min cmi = " + sci(min_cmi);
  });

  run(2, "entropy oracles and 100 diagonal-embedding CMI checks", 0.0, [&] {
    Rng rng(seed + 2);
    for (int d = 2; d <= 8; ++d) {
      DensityOperator mixed = DensityOperator::trusted(Operator(
          SystemLayout({{"A", d}}), Matrix::Identity(d, d) / double(d)));
      close(von_neumann_entropy(mixed), std::log(double(d)), 1e-10,
            "S(I/d) at d = " + std::to_string(d));
      Eigen::VectorXcd psi = gaussian_matrix(d, 1, rng).col(0);
      psi.normalize();
      DensityOperator pure = DensityOperator::trusted(
          Operator(SystemLayout({{"A", d}}), psi * psi.adjoint()));
      close(von_neumann_entropy(pure), 0.0, 1e-10,
            "S(pure) at d = " + std::to_string(d));
    }
    std::uniform_int_distribution<int> size(2, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      JointPmf pmf = random_positive_pmf(
          {{"A", size(rng)}, {"B", size(rng)}, {"C", size(rng)}}, rng);
      const double classical = classical_cmi(pmf, {"A"}, {"C"}, {"B"});
      const double quantum = cmi(embed_diagonal(pmf), {"A"}, {"C"}, {"B"});
      worst = std::max(worst, std::abs(classical - quantum));
      close(quantum, classical, 1e-10, "diagonal embedding CMI");
    }
    return "max |quantum - classical| = " + sci(worst);
  });

  run(3, "pivot decomposition round trip on 100 Markov states", 60.0, [&] {
    Rng rng(seed + 3);
    std::uniform_int_distribution<int> da(2, 3), dc(2, 3);
    const auto& configs = markov_configs();
    double worst_recon = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      GenSpec spec;
      spec.dim_a = da(rng);
      spec.dim_c = dc(rng);
      spec.blocks = configs[trial % configs.size()];
      spec.seed = rng();
      MarkovInstance inst = gen_markov_state(spec);

      BlockDecomposition dec =
          markov_decompose(inst.state, {{"A"}, {"B"}, {"C"}}, {}, rng());

      std::vector<std::tuple<int, int, double>> got, want;
      for (const auto& b : dec.blocks) got.emplace_back(b.d1, b.d2, b.weight);
      for (const auto& b : inst.truth.blocks)
        want.emplace_back(b.d1, b.d2, b.weight);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      require(got.size() == want.size(), "block count mismatch");
      for (size_t i = 0; i < got.size(); ++i) {
        require(std::get<0>(got[i]) == std::get<0>(want[i]) &&
                    std::get<1>(got[i]) == std::get<1>(want[i]),
                "block dimension mismatch");
        close(std::get<2>(got[i]), std::get<2>(want[i]), 1e-8, "block weight");
      }
      const double recon = frob_dist(build_state(dec).op(), inst.state.op());
      worst_recon = std::max(worst_recon, recon);
      below(recon, 1e-7, "reconstruction");
    }
    return "worst reconstruction residual = " + sci(worst_recon);
  });

  // Criteria 4 and 5 share the generated corpus.
  std::vector<DoubleMarkovInstance> dm_corpus;
  std::vector<CommonLabel> dm_certs;

  run(4, "common-label certification on 100 double-Markov states", 0.0, [&] {
    Rng rng(seed + 4);
    const auto& configs = double_markov_configs();
    std::uniform_int_distribution<int> da(2, 3);
    double worst_recon = 0.0, worst_cmi = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      GenSpec spec;
      spec.dim_a = da(rng);
      spec.blocks = configs[trial % configs.size()];
      spec.seed = rng();
      DoubleMarkovInstance inst = gen_double_markov_state(spec);
      CommonLabel cert =
          certify_double_markov(inst.state, {"A"}, {"B"}, {"C"}, {}, rng());

      require(cert.label_count() == inst.truth.label_count(),
              "label count mismatch");
      std::vector<double> got = cert.p_j, want = inst.truth.p_j;
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      for (size_t i = 0; i < got.size(); ++i)
        close(got[i], want[i], 1e-8, "label weight");

      const SystemLayout& L = inst.state.layout();
      Matrix recon = Matrix::Zero(L.total_dim(), L.total_dim());
      for (int j = 0; j < cert.label_count(); ++j) {
        const Matrix proj = embed_operator(L, {"B"}, cert.pvm_b[j]).entries() *
                            embed_operator(L, {"C"}, cert.pvm_c[j]).entries();
        recon += proj * inst.state.entries() * proj.adjoint();
      }
      const double recon_resid = (recon - inst.state.entries()).norm();
      worst_recon = std::max(worst_recon, recon_resid);
      below(recon_resid, 1e-7, "PVM reconstruction");

      const DensityOperator ext =
          label_extended_state(inst.state, cert, {"B"}, {"C"});
      const std::string j_label =
          ext.layout().system(ext.layout().count() - 1).label;
      const double label_cmi = cmi(ext, {"A"}, {"B", "C"}, {j_label});
      worst_cmi = std::max(worst_cmi, label_cmi);
      below(label_cmi, 1e-8, "I(A;BC|J)");

      dm_corpus.push_back(std::move(inst));
      dm_certs.push_back(std::move(cert));
    }
    return "worst reconstruction = " + sci(worst_recon) +
           ", worst I(A;BC|J) = " + sci(worst_cmi);
  });

  run(5, "certificate verification on the criterion-4 corpus", 0.0, [&] {
    require(!dm_certs.empty(), "criterion 4 produced no certificates");
    for (size_t i = 0; i < dm_certs.size(); ++i) {
      const DensityOperator& rho = dm_corpus[i].state;
      const DensityOperator ext =
          label_extended_state(rho, dm_certs[i], {"B"}, {"C"});
      const std::string j_label =
          ext.layout().system(ext.layout().count() - 1).label;
      below(std::abs(conditional_entropy(ext, {j_label}, {"B"})), 1e-8, "S(J|B)");
      below(std::abs(conditional_entropy(ext, {j_label}, {"C"})), 1e-8, "S(J|C)");
      below(cmi(rho, {"A"}, {"C"}, {"B"}), 1e-8, "I(A;C|B)");
      below(cmi(rho, {"A"}, {"B"}, {"C"}), 1e-8, "I(A;B|C)");
      LabelVerdict v = verify_common_label(rho, dm_certs[i], {"A"}, {"B"}, {"C"});
      require(v.pass,
              "verify_common_label failed on instance " + std::to_string(i));
    }
    return std::to_string(dm_certs.size()) + " certificates verified";
  });

  run(6, "negative instances fail in the documented way", 0.0, [&] {
    DensityOperator one_way = gen_negative(NegativeKind::one_way_tripartite);
    below(cmi(one_way, {"A"}, {"C"}, {"B"}), 1e-10, "I(A;C|B) one-way");
    close(cmi(one_way, {"A"}, {"B"}, {"C"}), std::log(2.0), 1e-9,
          "I(A;B|C) one-way");
    bool threw = false;
    try {
      certify_double_markov(one_way, {"A"}, {"B"}, {"C"});
    } catch (const NotMarkovError&) {
      threw = true;
    }
    require(threw, "one-way certification did not fail");

    DensityOperator ghz = gen_negative(NegativeKind::entangled_not_markov);
    close(cmi(ghz, {"A"}, {"C"}, {"B"}), std::log(2.0), 1e-9, "I(A;C|B) GHZ");
    close(cmi(ghz, {"A"}, {"B"}, {"C"}), std::log(2.0), 1e-9, "I(A;B|C) GHZ");
    return "one-way and GHZ negatives behave as documented";
  });

  run(7, "conditional certification on 50 full-support states", 120.0, [&] {
    Rng rng(seed + 7);
    const auto& configs = conditional_configs();
    double worst_cmi = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      GenSpec spec;
      spec.dim_a = 2;
      spec.blocks = configs[trial % configs.size()];
      spec.seed = rng();
      ConditionalInstance inst = gen_thm2_state(spec, 2, 2);
      ConditionalCertificate cert = certify_conditional_double_markov(
          inst.state, {"A"}, {"B"}, {"C"}, {"D"}, {}, rng());

      worst_cmi = std::max(worst_cmi, cert.final_cmi);
      below(cert.final_cmi, 1e-8, "final I(A;BC|D)");

      auto dims = cert.d_decomposition.dims();
      auto want = inst.truth.dims();
      std::sort(dims.begin(), dims.end());
      std::sort(want.begin(), want.end());
      require(dims == want, "block dimensions mismatch");
      std::vector<double> got_w, want_w;
      for (const auto& b : cert.d_decomposition.blocks)
        got_w.push_back(b.weight);
      for (const auto& b : inst.truth.blocks) want_w.push_back(b.weight);
      std::sort(got_w.begin(), got_w.end());
      std::sort(want_w.begin(), want_w.end());
      for (size_t i = 0; i < got_w.size(); ++i)
        close(got_w[i], want_w[i], 1e-8, "block weight");

      ConverseVerdict conv =
          conditional_converse_check(inst.state, {"A"}, {"B"}, {"C"}, {"D"});
      require(conv.premise, "premise lost on a generated instance");
      below(conv.cmi_a_c_given_bd, 1e-8, "I(A;C|BD)");
      below(conv.cmi_a_b_given_cd, 1e-8, "I(A;B|CD)");
    }
    bool threw = false;
    try {
      certify_conditional_double_markov(
          gen_negative(NegativeKind::thm2_rank_deficient, seed + 7), {"A"},
          {"B"}, {"C"}, {"D"});
    } catch (const FullSupportError&) {
      threw = true;
    }
    require(threw, "rank-deficient negative did not raise");
    return "worst final CMI = " + sci(worst_cmi);
  });

  run(8, "decomposition uniqueness and rank-deficient ambiguity", 0.0, [&] {
    Rng rng(seed + 8);
    const auto& configs = markov_configs();
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      GenSpec spec;
      spec.dim_a = 2;
      spec.dim_c = 2;
      spec.blocks = configs[1 + (trial % (configs.size() - 1))];
      spec.seed = rng();
      MarkovInstance inst = gen_markov_state(spec);
      BlockDecomposition dec1 =
          markov_decompose(inst.state, {{"A"}, {"B"}, {"C"}}, {}, rng());
      BlockDecomposition dec2 =
          markov_decompose(inst.state, {{"A"}, {"B"}, {"C"}}, {}, rng());

      DecompositionMatch m12 = match_decompositions(dec1, dec2);
      worst = std::max(worst, m12.max_residual);
      below(m12.max_residual, 1e-7, "independent-seed match");

      BlockDecomposition variant = dec2;
      std::reverse(variant.blocks.begin(), variant.blocks.end());
      for (auto& b : variant.blocks) {
        const Matrix v = random_unitary(b.d1, rng);
        const Matrix w = random_unitary(b.d2, rng);
        b.isometry = kron2(v, w) * b.isometry;
        const Matrix lift_v = kron2(Matrix::Identity(2, 2), v);
        b.factor_xy1 = DensityOperator::trusted(
            Operator(b.factor_xy1.layout(),
                     lift_v * b.factor_xy1.entries() * lift_v.adjoint()));
        const Matrix lift_w = kron2(Matrix::Identity(2, 2), w);
        b.factor_y2 = DensityOperator::trusted(
            Operator(b.factor_y2.layout(),
                     lift_w * b.factor_y2.entries() * lift_w.adjoint()));
      }
      DecompositionMatch mv = match_decompositions(dec1, variant);
      worst = std::max(worst, mv.max_residual);
      below(mv.max_residual, 1e-7, "permuted/refactored match");
    }

    // Rank-deficient ambiguity: kernel directions reassigned across blocks
    // give two valid decompositions of one state that cannot be matched.
    DensityOperator x1 = random_density(2, 2, seed + 81);
    DensityOperator x2 = random_density(2, 2, seed + 82);
    SystemLayout layout({{"X", 2}, {"Y", 4}});
    auto make_dec = [&](int partner0, int partner1) {
      BlockDecomposition dec;
      dec.layout = layout;
      dec.x_labels = {"X"};
      dec.y_labels = {"Y"};
      dec.y1_label = "y1";
      dec.y2_label = "y2";
      dec.support = Matrix::Identity(4, 4);
      Matrix dead = Matrix::Zero(2, 2);
      dead(0, 0) = 1.0;
      DensityOperator f2 =
          DensityOperator::trusted(Operator(SystemLayout({{"y2", 2}}), dead));
      Matrix iso0 = Matrix::Zero(2, 4), iso1 = Matrix::Zero(2, 4);
      iso0(0, 0) = 1.0;
      iso0(1, partner0) = 1.0;
      iso1(0, 2) = 1.0;
      iso1(1, partner1) = 1.0;
      dec.blocks.push_back(
          {iso0, 1, 2, 0.5,
           DensityOperator::trusted(
               Operator(SystemLayout({{"X", 2}, {"y1", 1}}), x1.entries())),
           f2});
      dec.blocks.push_back(
          {iso1, 1, 2, 0.5,
           DensityOperator::trusted(
               Operator(SystemLayout({{"X", 2}, {"y1", 1}}), x2.entries())),
           f2});
      return dec;
    };
    BlockDecomposition amb1 = make_dec(1, 3);
    BlockDecomposition amb2 = make_dec(3, 1);
    below(frob_dist(build_state(amb1).op(), build_state(amb2).op()), 1e-12,
          "ambiguous pair must describe one state");
    bool threw = false;
    try {
      match_decompositions(amb1, amb2);
    } catch (const MatchError&) {
      threw = true;
    }
    require(threw, "rank-deficient ambiguity did not raise MatchError");
    return "worst match residual = " + sci(worst);
  });

  run(9, "classical oracles against the quantum certifiers", 0.0, [&] {
    Rng rng(seed + 9);
    int positives = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const bool structured = trial % 2 == 0;
      JointPmf pmf =
          structured
              ? conditional_product_pmf(2, 2, 2, (trial % 4 == 0) ? 3 : 2, rng)
              : random_positive_pmf({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}},
                                    rng);
      ClassicalConditionalVerdict cv = conditional_double_markov_check(pmf);
      bool quantum_ok = true;
      try {
        certify_conditional_double_markov(embed_diagonal(pmf), {"A"}, {"B"},
                                          {"C"}, {"D"}, {}, rng());
      } catch (const NotMarkovError&) {
        quantum_ok = false;
      }
      require(cv.holds() == quantum_ok,
              "classical and quantum verdicts disagree");
      if (quantum_ok) ++positives;
    }
    require(positives >= 25, "expected every structured PMF to certify");

    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<int> nblocks(1, 3), size(1, 2);
      const int m = nblocks(rng);
      std::vector<int> b_sizes(m), c_sizes(m);
      for (int j = 0; j < m; ++j) {
        b_sizes[j] = size(rng);
        c_sizes[j] = size(rng);
      }
      JointPmf pmf = labeled_pmf(2, b_sizes, c_sizes, rng);
      ClassicalLabel classical = common_label_partition(pmf);
      CommonLabel quantum = certify_double_markov(embed_diagonal(pmf), {"A"},
                                                  {"B"}, {"C"}, {}, rng());
      auto to_blocks = [](std::vector<std::vector<int>> blocks) {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end());
        return blocks;
      };
      require(to_blocks(classical.partition_b) ==
                  projector_partition(quantum.pvm_b),
              "B partitions disagree");
      require(to_blocks(classical.partition_c) ==
                  projector_partition(quantum.pvm_c),
              "C partitions disagree");
    }
    return "50 conditional + 50 label instances agree";
  });

  run(10, "determinism and bit-exact file round trips", 0.0, [&] {
    Rng rng(seed + 10);
    const fs::path dir = fs::temp_directory_path() /
                         ("qmarkov_acceptance_" + std::to_string(seed));
    fs::create_directories(dir);

    for (int trial = 0; trial < 20; ++trial) {
      GenSpec spec;
      spec.dim_a = 2;
      spec.blocks =
          double_markov_configs()[trial % double_markov_configs().size()];
      spec.seed = rng();

      DoubleMarkovInstance a = gen_double_markov_state(spec);
      DoubleMarkovInstance b = gen_double_markov_state(spec);
      require((a.state.entries() - b.state.entries()).norm() == 0.0,
              "generator is not deterministic");
      const std::uint64_t cert_seed = rng();
      const std::string s1 = summarize(
          certify_double_markov(a.state, {"A"}, {"B"}, {"C"}, {}, cert_seed));
      const std::string s2 = summarize(
          certify_double_markov(b.state, {"A"}, {"B"}, {"C"}, {}, cert_seed));
      require(s1 == s2, "certification reports differ across reruns");

      const std::uint64_t dec_seed = rng();
      const std::string d1 = summarize(
          markov_decompose(a.state, {{"A"}, {"B"}, {"C"}}, {}, dec_seed));
      const std::string d2 = summarize(
          markov_decompose(b.state, {{"A"}, {"B"}, {"C"}}, {}, dec_seed));
      require(d1 == d2, "decomposition reports differ across reruns");

      const fs::path path = dir / ("state_" + std::to_string(trial) + ".qstate");
      write_state(path, a.state);
      DensityOperator back = read_state(path);
      require((back.entries() - a.state.entries()).cwiseAbs().maxCoeff() == 0.0,
              "state round trip is not exact");
      std::ostringstream w1, w2;
      write_state(w1, a.state);
      write_state(w2, back);
      require(w1.str() == w2.str(), "state files differ after round trip");
    }

    for (int trial = 0; trial < 10; ++trial) {
      JointPmf pmf = random_positive_pmf({{"A", 2}, {"B", 3}, {"C", 2}}, rng);
      const fs::path path = dir / ("pmf_" + std::to_string(trial) + ".qpmf");
      write_pmf(path, pmf);
      JointPmf back = read_pmf(path);
      bool same = back.alphabets() == pmf.alphabets();
      for (int i = 0; same && i < pmf.cells(); ++i)
        same = back.probs()[i] == pmf.probs()[i];
      require(same, "pmf round trip is not exact");
      std::ostringstream w1, w2;
      write_pmf(w1, pmf);
      write_pmf(w2, back);
      require(w1.str() == w2.str(), "pmf files differ after round trip");
    }
    fs::remove_all(dir);
    return "20 states + 10 pmfs, all runs bit-identical";
  });

  int passed = 0;
  for (const auto& r : results)
    if (r.pass) ++passed;
  out << passed << "/" << results.size() << " acceptance criteria passed\n";
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  if (results.empty()) return false;
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace qmarkov
