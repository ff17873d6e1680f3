#include <benchmark/benchmark.h>

#include "qmarkov/double_markov.hpp"
#include "qmarkov/entropy.hpp"
#include "qmarkov/instance_gen.hpp"
#include "qmarkov/markov_structure.hpp"
#include "qmarkov/tensor.hpp"

using namespace qmarkov;

namespace {

DensityOperator random_tripartite(int d, std::uint64_t seed) {
  Rng rng(seed);
  SystemLayout layout({{"A", d}, {"B", d}, {"C", d}});
  const int dim = layout.total_dim();
  Matrix g = gaussian_matrix(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::trusted(Operator(layout, std::move(rho)));
}

}  // namespace

static void BM_kron(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  Operator a(SystemLayout({{"A", d}}), gaussian_matrix(d, d, rng));
  Operator b(SystemLayout({{"B", d}}), gaussian_matrix(d, d, rng));
  for (auto _ : state) {
    Operator out = kron({a, b});
    benchmark::DoNotOptimize(out.entries().data());
  }
}
BENCHMARK(BM_kron)->Arg(4)->Arg(8)->Arg(16);

static void BM_partial_trace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  DensityOperator rho = random_tripartite(d, 2);
  for (auto _ : state) {
    Operator out = partial_trace(rho.op(), {"A", "C"});
    benchmark::DoNotOptimize(out.entries().data());
  }
}
BENCHMARK(BM_partial_trace)->Arg(2)->Arg(3)->Arg(4);

static void BM_cmi(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  DensityOperator rho = random_tripartite(d, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmi(rho, {"A"}, {"C"}, {"B"}));
  }
}
BENCHMARK(BM_cmi)->Arg(2)->Arg(3)->Arg(4);

static void BM_markov_decompose(benchmark::State& state) {
  GenSpec spec;
  spec.dim_a = 2;
  spec.dim_c = 2;
  spec.blocks = {{1, 2, 0.5}, {1, 1, 0.5}};
  spec.seed = 7;
  MarkovInstance inst = gen_markov_state(spec);
  const MarkovChainSpec chain{{"A"}, {"B"}, {"C"}};
  for (auto _ : state) {
    BlockDecomposition dec = markov_decompose(inst.state, chain, {}, 11);
    benchmark::DoNotOptimize(dec.block_count());
  }
}
BENCHMARK(BM_markov_decompose);

static void BM_certify_double_markov(benchmark::State& state) {
  GenSpec spec;
  spec.dim_a = 2;
  spec.blocks = {{2, 1, 0.5}, {1, 2, 0.5}};
  spec.seed = 9;
  DoubleMarkovInstance inst = gen_double_markov_state(spec);
  for (auto _ : state) {
    CommonLabel cert =
        certify_double_markov(inst.state, {"A"}, {"B"}, {"C"}, {}, 13);
    benchmark::DoNotOptimize(cert.label_count());
  }
}
BENCHMARK(BM_certify_double_markov);

BENCHMARK_MAIN();
