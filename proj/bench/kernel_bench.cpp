// Serial reference kernels against their OpenMP counterparts over register sizes.
#include "lose/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace k = lose::kernels;

namespace {

std::vector<k::amp_t> random_state(int qubits) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::vector<k::amp_t> v(std::size_t{1} << qubits);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v;
}

// Hadamard (x) Hadamard on two qubits near the middle of the register.
std::vector<k::amp_t> two_qubit_matrix() {
  const double h = 0.5;
  return {h, h, h, h, h, -h, h, -h, h, h, -h, -h, h, -h, -h, h};
}

template <auto Kernel>
void BM_apply(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  auto v = random_state(n);
  const auto m = two_qubit_matrix();
  const std::vector<unsigned> bits{static_cast<unsigned>(n / 2), static_cast<unsigned>(n / 2 - 1)};
  for (auto _ : st) {
    Kernel(v, bits, m);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(v.size()));
}

template <auto Kernel>
void BM_probabilities(benchmark::State& st) {
  const auto v = random_state(static_cast<int>(st.range(0)));
  std::vector<double> out(v.size());
  for (auto _ : st) {
    Kernel(v, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(v.size()));
}

}  // namespace

BENCHMARK(BM_apply<k::apply_matrix_serial>)->Name("apply_matrix/serial")->DenseRange(10, 22, 4);
BENCHMARK(BM_apply<k::apply_matrix_parallel>)->Name("apply_matrix/parallel")->DenseRange(10, 22, 4);
BENCHMARK(BM_probabilities<k::probabilities_serial>)->Name("probabilities/serial")->DenseRange(10, 22, 4);
BENCHMARK(BM_probabilities<k::probabilities_parallel>)->Name("probabilities/parallel")->DenseRange(10, 22, 4);

BENCHMARK_MAIN();
