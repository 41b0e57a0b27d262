// Serial reference vs OpenMP kernels. RCXI_THREADS caps the parallel side.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "rcxi/kernels.hpp"
#include "rcxi/parallel.hpp"
#include "rcxi/rng.hpp"

namespace {

using namespace rcxi;

Matrix points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Matrix m(n, d);
  Rng rng(seed, streams::synthetic);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

template <bool Parallel>
void pairwise(benchmark::State& st) {
  const Matrix p = points(static_cast<std::size_t>(st.range(0)), 16, 1);
  for (auto _ : st) {
    Matrix d = Parallel ? kernels::parallel::pairwise_distances(p) : kernels::serial::pairwise_distances(p);
    benchmark::DoNotOptimize(d.data().data());
  }
}

template <bool Parallel>
void permutations(benchmark::State& st) {
  const Matrix d = kernels::serial::pairwise_distances(points(static_cast<std::size_t>(st.range(0)), 16, 2));
  const std::size_t half = d.rows() / 2;
  for (auto _ : st) {
    auto v = Parallel ? kernels::parallel::permutation_statistics(d, half, 100, 0)
                      : kernels::serial::permutation_statistics(d, half, 100, 0);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void covariance(benchmark::State& st) {
  const Matrix p = points(static_cast<std::size_t>(st.range(0)), 64, 3);
  for (auto _ : st) {
    Matrix c = Parallel ? kernels::parallel::covariance(p) : kernels::serial::covariance(p);
    benchmark::DoNotOptimize(c.data().data());
  }
}

template <bool Parallel>
void silhouette(benchmark::State& st) {
  const Matrix p = points(static_cast<std::size_t>(st.range(0)), 8, 4);
  std::vector<std::size_t> labels(p.rows());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 4;
  for (auto _ : st) {
    auto v = Parallel ? kernels::parallel::silhouette_values(p, labels, 4)
                      : kernels::serial::silhouette_values(p, labels, 4);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void nearest(benchmark::State& st) {
  const Matrix table = points(static_cast<std::size_t>(st.range(0)), 64, 5);
  std::vector<std::uint64_t> keys(table.rows());
  std::iota(keys.begin(), keys.end(), 0);
  const Matrix q = points(1, 64, 6);
  for (auto _ : st) {
    auto hit = Parallel ? kernels::parallel::nearest_row(q.row(0), table, keys)
                        : kernels::serial::nearest_row(q.row(0), table, keys);
    benchmark::DoNotOptimize(hit);
  }
}

template <bool Parallel>
void assign(benchmark::State& st) {
  const Matrix p = points(static_cast<std::size_t>(st.range(0)), 16, 7);
  const Matrix c = points(8, 16, 8);
  for (auto _ : st) {
    auto v = Parallel ? kernels::parallel::assign_to_centroids(p, c) : kernels::serial::assign_to_centroids(p, c);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK(pairwise<false>)->Name("pairwise_distances/serial")->Arg(500)->Arg(1000);
BENCHMARK(pairwise<true>)->Name("pairwise_distances/parallel")->Arg(500)->Arg(1000);
BENCHMARK(permutations<false>)->Name("permutation_statistics/serial")->Arg(500)->Arg(1000);
BENCHMARK(permutations<true>)->Name("permutation_statistics/parallel")->Arg(500)->Arg(1000);
BENCHMARK(covariance<false>)->Name("covariance/serial")->Arg(10000)->Arg(100000);
BENCHMARK(covariance<true>)->Name("covariance/parallel")->Arg(10000)->Arg(100000);
BENCHMARK(silhouette<false>)->Name("silhouette_values/serial")->Arg(1000)->Arg(2000);
BENCHMARK(silhouette<true>)->Name("silhouette_values/parallel")->Arg(1000)->Arg(2000);
BENCHMARK(nearest<false>)->Name("nearest_row/serial")->Arg(1000)->Arg(50000);
BENCHMARK(nearest<true>)->Name("nearest_row/parallel")->Arg(1000)->Arg(50000);
BENCHMARK(assign<false>)->Name("assign_to_centroids/serial")->Arg(20000)->Arg(100000);
BENCHMARK(assign<true>)->Name("assign_to_centroids/parallel")->Arg(20000)->Arg(100000);

int main(int argc, char** argv) {
  rcxi::set_thread_count(rcxi::resolve_thread_count(std::nullopt));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
