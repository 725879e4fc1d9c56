// Serial reference vs OpenMP kernels on synthetic batches.

#include "convo/kernels.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace {

using convo::kernels::SparseVector;

struct DenseBatch {
  std::vector<double> query;
  std::vector<double> matrix;
  std::vector<double> norms;
  std::vector<double> out;
};

DenseBatch make_dense(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  DenseBatch b;
  for (std::size_t i = 0; i < dim; ++i) b.query.push_back(n(rng));
  for (std::size_t r = 0; r < rows; ++r) {
    double sq = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double v = n(rng);
      b.matrix.push_back(v);
      sq += v * v;
    }
    b.norms.push_back(std::sqrt(sq));
  }
  b.out.resize(rows);
  return b;
}

std::vector<SparseVector> make_docs(std::size_t count, std::uint32_t vocab, std::size_t terms) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> term(0, vocab - 1);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  std::vector<SparseVector> docs(count);
  for (auto& d : docs) {
    std::vector<std::uint32_t> ids;
    for (std::size_t i = 0; i < terms; ++i) ids.push_back(term(rng));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    double sq = 0;
    for (auto id : ids) {
      const double w = weight(rng);
      d.terms.push_back(id);
      d.weights.push_back(w);
      sq += w * w;
    }
    d.norm = std::sqrt(sq);
  }
  return docs;
}

void BM_CosineRowsSerial(benchmark::State& state) {
  auto b = make_dense(static_cast<std::size_t>(state.range(0)), 300);
  for (auto _ : state) {
    convo::kernels::cosine_rows_serial(b.query, b.matrix, b.norms, b.out);
    benchmark::DoNotOptimize(b.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CosineRowsParallel(benchmark::State& state) {
  auto b = make_dense(static_cast<std::size_t>(state.range(0)), 300);
  for (auto _ : state) {
    convo::kernels::cosine_rows_parallel(b.query, b.matrix, b.norms, b.out);
    benchmark::DoNotOptimize(b.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SparseCosineSerial(benchmark::State& state) {
  const auto docs = make_docs(static_cast<std::size_t>(state.range(0)), 20000, 24);
  const auto query = make_docs(1, 20000, 6).front();
  std::vector<double> out(docs.size());
  for (auto _ : state) {
    convo::kernels::sparse_cosine_serial(query, query.norm, docs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SparseCosineParallel(benchmark::State& state) {
  const auto docs = make_docs(static_cast<std::size_t>(state.range(0)), 20000, 24);
  const auto query = make_docs(1, 20000, 6).front();
  std::vector<double> out(docs.size());
  for (auto _ : state) {
    convo::kernels::sparse_cosine_parallel(query, query.norm, docs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_CosineRowsSerial)->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK(BM_CosineRowsParallel)->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK(BM_SparseCosineSerial)->RangeMultiplier(8)->Range(64, 262144);
BENCHMARK(BM_SparseCosineParallel)->RangeMultiplier(8)->Range(64, 262144);

BENCHMARK_MAIN();
