#pragma once

// Batch similarity kernels. Every kernel comes in a serial reference form and
// an OpenMP form; both compute each output slot with the same arithmetic, so
// their results are bitwise identical. The unsuffixed entry points pick the
// parallel form once the batch is large enough to pay for the thread team.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace convo::kernels {

inline constexpr std::size_t kParallelMinRows = 512;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

/// Cosine of two dense vectors; 0 when either has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// `matrix` holds out.size() rows of query.size() values each, row-major;
/// `row_norms` their precomputed Euclidean norms.
void cosine_rows_serial(std::span<const double> query, std::span<const double> matrix,
                        std::span<const double> row_norms, std::span<double> out);
void cosine_rows_parallel(std::span<const double> query, std::span<const double> matrix,
                          std::span<const double> row_norms, std::span<double> out);
void cosine_rows(std::span<const double> query, std::span<const double> matrix,
                 std::span<const double> row_norms, std::span<double> out);

/// Sparse vector with strictly increasing term ids.
struct SparseVector {
  std::vector<std::uint32_t> terms;
  std::vector<double> weights;
  double norm = 0.0;
};

double sparse_dot(const SparseVector& a, const SparseVector& b);

/// `query_norm` may exceed the norm of `query` itself (query terms outside
/// the vocabulary still count toward it).
void sparse_cosine_serial(const SparseVector& query, double query_norm,
                          std::span<const SparseVector> docs, std::span<double> out);
void sparse_cosine_parallel(const SparseVector& query, double query_norm,
                            std::span<const SparseVector> docs, std::span<double> out);
void sparse_cosine(const SparseVector& query, double query_norm,
                   std::span<const SparseVector> docs, std::span<double> out);

bool parallel_enabled();

}  // namespace convo::kernels
