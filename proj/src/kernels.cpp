#include "convo/kernels.hpp"

#include <cassert>
#include <cmath>

namespace convo::kernels {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

namespace {

inline double row_cosine(std::span<const double> query, double query_norm,
                         std::span<const double> matrix, std::span<const double> row_norms,
                         std::size_t row) {
  const std::size_t dim = query.size();
  if (query_norm == 0.0 || row_norms[row] == 0.0) return 0.0;
  return dot(query, matrix.subspan(row * dim, dim)) / (query_norm * row_norms[row]);
}

inline double doc_cosine(const SparseVector& query, double query_norm, const SparseVector& doc) {
  if (query_norm == 0.0 || doc.norm == 0.0) return 0.0;
  return sparse_dot(query, doc) / (query_norm * doc.norm);
}

}  // namespace

void cosine_rows_serial(std::span<const double> query, std::span<const double> matrix,
                        std::span<const double> row_norms, std::span<double> out) {
  assert(matrix.size() == query.size() * out.size());
  const double qn = norm(query);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = row_cosine(query, qn, matrix, row_norms, r);
}

void cosine_rows_parallel(std::span<const double> query, std::span<const double> matrix,
                          std::span<const double> row_norms, std::span<double> out) {
  assert(matrix.size() == query.size() * out.size());
  const double qn = norm(query);
  const auto rows = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rows; ++r) {
    out[static_cast<std::size_t>(r)] =
        row_cosine(query, qn, matrix, row_norms, static_cast<std::size_t>(r));
  }
}

void cosine_rows(std::span<const double> query, std::span<const double> matrix,
                 std::span<const double> row_norms, std::span<double> out) {
  if (out.size() >= kParallelMinRows) {
    cosine_rows_parallel(query, matrix, row_norms, out);
  } else {
    cosine_rows_serial(query, matrix, row_norms, out);
  }
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    if (a.terms[i] < b.terms[j]) {
      ++i;
    } else if (b.terms[j] < a.terms[i]) {
      ++j;
    } else {
      s += a.weights[i] * b.weights[j];
      ++i;
      ++j;
    }
  }
  return s;
}

void sparse_cosine_serial(const SparseVector& query, double query_norm,
                          std::span<const SparseVector> docs, std::span<double> out) {
  assert(docs.size() == out.size());
  for (std::size_t d = 0; d < docs.size(); ++d) out[d] = doc_cosine(query, query_norm, docs[d]);
}

void sparse_cosine_parallel(const SparseVector& query, double query_norm,
                            std::span<const SparseVector> docs, std::span<double> out) {
  assert(docs.size() == out.size());
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t d = 0; d < n; ++d) {
    const auto i = static_cast<std::size_t>(d);
    out[i] = doc_cosine(query, query_norm, docs[i]);
  }
}

void sparse_cosine(const SparseVector& query, double query_norm,
                   std::span<const SparseVector> docs, std::span<double> out) {
  if (docs.size() >= kParallelMinRows) {
    sparse_cosine_parallel(query, query_norm, docs, out);
  } else {
    sparse_cosine_serial(query, query_norm, docs, out);
  }
}

bool parallel_enabled() {
#ifdef CONVO_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace convo::kernels
