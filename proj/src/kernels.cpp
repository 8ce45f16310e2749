#include "gsavg/kernels.hpp"

#include <stdexcept>

#include "gsavg/dissim.hpp"

#ifdef GSAVG_HAVE_OPENMP
#include <omp.h>
#endif

namespace gsavg {

BlockedRows::BlockedRows(const Matrix& data, const Blocking& blocking)
    : BlockedRows(data, BlockLayout(blocking)) {}

BlockedRows::BlockedRows(const Matrix& data, BlockLayout lay) : layout(std::move(lay)) {
  if (data.rows() > 0 && data.cols() != layout.dim()) {
    throw std::invalid_argument("BlockedRows: data dimension does not match blocking");
  }
  rows = Matrix(data.rows(), layout.dim());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto src = data.row(r);
    auto dst = rows.row(r);
    for (std::size_t k = 0; k < layout.order.size(); ++k) dst[k] = src[layout.order[k]];
  }
}

namespace kernels {

int max_threads() {
#ifdef GSAVG_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// Fills out(i, j) = f(i, j) for all i (and j > i when symmetric). Rows are
// independent, so the parallel schedule cannot change any value.
template <class F>
void fill_rows(Matrix& out, bool symmetric, Exec exec, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(out.rows());
  const std::size_t m = out.cols();
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = symmetric ? i + 1 : 0; j < m; ++j) out(i, j) = f(i, j);
  }
  if (symmetric) {
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = i + 1; j < m; ++j) out(j, i) = out(i, j);
  }
}

}  // namespace

Matrix pairwise_block(const BlockedRows& x, GammaKind gamma, Exec exec) {
  Matrix out(x.rows.rows(), x.rows.rows());
  fill_rows(out, true, exec, [&](std::size_t i, std::size_t j) {
    return blocked_pair(x.rows.row(i).data(), x.rows.row(j).data(), x.layout, gamma);
  });
  return out;
}

Matrix cross_block(const BlockedRows& a, const BlockedRows& b, GammaKind gamma, Exec exec) {
  if (a.layout.order != b.layout.order || a.layout.offsets != b.layout.offsets) {
    throw std::invalid_argument("cross_block: inputs use different blockings");
  }
  Matrix out(a.rows.rows(), b.rows.rows());
  fill_rows(out, false, exec, [&](std::size_t i, std::size_t j) {
    return blocked_pair(a.rows.row(i).data(), b.rows.row(j).data(), a.layout, gamma);
  });
  return out;
}

Matrix pairwise_euclid(const Matrix& x, Exec exec) {
  Matrix out(x.rows(), x.rows());
  fill_rows(out, true, exec, [&](std::size_t i, std::size_t j) {
    return euclid_pair(x.row(i).data(), x.row(j).data(), x.cols());
  });
  return out;
}

Matrix cross_euclid(const Matrix& a, const Matrix& b, Exec exec) {
  if (a.cols() != b.cols()) throw std::invalid_argument("cross_euclid: dimension mismatch");
  Matrix out(a.rows(), b.rows());
  fill_rows(out, false, exec, [&](std::size_t i, std::size_t j) {
    return euclid_pair(a.row(i).data(), b.row(j).data(), a.cols());
  });
  return out;
}

Matrix column_gram(const Matrix& columns, Exec exec) {
  const std::size_t n = columns.cols();
  Matrix out(columns.rows(), columns.rows());
  fill_rows(out, true, exec, [&](std::size_t i, std::size_t j) {
    const double* u = columns.row(i).data();
    const double* v = columns.row(j).data();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += u[k] * v[k];
    return acc;
  });
  for (std::size_t i = 0; i < out.rows(); ++i) {
    bool nonzero = false;
    for (double v : columns.row(i)) nonzero = nonzero || v != 0.0;
    out(i, i) = nonzero ? 1.0 : 0.0;
  }
  return out;
}

namespace serial {

Matrix pairwise_block(const Matrix& x, const Blocking& blocking, GammaKind gamma) {
  Matrix out(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j)
      if (i != j) out(i, j) = block_dissimilarity(x.row(std::min(i, j)), x.row(std::max(i, j)), blocking, gamma);
  return out;
}

Matrix cross_block(const Matrix& a, const Matrix& b, const Blocking& blocking, GammaKind gamma) {
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = block_dissimilarity(a.row(i), b.row(j), blocking, gamma);
  return out;
}

Matrix pairwise_euclid(const Matrix& x) {
  Matrix out(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j)
      if (i != j) out(i, j) = scaled_sq_euclidean(x.row(std::min(i, j)), x.row(std::max(i, j)));
  return out;
}

Matrix cross_euclid(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = scaled_sq_euclidean(a.row(i), b.row(j));
  return out;
}

Matrix column_gram(const Matrix& columns) {
  Matrix out(columns.rows(), columns.rows());
  for (std::size_t i = 0; i < columns.rows(); ++i) {
    for (std::size_t j = 0; j < columns.rows(); ++j) {
      if (i == j) continue;
      const auto u = columns.row(std::min(i, j));
      const auto v = columns.row(std::max(i, j));
      double acc = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * v[k];
      out(i, j) = acc;
    }
    bool nonzero = false;
    for (double v : columns.row(i)) nonzero = nonzero || v != 0.0;
    out(i, i) = nonzero ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace serial
}  // namespace kernels
}  // namespace gsavg
