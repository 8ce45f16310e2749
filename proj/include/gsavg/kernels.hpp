#pragma once

// Dense dissimilarity kernels.
//
// Every kernel here has two implementations:
//   * gsavg::kernels::*         - blocked layout, OpenMP over output rows
//                                 (Exec::parallel) or a plain loop
//                                 (Exec::sequential);
//   * gsavg::kernels::serial::* - straightforward reference built on the
//                                 scalar functions of dissim.hpp.
// Each output element is computed by one thread with a fixed operation
// order, so all three paths agree bit for bit. Tests rely on that.

#include "gsavg/blocks.hpp"
#include "gsavg/gamma.hpp"
#include "gsavg/matrix.hpp"

namespace gsavg {

enum class Exec { sequential, parallel };

/// Rows whose columns were reordered block by block.
struct BlockedRows {
  Matrix rows;
  BlockLayout layout;

  BlockedRows() = default;
  BlockedRows(const Matrix& data, const Blocking& blocking);
  BlockedRows(const Matrix& data, BlockLayout layout);
};

namespace kernels {

/// Inner kernel on rows already in block order.
inline double blocked_pair(const double* u, const double* v, const BlockLayout& layout,
                           GammaKind gamma) {
  double total = 0.0;
  const std::size_t nb = layout.blocks();
  for (std::size_t b = 0; b < nb; ++b) {
    double acc = 0.0;
    for (std::size_t k = layout.offsets[b]; k < layout.offsets[b + 1]; ++k) {
      const double d = u[k] - v[k];
      acc += d * d;
    }
    total += apply_gamma(gamma, acc / static_cast<double>(layout.offsets[b + 1] - layout.offsets[b]));
  }
  return total / static_cast<double>(nb);
}

inline double euclid_pair(const double* u, const double* v, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = u[k] - v[k];
    acc += d * d;
  }
  return acc / static_cast<double>(dim);
}

/// Symmetric n x n matrix of block dissimilarities, zero diagonal.
Matrix pairwise_block(const BlockedRows& x, GammaKind gamma, Exec exec = Exec::parallel);
/// |a| x |b| matrix of block dissimilarities. Both inputs share one layout.
Matrix cross_block(const BlockedRows& a, const BlockedRows& b, GammaKind gamma,
                   Exec exec = Exec::parallel);

/// Scaled squared Euclidean distances.
Matrix pairwise_euclid(const Matrix& x, Exec exec = Exec::parallel);
Matrix cross_euclid(const Matrix& a, const Matrix& b, Exec exec = Exec::parallel);

/// Gram matrix of the rows of `columns` (each row a centred, unit-norm
/// feature). Diagonal forced to 1 for nonzero rows, 0 otherwise.
Matrix column_gram(const Matrix& columns, Exec exec = Exec::parallel);

namespace serial {

Matrix pairwise_block(const Matrix& x, const Blocking& blocking, GammaKind gamma);
Matrix cross_block(const Matrix& a, const Matrix& b, const Blocking& blocking, GammaKind gamma);
Matrix pairwise_euclid(const Matrix& x);
Matrix cross_euclid(const Matrix& a, const Matrix& b);
Matrix column_gram(const Matrix& columns);

}  // namespace serial

/// Threads the parallel path will use (1 without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace gsavg
