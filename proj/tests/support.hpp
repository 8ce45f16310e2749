#pragma once

// Test helpers: random inputs and direct-enumeration reference
// implementations written without any of the library's kernels, so they can
// serve as independent oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gsavg/blocks.hpp"
#include "gsavg/dataset.hpp"
#include "gsavg/gamma.hpp"
#include "gsavg/matrix.hpp"

namespace testing {

using gsavg::Blocking;
using gsavg::Dataset;
using gsavg::GammaKind;
using gsavg::Matrix;

inline Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = nd(gen);
  return m;
}

inline Dataset random_dataset(std::mt19937_64& gen, std::size_t n1, std::size_t n2, std::size_t dim,
                              double shift = 0.0) {
  Matrix a = random_matrix(gen, n1, dim);
  Matrix b = random_matrix(gen, n2, dim);
  for (auto& v : b.data()) v += shift;
  return Dataset::from_classes(a, b);
}

/// A random partition of {0..dim-1} into blocks of size 1..max_size.
inline Blocking random_blocking(std::mt19937_64& gen, std::size_t dim, std::size_t max_size) {
  std::vector<std::size_t> perm(dim);
  for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t pos = 0;
  while (pos < dim) {
    const std::size_t len = std::min<std::size_t>(dim - pos, 1 + gen() % max_size);
    blocks.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                        perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return Blocking(blocks, dim);
}

/// Closed-form gamma, written independently of the library.
inline double ref_gamma(GammaKind g, double t) {
  switch (g) {
    case GammaKind::exp_saturate: return 1.0 - std::exp(-t);
    case GammaKind::sqrt_half: return std::sqrt(t) / 2.0;
    case GammaKind::log1p: return std::log(1.0 + t);
    case GammaKind::identity: return t;
  }
  return t;
}

/// Block dissimilarity by direct enumeration over blocks and members.
inline double ref_h(const double* u, const double* v, const Blocking& blocking, GammaKind g) {
  double total = 0.0;
  for (const auto& block : blocking.blocks()) {
    double ss = 0.0;
    for (auto k : block) ss += (u[k] - v[k]) * (u[k] - v[k]);
    total += ref_gamma(g, ss / static_cast<double>(block.size()));
  }
  return total / static_cast<double>(blocking.size());
}

/// Mean over all ordered pairs l != k, i.e. the {n(n-1)}^-1 normalisation.
inline double ref_deviation(const Matrix& x, const Blocking& blocking, GammaKind g) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t l = 0; l < x.rows(); ++l)
    for (std::size_t k = 0; k < x.rows(); ++k)
      if (l != k) {
        sum += ref_h(x.row(l).data(), x.row(k).data(), blocking, g);
        ++count;
      }
  return sum / static_cast<double>(count);
}

inline double ref_cross(const double* z, const Matrix& x, const Blocking& blocking, GammaKind g) {
  double sum = 0.0;
  for (std::size_t l = 0; l < x.rows(); ++l) sum += ref_h(z, x.row(l).data(), blocking, g);
  return sum / static_cast<double>(x.rows());
}

inline double ref_discriminant(const double* z, const Matrix& x, const Matrix& y, const Blocking& blocking,
                               GammaKind g, bool scale_adjust = true) {
  const double dx = scale_adjust ? ref_deviation(x, blocking, g) : 0.0;
  const double dy = scale_adjust ? ref_deviation(y, blocking, g) : 0.0;
  return ref_cross(z, y, blocking, g) - dy / 2.0 - ref_cross(z, x, blocking, g) + dx / 2.0;
}

/// Energy estimate by enumeration: ordered within pairs, all cross pairs.
inline double ref_energy(const Matrix& x, const Matrix& y, GammaKind g) {
  const auto pair = [g](std::span<const double> a, std::span<const double> b) {
    double ss = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) ss += (a[k] - b[k]) * (a[k] - b[k]);
    return ref_gamma(g, ss / static_cast<double>(a.size()));
  };
  double cross = 0.0, wx = 0.0, wy = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j) cross += pair(x.row(i), y.row(j));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j)
      if (i != j) wx += pair(x.row(i), x.row(j));
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j)
      if (i != j) wy += pair(y.row(i), y.row(j));
  const double n1 = static_cast<double>(x.rows()), n2 = static_cast<double>(y.rows());
  return 2.0 * cross / (n1 * n2) - wx / (n1 * (n1 - 1.0)) - wy / (n2 * (n2 - 1.0));
}

/// Leave-one-out error by literally refitting on each reduced training set.
inline double ref_loocv(const Dataset& data, const Blocking& blocking, GammaKind g) {
  std::size_t wrong = 0;
  for (std::size_t u = 0; u < data.size(); ++u) {
    Matrix x(0, data.dim()), y(0, data.dim());
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i == u) continue;
      (data.labels[i] == 1 ? x : y).append_row(data.features.row(i));
    }
    const double t = ref_discriminant(data.features.row(u).data(), x, y, blocking, g);
    const int predicted = t > 0.0 ? 1 : 2;
    wrong += predicted != data.labels[u];
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace testing
