#pragma once

#include <cstddef>
#include <vector>

#include "gsavg/blocks.hpp"
#include "gsavg/dataset.hpp"
#include "gsavg/gamma.hpp"

namespace gsavg {

/// Energy-distance estimate between two samples of one block:
///   2 * mean_{i,j} g(x_i, y_j) - mean_{i<k} g(x_i, x_k) - mean_{j<l} g(y_j, y_l)
/// with g(a, b) = gamma(||a - b||^2 / block_size). Within-sample means skip
/// the diagonal, so the estimate is unbiased and can be negative.
double empirical_energy(const Matrix& xs, const Matrix& ys, GammaKind gamma,
                        std::size_t block_size);

struct SeparationReport {
  std::vector<double> per_block;
  double psi_hat = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

SeparationReport separation(const Dataset& train, const Blocking& blocking, GammaKind gamma);

}  // namespace gsavg
