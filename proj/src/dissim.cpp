#include "gsavg/dissim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsavg {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (std::isnan(x)) throw std::invalid_argument(std::string(what) + ": NaN entry");
    if (std::isinf(x)) throw std::invalid_argument(std::string(what) + ": infinite entry");
  }
}

double block_dissimilarity(std::span<const double> u, std::span<const double> v,
                           const Blocking& blocking, GammaKind gamma) {
  if (u.size() != blocking.dim() || v.size() != blocking.dim()) {
    throw std::invalid_argument("block_dissimilarity: vector length " + std::to_string(u.size()) +
                                "/" + std::to_string(v.size()) + " does not match blocking dimension " +
                                std::to_string(blocking.dim()));
  }
  require_finite(u, "block_dissimilarity");
  require_finite(v, "block_dissimilarity");
  double total = 0.0;
  for (const auto& block : blocking.blocks()) {
    double acc = 0.0;
    for (auto idx : block) {
      const double d = u[idx] - v[idx];
      acc += d * d;
    }
    total += apply_gamma(gamma, acc / static_cast<double>(block.size()));
  }
  return total / static_cast<double>(blocking.size());
}

double scaled_sq_euclidean(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.empty()) {
    throw std::invalid_argument("scaled_sq_euclidean: length mismatch");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double d = u[k] - v[k];
    acc += d * d;
  }
  return acc / static_cast<double>(u.size());
}

double within_class_deviation(const Matrix& samples, const Blocking& blocking, GammaKind gamma) {
  const std::size_t n = samples.rows();
  if (n < 2) throw std::invalid_argument("within_class_deviation: need at least 2 samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sum += block_dissimilarity(samples.row(i), samples.row(j), blocking, gamma);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double cross_mean_dissimilarity(std::span<const double> z, const Matrix& samples,
                                const Blocking& blocking, GammaKind gamma) {
  if (samples.rows() == 0) throw std::invalid_argument("cross_mean_dissimilarity: no samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.rows(); ++i)
    sum += block_dissimilarity(z, samples.row(i), blocking, gamma);
  return sum / static_cast<double>(samples.rows());
}

double upper_triangle_mean(const Matrix& pairs) {
  const std::size_t n = pairs.rows();
  if (n < 2) throw std::invalid_argument("upper_triangle_mean: need at least 2 rows");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sum += pairs(i, j);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double upper_triangle_mean(const Matrix& pairs, std::span<const std::size_t> members) {
  const std::size_t n = members.size();
  if (n < 2) throw std::invalid_argument("upper_triangle_mean: need at least 2 members");
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) sum += pairs(members[a], members[b]);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

}  // namespace gsavg
