#include "gsavg/energy.hpp"

#include <stdexcept>
#include <string>

#include "gsavg/dissim.hpp"

namespace gsavg {

namespace {

double pair_term(std::span<const double> a, std::span<const double> b, GammaKind gamma, double size) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return apply_gamma(gamma, acc / size);
}

double within_mean(const Matrix& s, GammaKind gamma, double size) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.rows(); ++j) sum += pair_term(s.row(i), s.row(j), gamma, size);
  const double n = static_cast<double>(s.rows());
  return sum / (n * (n - 1.0) / 2.0);
}

}  // namespace

double empirical_energy(const Matrix& xs, const Matrix& ys, GammaKind gamma, std::size_t block_size) {
  if (xs.rows() < 2 || ys.rows() < 2) {
    throw std::invalid_argument("empirical_energy: each sample needs at least 2 rows");
  }
  if (block_size == 0 || xs.cols() != block_size || ys.cols() != block_size) {
    throw std::invalid_argument("empirical_energy: rows must have block_size = " + std::to_string(block_size) +
                                " entries");
  }
  require_finite(xs.data(), "empirical_energy");
  require_finite(ys.data(), "empirical_energy");
  const double size = static_cast<double>(block_size);
  double cross = 0.0;
  for (std::size_t i = 0; i < xs.rows(); ++i)
    for (std::size_t j = 0; j < ys.rows(); ++j) cross += pair_term(xs.row(i), ys.row(j), gamma, size);
  cross /= static_cast<double>(xs.rows()) * static_cast<double>(ys.rows());
  return 2.0 * cross - within_mean(xs, gamma, size) - within_mean(ys, gamma, size);
}

SeparationReport separation(const Dataset& train, const Blocking& blocking, GammaKind gamma) {
  train.validate(true);
  if (blocking.dim() != train.dim()) throw std::invalid_argument("separation: blocking dimension mismatch");
  const Matrix x = train.class_rows(1);
  const Matrix y = train.class_rows(2);
  SeparationReport rep;
  rep.n1 = x.rows();
  rep.n2 = y.rows();
  auto restrict = [](const Matrix& m, const std::vector<std::size_t>& cols) {
    Matrix out(m.rows(), cols.size());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t k = 0; k < cols.size(); ++k) out(r, k) = m(r, cols[k]);
    return out;
  };
  double sum = 0.0;
  for (std::size_t b = 0; b < blocking.size(); ++b) {
    const auto& cols = blocking.block(b);
    const double e = empirical_energy(restrict(x, cols), restrict(y, cols), gamma, cols.size());
    rep.per_block.push_back(e);
    sum += e;
  }
  rep.psi_hat = sum / static_cast<double>(blocking.size());
  return rep;
}

}  // namespace gsavg
