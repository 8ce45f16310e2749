#include "gsavg/simgen.hpp"

#include <stdexcept>
#include <string>

#include "gsavg/rng.hpp"

namespace gsavg {

void SimConfig::validate() const {
  if (example < 1 || example > 3) throw std::invalid_argument("simulate: example must be 1, 2 or 3");
  if (dim < 4) throw std::invalid_argument("simulate: dimension must be at least 4");
  if (n_per_class < 2) throw std::invalid_argument("simulate: need at least 2 rows per class");
}

namespace {

Simulated assemble(const Matrix& c1, const Matrix& c2, std::size_t dim) {
  return {Dataset::from_classes(c1, c2), Blocking::consecutive(dim, 2)};
}

// Sign coupling inside complete 4-tuples: positions (first, first+1) of each
// tuple become (sign(b) a, sign(a) b).
void couple(std::span<double> row, std::size_t first) {
  for (std::size_t t = 0; t + 4 <= row.size(); t += 4) {
    const double a = row[t + first];
    const double b = row[t + first + 1];
    row[t + first] = unit_sign(b) * a;
    row[t + first + 1] = unit_sign(a) * b;
  }
}

template <class Draw>
Simulated coupled_example(const SimConfig& cfg, Draw draw) {
  cfg.validate();
  Matrix cls[2] = {Matrix(cfg.n_per_class, cfg.dim), Matrix(cfg.n_per_class, cfg.dim)};
  for (std::size_t c = 0; c < 2; ++c) {
    Rng rng(derive_seed(cfg.seed, c + 1));
    for (std::size_t r = 0; r < cfg.n_per_class; ++r) {
      auto row = cls[c].row(r);
      for (auto& v : row) v = draw(rng);
      couple(row, c == 0 ? 2 : 0);
    }
  }
  return assemble(cls[0], cls[1], cfg.dim);
}

}  // namespace

Simulated gen_example1(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t half = cfg.dim / 2;
  const double low = std::sqrt(0.5);
  Matrix cls[2] = {Matrix(cfg.n_per_class, cfg.dim), Matrix(cfg.n_per_class, cfg.dim)};
  for (std::size_t c = 0; c < 2; ++c) {
    Rng rng(derive_seed(cfg.seed, c + 1));
    // Class 1: sd 1 on [0, half), sd sqrt(.5) after. Class 2: sd sqrt(.5) on
    // [0, D - half), sd 1 after.
    const std::size_t split = c == 0 ? half : cfg.dim - half;
    for (std::size_t r = 0; r < cfg.n_per_class; ++r) {
      auto row = cls[c].row(r);
      for (std::size_t d = 0; d < cfg.dim; ++d) {
        const bool first_part = d < split;
        const double sd = (c == 0) == first_part ? 1.0 : low;
        row[d] = sd * rng.normal();
      }
    }
  }
  return assemble(cls[0], cls[1], cfg.dim);
}

Simulated gen_example2(const SimConfig& cfg) {
  return coupled_example(cfg, [](Rng& rng) { return rng.normal(); });
}

Simulated gen_example3(const SimConfig& cfg) {
  return coupled_example(cfg, [](Rng& rng) { return rng.cauchy(); });
}

Simulated generate(const SimConfig& cfg) {
  switch (cfg.example) {
    case 1: return gen_example1(cfg);
    case 2: return gen_example2(cfg);
    case 3: return gen_example3(cfg);
    default: throw std::invalid_argument("simulate: example must be 1, 2 or 3");
  }
}

}  // namespace gsavg
