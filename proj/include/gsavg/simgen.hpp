#pragma once

#include <cstdint>
#include <utility>

#include "gsavg/blocks.hpp"
#include "gsavg/dataset.hpp"

namespace gsavg {

/// Simulation settings. Class j rows are drawn from substream
/// derive_seed(seed, j), so the two classes never share random numbers.
struct SimConfig {
  int example = 1;
  std::size_t n_per_class = 50;
  std::size_t dim = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Simulated {
  Dataset data;
  Blocking oracle;
};

/// Zero-mean Gaussians with swapped variance profiles: class 1 has variance 1
/// on the first floor(D/2) coordinates and 0.5 after; class 2 has 0.5 on the
/// first D - floor(D/2) and 1 after. Oracle: consecutive pairs.
Simulated gen_example1(const SimConfig& cfg);

/// Standard normal coordinates with sign coupling inside each complete
/// 4-tuple: class 1 couples positions 3,4 and class 2 positions 1,2.
/// Oracle: consecutive pairs.
Simulated gen_example2(const SimConfig& cfg);

/// As gen_example2 with standard Cauchy base draws.
Simulated gen_example3(const SimConfig& cfg);

Simulated generate(const SimConfig& cfg);

/// sign with sign(0) = +1.
inline double unit_sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace gsavg
