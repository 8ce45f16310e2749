#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gsavg/block_estimation.hpp"
#include "gsavg/rng.hpp"
#include "gsavg/simgen.hpp"

using namespace gsavg;

namespace {

struct ColumnStats {
  double mean = 0.0, var = 0.0, median = 0.0;
};

ColumnStats column_stats(const Matrix& m, std::size_t col) {
  std::vector<double> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, col);
  ColumnStats s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.var += (x - s.mean) * (x - s.mean);
  s.var /= static_cast<double>(v.size() - 1);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  s.median = v[v.size() / 2];
  return s;
}

double same_sign_fraction(const Matrix& m, std::size_t a, std::size_t b) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) same += unit_sign(m(i, a)) == unit_sign(m(i, b));
  return static_cast<double>(same) / static_cast<double>(m.rows());
}

}  // namespace

TEST_CASE("rng helpers") {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("generators are deterministic and validate their config") {
  for (int ex : {1, 2, 3}) {
    const auto a = generate({ex, 7, 13, 42});
    const auto b = generate({ex, 7, 13, 42});
    CHECK(a.data.features == b.data.features);
    CHECK(a.data.labels == b.data.labels);
    CHECK(a.oracle == Blocking::consecutive(13, 2));
    CHECK(generate({ex, 7, 13, 43}).data.features != a.data.features);
  }
  CHECK_THROWS(generate({4, 5, 10, 0}));
  CHECK_THROWS(generate({1, 5, 3, 0}));
  CHECK_THROWS(generate({2, 1, 10, 0}));
}

TEST_CASE("example 1 marginals") {
  const auto sim = gen_example1({1, 10000, 5, 1});
  const auto x = sim.data.class_rows(1), y = sim.data.class_rows(2);
  // D = 5: class 1 variances (1, 1, .5, .5, .5); class 2 (.5, .5, .5, 1, 1).
  const double v1[] = {1, 1, 0.5, 0.5, 0.5};
  const double v2[] = {0.5, 0.5, 0.5, 1, 1};
  for (std::size_t k = 0; k < 5; ++k) {
    const auto sx = column_stats(x, k), sy = column_stats(y, k);
    CHECK(std::abs(sx.mean) <= 0.05);
    CHECK(std::abs(sy.mean) <= 0.05);
    CHECK(std::abs(sx.var - v1[k]) <= 0.05);
    CHECK(std::abs(sy.var - v2[k]) <= 0.05);
  }
  // D = 4 matches the displayed covariance pattern.
  const auto four = gen_example1({1, 10000, 4, 2});
  CHECK(std::abs(column_stats(four.data.class_rows(1), 1).var - 1.0) <= 0.05);
  CHECK(std::abs(column_stats(four.data.class_rows(1), 2).var - 0.5) <= 0.05);
  CHECK(std::abs(column_stats(four.data.class_rows(2), 1).var - 0.5) <= 0.05);
  CHECK(std::abs(column_stats(four.data.class_rows(2), 2).var - 1.0) <= 0.05);
}

TEST_CASE("example 2 marginals and sign coupling") {
  const auto sim = gen_example2({2, 10000, 10, 3});
  const auto x = sim.data.class_rows(1), y = sim.data.class_rows(2);
  for (std::size_t k = 0; k < 10; ++k) {
    for (const Matrix* m : {&x, &y}) {
      const auto s = column_stats(*m, k);
      CHECK(std::abs(s.mean) <= 0.05);
      CHECK(std::abs(s.var - 1.0) <= 0.05);
    }
  }
  // Class 1 couples positions 3,4 (and 7,8); class 2 couples 1,2 (and 5,6).
  CHECK(same_sign_fraction(x, 2, 3) == 1.0);
  CHECK(same_sign_fraction(x, 6, 7) == 1.0);
  CHECK(same_sign_fraction(y, 0, 1) == 1.0);
  CHECK(same_sign_fraction(y, 4, 5) == 1.0);
  CHECK(std::abs(same_sign_fraction(x, 0, 1) - 0.5) <= 0.02);
  CHECK(std::abs(same_sign_fraction(y, 2, 3) - 0.5) <= 0.02);
  // Trailing partial tuple (positions 9, 10) stays uncoupled.
  CHECK(std::abs(same_sign_fraction(x, 8, 9) - 0.5) <= 0.02);
  CHECK(std::abs(same_sign_fraction(y, 8, 9) - 0.5) <= 0.02);
}

TEST_CASE("example 3 medians, coupling and spearman structure") {
  const auto sim = gen_example3({3, 10000, 8, 4});
  const auto x = sim.data.class_rows(1), y = sim.data.class_rows(2);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(std::abs(column_stats(x, k).median) <= 0.1);
    CHECK(std::abs(column_stats(y, k).median) <= 0.1);
  }
  CHECK(same_sign_fraction(x, 2, 3) == 1.0);
  CHECK(same_sign_fraction(y, 0, 1) == 1.0);
  CHECK(std::abs(same_sign_fraction(x, 0, 1) - 0.5) <= 0.02);

  const Dataset class1 = Dataset::from_classes(x, gen_example3({3, 10000, 8, 5}).data.class_rows(1));
  const auto fd = correlation_dissimilarity(class1, CorrelationMethod::spearman);
  CHECK(fd.values(2, 3) < fd.values(0, 2) - 0.2);
}

TEST_CASE("example 1 classes share location") {
  const auto sim = gen_example1({1, 2000, 50, 8});
  const auto x = sim.data.class_rows(1), y = sim.data.class_rows(2);
  double diff = 0.0;
  for (std::size_t k = 0; k < 50; ++k) {
    const double d = column_stats(x, k).mean - column_stats(y, k).mean;
    diff += d * d;
  }
  CHECK(diff / 50.0 < 0.01);
}
