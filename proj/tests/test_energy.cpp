#include <doctest.h>

#include <random>

#include "gsavg/energy.hpp"
#include "gsavg/simgen.hpp"
#include "support.hpp"

using namespace gsavg;

TEST_CASE("energy of repeated single points") {
  const Matrix a(3, 2, std::vector<double>{1, 2, 1, 2, 1, 2});
  const Matrix b(2, 2, std::vector<double>{4, 6, 4, 6});
  for (auto g : kAllGammas) {
    CHECK(empirical_energy(a, a, g, 2) == 0.0);
    // Within terms vanish; cross distance is (9 + 16)/2.
    CHECK(empirical_energy(a, b, g, 2) == doctest::Approx(2.0 * testing::ref_gamma(g, 12.5)).epsilon(1e-14));
  }
}

TEST_CASE("energy with identical sample sets follows the U-statistic closed form") {
  // With ys = xs the cross mean includes the n zero self-pairs, so the
  // estimate is -2 W / n where W is the within-sample pair mean.
  std::mt19937_64 gen(4);
  const auto x = testing::random_matrix(gen, 6, 3);
  for (auto g : kAllGammas) {
    double w = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        w += testing::ref_h(x.row(i).data(), x.row(j).data(), Blocking::whole(3), g);
    w /= 15.0;
    CHECK(empirical_energy(x, x, g, 3) == doctest::Approx(-2.0 * w / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("2-vs-2 energy by explicit enumeration") {
  // xs = {0, 1}, ys = {3, 5} in one dimension with identity gamma:
  // cross pairs 9, 25, 4, 16 -> mean 13.5; within-X 1; within-Y 4.
  const Matrix x(2, 1, std::vector<double>{0, 1});
  const Matrix y(2, 1, std::vector<double>{3, 5});
  CHECK(empirical_energy(x, y, GammaKind::identity, 1) == doctest::Approx(2 * 13.5 - 1 - 4));
  CHECK(empirical_energy(x, y, GammaKind::sqrt_half, 1) ==
        doctest::Approx(2 * (1.5 + 2.5 + 1.0 + 2.0) / 4.0 - 0.5 - 1.0));
}

TEST_CASE("energy matches enumeration and is symmetric") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + gen() % 8;
    const auto x = testing::random_matrix(gen, 2 + gen() % 4, dim);
    const auto y = testing::random_matrix(gen, 2 + gen() % 4, dim, 1.5);
    for (auto g : kAllGammas) {
      const double e = empirical_energy(x, y, g, dim);
      CHECK(std::abs(e - testing::ref_energy(x, y, g)) <= 1e-12);
      CHECK(std::abs(e - empirical_energy(y, x, g, dim)) <= 1e-12);
    }
  }
}

TEST_CASE("energy preconditions") {
  const Matrix one(1, 2, 0.0), two(2, 2, 0.0);
  CHECK_THROWS(empirical_energy(one, two, GammaKind::exp_saturate, 2));
  CHECK_THROWS(empirical_energy(two, two, GammaKind::exp_saturate, 3));
}

TEST_CASE("separation report") {
  std::mt19937_64 gen(3);
  const auto d = testing::random_dataset(gen, 5, 4, 6, 1.0);
  const auto blocking = Blocking::consecutive(6, 2);
  const auto rep = separation(d, blocking, GammaKind::exp_saturate);
  REQUIRE(rep.per_block.size() == 3);
  CHECK(rep.n1 == 5);
  CHECK(rep.n2 == 4);
  CHECK(rep.psi_hat == (rep.per_block[0] + rep.per_block[1] + rep.per_block[2]) / 3.0);
  const auto whole = separation(d, Blocking::whole(6), GammaKind::log1p);
  CHECK(whole.psi_hat == whole.per_block[0]);
  CHECK_THROWS(separation(d, Blocking::whole(5), GammaKind::log1p));
}

TEST_CASE("example 1 separation is positive with oracle blocks") {
  int positive = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sim = generate({1, 50, 100, seed});
    positive += separation(sim.data, sim.oracle, GammaKind::exp_saturate).psi_hat > 0.0;
  }
  CHECK(positive == 20);
}

TEST_CASE("separation is centred at zero under the null") {
  std::mt19937_64 gen(2024);
  const int reps = 200;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto d = testing::random_dataset(gen, 10, 10, 8);
    const double v = separation(d, Blocking::consecutive(8, 2), GammaKind::exp_saturate).psi_hat;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1));
  CHECK(std::abs(mean) <= 3.0 * sd / std::sqrt(static_cast<double>(reps)));
}
