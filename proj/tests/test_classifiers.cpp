#include <doctest.h>

#include <random>

#include "gsavg/classifiers.hpp"
#include "support.hpp"

using namespace gsavg;

namespace {

Dataset swap_classes(const Dataset& d) {
  Dataset s = d;
  for (auto& l : s.labels) l = 3 - l;
  std::swap(s.label_names[0], s.label_names[1]);
  return s;
}

}  // namespace

TEST_CASE("tie rule sends exact zero to class 2") {
  CHECK(Decision::from_score(0.0).label == 2);
  CHECK(Decision::from_score(0.0).tie);
  CHECK(Decision::from_score(-0.0).label == 2);
  CHECK(Decision::from_score(1e-300).label == 1);
  CHECK_FALSE(Decision::from_score(1e-300).tie);
  CHECK(Decision::from_score(-1e-300).label == 2);
  CHECK_THROWS(Decision::from_score(std::nan("")));
}

TEST_CASE("AVG worked example") {
  // Class 1 at {0, 2}, class 2 at {10, 12} in one dimension; z = 1.
  // Means of squared distances: class 1 -> 1, class 2 -> (81 + 121)/2 = 101.
  const Dataset d = Dataset::from_classes(Matrix(2, 1, std::vector<double>{0, 2}),
                                          Matrix(2, 1, std::vector<double>{10, 12}));
  const auto avg = fit(d, Variant::avg);
  const std::vector<double> z{1.0};
  CHECK(avg.discriminant(z) == doctest::Approx(100.0));
  CHECK(avg.classify(z).label == 1);
  // SAVG subtracts half of each within-class mean (4 for both classes).
  const auto savg = fit(d, Variant::savg);
  CHECK(savg.dev1() == doctest::Approx(4.0));
  CHECK(savg.discriminant(z) == doctest::Approx(100.0));

  // Two-dimensional AVG example with T = 2: X = {(0,0),(2,0)}, Y = {(0,2),(2,2)}, z = (1,0.5).
  const Dataset d2 = Dataset::from_classes(Matrix(2, 2, std::vector<double>{0, 0, 2, 0}),
                                           Matrix(2, 2, std::vector<double>{0, 2, 2, 2}));
  const std::vector<double> z2{1.0, 0.5};
  // Scaled distances: to X 0.625 each; to Y (1 + 2.25)/2 = 1.625 each -> T = 1.
  CHECK(fit(d2, Variant::avg).discriminant(z2) == doctest::Approx(1.0));
  const std::vector<double> z3{1.0, 0.0};
  // To X: 0.5 each; to Y: (1 + 4)/2 = 2.5 each -> T = 2.
  CHECK(fit(d2, Variant::avg).discriminant(z3) == doctest::Approx(2.0));
}

TEST_CASE("fitted model matches enumeration") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 2 + gen() % 8;
    const auto d = testing::random_dataset(gen, 2 + gen() % 5, 2 + gen() % 5, dim, 0.3);
    const auto blocking = testing::random_blocking(gen, dim, 3);
    const auto z = testing::random_matrix(gen, 3, dim);
    const auto x = d.class_rows(1), y = d.class_rows(2);
    for (auto g : kAllGammas) {
      const auto model = fit(d, Variant::gsavg, blocking, g);
      CHECK(std::abs(model.dev1() - testing::ref_deviation(x, blocking, g)) <= 1e-12);
      for (std::size_t r = 0; r < z.rows(); ++r) {
        const double ref = testing::ref_discriminant(z.row(r).data(), x, y, blocking, g);
        CHECK(std::abs(model.discriminant(z.row(r)) - ref) <= 1e-12);
      }
      const auto batch = model.discriminants(z, Exec::parallel);
      const auto seq = model.discriminants(z, Exec::sequential);
      for (std::size_t r = 0; r < z.rows(); ++r) {
        CHECK(batch[r] == model.discriminant(z.row(r)));
        CHECK(seq[r] == batch[r]);
      }
    }
    const auto savg = fit(d, Variant::savg);
    const auto avg = fit(d, Variant::avg);
    const auto ones = Blocking::singletons(dim);
    for (std::size_t r = 0; r < z.rows(); ++r) {
      CHECK(std::abs(savg.discriminant(z.row(r)) -
                     testing::ref_discriminant(z.row(r).data(), x, y, ones, GammaKind::identity)) <= 1e-12);
      CHECK(std::abs(avg.discriminant(z.row(r)) -
                     testing::ref_discriminant(z.row(r).data(), x, y, ones, GammaKind::identity, false)) <= 1e-12);
    }
  }
}

TEST_CASE("class swap negates every discriminant") {
  std::mt19937_64 gen(17);
  const auto d = testing::random_dataset(gen, 6, 4, 12, 0.2);
  const auto swapped = swap_classes(d);
  const auto blocking = testing::random_blocking(gen, 12, 3);
  const auto z = testing::random_matrix(gen, 10, 12);
  for (auto v : {Variant::avg, Variant::savg, Variant::gsavg}) {
    for (auto g : kAllGammas) {
      const auto a = fit(d, v, blocking, g);
      const auto b = fit(swapped, v, blocking, g);
      for (std::size_t r = 0; r < z.rows(); ++r) {
        const double ta = a.discriminant(z.row(r)), tb = b.discriminant(z.row(r));
        CHECK(ta == -tb);
        if (ta != 0.0) CHECK(a.classify(z.row(r)).label == 3 - b.classify(z.row(r)).label);
      }
    }
  }
}

TEST_CASE("translation leaves every discriminant unchanged") {
  std::mt19937_64 gen(23);
  const std::size_t dim = 9;
  const auto d = testing::random_dataset(gen, 5, 6, dim, 0.4);
  const auto z = testing::random_matrix(gen, 4, dim);
  const auto c = testing::random_matrix(gen, 1, dim, 3.0);
  Dataset shifted = d;
  Matrix zs = z;
  for (std::size_t i = 0; i < shifted.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) shifted.features(i, k) += c(0, k);
  for (std::size_t i = 0; i < zs.rows(); ++i)
    for (std::size_t k = 0; k < dim; ++k) zs(i, k) += c(0, k);
  const auto blocking = Blocking::consecutive(dim, 2);
  for (auto v : {Variant::avg, Variant::savg, Variant::gsavg}) {
    const auto a = fit(d, v, blocking, GammaKind::exp_saturate);
    const auto b = fit(shifted, v, blocking, GammaKind::exp_saturate);
    for (std::size_t r = 0; r < z.rows(); ++r) CHECK(std::abs(a.discriminant(z.row(r)) - b.discriminant(zs.row(r))) <= 1e-9);
  }
}

TEST_CASE("gsavg with identity gamma and singletons reduces to savg") {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 5 + gen() % 46;
    const auto d = testing::random_dataset(gen, 2 + gen() % 10, 2 + gen() % 10, dim);
    const auto z = testing::random_matrix(gen, 5, dim);
    const auto g = fit(d, Variant::gsavg, Blocking::singletons(dim), GammaKind::identity);
    const auto s = fit(d, Variant::savg);
    for (std::size_t r = 0; r < z.rows(); ++r) {
      CHECK(std::abs(g.discriminant(z.row(r)) - s.discriminant(z.row(r))) <= 1e-12);
      CHECK(g.classify(z.row(r)).label == s.classify(z.row(r)).label);
    }
  }
}

TEST_CASE("bounded gamma keeps |T| below one") {
  std::mt19937_64 gen(5);
  const auto d = testing::random_dataset(gen, 4, 4, 6, 50.0);
  const auto model = fit(d, Variant::gsavg, Blocking::whole(6), GammaKind::exp_saturate);
  const auto z = testing::random_matrix(gen, 20, 6, 100.0);
  for (std::size_t r = 0; r < z.rows(); ++r) CHECK(std::abs(model.discriminant(z.row(r))) < 1.0);
}

TEST_CASE("fit and predict errors") {
  std::mt19937_64 gen(2);
  const auto small = testing::random_dataset(gen, 1, 3, 4);
  CHECK_THROWS(fit(small, Variant::savg));
  const auto d = testing::random_dataset(gen, 3, 3, 4);
  CHECK_THROWS(fit(d, Variant::gsavg));
  CHECK_THROWS(fit(d, Variant::gsavg, Blocking::singletons(5), GammaKind::log1p));
  const auto model = fit(d, Variant::savg);
  const std::vector<double> wrong(3, 0.0);
  CHECK_THROWS(model.discriminant(wrong));
  CHECK(parse_variant("gsavg") == Variant::gsavg);
  CHECK_THROWS(parse_variant("svm"));
}

TEST_CASE("misclassification rate on separated data") {
  std::mt19937_64 gen(4);
  const auto train = testing::random_dataset(gen, 10, 10, 20, 3.0);
  const auto test = testing::random_dataset(gen, 30, 30, 20, 3.0);
  CHECK(misclassification_rate(fit(train, Variant::savg), test) == 0.0);
}
