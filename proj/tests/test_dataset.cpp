#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "gsavg/dataset.hpp"
#include "support.hpp"

using namespace gsavg;

TEST_CASE("csv labels are remapped by first appearance") {
  const auto d = parse_csv("x,y,cls\n1,2,a\n3,4,a\n5,6,b\n7,8,b\n");
  CHECK(d.size() == 4);
  CHECK(d.dim() == 2);
  CHECK(d.labels == std::vector<int>{1, 1, 2, 2});
  CHECK(d.label_names == std::vector<std::string>{"a", "b"});
  CHECK(d.feature_names == std::vector<std::string>{"x", "y"});
  CHECK(d.features(2, 1) == 6.0);

  const auto swapped = parse_csv("x,cls\n1,b\n2,a\n3,b\n");
  CHECK(swapped.labels == std::vector<int>{1, 2, 1});
  CHECK(swapped.label_names == std::vector<std::string>{"b", "a"});
}

TEST_CASE("csv label column by name or index") {
  const std::string text = "lab,x,y\nu,1,2\nv,3,4\nu,5,6\n";
  const auto by_name = parse_csv(text, std::string("lab"));
  const auto by_index = parse_csv(text, std::size_t{0});
  CHECK(by_name.features == by_index.features);
  CHECK(by_name.labels == std::vector<int>{1, 2, 1});
  CHECK(by_name.feature_names == std::vector<std::string>{"x", "y"});
  CHECK_THROWS_AS(parse_csv(text, std::string("nope")), DataError);
  CHECK_THROWS_AS(parse_csv(text, std::size_t{7}), DataError);
}

TEST_CASE("csv errors name the offending cell") {
  try {
    parse_csv("a,b,c\n1,2,x\n3,,y\n");
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(parse_csv("a,c\n1,x\nfoo,y\n"), doctest::Contains("line 3"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,c\n1,x\n2,y\n3,z\n"), doctest::Contains("multi-class unsupported"), DataError);
  CHECK_THROWS_AS(parse_csv("a,c\n1,x\n2,x\n"), DataError);
  CHECK_THROWS_AS(parse_csv("a,c\n1,x\n2,3,y\n"), DataError);
  CHECK_THROWS_AS(parse_csv("a,c\ninf,x\n2,y\n"), DataError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("csv round trip is bit exact") {
  std::mt19937_64 gen(7);
  auto d = testing::random_dataset(gen, 5, 4, 6);
  d.features(0, 0) = 0.1;
  d.features(1, 1) = -1e-300;
  d.features(2, 2) = 123456789.123456789;
  const auto back = parse_csv(to_csv(d));
  CHECK(back.features == d.features);
  CHECK(back.labels == d.labels);
  CHECK(back.feature_names == d.feature_names);

  const auto path = std::filesystem::temp_directory_path() / "gsavg_roundtrip.csv";
  write_csv(d, path);
  const auto loaded = load_csv(path);
  CHECK(loaded.features == d.features);
  std::filesystem::remove(path);
}

TEST_CASE("feature table with and without a label column") {
  const auto plain = parse_feature_table("a,b\n1,2\n3,4\n", 2);
  CHECK(plain.features.rows() == 2);
  CHECK(plain.tags.empty());
  const auto labeled = parse_feature_table("a,b,c\n1,2,x\n3,4,y\n", 2);
  CHECK(labeled.tags == std::vector<std::string>{"x", "y"});
  CHECK(labeled.features(1, 1) == 4.0);
  CHECK_THROWS_AS(parse_feature_table("a,b,c,d\n1,2,3,4\n", 2), DataError);
}

TEST_CASE("stratified split counts and determinism") {
  std::mt19937_64 gen(1);
  SUBCASE("4 + 4 at one half") {
    const auto d = testing::random_dataset(gen, 4, 4, 3);
    const auto [train, test] = split_train_test(d, 0.5, 11);
    CHECK(train.count(1) == 2);
    CHECK(train.count(2) == 2);
    CHECK(test.count(1) == 2);
    CHECK(test.count(2) == 2);
  }
  SUBCASE("odd class uses the ceiling") {
    const auto d = testing::random_dataset(gen, 5, 4, 3);
    const auto [train, test] = split_train_test(d, 0.5, 11);
    CHECK(train.count(1) == 3);
    CHECK(test.count(1) == 2);
  }
  SUBCASE("same seed, same split; union is the data") {
    const auto d = testing::random_dataset(gen, 9, 7, 2);
    for (double f : {0.1, 0.3, 0.5, 0.77, 0.9}) {
      const auto a = stratified_split_indices(d, f, 5);
      const auto b = stratified_split_indices(d, f, 5);
      CHECK(a.train == b.train);
      CHECK(a.test == b.test);
      std::vector<std::size_t> all = a.train;
      all.insert(all.end(), a.test.begin(), a.test.end());
      std::sort(all.begin(), all.end());
      CHECK(all.size() == d.size());
      CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
      std::size_t train1 = 0;
      for (auto i : a.train) train1 += d.labels[i] == 1;
      CHECK(train1 == static_cast<std::size_t>(std::ceil(f * 9 - 1e-9)));
    }
    const auto c = stratified_split_indices(d, 0.5, 6);
    const auto a = stratified_split_indices(d, 0.5, 5);
    CHECK((c.train != a.train));
  }
  SUBCASE("errors") {
    const auto d = testing::random_dataset(gen, 1, 4, 2);
    CHECK_THROWS(split_train_test(d, 0.5, 1));
    const auto ok = testing::random_dataset(gen, 3, 3, 2);
    CHECK_THROWS(split_train_test(ok, 0.0, 1));
    CHECK_THROWS(split_train_test(ok, 1.0, 1));
  }
}

TEST_CASE("column scaling standardises with reference statistics") {
  Matrix m(3, 2, std::vector<double>{1, 5, 2, 5, 3, 5});
  const auto s = ColumnScaling::fit(m);
  s.apply(m);
  CHECK(m(0, 0) == doctest::Approx(-1.0));
  CHECK(m(2, 0) == doctest::Approx(1.0));
  CHECK(m(1, 1) == 0.0);  // constant column: centred, scale 1
}

TEST_CASE("fingerprint changes with content") {
  std::mt19937_64 gen(3);
  auto d = testing::random_dataset(gen, 3, 3, 4);
  const auto f0 = fingerprint(d);
  CHECK(f0 == fingerprint(d));
  d.features(1, 1) += 1e-12;
  CHECK(fingerprint(d) != f0);
}
