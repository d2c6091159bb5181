#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jsonoid/stats/moments.hpp"
#include "oracles.hpp"

using namespace jsonoid;

namespace {

// Exponential-ish data keeps all four moments well away from zero so plain
// relative comparisons are meaningful.
std::vector<double> skewed_sample(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(1e-12, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = -std::log(unit(rng));
  return v;
}

MomentsAccumulator accumulate(const std::vector<double>& values) {
  MomentsAccumulator acc;
  for (double v : values) acc.add(v);
  return acc;
}

bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("moments: single value") {
  MomentsAccumulator acc;
  acc.add(5.0);
  CHECK(acc.count() == 1);
  CHECK(acc.mean() == 5.0);
  CHECK(acc.m2() == 0.0);
  CHECK(acc.m3() == 0.0);
  CHECK(acc.m4() == 0.0);
}

TEST_CASE("moments: {2,4} against the two-pass oracle") {
  std::vector<double> values{2.0, 4.0};
  auto expected = oracle::two_pass_moments(values);
  REQUIRE(expected.mean == 3.0);
  REQUIRE(expected.m2 == 2.0);
  auto acc = accumulate(values);
  CHECK(acc.mean() == expected.mean);
  CHECK(acc.m2() == expected.m2);
}

TEST_CASE("moments: {1..5} variance and symmetry") {
  std::vector<double> values{1, 2, 3, 4, 5};
  auto expected = oracle::two_pass_moments(values);
  REQUIRE(expected.variance == 2.0);
  REQUIRE(expected.skewness == 0.0);
  auto rep = accumulate(values).report();
  CHECK(*rep.stddev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(*rep.skewness == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("moments: mean combination matches the sum view") {
  // sums 10 over 2 values and 20 over 3 values -> mean 30/5 = 6
  MomentsAccumulator a = accumulate({4.0, 6.0});
  MomentsAccumulator b = accumulate({5.0, 7.0, 8.0});
  REQUIRE(a.count() == 2);
  REQUIRE(b.count() == 3);
  CHECK(combine(a, b).mean() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("moments: empty accumulator is the identity") {
  std::mt19937_64 rng(7);
  auto values = skewed_sample(rng, 50);
  auto x = accumulate(values);
  MomentsAccumulator empty;
  CHECK(combine(x, empty) == x);
  CHECK(combine(empty, x) == x);
}

TEST_CASE("moments: random split combine matches the two-pass oracle to 1e-9") {
  std::mt19937_64 rng(8);
  auto values = skewed_sample(rng, 1000);
  auto expected = oracle::two_pass_moments(values);
  std::uniform_int_distribution<std::size_t> cut(1, values.size() - 1);
  for (int t = 0; t < 50; ++t) {
    std::size_t c = cut(rng);
    auto left = accumulate({values.begin(), values.begin() + std::ptrdiff_t(c)});
    auto right = accumulate({values.begin() + std::ptrdiff_t(c), values.end()});
    auto whole = combine(left, right);
    CHECK(whole.count() == expected.n);
    CHECK(close_rel(whole.mean(), expected.mean));
    CHECK(close_rel(whole.m2(), expected.m2));
    CHECK(close_rel(whole.m3(), expected.m3));
    CHECK(close_rel(whole.m4(), expected.m4));
  }
}

TEST_CASE("moments: commutativity is exact, associativity within 1e-9, 1000 trials") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  for (int t = 0; t < 1000; ++t) {
    auto x = accumulate(skewed_sample(rng, size(rng)));
    auto y = accumulate(skewed_sample(rng, size(rng)));
    auto z = accumulate(skewed_sample(rng, size(rng)));
    CHECK(combine(x, y) == combine(y, x));  // bitwise
    auto left = combine(combine(x, y), z);
    auto right = combine(x, combine(y, z));
    CHECK(close_rel(left.mean(), right.mean()));
    CHECK(close_rel(left.m2(), right.m2()));
    CHECK(close_rel(left.m3(), right.m3()));
    CHECK(close_rel(left.m4(), right.m4()));
  }
}

TEST_CASE("moments: exchange invariance over permutations and fold trees") {
  std::mt19937_64 rng(10);
  auto values = skewed_sample(rng, 500);
  auto expected = oracle::two_pass_moments(values);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(values.begin(), values.end(), rng);
    // random binary fold tree: split into 1..8 chunks, accumulate, merge
    std::uniform_int_distribution<std::size_t> chunks(1, 8);
    std::size_t k = chunks(rng);
    std::vector<MomentsAccumulator> parts(k);
    for (std::size_t i = 0; i < values.size(); ++i) parts[i % k].add(values[i]);
    while (parts.size() > 1) {
      std::vector<MomentsAccumulator> next;
      for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
        next.push_back(combine(parts[i], parts[i + 1]));
      if (parts.size() % 2 == 1) next.push_back(parts.back());
      parts = std::move(next);
    }
    CHECK(close_rel(parts[0].mean(), expected.mean));
    CHECK(close_rel(parts[0].m2(), expected.m2));
    CHECK(close_rel(parts[0].m3(), expected.m3));
    CHECK(close_rel(parts[0].m4(), expected.m4));
  }
}

TEST_CASE("moments: M2 and M4 stay non-negative, 1000 trials") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(1, 30);
  for (int t = 0; t < 1000; ++t) {
    auto x = accumulate(skewed_sample(rng, size(rng)));
    auto y = accumulate(skewed_sample(rng, size(rng)));
    auto c = combine(x, y);
    CHECK(c.m2() >= 0.0);
    CHECK(c.m4() >= 0.0);
  }
}

TEST_CASE("moments: constant data reports stddev 0, no skew/kurtosis") {
  auto rep = accumulate({7.0, 7.0, 7.0}).report();
  CHECK(*rep.stddev == 0.0);
  CHECK(!rep.skewness.has_value());
  CHECK(!rep.kurtosis.has_value());
}

TEST_CASE("moments: {0,0,0,1} mean") {
  CHECK(accumulate({0, 0, 0, 1}).mean() == 0.25);
}

TEST_CASE("moments: undefined statistics are absent, not NaN") {
  MomentsAccumulator empty;
  auto rep = empty.report();
  CHECK(!rep.mean.has_value());
  CHECK(!rep.stddev.has_value());
  auto one = MomentsAccumulator::of(3.0).report();
  CHECK(*one.mean == 3.0);
  CHECK(!one.stddev.has_value());
}

TEST_CASE("moments: standard normal sample has near-zero skew and excess kurtosis") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(100000);
  for (auto& v : values) v = normal(rng);
  // Oracle first: the two-pass skew/kurtosis agree with the accumulator.
  auto expected = oracle::two_pass_moments(values);
  MomentsAccumulator acc = accumulate(values);
  auto rep = acc.report();
  CHECK(close_rel(*rep.skewness, expected.skewness, 1e-7));
  CHECK(close_rel(*rep.kurtosis, expected.kurtosis, 1e-7));
  CHECK(std::abs(*rep.skewness) <= 0.05);
  CHECK(std::abs(*rep.kurtosis) <= 0.1);
}

TEST_CASE("moments: non-finite input rejected") {
  CHECK_THROWS_AS(MomentsAccumulator::of(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}
