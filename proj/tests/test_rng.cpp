#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "swapdesign/rng.hpp"
#include "test_support.hpp"

using namespace swapdesign;

TEST_CASE("streams are deterministic and keyed") {
  RngStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    auto va = a.next_u64();
    CHECK(va == b.next_u64());
  }
  bool all_equal = true;
  RngStream a2(42);
  for (int i = 0; i < 100; ++i) all_equal &= a2.next_u64() == c.next_u64();
  CHECK_FALSE(all_equal);
}

TEST_CASE("substreams are independent of parent consumption") {
  RngStream parent(7);
  RngStream child_before = parent.substream(3);
  parent.next_u64();
  parent.next_u64();
  RngStream child_after = parent.substream(3);
  for (int i = 0; i < 20; ++i) {
    CHECK(child_before.next_u64() == child_after.next_u64());
  }
}

TEST_CASE("from_path folds ids") {
  RngStream a = RngStream::from_path(1, {2, 3});
  RngStream b = RngStream::from_path(1, {2, 3});
  RngStream c = RngStream::from_path(1, {3, 2});
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("uniform stays in [0,1) and is roughly uniform") {
  RngStream rng(11);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / draws - 0.5) < 0.01);
}

TEST_CASE("normal moments") {
  RngStream rng(5);
  std::vector<double> xs(100000);
  for (double& x : xs) x = rng.normal();
  CHECK(std::abs(test_support::mean(xs)) < 0.02);
  CHECK(std::abs(test_support::sample_variance(xs) - 1.0) < 0.03);
}

TEST_CASE("below is bounded and covers all residues") {
  RngStream rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(c > 9000);
}

TEST_CASE("permutation is a bijection") {
  RngStream rng(13);
  std::vector<int> perm = rng.permutation(50);
  std::sort(perm.begin(), perm.end());
  for (int i = 0; i < 50; ++i) CHECK(perm[static_cast<std::size_t>(i)] == i);
}
