#include "doctest.h"

#include <algorithm>

#include "irsense/correlate.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace irsense;

namespace {

system_ordering ordering_of(const std::vector<std::string>& tags) {
  system_ordering o;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    o.entries.emplace_back(tags[i], static_cast<double>(tags.size() - i));
  }
  return o;
}

std::vector<std::string> tags_of(const system_ordering& o) {
  std::vector<std::string> tags;
  for (const auto& [tag, mean] : o.entries) {
    (void)mean;
    tags.push_back(tag);
  }
  return tags;
}

}  // namespace

TEST_CASE("rank_systems sorts by mean then tag") {
  auto o = rank_systems({{"A", 0.5}, {"B", 0.7}});
  CHECK(tags_of(o) == std::vector<std::string>{"B", "A"});

  auto tie = rank_systems({{"B", 0.5}, {"A", 0.5}});
  CHECK(tags_of(tie) == std::vector<std::string>{"A", "B"});

  CHECK_THROWS_WITH_AS(rank_systems({{"A", 0.5}, {"A", 0.7}}), doctest::Contains("duplicate"),
                       data_error);
  CHECK_THROWS_AS(rank_systems({{"A", 0.5}}), data_error);
}

TEST_CASE("kendall_tau identity, reversal, adjacent swap") {
  auto ref = ordering_of({"a", "b", "c"});
  CHECK(kendall_tau(ref, ref).tau == 1.0);

  auto rev = ordering_of({"c", "b", "a"});
  CHECK(kendall_tau(ref, rev).tau == -1.0);

  auto swapped = ordering_of({"b", "a", "c"});
  CHECK(kendall_tau(ref, swapped).tau == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(kendall_tau(ref, ordering_of({"a", "b", "zzz"})), data_error);
  CHECK_THROWS_AS(kendall_tau(ref, ordering_of({"a", "b"})), data_error);
}

TEST_CASE("weighted_tau identity and exact reversal") {
  for (std::size_t n : {2u, 3u, 5u, 17u}) {
    gen::engine eng(n);
    auto tags = gen::random_ordering(eng, n);
    auto ref = ordering_of(tags);
    CHECK(weighted_tau(ref, ref).tau == 1.0);
    auto reversed_tags = tags;
    std::reverse(reversed_tags.begin(), reversed_tags.end());
    CHECK(weighted_tau(ref, ordering_of(reversed_tags)).tau == -1.0);
    CHECK(weighted_tau(ref, ordering_of(reversed_tags), true).tau == -1.0);
  }
}

TEST_CASE("a swap at the top hurts weighted tau more than a swap at the bottom") {
  auto ref = ordering_of({"a", "b", "c", "d"});
  auto top_swap = ordering_of({"b", "a", "c", "d"});
  auto bottom_swap = ordering_of({"a", "b", "d", "c"});
  const double top = weighted_tau(ref, top_swap).tau;
  const double bottom = weighted_tau(ref, bottom_swap).tau;
  CHECK(top < bottom);
  // enumerated by hand from the 1/(k+1) pair weights
  CHECK(top == doctest::Approx(131.0 / 231.0).epsilon(1e-12));
  CHECK(bottom == doctest::Approx(177.0 / 231.0).epsilon(1e-12));
  // unweighted tau cannot tell them apart
  CHECK(kendall_tau(ref, top_swap).tau == kendall_tau(ref, bottom_swap).tau);
}

TEST_CASE("monotone damage: deeper adjacent transpositions hurt less") {
  const std::size_t n = 12;
  gen::engine eng(99);
  auto tags = gen::random_ordering(eng, n);
  auto ref = ordering_of(tags);
  double prev = -2.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto swapped = tags;
    std::swap(swapped[k], swapped[k + 1]);
    const double tau = weighted_tau(ref, ordering_of(swapped)).tau;
    CHECK(tau > prev);
    prev = tau;
  }
}

TEST_CASE("negating the other ordering negates tau") {
  gen::engine eng(1234);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t n = gen::range(eng, 2, 20);
    auto ref = ordering_of(gen::random_ordering(eng, n));
    auto other_tags = gen::random_ordering(eng, n);
    auto reversed = other_tags;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(kendall_tau(ref, ordering_of(other_tags)).tau ==
          doctest::Approx(-kendall_tau(ref, ordering_of(reversed)).tau).epsilon(1e-15));
    CHECK(weighted_tau(ref, ordering_of(other_tags)).tau ==
          doctest::Approx(-weighted_tau(ref, ordering_of(reversed)).tau).epsilon(1e-15));
  }
}

TEST_CASE("both variants match the pairwise oracle on random pairs") {
  gen::engine eng(42);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = gen::range(eng, 2, 50);
    auto ref_tags = gen::random_ordering(eng, n);
    auto other_tags = gen::random_ordering(eng, n);
    auto ref = ordering_of(ref_tags);
    auto other = ordering_of(other_tags);
    CHECK(kendall_tau(ref, other).tau ==
          doctest::Approx(oracle::kendall(ref_tags, other_tags)).epsilon(1e-12));
    CHECK(weighted_tau(ref, other).tau ==
          doctest::Approx(oracle::weighted_kendall(ref_tags, other_tags)).epsilon(1e-12));
  }
}

TEST_CASE("symmetrized weighted tau averages the two anchors") {
  gen::engine eng(77);
  const std::size_t n = 9;
  auto a_tags = gen::random_ordering(eng, n);
  auto b_tags = gen::random_ordering(eng, n);
  auto a = ordering_of(a_tags);
  auto b = ordering_of(b_tags);
  const double sym = weighted_tau(a, b, true).tau;
  const double expected =
      (oracle::weighted_kendall(a_tags, b_tags) + oracle::weighted_kendall(b_tags, a_tags)) / 2.0;
  CHECK(sym == doctest::Approx(expected).epsilon(1e-12));
  CHECK(weighted_tau(a, a, true).tau == 1.0);
}

TEST_CASE("tau_curve composes pointwise and is 1.0 at the reference") {
  gen::engine eng(7);
  auto ref = ordering_of(gen::random_ordering(eng, 8));
  std::map<int, system_ordering> by_d;
  by_d[0] = ref;
  by_d[1] = ordering_of(gen::random_ordering(eng, 8));
  by_d[2] = ordering_of(gen::random_ordering(eng, 8));
  for (bool weighted : {false, true}) {
    auto curve = tau_curve(ref, by_d, weighted);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].first == 0);
    CHECK(curve[0].second.tau == 1.0);
    for (const auto& [d, tau] : curve) {
      const auto expected =
          weighted ? weighted_tau(ref, by_d.at(d)) : kendall_tau(ref, by_d.at(d));
      CHECK(tau.tau == expected.tau);
      CHECK(tau.weighted == weighted);
    }
  }
}
