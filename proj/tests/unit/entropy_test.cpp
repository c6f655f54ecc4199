#include <doctest.h>

#include <cmath>
#include <random>

#include "ctrent/entropy.hpp"
#include "ctrent/synth.hpp"
#include "oracles.hpp"

using namespace ctrent;

namespace {

SymbolDistribution random_distribution(std::mt19937_64& rng, std::size_t k) {
  std::vector<std::uint64_t> counts(k);
  const auto shape = rng() % 4;
  for (auto& c : counts) {
    switch (shape) {
      case 0: c = rng() % 1000; break;
      case 1: c = (rng() % 8 == 0) ? rng() % 100000 : rng() % 3; break;
      case 2: c = 1 + rng() % 2; break;
      default: c = rng() % 2 ? 0 : 1 + (rng() >> 40); break;
    }
  }
  if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) counts[0] = 1;
  return distribution_from_counts(counts);
}

}  // namespace

TEST_CASE("binary entropies") {
  auto d = distribution_from_counts({1, 127});
  CHECK(std::abs(shannon_entropy(d) - 0.0659144123) < 1e-9);
  CHECK(std::abs(shannon_entropy(distribution_from_counts({1, 15})) - 0.337290) < 1e-6);
  CHECK(min_entropy(distribution_from_counts({1, 1})) == doctest::Approx(1.0));
  CHECK(shannon_entropy(distribution_from_counts({5, 0, 0})) == 0.0);
}

TEST_CASE("uniform distribution reaches lg K for both estimates") {
  for (std::size_t k : {2u, 16u, 256u}) {
    auto d = distribution_from_counts(std::vector<std::uint64_t>(k, 7));
    CHECK(shannon_entropy(d) == doctest::Approx(std::log2(double(k))));
    CHECK(min_entropy(d) == doctest::Approx(std::log2(double(k))));
    CHECK(shannon_entropy(d) <= std::log2(double(k)));
  }
}

TEST_CASE("estimates agree with the long double oracle") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    auto d = random_distribution(rng, 1 + rng() % 256);
    REQUIRE(std::abs(shannon_entropy(d) - double(oracle::shannon(d.counts))) < 1e-9);
    REQUIRE(std::abs(min_entropy(d) - double(oracle::min_entropy(d.counts))) < 1e-12);
  }
}

TEST_CASE("min-entropy never exceeds Shannon entropy") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    auto d = random_distribution(rng, 2 + rng() % 255);
    const double h1 = shannon_entropy(d), hinf = min_entropy(d);
    REQUIRE(hinf <= h1);
    REQUIRE(hinf >= 0.0);
    REQUIRE(h1 <= std::log2(double(d.alphabet_size)));
  }
}

TEST_CASE("entropy is invariant under relabeling") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto d = random_distribution(rng, 256);
    auto counts = d.counts;
    std::shuffle(counts.begin(), counts.end(), rng);
    auto p = distribution_from_counts(counts);
    REQUIRE(shannon_entropy(p) == shannon_entropy(d));
    REQUIRE(min_entropy(p) == min_entropy(d));
  }
}

TEST_CASE("distribution errors") {
  CHECK_THROWS_AS(shannon_entropy(distribution_from_counts({0, 0})), InputError);
  CHECK_THROWS_AS(estimate_distribution(SymbolStream{}), InputError);
  auto d = estimate_distribution(SymbolStream{1, 4, {1, 1, 15}});
  CHECK(d.alphabet_size == 16);
  CHECK(d.total == 3);
  CHECK(d.counts[1] == 2);
  CHECK(d.probability(15) == doctest::Approx(1.0 / 3));
}

TEST_CASE("constant counter assesses to zero") {
  CounterTrace t{"c", std::vector<std::uint64_t>(1000, 42)};
  auto a = assess_counter(t);
  CHECK(a.robust_h1 == 0.0);
  CHECK(a.combined_per_bit == 0.0);
  CHECK(a.per_alpha.size() == 4);
  CHECK(a.per_alpha.at(1).byte_count == 999 / 8);
}

TEST_CASE("robust estimate is the minimum over robust widths") {
  auto t = synth::generate({"u", 4001, synth::Uniform64{5}});
  const std::vector<unsigned> alphas{1, 2, 4, 8, 16, 32};
  auto a = assess_counter(t, alphas);
  CHECK(a.per_alpha.size() == 6);
  double m1 = 1e9, mi = 1e9;
  for (unsigned al : kRobustAlphas) {
    m1 = std::min(m1, a.per_alpha.at(al).h1_bits);
    mi = std::min(mi, a.per_alpha.at(al).hinf_bits);
  }
  CHECK(a.robust_h1 == m1);
  CHECK(a.robust_hinf == mi);
  CHECK(a.h1_per_bit == m1 / 8);
  CHECK(a.combined_per_bit == doctest::Approx(a.h1_per_bit + a.hinf_per_bit));
  CHECK(a.counter_id == "u");
}

TEST_CASE("fold width validation") {
  CounterTrace t{"c", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  const std::vector<unsigned> only16{16};
  CHECK_THROWS_AS(assess_counter(t, only16), InputError);
  const std::vector<unsigned> bad{1, 3};
  CHECK_THROWS_AS(assess_counter(t, bad), InputError);
  CounterTrace tiny{"c", {1, 2, 3}};
  CHECK_THROWS_AS(assess_counter(tiny), InputError);
}

TEST_CASE("single random bit matches its exact byte distribution") {
  // At alpha=1 the folded delta bit is 1 exactly on a 0->1 step, so each byte
  // is a function of 9 consecutive fair bits.
  std::vector<std::uint64_t> exact(256, 0);
  for (unsigned seq = 0; seq < 512; ++seq) {
    unsigned byte = 0;
    for (int i = 0; i < 8; ++i) {
      unsigned a = (seq >> (8 - i)) & 1u, b = (seq >> (7 - i)) & 1u;
      byte = (byte << 1) | ((a == 0 && b == 1) ? 1u : 0u);
    }
    ++exact[byte];
  }
  const double truth = double(oracle::shannon(exact));
  auto t = synth::generate({"b", 100001, synth::SingleRandomBit{8}});
  auto a = assess_counter(t);
  CHECK(std::abs(a.per_alpha.at(1).h1_bits - truth) < 0.05);
  // alpha = 8 sees {0, +1, -1} with probabilities 1/2, 1/4, 1/4.
  CHECK(std::abs(a.per_alpha.at(8).h1_bits - 1.5) < 0.01);
  CHECK(std::abs(a.per_alpha.at(8).hinf_bits - 1.0) < 0.01);
}
