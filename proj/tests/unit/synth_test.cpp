#include <doctest.h>

#include <random>
#include <set>

#include "ctrent/synth.hpp"

using namespace ctrent;
using namespace ctrent::synth;

TEST_CASE("generator and hash test vectors") {
  std::mt19937_64 rng;
  rng.discard(9999);
  CHECK(rng() == 9981545732273789042ull);
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(derive_seed(1, "x", 2) == splitmix64(splitmix64(1) ^ fnv1a64("x") ^ 2));
}

TEST_CASE("basic shapes") {
  auto c = generate({"c", 5, Constant{7}});
  CHECK(c.samples == std::vector<std::uint64_t>(5, 7));
  auto i = generate({"i", 4, Incremental{~0ull, 2}});
  CHECK(i.samples == std::vector<std::uint64_t>{~0ull, 1, 3, 5});
  CHECK(std::string(kind_name(Incremental{})) == "incremental");
}

TEST_CASE("uniform draws are the top bits of raw words") {
  auto u = generate({"u", 100, Uniform64{42, 40}});
  std::mt19937_64 rng(42);
  for (auto v : u.samples) REQUIRE(v == rng() >> 24);
  auto full = generate({"u", 10, Uniform64{42}});
  std::mt19937_64 rng2(42);
  for (auto v : full.samples) REQUIRE(v == rng2());
  CHECK_THROWS_AS(generate({"u", 10, Uniform64{1, 0}}), InputError);
}

TEST_CASE("single random bit is the top bit") {
  auto b = generate({"b", 1000, SingleRandomBit{3}});
  std::mt19937_64 rng(3);
  std::size_t ones = 0;
  for (auto v : b.samples) {
    REQUIRE(v == rng() >> 63);
    ones += v;
  }
  CHECK(ones > 400);
  CHECK(ones < 600);
}

TEST_CASE("oscillate then freeze") {
  auto o = generate({"o", 300, OscillateThenFreeze{10, 13, 200, 9}});
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 200; ++i) {
    REQUIRE(o.samples[i] >= 10);
    REQUIRE(o.samples[i] <= 13);
    seen.insert(o.samples[i]);
  }
  CHECK(seen.size() == 4);
  for (std::size_t i = 200; i < 300; ++i) REQUIRE(o.samples[i] == 13);
  CHECK_THROWS_AS(generate({"o", 10, OscillateThenFreeze{5, 4, 1, 0}}), InputError);
  auto full = generate({"o", 50, OscillateThenFreeze{0, ~0ull, 50, 1}});
  CHECK(full.samples.size() == 50);
}

TEST_CASE("sparse events count up by one") {
  auto s = generate({"s", 20000, SparseEvent{0.05, 4}});
  CHECK(s.samples[0] == 0);
  for (std::size_t i = 1; i < s.samples.size(); ++i) {
    REQUIRE(s.samples[i] - s.samples[i - 1] <= 1);
  }
  const double rate = double(s.samples.back()) / 19999;
  CHECK(rate == doctest::Approx(0.05).epsilon(0.15));
  CHECK_THROWS_AS(generate({"s", 10, SparseEvent{1.5, 0}}), InputError);
}

TEST_CASE("copy transforms") {
  CHECK(CopyTransform::parse("identity").apply(9) == 9);
  CHECK(CopyTransform::parse("scale:1024").apply(3) == 3072);
  CHECK(CopyTransform::parse("scale:2").apply(1ull << 63) == 0);
  CHECK(CopyTransform::parse("div:10").apply(99) == 9);
  CHECK(CopyTransform::parse("div:10").to_string() == "div:10");
  CHECK_THROWS_AS(CopyTransform::parse("div:0"), InputError);
  CHECK_THROWS_AS(CopyTransform::parse("mul:3"), InputError);
  CHECK_THROWS_AS(CopyTransform::parse("scale:x"), InputError);
}

TEST_CASE("runs resolve derived copies in any order") {
  std::vector<SourceSpec> specs{
      {"b", 100, DerivedCopy{"a", CopyTransform::parse("scale:4")}},
      {"a", 100, Uniform64{1, 32}},
      {"c", 100, DerivedCopy{"b", CopyTransform::parse("div:2")}},
  };
  auto run = generate_run(specs, 77, "r", 10);
  CHECK(run.counter_ids() == std::vector<std::string>{"b", "a", "c"});
  CHECK(run.counters[0].sample_interval_ms == 10);
  REQUIRE(run.round_timestamps_ms);
  CHECK(run.round_timestamps_ms->at(3) == 30);
  for (std::size_t i = 0; i < 100; ++i) {
    REQUIRE(run.find("b")->samples[i] == run.find("a")->samples[i] * 4);
    REQUIRE(run.find("c")->samples[i] == run.find("a")->samples[i] * 2);
  }
  // The run seed, not the literal spec seed, drives the draw.
  auto direct = generate({"a", 100, Uniform64{derive_seed(77, "a", 1), 32}});
  CHECK(direct.samples == run.find("a")->samples);
  CHECK(generate_run(specs, 77, "r", 10) == run);
  CHECK(generate_run(specs, 78, "r", 10) != run);
}

TEST_CASE("run generation errors") {
  std::vector<SourceSpec> cyc{{"a", 10, DerivedCopy{"b", {}}}, {"b", 10, DerivedCopy{"a", {}}}};
  CHECK_THROWS_WITH_AS(generate_run(cyc, 0), doctest::Contains("cycle"), InputError);
  std::vector<SourceSpec> missing{{"a", 10, DerivedCopy{"zz", {}}}};
  CHECK_THROWS_AS(generate_run(missing, 0), InputError);
  std::vector<SourceSpec> dup{{"a", 10, Constant{}}, {"a", 10, Constant{}}};
  CHECK_THROWS_AS(generate_run(dup, 0), InputError);
  std::vector<SourceSpec> ragged{{"a", 10, Constant{}}, {"b", 11, Constant{}}};
  CHECK_THROWS_AS(generate_run(ragged, 0), InputError);
  CHECK_THROWS_AS(generate({"a", 1, Constant{}}), InputError);
}

TEST_CASE("spec files") {
  const char* text = R"(# demo
run_id = demo
run_seed = 5
length = 50
interval_ms = 10

[counter k]
kind = constant
value = 3

[counter u]
kind = uniform64
seed = 7      # trailing comment
bits = 40

[counter u4]
kind = derived_copy
source = u
transform = scale:4

[counter s]
kind = sparse_event
probability = 0.25
)";
  auto spec = parse_run_spec(text);
  CHECK(spec.run_id == "demo");
  CHECK(spec.run_seed == 5);
  CHECK(spec.interval_ms == 10);
  REQUIRE(spec.counters.size() == 4);
  CHECK(spec.counters[1].length == 50);
  CHECK(std::get<Uniform64>(spec.counters[1].params).bits == 40);
  CHECK(std::get<SparseEvent>(spec.counters[3].params).event_probability == 0.25);
  auto run = generate_run(spec);
  CHECK(run.run_id == "demo");
  CHECK(run.rounds() == 50);
  CHECK(run == generate_run(parse_run_spec(text)));
}

TEST_CASE("spec file errors") {
  CHECK_THROWS_AS(parse_run_spec(""), InputError);
  CHECK_THROWS_AS(parse_run_spec("length = 5\n[counter a]\nkind = nope\n"), InputError);
  CHECK_THROWS_AS(parse_run_spec("length = 5\n[counter a]\nkind = constant\nvalue = 1\nvalue = 2\n"), InputError);
  CHECK_THROWS_AS(parse_run_spec("length = 5\n[counter a]\nkind = constant\ncolour = red\n"), InputError);
  CHECK_THROWS_AS(parse_run_spec("length = 5\n[counter a\nkind = constant\n"), InputError);
  CHECK_THROWS_AS(parse_run_spec("length = 5\n[counter a]\nkind = constant\nvalue = -1\n"), InputError);
  CHECK_THROWS_AS(parse_run_spec("length = 5\n[counter a]\nkind = derived_copy\n"), InputError);
  CHECK_THROWS_WITH_AS(parse_run_spec("length = 5\n[counter a]\nkind constant\n"), doctest::Contains("line 3"),
                       InputError);
}
