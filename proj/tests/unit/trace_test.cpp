#include <doctest.h>

#include <filesystem>

#include "ctrent/trace.hpp"

using namespace ctrent;

TEST_CASE("wide csv parses header and rows") {
  Diagnostics diag;
  auto run = parse_wide_csv("t_ms,a,b\n0,1,2\n20,3,4\n40,5,18446744073709551615\n", "r", &diag);
  CHECK(diag.empty());
  CHECK(run.run_id == "r");
  REQUIRE(run.counters.size() == 2);
  CHECK(run.rounds() == 3);
  CHECK(run.counter_ids() == std::vector<std::string>{"a", "b"});
  CHECK(run.find("b")->samples == std::vector<std::uint64_t>{2, 4, 18446744073709551615ull});
  CHECK(run.find("zz") == nullptr);
  CHECK(run.counters[0].sample_interval_ms == 20);
  REQUIRE(run.round_timestamps_ms);
  CHECK(*run.round_timestamps_ms == std::vector<std::uint64_t>{0, 20, 40});
}

TEST_CASE("wide csv tolerates CRLF and missing final newline") {
  auto a = parse_wide_csv("t_ms,x\r\n0,1\r\n20,2\r\n");
  auto b = parse_wide_csv("t_ms,x\n0,1\n20,2");
  CHECK(a.counters == b.counters);
}

TEST_CASE("wide csv rejects malformed input with a line number") {
  CHECK_THROWS_AS(parse_wide_csv(""), InputError);
  CHECK_THROWS_WITH_AS(parse_wide_csv("t_ms,a\n0,1\n20,-3\n"), doctest::Contains("line 3"), InputError);
  CHECK_THROWS_WITH_AS(parse_wide_csv("t_ms,a\n0,1,2\n"), doctest::Contains("line 2"), InputError);
  CHECK_THROWS_AS(parse_wide_csv("t_ms,a\n0,18446744073709551616\n"), InputError);
  CHECK_THROWS_AS(parse_wide_csv("t_ms,a,a\n0,1,2\n"), InputError);
  CHECK_THROWS_AS(parse_wide_csv("time,a\n0,1\n"), InputError);
  CHECK_THROWS_AS(parse_wide_csv("t_ms,a\n0,x\n"), InputError);
  CHECK_THROWS_AS(parse_wide_csv("t_ms,a\n0,1\n\n20,2\n"), InputError);
}

TEST_CASE("header-only input warns") {
  Diagnostics diag;
  auto run = parse_wide_csv("t_ms,a\n", "r", &diag);
  CHECK(run.rounds() == 0);
  CHECK_FALSE(diag.empty());
}

TEST_CASE("non-monotone timestamps are dropped with a warning") {
  Diagnostics diag;
  auto run = parse_wide_csv("t_ms,a\n0,1\n20,2\n20,3\n", "r", &diag);
  CHECK_FALSE(run.round_timestamps_ms.has_value());
  CHECK(diag.warnings.size() == 1);
  CHECK(run.find("a")->samples.size() == 3);
}

TEST_CASE("validate catches inconsistent runs") {
  TraceRun run{"r", {{"a", {1, 2}}, {"b", {1}}}, std::nullopt};
  CHECK_THROWS_AS(run.validate(), InputError);
  run.counters[1].samples = {1, 2};
  CHECK_NOTHROW(run.validate());
  run.counters[1].counter_id = "a";
  CHECK_THROWS_AS(run.validate(), InputError);
  run.counters[1].counter_id = "b";
  run.round_timestamps_ms = std::vector<std::uint64_t>{5, 5};
  CHECK_THROWS_AS(run.validate(), InputError);
}

TEST_CASE("write then parse is the identity") {
  TraceRun run{"r", {{"a", {0, 7, 18446744073709551615ull}, 20}, {"b", {3, 3, 3}, 20}},
               std::vector<std::uint64_t>{100, 120, 140}};
  auto text = write_wide_csv(run);
  CHECK(text == "t_ms,a,b\n100,0,3\n120,7,3\n140,18446744073709551615,3\n");
  auto back = parse_wide_csv(text, "r");
  CHECK(back == run);
  CHECK(write_wide_csv(back) == text);
}

TEST_CASE("runs without timestamps use the sample interval") {
  TraceRun run{"r", {{"a", {1, 2, 3}, 50}}, std::nullopt};
  CHECK(write_wide_csv(run) == "t_ms,a\n0,1\n50,2\n100,3\n");
  CHECK_THROWS_AS(write_wide_csv(TraceRun{"r", {}, std::nullopt}), InputError);
}

TEST_CASE("file helpers report I/O failures") {
  CHECK_THROWS_AS(read_wide_csv_file("/nonexistent/dir/x.csv"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.csv", "x"), IoError);
  auto path = std::filesystem::temp_directory_path() / "ctrent_trace_test.csv";
  TraceRun run{"ctrent_trace_test", {{"a", {1, 2}, 20}}, std::vector<std::uint64_t>{0, 20}};
  write_wide_csv_file(path, run);
  CHECK(read_wide_csv_file(path) == run);
  std::filesystem::remove(path);
}
