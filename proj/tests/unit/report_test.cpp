#include <doctest.h>

#include <random>

#include "ctrent/cli/report.hpp"
#include "ctrent/cli/svg_plot.hpp"
#include "ctrent/synth.hpp"

using namespace ctrent;
using namespace ctrent::cli;

namespace {

std::string golden(const std::string& name) {
  return read_text_file(std::string(CTRENT_GOLDEN_DIR) + "/" + name);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

EntropyAssessment point(std::string id, double h1, double hinf) {
  EntropyAssessment a;
  a.counter_id = std::move(id);
  a.per_alpha[1] = AlphaEntropy{h1 * 8, hinf * 8, 10};
  a.robust_h1 = h1 * 8;
  a.robust_hinf = hinf * 8;
  a.h1_per_bit = h1;
  a.hinf_per_bit = hinf;
  a.combined_per_bit = h1 + hinf;
  return a;
}

// Every section populated, with values exactly representable at 6 decimals.
AssessmentReport full_report() {
  AssessmentReport r;
  r.runs = {{"a", 2, 100, 20}, {"b", 2, 100, 20}, {"c", 2, 100, 20}};
  r.assessments = {point("x", 0.5, 0.25), point("y", 0.75, 0.5)};
  r.assessments[1].overflow_count = 3;
  r.elimination = EliminationReport{3, {{"constant_short_run", 2, {"k"}}}, {"x", "y"}};
  r.ranking = RankingReport{{{1, "y", 0.75, 0.5, 1.25}, {2, "x", 0.5, 0.25, 0.75}}, 2};
  DependencyReport dep;
  dep.matrix = MiMatrix{{"y", "x"}, {1.0, 0.125, 0.125, 0.875}};
  dep.threshold = 0.1;
  dep.groups = {{{"y", "x"}, "y", 0.125}};
  dep.selected = {"y"};
  r.dependency = dep;
  RobustnessSeries s;
  s.counter_id = "x";
  s.per_pair_series = {std::vector<double>{0.03125, 0.0625}, {0.5, 0.25}, {0.125, 0.0}};
  s.pair_means = {0.046875, 0.375, 0.0625};
  s.min_series = {0.03125, 0.0};
  s.avg_series = {0.21875, 0.1};
  s.max_series = {0.5, 0.25};
  s.classification = RobustnessClass::upper;
  s.suspiciously_correlated = true;
  r.robustness.push_back(s);
  r.budget = EntropyBudget{{"y"}, 1, BudgetConvention::robust, 20, 13, 6.0, 264, 22.5};
  r.final_selection = std::vector<std::string>{"y"};
  r.warnings = {"something odd"};
  return r;
}

}  // namespace

TEST_CASE("report round-trips through json") {
  auto r = full_report();
  auto text = serialize_report(r);
  auto back = parse_report(text);
  CHECK(back == r);
  CHECK(serialize_report(back) == text);
}

TEST_CASE("serialization is stable for arbitrary reals") {
  auto run = synth::generate_run({{"u", 500, synth::Uniform64{1}}, {"b", 500, synth::SingleRandomBit{2}}}, 9);
  AssessmentReport r;
  r.runs.push_back(RunMetadata::of(run));
  for (const auto& c : run.counters) r.assessments.push_back(assess_counter(c));
  auto text = serialize_report(r);
  CHECK(serialize_report(parse_report(text)) == text);
  CHECK(text.find("\"h1_bits_per_bit\"") != std::string::npos);
}

TEST_CASE("optional sections are omitted") {
  AssessmentReport r;
  r.runs = {{"a", 1, 2, 20}};
  auto text = serialize_report(r);
  CHECK(text.find("elimination") == std::string::npos);
  CHECK(text.find("budget") == std::string::npos);
  CHECK(parse_report(text) == r);
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(parse_report("not json"), InputError);
  CHECK_THROWS_AS(parse_report("{}"), InputError);
  CHECK_THROWS_AS(parse_report(R"({"schema_version": 99, "runs": [], "assessments": []})"), InputError);
  auto text = serialize_report(full_report());
  auto broken = text;
  broken.replace(broken.find("\"h1_bits_per_bit\""), 17, "\"h1_bits_per_bat\"");
  CHECK_THROWS_AS(parse_report(broken), InputError);
}

TEST_CASE("canonical json formatting") {
  nlohmann::ordered_json j{{"b", 1}, {"a", -0.0}, {"v", {1.5, 2, 3}}, {"s", "x"}};
  CHECK(to_canonical_json(j) == "{\n  \"b\": 1,\n  \"a\": 0.000000,\n  \"v\": [1.500000, 2, 3],\n  \"s\": \"x\"\n}\n");
  CHECK(format_fixed6(1.0 / 3) == "0.333333");
  CHECK(format_fixed6(-1e-9) == "0.000000");
}

TEST_CASE("csv renderings") {
  auto r = full_report();
  CHECK(mi_matrix_csv(r.dependency->matrix) == "counter_id,y,x\ny,1.000000,0.125000\nx,0.125000,0.875000\n");
  CHECK(ranking_csv(*r.ranking) ==
        "rank,counter_id,h1_per_bit,hinf_per_bit,combined_per_bit\n"
        "1,y,0.750000,0.500000,1.250000\n2,x,0.500000,0.250000,0.750000\n");
}

TEST_CASE("golden csv round-trips byte for byte") {
  auto text = golden("small_run.csv");
  auto run = parse_wide_csv(text, "small_run");
  CHECK(run.counters.size() == 6);
  CHECK(write_wide_csv(run) == text);
  auto spec = synth::parse_run_spec(golden("small.spec"));
  auto regenerated = synth::generate_run(spec);
  CHECK(write_wide_csv(regenerated) == text);
}

TEST_CASE("golden reports reproduce and round-trip") {
  auto run = parse_wide_csv(golden("small_run.csv"), "small_run");
  AssessmentReport r;
  r.runs.push_back(RunMetadata::of(run));
  for (const auto& c : run.counters) r.assessments.push_back(assess_counter(c));
  auto text = golden("small_assess.json");
  CHECK(serialize_report(r) == text);
  CHECK(serialize_report(parse_report(text)) == text);
  auto pipeline = golden("small_pipeline.json");
  CHECK(serialize_report(parse_report(pipeline)) == pipeline);
}

TEST_CASE("scatter plot markers and corners") {
  std::vector<EntropyAssessment> pts{point("top", 1, 1), point("origin", 0, 0), point("mid", 0.5, 0.25)};
  auto svg = render_entropy_scatter(pts);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<circle") == 3);
  CHECK(svg.find("cx=\"500.00\" cy=\"30.00\"") != std::string::npos);
  CHECK(svg.find("cx=\"60.00\" cy=\"470.00\"") != std::string::npos);
  CHECK(svg.find("<title>top") != std::string::npos);
  CHECK(svg == render_entropy_scatter(pts));
  std::vector<EntropyAssessment> zeros(4, point("z", 0, 0));
  auto z = render_entropy_scatter(zeros);
  CHECK(count(z, "cx=\"60.00\" cy=\"470.00\"") == 4);
}

TEST_CASE("scatter plot escapes ids") {
  std::vector<EntropyAssessment> pts{point("a<b&c", 0.1, 0.1)};
  auto svg = render_entropy_scatter(pts, "t & t");
  CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
  CHECK(svg.find("a<b") == std::string::npos);
}
