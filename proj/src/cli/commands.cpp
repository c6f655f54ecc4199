#include "ctrent/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "ctrent/cli/report.hpp"
#include "ctrent/cli/sampler.hpp"
#include "ctrent/cli/svg_plot.hpp"
#include "ctrent/dependence.hpp"
#include "ctrent/entropy.hpp"
#include "ctrent/pipeline.hpp"
#include "ctrent/synth.hpp"
#include "ctrent/trace.hpp"

namespace ctrent::cli {

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 64 usage error, 65 invalid input data, "
    "69 unsupported platform (sample), 70 internal error, 74 I/O failure.";

class UnsupportedPlatform : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string input_long;
  std::vector<std::string> runs;
  std::string spec;
  std::string output;
  std::string json;
  std::string csv;
  std::string meta;
  std::vector<unsigned> alpha_set{kRobustAlphas.begin(), kRobustAlphas.end()};
  unsigned alpha = 1;
  std::size_t top = kDefaultTopK;
  std::size_t window = kDefaultWindow;
  std::size_t step = kDefaultStep;
  double mi_threshold = kIndependenceThreshold;
  double robust_threshold = kRobustnessThreshold;
  double sleep_ms = 20.0;
  std::optional<double> collect_ms;
  std::string convention = "per_alpha";
  std::vector<std::string> counters;
  std::size_t rounds = 0;
  unsigned interval_ms = 20;
};

TraceRun load_run(const std::string& path, Diagnostics& diag) {
  auto run = read_wide_csv_file(path, &diag);
  run.validate();
  if (run.rounds() == 0) throw InputError("'" + path + "' contains no data rows");
  return run;
}

void emit_warnings(const Diagnostics& diag, std::ostream& err) {
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<EntropyAssessment> assess_all(const TraceRun& run, std::span<const unsigned> alphas) {
  std::vector<EntropyAssessment> out;
  out.reserve(run.counters.size());
  for (const auto& c : run.counters) out.push_back(assess_counter(c, alphas));
  return out;
}

std::vector<CounterTrace> pick(const TraceRun& run, const std::vector<std::string>& ids) {
  if (ids.empty()) return run.counters;
  std::vector<CounterTrace> out;
  for (const auto& id : ids) {
    const auto* c = run.find(id);
    if (c == nullptr) throw InputError("counter '" + id + "' not found in run '" + run.run_id + "'");
    out.push_back(*c);
  }
  return out;
}

SymbolStream nibbles_of(const CounterTrace& trace, unsigned alpha) {
  return to_nibbles(preprocess_counter(trace, alpha));
}

BudgetConvention parse_convention(const std::string& s) {
  if (s == "per_alpha") return BudgetConvention::per_alpha;
  if (s == "robust") return BudgetConvention::robust;
  throw InputError("convention must be per_alpha or robust");
}

DependencyReport analyse_dependence(const std::vector<CounterTrace>& traces,
                                    const std::vector<EntropyAssessment>& assessments,
                                    unsigned alpha, double threshold, Diagnostics& diag) {
  std::vector<CounterStream> streams;
  streams.reserve(traces.size());
  for (const auto& t : traces) streams.push_back({t.counter_id, nibbles_of(t, alpha)});
  auto matrix = build_mi_matrix(streams, &diag);
  std::map<std::string, double> metric;
  for (const auto& a : assessments) metric[a.counter_id] = a.combined_per_bit;
  return dependency_groups(matrix, threshold, metric);
}

// Commands ---------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  auto spec = synth::parse_run_spec(read_text_file(o.spec));
  auto run = synth::generate_run(spec);
  write_wide_csv_file(o.output, run);
  out << "wrote " << run.counters.size() << " counters x " << run.rounds() << " rounds to "
      << o.output << '\n';
  return kExitOk;
}

int cmd_assess(const Options& o, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  auto run = load_run(o.input, diag);
  AssessmentReport report;
  report.runs.push_back(RunMetadata::of(run));
  report.assessments = assess_all(run, o.alpha_set);
  report.warnings = diag.warnings;
  emit_warnings(diag, err);
  write_or_print(o.json, serialize_report(report), out);
  return kExitOk;
}

int cmd_eliminate(const Options& o, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  auto short_run = load_run(o.input, diag);
  auto long_run = load_run(o.input_long, diag);
  AssessmentReport report;
  report.runs = {RunMetadata::of(short_run), RunMetadata::of(long_run)};
  report.elimination = eliminate(short_run, long_run, o.alpha_set);
  report.warnings = diag.warnings;
  emit_warnings(diag, err);

  out << "stage,surviving\ninput," << report.elimination->input_count << '\n';
  for (const auto& s : report.elimination->stages) out << s.name << ',' << s.surviving << '\n';
  if (!o.json.empty()) write_text_file(o.json, serialize_report(report));
  return kExitOk;
}

int cmd_rank(const Options& o, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  auto run = load_run(o.input, diag);
  AssessmentReport report;
  report.runs.push_back(RunMetadata::of(run));
  report.assessments = assess_all(run, o.alpha_set);
  report.ranking = rank(report.assessments, o.top, &diag);
  report.warnings = diag.warnings;
  emit_warnings(diag, err);
  out << ranking_csv(*report.ranking);
  if (!o.json.empty()) write_text_file(o.json, serialize_report(report));
  return kExitOk;
}

int cmd_mi(const Options& o, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  auto run = load_run(o.input, diag);
  auto traces = pick(run, o.counters);
  AssessmentReport report;
  report.runs.push_back(RunMetadata::of(run));
  for (const auto& t : traces) report.assessments.push_back(assess_counter(t));
  report.dependency = analyse_dependence(traces, report.assessments, o.alpha, o.mi_threshold, diag);
  report.warnings = diag.warnings;
  emit_warnings(diag, err);
  write_or_print(o.csv, mi_matrix_csv(report.dependency->matrix), out);
  if (!o.json.empty()) write_text_file(o.json, serialize_report(report));
  return kExitOk;
}

int cmd_robust(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.runs.size() != 3) {
    throw InputError("exactly 3 runs required, got " + std::to_string(o.runs.size()));
  }
  Diagnostics diag;
  std::vector<TraceRun> runs;
  for (const auto& path : o.runs) runs.push_back(load_run(path, diag));

  std::vector<std::string> ids = o.counters;
  if (ids.empty()) {
    for (const auto& c : runs[0].counters) {
      if (runs[1].find(c.counter_id) && runs[2].find(c.counter_id)) ids.push_back(c.counter_id);
    }
    if (ids.empty()) throw InputError("the 3 runs share no counters");
  }

  AssessmentReport report;
  for (const auto& r : runs) report.runs.push_back(RunMetadata::of(r));
  std::ostringstream table;
  table << "counter_id,classification,pair01_mean,pair02_mean,pair12_mean\n";
  for (const auto& id : ids) {
    std::vector<SymbolStream> streams;
    for (const auto& r : runs) {
      const auto* c = r.find(id);
      if (c == nullptr) throw InputError("counter '" + id + "' missing from run '" + r.run_id + "'");
      streams.push_back(nibbles_of(*c, o.alpha));
    }
    auto series =
        classify_robustness(id, streams, o.window, o.step, o.robust_threshold, &diag);
    table << id << ',' << to_string(series.classification);
    for (double m : series.pair_means) table << ',' << format_fixed6(m);
    table << '\n';
    report.robustness.push_back(std::move(series));
  }
  report.warnings = diag.warnings;
  emit_warnings(diag, err);
  out << table.str();
  if (!o.json.empty()) write_text_file(o.json, serialize_report(report));
  return kExitOk;
}

int cmd_budget(const Options& o, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  auto run = load_run(o.input, diag);
  auto traces = pick(run, o.counters);
  AssessmentReport report;
  report.runs.push_back(RunMetadata::of(run));
  for (const auto& t : traces) report.assessments.push_back(assess_counter(t));
  report.budget = budget(report.assessments, o.alpha, o.sleep_ms, *o.collect_ms,
                         parse_convention(o.convention));
  report.warnings = diag.warnings;
  emit_warnings(diag, err);
  out << "counters,bits_per_cycle,cycle_ms,bits_per_second\n"
      << report.budget->selected.size() << ',' << format_fixed6(report.budget->bits_per_cycle)
      << ',' << format_fixed6(report.budget->cycle_ms) << ','
      << format_fixed6(report.budget->bits_per_second) << '\n';
  if (!o.json.empty()) write_text_file(o.json, serialize_report(report));
  return kExitOk;
}

int cmd_pipeline(const Options& o, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  auto short_run = load_run(o.input, diag);
  auto long_run = load_run(o.input_long, diag);
  AssessmentReport report;
  report.runs = {RunMetadata::of(short_run), RunMetadata::of(long_run)};
  report.elimination = eliminate(short_run, long_run, o.alpha_set);

  std::vector<CounterTrace> green;
  for (const auto& id : report.elimination->survivors) green.push_back(*long_run.find(id));
  report.assessments = [&] {
    std::vector<EntropyAssessment> v;
    for (const auto& t : green) v.push_back(assess_counter(t, o.alpha_set));
    return v;
  }();
  if (report.assessments.empty()) throw InputError("no counter survived elimination");
  report.ranking = rank(report.assessments, o.top, &diag);

  std::vector<CounterTrace> top;
  std::vector<EntropyAssessment> top_assessments;
  for (const auto& e : report.ranking->entries) {
    top.push_back(*long_run.find(e.counter_id));
    for (const auto& a : report.assessments) {
      if (a.counter_id == e.counter_id) top_assessments.push_back(a);
    }
  }
  report.dependency = analyse_dependence(top, top_assessments, o.alpha, o.mi_threshold, diag);
  report.final_selection = select_final(*report.ranking, *report.dependency);

  if (o.collect_ms) {
    std::vector<EntropyAssessment> chosen;
    for (const auto& id : *report.final_selection) {
      for (const auto& a : top_assessments) {
        if (a.counter_id == id) chosen.push_back(a);
      }
    }
    report.budget =
        budget(chosen, o.alpha, o.sleep_ms, *o.collect_ms, parse_convention(o.convention));
  }
  report.warnings = diag.warnings;
  emit_warnings(diag, err);

  out << "input counters: " << report.elimination->input_count << '\n';
  for (const auto& s : report.elimination->stages) {
    out << "after " << s.name << ": " << s.surviving << '\n';
  }
  out << "ranked: " << report.ranking->entries.size() << '\n';
  out << "final selection: " << report.final_selection->size() << '\n';
  if (report.budget) {
    out << "budget: " << format_fixed6(report.budget->bits_per_cycle) << " bits per "
        << format_fixed6(report.budget->cycle_ms) << " ms\n";
  }
  if (!o.json.empty()) write_text_file(o.json, serialize_report(report));
  return kExitOk;
}

int cmd_plot(const Options& o, std::ostream& out, std::ostream&) {
  auto report = parse_report(read_text_file(o.input));
  if (report.assessments.empty()) throw InputError("report has no assessments to plot");
  write_text_file(o.output, render_entropy_scatter(report.assessments));
  out << "plotted " << report.assessments.size() << " counters to " << o.output << '\n';
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  auto source = make_host_counter_source();
  if (!source) throw UnsupportedPlatform("unsupported platform: no enumerable host counters");
  auto result = sample_counters(*source, o.rounds, std::chrono::milliseconds(o.interval_ms));
  write_wide_csv_file(o.output, result.run);
  if (result.read_failures > 0) {
    err << "warning: " << result.read_failures << " counter reads failed; previous values kept\n";
  }
  out << "sampled " << result.run.counters.size() << " counters x " << o.rounds
      << " rounds; mean collect " << format_fixed6(result.mean_collect_ms()) << " ms\n";
  if (!o.meta.empty()) {
    nlohmann::ordered_json meta{{"rounds", o.rounds},
                                {"interval_ms", o.interval_ms},
                                {"counters", result.run.counters.size()},
                                {"read_failures", result.read_failures},
                                {"mean_collect_ms", result.mean_collect_ms()},
                                {"collect_ms", result.collect_ms}};
    write_text_file(o.meta, to_canonical_json(meta));
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Entropy assessment of sampled system counters", "ctrent"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  auto alpha_set = [&](CLI::App* c) {
    c->add_option("--alpha-set", o.alpha_set, "Fold widths to evaluate (comma separated)")
        ->delimiter(',')
        ->check(CLI::IsMember({1u, 2u, 4u, 8u, 16u, 32u}));
  };
  auto alpha = [&](CLI::App* c) {
    c->add_option("--alpha", o.alpha, "Fold width for nibble streams / budget")
        ->check(CLI::IsMember({1u, 2u, 4u, 8u}))
        ->capture_default_str();
  };
  auto json = [&](CLI::App* c, const char* what) {
    c->add_option("--json", o.json, what);
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic run from a spec file");
  synth->add_option("spec", o.spec, "Spec file")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--output", o.output, "Output wide CSV")->required();

  auto* assess = app.add_subcommand("assess", "Entropy assessment of every counter");
  assess->add_option("input", o.input, "Wide CSV run")->required();
  alpha_set(assess);
  json(assess, "Write the JSON report here (default: stdout)");

  auto* elim = app.add_subcommand("eliminate", "Staged elimination of constant counters");
  elim->add_option("short_run", o.input, "Short wide CSV run")->required();
  elim->add_option("long_run", o.input_long, "Long wide CSV run")->required();
  alpha_set(elim);
  json(elim, "Also write the JSON report here");

  auto* rnk = app.add_subcommand("rank", "Rank counters by H1 + Hinf per bit");
  rnk->add_option("input", o.input, "Wide CSV run")->required();
  rnk->add_option("--top", o.top, "Selection size")->capture_default_str();
  alpha_set(rnk);
  json(rnk, "Also write the JSON report here");

  auto* mi = app.add_subcommand("mi", "Pairwise mutual information and dependency groups");
  mi->add_option("input", o.input, "Wide CSV run")->required();
  alpha(mi);
  mi->add_option("--mi-threshold", o.mi_threshold, "Normalized MI grouping threshold")
      ->capture_default_str();
  mi->add_option("--counters", o.counters, "Restrict to these counters")->delimiter(',');
  mi->add_option("--csv", o.csv, "Write the matrix CSV here (default: stdout)");
  json(mi, "Also write the JSON report here");

  auto* robust = app.add_subcommand("robust", "Cross-run robustness with a sliding window");
  robust->add_option("runs", o.runs, "Exactly three wide CSV runs")->required();
  alpha(robust);
  robust->add_option("--window", o.window, "Window length in nibbles")->capture_default_str();
  robust->add_option("--step", o.step, "Window step in nibbles")->capture_default_str();
  robust->add_option("--robust-threshold", o.robust_threshold, "Upper/lower threshold")
      ->capture_default_str();
  robust->add_option("--counters", o.counters, "Restrict to these counters")->delimiter(',');
  json(robust, "Also write the JSON report here");

  auto* bud = app.add_subcommand("budget", "Entropy per sampling cycle of a counter selection");
  bud->add_option("input", o.input, "Wide CSV run")->required();
  alpha(bud);
  bud->add_option("--sleep-ms", o.sleep_ms, "Sleep per round")->capture_default_str();
  bud->add_option("--collect-ms", o.collect_ms, "Collection time per round")->required();
  bud->add_option("--counters", o.counters, "Counters to include (default: all)")
      ->delimiter(',');
  bud->add_option("--convention", o.convention, "per_alpha or robust")
      ->check(CLI::IsMember({"per_alpha", "robust"}))
      ->capture_default_str();
  json(bud, "Also write the JSON report here");

  auto* pipe = app.add_subcommand("pipeline", "Elimination, ranking, dependence and budget");
  pipe->add_option("short_run", o.input, "Short wide CSV run")->required();
  pipe->add_option("long_run", o.input_long, "Long wide CSV run")->required();
  alpha_set(pipe);
  alpha(pipe);
  pipe->add_option("--top", o.top, "Selection size")->capture_default_str();
  pipe->add_option("--mi-threshold", o.mi_threshold, "Normalized MI grouping threshold")
      ->capture_default_str();
  pipe->add_option("--sleep-ms", o.sleep_ms, "Sleep per round")->capture_default_str();
  pipe->add_option("--collect-ms", o.collect_ms, "Collection time per round (enables budget)");
  pipe->add_option("--convention", o.convention, "per_alpha or robust")
      ->check(CLI::IsMember({"per_alpha", "robust"}))
      ->capture_default_str();
  json(pipe, "Also write the JSON report here");

  auto* plot = app.add_subcommand("plot", "SVG scatter of H1 vs Hinf per bit from a report");
  plot->add_option("report", o.input, "JSON report")->required();
  plot->add_option("-o,--output", o.output, "Output SVG")->required();

  auto* sample = app.add_subcommand("sample", "Sample host counters into a wide CSV");
  sample->add_option("--interval-ms", o.interval_ms, "Sleep between rounds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample->add_option("--rounds", o.rounds, "Number of rounds")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("-o,--output", o.output, "Output wide CSV")->required();
  sample->add_option("--meta", o.meta, "Write per-round collection times (JSON) here");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(o, out, err);
    if (*assess) return cmd_assess(o, out, err);
    if (*elim) return cmd_eliminate(o, out, err);
    if (*rnk) return cmd_rank(o, out, err);
    if (*mi) return cmd_mi(o, out, err);
    if (*robust) return cmd_robust(o, out, err);
    if (*bud) return cmd_budget(o, out, err);
    if (*pipe) return cmd_pipeline(o, out, err);
    if (*plot) return cmd_plot(o, out, err);
    if (*sample) return cmd_sample(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UnsupportedPlatform& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace ctrent::cli
