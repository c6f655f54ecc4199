#include "ctrent/cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace ctrent::cli {

using nlohmann::ordered_json;

std::string format_fixed6(double value) {
  if (!std::isfinite(value)) throw InputError("cannot serialize a non-finite number");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace {

bool is_flat_numeric_array(const ordered_json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v) {
    if (!e.is_number()) return false;
  }
  return true;
}

void emit(const ordered_json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, child] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += ordered_json(key).dump();
        out += ": ";
        emit(child, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      if (is_flat_numeric_array(v)) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i > 0) out += ", ";
          emit(v[i], indent + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner;
        emit(v[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_fixed6(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

ordered_json to_json(const EntropyAssessment& a) {
  ordered_json per_alpha = ordered_json::array();
  for (const auto& [alpha, e] : a.per_alpha) {
    per_alpha.push_back({{"alpha", alpha},
                         {"bytes", e.byte_count},
                         {"h1_bits_per_byte", e.h1_bits},
                         {"hinf_bits_per_byte", e.hinf_bits}});
  }
  return {{"counter_id", a.counter_id},
          {"delta_overflow_count", a.overflow_count},
          {"per_alpha", per_alpha},
          {"robust_h1_bits_per_byte", a.robust_h1},
          {"robust_hinf_bits_per_byte", a.robust_hinf},
          {"h1_bits_per_bit", a.h1_per_bit},
          {"hinf_bits_per_bit", a.hinf_per_bit},
          {"combined_bits_per_bit", a.combined_per_bit}};
}

ordered_json to_json(const EliminationReport& r) {
  ordered_json stages = ordered_json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"name", s.name}, {"surviving", s.surviving}, {"eliminated", s.eliminated}});
  }
  return {{"input_count", r.input_count}, {"stages", stages}, {"survivors", r.survivors}};
}

ordered_json to_json(const RankingReport& r) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"rank", e.rank},
                       {"counter_id", e.counter_id},
                       {"h1_bits_per_bit", e.h1_per_bit},
                       {"hinf_bits_per_bit", e.hinf_per_bit},
                       {"combined_bits_per_bit", e.combined_per_bit}});
  }
  return {{"k", r.k}, {"entries", entries}};
}

ordered_json to_json(const DependencyReport& r) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < r.matrix.size(); ++j) row.push_back(r.matrix.at(i, j));
    rows.push_back(row);
  }
  ordered_json groups = ordered_json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"members", g.members},
                      {"representative", g.representative},
                      {"max_normalized_mi", g.max_mi}});
  }
  return {{"threshold_normalized", r.threshold},
          {"counter_ids", r.matrix.counter_ids},
          {"normalized_mi", rows},
          {"groups", groups},
          {"selected", r.selected}};
}

ordered_json to_json(const RobustnessSeries& s) {
  ordered_json series = ordered_json::array();
  for (const auto& p : s.per_pair_series) series.push_back(p);
  ordered_json pairs = ordered_json::array();
  for (const auto& p : kRunPairs) pairs.push_back({p[0], p[1]});
  return {{"counter_id", s.counter_id},
          {"window_nibbles", s.window_len},
          {"step_nibbles", s.step},
          {"threshold_normalized", s.threshold},
          {"classification", to_string(s.classification)},
          {"suspiciously_correlated", s.suspiciously_correlated},
          {"run_pairs", pairs},
          {"pair_mean_normalized_mi", s.pair_means},
          {"per_pair_normalized_mi", series},
          {"min_normalized_mi", s.min_series},
          {"avg_normalized_mi", s.avg_series},
          {"max_normalized_mi", s.max_series}};
}

ordered_json to_json(const EntropyBudget& b) {
  return {{"alpha", b.alpha},
          {"convention", to_string(b.convention)},
          {"sleep_ms", b.sleep_ms},
          {"collect_ms", b.collect_ms},
          {"cycle_ms", b.cycle_ms},
          {"bits_per_cycle", b.bits_per_cycle},
          {"bits_per_second", b.bits_per_second},
          {"selected", b.selected}};
}

// Parsing ------------------------------------------------------------------

const ordered_json& field(const ordered_json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(std::string("report is missing field '") + key + "'");
  }
  return obj.at(key);
}

template <class T>
T get(const ordered_json& obj, const char* key) {
  try {
    return field(obj, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report field '") + key + "': " + e.what());
  }
}

EntropyAssessment assessment_from(const ordered_json& j) {
  EntropyAssessment a;
  a.counter_id = get<std::string>(j, "counter_id");
  a.overflow_count = get<std::size_t>(j, "delta_overflow_count");
  for (const auto& e : field(j, "per_alpha")) {
    a.per_alpha[get<unsigned>(e, "alpha")] =
        AlphaEntropy{get<double>(e, "h1_bits_per_byte"), get<double>(e, "hinf_bits_per_byte"),
                     get<std::size_t>(e, "bytes")};
  }
  a.robust_h1 = get<double>(j, "robust_h1_bits_per_byte");
  a.robust_hinf = get<double>(j, "robust_hinf_bits_per_byte");
  a.h1_per_bit = get<double>(j, "h1_bits_per_bit");
  a.hinf_per_bit = get<double>(j, "hinf_bits_per_bit");
  a.combined_per_bit = get<double>(j, "combined_bits_per_bit");
  return a;
}

EliminationReport elimination_from(const ordered_json& j) {
  EliminationReport r;
  r.input_count = get<std::size_t>(j, "input_count");
  for (const auto& s : field(j, "stages")) {
    r.stages.push_back({get<std::string>(s, "name"), get<std::size_t>(s, "surviving"),
                        get<std::vector<std::string>>(s, "eliminated")});
  }
  r.survivors = get<std::vector<std::string>>(j, "survivors");
  return r;
}

RankingReport ranking_from(const ordered_json& j) {
  RankingReport r;
  r.k = get<std::size_t>(j, "k");
  for (const auto& e : field(j, "entries")) {
    r.entries.push_back({get<std::size_t>(e, "rank"), get<std::string>(e, "counter_id"),
                         get<double>(e, "h1_bits_per_bit"), get<double>(e, "hinf_bits_per_bit"),
                         get<double>(e, "combined_bits_per_bit")});
  }
  return r;
}

DependencyReport dependency_from(const ordered_json& j) {
  DependencyReport r;
  r.threshold = get<double>(j, "threshold_normalized");
  r.matrix.counter_ids = get<std::vector<std::string>>(j, "counter_ids");
  const auto n = r.matrix.counter_ids.size();
  const auto rows = get<std::vector<std::vector<double>>>(j, "normalized_mi");
  if (rows.size() != n) throw InputError("report MI matrix has the wrong number of rows");
  for (const auto& row : rows) {
    if (row.size() != n) throw InputError("report MI matrix is not square");
    r.matrix.values.insert(r.matrix.values.end(), row.begin(), row.end());
  }
  for (const auto& g : field(j, "groups")) {
    r.groups.push_back({get<std::vector<std::string>>(g, "members"),
                        get<std::string>(g, "representative"),
                        get<double>(g, "max_normalized_mi")});
  }
  r.selected = get<std::vector<std::string>>(j, "selected");
  return r;
}

RobustnessSeries robustness_from(const ordered_json& j) {
  RobustnessSeries s;
  s.counter_id = get<std::string>(j, "counter_id");
  s.window_len = get<std::size_t>(j, "window_nibbles");
  s.step = get<std::size_t>(j, "step_nibbles");
  s.threshold = get<double>(j, "threshold_normalized");
  const auto cls = get<std::string>(j, "classification");
  if (cls != "upper" && cls != "lower") throw InputError("unknown classification '" + cls + "'");
  s.classification = cls == "upper" ? RobustnessClass::upper : RobustnessClass::lower;
  s.suspiciously_correlated = get<bool>(j, "suspiciously_correlated");
  s.pair_means = get<std::array<double, 3>>(j, "pair_mean_normalized_mi");
  s.per_pair_series = get<std::array<std::vector<double>, 3>>(j, "per_pair_normalized_mi");
  s.min_series = get<std::vector<double>>(j, "min_normalized_mi");
  s.avg_series = get<std::vector<double>>(j, "avg_normalized_mi");
  s.max_series = get<std::vector<double>>(j, "max_normalized_mi");
  return s;
}

EntropyBudget budget_from(const ordered_json& j) {
  EntropyBudget b;
  b.alpha = get<unsigned>(j, "alpha");
  const auto conv = get<std::string>(j, "convention");
  if (conv != "per_alpha" && conv != "robust") {
    throw InputError("unknown budget convention '" + conv + "'");
  }
  b.convention = conv == "robust" ? BudgetConvention::robust : BudgetConvention::per_alpha;
  b.sleep_ms = get<double>(j, "sleep_ms");
  b.collect_ms = get<double>(j, "collect_ms");
  b.cycle_ms = get<double>(j, "cycle_ms");
  b.bits_per_cycle = get<double>(j, "bits_per_cycle");
  b.bits_per_second = get<double>(j, "bits_per_second");
  b.selected = get<std::vector<std::string>>(j, "selected");
  return b;
}

}  // namespace

RunMetadata RunMetadata::of(const TraceRun& run) {
  return {run.run_id, run.counters.size(), run.rounds(),
          run.counters.empty() ? kDefaultIntervalMs : run.counters.front().sample_interval_ms};
}

std::string to_canonical_json(const ordered_json& value) {
  std::string out;
  emit(value, 0, out);
  out += '\n';
  return out;
}

std::string serialize_report(const AssessmentReport& report) {
  ordered_json j;
  j["schema_version"] = report.schema_version;
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"run_id", r.run_id},
                    {"counters", r.counters},
                    {"rounds", r.rounds},
                    {"sample_interval_ms", r.sample_interval_ms}});
  }
  j["runs"] = runs;
  ordered_json assessments = ordered_json::array();
  for (const auto& a : report.assessments) assessments.push_back(to_json(a));
  j["assessments"] = assessments;
  if (report.elimination) j["elimination"] = to_json(*report.elimination);
  if (report.ranking) j["ranking"] = to_json(*report.ranking);
  if (report.dependency) j["dependency"] = to_json(*report.dependency);
  if (!report.robustness.empty()) {
    ordered_json rs = ordered_json::array();
    for (const auto& s : report.robustness) rs.push_back(to_json(s));
    j["robustness"] = rs;
  }
  if (report.budget) j["budget"] = to_json(*report.budget);
  if (report.final_selection) j["final_selection"] = *report.final_selection;
  j["warnings"] = report.warnings;
  return to_canonical_json(j);
}

AssessmentReport parse_report(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  AssessmentReport r;
  r.schema_version = get<int>(j, "schema_version");
  if (r.schema_version != kReportSchemaVersion) {
    throw InputError("unsupported report schema version " + std::to_string(r.schema_version));
  }
  for (const auto& run : field(j, "runs")) {
    r.runs.push_back({get<std::string>(run, "run_id"), get<std::size_t>(run, "counters"),
                      get<std::size_t>(run, "rounds"),
                      get<std::uint32_t>(run, "sample_interval_ms")});
  }
  for (const auto& a : field(j, "assessments")) r.assessments.push_back(assessment_from(a));
  if (j.contains("elimination")) r.elimination = elimination_from(j["elimination"]);
  if (j.contains("ranking")) r.ranking = ranking_from(j["ranking"]);
  if (j.contains("dependency")) r.dependency = dependency_from(j["dependency"]);
  if (j.contains("robustness")) {
    for (const auto& s : j["robustness"]) r.robustness.push_back(robustness_from(s));
  }
  if (j.contains("budget")) r.budget = budget_from(j["budget"]);
  if (j.contains("final_selection")) {
    r.final_selection = get<std::vector<std::string>>(j, "final_selection");
  }
  r.warnings = get<std::vector<std::string>>(j, "warnings");
  return r;
}

std::string mi_matrix_csv(const MiMatrix& matrix) {
  std::string out = "counter_id";
  for (const auto& id : matrix.counter_ids) out += "," + id;
  out += '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += matrix.counter_ids[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) out += "," + format_fixed6(matrix.at(i, j));
    out += '\n';
  }
  return out;
}

std::string ranking_csv(const RankingReport& ranking) {
  std::string out = "rank,counter_id,h1_per_bit,hinf_per_bit,combined_per_bit\n";
  for (const auto& e : ranking.entries) {
    out += std::to_string(e.rank) + "," + e.counter_id + "," + format_fixed6(e.h1_per_bit) + "," +
           format_fixed6(e.hinf_per_bit) + "," + format_fixed6(e.combined_per_bit) + "\n";
  }
  return out;
}

}  // namespace ctrent::cli
