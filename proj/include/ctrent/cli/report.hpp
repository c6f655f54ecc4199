#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctrent/dependence.hpp"
#include "ctrent/entropy.hpp"
#include "ctrent/pipeline.hpp"
#include "ctrent/trace.hpp"

namespace ctrent::cli {

inline constexpr int kReportSchemaVersion = 1;

struct RunMetadata {
  std::string run_id;
  std::size_t counters = 0;
  std::size_t rounds = 0;
  std::uint32_t sample_interval_ms = kDefaultIntervalMs;

  static RunMetadata of(const TraceRun& run);
  bool operator==(const RunMetadata&) const = default;
};

/// Everything a command produced. Sections a command did not compute stay
/// empty and are omitted from the JSON.
struct AssessmentReport {
  int schema_version = kReportSchemaVersion;
  std::vector<RunMetadata> runs;
  std::vector<EntropyAssessment> assessments;
  std::optional<EliminationReport> elimination;
  std::optional<RankingReport> ranking;
  std::optional<DependencyReport> dependency;
  std::vector<RobustnessSeries> robustness;
  std::optional<EntropyBudget> budget;
  std::optional<std::vector<std::string>> final_selection;
  std::vector<std::string> warnings;

  bool operator==(const AssessmentReport&) const = default;
};

/// Fixed key order, 2-space indentation, numeric arrays on one line, reals
/// as fixed-point with 6 decimals. Identical reports give identical bytes.
std::string to_canonical_json(const nlohmann::ordered_json& value);

/// Reals in the result are rounded to 6 decimals, so
/// serialize(parse(serialize(r))) == serialize(r).
std::string serialize_report(const AssessmentReport& report);
AssessmentReport parse_report(std::string_view json_text);

/// Square matrix: header `counter_id,<id1>,...`, one row per counter.
std::string mi_matrix_csv(const MiMatrix& matrix);

/// `rank,counter_id,h1_per_bit,hinf_per_bit,combined_per_bit`.
std::string ranking_csv(const RankingReport& ranking);

/// Fixed 6-decimal rendering used by every text output.
std::string format_fixed6(double value);

}  // namespace ctrent::cli
