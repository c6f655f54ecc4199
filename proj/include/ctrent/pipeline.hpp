#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctrent/dependence.hpp"
#include "ctrent/entropy.hpp"
#include "ctrent/trace.hpp"

namespace ctrent {

inline constexpr std::size_t kDefaultShortRounds = 10'000;
inline constexpr std::size_t kDefaultLongRounds = 100'001;
inline constexpr std::size_t kDefaultTopK = 19;

/// Stage names, in the order they are applied.
inline constexpr const char* kStageConstantShort = "constant_short_run";
inline constexpr const char* kStageConstantLong = "constant_long_run";
inline constexpr const char* kStageConstantDelta = "constant_delta";
inline constexpr const char* kStageConstantFold = "constant_fold";

struct EliminationStage {
  std::string name;
  std::size_t surviving = 0;
  std::vector<std::string> eliminated;

  bool operator==(const EliminationStage&) const = default;
};

struct EliminationReport {
  std::size_t input_count = 0;
  std::vector<EliminationStage> stages;
  std::vector<std::string> survivors;  // "green" counters, short-run order

  const EliminationStage* stage(std::string_view name) const;
  bool operator==(const EliminationReport&) const = default;
};

/// Four-stage elimination of constant counters:
///   A. constant in the short run,
///   B. constant in the long run,
///   C. constant difference sequence (long run),
///   D. constant folded byte stream for some alpha (long run).
/// The long run may omit counters eliminated at stage A but must not contain
/// counters absent from the short run. A counter too short to yield a single
/// byte for some alpha counts as constant at stage D.
EliminationReport eliminate(const TraceRun& run_short, const TraceRun& run_long,
                            std::span<const unsigned> alphas = kRobustAlphas);

struct RankingEntry {
  std::size_t rank = 0;  // 1-based
  std::string counter_id;
  double h1_per_bit = 0.0;
  double hinf_per_bit = 0.0;
  double combined_per_bit = 0.0;

  bool operator==(const RankingEntry&) const = default;
};

struct RankingReport {
  std::vector<RankingEntry> entries;
  std::size_t k = 0;

  bool operator==(const RankingReport&) const = default;
};

/// Top-k by combined_per_bit descending, ties by counter id. A k larger than
/// the input is clamped and reported to `diag`.
RankingReport rank(std::span<const EntropyAssessment> assessments, std::size_t k,
                   Diagnostics* diag = nullptr);

/// Ranked counters that are singletons or group representatives, in rank order.
std::vector<std::string> select_final(const RankingReport& ranking,
                                      const DependencyReport& dependency);

enum class BudgetConvention {
  per_alpha,  // byte-level H1 at the configured alpha
  robust,     // byte-level min-over-alpha H1
};

const char* to_string(BudgetConvention c);

struct EntropyBudget {
  std::vector<std::string> selected;
  unsigned alpha = 1;
  BudgetConvention convention = BudgetConvention::per_alpha;
  double sleep_ms = 0.0;
  double collect_ms = 0.0;
  double bits_per_cycle = 0.0;
  double cycle_ms = 0.0;  // (8 / alpha) rounds per byte
  double bits_per_second = 0.0;

  bool operator==(const EntropyBudget&) const = default;
};

EntropyBudget budget(std::span<const EntropyAssessment> selected, unsigned alpha, double sleep_ms,
                     double collect_ms, BudgetConvention convention = BudgetConvention::per_alpha);

}  // namespace ctrent
