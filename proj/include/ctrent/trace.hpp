#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctrent/error.hpp"

namespace ctrent {

inline constexpr std::uint32_t kDefaultIntervalMs = 20;

/// One counter sampled once per round.
struct CounterTrace {
  std::string counter_id;
  std::vector<std::uint64_t> samples;
  std::uint32_t sample_interval_ms = kDefaultIntervalMs;

  std::size_t size() const { return samples.size(); }
  bool operator==(const CounterTrace&) const = default;
};

/// All counters of one sampling session, aligned by round index.
struct TraceRun {
  std::string run_id;
  std::vector<CounterTrace> counters;
  std::optional<std::vector<std::uint64_t>> round_timestamps_ms;

  /// Number of sampling rounds (0 for a run without counters).
  std::size_t rounds() const { return counters.empty() ? 0 : counters.front().size(); }

  const CounterTrace* find(std::string_view counter_id) const;
  std::vector<std::string> counter_ids() const;

  /// Throws InputError if ids are empty or duplicated, lengths differ, or
  /// timestamps are misaligned or not strictly increasing.
  void validate() const;

  bool operator==(const TraceRun&) const = default;
};

/// Parses the wide CSV format: header `t_ms,<id1>,<id2>,...`, then one row
/// per round with one unsigned decimal per column.
///
/// Non-monotone timestamps are reported through `diag` and dropped from the
/// result; every other defect throws InputError naming the line.
TraceRun parse_wide_csv(std::string_view text, std::string run_id = "run",
                        Diagnostics* diag = nullptr);

/// Canonical form: LF endings, no whitespace, decimal values. Runs without
/// timestamps get `t_ms = round * sample_interval_ms`.
std::string write_wide_csv(const TraceRun& run);

TraceRun read_wide_csv_file(const std::filesystem::path& path, Diagnostics* diag = nullptr);
void write_wide_csv_file(const std::filesystem::path& path, const TraceRun& run);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ctrent
