#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctrent/trace.hpp"

namespace ctrent::cli {

/// A host facility exposing a fixed set of numeric counters.
class CounterSource {
 public:
  virtual ~CounterSource() = default;

  /// Counter names, fixed for the lifetime of the source.
  virtual const std::vector<std::string>& enumerate() = 0;

  /// One value per enumerated counter; nullopt where a read failed.
  virtual std::vector<std::optional<std::uint64_t>> read_all() = 0;
};

/// Counters of the running host, or nullptr when the platform has none we
/// know how to read. On Linux these are the integer fields of /proc/stat,
/// /proc/vmstat and /proc/meminfo.
std::unique_ptr<CounterSource> make_host_counter_source();

struct SamplingResult {
  TraceRun run;
  std::vector<double> collect_ms;  // per round
  std::size_t read_failures = 0;

  double mean_collect_ms() const;
};

/// Reads every counter, records it, then sleeps until the next round
/// boundary on a steady clock. A failed read repeats the counter's previous
/// value (0 in the first round) and is counted.
SamplingResult sample_counters(CounterSource& source, std::size_t rounds,
                               std::chrono::milliseconds interval);

}  // namespace ctrent::cli
