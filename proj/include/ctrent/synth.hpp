#pragma once

// Deterministic synthetic counters.
//
// Random draws use std::mt19937_64, whose output sequence is fixed by the C++
// standard (the 10000th output of a default-seeded engine is
// 9981545732273789042), so traces are reproducible across platforms and
// languages. Only raw 64-bit words are consumed; bounded and Bernoulli draws
// are derived from them by the rules documented on each generator below.
//
// Per-counter seeds inside a run are derived with the SplitMix64 output
// function (see derive_seed).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctrent/trace.hpp"

namespace ctrent::synth {

/// Repeats `value`.
struct Constant {
  std::uint64_t value = 0;
};

/// start, start + step, start + 2 step, ... (mod 2^64).
struct Incremental {
  std::uint64_t start = 0;
  std::uint64_t step = 1;
};

/// Independent draws uniform over [0, 2^bits): the top `bits` bits of each word.
struct Uniform64 {
  std::uint64_t seed = 0;
  unsigned bits = 64;
};

/// Values in {0, 1}: the top bit of each word.
struct SingleRandomBit {
  std::uint64_t seed = 0;
};

/// Uniform over [lo, hi] (rejection sampling on raw words) for indices below
/// switch_index, then constant hi.
struct OscillateThenFreeze {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t switch_index = 0;
  std::uint64_t seed = 0;
};

struct CopyTransform {
  enum class Kind { identity, scale, divide };
  Kind kind = Kind::identity;
  std::uint64_t factor = 1;

  std::uint64_t apply(std::uint64_t v) const;
  std::string to_string() const;
  static CopyTransform parse(std::string_view text);
};

/// Elementwise transform of another counter in the same run. `scale`
/// multiplies mod 2^64, `divide` truncates.
struct DerivedCopy {
  std::string source_id;
  CopyTransform transform;
};

/// Event counter starting at 0 that increments by one in each round with
/// probability p. A round fires when (word >> 11) * 2^-53 < p.
/// Not one of the observed counter shapes; models low-activity sources.
struct SparseEvent {
  double event_probability = 0.05;
  std::uint64_t seed = 0;
};

using SourceParams = std::variant<Constant, Incremental, Uniform64, SingleRandomBit,
                                  OscillateThenFreeze, DerivedCopy, SparseEvent>;

struct SourceSpec {
  std::string counter_id;
  std::size_t length = 0;
  SourceParams params;
};

std::string_view kind_name(const SourceParams& params);

/// Generates one trace. DerivedCopy needs its source trace.
CounterTrace generate(const SourceSpec& spec, const CounterTrace* source = nullptr);

/// SplitMix64 output function: one step of SplitMix64 from state `x`.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a 64-bit hash of `text`.
std::uint64_t fnv1a64(std::string_view text);

/// Seed used for counter `counter_id` in run `run_seed`:
///   splitmix64(splitmix64(run_seed) ^ fnv1a64(counter_id) ^ spec_seed)
std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view counter_id,
                          std::uint64_t spec_seed);

/// Generates every spec with seeds from derive_seed. Derived copies may
/// reference any other counter of the run; output order follows `specs`.
TraceRun generate_run(const std::vector<SourceSpec>& specs, std::uint64_t run_seed,
                      std::string run_id = "synthetic",
                      std::uint32_t interval_ms = kDefaultIntervalMs);

/// Parsed spec file.
struct RunSpec {
  std::string run_id = "synthetic";
  std::uint64_t run_seed = 0;
  std::uint32_t interval_ms = kDefaultIntervalMs;
  std::vector<SourceSpec> counters;
};

/// Key-value spec file:
///
///     # comment
///     run_id = demo
///     run_seed = 1
///     length = 1000          # default for every counter
///     interval_ms = 20
///
///     [counter cpu]
///     kind = uniform64       # constant | incremental | uniform64 |
///     seed = 7               # single_random_bit | oscillate_then_freeze |
///                            # derived_copy | sparse_event
///     [counter cpu_kb]
///     kind = derived_copy
///     source = cpu
///     transform = scale:1024 # identity | scale:N | div:N
///
/// Keys per kind: constant(value), incremental(start, step),
/// uniform64(seed, bits), single_random_bit(seed),
/// oscillate_then_freeze(lo, hi, switch_index, seed),
/// derived_copy(source, transform), sparse_event(probability, seed).
/// Any counter may override `length`.
RunSpec parse_run_spec(std::string_view text);

TraceRun generate_run(const RunSpec& spec);

}  // namespace ctrent::synth
