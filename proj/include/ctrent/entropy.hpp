#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctrent/preprocess.hpp"
#include "ctrent/trace.hpp"

namespace ctrent {

/// Occurrence counts over a fixed alphabet; probabilities are count / total.
struct SymbolDistribution {
  std::size_t alphabet_size = 0;
  std::vector<std::uint64_t> counts;  // indexed by symbol, size == alphabet_size
  std::uint64_t total = 0;

  double probability(std::size_t symbol) const {
    return static_cast<double>(counts[symbol]) / static_cast<double>(total);
  }
  bool operator==(const SymbolDistribution&) const = default;
};

SymbolDistribution estimate_distribution(const SymbolStream& stream);

/// Builds a distribution directly from counts; alphabet size is counts.size().
SymbolDistribution distribution_from_counts(std::vector<std::uint64_t> counts);

/// -sum p lg p with 0 lg 0 = 0, in bits.
double shannon_entropy(const SymbolDistribution& dist);

/// -lg max p, in bits.
double min_entropy(const SymbolDistribution& dist);

/// Fold widths whose minimum defines the robust estimate.
inline constexpr std::array<unsigned, 4> kRobustAlphas{1, 2, 4, 8};

struct AlphaEntropy {
  double h1_bits = 0.0;    // per byte
  double hinf_bits = 0.0;  // per byte
  std::size_t byte_count = 0;

  bool operator==(const AlphaEntropy&) const = default;
};

struct EntropyAssessment {
  std::string counter_id;
  std::map<unsigned, AlphaEntropy> per_alpha;
  double robust_h1 = 0.0;    // bits per byte
  double robust_hinf = 0.0;  // bits per byte
  double h1_per_bit = 0.0;
  double hinf_per_bit = 0.0;
  double combined_per_bit = 0.0;
  std::size_t overflow_count = 0;

  bool operator==(const EntropyAssessment&) const = default;
};

/// Byte-level H1/Hinf of delta -> fold -> pack for each alpha, then the
/// minimum over kRobustAlphas scaled per bit. `alphas` may add widths (16,
/// 32) that are reported but never enter the minimum; it must contain at
/// least one robust width.
EntropyAssessment assess_counter(const CounterTrace& trace,
                                 std::span<const unsigned> alphas = kRobustAlphas);

}  // namespace ctrent
