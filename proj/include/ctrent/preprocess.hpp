#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctrent/trace.hpp"

namespace ctrent {

inline constexpr std::uint64_t kSignBit = std::uint64_t{1} << 63;
inline constexpr std::uint64_t kMagnitudeMask = kSignBit - 1;

/// Successive differences in sign-magnitude form: sign in bit 63, magnitude
/// (mod 2^63) in bits 0..62. Zero is always the all-zero word.
struct DeltaSequence {
  std::vector<std::uint64_t> deltas;
  /// Differences whose magnitude was >= 2^63 and got reduced.
  std::size_t overflow_count = 0;

  bool operator==(const DeltaSequence&) const = default;
};

DeltaSequence delta(std::span<const std::uint64_t> samples);
DeltaSequence delta(const CounterTrace& trace);

/// Encodes `to - from` exactly as delta() does for one pair.
std::uint64_t encode_difference(std::uint64_t from, std::uint64_t to, bool* overflow = nullptr);

/// Inverse of encode_difference for non-overflowing differences (wraps mod 2^64).
std::uint64_t apply_difference(std::uint64_t from, std::uint64_t encoded);

/// True for the widths that divide 64.
constexpr bool is_fold_width(unsigned alpha) {
  return alpha == 1 || alpha == 2 || alpha == 4 || alpha == 8 || alpha == 16 || alpha == 32 ||
         alpha == 64;
}

/// XOR of the 64/alpha consecutive alpha-bit fields of `value`.
std::uint64_t fold(std::uint64_t value, unsigned alpha);

/// Packed fixed-width symbols (nibbles or bytes), one per element.
struct SymbolStream {
  unsigned alpha = 8;
  unsigned symbol_width = 8;
  std::vector<std::uint8_t> symbols;

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  bool operator==(const SymbolStream&) const = default;
};

/// Packs alpha-bit values into symbols MSB-first. When alpha exceeds the
/// symbol width each value is split into chunks, most significant first.
/// An incomplete trailing symbol is dropped.
SymbolStream pack(std::span<const std::uint64_t> folded, unsigned alpha, unsigned symbol_width);

/// Recovers the alpha-bit values held in complete symbols of `stream`.
std::vector<std::uint64_t> unpack(const SymbolStream& stream);

/// Splits each byte into two nibbles, high nibble first.
SymbolStream to_nibbles(const SymbolStream& bytes);

/// Folds every delta with `alpha` and packs the results into bytes.
SymbolStream fold_and_pack(std::span<const std::uint64_t> deltas, unsigned alpha);

/// delta -> fold -> pack into bytes.
SymbolStream preprocess_counter(const CounterTrace& trace, unsigned alpha);

}  // namespace ctrent
