#include "ctrent/preprocess.hpp"

#include <string>

namespace ctrent {

namespace {

void check_fold_width(unsigned alpha) {
  if (!is_fold_width(alpha)) {
    throw InputError("fold width " + std::to_string(alpha) + " does not divide 64");
  }
}

void check_symbol_width(unsigned symbol_width) {
  if (symbol_width != 4 && symbol_width != 8) {
    throw InputError("symbol width must be 4 or 8, got " + std::to_string(symbol_width));
  }
}

constexpr std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

std::uint64_t encode_difference(std::uint64_t from, std::uint64_t to, bool* overflow) {
  // |to - from| always fits in 64 bits; only the sign needs the 65th bit.
  const bool negative = to < from;
  const std::uint64_t magnitude = negative ? from - to : to - from;
  if (overflow != nullptr) *overflow = magnitude > kMagnitudeMask;
  const std::uint64_t reduced = magnitude & kMagnitudeMask;
  if (reduced == 0) return 0;
  return negative ? (kSignBit | reduced) : reduced;
}

std::uint64_t apply_difference(std::uint64_t from, std::uint64_t encoded) {
  const std::uint64_t magnitude = encoded & kMagnitudeMask;
  return (encoded & kSignBit) != 0 ? from - magnitude : from + magnitude;
}

DeltaSequence delta(std::span<const std::uint64_t> samples) {
  if (samples.size() < 2) {
    throw InputError("difference operator needs at least 2 samples, got " +
                     std::to_string(samples.size()));
  }
  DeltaSequence out;
  out.deltas.resize(samples.size() - 1);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    bool overflow = false;
    out.deltas[i] = encode_difference(samples[i], samples[i + 1], &overflow);
    if (overflow) ++out.overflow_count;
  }
  return out;
}

DeltaSequence delta(const CounterTrace& trace) {
  if (trace.size() < 2) {
    throw InputError("counter '" + trace.counter_id + "' has " + std::to_string(trace.size()) +
                     " samples; at least 2 required");
  }
  return delta(std::span<const std::uint64_t>(trace.samples));
}

std::uint64_t fold(std::uint64_t value, unsigned alpha) {
  check_fold_width(alpha);
  // Halving XOR: after folding to width w the low w bits hold the XOR of all
  // w-bit fields.
  for (unsigned width = 32; width >= alpha; width /= 2) {
    value ^= value >> width;
    if (width == alpha) break;
  }
  return value & low_mask(alpha);
}

SymbolStream pack(std::span<const std::uint64_t> folded, unsigned alpha, unsigned symbol_width) {
  check_fold_width(alpha);
  check_symbol_width(symbol_width);
  const std::uint64_t value_mask = low_mask(alpha);
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if ((folded[i] & ~value_mask) != 0) {
      throw InputError("value at index " + std::to_string(i) + " does not fit in " +
                       std::to_string(alpha) + " bits");
    }
  }

  SymbolStream out{alpha, symbol_width, {}};
  if (alpha <= symbol_width) {
    const std::size_t per_symbol = symbol_width / alpha;
    const std::size_t count = folded.size() / per_symbol;
    out.symbols.resize(count);
    for (std::size_t s = 0; s < count; ++s) {
      unsigned symbol = 0;
      for (std::size_t k = 0; k < per_symbol; ++k) {
        symbol = (symbol << alpha) | static_cast<unsigned>(folded[s * per_symbol + k]);
      }
      out.symbols[s] = static_cast<std::uint8_t>(symbol);
    }
  } else {
    const unsigned chunks = alpha / symbol_width;
    const std::uint64_t chunk_mask = low_mask(symbol_width);
    out.symbols.reserve(folded.size() * chunks);
    for (auto v : folded) {
      for (unsigned k = chunks; k-- > 0;) {
        out.symbols.push_back(static_cast<std::uint8_t>((v >> (k * symbol_width)) & chunk_mask));
      }
    }
  }
  return out;
}

std::vector<std::uint64_t> unpack(const SymbolStream& stream) {
  check_fold_width(stream.alpha);
  check_symbol_width(stream.symbol_width);
  std::vector<std::uint64_t> values;
  const unsigned alpha = stream.alpha;
  const unsigned width = stream.symbol_width;
  if (alpha <= width) {
    const unsigned per_symbol = width / alpha;
    values.reserve(stream.size() * per_symbol);
    for (auto symbol : stream.symbols) {
      for (unsigned k = per_symbol; k-- > 0;) {
        values.push_back((symbol >> (k * alpha)) & low_mask(alpha));
      }
    }
  } else {
    const unsigned chunks = alpha / width;
    values.reserve(stream.size() / chunks);
    for (std::size_t i = 0; i + chunks <= stream.size(); i += chunks) {
      std::uint64_t v = 0;
      for (unsigned k = 0; k < chunks; ++k) v = (v << width) | stream.symbols[i + k];
      values.push_back(v);
    }
  }
  return values;
}

SymbolStream to_nibbles(const SymbolStream& bytes) {
  if (bytes.symbol_width != 8) {
    throw InputError("to_nibbles expects a byte stream, got symbol width " +
                     std::to_string(bytes.symbol_width));
  }
  SymbolStream out{bytes.alpha, 4, {}};
  out.symbols.resize(bytes.size() * 2);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    out.symbols[2 * i] = static_cast<std::uint8_t>(bytes.symbols[i] >> 4);
    out.symbols[2 * i + 1] = static_cast<std::uint8_t>(bytes.symbols[i] & 0x0F);
  }
  return out;
}

SymbolStream fold_and_pack(std::span<const std::uint64_t> deltas, unsigned alpha) {
  check_fold_width(alpha);
  std::vector<std::uint64_t> folded(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) folded[i] = fold(deltas[i], alpha);
  return pack(folded, alpha, 8);
}

SymbolStream preprocess_counter(const CounterTrace& trace, unsigned alpha) {
  return fold_and_pack(delta(trace).deltas, alpha);
}

}  // namespace ctrent
