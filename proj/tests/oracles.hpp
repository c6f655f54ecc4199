#pragma once

// Straightforward reference implementations used to check the library.
// They favour obviousness over speed: bit loops, 128-bit arithmetic and
// long double accumulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

__extension__ typedef __int128 i128;

inline std::uint64_t fold(std::uint64_t v, unsigned alpha) {
  std::uint64_t out = 0;
  for (unsigned j = 0; j < alpha; ++j) {
    unsigned bit = 0;
    for (unsigned k = j; k < 64; k += alpha) bit ^= static_cast<unsigned>((v >> k) & 1u);
    out |= static_cast<std::uint64_t>(bit) << j;
  }
  return out;
}

struct Delta {
  std::vector<std::uint64_t> deltas;
  std::size_t overflows = 0;
};

inline Delta delta(const std::vector<std::uint64_t>& x) {
  Delta d;
  const i128 half = static_cast<i128>(1) << 63;
  for (std::size_t i = 1; i < x.size(); ++i) {
    i128 diff = static_cast<i128>(x[i]) - static_cast<i128>(x[i - 1]);
    i128 mag = diff < 0 ? -diff : diff;
    if (mag >= half) ++d.overflows;
    auto low = static_cast<std::uint64_t>(mag % half);
    std::uint64_t enc = low;
    if (diff < 0 && low != 0) enc |= std::uint64_t{1} << 63;
    d.deltas.push_back(enc);
  }
  return d;
}

// Concatenate alpha-bit values MSB first and cut into width-bit symbols.
inline std::vector<std::uint8_t> pack(const std::vector<std::uint64_t>& values, unsigned alpha,
                                      unsigned width) {
  std::vector<int> bits;
  for (auto v : values) {
    for (int b = static_cast<int>(alpha) - 1; b >= 0; --b) bits.push_back(static_cast<int>((v >> b) & 1u));
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + width <= bits.size(); i += width) {
    unsigned s = 0;
    for (unsigned k = 0; k < width; ++k) s = (s << 1) | static_cast<unsigned>(bits[i + k]);
    out.push_back(static_cast<std::uint8_t>(s));
  }
  return out;
}

inline long double shannon(const std::vector<std::uint64_t>& counts) {
  long double n = 0;
  for (auto c : counts) n += static_cast<long double>(c);
  long double h = 0;
  for (auto c : counts) {
    if (c == 0) continue;
    long double p = static_cast<long double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

inline long double min_entropy(const std::vector<std::uint64_t>& counts) {
  long double n = 0;
  std::uint64_t m = 0;
  for (auto c : counts) {
    n += static_cast<long double>(c);
    m = std::max(m, c);
  }
  return -std::log2(static_cast<long double>(m) / n);
}

inline std::vector<std::uint64_t> histogram(const std::vector<std::uint8_t>& s, std::size_t k) {
  std::vector<std::uint64_t> h(k, 0);
  for (auto v : s) ++h[v];
  return h;
}

// Mutual information of paired nibbles, in bits, unclamped.
inline long double mutual_information(const std::vector<std::uint8_t>& x,
                                      const std::vector<std::uint8_t>& y) {
  std::vector<std::uint64_t> joint(256, 0);
  for (std::size_t i = 0; i < x.size(); ++i) ++joint[x[i] * 16u + y[i]];
  return shannon(histogram(x, 16)) + shannon(histogram(y, 16)) - shannon(joint);
}

inline std::vector<std::uint8_t> random_nibbles(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& s : v) s = static_cast<std::uint8_t>(rng() >> 60);
  return v;
}

}  // namespace oracle
