#include "ctrent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctrent {

namespace {

void check_distribution(const SymbolDistribution& dist) {
  if (dist.total == 0) throw InputError("distribution has no observations");
  if (dist.counts.size() != dist.alphabet_size) {
    throw InputError("distribution counts do not cover the alphabet");
  }
}

// Nonzero counts in ascending order. Entropies are summed in this order so the
// result depends only on the multiset of counts: relabeling symbols or
// swapping the roles of two streams in a joint histogram gives bit-identical
// values.
std::vector<std::uint64_t> sorted_nonzero(const SymbolDistribution& dist) {
  std::vector<std::uint64_t> nz;
  nz.reserve(dist.counts.size());
  for (auto c : dist.counts) {
    if (c != 0) nz.push_back(c);
  }
  std::sort(nz.begin(), nz.end());
  return nz;
}

double neg_lg_ratio(std::uint64_t count, std::uint64_t total) {
  // 0 - x keeps an exact zero positive.
  return 0.0 - std::log2(static_cast<double>(count) / static_cast<double>(total));
}

}  // namespace

SymbolDistribution estimate_distribution(const SymbolStream& stream) {
  if (stream.empty()) throw InputError("cannot estimate a distribution from an empty stream");
  if (stream.symbol_width != 4 && stream.symbol_width != 8) {
    throw InputError("symbol width must be 4 or 8");
  }
  SymbolDistribution dist;
  dist.alphabet_size = std::size_t{1} << stream.symbol_width;
  dist.counts.assign(dist.alphabet_size, 0);
  for (auto s : stream.symbols) {
    if (s >= dist.alphabet_size) throw InputError("symbol exceeds the alphabet");
    ++dist.counts[s];
  }
  dist.total = stream.size();
  return dist;
}

SymbolDistribution distribution_from_counts(std::vector<std::uint64_t> counts) {
  SymbolDistribution dist;
  dist.alphabet_size = counts.size();
  for (auto c : counts) dist.total += c;
  dist.counts = std::move(counts);
  check_distribution(dist);
  return dist;
}

double min_entropy(const SymbolDistribution& dist) {
  check_distribution(dist);
  const auto max_count = *std::max_element(dist.counts.begin(), dist.counts.end());
  return std::min(neg_lg_ratio(max_count, dist.total),
                  std::log2(static_cast<double>(dist.alphabet_size)));
}

double shannon_entropy(const SymbolDistribution& dist) {
  check_distribution(dist);
  // -sum p lg p rewritten as Hinf + sum p lg(c_max / c). Every term of the sum
  // is >= 0, so the computed H1 can never fall below the computed Hinf.
  const auto counts = sorted_nonzero(dist);
  const auto max_count = counts.back();
  const double total = static_cast<double>(dist.total);
  double spread = 0.0;
  for (auto c : counts) {
    const double cd = static_cast<double>(c);
    spread += (cd / total) * std::log2(static_cast<double>(max_count) / cd);
  }
  return std::min(min_entropy(dist) + spread,
                  std::log2(static_cast<double>(dist.alphabet_size)));
}

EntropyAssessment assess_counter(const CounterTrace& trace, std::span<const unsigned> alphas) {
  if (alphas.empty()) throw InputError("no fold widths requested");
  const bool has_robust = std::any_of(alphas.begin(), alphas.end(), [](unsigned a) {
    return std::find(kRobustAlphas.begin(), kRobustAlphas.end(), a) != kRobustAlphas.end();
  });
  if (!has_robust) throw InputError("fold widths must include at least one of 1, 2, 4, 8");
  for (auto a : alphas) {
    if (a > 32 || !is_fold_width(a)) {
      throw InputError("unsupported fold width " + std::to_string(a));
    }
  }

  const auto d = delta(trace);
  EntropyAssessment out;
  out.counter_id = trace.counter_id;
  out.overflow_count = d.overflow_count;
  out.robust_h1 = std::numeric_limits<double>::infinity();
  out.robust_hinf = std::numeric_limits<double>::infinity();

  for (auto alpha : alphas) {
    if (out.per_alpha.contains(alpha)) continue;
    const auto bytes = fold_and_pack(d.deltas, alpha);
    if (bytes.empty()) {
      throw InputError("counter '" + trace.counter_id + "' is too short for fold width " +
                       std::to_string(alpha) + " (" + std::to_string(trace.size()) + " samples)");
    }
    const auto dist = estimate_distribution(bytes);
    AlphaEntropy e{shannon_entropy(dist), min_entropy(dist), bytes.size()};
    out.per_alpha.emplace(alpha, e);
    if (std::find(kRobustAlphas.begin(), kRobustAlphas.end(), alpha) != kRobustAlphas.end()) {
      out.robust_h1 = std::min(out.robust_h1, e.h1_bits);
      out.robust_hinf = std::min(out.robust_hinf, e.hinf_bits);
    }
  }

  out.h1_per_bit = out.robust_h1 / 8.0;
  out.hinf_per_bit = out.robust_hinf / 8.0;
  out.combined_per_bit = out.h1_per_bit + out.hinf_per_bit;
  return out;
}

}  // namespace ctrent
