#include "ctrent/dependence.hpp"

#include <algorithm>
#include <numeric>

#include "ctrent/entropy.hpp"

namespace ctrent {

namespace {

constexpr std::size_t kJointAlphabet = 256;

void check_nibbles(const SymbolStream& s, const char* name) {
  if (s.symbol_width != 4) {
    throw InputError(std::string("stream ") + name + " must be nibble-width, got width " +
                     std::to_string(s.symbol_width));
  }
}

// Entropies of x, y and (x, y) over the index range [begin, end).
MutualInformation mi_over(const SymbolStream& x, const SymbolStream& y, std::size_t begin,
                          std::size_t end) {
  std::vector<std::uint64_t> cx(16, 0), cy(16, 0), cxy(kJointAlphabet, 0);
  for (std::size_t i = begin; i < end; ++i) {
    const auto a = x.symbols[i];
    const auto b = y.symbols[i];
    if (a > 15 || b > 15) throw InputError("nibble symbol out of range");
    ++cx[a];
    ++cy[b];
    ++cxy[a * 16u + b];
  }
  MutualInformation mi;
  mi.hx = shannon_entropy(distribution_from_counts(std::move(cx)));
  mi.hy = shannon_entropy(distribution_from_counts(std::move(cy)));
  mi.hxy = shannon_entropy(distribution_from_counts(std::move(cxy)));
  const double raw = mi.hx + mi.hy - mi.hxy;
  const double upper = std::min(mi.hx, mi.hy);
  mi.bits = std::clamp(raw, 0.0, upper);
  mi.clamped = mi.bits != raw;
  return mi;
}

}  // namespace

MutualInformation mutual_information_detail(const SymbolStream& x, const SymbolStream& y,
                                            Diagnostics* diag) {
  check_nibbles(x, "x");
  check_nibbles(y, "y");
  if (x.size() != y.size()) {
    throw InputError("mutual information needs equal lengths, got " + std::to_string(x.size()) +
                     " and " + std::to_string(y.size()));
  }
  if (x.empty()) throw InputError("mutual information of empty streams");
  if (x.size() < 10 * kJointAlphabet) {
    warn(diag, "only " + std::to_string(x.size()) +
                   " paired nibbles; joint histogram of 256 cells is undersampled");
  }
  auto mi = mi_over(x, y, 0, x.size());
  if (mi.clamped) warn(diag, "mutual information clamped from rounding residue");
  return mi;
}

double mutual_information(const SymbolStream& x, const SymbolStream& y) {
  return mutual_information_detail(x, y).bits;
}

MiMatrix build_mi_matrix(std::span<const CounterStream> streams, Diagnostics* diag) {
  MiMatrix m;
  const std::size_t n = streams.size();
  m.values.assign(n * n, 0.0);
  for (const auto& s : streams) m.counter_ids.push_back(s.counter_id);
  if (n == 0) return m;

  for (std::size_t i = 1; i < n; ++i) {
    if (streams[i].nibbles.size() != streams[0].nibbles.size()) {
      throw InputError("counter '" + streams[i].counter_id + "' has " +
                       std::to_string(streams[i].nibbles.size()) + " nibbles, expected " +
                       std::to_string(streams[0].nibbles.size()));
    }
  }

  Diagnostics local;
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      auto mi = mutual_information_detail(streams[i].nibbles, streams[j].nibbles,
                                          i == 0 && j == 0 ? &local : nullptr);
      if (mi.clamped) ++clamped;
      m.at(i, j) = m.at(j, i) = mi.normalized();
    }
  }
  if (diag != nullptr) {
    for (auto& w : local.warnings) diag->warn(std::move(w));
    if (clamped > 0) diag->warn(std::to_string(clamped) + " MI values clamped into range");
  }
  return m;
}

const DependencyGroup* DependencyReport::group_of(const std::string& counter_id) const {
  for (const auto& g : groups) {
    if (std::find(g.members.begin(), g.members.end(), counter_id) != g.members.end()) return &g;
  }
  return nullptr;
}

DependencyReport dependency_groups(const MiMatrix& matrix, double threshold,
                                   const std::map<std::string, double>& combined_metric) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InputError("dependency threshold must lie in (0, 1)");
  }
  const std::size_t n = matrix.size();
  if (matrix.values.size() != n * n) throw InputError("MI matrix is not square");

  // Union-find; the root is always the smallest index of its component.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix.at(i, j) >= threshold) {
        auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  DependencyReport report;
  report.matrix = matrix;
  report.threshold = threshold;
  std::vector<std::size_t> group_index(n, n);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) {
    auto root = find(i);
    if (group_index[root] == n) {
      group_index[root] = members.size();
      members.emplace_back();
    }
    members[group_index[root]].push_back(i);
  }

  std::vector<bool> chosen(n, false);
  for (const auto& idx : members) {
    DependencyGroup g;
    std::size_t best = idx.front();
    for (auto i : idx) {
      const auto& id = matrix.counter_ids[i];
      g.members.push_back(id);
      if (idx.size() == 1) break;
      auto it = combined_metric.find(id);
      if (it == combined_metric.end()) {
        throw InputError("no combined metric for grouped counter '" + id + "'");
      }
      const double best_metric = combined_metric.at(matrix.counter_ids[best]);
      if (it->second > best_metric ||
          (it->second == best_metric && id < matrix.counter_ids[best])) {
        best = i;
      }
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        g.max_mi = std::max(g.max_mi, matrix.at(idx[a], idx[b]));
      }
    }
    g.representative = matrix.counter_ids[best];
    chosen[best] = true;
    report.groups.push_back(std::move(g));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) report.selected.push_back(matrix.counter_ids[i]);
  }
  return report;
}

std::vector<double> sliding_mi(const SymbolStream& run_a, const SymbolStream& run_b,
                               std::size_t window_len, std::size_t step, Diagnostics* diag) {
  check_nibbles(run_a, "run_a");
  check_nibbles(run_b, "run_b");
  if (run_a.size() != run_b.size()) {
    throw InputError("runs differ in length: " + std::to_string(run_a.size()) + " vs " +
                     std::to_string(run_b.size()));
  }
  if (window_len == 0 || step == 0) throw InputError("window length and step must be positive");
  if (window_len > run_a.size()) {
    throw InputError("window of " + std::to_string(window_len) + " nibbles exceeds stream length " +
                     std::to_string(run_a.size()));
  }
  if (window_len < kJointAlphabet) {
    warn(diag, "window shorter than the 256-cell joint alphabet");
  }
  std::vector<double> series;
  series.reserve((run_a.size() - window_len) / step + 1);
  for (std::size_t start = 0; start + window_len <= run_a.size(); start += step) {
    series.push_back(mi_over(run_a, run_b, start, start + window_len).normalized());
  }
  return series;
}

const char* to_string(RobustnessClass c) { return c == RobustnessClass::upper ? "upper" : "lower"; }

RobustnessSeries classify_robustness(std::string counter_id, std::span<const SymbolStream> runs,
                                     std::size_t window_len, std::size_t step, double threshold,
                                     Diagnostics* diag) {
  if (runs.size() != 3) {
    throw InputError("exactly 3 runs required, got " + std::to_string(runs.size()));
  }
  RobustnessSeries out;
  out.counter_id = std::move(counter_id);
  out.window_len = window_len;
  out.step = step;
  out.threshold = threshold;

  for (std::size_t p = 0; p < kRunPairs.size(); ++p) {
    const auto [a, b] = kRunPairs[p];
    out.per_pair_series[p] = sliding_mi(runs[a], runs[b], window_len, step, p == 0 ? diag : nullptr);
    const auto& s = out.per_pair_series[p];
    out.pair_means[p] = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  }

  const std::size_t len = out.per_pair_series[0].size();
  out.min_series.resize(len);
  out.avg_series.resize(len);
  out.max_series.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double v0 = out.per_pair_series[0][i];
    const double v1 = out.per_pair_series[1][i];
    const double v2 = out.per_pair_series[2][i];
    out.min_series[i] = std::min({v0, v1, v2});
    out.max_series[i] = std::max({v0, v1, v2});
    // Keep min <= avg <= max despite rounding in the mean.
    out.avg_series[i] = std::clamp((v0 + v1 + v2) / 3.0, out.min_series[i], out.max_series[i]);
  }

  const bool all_above = std::all_of(out.pair_means.begin(), out.pair_means.end(),
                                     [&](double m) { return m >= threshold; });
  out.classification = all_above ? RobustnessClass::upper : RobustnessClass::lower;
  out.suspiciously_correlated = std::any_of(out.pair_means.begin(), out.pair_means.end(),
                                            [](double m) { return m >= kIndependenceThreshold; });
  if (out.suspiciously_correlated) {
    warn(diag, "counter '" + out.counter_id + "' runs share >= " +
                   std::to_string(kIndependenceThreshold) + " normalized MI");
  }
  return out;
}

}  // namespace ctrent
