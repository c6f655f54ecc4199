#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctrent/error.hpp"
#include "ctrent/preprocess.hpp"

namespace ctrent {

/// Maximum mutual information between two nibble streams, in bits.
inline constexpr double kNibbleMiBits = 4.0;
inline constexpr double kIndependenceThreshold = 0.10;
inline constexpr double kRobustnessThreshold = 0.021;
inline constexpr std::size_t kDefaultWindow = 1400;
inline constexpr std::size_t kDefaultStep = 100;

struct MutualInformation {
  double hx = 0.0;
  double hy = 0.0;
  double hxy = 0.0;
  double bits = 0.0;  // hx + hy - hxy, clamped into [0, min(hx, hy)]
  bool clamped = false;

  double normalized() const { return bits / kNibbleMiBits; }
};

/// I(X;Y) = H1(X) + H1(Y) - H1(X,Y) over paired nibbles (256-cell joint
/// histogram). Streams must be nibble-width and of equal nonzero length.
/// Streams shorter than ten times the joint alphabet are reported to `diag`.
MutualInformation mutual_information_detail(const SymbolStream& x, const SymbolStream& y,
                                            Diagnostics* diag = nullptr);

/// Mutual information in bits.
double mutual_information(const SymbolStream& x, const SymbolStream& y);

/// Normalized (divided by 4) pairwise mutual information.
struct MiMatrix {
  std::vector<std::string> counter_ids;
  std::vector<double> values;  // row-major, size n*n

  std::size_t size() const { return counter_ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * size() + j]; }
  bool operator==(const MiMatrix&) const = default;
};

struct CounterStream {
  std::string counter_id;
  SymbolStream nibbles;
};

/// Evaluates every unordered pair once (k(k-1)/2 pairs) plus the diagonal.
MiMatrix build_mi_matrix(std::span<const CounterStream> streams, Diagnostics* diag = nullptr);

struct DependencyGroup {
  std::vector<std::string> members;  // in matrix order
  std::string representative;
  double max_mi = 0.0;  // largest normalized MI between two members; 0 for singletons

  bool singleton() const { return members.size() == 1; }
  bool operator==(const DependencyGroup&) const = default;
};

struct DependencyReport {
  MiMatrix matrix;
  double threshold = kIndependenceThreshold;
  std::vector<DependencyGroup> groups;  // ordered by first member's matrix index
  std::vector<std::string> selected;    // representatives and singletons, matrix order

  const DependencyGroup* group_of(const std::string& counter_id) const;
  bool operator==(const DependencyReport&) const = default;
};

/// Connected components of the graph whose edges join counters with
/// normalized MI >= threshold. Each group's representative maximizes
/// `combined_metric`; ties go to the lexicographically smallest id.
DependencyReport dependency_groups(const MiMatrix& matrix, double threshold,
                                   const std::map<std::string, double>& combined_metric);

/// Normalized MI of aligned windows starting at 0, step, 2*step, ... up to
/// the last full window.
std::vector<double> sliding_mi(const SymbolStream& run_a, const SymbolStream& run_b,
                               std::size_t window_len, std::size_t step,
                               Diagnostics* diag = nullptr);

enum class RobustnessClass { upper, lower };

const char* to_string(RobustnessClass c);

/// Run pairs compared by classify_robustness, as indices into the runs.
inline constexpr std::array<std::array<std::size_t, 2>, 3> kRunPairs{{{0, 1}, {0, 2}, {1, 2}}};

struct RobustnessSeries {
  std::string counter_id;
  std::size_t window_len = kDefaultWindow;
  std::size_t step = kDefaultStep;
  double threshold = kRobustnessThreshold;
  std::array<std::vector<double>, 3> per_pair_series;  // order of kRunPairs
  std::array<double, 3> pair_means{};
  std::vector<double> min_series;
  std::vector<double> avg_series;
  std::vector<double> max_series;
  RobustnessClass classification = RobustnessClass::lower;
  /// Set when some pair's mean reaches the independence threshold: the runs
  /// look like copies of each other rather than independent samples.
  bool suspiciously_correlated = false;

  bool operator==(const RobustnessSeries&) const = default;
};

/// Upper if every pair's window-averaged normalized MI is >= threshold.
RobustnessSeries classify_robustness(std::string counter_id, std::span<const SymbolStream> runs,
                                     std::size_t window_len = kDefaultWindow,
                                     std::size_t step = kDefaultStep,
                                     double threshold = kRobustnessThreshold,
                                     Diagnostics* diag = nullptr);

}  // namespace ctrent
