#include "ctrent/pipeline.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace ctrent {

namespace {

bool all_equal(std::span<const std::uint64_t> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

bool all_equal(std::span<const std::uint8_t> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

const EliminationStage* EliminationReport::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

EliminationReport eliminate(const TraceRun& run_short, const TraceRun& run_long,
                            std::span<const unsigned> alphas) {
  run_short.validate();
  run_long.validate();
  if (run_short.rounds() < 2 && !run_short.counters.empty()) {
    throw InputError("short run needs at least 2 rounds");
  }
  if (run_long.rounds() < 2 && !run_long.counters.empty()) {
    throw InputError("long run needs at least 2 rounds");
  }
  for (auto a : alphas) {
    if (!is_fold_width(a) || a > 32) throw InputError("unsupported fold width " + std::to_string(a));
  }
  for (const auto& c : run_long.counters) {
    if (run_short.find(c.counter_id) == nullptr) {
      throw InputError("counter '" + c.counter_id + "' appears in the long run only");
    }
  }

  EliminationReport report;
  report.input_count = run_short.counters.size();

  std::vector<const CounterTrace*> alive;
  EliminationStage a{kStageConstantShort, 0, {}};
  for (const auto& c : run_short.counters) {
    if (all_equal(c.samples)) {
      a.eliminated.push_back(c.counter_id);
    } else {
      alive.push_back(&c);
    }
  }
  a.surviving = alive.size();
  report.stages.push_back(std::move(a));

  // From here on the long-run samples decide.
  std::vector<const CounterTrace*> next;
  EliminationStage b{kStageConstantLong, 0, {}};
  for (const auto* c : alive) {
    const auto* lc = run_long.find(c->counter_id);
    if (lc == nullptr) {
      throw InputError("counter '" + c->counter_id + "' survives the short run but is missing "
                       "from the long run");
    }
    if (all_equal(lc->samples)) {
      b.eliminated.push_back(c->counter_id);
    } else {
      next.push_back(lc);
    }
  }
  b.surviving = next.size();
  report.stages.push_back(std::move(b));
  alive.swap(next);
  next.clear();

  std::unordered_map<std::string_view, DeltaSequence> deltas;
  EliminationStage c_stage{kStageConstantDelta, 0, {}};
  for (const auto* c : alive) {
    auto d = delta(*c);
    if (all_equal(d.deltas)) {
      c_stage.eliminated.push_back(c->counter_id);
    } else {
      deltas.emplace(c->counter_id, std::move(d));
      next.push_back(c);
    }
  }
  c_stage.surviving = next.size();
  report.stages.push_back(std::move(c_stage));
  alive.swap(next);
  next.clear();

  EliminationStage d_stage{kStageConstantFold, 0, {}};
  for (const auto* c : alive) {
    const auto& d = deltas.at(c->counter_id);
    const bool constant_somewhere = std::any_of(alphas.begin(), alphas.end(), [&](unsigned alpha) {
      auto bytes = fold_and_pack(d.deltas, alpha);
      return bytes.empty() || all_equal(bytes.symbols);
    });
    if (constant_somewhere) {
      d_stage.eliminated.push_back(c->counter_id);
    } else {
      next.push_back(c);
    }
  }
  d_stage.surviving = next.size();
  report.stages.push_back(std::move(d_stage));

  for (const auto* c : next) report.survivors.push_back(c->counter_id);
  return report;
}

RankingReport rank(std::span<const EntropyAssessment> assessments, std::size_t k,
                   Diagnostics* diag) {
  if (k == 0) throw InputError("selection size must be at least 1");
  if (k > assessments.size()) {
    warn(diag, "requested top " + std::to_string(k) + " of " + std::to_string(assessments.size()) +
                   " counters; clamped");
    k = assessments.size();
  }
  std::vector<const EntropyAssessment*> order;
  order.reserve(assessments.size());
  for (const auto& a : assessments) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const auto* x, const auto* y) {
    if (x->combined_per_bit != y->combined_per_bit) return x->combined_per_bit > y->combined_per_bit;
    return x->counter_id < y->counter_id;
  });

  RankingReport report;
  report.k = k;
  for (std::size_t i = 0; i < k; ++i) {
    const auto* a = order[i];
    report.entries.push_back(
        {i + 1, a->counter_id, a->h1_per_bit, a->hinf_per_bit, a->combined_per_bit});
  }
  return report;
}

std::vector<std::string> select_final(const RankingReport& ranking,
                                      const DependencyReport& dependency) {
  std::unordered_set<std::string_view> ranked;
  for (const auto& e : ranking.entries) ranked.insert(e.counter_id);
  const auto& ids = dependency.matrix.counter_ids;
  std::unordered_set<std::string_view> analysed(ids.begin(), ids.end());
  if (ranked != analysed) {
    throw InputError("dependency report covers " + std::to_string(analysed.size()) +
                     " counters that do not match the " + std::to_string(ranked.size()) +
                     " ranked counters");
  }

  std::unordered_set<std::string_view> keep(dependency.selected.begin(),
                                            dependency.selected.end());
  std::vector<std::string> out;
  for (const auto& e : ranking.entries) {
    if (keep.contains(e.counter_id)) out.push_back(e.counter_id);
  }
  return out;
}

const char* to_string(BudgetConvention c) {
  return c == BudgetConvention::per_alpha ? "per_alpha" : "robust";
}

EntropyBudget budget(std::span<const EntropyAssessment> selected, unsigned alpha, double sleep_ms,
                     double collect_ms, BudgetConvention convention) {
  if (std::find(kRobustAlphas.begin(), kRobustAlphas.end(), alpha) == kRobustAlphas.end()) {
    throw InputError("budget fold width must be 1, 2, 4 or 8");
  }
  if (!(sleep_ms > 0.0) || !(collect_ms > 0.0)) {
    throw InputError("sleep and collection times must be positive");
  }
  EntropyBudget b;
  b.alpha = alpha;
  b.convention = convention;
  b.sleep_ms = sleep_ms;
  b.collect_ms = collect_ms;
  for (const auto& a : selected) {
    b.selected.push_back(a.counter_id);
    if (convention == BudgetConvention::robust) {
      b.bits_per_cycle += a.robust_h1;
      continue;
    }
    auto it = a.per_alpha.find(alpha);
    if (it == a.per_alpha.end()) {
      throw InputError("assessment of '" + a.counter_id + "' has no entry for fold width " +
                       std::to_string(alpha));
    }
    b.bits_per_cycle += it->second.h1_bits;
  }
  b.cycle_ms = (8.0 / alpha) * (sleep_ms + collect_ms);
  b.bits_per_second = b.bits_per_cycle * 1000.0 / b.cycle_ms;
  return b;
}

}  // namespace ctrent
