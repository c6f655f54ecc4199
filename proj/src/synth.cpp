#include "ctrent/synth.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>

namespace ctrent::synth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Uniform on [lo, hi]: discard words below 2^64 mod n, then lo + word mod n.
std::uint64_t draw_between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t range = hi - lo;
  if (range == ~std::uint64_t{0}) return rng();
  const std::uint64_t n = range + 1;
  const std::uint64_t reject_below = (0 - n) % n;
  std::uint64_t w = rng();
  while (w < reject_below) w = rng();
  return lo + w % n;
}

bool draw_event(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

std::uint64_t seed_of(const SourceParams& params) {
  return std::visit(Overloaded{
                        [](const Uniform64& p) { return p.seed; },
                        [](const SingleRandomBit& p) { return p.seed; },
                        [](const OscillateThenFreeze& p) { return p.seed; },
                        [](const SparseEvent& p) { return p.seed; },
                        [](const auto&) { return std::uint64_t{0}; },
                    },
                    params);
}

void set_seed(SourceParams& params, std::uint64_t seed) {
  std::visit(Overloaded{
                 [&](Uniform64& p) { p.seed = seed; },
                 [&](SingleRandomBit& p) { p.seed = seed; },
                 [&](OscillateThenFreeze& p) { p.seed = seed; },
                 [&](SparseEvent& p) { p.seed = seed; },
                 [](auto&) {},
             },
             params);
}

std::string where(const SourceSpec& spec) { return "counter '" + spec.counter_id + "': "; }

}  // namespace

std::uint64_t CopyTransform::apply(std::uint64_t v) const {
  switch (kind) {
    case Kind::identity:
      return v;
    case Kind::scale:
      return v * factor;
    case Kind::divide:
      return v / factor;
  }
  return v;
}

std::string CopyTransform::to_string() const {
  switch (kind) {
    case Kind::identity:
      return "identity";
    case Kind::scale:
      return "scale:" + std::to_string(factor);
    case Kind::divide:
      return "div:" + std::to_string(factor);
  }
  return "identity";
}

CopyTransform CopyTransform::parse(std::string_view text) {
  if (text == "identity") return {};
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("transform '" + std::string(text) + "' is not identity, scale:N or div:N");
  }
  auto name = text.substr(0, colon);
  auto arg = text.substr(colon + 1);
  std::uint64_t factor = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), factor);
  if (ec != std::errc{} || ptr != arg.data() + arg.size() || arg.empty()) {
    throw InputError("transform factor '" + std::string(arg) + "' is not an unsigned integer");
  }
  if (name == "scale") return {Kind::scale, factor};
  if (name == "div") {
    if (factor == 0) throw InputError("div:0 is not a valid transform");
    return {Kind::divide, factor};
  }
  throw InputError("unknown transform '" + std::string(name) + "'");
}

std::string_view kind_name(const SourceParams& params) {
  return std::visit(Overloaded{
                        [](const Constant&) { return std::string_view("constant"); },
                        [](const Incremental&) { return std::string_view("incremental"); },
                        [](const Uniform64&) { return std::string_view("uniform64"); },
                        [](const SingleRandomBit&) { return std::string_view("single_random_bit"); },
                        [](const OscillateThenFreeze&) {
                          return std::string_view("oscillate_then_freeze");
                        },
                        [](const DerivedCopy&) { return std::string_view("derived_copy"); },
                        [](const SparseEvent&) { return std::string_view("sparse_event"); },
                    },
                    params);
}

CounterTrace generate(const SourceSpec& spec, const CounterTrace* source) {
  if (spec.counter_id.empty()) throw InputError("synthetic counter needs an id");
  if (spec.length < 2) throw InputError(where(spec) + "length must be at least 2");

  CounterTrace out{spec.counter_id, std::vector<std::uint64_t>(spec.length), kDefaultIntervalMs};
  auto& v = out.samples;

  std::visit(
      Overloaded{
          [&](const Constant& p) { std::fill(v.begin(), v.end(), p.value); },
          [&](const Incremental& p) {
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = p.start + p.step * i;
          },
          [&](const Uniform64& p) {
            if (p.bits < 1 || p.bits > 64) throw InputError(where(spec) + "bits must be in 1..64");
            std::mt19937_64 rng(p.seed);
            for (auto& x : v) x = rng() >> (64 - p.bits);
          },
          [&](const SingleRandomBit& p) {
            std::mt19937_64 rng(p.seed);
            for (auto& x : v) x = rng() >> 63;
          },
          [&](const OscillateThenFreeze& p) {
            if (p.lo > p.hi) throw InputError(where(spec) + "lo exceeds hi");
            std::mt19937_64 rng(p.seed);
            for (std::size_t i = 0; i < v.size(); ++i) {
              v[i] = i < p.switch_index ? draw_between(rng, p.lo, p.hi) : p.hi;
            }
          },
          [&](const DerivedCopy& p) {
            if (source == nullptr || source->counter_id != p.source_id) {
              throw InputError(where(spec) + "derived copy needs source trace '" + p.source_id +
                               "'");
            }
            if (source->size() != spec.length) {
              throw InputError(where(spec) + "source '" + p.source_id + "' has " +
                               std::to_string(source->size()) + " samples, expected " +
                               std::to_string(spec.length));
            }
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = p.transform.apply(source->samples[i]);
          },
          [&](const SparseEvent& p) {
            if (!(p.event_probability >= 0.0 && p.event_probability <= 1.0)) {
              throw InputError(where(spec) + "event probability must be in [0, 1]");
            }
            std::mt19937_64 rng(p.seed);
            std::uint64_t count = 0;
            v[0] = 0;
            for (std::size_t i = 1; i < v.size(); ++i) {
              if (draw_event(rng, p.event_probability)) ++count;
              v[i] = count;
            }
          },
      },
      spec.params);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view counter_id,
                          std::uint64_t spec_seed) {
  return splitmix64(splitmix64(run_seed) ^ fnv1a64(counter_id) ^ spec_seed);
}

TraceRun generate_run(const std::vector<SourceSpec>& specs, std::uint64_t run_seed,
                      std::string run_id, std::uint32_t interval_ms) {
  TraceRun run;
  run.run_id = std::move(run_id);

  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!index.emplace(specs[i].counter_id, i).second) {
      throw InputError("duplicate synthetic counter id '" + specs[i].counter_id + "'");
    }
    if (specs[i].length != specs.front().length) {
      throw InputError(where(specs[i]) + "length " + std::to_string(specs[i].length) +
                       " differs from " + std::to_string(specs.front().length));
    }
  }

  std::vector<std::optional<CounterTrace>> traces(specs.size());
  // Derived copies are resolved once their source exists; each pass must
  // make progress or the remaining references are missing or cyclic.
  std::size_t remaining = specs.size();
  while (remaining > 0) {
    std::size_t progressed = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (traces[i]) continue;
      SourceSpec spec = specs[i];
      set_seed(spec.params, derive_seed(run_seed, spec.counter_id, seed_of(spec.params)));
      const CounterTrace* source = nullptr;
      if (const auto* copy = std::get_if<DerivedCopy>(&spec.params)) {
        auto it = index.find(copy->source_id);
        if (it == index.end()) {
          throw InputError(where(spec) + "unknown source '" + copy->source_id + "'");
        }
        if (!traces[it->second]) continue;
        source = &*traces[it->second];
      }
      traces[i] = generate(spec, source);
      traces[i]->sample_interval_ms = interval_ms;
      ++progressed;
      --remaining;
    }
    if (progressed == 0) throw InputError("derived copies form a cycle");
  }

  std::vector<std::uint64_t> timestamps(specs.empty() ? 0 : specs.front().length);
  for (std::size_t r = 0; r < timestamps.size(); ++r) {
    timestamps[r] = static_cast<std::uint64_t>(r) * interval_ms;
  }
  for (auto& t : traces) run.counters.push_back(std::move(*t));
  if (interval_ms > 0) run.round_timestamps_ms = std::move(timestamps);
  return run;
}

// ---------------------------------------------------------------------------
// Spec file parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

struct Section {
  std::string counter_id;
  std::size_t line = 0;
  std::map<std::string, std::pair<std::string, std::size_t>> values;  // key -> (value, line)
};

class KeyReader {
 public:
  KeyReader(const Section& s, std::string context) : section_(s), context_(std::move(context)) {}

  bool has(const std::string& key) const { return section_.values.contains(key); }

  const std::string& text(const std::string& key) const {
    used_.insert(key);
    auto it = section_.values.find(key);
    if (it == section_.values.end()) throw InputError(context_ + "missing key '" + key + "'");
    return it->second.first;
  }

  std::uint64_t u64(const std::string& key) const {
    const auto& t = text(key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
      throw InputError(line_of(key) + "'" + key + "' must be an unsigned integer, got '" + t + "'");
    }
    return v;
  }

  std::uint64_t u64_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? u64(key) : fallback;
  }

  double real(const std::string& key) const {
    const auto& t = text(key);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
      throw InputError(line_of(key) + "'" + key + "' must be a number, got '" + t + "'");
    }
    return v;
  }

  void reject_unused() const {
    for (const auto& [key, value] : section_.values) {
      if (!used_.contains(key)) throw InputError(line_of(key) + "unexpected key '" + key + "'");
    }
  }

 private:
  std::string line_of(const std::string& key) const {
    auto it = section_.values.find(key);
    return "line " + std::to_string(it == section_.values.end() ? section_.line : it->second.second) +
           ": " + context_;
  }

  const Section& section_;
  std::string context_;
  mutable std::set<std::string> used_;
};

SourceParams parse_params(const KeyReader& keys) {
  const auto& kind = keys.text("kind");
  if (kind == "constant") return Constant{keys.u64("value")};
  if (kind == "incremental") return Incremental{keys.u64_or("start", 0), keys.u64_or("step", 1)};
  if (kind == "uniform64") {
    return Uniform64{keys.u64_or("seed", 0), static_cast<unsigned>(keys.u64_or("bits", 64))};
  }
  if (kind == "single_random_bit") return SingleRandomBit{keys.u64_or("seed", 0)};
  if (kind == "oscillate_then_freeze") {
    return OscillateThenFreeze{keys.u64("lo"), keys.u64("hi"), keys.u64("switch_index"),
                               keys.u64_or("seed", 0)};
  }
  if (kind == "derived_copy") {
    CopyTransform t;
    if (keys.has("transform")) t = CopyTransform::parse(keys.text("transform"));
    return DerivedCopy{keys.text("source"), t};
  }
  if (kind == "sparse_event") {
    return SparseEvent{keys.real("probability"), keys.u64_or("seed", 0)};
  }
  throw InputError("unknown counter kind '" + kind + "'");
}

}  // namespace

RunSpec parse_run_spec(std::string_view text) {
  Section global;
  std::vector<Section> sections;
  Section* current = &global;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    auto hash = raw.find('#');
    auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    const auto at = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(at + "unterminated section header");
      auto inner = trim(line.substr(1, line.size() - 2));
      if (!inner.starts_with("counter ") || trim(inner.substr(8)).empty()) {
        throw InputError(at + "section header must be '[counter <id>]'");
      }
      sections.push_back(Section{std::string(trim(inner.substr(8))), line_no, {}});
      current = &sections.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError(at + "expected 'key = value'");
    auto key = std::string(trim(line.substr(0, eq)));
    auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) throw InputError(at + "empty key");
    if (!current->values.emplace(key, std::make_pair(value, line_no)).second) {
      throw InputError(at + "duplicate key '" + key + "'");
    }
  }

  RunSpec spec;
  KeyReader g(global, "");
  if (g.has("run_id")) spec.run_id = g.text("run_id");
  spec.run_seed = g.u64_or("run_seed", 0);
  spec.interval_ms = static_cast<std::uint32_t>(g.u64_or("interval_ms", kDefaultIntervalMs));
  const bool has_default_length = g.has("length");
  const std::size_t default_length = g.u64_or("length", 0);
  g.reject_unused();

  if (sections.empty()) throw InputError("spec defines no counters");
  for (const auto& s : sections) {
    KeyReader keys(s, "counter '" + s.counter_id + "': ");
    SourceSpec src;
    src.counter_id = s.counter_id;
    if (!keys.has("length") && !has_default_length) {
      throw InputError("line " + std::to_string(s.line) + ": counter '" + s.counter_id +
                       "' has no length and no default length is set");
    }
    src.length = keys.u64_or("length", default_length);
    src.params = parse_params(keys);
    keys.reject_unused();
    spec.counters.push_back(std::move(src));
  }
  return spec;
}

TraceRun generate_run(const RunSpec& spec) {
  return generate_run(spec.counters, spec.run_seed, spec.run_id, spec.interval_ms);
}

}  // namespace ctrent::synth
