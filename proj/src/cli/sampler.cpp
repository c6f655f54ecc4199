#include "ctrent/cli/sampler.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace ctrent::cli {

namespace {

#if defined(__linux__)

bool parse_u64(const std::string& token, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size() && !token.empty();
}

// name -> value for every integer field we understand.
using Snapshot = std::vector<std::pair<std::string, std::uint64_t>>;

void read_stat(Snapshot& out) {
  static constexpr const char* kCpuFields[] = {"user",    "nice",  "system",  "idle",
                                               "iowait",  "irq",   "softirq", "steal",
                                               "guest",   "guest_nice"};
  std::ifstream in("/proc/stat");
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key, token;
    ls >> key;
    if (key.starts_with("cpu")) {
      for (std::size_t i = 0; i < std::size(kCpuFields) && ls >> token; ++i) {
        std::uint64_t v = 0;
        if (parse_u64(token, v)) out.emplace_back("stat." + key + "." + kCpuFields[i], v);
      }
    } else if (ls >> token) {
      // intr/softirq lead with their total; other keys carry a single value.
      std::uint64_t v = 0;
      if (parse_u64(token, v)) out.emplace_back("stat." + key, v);
    }
  }
}

void read_key_value(const char* path, const std::string& prefix, Snapshot& out) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key, token;
    if (!(ls >> key >> token)) continue;
    if (!key.empty() && key.back() == ':') key.pop_back();
    std::uint64_t v = 0;
    if (parse_u64(token, v)) out.emplace_back(prefix + key, v);
  }
}

Snapshot snapshot() {
  Snapshot s;
  read_stat(s);
  read_key_value("/proc/vmstat", "vmstat.", s);
  read_key_value("/proc/meminfo", "meminfo.", s);
  return s;
}

class ProcCounterSource final : public CounterSource {
 public:
  ProcCounterSource() {
    for (auto& [name, value] : snapshot()) {
      if (index_.emplace(name, names_.size()).second) names_.push_back(name);
    }
  }

  bool usable() const { return !names_.empty(); }

  const std::vector<std::string>& enumerate() override { return names_; }

  std::vector<std::optional<std::uint64_t>> read_all() override {
    std::vector<std::optional<std::uint64_t>> values(names_.size());
    for (auto& [name, value] : snapshot()) {
      auto it = index_.find(name);
      if (it != index_.end() && !values[it->second]) values[it->second] = value;
    }
    return values;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

#endif

}  // namespace

std::unique_ptr<CounterSource> make_host_counter_source() {
#if defined(__linux__)
  auto source = std::make_unique<ProcCounterSource>();
  if (source->usable()) return source;
#endif
  return nullptr;
}

double SamplingResult::mean_collect_ms() const {
  if (collect_ms.empty()) return 0.0;
  return std::accumulate(collect_ms.begin(), collect_ms.end(), 0.0) /
         static_cast<double>(collect_ms.size());
}

SamplingResult sample_counters(CounterSource& source, std::size_t rounds,
                               std::chrono::milliseconds interval) {
  using clock = std::chrono::steady_clock;
  if (interval.count() <= 0) throw InputError("sampling interval must be positive");

  const auto& names = source.enumerate();
  SamplingResult result;
  result.run.run_id = "host";
  for (const auto& n : names) {
    result.run.counters.push_back(
        CounterTrace{n, {}, static_cast<std::uint32_t>(interval.count())});
    result.run.counters.back().samples.reserve(rounds);
  }
  std::vector<std::uint64_t> timestamps;
  timestamps.reserve(rounds);

  const auto start = clock::now();
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto t0 = clock::now();
    auto values = source.read_all();
    const auto t1 = clock::now();
    result.collect_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());

    for (std::size_t i = 0; i < names.size(); ++i) {
      auto& samples = result.run.counters[i].samples;
      if (i < values.size() && values[i]) {
        samples.push_back(*values[i]);
      } else {
        ++result.read_failures;
        samples.push_back(samples.empty() ? 0 : samples.back());
      }
    }
    auto t_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(t0 - start).count());
    if (!timestamps.empty() && t_ms <= timestamps.back()) t_ms = timestamps.back() + 1;
    timestamps.push_back(t_ms);

    // A round is: read everything, then wait the full interval.
    if (r + 1 < rounds) std::this_thread::sleep_until(t1 + interval);
  }
  result.run.round_timestamps_ms = std::move(timestamps);
  return result;
}

}  // namespace ctrent::cli
