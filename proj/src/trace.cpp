#include "ctrent/trace.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace ctrent {

namespace {

std::string line_prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

std::uint64_t parse_u64(std::string_view field, std::size_t line_no, std::string_view column) {
  std::uint64_t value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value, 10);
  if (ec == std::errc::result_out_of_range) {
    throw InputError(line_prefix(line_no) + "value '" + std::string(field) + "' in column '" +
                     std::string(column) + "' overflows unsigned 64-bit");
  }
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw InputError(line_prefix(line_no) + "value '" + std::string(field) + "' in column '" +
                     std::string(column) + "' is not an unsigned decimal integer");
  }
  return value;
}

// Splits on ',' without allocating per field.
void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

const CounterTrace* TraceRun::find(std::string_view counter_id) const {
  for (const auto& c : counters) {
    if (c.counter_id == counter_id) return &c;
  }
  return nullptr;
}

std::vector<std::string> TraceRun::counter_ids() const {
  std::vector<std::string> ids;
  ids.reserve(counters.size());
  for (const auto& c : counters) ids.push_back(c.counter_id);
  return ids;
}

void TraceRun::validate() const {
  std::unordered_set<std::string_view> seen;
  for (const auto& c : counters) {
    if (c.counter_id.empty()) throw InputError("run '" + run_id + "': empty counter id");
    if (!seen.insert(c.counter_id).second) {
      throw InputError("run '" + run_id + "': duplicate counter id '" + c.counter_id + "'");
    }
    if (c.size() != rounds()) {
      throw InputError("run '" + run_id + "': counter '" + c.counter_id + "' has " +
                       std::to_string(c.size()) + " samples, expected " + std::to_string(rounds()));
    }
  }
  if (round_timestamps_ms) {
    const auto& ts = *round_timestamps_ms;
    if (!counters.empty() && ts.size() != rounds()) {
      throw InputError("run '" + run_id + "': " + std::to_string(ts.size()) +
                       " timestamps for " + std::to_string(rounds()) + " rounds");
    }
    for (std::size_t i = 1; i < ts.size(); ++i) {
      if (ts[i] <= ts[i - 1]) {
        throw InputError("run '" + run_id + "': timestamps not strictly increasing at round " +
                         std::to_string(i));
      }
    }
  }
}

TraceRun parse_wide_csv(std::string_view text, std::string run_id, Diagnostics* diag) {
  TraceRun run;
  run.run_id = std::move(run_id);

  std::vector<std::string_view> fields;
  std::vector<std::uint64_t> timestamps;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;

  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      // A single trailing newline is canonical; blank lines elsewhere are not.
      if (pos >= text.size()) break;
      throw InputError(line_prefix(line_no) + "blank line");
    }

    split_fields(line, fields);
    if (!have_header) {
      if (fields.size() < 2 || fields.front() != "t_ms") {
        throw InputError(line_prefix(line_no) + "header must be 't_ms,<id1>,<id2>,...'");
      }
      std::unordered_set<std::string_view> seen;
      for (std::size_t i = 1; i < fields.size(); ++i) {
        if (fields[i].empty()) throw InputError(line_prefix(line_no) + "empty counter id in header");
        if (!seen.insert(fields[i]).second) {
          throw InputError(line_prefix(line_no) + "duplicate counter id '" + std::string(fields[i]) +
                           "'");
        }
        run.counters.push_back(CounterTrace{std::string(fields[i]), {}, kDefaultIntervalMs});
      }
      have_header = true;
      continue;
    }

    if (fields.size() != run.counters.size() + 1) {
      throw InputError(line_prefix(line_no) + "expected " + std::to_string(run.counters.size() + 1) +
                       " fields, found " + std::to_string(fields.size()));
    }
    timestamps.push_back(parse_u64(fields[0], line_no, "t_ms"));
    for (std::size_t i = 1; i < fields.size(); ++i) {
      run.counters[i - 1].samples.push_back(
          parse_u64(fields[i], line_no, run.counters[i - 1].counter_id));
    }
  }

  if (!have_header) throw InputError("empty input: missing header line");
  if (timestamps.empty()) {
    warn(diag, "run '" + run.run_id + "' has a header but no data rows");
    return run;
  }

  bool monotone = true;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      warn(diag, "run '" + run.run_id + "': t_ms not strictly increasing at data row " +
                     std::to_string(i + 1) + "; timestamps dropped");
      monotone = false;
      break;
    }
  }
  if (monotone) {
    if (timestamps.size() >= 2) {
      auto step = timestamps[1] - timestamps[0];
      auto interval = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(step, std::numeric_limits<std::uint32_t>::max()));
      for (auto& c : run.counters) c.sample_interval_ms = interval;
    }
    run.round_timestamps_ms = std::move(timestamps);
  }
  return run;
}

std::string write_wide_csv(const TraceRun& run) {
  run.validate();
  if (run.counters.empty()) throw InputError("run '" + run.run_id + "' has no counters");

  std::string out;
  out.reserve(16 + run.rounds() * run.counters.size() * 12);
  out += "t_ms";
  for (const auto& c : run.counters) {
    out += ',';
    out += c.counter_id;
  }
  out += '\n';

  char buf[24];
  auto append = [&](std::uint64_t v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
  };
  const auto interval = run.counters.front().sample_interval_ms;
  for (std::size_t r = 0; r < run.rounds(); ++r) {
    append(run.round_timestamps_ms ? (*run.round_timestamps_ms)[r]
                                   : static_cast<std::uint64_t>(r) * interval);
    for (const auto& c : run.counters) {
      out += ',';
      append(c.samples[r]);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

TraceRun read_wide_csv_file(const std::filesystem::path& path, Diagnostics* diag) {
  return parse_wide_csv(read_text_file(path), path.stem().string(), diag);
}

void write_wide_csv_file(const std::filesystem::path& path, const TraceRun& run) {
  write_text_file(path, write_wide_csv(run));
}

}  // namespace ctrent
