#include "ddmut/bench/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ddmut::bench {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return value;
}

namespace {

template <typename Int>
Int parse_int(const std::string& text) {
  Int value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string trace_csv(const TraceFile& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  const std::string prefix = std::to_string(trace.run_id) + ',' + std::to_string(trace.seed) + ',';
  for (const TraceRow& row : trace.rows) {
    out += prefix;
    out += std::to_string(row.iteration);
    out += ',';
    out += std::to_string(row.evaluations);
    out += ',';
    out += format_double(row.best_fitness);
    out += ',';
    if (row.mean_param) out += format_double(*row.mean_param);
    out += ',';
    if (row.wall_ms) out += format_double(*row.wall_ms);
    out += '\n';
  }
  return out;
}

TraceFile parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw std::invalid_argument("unexpected trace header");
  TraceFile trace;
  bool first = true;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != 7) throw std::invalid_argument("trace line " + std::to_string(line_no) + ": expected 7 fields");
    const auto run_id = parse_int<std::int64_t>(f[0]);
    const auto seed = parse_int<std::uint64_t>(f[1]);
    if (first) {
      trace.run_id = run_id;
      trace.seed = seed;
      first = false;
    } else if (run_id != trace.run_id || seed != trace.seed) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) + ": mixed runs in one file");
    }
    TraceRow row;
    row.iteration = parse_int<std::int64_t>(f[2]);
    row.evaluations = parse_int<std::int64_t>(f[3]);
    row.best_fitness = parse_double(f[4]);
    if (!f[5].empty()) row.mean_param = parse_double(f[5]);
    if (!f[6].empty()) row.wall_ms = parse_double(f[6]);
    trace.rows.push_back(row);
  }
  return trace;
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_trace_csv(text.str());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ddmut::bench
