#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ddmut/trace.hpp"

namespace ddmut::bench {

inline constexpr const char* kTraceHeader = "run_id,seed,iteration,evaluations,best_fitness,mean_param,wall_ms";

/// Shortest representation that parses back to the same double; "inf"/"-inf" for infinities.
std::string format_double(double value);
double parse_double(const std::string& text);

struct TraceFile {
  std::int64_t run_id = 0;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
};

std::string trace_csv(const TraceFile& trace);
TraceFile parse_trace_csv(const std::string& text);
TraceFile read_trace_csv(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace ddmut::bench
