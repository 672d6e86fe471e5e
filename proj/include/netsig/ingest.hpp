#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netsig/graph.hpp"

namespace netsig {

struct ContactRecord {
  std::int64_t timestamp = 0;  // seconds
  std::int64_t id_a = 0;
  std::int64_t id_b = 0;
  std::optional<std::string> class_a;
  std::optional<std::string> class_b;

  friend bool operator==(const ContactRecord&, const ContactRecord&) = default;
};

/// Parses whitespace-separated `t i j [Ci Cj]` lines; blank lines and lines
/// starting with '#' are ignored. In strict mode a malformed line throws
/// ParseError; in lenient mode it is skipped and described in `warnings`.
std::vector<ContactRecord> parse_contacts(std::istream& in, const std::string& source = "<stream>",
                                          bool lenient = false, std::vector<std::string>* warnings = nullptr);

struct AggregationConfig {
  std::int64_t window = 600;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;
  std::map<std::int64_t, std::size_t> id_map;  // participant id -> vertex index
};

/// Sorted distinct participant ids, mapped to 0..n-1.
std::map<std::int64_t, std::size_t> build_id_map(const std::vector<ContactRecord>& records);

/// Snapshot t holds an edge for every pair with a record in
/// [t_start + t * window, t_start + (t + 1) * window). Records outside
/// [t_start, t_end) are ignored. Unknown ids throw InvalidArgument unless
/// `lenient`, in which case they are skipped with a warning.
TemporalNetwork aggregate_windows(const std::vector<ContactRecord>& records, const AggregationConfig& cfg,
                                  bool lenient = false, std::vector<std::string>* warnings = nullptr);

}  // namespace netsig
