#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "strucimp/graph.hpp"

namespace strucimp {

struct LoadOptions {
  /// Period length in the records' native time unit (days for ISO-8601 dates).
  std::int64_t aggregation = 1;
  bool directed = false;
};

struct LoadResult {
  TemporalNetwork network;
  /// Native start time of each emitted snapshot's period (days since epoch for dates).
  std::vector<std::int64_t> period_starts;
  std::size_t records = 0;
  /// Pairs whose net value summed to a negative number and were stored as |value|.
  std::size_t negative_weights = 0;
  /// Pairs whose net value summed to exactly zero and were dropped.
  std::size_t zero_net_dropped = 0;
};

/// Reads a `time,src,dst,value` edge list and aggregates it into snapshots.
///
/// Records are bucketed into periods of `aggregation` units counted from the
/// earliest time. Parallel records inside a period are summed into one edge
/// (undirected: per unordered pair). Periods left without edges produce no
/// snapshot, so snapshot timestamps are the ordinals 0..T-1 of the non-empty
/// periods. Lines that are blank or start with '#' are ignored.
LoadResult load_snapshots(std::istream& in, const LoadOptions& options = {});

/// Loads either an edge-list CSV or a serialized network (`.json`).
LoadResult load_network_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes the network back out in the edge-list format, one record per edge with
/// the snapshot ordinal as the time column. Optional comment lines go first.
void write_edge_list(const TemporalNetwork& tn, std::ostream& out,
                     const std::vector<std::string>& comments = {});

/// JSON document:
///   {"format": "strucimp-temporal-network", "version": 1, "directed": bool,
///    "universe": [id, ...],
///    "snapshots": [{"timestamp": t, "edges": [[src, dst, weight], ...]}, ...]}
/// src/dst index into `universe`.
std::string to_json(const TemporalNetwork& tn);
TemporalNetwork temporal_network_from_json(const std::string& text);

/// Orders ids numerically when every id is an integer, lexicographically otherwise.
void natural_sort(std::vector<std::string>& ids);

/// Formats a double so that it parses back to the identical value.
std::string format_double(double value);

}  // namespace strucimp
