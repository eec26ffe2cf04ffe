#include "strucimp/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "strucimp/error.hpp"

namespace strucimp {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted field");
  fields.push_back(trim(cur));
  return fields;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

// YYYY-MM-DD, optionally followed by a 'T' or ' ' time part that is ignored.
std::optional<std::int64_t> parse_iso_day(const std::string& s) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
  const auto y = parse_int(s.substr(0, 4));
  const auto m = parse_int(s.substr(5, 2));
  const auto d = parse_int(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year(static_cast<int>(*y)), month(static_cast<unsigned>(*m)),
                           day(static_cast<unsigned>(*d))};
  if (!ymd.ok()) return std::nullopt;
  return sys_days(ymd).time_since_epoch().count();
}

double parse_value(const std::string& s, std::size_t line_no) {
  if (s.empty()) throw ParseError(line_no, "empty value field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ParseError(line_no, "value '" + s + "' is not a finite real number");
  }
  return v;
}

struct Record {
  std::int64_t time;
  std::string src;
  std::string dst;
  double value;
};

}  // namespace

void natural_sort(std::vector<std::string>& ids) {
  const bool numeric = std::all_of(ids.begin(), ids.end(),
                                   [](const std::string& s) { return parse_int(s).has_value(); });
  if (numeric) {
    std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
      const auto x = *parse_int(a);
      const auto y = *parse_int(b);
      return x != y ? x < y : a < b;
    });
  } else {
    std::sort(ids.begin(), ids.end());
  }
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

LoadResult load_snapshots(std::istream& in, const LoadOptions& options) {
  if (options.aggregation < 1) throw ArgumentError("aggregation period must be >= 1");

  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  enum class TimeKind { Unknown, Integer, Date } kind = TimeKind::Unknown;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = split_csv(trimmed, line_no);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"time", "src", "dst", "value"}) {
        throw ParseError(line_no, "expected header 'time,src,dst,value'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    Record r;
    if (auto t = parse_int(fields[0]); t && kind != TimeKind::Date) {
      kind = TimeKind::Integer;
      r.time = *t;
    } else if (auto d = parse_iso_day(fields[0]); d && kind != TimeKind::Integer) {
      kind = TimeKind::Date;
      r.time = *d;
    } else {
      throw ParseError(line_no, "time '" + fields[0] +
                                    "' is not an integer or ISO-8601 date consistent with earlier rows");
    }
    if (fields[1].empty() || fields[2].empty()) throw ParseError(line_no, "empty node id");
    if (fields[1] == fields[2]) throw ParseError(line_no, "self-loop record on '" + fields[1] + "'");
    r.src = std::move(fields[1]);
    r.dst = std::move(fields[2]);
    r.value = parse_value(fields[3], line_no);
    records.push_back(std::move(r));
  }
  if (!header_seen) throw DataError("edge list is empty (no header)");
  if (records.empty()) throw DataError("edge list contains no records");

  LoadResult result;
  result.records = records.size();

  std::int64_t t0 = records.front().time;
  for (const auto& r : records) t0 = std::min(t0, r.time);

  // (period, src, dst) -> values; sorted before summation so the net value does
  // not depend on record order.
  std::map<std::tuple<std::int64_t, std::string, std::string>, std::vector<double>> buckets;
  for (auto& r : records) {
    const std::int64_t period = (r.time - t0) / options.aggregation;
    std::string a = r.src;
    std::string b = r.dst;
    if (!options.directed && b < a) std::swap(a, b);
    buckets[{period, std::move(a), std::move(b)}].push_back(r.value);
  }

  struct Net {
    std::int64_t period;
    std::string src;
    std::string dst;
    double weight;
  };
  std::vector<Net> nets;
  std::set<std::string> universe_set;
  for (auto& [key, values] : buckets) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    if (sum == 0.0) {
      ++result.zero_net_dropped;
      continue;
    }
    if (sum < 0.0) {
      ++result.negative_weights;
      sum = -sum;
    }
    const auto& [period, a, b] = key;
    universe_set.insert(a);
    universe_set.insert(b);
    nets.push_back({period, a, b, sum});
  }
  if (nets.empty()) throw DataError("every aggregated edge has zero net value");

  std::vector<std::string> universe(universe_set.begin(), universe_set.end());
  natural_sort(universe);
  std::map<std::string, NodeIndex> index;
  for (std::size_t i = 0; i < universe.size(); ++i) index[universe[i]] = i;

  std::map<std::int64_t, std::vector<Edge>> by_period;
  for (const auto& e : nets) {
    by_period[e.period].push_back({index.at(e.src), index.at(e.dst), e.weight});
  }
  std::vector<Snapshot> snapshots;
  for (auto& [period, edges] : by_period) {
    result.period_starts.push_back(t0 + period * options.aggregation);
    snapshots.emplace_back(universe, std::move(edges), options.directed, snapshots.size());
  }
  result.network = TemporalNetwork(std::move(universe), std::move(snapshots));
  return result;
}

LoadResult load_network_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  if (path.extension() == ".json") {
    std::stringstream buf;
    buf << in.rdbuf();
    LoadResult result;
    result.network = temporal_network_from_json(buf.str());
    for (const auto& s : result.network.snapshots()) {
      result.period_starts.push_back(static_cast<std::int64_t>(s.timestamp()));
      result.records += s.num_edges();
    }
    return result;
  }
  try {
    return load_snapshots(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_edge_list(const TemporalNetwork& tn, std::ostream& out,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "time,src,dst,value\n";
  const auto& ids = tn.universe();
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  for (const auto& s : tn.snapshots()) {
    for (const auto& e : s.edges()) {
      out << s.timestamp() << ',' << quote(ids[e.src]) << ',' << quote(ids[e.dst]) << ','
          << format_double(e.weight) << '\n';
    }
  }
}

std::string to_json(const TemporalNetwork& tn) {
  nlohmann::ordered_json doc;
  doc["format"] = "strucimp-temporal-network";
  doc["version"] = 1;
  doc["directed"] = tn.directed();
  doc["universe"] = tn.universe();
  auto snaps = nlohmann::ordered_json::array();
  for (const auto& s : tn.snapshots()) {
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : s.edges()) edges.push_back({e.src, e.dst, e.weight});
    snaps.push_back({{"timestamp", s.timestamp()}, {"edges", std::move(edges)}});
  }
  doc["snapshots"] = std::move(snaps);
  return doc.dump();
}

TemporalNetwork temporal_network_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid network JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "strucimp-temporal-network") {
      throw DataError("unexpected JSON format tag");
    }
    const bool directed = doc.at("directed").get<bool>();
    auto universe = doc.at("universe").get<std::vector<std::string>>();
    std::vector<Snapshot> snapshots;
    for (const auto& js : doc.at("snapshots")) {
      std::vector<Edge> edges;
      for (const auto& je : js.at("edges")) {
        edges.push_back({je.at(0).get<NodeIndex>(), je.at(1).get<NodeIndex>(), je.at(2).get<double>()});
      }
      snapshots.emplace_back(universe, std::move(edges), directed, js.at("timestamp").get<std::size_t>());
    }
    return TemporalNetwork(std::move(universe), std::move(snapshots));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed network JSON: ") + e.what());
  } catch (const ContractError& e) {
    throw DataError(std::string("network JSON violates graph invariants: ") + e.what());
  }
}

}  // namespace strucimp
