#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "strucimp/error.hpp"
#include "strucimp/generators.hpp"
#include "strucimp/io.hpp"
#include "support.hpp"

using namespace strucimp;

namespace {

LoadResult load(const std::string& text, LoadOptions opts = {}) {
  std::istringstream in(text);
  return load_snapshots(in, opts);
}

}  // namespace

TEST(Load, AggregatesParallelRecords) {
  const auto r = load("time,src,dst,value\n0,a,b,1\n0,b,a,2.5\n1,b,c,1\n");
  const TemporalNetwork& tn = r.network;
  ASSERT_EQ(tn.size(), 2u);
  EXPECT_EQ(tn.universe(), (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(tn[0].num_edges(), 1u);
  EXPECT_DOUBLE_EQ(tn[0].edges()[0].weight, 3.5);
  EXPECT_EQ(r.records, 3u);
}

TEST(Load, DirectedKeepsOrientation) {
  const auto r = load("time,src,dst,value\n0,a,b,1\n0,b,a,2\n", {1, true});
  EXPECT_TRUE(r.network.directed());
  EXPECT_EQ(r.network[0].num_edges(), 2u);
}

TEST(Load, RecordOrderDoesNotMatter) {
  std::vector<std::string> lines;
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto a = rng.below(12);
    auto b = rng.below(12);
    if (a == b) b = (b + 1) % 12;
    lines.push_back(std::to_string(rng.below(6)) + "," + std::to_string(a) + "," + std::to_string(b) + "," +
                    format_double(0.1 + rng.uniform()));
  }
  auto text = [&] {
    std::string s = "time,src,dst,value\n";
    for (const auto& l : lines) s += l + "\n";
    return s;
  };
  const auto first = load(text()).network;
  for (int rep = 0; rep < 3; ++rep) {
    rng.shuffle(std::span<std::string>(lines));
    EXPECT_EQ(load(text()).network, first);
  }
}

TEST(Load, NegativeAndZeroNetValues) {
  const auto r = load("time,src,dst,value\n0,a,b,-2\n0,b,c,1\n0,c,b,-1\n0,a,c,1\n");
  EXPECT_EQ(r.negative_weights, 1u);
  EXPECT_EQ(r.zero_net_dropped, 1u);
  const Snapshot& s = r.network[0];
  ASSERT_EQ(s.num_edges(), 2u);
  EXPECT_DOUBLE_EQ(s.edges()[0].weight, 2.0);
}

TEST(Load, SkipsEmptyPeriodsAndComments) {
  const auto r = load("# generated\n\ntime,src,dst,value\n0,a,b,1\n# note\n10,a,b,1\n12,b,c,1\n", {5, false});
  ASSERT_EQ(r.network.size(), 2u);
  EXPECT_EQ(r.network[0].timestamp(), 0u);
  EXPECT_EQ(r.network[1].timestamp(), 1u);
  EXPECT_EQ(r.network[1].num_edges(), 2u);
  EXPECT_EQ(r.period_starts, (std::vector<std::int64_t>{0, 10}));
}

TEST(Load, IsoDatesAggregateByDays) {
  const auto r = load("time,src,dst,value\n2020-01-01,a,b,1\n2020-01-07,a,b,1\n2020-01-08,a,c,1\n", {7, false});
  ASSERT_EQ(r.network.size(), 2u);
  EXPECT_DOUBLE_EQ(r.network[0].edges()[0].weight, 2.0);
}

TEST(Load, NumericIdsSortNaturally) {
  const auto r = load("time,src,dst,value\n0,10,9,1\n0,2,10,1\n");
  EXPECT_EQ(r.network.universe(), (std::vector<std::string>{"2", "9", "10"}));
}

TEST(Load, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      load(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("time,src,value\n"), 1u);
  EXPECT_EQ(line_of("time,src,dst,value\n0,a,b,1\n0,a,b\n"), 3u);
  EXPECT_EQ(line_of("time,src,dst,value\n0,a,b,abc\n"), 2u);
  EXPECT_EQ(line_of("time,src,dst,value\n0,a,b,nan\n"), 2u);
  EXPECT_EQ(line_of("time,src,dst,value\nnoon,a,b,1\n"), 2u);
  EXPECT_EQ(line_of("time,src,dst,value\n0,a,b,1\n2020-01-01,a,b,1\n"), 3u);
  EXPECT_EQ(line_of("time,src,dst,value\n0,a,a,1\n"), 2u);
}

TEST(Load, EmptyInputs) {
  EXPECT_THROW(load(""), DataError);
  EXPECT_THROW(load("time,src,dst,value\n"), DataError);
  EXPECT_THROW(load("time,src,dst,value\n0,a,b,1\n0,a,b,-1\n"), DataError);
  EXPECT_THROW(load("time,src,dst,value\n0,a,b,1\n", {0, false}), ArgumentError);
}

TEST(Load, QuotedFieldsAndBom) {
  const auto r = load("\xEF\xBB\xBFtime,src,dst,value\n0,\"x,1\",y,1\n");
  EXPECT_EQ(r.network.universe(), (std::vector<std::string>{"x,1", "y"}));
}

TEST(Load, MissingFile) {
  EXPECT_THROW(load_network_file("/nonexistent/edges.csv"), IoError);
}

TEST(RoundTrip, EdgeListAndJson) {
  SyntheticConfig cfg;
  cfg.n = 30;
  cfg.horizon = 6;
  const TemporalNetwork tn = gen_synthetic_temporal(cfg, 4);

  std::stringstream csv;
  write_edge_list(tn, csv, {"some comment"});
  EXPECT_EQ(csv.str().rfind("# some comment\n", 0), 0u);
  EXPECT_EQ(load_snapshots(csv).network, tn);

  EXPECT_EQ(temporal_network_from_json(to_json(tn)), tn);
}

TEST(RoundTrip, JsonFileByExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "strucimp_io_test";
  std::filesystem::create_directories(dir);
  const TemporalNetwork tn({"0", "1", "2"}, {Snapshot({"0", "1", "2"}, {{0, 1, 1.25}, {1, 2, 3.0}}, false, 0)});
  std::ofstream(dir / "net.json") << to_json(tn);
  EXPECT_EQ(load_network_file(dir / "net.json").network, tn);
  std::filesystem::remove_all(dir);
}

TEST(Json, RejectsMalformedDocuments) {
  EXPECT_THROW(temporal_network_from_json("{"), DataError);
  EXPECT_THROW(temporal_network_from_json(R"({"format":"other"})"), DataError);
  EXPECT_THROW(temporal_network_from_json(
                   R"({"format":"strucimp-temporal-network","version":1,"directed":false,"universe":["a","b"],)"
                   R"("snapshots":[{"timestamp":0,"edges":[[0,0,1]]}]})"),
               DataError);
}

TEST(FormatDouble, ParsesBackExactly) {
  Rng rng(9);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.below(80)) - 40);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(NaturalSort, MixedIdsAreLexicographic) {
  std::vector<std::string> v{"b", "10", "a", "9"};
  natural_sort(v);
  EXPECT_EQ(v, (std::vector<std::string>{"10", "9", "a", "b"}));
}
