#include <gtest/gtest.h>

#include <cmath>

#include "strucimp/error.hpp"
#include "strucimp/features.hpp"
#include "strucimp/generators.hpp"
#include "strucimp/importance.hpp"
#include "strucimp/netstats.hpp"
#include "support.hpp"

using namespace strucimp;
using testsupport::ids;

namespace {

TemporalNetwork repeated(const Snapshot& s, std::size_t times) {
  std::vector<Snapshot> snaps;
  for (std::size_t t = 0; t < times; ++t) snaps.emplace_back(s.node_ids(), s.edges(), false, t);
  return TemporalNetwork(s.node_ids(), std::move(snaps));
}

// Two nodes joined by one edge of weight w0 then w1.
TemporalNetwork dyad_series(double w0, double w1) {
  return TemporalNetwork(ids(2), {Snapshot(ids(2), {{0, 1, w0}}, false, 0), Snapshot(ids(2), {{0, 1, w1}}, false, 1)});
}

FeatureTable table_of(std::vector<std::string> columns, const Eigen::MatrixXd& x) {
  FeatureTable t;
  t.columns = std::move(columns);
  t.x = x;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    t.nodes.push_back(static_cast<NodeIndex>(r));
    t.as_of.push_back(1);
  }
  t.refresh_stats();
  return t;
}

}  // namespace

TEST(Measures, BarbellColumnsMatchDirectComputation) {
  const Snapshot s = gen_barbell(4, 2, 5);
  const SnapshotMeasures m = compute_measures(s);
  const auto ma = node_importance(s, Scheme::Ma);
  const auto mb = node_importance(s, Scheme::Mb);
  const auto pr = pagerank(s);
  const auto deg = s.degrees();
  for (std::size_t i = 0; i < 11; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    EXPECT_TRUE(m.present[i]);
    EXPECT_NEAR(m.values(r, 0), ma.values[i], 1e-12);
    EXPECT_NEAR(m.values(r, 1), mb.values[i], 1e-12);
    EXPECT_NEAR(m.values(r, 5), pr[i], 1e-12);
    EXPECT_EQ(m.values(r, 6), static_cast<double>(deg[i]));
    EXPECT_EQ(m.eig_rank[i], mb.eig_rank[i]);
  }
  EXPECT_EQ(m.num_communities, 3u);
  EXPECT_EQ(m.values(0, 7), 4.0);
  EXPECT_EQ(m.values(4, 7), 2.0);
  EXPECT_EQ(m.values(10, 7), 5.0);
}

TEST(Measures, AbsentNodesAreZero) {
  const Snapshot s(ids(4), {{0, 1, 1.0}, {1, 2, 1.0}}, false);
  const SnapshotMeasures m = compute_measures(s);
  EXPECT_FALSE(m.present[3]);
  EXPECT_EQ(m.values.row(3).cwiseAbs().sum(), 0.0);
  EXPECT_EQ(m.community[3], -1);
  EXPECT_EQ(m.eig_rank[3], 0u);
}

TEST(Features, StaticHistoryEqualsSnapshotMeasures) {
  const TemporalNetwork tn = repeated(gen_barbell(3, 1, 4), 4);
  const SnapshotMeasures m = compute_measures(tn[0]);
  const FeatureTable f = build_features(tn, 3);
  ASSERT_EQ(f.rows(), 8u);
  ASSERT_EQ(f.cols(), kFeatureColumns.size());
  for (std::size_t r = 0; r < f.rows(); ++r) {
    const auto i = static_cast<Eigen::Index>(f.nodes[r]);
    for (Eigen::Index j = 0; j < 8; ++j) EXPECT_NEAR(f.x(static_cast<Eigen::Index>(r), j), m.values(i, j), 1e-12);
    EXPECT_EQ(f.x(static_cast<Eigen::Index>(r), 8), 3.0);
  }
}

TEST(Features, DegreeIsHistoryMean) {
  const auto u = ids(6);
  const TemporalNetwork tn(u, {Snapshot(u, {{0, 1, 1}, {0, 2, 1}}, false, 0),
                               Snapshot(u, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}}, false, 1),
                               Snapshot(u, {{0, 5, 1}}, false, 2)});
  const FeatureTable f = build_features(tn, 2);
  ASSERT_EQ(f.nodes, (std::vector<NodeIndex>{0, 5}));
  const auto deg = *f.column_index("degree");
  const auto cnt = *f.column_index("presence_count");
  EXPECT_EQ(f.x(0, static_cast<Eigen::Index>(deg)), 3.0);
  EXPECT_EQ(f.x(0, static_cast<Eigen::Index>(cnt)), 2.0);
  // node 5 has no history
  EXPECT_EQ(f.x.row(1).cwiseAbs().sum(), 0.0);
}

TEST(Features, NeedsHistoryAndUndirectedInput) {
  const TemporalNetwork tn = repeated(gen_barbell(2, 0, 2), 2);
  EXPECT_THROW(build_features(tn, 0), ArgumentError);
  EXPECT_THROW(build_features(tn, 2), ArgumentError);
  const TemporalNetwork d(ids(2), {Snapshot(ids(2), {{0, 1, 1}}, true, 0), Snapshot(ids(2), {{0, 1, 1}}, true, 1)});
  EXPECT_THROW(build_features(d, 1), ContractError);
}

TEST(Labels, ChangeThresholdIsStrict) {
  EXPECT_EQ(label_change(dyad_series(100, 104), 0).values, (std::vector<double>{0, 0}));
  EXPECT_EQ(label_change(dyad_series(100, 106), 0).values, (std::vector<double>{1, 1}));
  EXPECT_EQ(label_change(dyad_series(100, 95), 0).values, (std::vector<double>{0, 0}));
  EXPECT_EQ(label_change(dyad_series(100, 94), 0).values, (std::vector<double>{1, 1}));
}

TEST(Labels, SignAndRelativeChange) {
  EXPECT_EQ(label_sign(dyad_series(2, 3), 0).values, (std::vector<double>{1, 1}));
  EXPECT_EQ(label_sign(dyad_series(3, 2), 0).values, (std::vector<double>{0, 0}));
  const Labels same = label_sign(dyad_series(2, 2), 0);
  EXPECT_TRUE(same.values.empty());
  EXPECT_EQ(same.excluded, (std::vector<NodeIndex>{0, 1}));
  EXPECT_NEAR(label_rel_change(dyad_series(4, 5), 0).values[0], 0.25, 1e-15);
}

TEST(Labels, Presence) {
  const auto u = ids(4);
  const TemporalNetwork tn(u, {Snapshot(u, {{0, 1, 1}, {1, 2, 1}}, false, 0), Snapshot(u, {{1, 3, 1}}, false, 1)});
  const Labels l = label_presence(tn, 0);
  EXPECT_EQ(l.nodes, (std::vector<NodeIndex>{0, 1, 2}));
  EXPECT_EQ(l.values, (std::vector<double>{0, 1, 0}));
  // nodes that vanish cannot be scored on strength change
  EXPECT_EQ(label_change(tn, 0).excluded, (std::vector<NodeIndex>{0, 2}));
  EXPECT_THROW(label_presence(tn, 1), ArgumentError);
}

TEST(Labels, ParseTarget) {
  EXPECT_EQ(parse_target("rel_change"), Target::RelChange);
  EXPECT_THROW(parse_target("gone"), ArgumentError);
}

TEST(FeatureBuilder, LabelledRowsAlign) {
  SyntheticConfig cfg;
  cfg.n = 40;
  cfg.horizon = 6;
  const TemporalNetwork tn = gen_synthetic_temporal(cfg, 2);
  const FeatureBuilder fb(tn);
  const FeatureTable t = fb.build_labelled(3, Target::Presence);
  const Labels l = label_presence(tn, 3);
  EXPECT_EQ(t.nodes, l.nodes);
  EXPECT_EQ(t.y, l.values);
  EXPECT_EQ(t.target, Target::Presence);
  for (auto a : t.as_of) EXPECT_EQ(a, 3u);
}

TEST(FeatureTable, SelectDropConcat) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 5, 7;
  FeatureTable t = table_of({"a", "b"}, x);
  t.y = {0, 1, 1};
  const std::vector<std::size_t> rows{2, 0};
  const FeatureTable s = t.select_rows(rows);
  EXPECT_EQ(s.nodes, (std::vector<NodeIndex>{2, 0}));
  EXPECT_EQ(s.y, (std::vector<double>{1, 0}));
  EXPECT_EQ(s.x(0, 1), 7.0);
  const std::vector<std::string> drop{"a"};
  const FeatureTable d = t.drop_columns(drop);
  EXPECT_EQ(d.columns, (std::vector<std::string>{"b"}));
  const FeatureTable both[] = {t, s};
  const FeatureTable c = concat(both);
  EXPECT_EQ(c.rows(), 5u);
  EXPECT_NEAR(c.stats[0].mean, (1 + 3 + 5 + 5 + 1) / 5.0, 1e-15);
  const FeatureTable mismatched[] = {t, d};
  EXPECT_THROW(concat(mismatched), ContractError);
}

TEST(Prune, DegreeThenPagerankGoFirst) {
  Rng rng(1);
  Eigen::MatrixXd x(50, 4);
  for (Eigen::Index r = 0; r < 50; ++r) {
    const double base = rng.normal();
    x.row(r) << base, 2 * base + 1, base + 0.01 * rng.normal(), rng.normal();
  }
  const PruneResult p = prune_correlated(table_of({"ma", "degree", "pagerank", "noise"}, x));
  EXPECT_EQ(p.dropped, (std::vector<std::string>{"degree", "pagerank"}));
  EXPECT_EQ(p.table.columns, (std::vector<std::string>{"ma", "noise"}));
}

TEST(Prune, LaterColumnBreaksTies) {
  Rng rng(2);
  Eigen::MatrixXd x(40, 3);
  for (Eigen::Index r = 0; r < 40; ++r) {
    const double b = rng.normal();
    x.row(r) << b, -b, 3 * b;
  }
  EXPECT_EQ(prune_correlated(table_of({"p", "q", "r"}, x)).dropped, (std::vector<std::string>{"r", "q"}));
}

TEST(Prune, MostPartnersFirst) {
  // ends correlate with the middle at ~0.86 but with each other at ~0.74
  Rng rng(3);
  const double sd = std::sqrt(0.35);
  Eigen::MatrixXd x(1000, 3);
  for (Eigen::Index r = 0; r < 1000; ++r) {
    const double m = rng.normal();
    x.row(r) << m + sd * rng.normal(), m, m + sd * rng.normal();
  }
  const PruneResult p = prune_correlated(table_of({"a", "mid", "c"}, x), 0.8);
  EXPECT_EQ(p.dropped, (std::vector<std::string>{"mid"}));
}
