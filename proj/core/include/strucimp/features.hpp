#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strucimp/graph.hpp"

namespace strucimp {

enum class Target { Presence, Change, Sign, RelChange };

const char* to_string(Target target);
Target parse_target(const std::string& text);
inline bool is_binary(Target target) { return target != Target::RelChange; }

/// Fixed feature column order of every table built from a network.
inline const std::array<std::string, 9> kFeatureColumns = {
    "ma", "mb", "mc", "md", "eig_centrality", "pagerank", "degree", "community_size", "presence_count"};

/// Per-snapshot node measures, indexed by universe node. Entries for nodes
/// absent from the snapshot are 0 and `present` is false.
struct SnapshotMeasures {
  /// Columns follow kFeatureColumns minus presence_count.
  static constexpr std::size_t kNumMeasures = 8;

  std::vector<char> present;
  Eigen::MatrixXd values;          // universe × kNumMeasures
  std::vector<std::size_t> eig_rank;  // selected rank for mb, 0 when absent
  std::vector<double> strength;
  std::vector<int> community;      // -1 when absent
  double modularity = 0.0;
  std::size_t num_communities = 0;
  Eigen::VectorXd eigenvalues;     // of the active subgraph
};

SnapshotMeasures compute_measures(const Snapshot& s, std::uint64_t seed = 0);

struct ColumnStats {
  double mean = 0.0;
  double stdev = 0.0;  // population
};

/// Per-node feature rows, optionally with target labels. Rows may be pooled
/// across several snapshots; `as_of[r]` is the snapshot a row was built for.
struct FeatureTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd x;
  std::vector<NodeIndex> nodes;
  std::vector<std::size_t> as_of;
  std::optional<Target> target;
  std::vector<double> y;
  std::vector<ColumnStats> stats;

  std::size_t rows() const noexcept { return nodes.size(); }
  std::size_t cols() const noexcept { return columns.size(); }
  std::optional<std::size_t> column_index(const std::string& name) const;
  std::vector<double> column(std::size_t j) const;

  void refresh_stats();
  FeatureTable select_rows(std::span<const std::size_t> rows) const;
  FeatureTable drop_columns(std::span<const std::string> names) const;
};

/// Stacks tables with identical columns and target, in the given order.
FeatureTable concat(std::span<const FeatureTable> tables);

/// Row-aligned labels for one prediction horizon.
struct Labels {
  std::vector<NodeIndex> nodes;
  std::vector<double> values;
  /// Nodes present at t that the labelling rule could not score.
  std::vector<NodeIndex> excluded;
};

/// 1 iff a node present at t has at least one edge at t+1.
Labels label_presence(const TemporalNetwork& tn, std::size_t t);
/// 1 iff |S(t+1) − S(t)| / S(t) > threshold, for nodes present at t and t+1.
Labels label_change(const TemporalNetwork& tn, std::size_t t, double threshold = 0.05);
/// 1 iff S(t+1) > S(t); nodes with unchanged strength are excluded.
Labels label_sign(const TemporalNetwork& tn, std::size_t t);
/// (S(t+1) − S(t)) / S(t) for nodes present at t and t+1.
Labels label_rel_change(const TemporalNetwork& tn, std::size_t t);
Labels make_labels(const TemporalNetwork& tn, std::size_t t, Target target,
                   double change_threshold = 0.05);

/// Computes every snapshot's measures once and assembles feature tables from them.
///
/// A feature at snapshot t is the mean of the node's per-snapshot value over the
/// snapshots before t in which the node was present; presence_count counts those
/// snapshots. Nodes present at t without any history get zeros and presence_count 0.
/// Only undirected networks are supported.
class FeatureBuilder {
 public:
  explicit FeatureBuilder(const TemporalNetwork& tn, std::uint64_t seed = 0);

  const TemporalNetwork& network() const noexcept { return *tn_; }
  const SnapshotMeasures& measures(std::size_t t) const { return measures_.at(t); }

  /// Features only, one row per node present at t.
  FeatureTable build(std::size_t t) const;
  /// Features joined with labels for horizon t -> t+1.
  FeatureTable build_labelled(std::size_t t, Target target, double change_threshold = 0.05) const;

 private:
  const TemporalNetwork* tn_;
  std::vector<SnapshotMeasures> measures_;
};

FeatureTable build_features(const TemporalNetwork& tn, std::size_t t);

struct PruneResult {
  FeatureTable table;
  std::vector<std::string> dropped;
};

/// Repeatedly drops the column with the most |pearson| > threshold partners.
/// Ties drop degree first, then pagerank, then eig_centrality, then the later
/// remaining column.
PruneResult prune_correlated(const FeatureTable& table, double threshold = 0.8);

}  // namespace strucimp
