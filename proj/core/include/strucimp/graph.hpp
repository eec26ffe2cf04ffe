#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace strucimp {

using NodeIndex = std::size_t;

struct Edge {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class StrengthMode { Total, In, Out };

/// One aggregated time slice.
///
/// Edges are canonicalised on construction: undirected edges are stored with
/// src < dst and the edge list is sorted by (src, dst). Construction throws
/// ContractError on self-loops, duplicate pairs, out-of-range endpoints or
/// non-positive weights.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(std::vector<std::string> node_ids, std::vector<Edge> edges, bool directed,
           std::size_t timestamp = 0);

  const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool directed() const noexcept { return directed_; }
  std::size_t timestamp() const noexcept { return timestamp_; }
  std::size_t num_nodes() const noexcept { return node_ids_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::optional<NodeIndex> index_of(const std::string& id) const;

  /// Nodes with at least one incident edge, ascending.
  std::vector<NodeIndex> active_nodes() const;
  bool is_active(NodeIndex i) const;

  /// Per-node strength for every node (zero for isolated nodes).
  std::vector<double> strengths(StrengthMode mode = StrengthMode::Total) const;
  /// Number of distinct neighbours (in or out).
  std::vector<std::size_t> degrees() const;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;

 private:
  std::vector<std::string> node_ids_;
  std::vector<Edge> edges_;
  bool directed_ = false;
  std::size_t timestamp_ = 0;
};

/// A snapshot restricted to its active nodes. `global[k]` is the index, in the
/// parent snapshot, of local node k.
struct Subgraph {
  Snapshot snapshot;
  std::vector<NodeIndex> global;
};

Subgraph active_subgraph(const Snapshot& s);

/// Ordered snapshots over a frozen node universe. Every snapshot's node_ids equal
/// the universe, so node index i means the same participant in every slice.
class TemporalNetwork {
 public:
  TemporalNetwork() = default;
  TemporalNetwork(std::vector<std::string> universe, std::vector<Snapshot> snapshots);

  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }
  const Snapshot& operator[](std::size_t t) const { return snapshots_.at(t); }
  std::size_t size() const noexcept { return snapshots_.size(); }
  std::size_t num_nodes() const noexcept { return universe_.size(); }
  bool directed() const noexcept;

  friend bool operator==(const TemporalNetwork&, const TemporalNetwork&) = default;

 private:
  std::vector<std::string> universe_;
  std::vector<Snapshot> snapshots_;
};

/// Dense adjacency matrix with a zero diagonal.
class WeightedMatrix {
 public:
  WeightedMatrix() = default;
  explicit WeightedMatrix(Eigen::MatrixXd entries);

  std::size_t n() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& dense() const noexcept { return entries_; }
  bool is_symmetric() const;

 private:
  Eigen::MatrixXd entries_;
};

WeightedMatrix adjacency(const Snapshot& s);

/// Strength of node i. Undirected snapshots ignore `mode`.
double strength(const Snapshot& s, NodeIndex i, StrengthMode mode = StrengthMode::Total);

/// Dense community assignment, ids relabelled 0..k-1 in order of first appearance.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> assignment);

  const std::vector<int>& assignment() const noexcept { return assignment_; }
  int operator[](std::size_t i) const { return assignment_.at(i); }
  std::size_t size() const noexcept { return assignment_.size(); }
  std::size_t num_communities() const noexcept { return num_communities_; }
  std::vector<std::size_t> community_sizes() const;
  std::vector<std::vector<NodeIndex>> groups() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.assignment_ == b.assignment_;
  }

 private:
  std::vector<int> assignment_;
  std::size_t num_communities_ = 0;
};

const char* to_string(StrengthMode mode);
StrengthMode parse_strength_mode(const std::string& text);

}  // namespace strucimp
