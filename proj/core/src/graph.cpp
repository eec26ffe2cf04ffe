#include "strucimp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "strucimp/error.hpp"

namespace strucimp {

Snapshot::Snapshot(std::vector<std::string> node_ids, std::vector<Edge> edges, bool directed,
                   std::size_t timestamp)
    : node_ids_(std::move(node_ids)), edges_(std::move(edges)), directed_(directed),
      timestamp_(timestamp) {
  const std::size_t n = node_ids_.size();
  for (auto& e : edges_) {
    if (e.src >= n || e.dst >= n) {
      throw ContractError("edge endpoint out of range (" + std::to_string(e.src) + "," +
                          std::to_string(e.dst) + ") for " + std::to_string(n) + " nodes");
    }
    if (e.src == e.dst) {
      throw ContractError("self-loop on node " + node_ids_[e.src]);
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ContractError("edge weight must be finite and > 0");
    }
    if (!directed_ && e.src > e.dst) std::swap(e.src, e.dst);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].src == edges_[k - 1].src && edges_[k].dst == edges_[k - 1].dst) {
      throw ContractError("duplicate edge (" + node_ids_[edges_[k].src] + "," +
                          node_ids_[edges_[k].dst] + ")");
    }
  }
}

std::optional<NodeIndex> Snapshot::index_of(const std::string& id) const {
  const auto it = std::find(node_ids_.begin(), node_ids_.end(), id);
  if (it == node_ids_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - node_ids_.begin());
}

std::vector<NodeIndex> Snapshot::active_nodes() const {
  std::vector<char> seen(node_ids_.size(), 0);
  for (const auto& e : edges_) seen[e.src] = seen[e.dst] = 1;
  std::vector<NodeIndex> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

bool Snapshot::is_active(NodeIndex i) const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [i](const Edge& e) { return e.src == i || e.dst == i; });
}

std::vector<double> Snapshot::strengths(StrengthMode mode) const {
  std::vector<double> s(node_ids_.size(), 0.0);
  for (const auto& e : edges_) {
    if (!directed_ || mode != StrengthMode::In) s[e.src] += e.weight;
    if (!directed_ || mode != StrengthMode::Out) s[e.dst] += e.weight;
  }
  return s;
}

std::vector<std::size_t> Snapshot::degrees() const {
  std::vector<std::set<NodeIndex>> nbrs(node_ids_.size());
  for (const auto& e : edges_) {
    nbrs[e.src].insert(e.dst);
    nbrs[e.dst].insert(e.src);
  }
  std::vector<std::size_t> d(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) d[i] = nbrs[i].size();
  return d;
}

Subgraph active_subgraph(const Snapshot& s) {
  Subgraph sub;
  sub.global = s.active_nodes();
  std::vector<NodeIndex> local(s.num_nodes(), 0);
  std::vector<std::string> ids;
  ids.reserve(sub.global.size());
  for (std::size_t k = 0; k < sub.global.size(); ++k) {
    local[sub.global[k]] = k;
    ids.push_back(s.node_ids()[sub.global[k]]);
  }
  std::vector<Edge> edges;
  edges.reserve(s.num_edges());
  for (const auto& e : s.edges()) edges.push_back({local[e.src], local[e.dst], e.weight});
  sub.snapshot = Snapshot(std::move(ids), std::move(edges), s.directed(), s.timestamp());
  return sub;
}

TemporalNetwork::TemporalNetwork(std::vector<std::string> universe, std::vector<Snapshot> snapshots)
    : universe_(std::move(universe)), snapshots_(std::move(snapshots)) {
  for (std::size_t t = 0; t < snapshots_.size(); ++t) {
    if (snapshots_[t].node_ids() != universe_) {
      throw ContractError("snapshot " + std::to_string(t) + " does not use the network universe");
    }
    if (t > 0 && snapshots_[t].timestamp() <= snapshots_[t - 1].timestamp()) {
      throw ContractError("snapshot timestamps must be strictly increasing");
    }
    if (snapshots_[t].directed() != snapshots_.front().directed()) {
      throw ContractError("mixed directed and undirected snapshots");
    }
  }
}

bool TemporalNetwork::directed() const noexcept {
  return !snapshots_.empty() && snapshots_.front().directed();
}

WeightedMatrix::WeightedMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ContractError("adjacency matrix must be square");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (entries_(i, i) != 0.0) throw ContractError("adjacency matrix must have a zero diagonal");
  }
}

bool WeightedMatrix::is_symmetric() const { return entries_ == entries_.transpose(); }

WeightedMatrix adjacency(const Snapshot& s) {
  const auto n = static_cast<Eigen::Index>(s.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : s.edges()) {
    const auto i = static_cast<Eigen::Index>(e.src);
    const auto j = static_cast<Eigen::Index>(e.dst);
    a(i, j) = e.weight;
    if (!s.directed()) a(j, i) = e.weight;
  }
  return WeightedMatrix(std::move(a));
}

double strength(const Snapshot& s, NodeIndex i, StrengthMode mode) {
  if (i >= s.num_nodes()) {
    throw LookupError("node index " + std::to_string(i) + " not in snapshot");
  }
  double total = 0.0;
  for (const auto& e : s.edges()) {
    const bool out = e.src == i;
    const bool in = e.dst == i;
    if (!out && !in) continue;
    if (!s.directed() || mode == StrengthMode::Total || (mode == StrengthMode::Out && out) ||
        (mode == StrengthMode::In && in)) {
      total += e.weight;
    }
  }
  return total;
}

Partition::Partition(std::vector<int> assignment) : assignment_(std::move(assignment)) {
  std::map<int, int> relabel;
  for (auto& c : assignment_) {
    const auto [it, inserted] = relabel.try_emplace(c, static_cast<int>(relabel.size()));
    c = it->second;
  }
  num_communities_ = relabel.size();
}

std::vector<std::size_t> Partition::community_sizes() const {
  std::vector<std::size_t> sizes(num_communities_, 0);
  for (int c : assignment_) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

std::vector<std::vector<NodeIndex>> Partition::groups() const {
  std::vector<std::vector<NodeIndex>> out(num_communities_);
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    out[static_cast<std::size_t>(assignment_[i])].push_back(i);
  }
  return out;
}

const char* to_string(StrengthMode mode) {
  switch (mode) {
    case StrengthMode::Total: return "total";
    case StrengthMode::In: return "in";
    case StrengthMode::Out: return "out";
  }
  return "total";
}

StrengthMode parse_strength_mode(const std::string& text) {
  if (text == "total") return StrengthMode::Total;
  if (text == "in") return StrengthMode::In;
  if (text == "out") return StrengthMode::Out;
  throw ArgumentError("unknown strength mode '" + text + "' (expected total|in|out)");
}

}  // namespace strucimp
