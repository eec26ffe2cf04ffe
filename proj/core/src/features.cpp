#include "strucimp/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "strucimp/error.hpp"
#include "strucimp/importance.hpp"
#include "strucimp/netstats.hpp"
#include "strucimp/spectral.hpp"

namespace strucimp {

const char* to_string(Target target) {
  switch (target) {
    case Target::Presence: return "presence";
    case Target::Change: return "change";
    case Target::Sign: return "sign";
    case Target::RelChange: return "rel_change";
  }
  return "presence";
}

Target parse_target(const std::string& text) {
  if (text == "presence") return Target::Presence;
  if (text == "change") return Target::Change;
  if (text == "sign") return Target::Sign;
  if (text == "rel_change") return Target::RelChange;
  throw ArgumentError("unknown target '" + text + "' (expected presence|change|sign|rel_change)");
}

SnapshotMeasures compute_measures(const Snapshot& s, std::uint64_t seed) {
  if (s.directed()) throw ContractError("node measures need an undirected snapshot");
  const std::size_t n = s.num_nodes();
  SnapshotMeasures m;
  m.present.assign(n, 0);
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), SnapshotMeasures::kNumMeasures);
  m.eig_rank.assign(n, 0);
  m.strength = s.strengths();
  m.community.assign(n, -1);

  const Subgraph sub = active_subgraph(s);
  if (sub.global.empty()) return m;

  const WeightedMatrix a = adjacency(sub.snapshot);
  const Spectrum spec = eig_sym(a);
  m.eigenvalues = spec.eigenvalues;
  const double pos_tol = 1e-10 * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());

  Eigen::VectorXd centrality = spec.eigenvectors.col(0).cwiseAbs();
  centrality /= centrality.norm();
  const auto pr = pagerank(sub.snapshot);
  const auto degree = sub.snapshot.degrees();
  const Partition part = detect_communities(sub.snapshot, seed);
  const auto sizes = part.community_sizes();
  m.modularity = modularity(sub.snapshot, part);
  m.num_communities = part.num_communities();

  for (std::size_t local = 0; local < sub.global.size(); ++local) {
    const auto g = static_cast<Eigen::Index>(sub.global[local]);
    const auto terms = importance_terms(a, spec, local);
    const std::size_t rank = select_eigencomponent(spec, local);
    double mc = 0.0;
    double md = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      mc += terms[k];
      if (spec.eigenvalue(k) > pos_tol) md += terms[k];
    }
    m.present[sub.global[local]] = 1;
    m.eig_rank[sub.global[local]] = rank;
    m.community[sub.global[local]] = part[local];
    m.values(g, 0) = terms.front();
    m.values(g, 1) = terms[rank - 1];
    m.values(g, 2) = mc;
    m.values(g, 3) = md;
    m.values(g, 4) = centrality(static_cast<Eigen::Index>(local));
    m.values(g, 5) = pr[local];
    m.values(g, 6) = static_cast<double>(degree[local]);
    m.values(g, 7) = static_cast<double>(sizes[static_cast<std::size_t>(part[local])]);
  }
  return m;
}

std::optional<std::size_t> FeatureTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> FeatureTable::column(std::size_t j) const {
  const auto c = x.col(static_cast<Eigen::Index>(j));
  return {c.data(), c.data() + c.size()};
}

void FeatureTable::refresh_stats() {
  stats.assign(cols(), ColumnStats{});
  if (rows() == 0) return;
  for (std::size_t j = 0; j < cols(); ++j) {
    const auto c = x.col(static_cast<Eigen::Index>(j));
    const double mean = c.mean();
    stats[j].mean = mean;
    stats[j].stdev = std::sqrt((c.array() - mean).square().mean());
  }
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> rows_idx) const {
  FeatureTable out;
  out.columns = columns;
  out.target = target;
  out.x.resize(static_cast<Eigen::Index>(rows_idx.size()), x.cols());
  for (std::size_t r = 0; r < rows_idx.size(); ++r) {
    const std::size_t src = rows_idx[r];
    out.x.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(src));
    out.nodes.push_back(nodes[src]);
    out.as_of.push_back(as_of[src]);
    if (!y.empty()) out.y.push_back(y[src]);
  }
  out.refresh_stats();
  return out;
}

FeatureTable FeatureTable::drop_columns(std::span<const std::string> names) const {
  std::vector<Eigen::Index> keep;
  FeatureTable out;
  for (std::size_t j = 0; j < cols(); ++j) {
    if (std::find(names.begin(), names.end(), columns[j]) == names.end()) {
      keep.push_back(static_cast<Eigen::Index>(j));
      out.columns.push_back(columns[j]);
    }
  }
  out.x.resize(x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.x.col(static_cast<Eigen::Index>(k)) = x.col(keep[k]);
  out.nodes = nodes;
  out.as_of = as_of;
  out.target = target;
  out.y = y;
  out.refresh_stats();
  return out;
}

FeatureTable concat(std::span<const FeatureTable> tables) {
  FeatureTable out;
  if (tables.empty()) return out;
  out.columns = tables.front().columns;
  out.target = tables.front().target;
  Eigen::Index total = 0;
  for (const auto& t : tables) {
    if (t.columns != out.columns || t.target != out.target) {
      throw ContractError("concat: tables differ in columns or target");
    }
    total += static_cast<Eigen::Index>(t.rows());
  }
  out.x.resize(total, static_cast<Eigen::Index>(out.columns.size()));
  Eigen::Index r = 0;
  for (const auto& t : tables) {
    if (t.rows() > 0) out.x.middleRows(r, t.x.rows()) = t.x;
    r += t.x.rows();
    out.nodes.insert(out.nodes.end(), t.nodes.begin(), t.nodes.end());
    out.as_of.insert(out.as_of.end(), t.as_of.begin(), t.as_of.end());
    out.y.insert(out.y.end(), t.y.begin(), t.y.end());
  }
  out.refresh_stats();
  return out;
}

namespace {

void require_horizon(const TemporalNetwork& tn, std::size_t t) {
  if (t + 1 >= tn.size()) {
    throw ArgumentError("horizon: snapshot " + std::to_string(t) + " has no successor (network has " +
                        std::to_string(tn.size()) + " snapshots)");
  }
}

template <typename Rule>
Labels label_pairs(const TemporalNetwork& tn, std::size_t t, Rule rule) {
  require_horizon(tn, t);
  const auto s0 = tn[t].strengths();
  const auto s1 = tn[t + 1].strengths();
  Labels out;
  for (std::size_t i = 0; i < s0.size(); ++i) {
    if (!(s0[i] > 0.0)) continue;
    if (!(s1[i] > 0.0)) {
      out.excluded.push_back(i);
      continue;
    }
    if (const auto v = rule(s0[i], s1[i])) {
      out.nodes.push_back(i);
      out.values.push_back(*v);
    } else {
      out.excluded.push_back(i);
    }
  }
  return out;
}

}  // namespace

Labels label_presence(const TemporalNetwork& tn, std::size_t t) {
  require_horizon(tn, t);
  const auto s0 = tn[t].strengths();
  const auto s1 = tn[t + 1].strengths();
  Labels out;
  for (std::size_t i = 0; i < s0.size(); ++i) {
    if (!(s0[i] > 0.0)) continue;
    out.nodes.push_back(i);
    out.values.push_back(s1[i] > 0.0 ? 1.0 : 0.0);
  }
  return out;
}

Labels label_change(const TemporalNetwork& tn, std::size_t t, double threshold) {
  return label_pairs(tn, t, [threshold](double a, double b) -> std::optional<double> {
    return std::abs(b - a) / a > threshold ? 1.0 : 0.0;
  });
}

Labels label_sign(const TemporalNetwork& tn, std::size_t t) {
  return label_pairs(tn, t, [](double a, double b) -> std::optional<double> {
    if (a == b) return std::nullopt;
    return b > a ? 1.0 : 0.0;
  });
}

Labels label_rel_change(const TemporalNetwork& tn, std::size_t t) {
  return label_pairs(tn, t, [](double a, double b) -> std::optional<double> { return (b - a) / a; });
}

Labels make_labels(const TemporalNetwork& tn, std::size_t t, Target target, double change_threshold) {
  switch (target) {
    case Target::Presence: return label_presence(tn, t);
    case Target::Change: return label_change(tn, t, change_threshold);
    case Target::Sign: return label_sign(tn, t);
    case Target::RelChange: return label_rel_change(tn, t);
  }
  return label_presence(tn, t);
}

FeatureBuilder::FeatureBuilder(const TemporalNetwork& tn, std::uint64_t seed) : tn_(&tn) {
  if (tn.directed()) throw ContractError("feature extraction supports undirected networks only");
  measures_.reserve(tn.size());
  for (const auto& s : tn.snapshots()) measures_.push_back(compute_measures(s, seed));
}

FeatureTable FeatureBuilder::build(std::size_t t) const {
  if (t == 0) throw ArgumentError("no history: features need t >= 1");
  if (t >= measures_.size()) throw ArgumentError("snapshot index " + std::to_string(t) + " out of range");

  FeatureTable table;
  table.columns.assign(kFeatureColumns.begin(), kFeatureColumns.end());
  const auto& now = measures_[t];
  const std::size_t n = now.present.size();
  const auto width = static_cast<Eigen::Index>(SnapshotMeasures::kNumMeasures);

  std::vector<Eigen::RowVectorXd> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (!now.present[i]) continue;
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(width);
    std::size_t count = 0;
    for (std::size_t s = 0; s < t; ++s) {
      if (!measures_[s].present[i]) continue;
      sum += measures_[s].values.row(static_cast<Eigen::Index>(i));
      ++count;
    }
    Eigen::RowVectorXd row(width + 1);
    row.head(width) = count > 0 ? Eigen::RowVectorXd(sum / static_cast<double>(count)) : sum;
    row(width) = static_cast<double>(count);
    rows.push_back(std::move(row));
    table.nodes.push_back(i);
    table.as_of.push_back(t);
  }
  table.x.resize(static_cast<Eigen::Index>(rows.size()), width + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) table.x.row(static_cast<Eigen::Index>(r)) = rows[r];
  table.refresh_stats();
  return table;
}

FeatureTable FeatureBuilder::build_labelled(std::size_t t, Target target, double change_threshold) const {
  const FeatureTable features = build(t);
  const Labels labels = make_labels(*tn_, t, target, change_threshold);
  std::vector<std::size_t> keep;
  std::vector<double> y;
  std::size_t li = 0;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    while (li < labels.nodes.size() && labels.nodes[li] < features.nodes[r]) ++li;
    if (li < labels.nodes.size() && labels.nodes[li] == features.nodes[r]) {
      keep.push_back(r);
      y.push_back(labels.values[li]);
    }
  }
  FeatureTable out = features.select_rows(keep);
  out.target = target;
  out.y = std::move(y);
  return out;
}

FeatureTable build_features(const TemporalNetwork& tn, std::size_t t) {
  if (t == 0) throw ArgumentError("no history: features need t >= 1");
  if (t >= tn.size()) throw ArgumentError("snapshot index " + std::to_string(t) + " out of range");
  // Only snapshots 0..t are needed.
  std::vector<Snapshot> prefix(tn.snapshots().begin(), tn.snapshots().begin() + static_cast<std::ptrdiff_t>(t + 1));
  const TemporalNetwork head(tn.universe(), std::move(prefix));
  return FeatureBuilder(head).build(t);
}

PruneResult prune_correlated(const FeatureTable& table, double threshold) {
  auto drop_group = [](const std::string& name) {
    if (name == "degree") return 0;
    if (name == "pagerank") return 1;
    if (name == "eig_centrality") return 2;
    return 3;
  };

  PruneResult result{table, {}};
  while (result.table.cols() >= 2) {
    const FeatureTable& cur = result.table;
    const std::size_t c = cur.cols();
    std::vector<std::vector<double>> cols;
    std::vector<char> usable(c, 1);
    for (std::size_t j = 0; j < c; ++j) {
      cols.push_back(cur.column(j));
      usable[j] = cur.rows() >= 2 && cur.stats[j].stdev > 0.0;
    }
    std::vector<std::size_t> partners(c, 0);
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = i + 1; j < c; ++j) {
        if (!usable[i] || !usable[j]) continue;
        double r = 0.0;
        try {
          r = pearson(cols[i], cols[j]);
        } catch (const StatisticsError&) {
          continue;
        }
        if (std::abs(r) > threshold) {
          ++partners[i];
          ++partners[j];
        }
      }
    }
    const std::size_t most = *std::max_element(partners.begin(), partners.end());
    if (most == 0) break;
    std::size_t victim = c;
    for (std::size_t j = 0; j < c; ++j) {
      if (partners[j] != most) continue;
      if (victim == c) {
        victim = j;
        continue;
      }
      const int gj = drop_group(cur.columns[j]);
      const int gv = drop_group(cur.columns[victim]);
      // within the same group the later column goes first
      if (gj < gv || (gj == gv && gj == 3)) victim = j;
    }
    const std::string name = cur.columns[victim];
    result.dropped.push_back(name);
    result.table = cur.drop_columns(std::span<const std::string>(&name, 1));
  }
  return result;
}

}  // namespace strucimp
