#include "strucimp/generators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "strucimp/error.hpp"
#include "strucimp/importance.hpp"
#include "strucimp/rng.hpp"

namespace strucimp {
namespace {

std::vector<std::string> numeric_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError(std::string(name) + " must lie in [0, 1]");
}

void validate(const SyntheticConfig& c) {
  if (c.communities < 1 || c.n < c.communities) throw ArgumentError("need n >= communities >= 1");
  if (c.horizon < 2) throw ArgumentError("horizon must be >= 2");
  if (c.hub_count < 0 || c.hub_count > c.n) throw ArgumentError("hub_count must lie in [0, n]");
  if (!std::isfinite(c.dropout_coupling) || !std::isfinite(c.base_logit)) {
    throw ArgumentError("coupling and base_logit must be finite");
  }
  if (!(c.noise_sigma >= 0.0) || !std::isfinite(c.noise_sigma)) throw ArgumentError("noise_sigma must be >= 0");
  check_probability(c.reentry_prob, "reentry_prob");
  check_probability(c.p_in, "p_in");
  check_probability(c.p_out, "p_out");
  check_probability(c.p_hub, "p_hub");
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Snapshot gen_barbell(int n_left, int bridge, int n_right) {
  if (n_left < 2 || n_right < 2 || bridge < 0) {
    throw ArgumentError("barbell needs n_left >= 2, n_right >= 2, bridge >= 0");
  }
  const auto left = static_cast<std::size_t>(n_left);
  const auto path = static_cast<std::size_t>(bridge);
  const std::size_t n = left + path + static_cast<std::size_t>(n_right);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < left; ++i) {
    for (std::size_t j = i + 1; j < left; ++j) edges.push_back({i, j, 1.0});
  }
  for (std::size_t i = left - 1; i < left + path; ++i) edges.push_back({i, i + 1, 1.0});
  for (std::size_t i = left + path; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  }
  return Snapshot(numeric_ids(n), std::move(edges), false, 0);
}

TemporalNetwork gen_synthetic_temporal(const SyntheticConfig& config, std::uint64_t seed) {
  validate(config);
  const auto n = static_cast<std::size_t>(config.n);
  const auto hubs = static_cast<std::size_t>(config.hub_count);
  const auto k = static_cast<std::size_t>(config.communities);

  // Community c gets a share proportional to c + 1 so the block eigenvalues stay apart.
  std::vector<std::size_t> community(n);
  {
    const double total = static_cast<double>(k * (k + 1) / 2);
    std::size_t c = 0;
    double bound = 1.0 / total;
    for (std::size_t i = 0; i < n; ++i) {
      while (c + 1 < k && static_cast<double>(i) >= bound * static_cast<double>(n)) bound += static_cast<double>(++c + 1) / total;
      community[i] = c;
    }
  }

  Rng base_rng = Rng::derive(seed, 0);
  std::vector<double> activity(n);
  for (double& a : activity) a = std::exp(config.activity_sigma * base_rng.normal());
  std::vector<Edge> base;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = i < hubs ? config.p_hub : (community[i] == community[j] ? config.p_in : config.p_out);
      if (base_rng.bernoulli(p)) base.push_back({i, j, activity[i] * activity[j] * std::exp(0.5 * base_rng.normal())});
    }
  }

  const std::vector<std::string> all_ids = numeric_ids(n);
  std::vector<std::vector<Edge>> slices;
  std::vector<char> present(n, 1);
  for (int t = 0; t < config.horizon; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t) + 1);
    std::vector<Edge> edges;
    for (const Edge& e : base) {
      if (present[e.src] && present[e.dst]) {
        edges.push_back({e.src, e.dst, e.weight * std::exp(config.noise_sigma * rng.normal())});
      }
    }
    const Snapshot snap(all_ids, edges, false, static_cast<std::size_t>(t));
    slices.push_back(std::move(edges));
    if (t + 1 == config.horizon) break;

    std::vector<double> z(n, 0.0);
    const ImportanceVector mb = node_importance(snap, Scheme::Mb);
    if (mb.size() > 1) {
      double mean = 0.0;
      for (double v : mb.values) mean += v;
      mean /= static_cast<double>(mb.size());
      double var = 0.0;
      for (double v : mb.values) var += (v - mean) * (v - mean);
      const double sd = std::sqrt(var / static_cast<double>(mb.size()));
      if (sd > 0.0) {
        for (std::size_t r = 0; r < mb.size(); ++r) z[mb.nodes[r]] = (mb.values[r] - mean) / sd;
      }
    }
    const auto active = snap.strengths();
    for (std::size_t i = 0; i < n; ++i) {
      const double p = active[i] > 0.0 ? logistic(config.base_logit + config.dropout_coupling * z[i])
                                       : config.reentry_prob;
      present[i] = rng.bernoulli(p) ? 1 : 0;
    }
  }

  // Keep only nodes that ever have an edge, so the network survives an edge-list round trip.
  std::vector<char> used(n, 0);
  for (const auto& edges : slices) {
    for (const Edge& e : edges) used[e.src] = used[e.dst] = 1;
  }
  std::vector<std::size_t> remap(n, 0);
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) continue;
    remap[i] = universe.size();
    universe.push_back(all_ids[i]);
  }
  std::vector<Snapshot> snapshots;
  std::size_t ordinal = 0;
  for (auto& edges : slices) {
    if (edges.empty()) continue;  // an empty period would vanish on reload
    for (Edge& e : edges) {
      e.src = remap[e.src];
      e.dst = remap[e.dst];
    }
    snapshots.emplace_back(universe, std::move(edges), false, ordinal++);
  }
  return TemporalNetwork(std::move(universe), std::move(snapshots));
}

}  // namespace strucimp
