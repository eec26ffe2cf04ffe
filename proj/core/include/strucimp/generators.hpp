#pragma once

#include <cstdint>

#include "strucimp/graph.hpp"

namespace strucimp {

/// Unit-weight barbell: a clique on [0, n_left), a path of `bridge` nodes, and a
/// clique on the remaining n_right nodes. The path runs from the last node of the
/// left clique to the first node of the right clique; with no path those two
/// nodes are joined directly. Node ids are "0".."n-1".
Snapshot gen_barbell(int n_left, int bridge, int n_right);

struct SyntheticConfig {
  int n = 120;
  int communities = 4;
  int hub_count = 4;
  double dropout_coupling = 0.0;
  int horizon = 30;
  /// Log-odds of a present node staying when its m_b is average.
  double base_logit = 1.5;
  /// Probability that an absent node comes back at the next step.
  double reentry_prob = 0.5;
  double p_in = 0.8;
  double p_out = 0.02;
  /// Edge probability between a hub and any other node.
  double p_hub = 0.5;
  /// Sigma of the log-normal per-node activity; an edge's base weight scales with
  /// the activity of both endpoints.
  double activity_sigma = 0.75;
  /// Sigma of the log-normal weight noise applied at every snapshot.
  double noise_sigma = 0.05;
};

/// Temporal network with planted communities and hubs. Snapshot 0 contains every
/// node. At each step a present node stays with probability
/// logistic(base_logit + dropout_coupling * z), z being its m_b standardized over
/// the present nodes of the current snapshot, and an absent node returns with
/// probability reentry_prob. Edges of the base graph appear between present nodes
/// with the base weight times fresh log-normal noise. Nodes that never get an edge
/// are left out of the universe. Deterministic in (config, seed).
TemporalNetwork gen_synthetic_temporal(const SyntheticConfig& config, std::uint64_t seed);

}  // namespace strucimp
