#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strucimp/graph.hpp"
#include "strucimp/spectral.hpp"

namespace strucimp {

/// Which part of the spectrum contributes to a node's importance.
///   Ma: leading eigenpair only.
///   Mb: per node, the eigenpair whose eigenvector has the largest |component| there.
///   Mc: sum over every eigenpair.
///   Md: sum over eigenpairs with positive eigenvalue.
///   Directed: leading singular structure of A (M = A Aᵀ).
enum class Scheme { Ma, Mb, Mc, Md, Directed };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);

struct ImportanceVector {
  Scheme scheme = Scheme::Ma;
  /// Nodes with strength > 0, ascending. values/eig_rank are aligned with it.
  std::vector<NodeIndex> nodes;
  std::vector<double> values;
  /// 1-based selected eigen-rank per node; filled for Mb only.
  std::vector<std::size_t> eig_rank;
  /// Zero-strength nodes, for which importance is undefined.
  std::vector<NodeIndex> excluded;

  std::size_t size() const noexcept { return nodes.size(); }
  std::optional<double> value_of(NodeIndex node) const;
};

/// Derivative of the leading eigenvalue with respect to A_ij: 2 x_{0,i} x_{0,j}.
double edge_importance(const Spectrum& spec, NodeIndex i, NodeIndex j);

/// Contribution of eigenpair k to node i's importance, computed from the
/// matrix: (2 / S_i) x_{k,i} Σ_j A_ij x_{k,j}. One entry per eigenpair, in
/// spectrum order. Summing these gives Mc; Ma is entry 0.
std::vector<double> importance_terms(const WeightedMatrix& a, const Spectrum& spec, NodeIndex i);

/// Undirected importance. Requires an undirected snapshot (ContractError otherwise).
ImportanceVector node_importance(const Snapshot& s, Scheme scheme);

/// Same as above, reusing a precomputed adjacency and spectrum.
ImportanceVector node_importance(const WeightedMatrix& a, const Spectrum& spec, Scheme scheme);

/// Directed importance (1 / (S_i s^A)) Σ_j xM_i xM_j M_ij with M = A Aᵀ.
/// Throws DegenerateError when the leading singular value is zero.
ImportanceVector node_importance_directed(const Snapshot& s,
                                          StrengthMode strength_mode = StrengthMode::Total);

}  // namespace strucimp
