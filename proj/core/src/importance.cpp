#include "strucimp/importance.hpp"

#include <algorithm>
#include <cmath>

#include "strucimp/error.hpp"

namespace strucimp {

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Ma: return "ma";
    case Scheme::Mb: return "mb";
    case Scheme::Mc: return "mc";
    case Scheme::Md: return "md";
    case Scheme::Directed: return "directed";
  }
  return "ma";
}

Scheme parse_scheme(const std::string& text) {
  if (text == "ma") return Scheme::Ma;
  if (text == "mb") return Scheme::Mb;
  if (text == "mc") return Scheme::Mc;
  if (text == "md") return Scheme::Md;
  if (text == "directed") return Scheme::Directed;
  throw ArgumentError("unknown scheme '" + text + "' (expected ma|mb|mc|md|directed)");
}

std::optional<double> ImportanceVector::value_of(NodeIndex node) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) return std::nullopt;
  return values[static_cast<std::size_t>(it - nodes.begin())];
}

double edge_importance(const Spectrum& spec, NodeIndex i, NodeIndex j) {
  if (i >= spec.n() || j >= spec.n()) {
    throw LookupError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                      ") out of range for spectrum of size " + std::to_string(spec.n()));
  }
  return 2.0 * spec.component(0, i) * spec.component(0, j);
}

std::vector<double> importance_terms(const WeightedMatrix& a, const Spectrum& spec, NodeIndex i) {
  if (i >= a.n() || spec.n() != a.n()) {
    throw LookupError("node index " + std::to_string(i) + " out of range");
  }
  const auto row = a.dense().row(static_cast<Eigen::Index>(i));
  const double s = row.sum();
  if (!(s > 0.0)) throw DegenerateError("importance undefined for zero-strength node");
  std::vector<double> terms(spec.n());
  for (std::size_t k = 0; k < spec.n(); ++k) {
    const auto x = spec.eigenvectors.col(static_cast<Eigen::Index>(k));
    terms[k] = (2.0 / s) * x(static_cast<Eigen::Index>(i)) * row.dot(x);
  }
  return terms;
}

ImportanceVector node_importance(const WeightedMatrix& a, const Spectrum& spec, Scheme scheme) {
  if (scheme == Scheme::Directed) {
    throw ArgumentError("directed scheme needs node_importance_directed");
  }
  if (!a.is_symmetric()) throw ContractError("undirected importance needs a symmetric matrix");

  ImportanceVector out;
  out.scheme = scheme;
  const Eigen::VectorXd strengths = a.dense().rowwise().sum();
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (!(strengths(static_cast<Eigen::Index>(i)) > 0.0)) {
      out.excluded.push_back(i);
      continue;
    }
    const auto terms = importance_terms(a, spec, i);
    double value = 0.0;
    switch (scheme) {
      case Scheme::Ma:
        value = terms.front();
        break;
      case Scheme::Mb: {
        const std::size_t rank = select_eigencomponent(spec, i);
        out.eig_rank.push_back(rank);
        value = terms[rank - 1];
        break;
      }
      case Scheme::Mc:
        for (double t : terms) value += t;
        break;
      case Scheme::Md: {
        const double tol = 1e-10 * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
        for (std::size_t k = 0; k < terms.size(); ++k) {
          if (spec.eigenvalue(k) > tol) value += terms[k];
        }
        break;
      }
      case Scheme::Directed:
        break;
    }
    out.nodes.push_back(i);
    out.values.push_back(value);
  }
  return out;
}

ImportanceVector node_importance(const Snapshot& s, Scheme scheme) {
  if (s.directed()) throw ContractError("undirected importance schemes need an undirected snapshot");
  const WeightedMatrix a = adjacency(s);
  if (a.n() == 0) return ImportanceVector{scheme, {}, {}, {}, {}};
  return node_importance(a, eig_sym(a), scheme);
}

ImportanceVector node_importance_directed(const Snapshot& s, StrengthMode strength_mode) {
  const WeightedMatrix a = adjacency(s);
  const SingularTriplet sv = leading_singular(a);
  if (!(sv.s > 0.0)) throw DegenerateError("directed importance undefined: leading singular value is 0");

  const Eigen::MatrixXd m = a.dense() * a.dense().transpose();
  const Eigen::VectorXd mx = m * sv.xM;
  const auto strengths = s.strengths(strength_mode);

  ImportanceVector out;
  out.scheme = Scheme::Directed;
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (!(strengths[i] > 0.0)) {
      out.excluded.push_back(i);
      continue;
    }
    const auto ii = static_cast<Eigen::Index>(i);
    out.nodes.push_back(i);
    out.values.push_back(sv.xM(ii) * mx(ii) / (strengths[i] * sv.s));
  }
  return out;
}

}  // namespace strucimp
