#include "strucimp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "strucimp/error.hpp"
#include "strucimp/netstats.hpp"

namespace strucimp {
namespace {

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double softplus(double eta) { return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd x(z.rows(), z.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(z.cols()) = z;
  return x;
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

double wald_p(double estimate, double se) {
  if (!(se > 0.0) || !std::isfinite(se)) return std::numeric_limits<double>::quiet_NaN();
  return std::erfc(std::abs(estimate / se) / std::sqrt(2.0));
}

// Penalised negative Hessian at theta.
Eigen::MatrixXd information(const Eigen::MatrixXd& x, const Eigen::VectorXd& theta, double l2) {
  const Eigen::VectorXd eta = x * theta;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double mu = sigmoid(eta(i));
    w(i) = mu * (1.0 - mu);
  }
  Eigen::MatrixXd h = x.transpose() * w.asDiagonal() * x;
  for (Eigen::Index j = 1; j < h.rows(); ++j) h(j, j) += l2;
  return h;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& h, const Eigen::VectorXd& g) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    Eigen::VectorXd d = ldlt.solve(g);
    if (d.allFinite()) return d;
  }
  const Eigen::MatrixXd jitter = h + 1e-10 * Eigen::MatrixXd::Identity(h.rows(), h.cols());
  return jitter.completeOrthogonalDecomposition().solve(g);
}

void require_binary(std::span<const double> y) {
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw ArgumentError("logistic regression needs 0/1 targets");
  }
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> r(end - begin);
  std::iota(r.begin(), r.end(), begin);
  return r;
}

LogisticModel fit_on(const FeatureTable& train, double l2, bool balance, std::uint64_t seed,
                     const LogisticOptions& base) {
  LogisticModel model;
  model.scaler = fit_standardizer(train);
  model.l2 = l2;
  const FeatureTable rows = balance ? oversample(train, seed) : train;
  LogisticOptions opts = base;
  opts.l2 = l2;
  model.fit = fit_logistic(model.scaler.transform(rows), rows.y, opts);
  return model;
}

bool both_classes(std::span<const double> y) {
  bool pos = false;
  bool neg = false;
  for (double v : y) (v > 0.5 ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

Eigen::MatrixXd Standardizer::transform(const FeatureTable& table) const {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(table.rows()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto src = table.column_index(columns[j]);
    if (!src) throw LookupError("feature '" + columns[j] + "' missing from table");
    z.col(static_cast<Eigen::Index>(j)) =
        (table.x.col(static_cast<Eigen::Index>(*src)).array() - means[j]) / stdevs[j];
  }
  return z;
}

Standardizer fit_standardizer(const FeatureTable& train) {
  if (train.rows() == 0) throw DataError("cannot standardize an empty table");
  Standardizer s;
  for (std::size_t j = 0; j < train.cols(); ++j) {
    const auto c = train.x.col(static_cast<Eigen::Index>(j));
    const double mean = c.mean();
    const double sd = std::sqrt((c.array() - mean).square().mean());
    if (!(sd > 1e-10 * std::max(1.0, std::abs(mean)))) {
      s.dropped.push_back(train.columns[j]);
      continue;
    }
    s.columns.push_back(train.columns[j]);
    s.means.push_back(mean);
    s.stdevs.push_back(sd);
  }
  return s;
}

StandardizeResult standardize(const FeatureTable& table) {
  StandardizeResult r;
  r.scaler = fit_standardizer(table);
  FeatureTable& out = r.table;
  out.columns = r.scaler.columns;
  out.x = r.scaler.transform(table);
  out.nodes = table.nodes;
  out.as_of = table.as_of;
  out.target = table.target;
  out.y = table.y;
  out.refresh_stats();
  return r;
}

FeatureTable oversample(const FeatureTable& table, std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t r = 0; r < table.y.size(); ++r) (table.y[r] > 0.5 ? pos : neg).push_back(r);
  if (pos.empty() || neg.empty()) throw DataError("class balance: oversampling needs both classes");
  const auto& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t deficit = std::max(pos.size(), neg.size()) - minority.size();
  std::vector<std::size_t> rows = range(0, table.rows());
  Rng rng(seed);
  for (std::size_t k = 0; k < deficit; ++k) rows.push_back(minority[rng.below(minority.size())]);
  return table.select_rows(rows);
}

double penalized_log_likelihood(const Eigen::MatrixXd& z, std::span<const double> y, double alpha,
                                const Eigen::VectorXd& beta, double l2) {
  const Eigen::VectorXd eta = (z * beta).array() + alpha;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[static_cast<std::size_t>(i)] * eta(i) - softplus(eta(i));
  return ll - 0.5 * l2 * beta.squaredNorm();
}

Eigen::VectorXd penalized_gradient(const Eigen::MatrixXd& z, std::span<const double> y, double alpha,
                                   const Eigen::VectorXd& beta, double l2) {
  const Eigen::VectorXd eta = (z * beta).array() + alpha;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = y[static_cast<std::size_t>(i)] - sigmoid(eta(i));
  Eigen::VectorXd g(beta.size() + 1);
  g(0) = resid.sum();
  g.tail(beta.size()) = z.transpose() * resid - l2 * beta;
  return g;
}

LogisticFit fit_logistic(const Eigen::MatrixXd& z, std::span<const double> y, const LogisticOptions& options) {
  if (static_cast<std::size_t>(z.rows()) != y.size()) throw ArgumentError("fit_logistic: row mismatch");
  if (y.empty()) throw DataError("fit_logistic: no rows");
  if (options.l2 < 0.0) throw ArgumentError("fit_logistic: l2 must be >= 0");
  require_binary(y);

  const Eigen::MatrixXd x = with_intercept(z);
  const Eigen::Index p = z.cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 1);
  auto objective = [&](const Eigen::VectorXd& th) {
    return penalized_log_likelihood(z, y, th(0), th.tail(p), options.l2);
  };
  auto gradient = [&](const Eigen::VectorXd& th) {
    return penalized_gradient(z, y, th(0), th.tail(p), options.l2);
  };

  LogisticFit fit;
  Eigen::VectorXd g = gradient(theta);
  double f = objective(theta);
  const double tol = options.tol * std::max(1.0, static_cast<double>(y.size()));
  bool stalled = false;
  std::size_t iter = 0;
  for (; iter < options.max_iter; ++iter) {
    if (g.norm() <= tol) break;
    const Eigen::VectorXd step = solve_spd(information(x, theta, options.l2), g);
    double scale = 1.0;
    Eigen::VectorXd next = theta + step;
    double f_next = objective(next);
    for (int halvings = 0; halvings < 60 && !(f_next > f); ++halvings) {
      scale *= 0.5;
      next = theta + scale * step;
      f_next = objective(next);
    }
    if (!(f_next > f)) {
      stalled = true;  // the objective is flat at machine precision
      break;
    }
    theta = next;
    f = f_next;
    g = gradient(theta);
    if (p > 0 && theta.tail(p).cwiseAbs().maxCoeff() > options.separation_bound) {
      fit.separation = true;
      theta.tail(p) *= options.separation_bound / theta.tail(p).cwiseAbs().maxCoeff();
      g = gradient(theta);
      break;
    }
  }
  fit.iterations = iter;
  fit.grad_norm = g.norm();
  if (!fit.separation && fit.grad_norm > tol && !(stalled && fit.grad_norm <= 1e3 * tol)) {
    std::ostringstream msg;
    msg << "logistic regression did not converge: " << iter << " iterations, gradient norm " << fit.grad_norm
        << " (tol " << tol << ")";
    throw NumericalError(msg.str());
  }

  // Without a penalty the optimum of separable data lies at infinity; a fit
  // that still met the tolerance has only run far enough out along the ray.
  if (!fit.separation && options.l2 == 0.0 && p > 0) {
    const Eigen::VectorXd eta = x * theta;
    bool pos = false, neg = false, separated = true;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const bool label = y[static_cast<std::size_t>(i)] > 0.5;
      (label ? pos : neg) = true;
      separated = separated && (label ? eta(i) > 0.0 : eta(i) < 0.0);
    }
    fit.separation = separated && pos && neg;
  }

  fit.alpha = theta(0);
  fit.beta = theta.tail(p);
  const Eigen::MatrixXd cov = information(x, theta, options.l2).completeOrthogonalDecomposition().pseudoInverse();
  fit.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index j = 0; j <= p; ++j) fit.pvalues.push_back(wald_p(theta(j), fit.std_errors(j)));
  return fit;
}

Eigen::VectorXd LogisticModel::log_odds_standardized(const Eigen::MatrixXd& z) const {
  return (z * fit.beta).array() + fit.alpha;
}

Eigen::VectorXd LogisticModel::log_odds(const FeatureTable& table) const {
  return log_odds_standardized(scaler.transform(table));
}

Eigen::VectorXd LogisticModel::predict_proba(const FeatureTable& table) const {
  Eigen::VectorXd eta = log_odds(table);
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = sigmoid(eta(i));
  return eta;
}

std::optional<double> LogisticModel::coefficient(const std::string& feature) const {
  const auto it = std::find(scaler.columns.begin(), scaler.columns.end(), feature);
  if (it == scaler.columns.end()) return std::nullopt;
  return fit.beta(it - scaler.columns.begin());
}

std::optional<double> LogisticModel::pvalue(const std::string& feature) const {
  const auto it = std::find(scaler.columns.begin(), scaler.columns.end(), feature);
  if (it == scaler.columns.end()) return std::nullopt;
  return fit.pvalues[static_cast<std::size_t>(it - scaler.columns.begin()) + 1];
}

LogisticModel fit_logistic(const FeatureTable& train, const LogisticOptions& options) {
  return fit_on(train, options.l2, false, 0, options);
}

SelectionResult time_ordered_select(std::span<const FeatureTable> tables, const SelectionOptions& options) {
  if (tables.empty()) throw DataError("time-ordered selection needs at least one table");
  if (options.l2_grid.empty()) throw ArgumentError("l2 grid is empty");
  if (options.folds == 0) throw ArgumentError("need at least one fold");

  FeatureTable pooled = concat(tables);
  {
    std::vector<std::size_t> order = range(0, pooled.rows());
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled.as_of[a] < pooled.as_of[b]; });
    pooled = pooled.select_rows(order);
  }
  const std::size_t n = pooled.rows();
  const std::size_t train_end = n * 2 / 5;
  const std::size_t val_end = n * 4 / 5;
  if (train_end < 4 || val_end - train_end < options.folds || n - val_end < 2) {
    throw DataError("too few rows (" + std::to_string(n) + ") for a 40/40/20 time-ordered split");
  }
  std::vector<std::size_t> bounds;
  for (std::size_t f = 0; f <= options.folds; ++f) {
    bounds.push_back(train_end + f * (val_end - train_end) / options.folds);
  }

  std::vector<double> grid = options.l2_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SelectionResult result;
  result.grid = grid;
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    std::size_t scored = 0;
    for (std::size_t f = 0; f < options.folds; ++f) {
      const FeatureTable train = pooled.select_rows(range(0, bounds[f]));
      const FeatureTable val = pooled.select_rows(range(bounds[f], bounds[f + 1]));
      if (!both_classes(train.y) || !both_classes(val.y)) continue;
      const LogisticModel m = fit_on(train, grid[g], options.oversample, options.seed + f, options.logistic);
      const Eigen::VectorXd scores = m.predict_proba(val);
      if (const auto a = auc({scores.data(), static_cast<std::size_t>(scores.size())}, val.y)) {
        total += *a;
        ++scored;
      }
    }
    result.folds_scored = std::max(result.folds_scored, scored);
    if (scored == 0) {
      result.grid_auc.push_back(std::nullopt);
      continue;
    }
    const double mean = total / static_cast<double>(scored);
    result.grid_auc.push_back(mean);
    if (!best || mean > *result.grid_auc[*best] + 1e-12) best = g;
  }
  if (!best) throw DataError("no validation fold contained both classes");

  result.l2 = grid[*best];
  result.train = pooled.select_rows(range(0, val_end));
  result.test = pooled.select_rows(range(val_end, n));
  if (!both_classes(result.train.y)) throw DataError("training rows contain a single class");
  result.model = fit_on(result.train, result.l2, options.oversample, options.seed + options.folds, options.logistic);
  return result;
}

Evaluation evaluate(const LogisticModel& model, const FeatureTable& test, double threshold, double alpha) {
  Evaluation ev;
  ev.threshold = threshold;
  const Eigen::VectorXd probs = model.predict_proba(test);
  const std::span<const double> scores(probs.data(), static_cast<std::size_t>(probs.size()));
  ev.confusion = confusion(scores, test.y, threshold);
  ev.precision = precision(ev.confusion);
  ev.recall = recall(ev.confusion);
  ev.auc = auc(scores, test.y);
  const Confusion& c = ev.confusion;
  if (c.tp + c.fp > 0) {
    ev.ci_precision = binom_ci(c.tp, c.tp + c.fp, alpha);
    if (c.tp + c.fp >= 100) ev.ci_precision_normal = binom_ci(c.tp, c.tp + c.fp, alpha, BinomCiMethod::Normal);
  }
  if (c.tp + c.fn > 0) {
    ev.ci_recall = binom_ci(c.tp, c.tp + c.fn, alpha);
    if (c.tp + c.fn >= 100) ev.ci_recall_normal = binom_ci(c.tp, c.tp + c.fn, alpha, BinomCiMethod::Normal);
  }
  return ev;
}

BootstrapCi bootstrap_auc_ci(const LogisticModel& model, const FeatureTable& table, std::size_t iterations,
                             std::uint64_t seed) {
  const Eigen::VectorXd probs = model.predict_proba(table);
  return bootstrap_auc_ci({probs.data(), static_cast<std::size_t>(probs.size())}, table.y, iterations, seed);
}

std::vector<char> sample_presence(std::size_t n, double density, Rng& rng) {
  std::vector<char> present(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(density)) present[i] = present[j] = 1;
    }
  }
  return present;
}

NullReport null_edge_presence(const LogisticModel& model, const FeatureTable& table, const TemporalNetwork& tn,
                              std::size_t trials, std::uint64_t seed, double threshold) {
  if (trials < 20) throw ArgumentError("null model needs at least 20 trials");
  const std::size_t n = tn.num_nodes();
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / (tn.directed() ? 1.0 : 2.0);

  std::vector<std::size_t> times(table.as_of);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<double> density(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] + 1 >= tn.size()) throw ArgumentError("horizon: snapshot has no successor");
    density[k] = pairs > 0.0 ? static_cast<double>(tn[times[k] + 1].num_edges()) / pairs : 0.0;
  }

  const Eigen::VectorXd probs = model.predict_proba(table);
  const std::span<const double> scores(probs.data(), static_cast<std::size_t>(probs.size()));
  std::vector<double> labels(table.rows());
  std::vector<double> ps;
  std::vector<double> rs;
  std::vector<double> as;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::derive(seed, trial);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto present = sample_presence(n, density[k], rng);
      for (std::size_t r = 0; r < table.rows(); ++r) {
        if (table.as_of[r] == times[k]) labels[r] = present[table.nodes[r]] ? 1.0 : 0.0;
      }
    }
    const Confusion c = confusion(scores, labels, threshold);
    if (auto v = precision(c)) ps.push_back(*v);
    if (auto v = recall(c)) rs.push_back(*v);
    if (auto v = auc(scores, labels)) as.push_back(*v);
  }
  return {summarize(ps), summarize(rs), summarize(as), trials};
}

std::vector<double> permutation_importance(const LogisticModel& model, const FeatureTable& table,
                                           std::size_t repeats, std::uint64_t seed) {
  if (table.rows() < 2) throw DataError("permutation importance needs at least 2 rows");
  const Eigen::MatrixXd z = model.scaler.transform(table);
  auto score = [&](const Eigen::MatrixXd& m) {
    const Eigen::VectorXd eta = model.log_odds_standardized(m);
    return auc({eta.data(), static_cast<std::size_t>(eta.size())}, table.y);
  };
  const auto base = score(z);
  if (!base) throw StatisticsError("permutation importance needs both classes");

  std::vector<double> out(static_cast<std::size_t>(z.cols()), 0.0);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    double total = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(j) * repeats + r);
      Eigen::MatrixXd shuffled = z;
      std::vector<double> col(shuffled.col(j).data(), shuffled.col(j).data() + shuffled.rows());
      rng.shuffle(std::span<double>(col));
      shuffled.col(j) = Eigen::Map<Eigen::VectorXd>(col.data(), shuffled.rows());
      total += *base - score(shuffled).value_or(0.5);
    }
    out[static_cast<std::size_t>(j)] = repeats > 0 ? total / static_cast<double>(repeats) : 0.0;
  }
  return out;
}

ShapValues shap_linear(double intercept, const Eigen::VectorXd& coefficients, const Eigen::MatrixXd& z,
                       const Eigen::MatrixXd& background) {
  if (z.cols() != coefficients.size() || background.cols() != coefficients.size()) {
    throw ArgumentError("shap_linear: feature count mismatch");
  }
  if (background.rows() == 0) throw DataError("shap_linear: empty background");
  ShapValues out;
  out.background_mean = background.colwise().mean().transpose();
  out.phi = (z.rowwise() - out.background_mean.transpose()) * coefficients.asDiagonal();
  out.base_value = intercept + coefficients.dot(out.background_mean);
  return out;
}

ShapValues shap_linear(const LogisticModel& model, const FeatureTable& table, const FeatureTable& background) {
  return shap_linear(model.fit.alpha, model.fit.beta, model.scaler.transform(table),
                     model.scaler.transform(background));
}

Eigen::VectorXd LinearModel::predict(const FeatureTable& table) const {
  return (scaler.transform(table) * coefficients).array() + intercept;
}

LinearModel fit_linear(const FeatureTable& train) {
  if (train.y.size() != train.rows()) throw ArgumentError("fit_linear: targets missing");
  LinearModel model;
  model.scaler = fit_standardizer(train);
  const Eigen::MatrixXd x = with_intercept(model.scaler.transform(train));
  const auto y = as_vector(train.y);
  const Eigen::Index p = x.cols();

  Eigen::MatrixXd xtx = x.transpose() * x;
  xtx.diagonal().array() += 1e-10;
  const Eigen::VectorXd xty = x.transpose() * y;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  model.rank_deficient = qr.rank() < p;
  Eigen::MatrixXd xtx_inv;
  Eigen::VectorXd theta;
  if (model.rank_deficient) {
    const auto cod = xtx.completeOrthogonalDecomposition();
    xtx_inv = cod.pseudoInverse();
    theta = cod.solve(xty);
  } else {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    theta = ldlt.solve(xty);
    xtx_inv = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  }
  model.intercept = theta(0);
  model.coefficients = theta.tail(p - 1);

  const Eigen::VectorXd resid = y - x * theta;
  const double ss_res = resid.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (y.size() == 0 || y.maxCoeff() - y.minCoeff() <= 1e-12 * std::max(1.0, std::abs(y.mean()))) {
    throw StatisticsError("R^2 undefined for constant targets");
  }
  model.r2 = 1.0 - ss_res / ss_tot;

  const double dof = static_cast<double>(x.rows()) - static_cast<double>(p);
  model.std_errors = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
  model.pvalues.assign(static_cast<std::size_t>(p), std::numeric_limits<double>::quiet_NaN());
  if (dof > 0.0) {
    const double sigma2 = ss_res / dof;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
      model.std_errors(j) = se;
      if (se > 0.0) model.pvalues[static_cast<std::size_t>(j)] = student_t_two_sided_p(theta(j) / se, dof);
    }
  }
  return model;
}

double r_squared(const LinearModel& model, const FeatureTable& table) {
  const auto y = as_vector(table.y);
  if (y.size() == 0) throw DataError("r_squared: no rows");
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (y.size() == 0 || y.maxCoeff() - y.minCoeff() <= 1e-12 * std::max(1.0, std::abs(y.mean()))) {
    throw StatisticsError("R^2 undefined for constant targets");
  }
  return 1.0 - (y - model.predict(table)).squaredNorm() / ss_tot;
}

MetricSummary null_shuffle_regression(const FeatureTable& train, const FeatureTable& test, std::size_t trials,
                                      std::uint64_t seed) {
  std::vector<double> r2s;
  r2s.reserve(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::derive(seed, trial);
    FeatureTable shuffled = train;
    rng.shuffle(std::span<double>(shuffled.y));
    r2s.push_back(r_squared(fit_linear(shuffled), test));
  }
  return summarize(r2s);
}

}  // namespace strucimp
