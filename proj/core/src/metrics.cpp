#include "strucimp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "strucimp/error.hpp"
#include "strucimp/rng.hpp"

namespace strucimp {

Confusion confusion(std::span<const double> scores, std::span<const double> labels, double threshold) {
  if (scores.size() != labels.size()) throw ArgumentError("confusion: length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] > 0.5;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

std::optional<double> precision(const Confusion& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const Confusion& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw ArgumentError("auc: length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] > 0.5) {
        pos_rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j + 1;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

double binom_cdf(std::size_t k, std::size_t n, double p) {
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  return boost::math::ibetac(static_cast<double>(k + 1), static_cast<double>(n - k), p);
}

namespace {

// Finds p in [0, 1] with f(p) = target for monotone f; `increasing` gives the direction.
template <typename F>
double bisect(F f, double target, bool increasing) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const bool below = f(mid) < target;
    if (below == increasing) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Interval binom_ci(std::size_t k, std::size_t n, double alpha, BinomCiMethod method) {
  if (n == 0 || k > n) throw ArgumentError("binom_ci needs 0 <= k <= n and n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("binom_ci alpha must lie in (0, 1)");

  if (method == BinomCiMethod::Normal) {
    const double phat = static_cast<double>(k) / static_cast<double>(n);
    const double z = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
    const double half = z * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
    return {std::max(0.0, phat - half), std::min(1.0, phat + half)};
  }

  Interval ci{0.0, 1.0};
  if (k > 0) {
    // P(X >= k; p) = alpha/2, increasing in p
    ci.lo = bisect([&](double p) { return 1.0 - binom_cdf(k - 1, n, p); }, alpha / 2.0, true);
  }
  if (k < n) {
    // P(X <= k; p) = alpha/2, decreasing in p
    ci.hi = bisect([&](double p) { return binom_cdf(k, n, p); }, alpha / 2.0, false);
  }
  return ci;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BootstrapCi bootstrap_auc_ci(std::span<const double> scores, std::span<const double> labels,
                             std::size_t iterations, std::uint64_t seed, double alpha) {
  if (scores.size() != labels.size()) throw ArgumentError("bootstrap: length mismatch");
  if (!auc(scores, labels)) throw StatisticsError("bootstrap AUC needs both classes");
  if (iterations == 0) throw ArgumentError("bootstrap needs at least one iteration");

  const std::size_t n = scores.size();
  BootstrapCi out;
  out.alpha = alpha;
  out.iterations = iterations;
  std::vector<double> aucs;
  aucs.reserve(iterations);
  std::vector<double> s(n);
  std::vector<double> l(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    Rng rng = Rng::derive(seed, it);
    std::optional<double> value;
    for (int attempt = 0; attempt <= 10 && !value; ++attempt) {
      if (attempt > 0) ++out.redraws;
      for (std::size_t r = 0; r < n; ++r) {
        const auto pick = static_cast<std::size_t>(rng.below(n));
        s[r] = scores[pick];
        l[r] = labels[pick];
      }
      value = auc(s, l);
    }
    if (value) aucs.push_back(*value);
    else ++out.skipped;
  }
  if (aucs.empty()) throw StatisticsError("every bootstrap resample had a single class");
  out.ci = {quantile(aucs, alpha / 2.0), quantile(aucs, 1.0 - alpha / 2.0)};
  return out;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary m;
  m.defined = values.size();
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  m.ci90 = {quantile(values, 0.05), quantile(values, 0.95)};
  m.ci95 = {quantile(values, 0.025), quantile(values, 0.975)};
  return m;
}

NullReport null_prior_predictor(std::span<const double> train_labels, std::span<const double> test_labels,
                                std::size_t trials, std::uint64_t seed) {
  if (trials < 20) throw ArgumentError("null model needs at least 20 trials");
  if (train_labels.empty() || test_labels.empty()) throw DataError("null model needs labels");
  double prior = 0.0;
  for (double y : train_labels) prior += y > 0.5 ? 1.0 : 0.0;
  prior /= static_cast<double>(train_labels.size());

  std::vector<double> ps;
  std::vector<double> rs;
  std::vector<double> as;
  std::vector<double> pred(test_labels.size());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::derive(seed, trial);
    for (auto& p : pred) p = rng.bernoulli(prior) ? 1.0 : 0.0;
    const Confusion c = confusion(pred, test_labels, 0.5);
    if (auto v = precision(c)) ps.push_back(*v);
    if (auto v = recall(c)) rs.push_back(*v);
    if (auto v = auc(pred, test_labels)) as.push_back(*v);
  }
  return {summarize(ps), summarize(rs), summarize(as), trials};
}

}  // namespace strucimp
