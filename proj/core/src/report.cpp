#include "strucimp/report.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "strucimp/error.hpp"
#include "strucimp/io.hpp"
#include "strucimp/svg.hpp"

namespace strucimp {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json interval(const Interval& i) { return json::array({num(i.lo), num(i.hi)}); }

json interval(const std::optional<Interval>& i) { return i ? interval(*i) : json(nullptr); }

json meta_object(const RunConfig& config) {
  json cfg = json::object();
  for (const auto& [key, value] : config.params) {
    std::visit([&, k = key](const auto& v) { cfg[k] = v; }, value);
  }
  json seeds = json::object();
  for (const auto& [key, value] : config.seeds) seeds[key] = value;
  return {{"tool", "strucimp"},
          {"version", tool_version()},
          {"command", config.command},
          {"config", cfg},
          {"seeds", seeds}};
}

json summary(const MetricSummary& m) {
  return {{"mean", num(m.mean)}, {"ci90", interval(m.ci90)}, {"ci95", interval(m.ci95)}, {"defined", m.defined}};
}

json null_report(const NullReport& r) {
  return {{"trials", r.trials},
          {"precision", summary(r.precision)},
          {"recall", summary(r.recall)},
          {"auc", summary(r.auc)}};
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string{}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError(dir_.string() + ": cannot create output directory: " + ec.message());
  }

  std::ofstream open(const std::string& name) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    written_.push_back(path);
    return out;
  }

  void csv_header(std::ostream& out, const RunConfig& config, const std::string& columns) {
    for (const auto& line : meta_comments(config)) out << "# " << line << '\n';
    out << columns << '\n';
  }

  std::vector<fs::path> done() { return std::move(written_); }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

}  // namespace

const char* tool_version() { return STRUCIMP_VERSION_STRING; }

RunConfig& RunConfig::set(std::string key, ConfigValue value) {
  for (auto& [k, v] : params) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  params.emplace_back(std::move(key), std::move(value));
  return *this;
}

RunConfig& RunConfig::seed(std::string key, std::uint64_t value) {
  for (auto& [k, v] : seeds) {
    if (k == key) {
      v = value;
      return *this;
    }
  }
  seeds.emplace_back(std::move(key), value);
  return *this;
}

std::string meta_json(const RunConfig& config) { return meta_object(config).dump(); }

std::vector<std::string> meta_comments(const RunConfig& config) {
  return {std::string("strucimp ") + tool_version(), "meta " + meta_json(config)};
}

void write_importance(const ImportanceVector& v, const std::vector<std::string>& universe, std::size_t snapshot,
                      const RunConfig& config, std::ostream& out, TableFormat format) {
  const bool ranked = v.scheme == Scheme::Mb;
  if (format == TableFormat::Json) {
    json nodes = json::array();
    for (std::size_t r = 0; r < v.size(); ++r) {
      json row = {{"node", universe.at(v.nodes[r])}, {"value", num(v.values[r])}};
      row["eig_rank"] = ranked ? json(v.eig_rank[r]) : json(nullptr);
      nodes.push_back(row);
    }
    json excluded = json::array();
    for (NodeIndex i : v.excluded) excluded.push_back(universe.at(i));
    const json doc = {{"meta", meta_object(config)},
                      {"scheme", to_string(v.scheme)},
                      {"snapshot", snapshot},
                      {"nodes", nodes},
                      {"excluded", excluded}};
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& line : meta_comments(config)) out << "# " << line << '\n';
  if (!v.excluded.empty()) {
    out << "# excluded (zero strength):";
    for (NodeIndex i : v.excluded) out << ' ' << universe.at(i);
    out << '\n';
  }
  out << "node,scheme,value,eig_rank\n";
  for (std::size_t r = 0; r < v.size(); ++r) {
    out << csv_field(universe.at(v.nodes[r])) << ',' << to_string(v.scheme) << ',' << cell(v.values[r]) << ',';
    if (ranked) out << v.eig_rank[r];
    out << '\n';
  }
}

std::string importance_svg(const ImportanceVector& v, const std::vector<std::string>& universe,
                           const RunConfig& config) {
  std::vector<std::string> labels;
  for (NodeIndex i : v.nodes) labels.push_back(universe.at(i));
  return svg::bar_plot(std::string("Node importance (") + to_string(v.scheme) + ")", "importance", labels, v.values,
                       meta_json(config));
}

std::vector<fs::path> write_analyze_reports(const AnalyzeResult& result, const TemporalNetwork& tn,
                                            const RunConfig& config, const fs::path& dir, OutputSelection select) {
  Writer w(dir);
  const std::string meta = meta_json(config);
  {
    auto out = w.open("spectrum.csv");
    w.csv_header(out, config,
                 "snapshot,active_nodes,edges,total_weight,lambda_max,lambda_min,positive_eigenvalues,modularity,"
                 "communities");
    for (const auto& s : result.snapshots) {
      out << s.index << ',' << s.active_nodes << ',' << s.edges << ',' << cell(s.total_weight) << ','
          << cell(s.lambda_max) << ',' << cell(s.lambda_min) << ',' << s.positive_eigenvalues << ','
          << cell(s.modularity) << ',' << s.communities << '\n';
    }
  }
  {
    auto out = w.open("modularity.csv");
    w.csv_header(out, config, "snapshot,Q");
    for (const auto& s : result.snapshots) out << s.index << ',' << cell(s.modularity) << '\n';
  }
  if (select.svg) {
    svg::Series series{"Q", {}, {}};
    for (const auto& s : result.snapshots) {
      series.x.push_back(static_cast<double>(s.index));
      series.y.push_back(s.modularity);
    }
    w.open("modularity.svg") << svg::line_plot("Modularity over time", "snapshot", "Q", {series}, meta);
  }
  {
    auto out = w.open("eig_rank.csv");
    w.csv_header(out, config, "snapshot,node,eig_rank");
    for (std::size_t t = 0; t < result.eig_rank.size(); ++t) {
      for (std::size_t i = 0; i < result.eig_rank[t].size(); ++i) {
        if (result.eig_rank[t][i] == 0) continue;
        out << t << ',' << csv_field(tn.universe()[i]) << ',' << result.eig_rank[t][i] << '\n';
      }
    }
  }
  {
    auto out = w.open("measures_by_presence.csv");
    w.csv_header(out, config, "measure,group,value");
    for (const auto& split : result.splits) {
      for (double v : split.stay) out << split.measure << ",stay," << cell(v) << '\n';
      for (double v : split.leave) out << split.measure << ",leave," << cell(v) << '\n';
    }
  }
  {
    auto out = w.open("measure_tests.csv");
    w.csv_header(out, config, "measure,n_stay,n_leave,mean_stay,mean_leave,t,dof,pvalue,bonferroni_alpha,significant");
    for (const auto& split : result.splits) {
      auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
      };
      out << split.measure << ',' << split.stay.size() << ',' << split.leave.size() << ',' << cell(mean(split.stay))
          << ',' << cell(mean(split.leave)) << ',';
      if (split.ttest) {
        out << cell(split.ttest->t_stat) << ',' << cell(split.ttest->dof) << ',' << cell(split.ttest->p_value);
      } else {
        out << ",,";
      }
      out << ',' << cell(result.bonferroni_alpha) << ',' << (split.significant ? "true" : "false") << '\n';
    }
  }
  if (select.svg) {
    for (const auto& split : result.splits) {
      w.open("violin_" + split.measure + ".svg")
          << svg::violin_plot(split.measure + " by presence at the next snapshot", split.measure,
                              {{"stay", split.stay}, {"leave", split.leave}}, meta);
    }
  }
  {
    auto out = w.open("correlation.csv");
    std::string header = "measure";
    for (const auto& c : result.correlation_columns) header += "," + c;
    w.csv_header(out, config, header);
    for (std::size_t a = 0; a < result.correlation_columns.size(); ++a) {
      out << result.correlation_columns[a];
      for (std::size_t b = 0; b < result.correlation_columns.size(); ++b) {
        out << ',' << cell(result.correlation(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      }
      out << '\n';
    }
  }
  if (select.json) {
    json snaps = json::array();
    for (const auto& s : result.snapshots) {
      snaps.push_back({{"snapshot", s.index},
                       {"active_nodes", s.active_nodes},
                       {"edges", s.edges},
                       {"total_weight", num(s.total_weight)},
                       {"lambda_max", num(s.lambda_max)},
                       {"lambda_min", num(s.lambda_min)},
                       {"positive_eigenvalues", s.positive_eigenvalues},
                       {"modularity", num(s.modularity)},
                       {"communities", s.communities}});
    }
    json tests = json::array();
    for (const auto& split : result.splits) {
      json row = {{"measure", split.measure},
                  {"n_stay", split.stay.size()},
                  {"n_leave", split.leave.size()},
                  {"significant", split.significant}};
      if (split.ttest) {
        row["t"] = num(split.ttest->t_stat);
        row["dof"] = num(split.ttest->dof);
        row["pvalue"] = num(split.ttest->p_value);
      }
      tests.push_back(row);
    }
    const json doc = {{"meta", meta_object(config)},
                      {"nodes", tn.num_nodes()},
                      {"snapshots", snaps},
                      {"bonferroni_alpha", result.bonferroni_alpha},
                      {"tests", tests}};
    w.open("analysis.json") << doc.dump(2) << '\n';
  }
  return w.done();
}

std::string evaluation_report_json(const PredictResult& r, const RunConfig& config) {
  json doc = {{"meta", meta_object(config)},
              {"target", to_string(r.target)},
              {"snapshots", r.snapshots},
              {"rows", r.rows},
              {"train_rows", r.train_rows},
              {"test_rows", r.test_rows},
              {"pruned", r.pruned},
              {"constant", r.constant}};
  json coefs = json::array();
  for (const auto& c : r.coefficients) {
    coefs.push_back({{"feature", c.feature},
                     {"coef", num(c.coef)},
                     {"pvalue", num(c.pvalue)},
                     {"ci95", json::array({num(c.ci_lo), num(c.ci_hi)})}});
  }
  doc["coefficients"] = coefs;

  if (r.linear) {
    doc["features"] = r.linear->features();
    doc["regression"] = {{"train_r2", num(r.linear->r2)},
                         {"test_r2", num(r.test_r2)},
                         {"rank_deficient", r.linear->rank_deficient},
                         {"null_shuffle_r2", r.null_r2 ? summary(*r.null_r2) : json(nullptr)}};
    return doc.dump(2);
  }

  const SelectionResult& sel = *r.selection;
  doc["features"] = sel.model.features();
  json grid = json::array();
  for (std::size_t g = 0; g < sel.grid_auc.size(); ++g) {
    grid.push_back({{"l2", sel.grid[g]}, {"mean_auc", num(sel.grid_auc[g])}});
  }
  doc["selection"] = {{"l2", sel.l2},
                      {"grid", grid},
                      {"folds_scored", sel.folds_scored},
                      {"separation", sel.model.fit.separation},
                      {"iterations", sel.model.fit.iterations}};
  const Evaluation& ev = *r.evaluation;
  doc["threshold"] = ev.threshold;
  doc["confusion"] = {{"tp", ev.confusion.tp}, {"fp", ev.confusion.fp}, {"tn", ev.confusion.tn},
                      {"fn", ev.confusion.fn}};
  doc["precision"] = {{"value", num(ev.precision)},
                      {"ci95_exact", interval(ev.ci_precision)},
                      {"ci95_normal", interval(ev.ci_precision_normal)}};
  doc["recall"] = {{"value", num(ev.recall)},
                   {"ci95_exact", interval(ev.ci_recall)},
                   {"ci95_normal", interval(ev.ci_recall_normal)}};
  json auc_doc = {{"value", num(ev.auc)}};
  if (r.auc_ci) {
    auc_doc["bootstrap_ci95"] = interval(r.auc_ci->ci);
    auc_doc["bootstrap_iterations"] = r.auc_ci->iterations;
    auc_doc["bootstrap_skipped"] = r.auc_ci->skipped;
  } else {
    auc_doc["bootstrap_ci95"] = nullptr;
  }
  doc["auc"] = auc_doc;
  json nulls = json::object();
  if (r.null_prior) nulls["prior"] = null_report(*r.null_prior);
  if (r.null_edges) nulls["edge_presence"] = null_report(*r.null_edges);
  doc["null_models"] = nulls;

  json perm = json::array();
  for (std::size_t j = 0; j < r.permutation.size(); ++j) {
    perm.push_back({{"feature", sel.model.features()[j]}, {"increase", num(r.permutation[j])}});
  }
  doc["permutation_importance"] = perm;
  if (r.shap) {
    json mean_abs = json::array();
    for (Eigen::Index j = 0; j < r.shap->phi.cols(); ++j) {
      mean_abs.push_back({{"feature", sel.model.features()[static_cast<std::size_t>(j)]},
                          {"mean_abs_phi", num(r.shap->phi.col(j).cwiseAbs().mean())}});
    }
    doc["shap"] = {{"base_value", num(r.shap->base_value)}, {"mean_abs", mean_abs}};
  }
  return doc.dump(2);
}

void write_coefficients(const std::vector<CoefficientRow>& rows, const RunConfig& config, std::ostream& out) {
  for (const auto& line : meta_comments(config)) out << "# " << line << '\n';
  out << "feature,coef,pvalue,ci_lo,ci_hi\n";
  for (const auto& c : rows) {
    out << csv_field(c.feature) << ',' << cell(c.coef) << ',' << cell(c.pvalue) << ',' << cell(c.ci_lo) << ','
        << cell(c.ci_hi) << '\n';
  }
}

std::vector<fs::path> write_predict_reports(const PredictResult& r, const TemporalNetwork& tn,
                                            const RunConfig& config, const fs::path& dir, OutputSelection select) {
  Writer w(dir);
  const std::string meta = meta_json(config);
  w.open("report.json") << evaluation_report_json(r, config) << '\n';
  {
    auto out = w.open("coefficients.csv");
    write_coefficients(r.coefficients, config, out);
  }
  {
    const Eigen::VectorXd scores =
        r.linear ? r.linear->predict(r.test) : r.selection->model.predict_proba(r.test);
    auto out = w.open("predictions.csv");
    w.csv_header(out, config, "node,as_of,y,score");
    for (std::size_t i = 0; i < r.test.rows(); ++i) {
      out << csv_field(tn.universe()[r.test.nodes[i]]) << ',' << r.test.as_of[i] << ',' << cell(r.test.y[i]) << ','
          << cell(scores(static_cast<Eigen::Index>(i))) << '\n';
    }
  }
  if (!r.selection) return w.done();

  const auto& features = r.selection->model.features();
  if (!r.permutation.empty()) {
    auto out = w.open("permutation_importance.csv");
    w.csv_header(out, config, "feature,increase");
    for (std::size_t j = 0; j < features.size(); ++j) out << features[j] << ',' << cell(r.permutation[j]) << '\n';
    if (select.svg) {
      w.open("permutation_importance.svg")
          << svg::bar_plot("Permutation importance (increase in 1 - AUC)", "increase", features, r.permutation, meta);
    }
  }
  if (r.shap) {
    {
      auto out = w.open("shap.csv");
      std::string header = "node,as_of";
      for (const auto& f : features) header += "," + f;
      w.csv_header(out, config, header);
      for (Eigen::Index i = 0; i < r.shap->phi.rows(); ++i) {
        const auto row = static_cast<std::size_t>(i);
        out << csv_field(tn.universe()[r.test.nodes[row]]) << ',' << r.test.as_of[row];
        for (Eigen::Index j = 0; j < r.shap->phi.cols(); ++j) out << ',' << cell(r.shap->phi(i, j));
        out << '\n';
      }
    }
    std::vector<double> mean_abs;
    for (Eigen::Index j = 0; j < r.shap->phi.cols(); ++j) mean_abs.push_back(r.shap->phi.col(j).cwiseAbs().mean());
    {
      auto out = w.open("shap_summary.csv");
      w.csv_header(out, config, "feature,mean_abs_phi");
      for (std::size_t j = 0; j < features.size(); ++j) out << features[j] << ',' << cell(mean_abs[j]) << '\n';
    }
    if (select.svg) {
      w.open("shap_summary.svg") << svg::bar_plot("Mean |SHAP| on test rows", "mean |phi|", features, mean_abs, meta);
    }
  }
  return w.done();
}

}  // namespace strucimp
