// strucimp: command-line frontend (gen | analyze | importance | predict).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "strucimp/error.hpp"
#include "strucimp/generators.hpp"
#include "strucimp/importance.hpp"
#include "strucimp/io.hpp"
#include "strucimp/pipeline.hpp"
#include "strucimp/report.hpp"

namespace fs = std::filesystem;
using namespace strucimp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return kExitUsage;
    case ErrorKind::Data: return kExitData;
    case ErrorKind::Numerical: return kExitNumerical;
  }
  return 1;
}

// Writes to a file, or to stdout for "" and "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError(path + ": cannot open for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

LoadResult load(const std::string& input, std::int64_t aggregation, bool directed, RunConfig& cfg) {
  if (aggregation < 1) throw ArgumentError("--aggregation must be >= 1");
  LoadResult r = load_network_file(input, {aggregation, directed});
  cfg.set("input", input).set("aggregation", aggregation);
  cfg.set("ingest_records", static_cast<std::int64_t>(r.records));
  cfg.set("ingest_negative_weights", static_cast<std::int64_t>(r.negative_weights));
  cfg.set("ingest_zero_net_dropped", static_cast<std::int64_t>(r.zero_net_dropped));
  if (r.negative_weights > 0) {
    std::cerr << "note: " << r.negative_weights << " aggregated pair(s) had a negative net value; stored as |value|\n";
  }
  if (r.zero_net_dropped > 0) {
    std::cerr << "note: " << r.zero_net_dropped << " aggregated pair(s) netted to zero and were dropped\n";
  }
  return r;
}

OutputSelection selection_from(const std::vector<std::string>& formats) {
  OutputSelection s{false, false};
  for (const auto& f : formats) {
    if (f == "json") s.json = true;
    if (f == "svg") s.svg = true;
  }
  return s;
}

void report_written(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) std::cerr << "wrote " << p.string() << '\n';
}

// ---- gen ----

struct GenArgs {
  std::string kind;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int left = 4;
  int bridge = 2;
  int right = 5;
  SyntheticConfig synth;
};

void run_gen(const GenArgs& a) {
  RunConfig cfg;
  cfg.command = "gen";
  cfg.set("kind", a.kind).set("format", a.format);
  cfg.seed("seed", a.seed);
  TemporalNetwork tn;
  if (a.kind == "barbell") {
    cfg.set("left", std::int64_t{a.left}).set("bridge", std::int64_t{a.bridge}).set("right", std::int64_t{a.right});
    Snapshot s = gen_barbell(a.left, a.bridge, a.right);
    std::vector<std::string> ids = s.node_ids();
    tn = TemporalNetwork(std::move(ids), {std::move(s)});
  } else {
    const SyntheticConfig& c = a.synth;
    cfg.set("n", std::int64_t{c.n})
        .set("communities", std::int64_t{c.communities})
        .set("hubs", std::int64_t{c.hub_count})
        .set("coupling", c.dropout_coupling)
        .set("horizon", std::int64_t{c.horizon})
        .set("base_logit", c.base_logit)
        .set("reentry", c.reentry_prob)
        .set("p_in", c.p_in)
        .set("p_out", c.p_out)
        .set("p_hub", c.p_hub)
        .set("activity_sigma", c.activity_sigma)
        .set("noise_sigma", c.noise_sigma);
    tn = gen_synthetic_temporal(c, a.seed);
  }
  Sink sink(a.out);
  if (a.format == "json") {
    nlohmann::json doc = nlohmann::json::parse(to_json(tn));
    doc["meta"] = nlohmann::json::parse(meta_json(cfg));
    sink.stream() << doc.dump() << '\n';
  } else {
    write_edge_list(tn, sink.stream(), meta_comments(cfg));
  }
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string input;
  std::string out;
  std::int64_t aggregation = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> formats{"csv", "json", "svg"};
};

void run_analyze_cmd(const AnalyzeArgs& a) {
  RunConfig cfg;
  cfg.command = "analyze";
  const LoadResult loaded = load(a.input, a.aggregation, false, cfg);
  cfg.seed("seed", a.seed);
  const AnalyzeResult result = run_analyze(loaded.network, a.seed);
  report_written(write_analyze_reports(result, loaded.network, cfg, a.out, selection_from(a.formats)));
}

// ---- importance ----

struct ImportanceArgs {
  std::string input;
  std::string out;
  std::string scheme = "mb";
  std::string strength = "total";
  std::string format = "csv";
  std::size_t snapshot = 0;
  std::int64_t aggregation = 1;
  bool directed = false;
};

void run_importance_cmd(const ImportanceArgs& a) {
  const Scheme scheme = parse_scheme(a.scheme);
  if (a.directed != (scheme == Scheme::Directed)) {
    throw ArgumentError(a.directed ? "--directed requires --scheme directed"
                                   : "--scheme directed requires --directed");
  }
  RunConfig cfg;
  cfg.command = "importance";
  cfg.set("scheme", a.scheme).set("snapshot", static_cast<std::int64_t>(a.snapshot)).set("directed", a.directed);
  cfg.set("format", a.format);
  const LoadResult loaded = load(a.input, a.aggregation, a.directed, cfg);
  const TemporalNetwork& tn = loaded.network;
  if (tn.directed() != a.directed) {
    throw ArgumentError(a.directed ? "--directed given but the input network is undirected"
                                   : "the input network is directed; pass --directed --scheme directed");
  }
  if (a.snapshot >= tn.size()) {
    throw LookupError("snapshot " + std::to_string(a.snapshot) + " out of range (network has " +
                      std::to_string(tn.size()) + ")");
  }
  ImportanceVector v;
  if (a.directed) {
    cfg.set("strength", a.strength);
    v = node_importance_directed(tn[a.snapshot], parse_strength_mode(a.strength));
  } else {
    v = node_importance(tn[a.snapshot], scheme);
  }
  if (a.format == "svg") {
    if (a.out.empty() || a.out == "-") throw ArgumentError("--format svg needs an --out file");
    fs::path csv_path = fs::path(a.out).replace_extension(".csv");
    {
      Sink svg_sink(a.out);
      svg_sink.stream() << importance_svg(v, tn.universe(), cfg);
    }
    Sink csv_sink(csv_path.string());
    write_importance(v, tn.universe(), a.snapshot, cfg, csv_sink.stream(), TableFormat::Csv);
    std::cerr << "wrote " << a.out << "\nwrote " << csv_path.string() << '\n';
    return;
  }
  Sink sink(a.out);
  write_importance(v, tn.universe(), a.snapshot, cfg, sink.stream(),
                   a.format == "json" ? TableFormat::Json : TableFormat::Csv);
}

// ---- predict ----

struct PredictArgs {
  std::string input;
  std::string out;
  std::string config;
  std::string target = "presence";
  std::int64_t aggregation = 1;
  std::uint64_t seed = 0;
  std::vector<double> l2_grid{0.01, 0.1, 1.0, 10.0};
  std::size_t trials = 100;
  std::size_t bootstrap = 1000;
  std::size_t permutation_repeats = 10;
  std::size_t folds = 5;
  double threshold = 0.5;
  double change_threshold = 0.05;
  double prune_threshold = 0.8;
  bool no_oversample = false;
  std::vector<std::string> formats{"csv", "json", "svg"};
};

// Values from --config apply unless the same flag was given on the command line.
void apply_config_file(PredictArgs& a, const CLI::App& cmd) {
  std::ifstream in(a.config);
  if (!in) throw IoError(a.config + ": cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(a.config + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ArgumentError(a.config + ": expected a JSON object");
  auto given = [&](const std::string& flag) {
    const CLI::Option* opt = cmd.get_option_no_throw("--" + flag);
    return opt != nullptr && opt->count() > 0;
  };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (given(key)) continue;
      if (key == "target") a.target = value.get<std::string>();
      else if (key == "aggregation") a.aggregation = value.get<std::int64_t>();
      else if (key == "seed") a.seed = value.get<std::uint64_t>();
      else if (key == "l2-grid") a.l2_grid = value.get<std::vector<double>>();
      else if (key == "trials") a.trials = value.get<std::size_t>();
      else if (key == "bootstrap") a.bootstrap = value.get<std::size_t>();
      else if (key == "permutation-repeats") a.permutation_repeats = value.get<std::size_t>();
      else if (key == "folds") a.folds = value.get<std::size_t>();
      else if (key == "threshold") a.threshold = value.get<double>();
      else if (key == "change-threshold") a.change_threshold = value.get<double>();
      else if (key == "prune-threshold") a.prune_threshold = value.get<double>();
      else if (key == "no-oversample") a.no_oversample = value.get<bool>();
      else throw ArgumentError(a.config + ": unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(a.config + ": " + e.what());
  }
}

void run_predict_cmd(PredictArgs a, const CLI::App& cmd) {
  if (!a.config.empty()) apply_config_file(a, cmd);
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw ArgumentError("--threshold must lie in (0, 1)");
  for (double l2 : a.l2_grid) {
    if (!(l2 >= 0.0)) throw ArgumentError("--l2-grid values must be >= 0");
  }
  RunConfig cfg;
  cfg.command = "predict";
  PredictOptions opts;
  opts.target = parse_target(a.target);
  opts.change_threshold = a.change_threshold;
  opts.prune_threshold = a.prune_threshold;
  opts.threshold = a.threshold;
  opts.bootstrap_iterations = a.bootstrap;
  opts.null_trials = a.trials;
  opts.permutation_repeats = a.permutation_repeats;
  opts.selection.l2_grid = a.l2_grid;
  opts.selection.folds = a.folds;
  opts.selection.oversample = !a.no_oversample;
  opts.seed = a.seed;

  const LoadResult loaded = load(a.input, a.aggregation, false, cfg);
  cfg.set("target", a.target)
      .set("config_file", a.config)
      .set("l2_grid", a.l2_grid)
      .set("folds", static_cast<std::int64_t>(a.folds))
      .set("oversample", !a.no_oversample)
      .set("threshold", a.threshold)
      .set("change_threshold", a.change_threshold)
      .set("prune_threshold", a.prune_threshold)
      .set("trials", static_cast<std::int64_t>(a.trials))
      .set("bootstrap", static_cast<std::int64_t>(a.bootstrap))
      .set("permutation_repeats", static_cast<std::int64_t>(a.permutation_repeats));
  cfg.seed("seed", a.seed)
      .seed("selection", a.seed)
      .seed("bootstrap", a.seed + 1)
      .seed("null_prior", a.seed + 2)
      .seed("null_edges", a.seed + 3)
      .seed("permutation", a.seed + 4)
      .seed("null_shuffle", a.seed + 5);

  const PredictResult result = run_predict(loaded.network, opts);
  report_written(write_predict_reports(result, loaded.network, cfg, a.out, selection_from(a.formats)));
  if (result.evaluation) {
    const auto& ev = *result.evaluation;
    std::cerr << "test rows " << result.test_rows << ", AUC "
              << (ev.auc ? std::to_string(*ev.auc) : std::string("undefined"));
    if (result.auc_ci) std::cerr << " [" << result.auc_ci->ci.lo << ", " << result.auc_ci->ci.hi << "]";
    std::cerr << '\n';
  } else if (result.test_r2) {
    std::cerr << "test rows " << result.test_rows << ", R^2 " << *result.test_r2 << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral node importance for temporal weighted networks"};
  app.set_version_flag("--version", std::string("strucimp ") + tool_version());
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"csv", "json", "svg"});

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a network as an edge list");
  gen_cmd->add_option("kind", gen.kind, "barbell | synthetic")->required()->check(CLI::IsMember({"barbell", "synthetic"}));
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");
  gen_cmd->add_option("--format", gen.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--left", gen.left, "barbell: left clique size");
  gen_cmd->add_option("--bridge", gen.bridge, "barbell: path length");
  gen_cmd->add_option("--right", gen.right, "barbell: right clique size");
  gen_cmd->add_option("--n", gen.synth.n, "synthetic: nodes");
  gen_cmd->add_option("--communities", gen.synth.communities, "synthetic: planted communities");
  gen_cmd->add_option("--hubs", gen.synth.hub_count, "synthetic: hub nodes");
  gen_cmd->add_option("--coupling", gen.synth.dropout_coupling, "synthetic: dropout coupling to m_b");
  gen_cmd->add_option("--horizon", gen.synth.horizon, "synthetic: snapshots");
  gen_cmd->add_option("--base-logit", gen.synth.base_logit, "synthetic: stay log-odds at average m_b");
  gen_cmd->add_option("--reentry", gen.synth.reentry_prob, "synthetic: return probability of absent nodes");
  gen_cmd->add_option("--p-in", gen.synth.p_in, "synthetic: within-community edge probability");
  gen_cmd->add_option("--p-out", gen.synth.p_out, "synthetic: between-community edge probability");
  gen_cmd->add_option("--p-hub", gen.synth.p_hub, "synthetic: hub edge probability");
  gen_cmd->add_option("--activity-sigma", gen.synth.activity_sigma, "synthetic: node activity spread");
  gen_cmd->add_option("--noise-sigma", gen.synth.noise_sigma, "synthetic: per-snapshot weight noise");

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Spectra, modularity and measure distributions per snapshot");
  an_cmd->add_option("input", an.input, "Edge-list CSV or network JSON")->required();
  an_cmd->add_option("--out", an.out, "Output directory")->required();
  an_cmd->add_option("--aggregation", an.aggregation, "Period length in time units");
  an_cmd->add_option("--seed", an.seed, "Seed recorded for community detection");
  an_cmd->add_option("--format", an.formats, "Artefacts to write: csv json svg (CSV is always written)")
      ->check(formats);

  ImportanceArgs im;
  auto* im_cmd = app.add_subcommand("importance", "Node importance for one snapshot");
  im_cmd->add_option("input", im.input, "Edge-list CSV or network JSON")->required();
  im_cmd->add_option("--out", im.out, "Output file (default stdout)");
  im_cmd->add_option("--scheme", im.scheme, "ma | mb | mc | md | directed")
      ->check(CLI::IsMember({"ma", "mb", "mc", "md", "directed"}));
  im_cmd->add_option("--snapshot", im.snapshot, "Snapshot index");
  im_cmd->add_flag("--directed", im.directed, "Treat edges as directed");
  im_cmd->add_option("--strength", im.strength, "directed: total | in | out")
      ->check(CLI::IsMember({"total", "in", "out"}));
  im_cmd->add_option("--aggregation", im.aggregation, "Period length in time units");
  im_cmd->add_option("--format", im.format, "csv | json | svg (svg also writes a CSV)")->check(formats);

  PredictArgs pr;
  auto* pr_cmd = app.add_subcommand("predict", "Fit and evaluate the node-level prediction pipeline");
  pr_cmd->add_option("input", pr.input, "Edge-list CSV or network JSON")->required();
  pr_cmd->add_option("--out", pr.out, "Output directory")->required();
  pr_cmd->add_option("--config", pr.config, "JSON file with defaults for the flags below");
  pr_cmd->add_option("--target", pr.target, "presence | change | sign | rel_change")
      ->check(CLI::IsMember({"presence", "change", "sign", "rel_change"}));
  pr_cmd->add_option("--aggregation", pr.aggregation, "Period length in time units");
  pr_cmd->add_option("--seed", pr.seed, "Base seed for every stochastic step");
  pr_cmd->add_option("--l2-grid", pr.l2_grid, "Candidate L2 penalties")->delimiter(',');
  pr_cmd->add_option("--trials", pr.trials, "Null-model trials");
  pr_cmd->add_option("--bootstrap", pr.bootstrap, "Bootstrap iterations for the AUC interval");
  pr_cmd->add_option("--permutation-repeats", pr.permutation_repeats, "Shuffles per feature");
  pr_cmd->add_option("--folds", pr.folds, "Forward-chaining validation folds");
  pr_cmd->add_option("--threshold", pr.threshold, "Classification threshold");
  pr_cmd->add_option("--change-threshold", pr.change_threshold, "Relative change counted as a change");
  pr_cmd->add_option("--prune-threshold", pr.prune_threshold, "|r| above which features are pruned");
  pr_cmd->add_flag("--no-oversample", pr.no_oversample, "Do not balance the training classes");
  pr_cmd->add_option("--format", pr.formats, "Artefacts to write: csv json svg (report.json is always written)")
      ->check(formats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) run_gen(gen);
    else if (an_cmd->parsed()) run_analyze_cmd(an);
    else if (im_cmd->parsed()) run_importance_cmd(im);
    else if (pr_cmd->parsed()) run_predict_cmd(pr, *pr_cmd);
  } catch (const Error& e) {
    std::cerr << "strucimp: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "strucimp: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
