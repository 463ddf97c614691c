#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "commscape/catalog.hpp"
#include "commscape/community.hpp"
#include "commscape/graph.hpp"
#include "commscape/io.hpp"
#include "commscape/kmeans.hpp"
#include "commscape/planted.hpp"
#include "commscape/quality.hpp"
#include "commscape/similarity.hpp"
#include "json.hpp"

namespace commscape::cli {
namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

bool g_quiet = false;

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    io::write_file(path, text);
  }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

Graph read_graph(const std::string& path, bool directed) {
  const auto start = Clock::now();
  Graph g = load_edge_list_text(io::read_file(path), directed ? EdgeMode::kDirected : EdgeMode::kUndirected);
  log_line("loaded " + path + ": " + std::to_string(g.node_count()) + " nodes, " +
           std::to_string(g.arc_count()) + " arcs in " + num(seconds_since(start)) + " s");
  return g;
}

WeightScheme pick_weights(const std::optional<int>& p, const std::vector<double>& weights, std::size_t n) {
  if (!weights.empty()) {
    if (p && *p != static_cast<int>(weights.size())) {
      throw UsageError("--p " + std::to_string(*p) + " disagrees with " + std::to_string(weights.size()) +
                       " values given to --weights");
    }
    return WeightScheme(weights);
  }
  if (p && *p < 1) throw UsageError("--p must be >= 1");
  return default_weights(p ? *p : capped_walk_length(n, kDefaultWalkLength));
}

ordered_json weights_json(const WeightScheme& ws) {
  return ordered_json(std::vector<double>(ws.weights().begin(), ws.weights().end()));
}

ordered_json stats_json(const GraphStats& s) {
  ordered_json j;
  j["nodes"] = s.n;
  j["arcs"] = s.m;
  j["min_out_degree"] = s.min_out_degree;
  j["max_out_degree"] = s.max_out_degree;
  j["mean_out_degree"] = s.mean_out_degree;
  j["sinks"] = s.sink_count;
  return j;
}

std::string feature_label(quality::Feature f) {
  std::string s(quality::feature_name(f));
  std::replace(s.begin(), s.end(), '_', ' ');
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// stats

struct StatsOptions {
  std::string edges;
  bool directed = false;
  std::string communities;
  std::string out = "-";
};

int run_stats(const StatsOptions& o) {
  const Graph g = read_graph(o.edges, o.directed);
  ordered_json j;
  j["config"] = {{"edges", o.edges}, {"directed", o.directed}};
  j["graph"] = stats_json(graph_stats(g));
  j["graph"]["weak_components"] = weak_components(g).size();
  if (!o.communities.empty()) {
    const auto truth = load_ground_truth_text(io::read_file(o.communities));
    j["communities"] = truth.count();
  }
  emit(o.out, dump(j));
  return 0;
}

// similarity

struct SimilarityCliOptions {
  std::string edges;
  bool directed = false;
  std::optional<int> p;
  std::vector<double> weights;
  std::size_t landmarks = 0;
  std::uint64_t seed = 0;
  bool symmetrize = false;
  std::string out = "-";
  std::string meta;
  std::optional<NodeId> list_walks;
  std::size_t walk_limit = 100;
};

int run_similarity(const SimilarityCliOptions& o) {
  const Graph g = read_graph(o.edges, o.directed);
  if (g.node_count() < 2) throw UsageError("--edges: similarity needs a graph with at least 2 nodes");
  const WeightScheme ws = pick_weights(o.p, o.weights, g.node_count());

  if (o.list_walks) {
    std::ostringstream text;
    for (const auto& walk : reference::list_walks(g, *o.list_walks, ws.p_max(), o.walk_limit)) {
      for (std::size_t i = 0; i < walk.size(); ++i) text << (i ? " " : "") << walk[i];
      text << '\n';
    }
    emit(o.out, text.str());
    return 0;
  }

  const auto start = Clock::now();
  const SimilarityOptions sim{o.symmetrize};
  FeatureSpacingMatrix fs;
  if (o.landmarks == 0 || o.landmarks >= g.node_count()) {
    fs = feature_spacing_matrix(g, ws, sim);
  } else {
    fs = feature_spacing_to_landmarks(g, ws, select_landmarks(g, o.landmarks, o.seed), sim);
  }
  log_line("feature spacing " + std::to_string(fs.rows()) + "x" + std::to_string(fs.cols()) + " in " +
           num(seconds_since(start)) + " s");

  std::string csv = "source,target,feature_spacing\n";
  for (std::size_t r = 0; r < fs.rows(); ++r) {
    for (std::size_t c = 0; c < fs.cols(); ++c) {
      if (fs.row_ids[r] == fs.column_ids[c]) continue;
      csv += std::to_string(fs.row_ids[r]) + ',' + std::to_string(fs.column_ids[c]) + ',' + num(fs.at(r, c)) + '\n';
    }
  }
  emit(o.out, csv);

  std::string meta_path = o.meta;
  if (meta_path.empty() && o.out != "-") meta_path = o.out + ".meta.json";
  if (!meta_path.empty()) {
    ordered_json m;
    m["config"] = {{"edges", o.edges},
                   {"directed", o.directed},
                   {"landmarks", o.landmarks},
                   {"seed", o.seed},
                   {"symmetrize", o.symmetrize}};
    m["p_max"] = ws.p_max();
    m["weights"] = weights_json(ws);
    m["rows"] = fs.rows();
    m["columns"] = fs.cols();
    m["h_min"] = fs.h_min;
    m["h_max"] = fs.h_max;
    m["degenerate"] = fs.degenerate;
    emit(meta_path, dump(m));
  }
  return 0;
}

// cluster

struct ClusterCliOptions {
  std::string points;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::optional<double> width;
  int max_iter = kDefaultMaxIterations;
  bool lloyd = false;
  bool shadow_check = false;
  std::string out = "-";
  std::string report;
  std::string centroids;
};

int run_cluster(const ClusterCliOptions& o) {
  const PointSet ps = load_points_text(io::read_file(o.points));
  if (o.k < 1 || o.k > ps.size()) {
    throw UsageError("--k must be in [1, " + std::to_string(ps.size()) + "], got " + std::to_string(o.k));
  }
  if (o.width && !(*o.width > 0.0)) throw UsageError("--width must be positive");
  if (o.max_iter < 1) throw UsageError("--max-iter must be >= 1");

  const Centroids init = seed_centroids(ps, o.k, o.seed);
  const bool pruned = !o.lloyd && o.k >= 2;
  const double width = o.width ? *o.width : default_width(ps, o.k);
  const auto start = Clock::now();
  const KMeansResult r =
      pruned ? pruned_kmeans(ps, init, width, o.max_iter, o.shadow_check) : lloyd_kmeans(ps, init, o.max_iter);
  log_line("k-means: " + std::to_string(r.iterations) + " iterations in " + num(seconds_since(start)) + " s");

  std::string csv = "id,label\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    csv += ps.ids()[i] + ',' + std::to_string(r.assignment.labels[i]) + '\n';
  }
  emit(o.out, csv);

  if (!o.centroids.empty()) {
    std::string text;
    for (std::size_t c = 0; c < r.centroids.k; ++c) {
      const auto row = r.centroids.row(c);
      for (std::size_t j = 0; j < row.size(); ++j) text += (j ? "," : "") + num(row[j]);
      text += '\n';
    }
    emit(o.centroids, text);
  }

  if (!o.report.empty()) {
    ordered_json j;
    j["config"] = {{"points", o.points},
                   {"k", o.k},
                   {"seed", o.seed},
                   {"algorithm", pruned ? "pruned" : "lloyd"},
                   {"width", pruned ? ordered_json(width) : ordered_json(nullptr)},
                   {"max_iter", o.max_iter},
                   {"shadow_check", pruned && o.shadow_check}};
    j["points"] = ps.size();
    j["dims"] = ps.dims();
    j["iterations"] = r.iterations;
    j["objective"] = r.assignment.objective;
    j["total_visits"] = r.total_visits();
    ordered_json trace = ordered_json::array();
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const auto& t = r.trace[i];
      ordered_json row{{"iteration", i + 1}, {"objective", t.objective}, {"deviation", t.deviation},
                       {"visited", t.visited}};
      if (pruned && o.shadow_check) row["shadow_violations"] = t.shadow_violations;
      trace.push_back(std::move(row));
    }
    j["trace"] = std::move(trace);
    emit(o.report, dump(j));
  }
  return 0;
}

// detect

struct DetectCliOptions {
  std::string edges;
  bool directed = false;
  std::string communities;
  std::optional<std::size_t> k;
  bool auto_k = false;
  std::optional<int> p;
  std::vector<double> weights;
  std::size_t landmarks = kDefaultLandmarks;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  int max_depth = 16;
  bool symmetrize = false;
  int max_iter = kDefaultMaxIterations;
  std::optional<double> width;
  std::string out;
  std::string report = "-";
};

int run_detect(const DetectCliOptions& o) {
  if (o.k && o.auto_k) throw UsageError("--k and --auto-k are mutually exclusive");
  if (o.landmarks < 1) throw UsageError("--landmarks must be >= 1");
  if (!(o.lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
  if (o.max_depth < 0) throw UsageError("--max-depth must be >= 0");
  if (o.max_iter < 1) throw UsageError("--max-iter must be >= 1");
  if (o.width && !(*o.width > 0.0)) throw UsageError("--width must be positive");
  if (o.p && *o.p < 1) throw UsageError("--p must be >= 1");
  if (o.p && !o.weights.empty() && *o.p != static_cast<int>(o.weights.size())) {
    throw UsageError("--p disagrees with the number of --weights values");
  }

  const auto start = Clock::now();
  const Graph g = read_graph(o.edges, o.directed);
  if (g.node_count() == 0) throw UsageError("--edges: graph has no nodes");
  if (o.k && (*o.k < 1 || *o.k > g.node_count())) {
    throw UsageError("--k must be in [1, " + std::to_string(g.node_count()) + "], got " + std::to_string(*o.k));
  }
  std::optional<GroundTruthCommunities> truth;
  if (!o.communities.empty()) truth = load_ground_truth_text(io::read_file(o.communities));

  DetectConfig config;
  config.p_max = o.p;
  if (!o.weights.empty()) config.weights = o.weights;
  config.landmarks = o.landmarks;
  config.k = o.k;
  config.lambda = o.lambda;
  config.seed = o.seed;
  config.max_depth = o.max_depth;
  config.symmetrize = o.symmetrize;
  config.max_iter = o.max_iter;
  config.width = o.width;
  const Partition p = detect_communities(g, config);
  const auto violation = validate_partition(p, g);
  if (violation) throw std::logic_error("detected partition is illegal: " + violation->message());
  log_line("detect: " + std::to_string(p.k_found()) + " communities in " + num(seconds_since(start)) + " s");

  if (!o.out.empty()) {
    std::string text;
    for (const auto& c : p.communities) {
      for (std::size_t i = 0; i < c.size(); ++i) text += (i ? "\t" : "") + std::to_string(c[i]);
      text += '\n';
    }
    emit(o.out, text);
  }

  ordered_json j;
  ordered_json cfg;
  cfg["edges"] = o.edges;
  cfg["directed"] = o.directed;
  cfg["communities"] = o.communities.empty() ? ordered_json(nullptr) : ordered_json(o.communities);
  cfg["k"] = o.k ? ordered_json(*o.k) : ordered_json("auto");
  cfg["p_max"] = o.p ? ordered_json(*o.p) : ordered_json("auto");
  cfg["weights"] = o.weights.empty() ? ordered_json("halving") : ordered_json(o.weights);
  cfg["landmarks"] = o.landmarks;
  cfg["lambda"] = o.lambda;
  cfg["seed"] = o.seed;
  cfg["max_depth"] = o.max_depth;
  cfg["symmetrize"] = o.symmetrize;
  cfg["max_iter"] = o.max_iter;
  cfg["width"] = o.width ? ordered_json(*o.width) : ordered_json("auto");
  j["config"] = std::move(cfg);
  j["graph"] = stats_json(graph_stats(g));
  j["graph"]["weak_components"] = weak_components(g).size();
  j["found_count"] = p.k_found();
  if (truth) {
    const auto t = static_cast<std::int64_t>(truth->count());
    j["true_count"] = t;
    j["error_pct"] = t >= 1 ? ordered_json(community_count_error(t, static_cast<std::int64_t>(p.k_found())))
                            : ordered_json(nullptr);
  }
  j["partition_valid"] = true;
  std::vector<std::size_t> sizes;
  for (const auto& c : p.communities) sizes.push_back(c.size());
  j["community_sizes"] = sizes;
  emit(o.report, dump(j));
  return 0;
}

// evaluate

struct EvaluateCliOptions {
  std::string manifest;
  bool reference = false;
  std::string report = "-";
  std::string table;
  std::string plot;
};

ordered_json reference_footer() {
  return {{"table_average_error_pct", catalog::kPublishedAverageErrorPct},
          {"summary_average_error_pct", catalog::kPublishedSummaryAverageErrorPct},
          {"discrepancy", catalog::kPublishedAverageErrorPct != catalog::kPublishedSummaryAverageErrorPct},
          {"note", "the published summary states a different average error than the per-dataset table; "
                   "the table's own rows average to the table figure"}};
}

int run_evaluate(const EvaluateCliOptions& o) {
  if (o.reference == !o.manifest.empty()) throw UsageError("give exactly one of --manifest or --reference");
  EvaluationReport report;
  if (o.reference) {
    std::vector<double> errors;
    for (const auto& row : catalog::published_counts()) {
      EvaluationRow r;
      r.name = std::string(row.name);
      if (const auto* info = catalog::find_dataset(row.name)) {
        r.nodes = static_cast<std::size_t>(info->nodes);
        r.arcs = static_cast<std::size_t>(info->edges);
      }
      r.true_count = row.true_count;
      r.found_count = row.found_count;
      r.error_pct = community_count_error(row.true_count, row.found_count);
      errors.push_back(r.error_pct);
      report.rows.push_back(std::move(r));
    }
    report.average_error_pct = average_error(errors);
  } else {
    const std::string base = std::filesystem::path(o.manifest).parent_path().string();
    const auto manifest = parse_manifest(io::read_file(o.manifest), base);
    const auto start = Clock::now();
    report = evaluate_batch(manifest);
    log_line("evaluate: " + std::to_string(report.rows.size()) + " datasets in " + num(seconds_since(start)) + " s");
  }

  ordered_json rows = ordered_json::array();
  std::string table = "name,true,found,error_pct\n";
  std::string plot = "name,true,found\n";
  char pct[32];
  for (const auto& r : report.rows) {
    ordered_json row{{"name", r.name}};
    if (r.failure) {
      row["failure"] = *r.failure;
      log_line("evaluate: " + r.name + " failed: " + *r.failure);
    } else {
      row["nodes"] = r.nodes;
      row["arcs"] = r.arcs;
      row["true_count"] = r.true_count;
      row["found_count"] = r.found_count;
      row["error_pct"] = r.error_pct;
      std::snprintf(pct, sizeof pct, "%.2f", r.error_pct);
      table += r.name + ',' + std::to_string(r.true_count) + ',' + std::to_string(r.found_count) + ',' + pct + '\n';
      plot += r.name + ',' + std::to_string(r.true_count) + ',' + std::to_string(r.found_count) + '\n';
    }
    rows.push_back(std::move(row));
  }
  ordered_json j;
  j["config"] = {{"source", o.reference ? "published" : "manifest"},
                 {"manifest", o.manifest.empty() ? ordered_json(nullptr) : ordered_json(o.manifest)}};
  j["rows"] = std::move(rows);
  j["average_error_pct"] = report.average_error_pct ? ordered_json(*report.average_error_pct) : ordered_json(nullptr);
  j["reference"] = reference_footer();
  emit(o.report, dump(j));
  if (!o.table.empty()) emit(o.table, table);
  if (!o.plot.empty()) emit(o.plot, plot);
  return report.average_error_pct ? 0 : 1;
}

// quality

struct QualityCliOptions {
  std::string customers;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::string report = "-";
  std::string plot;
  std::string labels;
};

int run_quality(const QualityCliOptions& o) {
  const auto table = quality::load_customers_text(io::read_file(o.customers));
  if (table.size() == 0) throw UsageError("--customers: file has no customer rows");
  if (o.k < 2 || o.k > table.size()) {
    throw UsageError("--k must be in [2, " + std::to_string(table.size()) + "] to score impact, got " +
                     std::to_string(o.k));
  }
  const auto clustering = quality::cluster_customers(table, o.k, o.seed);
  const auto impact = quality::feature_impact(table, clustering.assignment);

  ordered_json j;
  j["config"] = {{"customers", o.customers}, {"k", o.k}, {"seed", o.seed}};
  j["customers"] = table.size();
  j["iterations"] = clustering.iterations;
  j["objective"] = clustering.assignment.objective;
  std::vector<std::size_t> sizes(o.k, 0);
  for (int l : clustering.assignment.labels) ++sizes[static_cast<std::size_t>(l)];
  j["cluster_sizes"] = sizes;
  ordered_json standardization = ordered_json::object();
  for (std::size_t c = 0; c < table.features.size(); ++c) {
    standardization[std::string(quality::feature_name(table.features[c]))] = {
        {"mean", clustering.standardization.mean[c]}, {"stddev", clustering.standardization.stddev[c]}};
  }
  j["standardization"] = std::move(standardization);
  ordered_json ranked = ordered_json::array();
  std::string plot = "feature,name,impact_pct\n";
  for (std::size_t idx : impact.ranking) {
    const auto& f = impact.features[idx];
    ranked.push_back({{"feature", quality::feature_name(f.feature)},
                      {"impact_pct", f.impact_pct},
                      {"between", f.between},
                      {"within", f.within},
                      {"total", f.total}});
    plot += std::string(quality::feature_name(f.feature)) + ',' + feature_label(f.feature) + ',' +
            num(f.impact_pct) + '\n';
  }
  j["impact"] = std::move(ranked);
  ordered_json absent = ordered_json::array();
  for (auto f : impact.absent) absent.push_back(quality::feature_name(f));
  j["absent_features"] = std::move(absent);
  emit(o.report, dump(j));
  if (!o.plot.empty()) emit(o.plot, plot);
  if (!o.labels.empty()) {
    std::string text = "customer_id,label\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
      text += table.ids[i] + ',' + std::to_string(clustering.assignment.labels[i]) + '\n';
    }
    emit(o.labels, text);
  }
  return 0;
}

// synth

struct SynthGraphOptions {
  std::size_t clusters = 4;
  std::size_t size = 20;
  double p_in = 0.9;
  double p_out = 0.02;
  std::uint64_t seed = 0;
  std::string edges;
  std::string communities;
};

int run_synth_graph(const SynthGraphOptions& o) {
  const PlantedGraph planted = planted_partition(o.clusters, o.size, o.p_in, o.p_out, o.seed);
  std::string text;
  for (NodeIndex v = 0; v < planted.graph.node_count(); ++v) {
    for (NodeIndex w : planted.graph.successors(v)) {
      if (v < w) text += std::to_string(planted.graph.id_of(v)) + '\t' + std::to_string(planted.graph.id_of(w)) + '\n';
    }
    if (planted.graph.out_degree(v) == 0) {
      text += std::to_string(planted.graph.id_of(v)) + '\t' + std::to_string(planted.graph.id_of(v)) + '\n';
    }
  }
  emit(o.edges, text);
  if (!o.communities.empty()) {
    std::string cmty;
    for (const auto& c : planted.truth.communities) {
      for (std::size_t i = 0; i < c.size(); ++i) cmty += (i ? "\t" : "") + std::to_string(c[i]);
      cmty += '\n';
    }
    emit(o.communities, cmty);
  }
  return 0;
}

struct SynthCustomersOptions {
  std::size_t n = 200;
  std::size_t clusters = 2;
  std::vector<std::string> separate;
  double base = 50.0;
  double noise = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string planted;
};

int run_synth_customers(const SynthCustomersOptions& o) {
  quality::SynthSpec spec = quality::SynthSpec::uniform(o.clusters);
  spec.base.fill(o.base);
  spec.noise.fill(o.noise);
  for (const auto& item : o.separate) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--separate expects FEATURE=GAP, got '" + item + "'");
    const auto f = quality::feature_from_name(item.substr(0, eq));
    if (!f) throw UsageError("--separate: unknown feature '" + item.substr(0, eq) + "'");
    double gap = 0.0;
    const std::string value = item.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), gap);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw UsageError("--separate: bad gap '" + value + "'");
    }
    spec.separation[static_cast<std::size_t>(*f)] = gap;
  }
  const auto result = quality::synth_customers(o.seed, o.n, spec);
  std::ostringstream csv;
  quality::write_customers(csv, result.table);
  emit(o.out, csv.str());
  if (!o.planted.empty()) {
    std::string text = "customer_id,cluster\n";
    for (std::size_t i = 0; i < result.table.size(); ++i) {
      text += result.table.ids[i] + ',' + std::to_string(result.planted[i]) + '\n';
    }
    emit(o.planted, text);
  }
  return 0;
}

template <typename T>
std::shared_ptr<T> make_options() {
  return std::make_shared<T>();
}

}  // namespace

void set_quiet(bool quiet) { g_quiet = quiet; }

void log_line(const std::string& message) {
  if (!g_quiet) std::cerr << "commscape: " << message << '\n';
}

std::vector<std::pair<CLI::App*, std::function<int()>>> add_commands(CLI::App& app) {
  std::vector<std::pair<CLI::App*, std::function<int()>>> handlers;
  const auto existing = CLI::ExistingFile;

  {
    auto o = make_options<StatsOptions>();
    auto* cmd = app.add_subcommand("stats", "Graph size and degree summary as JSON");
    cmd->add_option("--edges", o->edges, "SNAP edge list (plain or gzip)")->required()->check(existing);
    cmd->add_flag("--directed", o->directed, "Read each line as one arc instead of an undirected edge");
    cmd->add_option("--communities", o->communities, "SNAP community file to count")->check(existing);
    cmd->add_option("--out", o->out, "JSON output path, - for stdout");
    handlers.emplace_back(cmd, [o] { return run_stats(*o); });
  }
  {
    auto o = make_options<SimilarityCliOptions>();
    auto* cmd = app.add_subcommand("similarity", "Feature spacing matrix as CSV plus JSON metadata");
    cmd->add_option("--edges", o->edges, "SNAP edge list (plain or gzip)")->required()->check(existing);
    cmd->add_flag("--directed", o->directed, "Read each line as one arc instead of an undirected edge");
    cmd->add_option("--p", o->p, "Walk length (default: min(4, n - 2), at least 1)");
    cmd->add_option("--weights", o->weights, "Per-length weights, strictly decreasing (default: 2^-l)")
        ->default_str("");
    cmd->add_option("--landmarks", o->landmarks, "Landmark columns; 0 or >= n gives the full matrix");
    cmd->add_option("--seed", o->seed, "Seed for landmark sampling");
    cmd->add_flag("--symmetrize", o->symmetrize, "Average H(a,b) and H(b,a) before normalizing");
    cmd->add_option("--out", o->out, "CSV output path, - for stdout");
    cmd->add_option("--meta", o->meta, "Metadata JSON path (default: <out>.meta.json when --out is a file)");
    cmd->add_option("--list-walks", o->list_walks, "Print the walks leaving this node instead of the matrix");
    cmd->add_option("--walk-limit", o->walk_limit, "Maximum walks printed by --list-walks");
    handlers.emplace_back(cmd, [o] { return run_similarity(*o); });
  }
  {
    auto o = make_options<ClusterCliOptions>();
    auto* cmd = app.add_subcommand("cluster", "k-means over a point CSV");
    cmd->add_option("--points", o->points, "Point CSV, one row per point, optional id column")
        ->required()
        ->check(existing);
    cmd->add_option("--k", o->k, "Cluster count")->required();
    cmd->add_option("--seed", o->seed, "Seed for k-means++ initialization");
    cmd->add_option("--width", o->width, "Margin interval width (default: bounding-box diagonal / (16 k))");
    cmd->add_option("--max-iter", o->max_iter, "Iteration cap");
    cmd->add_flag("--lloyd", o->lloyd, "Plain Lloyd iteration instead of the interval-pruned variant");
    cmd->add_flag("--shadow-check", o->shadow_check, "Count skipped points a full reassignment would move");
    cmd->add_option("--out", o->out, "Label CSV path, - for stdout");
    cmd->add_option("--report", o->report, "Run report JSON path");
    cmd->add_option("--centroids", o->centroids, "Final centroid CSV path");
    handlers.emplace_back(cmd, [o] { return run_cluster(*o); });
  }
  {
    auto o = make_options<DetectCliOptions>();
    auto* cmd = app.add_subcommand("detect", "Community detection on one graph");
    cmd->add_option("--edges", o->edges, "SNAP edge list (plain or gzip)")->required()->check(existing);
    cmd->add_flag("--directed", o->directed, "Read each line as one arc instead of an undirected edge");
    cmd->add_option("--communities", o->communities, "Ground-truth community file for the count error")
        ->check(existing);
    cmd->add_option("--k", o->k, "Fixed community count (default: automatic)");
    cmd->add_flag("--auto-k", o->auto_k, "Choose the count by penalized bisection (the default)");
    cmd->add_option("--p", o->p, "Walk length (default: min(4, n - 2) per component)");
    cmd->add_option("--weights", o->weights, "Per-length weights, strictly decreasing (default: 2^-l)")
        ->default_str("");
    cmd->add_option("--landmarks", o->landmarks, "Landmark columns of the node embedding");
    cmd->add_option("--lambda", o->lambda, "Penalty multiplier for each accepted split");
    cmd->add_option("--seed", o->seed, "Seed for landmarks and k-means");
    cmd->add_option("--max-depth", o->max_depth, "Bisection depth limit");
    cmd->add_flag("--symmetrize", o->symmetrize, "Average H(a,b) and H(b,a) before normalizing");
    cmd->add_option("--max-iter", o->max_iter, "k-means iteration cap");
    cmd->add_option("--width", o->width, "Margin interval width (default: bounding-box diagonal / (16 k))");
    cmd->add_option("--out", o->out, "Partition output, one community per line");
    cmd->add_option("--report", o->report, "Report JSON path, - for stdout");
    handlers.emplace_back(cmd, [o] { return run_detect(*o); });
  }
  {
    auto o = make_options<EvaluateCliOptions>();
    auto* cmd = app.add_subcommand("evaluate", "Community-count error over a dataset manifest");
    cmd->add_option("--manifest", o->manifest, "JSON array of datasets")->check(existing);
    cmd->add_flag("--reference", o->reference, "Score the published counts instead of running detection");
    cmd->add_option("--report", o->report, "Report JSON path, - for stdout");
    cmd->add_option("--table", o->table, "CSV: name,true,found,error_pct");
    cmd->add_option("--plot", o->plot, "Bar-chart CSV: name,true,found");
    handlers.emplace_back(cmd, [o] { return run_evaluate(*o); });
  }
  {
    auto o = make_options<QualityCliOptions>();
    auto* cmd = app.add_subcommand("quality", "Cluster customers and score feature impact");
    cmd->add_option("--customers", o->customers, "Customer CSV with a customer_id column")
        ->required()
        ->check(existing);
    cmd->add_option("--k", o->k, "Cluster count");
    cmd->add_option("--seed", o->seed, "Seed for k-means++ initialization");
    cmd->add_option("--report", o->report, "Impact report JSON path, - for stdout");
    cmd->add_option("--plot", o->plot, "Bar-chart CSV: feature,name,impact_pct");
    cmd->add_option("--labels", o->labels, "Cluster label CSV path");
    handlers.emplace_back(cmd, [o] { return run_quality(*o); });
  }
  {
    auto* synth = app.add_subcommand("synth", "Synthetic planted graphs and customers");
    synth->require_subcommand(1);
    auto g = make_options<SynthGraphOptions>();
    auto* graph = synth->add_subcommand("graph", "Planted-partition graph as a SNAP edge list");
    graph->add_option("--clusters", g->clusters, "Number of planted communities");
    graph->add_option("--size", g->size, "Nodes per community");
    graph->add_option("--p-in", g->p_in, "Edge probability inside a community")->check(CLI::Range(0.0, 1.0));
    graph->add_option("--p-out", g->p_out, "Edge probability across communities")->check(CLI::Range(0.0, 1.0));
    graph->add_option("--seed", g->seed, "Generator seed");
    graph->add_option("--edges", g->edges, "Edge list output path, - for stdout")->required();
    graph->add_option("--communities", g->communities, "Planted community file output path");
    handlers.emplace_back(graph, [g] { return run_synth_graph(*g); });

    auto c = make_options<SynthCustomersOptions>();
    auto* customers = synth->add_subcommand("customers", "Customers with planted clusters as CSV");
    customers->add_option("--n", c->n, "Number of customers");
    customers->add_option("--clusters", c->clusters, "Number of planted clusters");
    customers->add_option("--separate", c->separate, "FEATURE=GAP: per-cluster mean offset, repeatable")
        ->default_str("");
    customers->add_option("--base", c->base, "Mean of every feature in cluster 0");
    customers->add_option("--noise", c->noise, "Gaussian noise standard deviation");
    customers->add_option("--seed", c->seed, "Generator seed");
    customers->add_option("--out", c->out, "Customer CSV output path, - for stdout")->required();
    customers->add_option("--planted", c->planted, "Planted cluster CSV output path");
    handlers.emplace_back(customers, [c] { return run_synth_customers(*c); });
  }
  return handlers;
}

}  // namespace commscape::cli
