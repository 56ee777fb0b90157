#include "upmgc/pipeline.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "upmgc/csv.h"
#include "upmgc/fusion.h"
#include "upmgc/random.h"
#include "upmgc/spectral.h"

namespace upmgc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON

namespace {

json synth_to_json(const SynthConfig& s) {
  return {{"n_samples", s.n_samples}, {"n_views", s.n_views},
          {"n_clusters", s.n_clusters}, {"dims", s.dims},
          {"separation", s.separation}, {"noise", s.noise}, {"seed", s.seed}};
}

SynthConfig synth_from_json(const json& j) {
  SynthConfig s;
  s.n_samples = j.value("n_samples", s.n_samples);
  s.n_views = j.value("n_views", s.n_views);
  s.n_clusters = j.value("n_clusters", s.n_clusters);
  s.dims = j.value("dims", s.dims);
  s.separation = j.value("separation", s.separation);
  s.noise = j.value("noise", s.noise);
  s.seed = j.value("seed", s.seed);
  return s;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["manifest"] = c.manifest ? json(c.manifest->string()) : json(nullptr);
  j["synth"] = c.synth ? synth_to_json(*c.synth) : json(nullptr);
  j["backend"] = std::string(to_string(c.graph.backend));
  j["lambda"] = c.graph.lambda;
  j["knn"] = c.graph.knn;
  j["alignment_ratio"] = c.alignment_ratio;
  j["n_clusters"] = c.n_clusters;
  j["seed"] = c.seed;
  j["match"] = {{"tol", c.match.tol},
                {"max_iter", c.match.max_iter},
                {"projection_tol", c.match.projection_tol},
                {"projection_sweeps", c.match.projection_sweeps},
                {"projection", std::string(to_string(c.match.projection))}};
  j["kmeans_restarts"] = c.kmeans_restarts;
  j["macc_q"] = c.macc_q;
  j["zscore"] = c.zscore;
  j["skip_matching"] = c.skip_matching;
  j["renormalize_subblocks"] = c.renormalize_subblocks;
  j["export_graphs"] = c.export_graphs;
  j["output_dir"] = c.output_dir.string();
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("manifest") && !j["manifest"].is_null()) {
    c.manifest = j["manifest"].get<std::string>();
  }
  if (j.contains("synth") && !j["synth"].is_null()) {
    c.synth = synth_from_json(j["synth"]);
  }
  c.graph.backend = parse_backend(j.value("backend", std::string("lsr")));
  c.graph.lambda = j.value("lambda", c.graph.lambda);
  c.graph.knn = j.value("knn", c.graph.knn);
  c.alignment_ratio = j.value("alignment_ratio", c.alignment_ratio);
  c.n_clusters = j.value("n_clusters", c.n_clusters);
  c.seed = j.value("seed", c.seed);
  if (j.contains("match")) {
    const json& m = j["match"];
    c.match.tol = m.value("tol", c.match.tol);
    c.match.max_iter = m.value("max_iter", c.match.max_iter);
    c.match.projection_tol = m.value("projection_tol", c.match.projection_tol);
    c.match.projection_sweeps =
        m.value("projection_sweeps", c.match.projection_sweeps);
    c.match.projection = parse_ds_method(
        m.value("projection", std::string(to_string(c.match.projection))));
  }
  c.kmeans_restarts = j.value("kmeans_restarts", c.kmeans_restarts);
  c.macc_q = j.value("macc_q", c.macc_q);
  c.zscore = j.value("zscore", c.zscore);
  c.skip_matching = j.value("skip_matching", c.skip_matching);
  c.renormalize_subblocks =
      j.value("renormalize_subblocks", c.renormalize_subblocks);
  c.export_graphs = j.value("export_graphs", c.export_graphs);
  c.output_dir = j.value("output_dir", std::string());
  return c;
}

json report_to_json(const ClusteringReport& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["dataset"] = r.dataset;
  j["n_samples"] = r.n_samples;
  j["n_views"] = r.n_views;
  j["n_paired"] = r.n_paired;
  j["seeds"] = r.seeds;
  j["anchor_view"] = r.anchor_view;
  j["losses"] = r.losses;
  j["weights"] = r.weights;
  j["matching"] = json::array();
  for (const auto& m : r.matching) {
    json macc = json::object(), macc_soft = json::object();
    for (const auto& [q, v] : m.macc) macc[std::to_string(q)] = v;
    for (const auto& [q, v] : m.macc_soft) macc_soft[std::to_string(q)] = v;
    j["matching"].push_back({{"view", m.view},
                             {"iterations", m.iterations},
                             {"converged", m.converged},
                             {"final_diff", m.final_diff},
                             {"epsilon_bound", m.epsilon_bound},
                             {"final_objective", m.final_objective},
                             {"trace_path", m.trace_path},
                             {"macc", macc},
                             {"macc_soft", macc_soft}});
  }
  if (r.metrics) {
    j["metrics"] = {{"acc", r.metrics->acc},
                    {"nmi", r.metrics->nmi},
                    {"purity", r.metrics->purity}};
  } else {
    j["metrics"] = nullptr;
  }
  j["assignment"] = r.assignment;
  j["timings_sec"] = r.timings_sec;
  return j;
}

ClusteringReport report_from_json_value(const json& j) {
  ClusteringReport r;
  r.config = config_from_json(j.at("config"));
  r.dataset = j.at("dataset").get<std::string>();
  r.n_samples = j.at("n_samples").get<std::size_t>();
  r.n_views = j.at("n_views").get<std::size_t>();
  r.n_paired = j.at("n_paired").get<std::size_t>();
  r.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
  r.anchor_view = j.at("anchor_view").get<std::size_t>();
  r.losses = j.at("losses").get<std::vector<double>>();
  r.weights = j.at("weights").get<std::vector<double>>();
  for (const auto& m : j.at("matching")) {
    ViewMatchSummary s;
    s.view = m.at("view").get<std::size_t>();
    s.iterations = m.at("iterations").get<int>();
    s.converged = m.at("converged").get<bool>();
    s.final_diff = m.at("final_diff").get<double>();
    s.epsilon_bound = m.at("epsilon_bound").get<double>();
    s.final_objective = m.at("final_objective").get<double>();
    s.trace_path = m.at("trace_path").get<std::string>();
    for (const auto& [q, v] : m.at("macc").items()) {
      s.macc[std::stoul(q)] = v.get<double>();
    }
    for (const auto& [q, v] : m.at("macc_soft").items()) {
      s.macc_soft[std::stoul(q)] = v.get<double>();
    }
    r.matching.push_back(std::move(s));
  }
  if (!j.at("metrics").is_null()) {
    const json& m = j["metrics"];
    r.metrics = MetricReport{m.at("acc").get<double>(), m.at("nmi").get<double>(),
                             m.at("purity").get<double>()};
  }
  r.assignment = j.at("assignment").get<std::vector<int>>();
  r.timings_sec = j.at("timings_sec").get<std::map<std::string, double>>();
  return r;
}

json parse_or_throw(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const ClusteringReport& report, int indent) {
  return report_to_json(report).dump(indent);
}

ClusteringReport report_from_json(const std::string& text) {
  const json j = parse_or_throw(text, "report");
  try {
    return report_from_json_value(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
}

std::string to_json(const RunConfig& cfg, int indent) {
  return config_to_json(cfg).dump(indent);
}

RunConfig run_config_from_json(const std::string& text) {
  const json j = parse_or_throw(text, "config");
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Pipeline

void validate(const RunConfig& cfg) {
  if (cfg.manifest.has_value() == cfg.synth.has_value()) {
    throw ValidationError("config: exactly one of manifest or synth is required");
  }
  if (cfg.synth) validate(*cfg.synth);
  if (!(cfg.alignment_ratio >= 0.0 && cfg.alignment_ratio <= 1.0)) {
    throw ValidationError("config: alignment ratio must lie in [0, 1]");
  }
  if (cfg.graph.backend == Backend::kLsr && !(cfg.graph.lambda > 0.0)) {
    throw ValidationError("config: lambda must be > 0");
  }
  if (cfg.graph.backend == Backend::kKnn && cfg.graph.knn < 1) {
    throw ValidationError("config: knn must be >= 1");
  }
  if (!(cfg.match.tol > 0.0) || cfg.match.max_iter < 1 ||
      !(cfg.match.projection_tol > 0.0) || cfg.match.projection_sweeps < 1) {
    throw ValidationError("config: matching tolerances and budgets must be positive");
  }
  if (cfg.kmeans_restarts < 1) {
    throw ValidationError("config: kmeans restarts must be >= 1");
  }
  for (std::size_t q : cfg.macc_q) {
    if (q < 1) throw ValidationError("config: MACC q must be >= 1");
  }
}

std::map<std::string, std::uint64_t> stage_seeds(std::uint64_t master) {
  return {{"master", master},
          {"data", derive_seed(master, "data")},
          {"unpair", derive_seed(master, "unpair")},
          {"kmeans", derive_seed(master, "kmeans")}};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs `fn`, re-raising failures tagged with the stage name.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(stage + ": " + e.what());
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::string trace_file_name(std::size_t view) {
  return "trace_view" + std::to_string(view) + ".csv";
}

void write_trace(const SoftCorrespondence& c, std::size_t view,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path.string());
  out << std::setprecision(17) << "view,iteration,diff_fro,objective\n";
  for (std::size_t t = 0; t < c.diffs.size(); ++t) {
    out << view << ',' << t + 1 << ',' << c.diffs[t] << ','
        << c.objective_trace[t] << '\n';
  }
}

std::size_t count_distinct(const std::vector<int>& labels) {
  return std::set<int>(labels.begin(), labels.end()).size();
}

}  // namespace

MultiViewDataset prepare_dataset(const RunConfig& cfg) {
  validate(cfg);
  const auto seeds = stage_seeds(cfg.seed);
  return in_stage("data", [&] {
    MultiViewDataset ds;
    if (cfg.manifest) {
      ds = load_dataset(*cfg.manifest);
    } else {
      SynthConfig sc = *cfg.synth;
      sc.seed = seeds.at("data");
      ds = generate_synthetic(sc);
    }
    if (cfg.zscore) zscore_features(ds);
    if (cfg.alignment_ratio < 1.0) {
      ds = apply_unpairing(ds, cfg.alignment_ratio, seeds.at("unpair"));
    }
    return ds;
  });
}

PipelineResult cluster_dataset(const MultiViewDataset& ds,
                               const RunConfig& cfg) {
  validate(cfg);
  validate(ds);
  const auto total_t0 = Clock::now();
  PipelineResult res;
  ClusteringReport& rep = res.report;
  rep.config = cfg;
  rep.dataset = ds.name;
  rep.n_samples = ds.n_samples();
  rep.n_views = ds.n_views();
  rep.n_paired = ds.n_paired;
  rep.seeds = stage_seeds(cfg.seed);
  const std::size_t n = ds.n_samples();
  const std::size_t v_count = ds.n_views();
  const std::size_t k =
      cfg.n_clusters > 0 ? cfg.n_clusters : count_distinct(ds.labels);

  auto t0 = Clock::now();
  in_stage("graphs", [&] {
    for (const Matrix& X : ds.views) res.graphs.push_back(build_graph(X, cfg.graph));
  });
  rep.timings_sec["graphs"] = seconds_since(t0);

  for (const auto& g : res.graphs) rep.losses.push_back(g.loss);
  const ViewWeights weights =
      in_stage("weights", [&] { return view_weights(rep.losses); });
  rep.weights = weights.alpha;
  rep.anchor_view = select_anchor_view(rep.losses);
  const std::size_t anchor = rep.anchor_view;

  // Matching of the unpaired trailing blocks against the anchor.
  t0 = Clock::now();
  const std::size_t m = ds.n_unpaired();
  res.correspondences.assign(v_count, SoftCorrespondence{});
  res.perms.assign(v_count, PermutationMap::identity(n));
  if (m > 0 && !cfg.skip_matching) {
    in_stage("matching", [&] {
      Matrix anchor_sub = trailing_block(res.graphs[anchor].S, m);
      if (cfg.renormalize_subblocks) anchor_sub = column_normalize(anchor_sub);
      for (std::size_t j = 0; j < v_count; ++j) {
        if (j == anchor) continue;
        Matrix view_sub = trailing_block(res.graphs[j].S, m);
        if (cfg.renormalize_subblocks) view_sub = column_normalize(view_sub);
        SoftCorrespondence soft = fixed_point_match(anchor_sub, view_sub, cfg.match);
        const ScoredDiscretization rounded = discretize_scored(soft.P);
        res.perms[j] = assemble_full_permutation(rounded.perm, ds.n_paired);

        ViewMatchSummary s;
        s.view = j;
        s.iterations = soft.iterations;
        s.converged = soft.converged;
        s.final_diff = soft.diffs.empty() ? 0.0 : soft.diffs.back();
        s.epsilon_bound = soft.epsilon_bound;
        s.final_objective =
            soft.objective_trace.empty() ? 0.0 : soft.objective_trace.back();
        if (ds.true_permutations) {
          // View row b holds original sample perms[j][b], which sits at
          // anchor row inv_anchor[perms[j][b]].
          const auto& perms = *ds.true_permutations;
          const IndexMap inv_anchor = invert_permutation(perms[anchor]);
          IndexMap truth(m);
          for (std::size_t i = 0; i < m; ++i) {
            truth[i] = inv_anchor[perms[j][ds.n_paired + i]] - ds.n_paired;
          }
          for (std::size_t q : cfg.macc_q) {
            if (q > m) continue;
            s.macc[q] = macc_at_q(rounded.scores, truth, q);
            s.macc_soft[q] = macc_at_q(soft.P, truth, q);
          }
        }
        if (!cfg.output_dir.empty()) {
          std::filesystem::create_directories(cfg.output_dir);
          s.trace_path = trace_file_name(j);
          write_trace(soft, j, cfg.output_dir / s.trace_path);
        }
        rep.matching.push_back(std::move(s));
        res.correspondences[j] = std::move(soft);
      }
    });
  }
  rep.timings_sec["matching"] = seconds_since(t0);

  t0 = Clock::now();
  res.fused = in_stage("fusion", [&] {
    return fuse(std::span<const SimilarityGraph>(res.graphs),
                std::span<const PermutationMap>(res.perms), weights);
  });
  rep.timings_sec["fusion"] = seconds_since(t0);

  t0 = Clock::now();
  const ClusterAssignment clusters = in_stage("spectral", [&] {
    KMeansOptions ko;
    ko.restarts = cfg.kmeans_restarts;
    ko.seed = rep.seeds.at("kmeans");
    return cluster_graph(res.fused, k, ko);
  });
  rep.timings_sec["spectral"] = seconds_since(t0);

  // Clusters come out in anchor order; view-0 row b sits at anchor row
  // perms[0][b].
  rep.assignment.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    rep.assignment[b] = clusters.labels[res.perms[0].perm[b]];
  }
  rep.metrics = in_stage("metrics", [&] { return evaluate(ds.labels, rep.assignment); });
  rep.timings_sec["total"] = seconds_since(total_t0);
  return res;
}

void write_outputs(const PipelineResult& result,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const ClusteringReport& rep = result.report;
  for (std::size_t j = 0; j < result.correspondences.size(); ++j) {
    const auto& c = result.correspondences[j];
    if (!c.diffs.empty()) write_trace(c, j, dir / trace_file_name(j));
  }
  csv::write_labels(rep.assignment, dir / "assignment.csv");
  if (rep.config.export_graphs) {
    for (std::size_t j = 0; j < result.graphs.size(); ++j) {
      csv::write_matrix(result.graphs[j].S,
                        dir / ("graph_view" + std::to_string(j) + ".csv"));
    }
    csv::write_matrix(result.fused, dir / "fused.csv");
  }
  std::ofstream out(dir / "report.json");
  if (!out) throw StageError("io", "cannot write " + (dir / "report.json").string());
  out << to_json(rep) << '\n';
}

ClusteringReport run_pipeline(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const MultiViewDataset ds = prepare_dataset(cfg);
  const double data_sec = seconds_since(t0);
  PipelineResult res = cluster_dataset(ds, cfg);
  res.report.timings_sec["data"] = data_sec;
  if (!cfg.output_dir.empty()) {
    in_stage("output", [&] { write_outputs(res, cfg.output_dir); });
  }
  return res.report;
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

std::pair<double, double> mean_and_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                      static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg, std::span<const double> ratios,
                      int repeats) {
  if (ratios.empty()) throw ValidationError("sweep: no ratios");
  if (repeats < 1) throw ValidationError("sweep: repeats must be >= 1");
  SweepResult out;
  for (double ratio : ratios) {
    std::vector<ClusteringReport> reports;
    std::vector<double> acc, nmi_v, pur, macc1;
    for (int r = 0; r < repeats; ++r) {
      RunConfig c = cfg;
      c.alignment_ratio = ratio;
      c.seed = cfg.seed + static_cast<std::uint64_t>(r);
      c.output_dir.clear();
      ClusteringReport rep = run_pipeline(c);
      if (rep.metrics) {
        acc.push_back(rep.metrics->acc);
        nmi_v.push_back(rep.metrics->nmi);
        pur.push_back(rep.metrics->purity);
      }
      double sum = 0.0;
      int cnt = 0;
      for (const auto& s : rep.matching) {
        if (auto it = s.macc.find(1); it != s.macc.end()) {
          sum += it->second;
          ++cnt;
        }
      }
      if (cnt > 0) macc1.push_back(sum / cnt);
      reports.push_back(std::move(rep));
    }
    SweepRow row;
    row.ratio = ratio;
    row.runs = repeats;
    std::tie(row.acc_mean, row.acc_std) = mean_and_sd(acc);
    std::tie(row.nmi_mean, row.nmi_std) = mean_and_sd(nmi_v);
    std::tie(row.purity_mean, row.purity_std) = mean_and_sd(pur);
    row.macc1_mean = mean_and_sd(macc1).first;
    out.rows.push_back(row);
    out.reports.push_back(std::move(reports));
  }
  return out;
}

void write_sweep_csv(const SweepResult& sweep,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path.string());
  out << std::setprecision(10)
      << "ratio,runs,acc_mean,acc_std,nmi_mean,nmi_std,purity_mean,purity_std,"
         "macc1_mean\n";
  for (const auto& r : sweep.rows) {
    out << r.ratio << ',' << r.runs << ',' << r.acc_mean << ',' << r.acc_std
        << ',' << r.nmi_mean << ',' << r.nmi_std << ',' << r.purity_mean << ','
        << r.purity_std << ',';
    if (std::isnan(r.macc1_mean)) {
      out << "nan";
    } else {
      out << r.macc1_mean;
    }
    out << '\n';
  }
}

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  auto parse = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw ValidationError("ratios: cannot parse '" + s + "'");
    }
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("ratios: expected start:stop:step");
    const double a = parse(parts[0]), b = parse(parts[1]), step = parse(parts[2]);
    if (!(step > 0.0) || b < a) throw ValidationError("ratios: bad range");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse(p));
  }
  if (out.empty()) throw ValidationError("ratios: empty list");
  for (double r : out) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ValidationError("ratios: every ratio must lie in [0, 1]");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bench

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("fit_loglog: need at least two (x, y) pairs");
  }
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ValidationError("fit_loglog: values must be positive");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_loglog: x values are all equal");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

BenchResult run_bench(std::span<const std::size_t> sizes,
                      const BenchOptions& opts) {
  if (sizes.size() < 2) throw ValidationError("bench: need at least two sizes");
  if (opts.repeats < 1) throw ValidationError("bench: repeats must be >= 1");
  BenchResult out;
  for (std::size_t n : sizes) {
    SynthConfig sc;
    sc.n_samples = n;
    sc.n_views = opts.n_views;
    sc.n_clusters = opts.n_clusters;
    sc.separation = opts.separation;
    sc.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(n));
    const MultiViewDataset ds =
        apply_unpairing(generate_synthetic(sc), 0.0, derive_seed(sc.seed, "unpair"));
    std::vector<SimilarityGraph> graphs;
    std::vector<double> losses;
    for (const Matrix& X : ds.views) {
      graphs.push_back(lsr_graph(X, GraphParams{}.lambda));
      losses.push_back(graphs.back().loss);
    }
    const std::size_t anchor = select_anchor_view(losses);

    BenchRow row;
    row.n = n;
    row.seconds = std::numeric_limits<double>::infinity();
    volatile std::size_t sink = 0;
    for (int r = 0; r < opts.repeats; ++r) {
      int iterations = 0;
      const auto t0 = Clock::now();
      for (std::size_t j = 0; j < graphs.size(); ++j) {
        if (j == anchor) continue;
        const SoftCorrespondence soft =
            fixed_point_match(graphs[anchor].S, graphs[j].S, opts.match);
        const IndexMap p = discretize(soft.P);
        sink = sink + p.front();
        iterations += soft.iterations;
      }
      const double sec = seconds_since(t0);
      if (sec < row.seconds) {
        row.seconds = sec;
        row.iterations = iterations;
      }
    }
    out.rows.push_back(row);
  }
  std::vector<double> xs, ys;
  for (const auto& r : out.rows) {
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(r.seconds);
  }
  const LogLogFit fit = fit_loglog(xs, ys);
  out.slope = fit.slope;
  out.r2 = fit.r2;
  return out;
}

void write_bench_csv(const BenchResult& bench,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path.string());
  out << std::setprecision(10) << "n,seconds,iterations\n";
  for (const auto& r : bench.rows) {
    out << r.n << ',' << r.seconds << ',' << r.iterations << '\n';
  }
}

}  // namespace upmgc
