// cascade-analytics command line: synthesize datasets, validate and ingest
// interaction logs, extract feature matrices, run the classification
// experiments. Exit codes: 0 success, 1 validation/parse failure, 2 runtime
// error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "casc/experiments.hpp"
#include "casc/graph_builder.hpp"
#include "casc/io.hpp"
#include "casc/parallel.hpp"
#include "casc/pipeline.hpp"
#include "casc/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct InputPaths {
  std::string posts;
  std::string interactions;
  std::string friendships;
};

void add_input_options(CLI::App* cmd, InputPaths& paths) {
  cmd->add_option("--posts", paths.posts, "posts.jsonl path")->required();
  cmd->add_option("--interactions", paths.interactions, "interactions.jsonl path")->required();
  cmd->add_option("--friendships", paths.friendships, "friendships.csv path")->required();
}

casc::Dataset load_and_validate(const InputPaths& paths, bool print_report) {
  casc::Dataset ds = casc::load_dataset(paths.posts, paths.interactions, paths.friendships);
  auto report = casc::validate_dataset(ds.posts, ds.interactions, ds.friends);
  report.warnings.insert(report.warnings.end(), ds.load_warnings.begin(),
                         ds.load_warnings.end());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << "violation: " << v << '\n';
    if (print_report)
      std::cerr << report.violations.size() << " violation(s); dataset rejected\n";
    throw casc::ParseError("dataset failed validation with " +
                           std::to_string(report.violations.size()) + " violation(s)");
  }
  return ds;
}

std::vector<casc::ClassifierKind> parse_kinds(const std::string& csv) {
  std::vector<casc::ClassifierKind> kinds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) kinds.push_back(casc::classifier_kind_from_string(item));
  }
  if (kinds.empty()) throw casc::ParseError("empty --classifiers list");
  return kinds;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw casc::Error("cannot open '" + path.string() + "' for writing");
  out << text;
}

int cmd_synth(const std::string& preset_name, int n_per_class, std::uint64_t seed,
              const std::string& out_dir, const std::string& config_path) {
  casc::Preset preset = casc::preset_from_string(preset_name);
  casc::GenConfig cfg = config_path.empty() ? casc::preset_config(preset)
                                            : casc::read_gen_config(config_path, preset);
  casc::Dataset ds = casc::gen_dataset(cfg, n_per_class, seed);
  casc::write_dataset(ds, out_dir);
  casc::write_gen_config(cfg, fs::path(out_dir) / "gen_config.ini");
  std::size_t science = 0;
  for (const auto& p : ds.posts) science += p.label == casc::Label::science;
  std::cout << ds.posts.size() << " posts (" << science << " science, "
            << ds.posts.size() - science << " conspiracy), " << ds.interactions.size()
            << " interactions, " << ds.friends.edge_count() << " friendship edges -> "
            << out_dir << '\n';
  return 0;
}

int cmd_ingest(const InputPaths& paths) {
  casc::Dataset ds = casc::load_dataset(paths.posts, paths.interactions, paths.friendships);
  auto report = casc::validate_dataset(ds.posts, ds.interactions, ds.friends);
  for (const auto& w : ds.load_warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::size_t science = 0, conspiracy = 0, empty = 0;
  for (std::size_t i = 0; i < ds.posts.size(); ++i) {
    (ds.posts[i].label == casc::Label::science ? science : conspiracy) += 1;
    empty += ds.interactions_for(i).empty();
  }
  std::cout << ds.posts.size() << " posts: " << science << " science, " << conspiracy
            << " conspiracy\n";
  std::cout << ds.interactions.size() << " interactions, " << ds.friends.edge_count()
            << " friendship edges, " << ds.posts.size() - empty << " non-empty cascades\n";
  if (ds.posts.empty()) std::cerr << "warning: 0 posts loaded\n";
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << "violation: " << v << '\n';
    std::cout << report.violations.size() << " violation(s); dataset rejected\n";
    return 1;
  }
  std::cout << "validation: OK\n";
  return 0;
}

ordered_json config_echo(const InputPaths& paths, const std::string& out_dir,
                         const std::string& scenario, const std::string& classifiers,
                         int step, int horizon, int folds, int reps, std::uint64_t seed,
                         unsigned workers) {
  ordered_json cfg;
  cfg["posts"] = paths.posts;
  cfg["interactions"] = paths.interactions;
  cfg["friendships"] = paths.friendships;
  cfg["out"] = out_dir;
  cfg["scenario"] = scenario;
  cfg["classifiers"] = classifiers;
  cfg["step"] = step;
  cfg["horizon"] = horizon;
  cfg["folds"] = folds;
  cfg["reps"] = reps;
  cfg["seed"] = seed;
  cfg["workers"] = workers;
  return cfg;
}

int cmd_features(const InputPaths& paths, const std::string& out_dir,
                 const std::string& scenario, int delta, int step, int horizon,
                 unsigned workers, const std::string& dump_dir) {
  if (delta <= 0) delta = horizon;
  casc::Dataset ds = load_and_validate(paths, true);
  fs::create_directories(out_dir);
  ordered_json cfg = config_echo(paths, out_dir, scenario, "", step, horizon, 0, 0, 0, workers);
  cfg["delta"] = delta;
  const std::string hash = casc::config_hash_hex(cfg.dump());
  const auto start = std::chrono::steady_clock::now();
  if (scenario == "final") {
    casc::FeatureTable table = casc::final_feature_table(ds, step, horizon, workers);
    casc::write_features_csv(table, fs::path(out_dir) / "features.csv", hash);
  } else {
    casc::SeriesCube cube = casc::build_series_cube(ds, step, delta, workers);
    casc::FeatureTable table = casc::early_feature_table(cube, delta / step);
    casc::write_early_features_csv(table, delta, fs::path(out_dir) / "early_features.csv",
                                   hash);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "extracted %zu posts in %.2fs (%.0f posts/s)\n", ds.posts.size(), secs,
               secs > 0 ? static_cast<double>(ds.posts.size()) / secs : 0.0);
  if (!dump_dir.empty()) {
    fs::create_directories(dump_dir);
    for (std::size_t i = 0; i < ds.posts.size(); ++i) {
      auto graph = casc::build_final_graph(ds.posts[i], ds.interactions_for(i), ds.friends);
      write_text(fs::path(dump_dir) / (ds.posts[i].post_id + ".edges"),
                 casc::dump_graph(graph));
    }
  }
  return 0;
}

int cmd_experiment(const InputPaths& paths, const std::string& out_dir,
                   const std::string& scenario, const std::string& classifiers, int step,
                   int horizon, int folds, int reps, std::uint64_t seed, unsigned workers) {
  casc::Dataset ds = load_and_validate(paths, true);
  fs::create_directories(out_dir);
  casc::ExperimentConfig config;
  config.kinds = parse_kinds(classifiers);
  config.folds = folds;
  config.reps = reps;
  config.step_minutes = step;
  config.horizon_minutes = horizon;
  config.seed = seed;
  config.workers = workers;

  ordered_json cfg = config_echo(paths, out_dir, scenario, classifiers, step, horizon, folds,
                                 reps, seed, workers);
  const std::string cfg_json = cfg.dump();
  const std::string hash = casc::config_hash_hex(cfg_json);

  casc::ExperimentReport report;
  if (scenario == "final") {
    report = casc::run_final_stage(ds, config);
    write_text(fs::path(out_dir) / "roc.csv", casc::write_roc_csv(report, hash));
  } else {
    report = casc::run_early_stage(ds, config);
    write_text(fs::path(out_dir) / "curves_early.csv", casc::write_curves_csv(report, hash));
  }
  write_text(fs::path(out_dir) / "metrics.json", casc::write_metrics_json(report, cfg_json));
  std::cout << casc::summary_table(report);
  std::cout << "report written to " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascade analytics: propagation graphs, features, experiments"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
  std::string preset = "null";
  int n_per_class = 500;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  std::string synth_config;
  synth->add_option("--preset", preset, "separable|null")->required();
  synth->add_option("--n", n_per_class, "cascades per class (default 500)");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--config", synth_config, "INI file overriding preset parameters");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load, validate and summarize a dataset");
  InputPaths ingest_paths;
  add_input_options(ingest, ingest_paths);

  // features
  auto* features = app.add_subcommand("features", "extract feature matrices");
  InputPaths feat_paths;
  add_input_options(features, feat_paths);
  std::string feat_out, feat_scenario = "final", dump_dir;
  int feat_delta = 0, feat_step = 30, feat_horizon = 2880;
  unsigned feat_workers = casc::default_workers();
  features->add_option("--out", feat_out, "output directory")->required();
  features->add_option("--scenario", feat_scenario, "early|final")
      ->check(CLI::IsMember({"early", "final"}));
  features->add_option("--delta", feat_delta, "early-stage horizon in minutes (default: --horizon)");
  features->add_option("--step", feat_step, "snapshot step minutes (default 30)");
  features->add_option("--horizon", feat_horizon, "series horizon minutes (default 2880)");
  features->add_option("--workers", feat_workers, "worker threads");
  features->add_option("--dump-graphs", dump_dir, "also write per-post edge lists here");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a classification experiment");
  InputPaths exp_paths;
  add_input_options(experiment, exp_paths);
  std::string exp_out, exp_scenario = "final", exp_classifiers = "ld,rf,mlp";
  int exp_step = 30, exp_horizon = 2880, exp_folds = 5, exp_reps = 10;
  std::uint64_t exp_seed = 1;
  unsigned exp_workers = casc::default_workers();
  experiment->add_option("--out", exp_out, "output directory")->required();
  experiment->add_option("--scenario", exp_scenario, "early|final")
      ->check(CLI::IsMember({"early", "final"}));
  experiment->add_option("--classifiers", exp_classifiers, "comma list of ld,rf,mlp");
  experiment->add_option("--step", exp_step, "snapshot step minutes (default 30)");
  experiment->add_option("--horizon", exp_horizon, "series horizon minutes (default 2880)");
  experiment->add_option("--folds", exp_folds, "cross-validation folds (default 5)");
  experiment->add_option("--reps", exp_reps, "undersampling repetitions (default 10)");
  experiment->add_option("--seed", exp_seed, "master seed");
  experiment->add_option("--workers", exp_workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return cmd_synth(preset, n_per_class, synth_seed, synth_out, synth_config);
    if (ingest->parsed()) return cmd_ingest(ingest_paths);
    if (features->parsed())
      return cmd_features(feat_paths, feat_out, feat_scenario, feat_delta, feat_step,
                          feat_horizon, feat_workers, dump_dir);
    if (experiment->parsed())
      return cmd_experiment(exp_paths, exp_out, exp_scenario, exp_classifiers, exp_step,
                            exp_horizon, exp_folds, exp_reps, exp_seed, exp_workers);
  } catch (const casc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
