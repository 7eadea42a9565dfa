#include "casc/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "casc/io.hpp"
#include "casc/parallel.hpp"
#include "casc/rng.hpp"

namespace casc {

using nlohmann::ordered_json;

namespace {

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct FoldOutcome {
  double auc_value = 0.0;
  double kappa_value = 0.0;
  BasicMetrics basics;
};

FoldOutcome evaluate_fold(ClassifierKind kind, const FeatureTable& table,
                          std::span<const std::size_t> train, std::span<const std::size_t> test,
                          std::uint64_t fit_seed, const HyperParams& hp,
                          std::vector<double>* pooled_scores) {
  TrainedModel model = fit(kind, table.schema, table.x, table.labels, train, fit_seed, hp);
  std::vector<double> scores = predict_proba(model, table.x, test);
  std::vector<int> truth(test.size());
  std::vector<int> pred(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    truth[i] = table.labels[test[i]];
    pred[i] = hard_label(scores[i]);
    if (pooled_scores) (*pooled_scores)[test[i]] = scores[i];
  }
  FoldOutcome out;
  out.auc_value = auc(scores, truth);
  out.kappa_value = kappa_scaled(pred, truth);
  out.basics = basic_metrics(pred, truth);
  return out;
}

// Full pass + balanced pass for one classifier on one table. Deterministic
// given (table, seeds); shared split seeds keep folds identical across
// classifiers.
struct TableEvaluation {
  std::vector<double> fold_auc, fold_kappa;
  std::vector<double> rep_precision, rep_recall, rep_accuracy, rep_f1;
  std::vector<double> pooled_scores;
};

TableEvaluation evaluate_table(ClassifierKind kind, const FeatureTable& table,
                               const ExperimentConfig& config, std::uint64_t split_seed,
                               std::uint64_t fit_seed_base) {
  TableEvaluation ev;
  const auto folds = stratified_kfold(table.labels, config.folds,
                                      derive_seed(split_seed, hash_tag("folds")));
  ev.pooled_scores.assign(table.labels.size(), 0.0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    FoldOutcome out = evaluate_fold(kind, table, folds[f].train, folds[f].test,
                                    derive_seed(fit_seed_base, hash_tag("full"), f),
                                    config.hp, &ev.pooled_scores);
    ev.fold_auc.push_back(out.auc_value);
    ev.fold_kappa.push_back(out.kappa_value);
  }
  for (int rep = 0; rep < config.reps; ++rep) {
    const auto keep = undersample_balanced(
        table.labels, derive_seed(split_seed, hash_tag("undersample"),
                                  static_cast<std::uint64_t>(rep)));
    std::vector<int> kept_labels(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) kept_labels[i] = table.labels[keep[i]];
    const auto sub_folds = stratified_kfold(
        kept_labels, config.folds,
        derive_seed(split_seed, hash_tag("balanced-folds"), static_cast<std::uint64_t>(rep)));
    double precision = 0, recall = 0, accuracy = 0, f1 = 0;
    for (std::size_t f = 0; f < sub_folds.size(); ++f) {
      std::vector<std::size_t> train, test;
      train.reserve(sub_folds[f].train.size());
      test.reserve(sub_folds[f].test.size());
      for (std::size_t i : sub_folds[f].train) train.push_back(keep[i]);
      for (std::size_t i : sub_folds[f].test) test.push_back(keep[i]);
      FoldOutcome out = evaluate_fold(
          kind, table, train, test,
          derive_seed(fit_seed_base, hash_tag("balanced"), static_cast<std::uint64_t>(rep), f),
          config.hp, nullptr);
      precision += out.basics.precision;
      recall += out.basics.recall;
      accuracy += out.basics.accuracy;
      f1 += out.basics.f1;
    }
    const double k = static_cast<double>(config.folds);
    ev.rep_precision.push_back(precision / k);
    ev.rep_recall.push_back(recall / k);
    ev.rep_accuracy.push_back(accuracy / k);
    ev.rep_f1.push_back(f1 / k);
  }
  return ev;
}

}  // namespace

std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const int> labels) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double positives = 0, negatives = 0;
  for (int y : labels) (y ? positives : negatives) += 1.0;
  std::vector<RocPoint> points;
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  double tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] ? tp : fp) += 1.0;
      ++i;
    }
    points.push_back({s, negatives > 0 ? fp / negatives : 0.0,
                      positives > 0 ? tp / positives : 0.0});
  }
  return points;
}

double FinalClassifierResult::auc_mean() const { return mean_of(fold_auc); }
double FinalClassifierResult::kappa_mean() const { return mean_of(fold_kappa); }

BasicMetrics FinalClassifierResult::balanced_means() const {
  BasicMetrics m;
  m.precision = mean_of(rep_precision);
  m.recall = mean_of(rep_recall);
  m.accuracy = mean_of(rep_accuracy);
  m.f1 = mean_of(rep_f1);
  return m;
}

double EarlyClassifierResult::auc_mean(std::size_t step) const { return mean_of(fold_auc[step]); }
double EarlyClassifierResult::kappa_mean(std::size_t step) const {
  return mean_of(fold_kappa[step]);
}
double EarlyClassifierResult::f1_mean(std::size_t step) const { return mean_of(rep_f1[step]); }

ExperimentReport run_final_stage(const FeatureTable& table, const ExperimentConfig& config) {
  ExperimentReport report;
  report.scenario = "final";
  report.master_seed = config.seed;
  report.folds = config.folds;
  report.repetitions = config.reps;
  report.kinds = config.kinds;
  report.final_results.resize(config.kinds.size());
  const std::uint64_t split_seed = derive_seed(config.seed, hash_tag("final-splits"));
  parallel_for(config.kinds.size(), config.workers, [&](std::size_t ki) {
    TableEvaluation ev = evaluate_table(
        config.kinds[ki], table, config, split_seed,
        derive_seed(config.seed, hash_tag("final-fit"),
                    static_cast<std::uint64_t>(config.kinds[ki])));
    FinalClassifierResult& res = report.final_results[ki];
    res.fold_auc = std::move(ev.fold_auc);
    res.fold_kappa = std::move(ev.fold_kappa);
    res.rep_precision = std::move(ev.rep_precision);
    res.rep_recall = std::move(ev.rep_recall);
    res.rep_accuracy = std::move(ev.rep_accuracy);
    res.rep_f1 = std::move(ev.rep_f1);
    res.roc = roc_points(ev.pooled_scores, table.labels);
  });
  return report;
}

ExperimentReport run_early_stage(const SeriesCube& cube, const ExperimentConfig& config) {
  ExperimentReport report;
  report.scenario = "early";
  report.master_seed = config.seed;
  report.folds = config.folds;
  report.repetitions = config.reps;
  report.kinds = config.kinds;
  const std::size_t n_steps = static_cast<std::size_t>(cube.n_steps);
  report.deltas.resize(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k)
    report.deltas[k] = (static_cast<int>(k) + 1) * cube.step_minutes;
  report.early_results.resize(config.kinds.size());
  for (auto& res : report.early_results) {
    res.fold_auc.resize(n_steps);
    res.fold_kappa.resize(n_steps);
    res.rep_f1.resize(n_steps);
  }
  // one work unit per time step; every classifier shares the step's table
  parallel_for(n_steps, config.workers, [&](std::size_t k) {
    FeatureTable table = early_feature_table(cube, static_cast<int>(k) + 1);
    const std::uint64_t split_seed =
        derive_seed(config.seed, hash_tag("early-splits"), k);
    for (std::size_t ki = 0; ki < config.kinds.size(); ++ki) {
      TableEvaluation ev = evaluate_table(
          config.kinds[ki], table, config, split_seed,
          derive_seed(config.seed, hash_tag("early-fit"), k,
                      static_cast<std::uint64_t>(config.kinds[ki])));
      report.early_results[ki].fold_auc[k] = std::move(ev.fold_auc);
      report.early_results[ki].fold_kappa[k] = std::move(ev.fold_kappa);
      report.early_results[ki].rep_f1[k] = std::move(ev.rep_f1);
    }
  });
  return report;
}

ExperimentReport run_final_stage(const Dataset& dataset, const ExperimentConfig& config) {
  FeatureTable table = final_feature_table(dataset, config.step_minutes,
                                           config.horizon_minutes, config.workers);
  return run_final_stage(table, config);
}

ExperimentReport run_early_stage(const Dataset& dataset, const ExperimentConfig& config) {
  SeriesCube cube = build_series_cube(dataset, config.step_minutes, config.horizon_minutes,
                                      config.workers);
  return run_early_stage(cube, config);
}

std::string config_hash_hex(const std::string& config_json) {
  std::uint64_t h = hash_tag(config_json);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string write_metrics_json(const ExperimentReport& report, const std::string& config_json) {
  ordered_json root;
  root["schema"] = "cascade-metrics-v1";
  root["scenario"] = report.scenario;
  root["config"] = config_json.empty() ? ordered_json::object()
                                       : ordered_json::parse(config_json);
  root["config_hash"] = config_hash_hex(config_json);
  root["master_seed"] = report.master_seed;
  root["folds"] = report.folds;
  root["undersampling_repetitions"] = report.repetitions;
  ordered_json kinds = ordered_json::array();
  for (auto k : report.kinds) kinds.push_back(std::string(to_string(k)));
  root["classifiers"] = kinds;

  if (report.scenario == "final") {
    ordered_json final_obj;
    for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
      const auto& res = report.final_results[ki];
      ordered_json entry;
      entry["full"] = {{"fold_auc", res.fold_auc},
                       {"fold_kappa_scaled", res.fold_kappa},
                       {"auc", res.auc_mean()},
                       {"kappa_scaled", res.kappa_mean()}};
      BasicMetrics bal = res.balanced_means();
      entry["balanced"] = {{"rep_precision", res.rep_precision},
                           {"rep_recall", res.rep_recall},
                           {"rep_accuracy", res.rep_accuracy},
                           {"rep_f1", res.rep_f1},
                           {"precision", bal.precision},
                           {"recall", bal.recall},
                           {"accuracy", bal.accuracy},
                           {"f1", bal.f1}};
      final_obj[std::string(to_string(report.kinds[ki]))] = std::move(entry);
    }
    root["final"] = std::move(final_obj);
  } else {
    ordered_json early_obj;
    early_obj["deltas"] = report.deltas;
    for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
      const auto& res = report.early_results[ki];
      std::vector<double> auc_means, kappa_means, f1_means;
      for (std::size_t k = 0; k < report.deltas.size(); ++k) {
        auc_means.push_back(res.auc_mean(k));
        kappa_means.push_back(res.kappa_mean(k));
        f1_means.push_back(res.f1_mean(k));
      }
      ordered_json entry;
      entry["auc"] = auc_means;
      entry["kappa_scaled"] = kappa_means;
      entry["f1_balanced"] = f1_means;
      entry["fold_auc"] = res.fold_auc;
      entry["fold_kappa_scaled"] = res.fold_kappa;
      entry["rep_f1"] = res.rep_f1;
      early_obj[std::string(to_string(report.kinds[ki]))] = std::move(entry);
    }
    root["early"] = std::move(early_obj);
  }
  return root.dump(2) + "\n";
}

std::string write_curves_csv(const ExperimentReport& report, const std::string& config_hash) {
  std::ostringstream out;
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "classifier,delta,metric,value\n";
  for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
    const auto& res = report.early_results[ki];
    const auto name = to_string(report.kinds[ki]);
    for (const char* metric : {"auc", "kappa_scaled", "f1_balanced"}) {
      for (std::size_t k = 0; k < report.deltas.size(); ++k) {
        double value = metric[0] == 'a'   ? res.auc_mean(k)
                       : metric[0] == 'k' ? res.kappa_mean(k)
                                          : res.f1_mean(k);
        out << name << ',' << report.deltas[k] << ',' << metric << ','
            << format_double(value) << '\n';
      }
    }
  }
  return out.str();
}

std::string write_roc_csv(const ExperimentReport& report, const std::string& config_hash) {
  std::ostringstream out;
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "classifier,threshold,fpr,tpr\n";
  for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
    const auto name = to_string(report.kinds[ki]);
    for (const auto& p : report.final_results[ki].roc)
      out << name << ',' << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
          << format_double(p.tpr) << '\n';
  }
  return out.str();
}

std::string summary_table(const ExperimentReport& report) {
  std::ostringstream out;
  char line[128];
  if (report.scenario == "final") {
    out << "classifier  precision  recall  accuracy  f1\n";
    for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
      BasicMetrics m = report.final_results[ki].balanced_means();
      std::snprintf(line, sizeof(line), "%-10s  %9.3f  %6.3f  %8.3f  %5.3f\n",
                    std::string(to_string(report.kinds[ki])).c_str(), m.precision, m.recall,
                    m.accuracy, m.f1);
      out << line;
    }
  } else {
    out << "classifier  auc(last)  kappa_scaled(last)  f1_balanced(last)\n";
    const std::size_t last = report.deltas.size() - 1;
    for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
      const auto& res = report.early_results[ki];
      std::snprintf(line, sizeof(line), "%-10s  %9.3f  %18.3f  %17.3f\n",
                    std::string(to_string(report.kinds[ki])).c_str(), res.auc_mean(last),
                    res.kappa_mean(last), res.f1_mean(last));
      out << line;
    }
  }
  return out.str();
}

}  // namespace casc
