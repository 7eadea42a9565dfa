#pragma once

// The two experiment drivers. Both run a full-dataset pass (per-fold AUC
// and scaled kappa) and a balanced pass (undersampling repetitions with
// confusion metrics averaged per fold, then per repetition). Work units
// carry seeds derived from the master seed, so any worker count reproduces
// the sequential result bit-exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "casc/classifiers.hpp"
#include "casc/evaluation.hpp"
#include "casc/pipeline.hpp"

namespace casc {

struct ExperimentConfig {
  std::vector<ClassifierKind> kinds = {ClassifierKind::ld, ClassifierKind::rf,
                                       ClassifierKind::mlp};
  int folds = 5;
  int reps = 10;
  int step_minutes = 30;
  int horizon_minutes = 2880;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  HyperParams hp;
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// one point per distinct score, descending, preceded by the (0,0) anchor
std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const int> labels);

struct FinalClassifierResult {
  std::vector<double> fold_auc;
  std::vector<double> fold_kappa;
  std::vector<double> rep_precision;
  std::vector<double> rep_recall;
  std::vector<double> rep_accuracy;
  std::vector<double> rep_f1;
  std::vector<RocPoint> roc;

  double auc_mean() const;
  double kappa_mean() const;
  BasicMetrics balanced_means() const;
};

struct EarlyClassifierResult {
  std::vector<std::vector<double>> fold_auc;    // [step][fold]
  std::vector<std::vector<double>> fold_kappa;  // [step][fold]
  std::vector<std::vector<double>> rep_f1;      // [step][rep]

  double auc_mean(std::size_t step) const;
  double kappa_mean(std::size_t step) const;
  double f1_mean(std::size_t step) const;
};

struct ExperimentReport {
  std::string scenario;  // "early" | "final"
  std::uint64_t master_seed = 0;
  int folds = 0;
  int repetitions = 0;
  std::vector<ClassifierKind> kinds;
  // final scenario
  std::vector<FinalClassifierResult> final_results;  // parallel to kinds
  // early scenario
  std::vector<int> deltas;
  std::vector<EarlyClassifierResult> early_results;  // parallel to kinds
};

ExperimentReport run_final_stage(const FeatureTable& table, const ExperimentConfig& config);
ExperimentReport run_early_stage(const SeriesCube& cube, const ExperimentConfig& config);

// dataset-level conveniences: extract features, then run
ExperimentReport run_final_stage(const Dataset& dataset, const ExperimentConfig& config);
ExperimentReport run_early_stage(const Dataset& dataset, const ExperimentConfig& config);

// Artifact rendering. config_json is echoed verbatim into metrics.json and
// hashed into every artifact.
std::string config_hash_hex(const std::string& config_json);
std::string write_metrics_json(const ExperimentReport& report, const std::string& config_json);
std::string write_curves_csv(const ExperimentReport& report, const std::string& config_hash);
std::string write_roc_csv(const ExperimentReport& report, const std::string& config_hash);
std::string summary_table(const ExperimentReport& report);

}  // namespace casc
