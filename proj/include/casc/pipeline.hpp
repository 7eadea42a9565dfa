#pragma once

// Bulk feature extraction over a dataset: the 28-feature final-stage table
// and the per-step series cube backing the 18-feature early-stage tables.
// Extraction is parallel across posts and bit-identical to the sequential
// run.

#include <filesystem>
#include <string>
#include <vector>

#include "casc/classifiers.hpp"
#include "casc/io.hpp"
#include "casc/model.hpp"

namespace casc {

struct FeatureTable {
  FeatureSchema schema = FeatureSchema::final28;
  std::vector<std::string> post_ids;
  std::vector<int> labels;  // 1 = conspiracy
  Matrix x;
};

FeatureTable final_feature_table(const Dataset& dataset, int step_minutes = 30,
                                 int horizon_minutes = 2880, unsigned workers = 1);

// values of the three evolution series for every post and step
struct SeriesCube {
  int step_minutes = 30;
  int n_steps = 96;
  std::vector<std::string> post_ids;
  std::vector<int> labels;
  Matrix friendships_ratio;   // n_posts x n_steps
  Matrix size;
  Matrix interactions_ratio;
};

SeriesCube build_series_cube(const Dataset& dataset, int step_minutes = 30,
                             int horizon_minutes = 2880, unsigned workers = 1);

// 18-column table using the first k_steps entries of each series.
FeatureTable early_feature_table(const SeriesCube& cube, int k_steps);

void write_features_csv(const FeatureTable& table, const std::filesystem::path& path,
                        const std::string& config_hash = {});
void write_early_features_csv(const FeatureTable& table, int delta_minutes,
                              const std::filesystem::path& path,
                              const std::string& config_hash = {});

}  // namespace casc
