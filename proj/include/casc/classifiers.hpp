#pragma once

// Three binary classifiers behind one contract: fit on labeled feature
// rows, emit positive-class (conspiracy) probabilities. Deterministic
// given (data, seed); inputs are standardized with parameters frozen at
// fit time (constant features map to zero).

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "casc/model.hpp"

namespace casc {

enum class ClassifierKind : std::uint8_t { ld = 0, rf = 1, mlp = 2 };

std::string_view to_string(ClassifierKind k);
ClassifierKind classifier_kind_from_string(std::string_view s);

struct HyperParams {
  double ld_ridge = 1e-4;   // added to the pooled covariance diagonal
  int rf_trees = 100;
  int rf_min_leaf = 1;
  int mlp_hidden = 64;
  int mlp_epochs = 500;
  double mlp_lr = 0.01;
};

// Row-major dense matrix; the feature tables and classifiers share it.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct LdParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct RfTree {
  // leaf when feature < 0; then `left` holds the vote (0 or 1)
  struct Node {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };
  std::vector<Node> nodes;
};

struct RfParams {
  std::vector<RfTree> trees;
};

struct MlpParams {
  int hidden = 0;
  std::vector<double> w1;  // cols x hidden, row-major by input feature
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
};

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::ld;
  FeatureSchema schema = FeatureSchema::final28;
  std::vector<double> feat_mean;
  std::vector<double> feat_scale;  // 0 marks a constant feature (zeroed)
  std::variant<LdParams, RfParams, MlpParams> params;
};

TrainedModel fit(ClassifierKind kind, FeatureSchema schema, const Matrix& x,
                 std::span<const int> labels, std::span<const std::size_t> rows,
                 std::uint64_t seed, const HyperParams& hp = {});

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x,
                                  std::span<const std::size_t> rows);
std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x);

// Convenience overloads over spec-shaped rows.
TrainedModel fit(ClassifierKind kind, std::span<const FeatureVector> rows,
                 std::span<const Label> labels, std::uint64_t seed, const HyperParams& hp = {});
std::vector<double> predict_proba(const TrainedModel& model,
                                  std::span<const FeatureVector> rows);

// Versioned binary format ("CASCML01"); round-trips preserve predictions
// bit-exactly.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::span<const std::uint8_t> bytes);

// Cross-entropy loss and its analytic gradient for the MLP at the given
// parameters (exposed for finite-difference verification).
double mlp_loss_and_grad(const MlpParams& p, const Matrix& x, std::span<const int> labels,
                         std::span<const std::size_t> rows, MlpParams* grad);

}  // namespace casc
