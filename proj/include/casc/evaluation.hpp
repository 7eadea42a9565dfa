#pragma once

// Imbalance-aware evaluation: exact rank-based AUC, scaled Cohen's kappa,
// the standard confusion metrics, stratified k-fold splits and the
// majority-undersampling protocol. The positive class is "conspiracy" (1).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "casc/model.hpp"

namespace casc {

// Mann-Whitney AUC with midrank tie handling; equals pairwise counting
// exactly. Throws SingleClassError unless both classes appear.
double auc(std::span<const double> scores, std::span<const int> labels);

// Cohen's kappa from the 2x2 confusion matrix, mapped to [0,1] via
// (kappa+1)/2; the p_e == 1 edge case returns 0.5.
double kappa_scaled(std::span<const int> pred, std::span<const int> labels);

struct BasicMetrics {
  double precision = 0;
  double recall = 0;
  double accuracy = 0;
  double f1 = 0;
};

// Zero denominators yield 0 and append a note to *warnings when given.
BasicMetrics basic_metrics(std::span<const int> pred, std::span<const int> labels,
                           std::vector<std::string>* warnings = nullptr);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified, deterministic given seed; fold class counts stay within one
// sample of the global proportions. Throws TooFewSamplesError when a class
// has fewer than k rows.
std::vector<FoldSplit> stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);

// Indices of a class-balanced subset: the whole minority class plus an
// equally sized majority sample drawn without replacement.
std::vector<std::size_t> undersample_balanced(std::span<const int> labels, std::uint64_t seed);

inline int hard_label(double score) { return score > 0.5 ? 1 : 0; }

}  // namespace casc
