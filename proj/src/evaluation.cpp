#include "casc/evaluation.hpp"

#include <algorithm>
#include <numeric>

#include "casc/rng.hpp"

namespace casc {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw LengthMismatchError("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (int y : labels) positives += static_cast<std::size_t>(y != 0);
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0)
    throw SingleClassError("auc needs both classes present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // midranks: a run of equal scores shares the average of its rank span
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] != 0) positive_rank_sum += midrank;
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double kappa_scaled(std::span<const int> pred, std::span<const int> labels) {
  if (pred.size() != labels.size())
    throw LengthMismatchError("kappa_scaled: predictions and labels differ in length");
  if (pred.empty()) throw LengthMismatchError("kappa_scaled: empty input");
  double counts[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < pred.size(); ++i)
    counts[pred[i] ? 1 : 0][labels[i] ? 1 : 0] += 1.0;
  const double n = static_cast<double>(pred.size());
  const double observed = (counts[0][0] + counts[1][1]) / n;
  const double pred_pos = counts[1][0] + counts[1][1];
  const double label_pos = counts[0][1] + counts[1][1];
  const double expected =
      ((n - pred_pos) * (n - label_pos) + pred_pos * label_pos) / (n * n);
  if (expected == 1.0) return 0.5;
  const double kappa = (observed - expected) / (1.0 - expected);
  return (kappa + 1.0) / 2.0;
}

BasicMetrics basic_metrics(std::span<const int> pred, std::span<const int> labels,
                           std::vector<std::string>* warnings) {
  if (pred.size() != labels.size())
    throw LengthMismatchError("basic_metrics: predictions and labels differ in length");
  if (pred.empty()) throw LengthMismatchError("basic_metrics: empty input");
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] && labels[i]) ++tp;
    else if (pred[i] && !labels[i]) ++fp;
    else if (!pred[i] && labels[i]) ++fn;
    else ++tn;
  }
  BasicMetrics m;
  auto warn = [&](const char* what) {
    if (warnings) warnings->push_back(std::string(what) + ": zero denominator, reporting 0");
  };
  if (tp + fp > 0) m.precision = tp / (tp + fp); else warn("precision");
  if (tp + fn > 0) m.recall = tp / (tp + fn); else warn("recall");
  m.accuracy = (tp + tn) / static_cast<double>(pred.size());
  if (m.precision + m.recall > 0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

std::vector<FoldSplit> stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidParamsError("stratified_kfold needs k >= 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i] ? 1 : 0].push_back(i);
  for (const auto& cls : by_class)
    if (cls.size() < static_cast<std::size_t>(k))
      throw TooFewSamplesError("each class needs at least k rows for k-fold");

  Rng rng(derive_seed(seed, hash_tag("kfold")));
  std::vector<FoldSplit> folds(static_cast<std::size_t>(k));
  for (auto& cls : by_class) {
    rng.shuffle(cls);
    for (std::size_t i = 0; i < cls.size(); ++i)
      folds[i % static_cast<std::size_t>(k)].test.push_back(cls[i]);
  }
  for (auto& fold : folds) {
    std::sort(fold.test.begin(), fold.test.end());
    fold.train.reserve(labels.size() - fold.test.size());
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (cursor < fold.test.size() && fold.test[cursor] == i)
        ++cursor;
      else
        fold.train.push_back(i);
    }
  }
  return folds;
}

std::vector<std::size_t> undersample_balanced(std::span<const int> labels, std::uint64_t seed) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i] ? 1 : 0].push_back(i);
  if (by_class[0].empty() || by_class[1].empty())
    throw SingleClassError("undersample_balanced needs both classes");
  const int majority = by_class[1].size() > by_class[0].size() ? 1 : 0;
  const std::size_t target = by_class[1 - majority].size();
  Rng rng(derive_seed(seed, hash_tag("undersample")));
  rng.shuffle(by_class[majority]);
  by_class[majority].resize(target);
  std::vector<std::size_t> keep = std::move(by_class[0]);
  keep.insert(keep.end(), by_class[1].begin(), by_class[1].end());
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace casc
