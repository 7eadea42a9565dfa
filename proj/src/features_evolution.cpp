#include "casc/features_evolution.hpp"

#include <algorithm>
#include <cmath>

#include "casc/graph_builder.hpp"

namespace casc {

SeriesStats series_stats(std::span<const double> values) {
  if (values.empty()) throw EmptySeriesError("series_stats on empty series");
  const double n = static_cast<double>(values.size());
  SeriesStats s;
  double sum = 0, weighted = 0, sq_weighted = 0;
  s.maximum = values[0];
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const double idx = static_cast<double>(i + 1);
    sum += v;
    weighted += idx * v;
    sq_weighted += idx * idx * v;
    if (v > s.maximum) s.maximum = v;
  }
  s.mean = sum / n;
  s.linear_weighted_mean = 2.0 * weighted / (n * (n + 1.0));
  s.quadratic_weighted_mean = 6.0 * sq_weighted / (n * (n + 1.0) * (2.0 * n + 1.0));
  double sq_dev = 0;
  for (double v : values) sq_dev += (v - s.mean) * (v - s.mean);
  s.std_dev = std::sqrt(sq_dev / n);
  double change = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    change += std::abs(values[i] - values[i + 1]);
  s.avg_abs_change = change / n;  // n-1 terms, divisor n
  return s;
}

std::array<EvolutionSeries, 3> build_series(const PostRecord& post,
                                            std::span<const InteractionRecord> interactions,
                                            const FriendshipStore& friends, int n_steps,
                                            int step_minutes) {
  if (n_steps < 1 || n_steps > 96)
    throw InvalidStepError("n_steps must be in [1, 96], got " + std::to_string(n_steps));
  if (step_minutes <= 0)
    throw InvalidStepError("step_minutes must be positive");
  std::array<EvolutionSeries, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].post_id = post.post_id;
    out[i].kind = static_cast<SeriesKind>(i);
    out[i].values.resize(n_steps);
  }
  CascadeCursor cursor(post, interactions, friends);
  for (int k = 0; k < n_steps; ++k) {
    cursor.advance_to(static_cast<std::int64_t>(k + 1) * step_minutes * 60);
    const double edges = static_cast<double>(cursor.edge_count());
    if (edges == 0.0) continue;  // degenerate snapshot -> all three impute 0
    out[0].values[k] = static_cast<double>(cursor.friendship_edge_count()) / edges;
    out[1].values[k] = edges;
    out[2].values[k] = static_cast<double>(cursor.vertex_count()) / edges;
  }
  return out;
}

FeatureVector early_vector_from_stats(const SeriesStats& friendships, const SeriesStats& size,
                                      const SeriesStats& interactions) {
  FeatureVector fv;
  fv.schema = FeatureSchema::early18;
  fv.values.reserve(18);
  for (const SeriesStats* s : {&friendships, &size, &interactions}) {
    fv.values.push_back(s->mean);
    fv.values.push_back(s->linear_weighted_mean);
    fv.values.push_back(s->quadratic_weighted_mean);
    fv.values.push_back(s->std_dev);
    fv.values.push_back(s->avg_abs_change);
    fv.values.push_back(s->maximum);
  }
  check_feature_vector(fv);
  return fv;
}

FeatureVector early_features(const PostRecord& post,
                             std::span<const InteractionRecord> interactions,
                             const FriendshipStore& friends, int delta_minutes,
                             int step_minutes) {
  if (step_minutes <= 0 || delta_minutes <= 0 || delta_minutes % step_minutes != 0)
    throw InvalidStepError("delta must be a positive multiple of the step");
  auto series = build_series(post, interactions, friends, delta_minutes / step_minutes,
                             step_minutes);
  return early_vector_from_stats(series_stats(series[0].values), series_stats(series[1].values),
                                 series_stats(series[2].values));
}

}  // namespace casc
