#pragma once

// Time series of friendships ratio, size and interactions ratio over the
// snapshot series, plus the six summary statistics that make up the
// 18-dimensional early-stage feature vector.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "casc/model.hpp"

namespace casc {

enum class SeriesKind : std::uint8_t { friendships_ratio = 0, size = 1, interactions_ratio = 2 };

struct EvolutionSeries {
  std::string post_id;
  SeriesKind kind = SeriesKind::friendships_ratio;
  std::vector<double> values;  // sampled at 30, 60, ..., 30*n minutes
};

struct SeriesStats {
  double mean = 0;
  double linear_weighted_mean = 0;
  double quadratic_weighted_mean = 0;
  double std_dev = 0;
  double avg_abs_change = 0;  // sum of n-1 jumps divided by n, as defined
  double maximum = 0;
};

// Indexing starts at 1: the weighted-mean normalizers are 2/(n(n+1)) and
// 6/(n(n+1)(2n+1)). Standard deviation is the population form.
SeriesStats series_stats(std::span<const double> values);

std::array<EvolutionSeries, 3> build_series(const PostRecord& post,
                                            std::span<const InteractionRecord> interactions,
                                            const FriendshipStore& friends, int n_steps,
                                            int step_minutes = 30);

// 18 entries: friendships-ratio stats, then size stats, then
// interactions-ratio stats, each as (mean, lwm, qwm, std, aac, max).
FeatureVector early_features(const PostRecord& post,
                             std::span<const InteractionRecord> interactions,
                             const FriendshipStore& friends, int delta_minutes,
                             int step_minutes = 30);

// Stats triplet -> flat 18-value layout shared by every early-feature path.
FeatureVector early_vector_from_stats(const SeriesStats& friendships, const SeriesStats& size,
                                      const SeriesStats& interactions);

}  // namespace casc
