#include "casc/pipeline.hpp"

#include <fstream>

#include "casc/features_evolution.hpp"
#include "casc/features_static.hpp"
#include "casc/graph_builder.hpp"
#include "casc/parallel.hpp"

namespace casc {

FeatureTable final_feature_table(const Dataset& dataset, int step_minutes, int horizon_minutes,
                                 unsigned workers) {
  const std::size_t n = dataset.posts.size();
  const int n_steps = horizon_minutes / step_minutes;
  FeatureTable table;
  table.schema = FeatureSchema::final28;
  table.post_ids.resize(n);
  table.labels.resize(n);
  table.x = Matrix(n, feature_count(FeatureSchema::final28));
  parallel_for(n, workers, [&](std::size_t i) {
    const PostRecord& post = dataset.posts[i];
    auto interactions = dataset.interactions_for(i);
    table.post_ids[i] = post.post_id;
    table.labels[i] = post.label == Label::conspiracy ? 1 : 0;
    double* row = table.x.row(i);

    PropagationGraph graph = build_final_graph(post, interactions, dataset.friends);
    if (!graph.edges.empty()) {
      HighLevelFeatures hl = high_level(graph);
      row[0] = hl.size;
      row[1] = hl.friendships_ratio;
      row[2] = hl.interactions_ratio;
      row[3] = hl.lifetime_minutes;
      row[4] = hl.time_to_90pct_minutes;
    }  // zero-edge graphs impute zeros
    TopologicalFeatures topo = topological(graph);
    row[5] = topo.avg_degree;
    row[6] = topo.clustering;
    row[7] = topo.assortativity;
    row[8] = topo.avg_path_length;
    row[9] = topo.diameter;

    auto series = build_series(post, interactions, dataset.friends, n_steps, step_minutes);
    FeatureVector ev = early_vector_from_stats(series_stats(series[0].values),
                                               series_stats(series[1].values),
                                               series_stats(series[2].values));
    std::copy(ev.values.begin(), ev.values.end(), row + 10);
  });
  return table;
}

SeriesCube build_series_cube(const Dataset& dataset, int step_minutes, int horizon_minutes,
                             unsigned workers) {
  if (step_minutes <= 0 || horizon_minutes <= 0 || horizon_minutes % step_minutes != 0)
    throw InvalidStepError("invalid step/horizon: " + std::to_string(step_minutes) + "/" +
                           std::to_string(horizon_minutes));
  const std::size_t n = dataset.posts.size();
  SeriesCube cube;
  cube.step_minutes = step_minutes;
  cube.n_steps = horizon_minutes / step_minutes;
  cube.post_ids.resize(n);
  cube.labels.resize(n);
  cube.friendships_ratio = Matrix(n, static_cast<std::size_t>(cube.n_steps));
  cube.size = Matrix(n, static_cast<std::size_t>(cube.n_steps));
  cube.interactions_ratio = Matrix(n, static_cast<std::size_t>(cube.n_steps));
  parallel_for(n, workers, [&](std::size_t i) {
    const PostRecord& post = dataset.posts[i];
    cube.post_ids[i] = post.post_id;
    cube.labels[i] = post.label == Label::conspiracy ? 1 : 0;
    auto series = build_series(post, dataset.interactions_for(i), dataset.friends,
                               cube.n_steps, step_minutes);
    std::copy(series[0].values.begin(), series[0].values.end(), cube.friendships_ratio.row(i));
    std::copy(series[1].values.begin(), series[1].values.end(), cube.size.row(i));
    std::copy(series[2].values.begin(), series[2].values.end(), cube.interactions_ratio.row(i));
  });
  return cube;
}

FeatureTable early_feature_table(const SeriesCube& cube, int k_steps) {
  if (k_steps < 1 || k_steps > cube.n_steps)
    throw InvalidStepError("k_steps out of range: " + std::to_string(k_steps));
  const std::size_t n = cube.post_ids.size();
  const std::size_t k = static_cast<std::size_t>(k_steps);
  FeatureTable table;
  table.schema = FeatureSchema::early18;
  table.post_ids = cube.post_ids;
  table.labels = cube.labels;
  table.x = Matrix(n, 18);
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector ev = early_vector_from_stats(
        series_stats({cube.friendships_ratio.row(i), k}),
        series_stats({cube.size.row(i), k}),
        series_stats({cube.interactions_ratio.row(i), k}));
    std::copy(ev.values.begin(), ev.values.end(), table.x.row(i));
  }
  return table;
}

namespace {

void write_table(const FeatureTable& table, const std::filesystem::path& path,
                 const std::string& config_hash, const int* delta_minutes) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "post_id,label";
  if (delta_minutes) out << ",delta_minutes";
  for (const auto& name : feature_names(table.schema)) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < table.post_ids.size(); ++i) {
    out << table.post_ids[i] << ','
        << to_string(table.labels[i] ? Label::conspiracy : Label::science);
    if (delta_minutes) out << ',' << *delta_minutes;
    const double* row = table.x.row(i);
    for (std::size_t j = 0; j < table.x.cols; ++j) out << ',' << format_double(row[j]);
    out << '\n';
  }
}

}  // namespace

void write_features_csv(const FeatureTable& table, const std::filesystem::path& path,
                        const std::string& config_hash) {
  write_table(table, path, config_hash, nullptr);
}

void write_early_features_csv(const FeatureTable& table, int delta_minutes,
                              const std::filesystem::path& path,
                              const std::string& config_hash) {
  write_table(table, path, config_hash, &delta_minutes);
}

}  // namespace casc
