#pragma once

// High-level and topological features of a propagation graph.
// Degenerate inputs impute 0 so downstream feature vectors stay finite:
// zero-variance assortativity, clustering on fewer than 3 vertices, and
// path statistics on single-vertex graphs all return 0.

#include <cstdint>
#include <span>
#include <vector>

#include "casc/model.hpp"

namespace casc {

struct HighLevelFeatures {
  double size = 0;                    // |E|
  double friendships_ratio = 0;       // fraction of edges typed "friendship"
  double interactions_ratio = 0;      // |V| / |E|
  double lifetime_minutes = 0;        // latest timed edge
  double time_to_90pct_minutes = 0;   // earliest time covering >= 90% of timed edges
};

struct TopologicalFeatures {
  double avg_degree = 0;
  double clustering = 0;
  double assortativity = 0;
  double avg_path_length = 0;
  double diameter = 0;
};

// Dense CSR view of a PropagationGraph; built once, shared by the
// topological computations.
struct CompactGraph {
  std::size_t n = 0;
  std::size_t m = 0;  // undirected edge count
  std::vector<std::uint32_t> offsets;  // n+1
  std::vector<std::uint32_t> nbrs;     // 2m, sorted within each row
  std::uint32_t seed = 0;

  static CompactGraph from(const PropagationGraph& g);
  std::uint32_t degree(std::uint32_t v) const { return offsets[v + 1] - offsets[v]; }
};

// Throws DegenerateGraphError on a zero-edge graph; callers impute zeros.
HighLevelFeatures high_level(const PropagationGraph& graph);

double avg_degree(const PropagationGraph& graph);
double global_clustering(const PropagationGraph& graph);
double assortativity(const PropagationGraph& graph);
// Path statistics run over the seed's component when the graph is
// disconnected; *disconnected is set accordingly when provided.
double avg_path_length(const PropagationGraph& graph, bool* disconnected = nullptr);
std::uint32_t diameter(const PropagationGraph& graph, bool* disconnected = nullptr);

double avg_degree(const CompactGraph& g);
double global_clustering(const CompactGraph& g);
double assortativity(const CompactGraph& g);
double avg_path_length(const CompactGraph& g, bool* disconnected = nullptr);
std::uint32_t diameter(const CompactGraph& g, bool* disconnected = nullptr);

TopologicalFeatures topological(const PropagationGraph& graph, bool* disconnected = nullptr);

}  // namespace casc
