#include "casc/features_static.hpp"

#include <algorithm>
#include <cmath>

namespace casc {

CompactGraph CompactGraph::from(const PropagationGraph& g) {
  CompactGraph c;
  c.n = g.vertices.size();
  c.m = g.edges.size();
  auto index_of = [&](const std::string& name) {
    auto it = std::lower_bound(g.vertices.begin(), g.vertices.end(), name);
    return static_cast<std::uint32_t>(it - g.vertices.begin());
  };
  c.seed = index_of(g.seed_id);
  std::vector<std::uint32_t> degree(c.n, 0);
  for (const auto& e : g.edges) {
    ++degree[index_of(e.u)];
    ++degree[index_of(e.v)];
  }
  c.offsets.assign(c.n + 1, 0);
  for (std::size_t v = 0; v < c.n; ++v) c.offsets[v + 1] = c.offsets[v] + degree[v];
  c.nbrs.resize(2 * c.m);
  std::vector<std::uint32_t> cursor(c.offsets.begin(), c.offsets.end() - 1);
  for (const auto& e : g.edges) {
    std::uint32_t a = index_of(e.u), b = index_of(e.v);
    c.nbrs[cursor[a]++] = b;
    c.nbrs[cursor[b]++] = a;
  }
  for (std::size_t v = 0; v < c.n; ++v)
    std::sort(c.nbrs.begin() + c.offsets[v], c.nbrs.begin() + c.offsets[v + 1]);
  return c;
}

HighLevelFeatures high_level(const PropagationGraph& graph) {
  if (graph.edges.empty())
    throw DegenerateGraphError("post '" + graph.post_id + "': zero-edge graph");
  HighLevelFeatures f;
  f.size = static_cast<double>(graph.edges.size());
  std::size_t friendship = 0;
  std::vector<std::int64_t> times;
  times.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    if (e.type == EdgeType::friendship) ++friendship;
    if (e.time_s) times.push_back(*e.time_s);
  }
  f.friendships_ratio = static_cast<double>(friendship) / f.size;
  f.interactions_ratio = static_cast<double>(graph.vertices.size()) / f.size;
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    f.lifetime_minutes = static_cast<double>(times.back()) / 60.0;
    std::size_t need = static_cast<std::size_t>(
        std::ceil(0.9 * static_cast<double>(times.size())));
    if (need == 0) need = 1;
    f.time_to_90pct_minutes = static_cast<double>(times[need - 1]) / 60.0;
  }
  return f;
}

double avg_degree(const CompactGraph& g) {
  if (g.n == 0) return 0.0;
  return 2.0 * static_cast<double>(g.m) / static_cast<double>(g.n);
}

double global_clustering(const CompactGraph& g) {
  if (g.n < 3) return 0.0;
  double triplets = 0.0;
  for (std::size_t v = 0; v < g.n; ++v) {
    double d = g.degree(static_cast<std::uint32_t>(v));
    triplets += d * (d - 1) / 2.0;
  }
  if (triplets == 0.0) return 0.0;
  // sum of common neighbours over undirected edges = 3 * triangles
  double closed = 0.0;
  for (std::uint32_t u = 0; u < g.n; ++u) {
    auto ub = g.nbrs.begin() + g.offsets[u], ue = g.nbrs.begin() + g.offsets[u + 1];
    for (auto it = ub; it != ue; ++it) {
      std::uint32_t v = *it;
      if (v <= u) continue;
      auto vb = g.nbrs.begin() + g.offsets[v], ve = g.nbrs.begin() + g.offsets[v + 1];
      auto a = ub;
      auto b = vb;
      while (a != ue && b != ve) {
        if (*a < *b)
          ++a;
        else if (*b < *a)
          ++b;
        else {
          ++closed;
          ++a;
          ++b;
        }
      }
    }
  }
  return closed / triplets;
}

double assortativity(const CompactGraph& g) {
  if (g.m < 2) return 0.0;
  // Pearson correlation over the edge list counted in both directions;
  // x/y moments coincide for undirected graphs
  double sx = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::uint32_t u = 0; u < g.n; ++u) {
    double du = g.degree(u);
    for (std::uint32_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
      double dv = g.degree(g.nbrs[i]);
      sx += du;
      sxx += du * du;
      sxy += du * dv;
    }
  }
  const double big_m = 2.0 * static_cast<double>(g.m);
  double denom = big_m * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (big_m * sxy - sx * sx) / denom;
}

namespace {

struct PathStats {
  std::int64_t sum_ordered = 0;
  std::uint32_t max_dist = 0;
  std::size_t component = 0;
  bool disconnected = false;
};

PathStats all_pairs_paths(const CompactGraph& g) {
  PathStats st;
  if (g.n == 0) return st;
  std::vector<std::int32_t> dist(g.n);
  std::vector<std::uint32_t> queue(g.n);
  std::vector<char> in_component(g.n, 0);

  auto bfs = [&](std::uint32_t src, bool mark) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = src;
    while (head < tail) {
      std::uint32_t v = queue[head++];
      if (mark) in_component[v] = 1;
      for (std::uint32_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
        std::uint32_t w = g.nbrs[i];
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
      }
    }
    return tail;
  };

  st.component = bfs(g.seed, true);
  st.disconnected = st.component < g.n;
  for (std::uint32_t src = 0; src < g.n; ++src) {
    if (!in_component[src]) continue;
    bfs(src, false);
    for (std::uint32_t v = 0; v < g.n; ++v) {
      if (dist[v] > 0) {
        st.sum_ordered += dist[v];
        if (static_cast<std::uint32_t>(dist[v]) > st.max_dist)
          st.max_dist = static_cast<std::uint32_t>(dist[v]);
      }
    }
  }
  return st;
}

}  // namespace

double avg_path_length(const CompactGraph& g, bool* disconnected) {
  PathStats st = all_pairs_paths(g);
  if (disconnected) *disconnected = st.disconnected;
  if (st.component < 2) return 0.0;
  double pairs = static_cast<double>(st.component) * (static_cast<double>(st.component) - 1.0);
  return static_cast<double>(st.sum_ordered) / pairs;
}

std::uint32_t diameter(const CompactGraph& g, bool* disconnected) {
  PathStats st = all_pairs_paths(g);
  if (disconnected) *disconnected = st.disconnected;
  return st.max_dist;
}

double avg_degree(const PropagationGraph& graph) {
  if (graph.vertices.empty()) return 0.0;
  return 2.0 * static_cast<double>(graph.edges.size()) /
         static_cast<double>(graph.vertices.size());
}

double global_clustering(const PropagationGraph& graph) {
  return global_clustering(CompactGraph::from(graph));
}

double assortativity(const PropagationGraph& graph) {
  return assortativity(CompactGraph::from(graph));
}

double avg_path_length(const PropagationGraph& graph, bool* disconnected) {
  return avg_path_length(CompactGraph::from(graph), disconnected);
}

std::uint32_t diameter(const PropagationGraph& graph, bool* disconnected) {
  return diameter(CompactGraph::from(graph), disconnected);
}

TopologicalFeatures topological(const PropagationGraph& graph, bool* disconnected) {
  CompactGraph g = CompactGraph::from(graph);
  TopologicalFeatures f;
  f.avg_degree = avg_degree(g);
  f.clustering = global_clustering(g);
  f.assortativity = assortativity(g);
  PathStats st = all_pairs_paths(g);
  if (disconnected) *disconnected = st.disconnected;
  if (st.component >= 2) {
    double pairs = static_cast<double>(st.component) * (static_cast<double>(st.component) - 1.0);
    f.avg_path_length = static_cast<double>(st.sum_ordered) / pairs;
  }
  f.diameter = static_cast<double>(st.max_dist);
  return f;
}

}  // namespace casc
