#pragma once

// Brute-force oracles, independent of the library implementations they
// check: adjacency-matrix graph statistics, Floyd-Warshall path lengths and
// pairwise AUC counting. Test-only code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "casc/model.hpp"

namespace oracle {

// dense adjacency matrix keyed by position in graph.vertices
struct DenseGraph {
  std::size_t n = 0;
  std::vector<char> adj;  // n*n
  std::size_t seed = 0;

  bool at(std::size_t i, std::size_t j) const { return adj[i * n + j] != 0; }

  static DenseGraph from(const casc::PropagationGraph& g) {
    DenseGraph d;
    d.n = g.vertices.size();
    d.adj.assign(d.n * d.n, 0);
    auto index_of = [&](const std::string& name) {
      return static_cast<std::size_t>(
          std::lower_bound(g.vertices.begin(), g.vertices.end(), name) - g.vertices.begin());
    };
    d.seed = index_of(g.seed_id);
    for (const auto& e : g.edges) {
      std::size_t a = index_of(e.u), b = index_of(e.v);
      d.adj[a * d.n + b] = 1;
      d.adj[b * d.n + a] = 1;
    }
    return d;
  }

  std::size_t degree(std::size_t v) const {
    std::size_t deg = 0;
    for (std::size_t w = 0; w < n; ++w) deg += at(v, w);
    return deg;
  }
};

inline double clustering(const DenseGraph& g) {
  if (g.n < 3) return 0.0;
  // enumerate centre vertices and unordered neighbour pairs
  double triplets = 0.0, closed = 0.0;
  for (std::size_t v = 0; v < g.n; ++v)
    for (std::size_t a = 0; a < g.n; ++a) {
      if (!g.at(v, a)) continue;
      for (std::size_t b = a + 1; b < g.n; ++b) {
        if (!g.at(v, b)) continue;
        triplets += 1.0;
        if (g.at(a, b)) closed += 1.0;
      }
    }
  return triplets == 0.0 ? 0.0 : closed / triplets;
}

// two-pass Pearson over the directed edge endpoint-degree pairs
inline double assortativity(const DenseGraph& g) {
  std::vector<double> xs, ys;
  for (std::size_t u = 0; u < g.n; ++u)
    for (std::size_t v = 0; v < g.n; ++v) {
      if (!g.at(u, v)) continue;
      xs.push_back(static_cast<double>(g.degree(u)));
      ys.push_back(static_cast<double>(g.degree(v)));
    }
  const double m = static_cast<double>(xs.size());
  if (m < 4.0) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    vx += (xs[i] - mx) * (xs[i] - mx);
    vy += (ys[i] - my) * (ys[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

struct PathOracle {
  double avg_path_length = 0.0;
  std::uint32_t diameter = 0;
};

// Floyd-Warshall over the seed's component
inline PathOracle paths(const DenseGraph& g) {
  const std::size_t n = g.n;
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<int> dist(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.at(i, j)) dist[i * n + j] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const int dik = dist[i * n + k];
      if (dik >= kInf) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (dik + dist[k * n + j] < dist[i * n + j]) dist[i * n + j] = dik + dist[k * n + j];
    }
  PathOracle out;
  std::int64_t total = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[g.seed * n + i] >= kInf) continue;  // outside the seed component
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[g.seed * n + j] >= kInf) continue;
      const int d = dist[i * n + j];
      total += d;
      pairs += 1;
      if (d > static_cast<int>(out.diameter)) out.diameter = static_cast<std::uint32_t>(d);
    }
  }
  if (pairs > 0) out.avg_path_length = static_cast<double>(total) / static_cast<double>(pairs);
  return out;
}

inline bool seed_reaches_all(const DenseGraph& g) {
  std::vector<char> seen(g.n, 0);
  std::vector<std::size_t> stack{g.seed};
  seen[g.seed] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < g.n; ++w)
      if (g.at(v, w) && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

// O(P*N) pairwise AUC with explicit tie credit
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0, ties = 0.0;
  std::size_t p = 0, n = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    ++p;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) ties += 1.0;
    }
  }
  for (int y : labels) n += (y == 0);
  return (wins + 0.5 * ties) / (static_cast<double>(p) * static_cast<double>(n));
}

}  // namespace oracle
