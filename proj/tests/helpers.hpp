#pragma once

// Shared test fixtures: hand-built propagation graphs, random connected
// graphs, and randomized synthetic cascades.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "casc/graph_builder.hpp"
#include "casc/model.hpp"
#include "casc/rng.hpp"
#include "casc/synthgen.hpp"

namespace testutil {

struct EdgeSpec {
  std::string u, v;
  casc::EdgeType type = casc::EdgeType::comment;
  std::optional<double> minutes;  // relative time
};

inline casc::PropagationGraph make_graph(const std::string& post_id, const std::string& seed_id,
                                         const std::vector<std::string>& extra_vertices,
                                         const std::vector<EdgeSpec>& edges) {
  casc::PropagationGraph g;
  g.post_id = post_id;
  g.seed_id = seed_id;
  g.vertices.push_back(seed_id);
  for (const auto& v : extra_vertices) g.vertices.push_back(v);
  for (const auto& e : edges) {
    casc::PropEdge pe;
    pe.u = e.u;
    pe.v = e.v;
    if (pe.u > pe.v) std::swap(pe.u, pe.v);
    pe.type = e.type;
    if (e.minutes) pe.time_s = static_cast<std::int64_t>(*e.minutes * 60.0);
    g.edges.push_back(std::move(pe));
    if (std::find(g.vertices.begin(), g.vertices.end(), e.u) == g.vertices.end())
      g.vertices.push_back(e.u);
    if (std::find(g.vertices.begin(), g.vertices.end(), e.v) == g.vertices.end())
      g.vertices.push_back(e.v);
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return g;
}

inline std::string vertex_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "n%04d", i);
  return std::string(buf);
}

// random tree plus extra edges: always connected, vertex 0 is the seed
inline casc::PropagationGraph random_connected_graph(casc::Rng& rng, int n, double extra_frac) {
  std::vector<EdgeSpec> edges;
  for (int v = 1; v < n; ++v) {
    int parent = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
    edges.push_back({vertex_name(parent), vertex_name(v), casc::EdgeType::comment,
                     static_cast<double>(v)});
  }
  const int extra = static_cast<int>(extra_frac * n);
  for (int i = 0; i < extra && n >= 2; ++i) {
    int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    edges.push_back({vertex_name(a), vertex_name(b), casc::EdgeType::friendship,
                     static_cast<double>(n + i)});
  }
  // duplicate pairs collapse in make_graph's canonical form below
  auto g = make_graph("p", vertex_name(0), {}, edges);
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                            [](const auto& a, const auto& b) {
                              return a.u == b.u && a.v == b.v;
                            }),
                g.edges.end());
  return g;
}

struct CascadeFixture {
  casc::FriendshipStore friends;
  casc::PostRecord post;
  std::vector<casc::InteractionRecord> interactions;
};

// randomized spreading parameters around the null preset
inline CascadeFixture random_cascade(std::uint64_t seed) {
  casc::Rng rng(seed);
  CascadeFixture fx;
  fx.friends = casc::gen_friendship_graph(300, 3, casc::derive_seed(seed, 1));
  casc::SpreadParams params;
  params.direct_rate = 2.0 + rng.uniform() * 30.0;
  params.decay_hours = 1.0 + rng.uniform() * 10.0;
  params.friend_prob = rng.uniform() * 0.3;
  params.via_prob = rng.uniform();
  params.like_frac = rng.uniform() * 0.6;
  params.max_users = 200;
  auto [post, interactions] =
      casc::gen_cascade(fx.friends, "page", "p", 1600000000, casc::Label::science, params,
                        casc::derive_seed(seed, 2));
  fx.post = std::move(post);
  fx.interactions = std::move(interactions);
  return fx;
}

}  // namespace testutil
