#pragma once

// File formats: posts.jsonl, interactions.jsonl, friendships.csv, the
// per-post edge-list dump, and the Dataset container tying them together.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "casc/model.hpp"

namespace casc {

// A loaded dataset in canonical order: posts sorted by post_id, interactions
// grouped per post and sorted by (time, user, kind). Untimed interactions
// sort after timed ones.
struct Dataset {
  std::vector<PostRecord> posts;
  std::vector<InteractionRecord> interactions;
  std::vector<std::size_t> offsets;  // posts.size()+1 entries into interactions
  FriendshipStore friends;
  std::vector<std::string> load_warnings;

  std::span<const InteractionRecord> interactions_for(std::size_t post_index) const {
    return {interactions.data() + offsets[post_index],
            offsets[post_index + 1] - offsets[post_index]};
  }

  // Sorts, groups and indexes; call after filling posts/interactions.
  void canonicalize();
};

std::vector<PostRecord> read_posts_jsonl(const std::filesystem::path& path);
std::vector<InteractionRecord> read_interactions_jsonl(const std::filesystem::path& path);
FriendshipStore read_friendships_csv(const std::filesystem::path& path,
                                     std::vector<std::string>* warnings = nullptr);

void write_posts_jsonl(std::span<const PostRecord> posts, const std::filesystem::path& path);
void write_interactions_jsonl(std::span<const InteractionRecord> interactions,
                              const std::filesystem::path& path);
void write_friendships_csv(const FriendshipStore& friends, const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& posts_path,
                     const std::filesystem::path& interactions_path,
                     const std::filesystem::path& friendships_path);

// Edge-list dump: "# <post_id> <seed_id> <n_vertices>" header, then one
// "u,v,type,time_seconds|null" line per edge.
std::string dump_graph(const PropagationGraph& graph);
PropagationGraph parse_graph_dump(const std::string& text);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace casc
