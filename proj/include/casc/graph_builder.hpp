#pragma once

// Construction of final and snapshot potential propagation graphs from a
// post's interactions and the friendship store.
//
// Edge rules:
//   - an interaction with via-provenance links the user to that friend
//     (no seed edge for it),
//   - a direct interaction links the user to the seed,
//   - every pair of interacting users that are friends gets a "friendship"
//     edge timed at the later of the two users' first timed interactions,
//   - parallel edges collapse keeping the highest type precedence
//     (reshare > comment > like > friendship) and the earliest known time.
//
// Snapshots admit only timed interactions with relative time <= horizon;
// untimed likes appear in final graphs only.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casc/model.hpp"

namespace casc {

PropagationGraph build_final_graph(const PostRecord& post,
                                   std::span<const InteractionRecord> interactions,
                                   const FriendshipStore& friends,
                                   std::vector<std::string>* warnings = nullptr);

PropagationGraph build_snapshot(const PostRecord& post,
                                std::span<const InteractionRecord> interactions,
                                const FriendshipStore& friends, int delta_minutes,
                                std::vector<std::string>* warnings = nullptr);

// Snapshots at delta = step, 2*step, ..., horizon, built incrementally.
std::vector<PropagationGraph> snapshot_series(const PostRecord& post,
                                              std::span<const InteractionRecord> interactions,
                                              const FriendshipStore& friends,
                                              int step_minutes = 30, int horizon_minutes = 2880,
                                              std::vector<std::string>* warnings = nullptr);

// Incremental cascade state. Timed interactions are consumed in time order;
// counts are O(1) to read at any point, which is what the evolution-feature
// pipeline needs. materialize() renders the current state as a graph.
class CascadeCursor {
 public:
  CascadeCursor(const PostRecord& post, std::span<const InteractionRecord> interactions,
                const FriendshipStore& friends, std::vector<std::string>* warnings = nullptr);

  // Processes every timed interaction with relative time <= delta_seconds.
  void advance_to(std::int64_t delta_seconds);

  // Folds in untimed likes (final graphs only; irreversible).
  void add_untimed();

  std::size_t vertex_count() const { return local_names_.size() + 1; }  // + seed
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t friendship_edge_count() const { return friendship_edges_; }

  PropagationGraph materialize(std::optional<int> horizon_minutes) const;

 private:
  struct EdgeState {
    EdgeType type;
    std::optional<std::int64_t> time_s;
  };

  std::uint32_t admit(const std::string& user, std::optional<std::int64_t> time_s);
  void upsert_edge(std::uint32_t a, std::uint32_t b, EdgeType type,
                   std::optional<std::int64_t> time_s);
  void process(const InteractionRecord& rec, std::int64_t rel_time);
  void warn(std::string msg);

  static constexpr std::uint32_t kSeedLocal = 0xfffffffeu;

  const PostRecord* post_;
  const FriendshipStore* friends_;
  std::vector<std::string>* warnings_;

  // interactions sorted by (time, user, kind, via); untimed ones at the tail
  std::vector<const InteractionRecord*> timed_;
  std::vector<const InteractionRecord*> untimed_;
  std::size_t next_event_ = 0;
  std::int64_t clock_s_ = -1;
  bool untimed_applied_ = false;

  // earliest timed interaction per user (relative seconds)
  std::unordered_map<std::string, std::int64_t> first_timed_;

  std::vector<std::string> local_names_;            // admission order
  std::unordered_map<std::string, std::uint32_t> local_index_;
  std::unordered_map<std::uint32_t, std::uint32_t> store_local_;  // store id -> local id
  std::unordered_map<std::uint64_t, EdgeState> edges_;  // key packs local ids
  std::size_t friendship_edges_ = 0;
};

}  // namespace casc
