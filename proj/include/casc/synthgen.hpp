#pragma once

// Synthetic friendship graphs and labeled cascades matching the ingestion
// grain: timed comments/reshares, untimed likes, optional via-provenance.
// Used by the oracle tests and the end-to-end calibration experiments.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "casc/io.hpp"
#include "casc/model.hpp"

namespace casc {

struct SpreadParams {
  double direct_rate = 12.0;   // expected direct seed interactions per hour at t = 0
  double decay_hours = 6.0;    // exponential decay constant of the direct rate
  double friend_prob = 0.12;   // chance a friend of an interactor interacts within the next hour
  double via_prob = 0.5;       // chance an induced interaction records via provenance
  double like_frac = 0.25;     // fraction of interactions that become untimed likes
  int horizon_minutes = 2880;
  int max_users = 500;         // hard cap on distinct interacting users per cascade

  void validate() const;
};

// Preferential attachment: clique on m+1 vertices, then each new vertex
// attaches m edges biased by degree. Deterministic given seed.
FriendshipStore gen_friendship_graph(int n, int m, std::uint64_t seed);

std::pair<PostRecord, std::vector<InteractionRecord>> gen_cascade(
    const FriendshipStore& friends, const std::string& page_id, const std::string& post_id,
    std::int64_t created_at, Label label, const SpreadParams& params, std::uint64_t seed);

enum class Preset : std::uint8_t { separable = 0, null_dynamics = 1 };

Preset preset_from_string(std::string_view s);
std::string_view to_string(Preset p);

struct GenConfig {
  int n_users = 2000;
  int attach_m = 3;
  SpreadParams science;
  SpreadParams conspiracy;
};

// Per-preset spreading parameters: "separable" contrasts word-of-mouth
// conspiracy spreading with broadcast-style science posts; "null" uses
// identical dynamics for both classes.
GenConfig preset_config(Preset preset);

Dataset gen_dataset(Preset preset, int n_per_class, std::uint64_t seed);
Dataset gen_dataset(const GenConfig& config, int n_per_class, std::uint64_t seed);

// Writes posts.jsonl, interactions.jsonl, friendships.csv; byte-identical
// for identical inputs.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

// INI-style config: [science] / [conspiracy] sections plus top-level
// n_users / attach_m; keys match the SpreadParams field names.
GenConfig read_gen_config(const std::filesystem::path& path, Preset base);
void write_gen_config(const GenConfig& config, const std::filesystem::path& path);

}  // namespace casc
