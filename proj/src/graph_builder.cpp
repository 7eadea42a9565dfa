#include "casc/graph_builder.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <tuple>

namespace casc {

namespace {

std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

CascadeCursor::CascadeCursor(const PostRecord& post,
                             std::span<const InteractionRecord> interactions,
                             const FriendshipStore& friends,
                             std::vector<std::string>* warnings)
    : post_(&post), friends_(&friends), warnings_(warnings) {
  timed_.reserve(interactions.size());
  for (const auto& rec : interactions) {
    if (rec.post_id != post.post_id)
      throw UnknownPostError("interaction for post '" + rec.post_id +
                             "' passed to builder for post '" + post.post_id + "'");
    if (rec.user_id == post.page_id) {
      warn("interaction by seed page '" + rec.user_id + "' ignored");
      continue;
    }
    if (rec.timestamp) {
      std::int64_t rel = *rec.timestamp - post.created_at;
      if (rel < 0) {
        warn("interaction by '" + rec.user_id + "' precedes post creation; dropped");
        continue;
      }
      timed_.push_back(&rec);
      auto [it, inserted] = first_timed_.try_emplace(rec.user_id, rel);
      if (!inserted && rel < it->second) it->second = rel;
    } else {
      untimed_.push_back(&rec);
    }
  }
  auto key = [&](const InteractionRecord* r) {
    return std::make_tuple(r->timestamp ? *r->timestamp - post_->created_at : INT64_MAX,
                           std::string_view(r->user_id), static_cast<int>(r->kind),
                           r->via_user_id ? std::string_view(*r->via_user_id)
                                          : std::string_view());
  };
  auto by_key = [&](const InteractionRecord* a, const InteractionRecord* b) {
    return key(a) < key(b);
  };
  std::sort(timed_.begin(), timed_.end(), by_key);
  std::sort(untimed_.begin(), untimed_.end(), by_key);
}

void CascadeCursor::warn(std::string msg) {
  if (warnings_) warnings_->push_back(std::move(msg));
}

std::uint32_t CascadeCursor::admit(const std::string& user, std::optional<std::int64_t> time_s) {
  auto it = local_index_.find(user);
  if (it != local_index_.end()) return it->second;
  std::uint32_t local = static_cast<std::uint32_t>(local_names_.size());
  local_names_.push_back(user);
  local_index_.emplace(user, local);

  // friendship edges to already-admitted friends, timed at the later first
  // interaction (this admission), absent when either endpoint is untimed
  std::uint32_t sid = friends_->id_of(user);
  if (sid != FriendshipStore::npos) {
    for (std::uint32_t nbr : friends_->neighbors(sid)) {
      auto adm = store_local_.find(nbr);
      if (adm == store_local_.end()) continue;
      std::optional<std::int64_t> edge_time = time_s;
      auto other_first = first_timed_.find(local_names_[adm->second]);
      if (other_first == first_timed_.end()) edge_time.reset();
      upsert_edge(local, adm->second, EdgeType::friendship, edge_time);
    }
    store_local_.emplace(sid, local);
  }
  return local;
}

void CascadeCursor::upsert_edge(std::uint32_t a, std::uint32_t b, EdgeType type,
                                std::optional<std::int64_t> time_s) {
  if (a == b) return;
  auto [it, inserted] = edges_.try_emplace(pack_pair(a, b), EdgeState{type, time_s});
  if (inserted) {
    if (type == EdgeType::friendship) ++friendship_edges_;
    return;
  }
  EdgeState& st = it->second;
  if (type > st.type) {
    if (st.type == EdgeType::friendship) --friendship_edges_;
    st.type = type;
  }
  if (time_s && (!st.time_s || *time_s < *st.time_s)) st.time_s = time_s;
}

void CascadeCursor::process(const InteractionRecord& rec, std::int64_t rel_time) {
  std::uint32_t u = admit(rec.user_id, rel_time);
  EdgeType etype = static_cast<EdgeType>(static_cast<int>(rec.kind) + 1);
  if (rec.via_user_id && *rec.via_user_id != rec.user_id) {
    auto wt = first_timed_.find(*rec.via_user_id);
    if (wt != first_timed_.end() && wt->second <= rel_time) {
      std::uint32_t w = admit(*rec.via_user_id, wt->second);
      upsert_edge(u, w, etype, rel_time);
      return;
    }
    warn("via target '" + *rec.via_user_id + "' of '" + rec.user_id +
         "' not active yet; attached to seed");
  } else if (rec.via_user_id) {
    warn("self-referential via for '" + rec.user_id + "'; treated as direct");
  }
  upsert_edge(u, kSeedLocal, etype, rel_time);
}

void CascadeCursor::advance_to(std::int64_t delta_seconds) {
  assert(delta_seconds >= clock_s_);
  while (next_event_ < timed_.size()) {
    const InteractionRecord& rec = *timed_[next_event_];
    std::int64_t rel = *rec.timestamp - post_->created_at;
    if (rel > delta_seconds) break;
    process(rec, rel);
    ++next_event_;
  }
  clock_s_ = delta_seconds;
}

void CascadeCursor::add_untimed() {
  assert(!untimed_applied_);
  untimed_applied_ = true;
  // admit every untimed-only user first so via targets resolve regardless of order
  for (const InteractionRecord* rec : untimed_)
    admit(rec->user_id, std::nullopt);
  for (const InteractionRecord* rec : untimed_) {
    std::uint32_t u = local_index_.at(rec->user_id);
    EdgeType etype = static_cast<EdgeType>(static_cast<int>(rec->kind) + 1);
    if (rec->via_user_id && *rec->via_user_id != rec->user_id) {
      auto it = local_index_.find(*rec->via_user_id);
      if (it != local_index_.end()) {
        upsert_edge(u, it->second, etype, std::nullopt);
        continue;
      }
      warn("via target '" + *rec->via_user_id + "' of '" + rec->user_id +
           "' never interacted; attached to seed");
    } else if (rec->via_user_id) {
      warn("self-referential via for '" + rec->user_id + "'; treated as direct");
    }
    upsert_edge(u, kSeedLocal, etype, std::nullopt);
  }
}

PropagationGraph CascadeCursor::materialize(std::optional<int> horizon_minutes) const {
  PropagationGraph g;
  g.post_id = post_->post_id;
  g.seed_id = post_->page_id;
  g.horizon_minutes = horizon_minutes;
  g.vertices.reserve(local_names_.size() + 1);
  g.vertices.push_back(g.seed_id);
  g.vertices.insert(g.vertices.end(), local_names_.begin(), local_names_.end());
  std::sort(g.vertices.begin(), g.vertices.end());
  g.edges.reserve(edges_.size());
  auto name_of = [&](std::uint32_t local) -> const std::string& {
    return local == kSeedLocal ? g.seed_id : local_names_[local];
  };
  for (const auto& [key, st] : edges_) {
    PropEdge e;
    e.u = name_of(static_cast<std::uint32_t>(key >> 32));
    e.v = name_of(static_cast<std::uint32_t>(key & 0xffffffffu));
    if (e.u > e.v) std::swap(e.u, e.v);
    e.type = st.type;
    e.time_s = st.time_s;
    g.edges.push_back(std::move(e));
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const PropEdge& a, const PropEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return g;
}

PropagationGraph build_final_graph(const PostRecord& post,
                                   std::span<const InteractionRecord> interactions,
                                   const FriendshipStore& friends,
                                   std::vector<std::string>* warnings) {
  CascadeCursor cursor(post, interactions, friends, warnings);
  cursor.advance_to(std::numeric_limits<std::int64_t>::max());
  cursor.add_untimed();
  return cursor.materialize(std::nullopt);
}

PropagationGraph build_snapshot(const PostRecord& post,
                                std::span<const InteractionRecord> interactions,
                                const FriendshipStore& friends, int delta_minutes,
                                std::vector<std::string>* warnings) {
  if (delta_minutes <= 0)
    throw InvalidStepError("snapshot horizon must be positive, got " +
                           std::to_string(delta_minutes));
  CascadeCursor cursor(post, interactions, friends, warnings);
  cursor.advance_to(static_cast<std::int64_t>(delta_minutes) * 60);
  return cursor.materialize(delta_minutes);
}

std::vector<PropagationGraph> snapshot_series(const PostRecord& post,
                                              std::span<const InteractionRecord> interactions,
                                              const FriendshipStore& friends, int step_minutes,
                                              int horizon_minutes,
                                              std::vector<std::string>* warnings) {
  if (step_minutes <= 0 || horizon_minutes <= 0 || horizon_minutes % step_minutes != 0)
    throw InvalidStepError("invalid step/horizon: " + std::to_string(step_minutes) + "/" +
                           std::to_string(horizon_minutes));
  CascadeCursor cursor(post, interactions, friends, warnings);
  std::vector<PropagationGraph> out;
  const int n_steps = horizon_minutes / step_minutes;
  out.reserve(n_steps);
  for (int k = 1; k <= n_steps; ++k) {
    int delta = k * step_minutes;
    cursor.advance_to(static_cast<std::int64_t>(delta) * 60);
    out.push_back(cursor.materialize(delta));
  }
  return out;
}

}  // namespace casc
