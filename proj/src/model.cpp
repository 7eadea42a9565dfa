#include "casc/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace casc {

std::string_view to_string(Label l) {
  return l == Label::science ? "science" : "conspiracy";
}

std::string_view to_string(InteractionKind k) {
  switch (k) {
    case InteractionKind::like: return "like";
    case InteractionKind::comment: return "comment";
    default: return "reshare";
  }
}

std::string_view to_string(EdgeType t) {
  switch (t) {
    case EdgeType::friendship: return "friendship";
    case EdgeType::like: return "like";
    case EdgeType::comment: return "comment";
    default: return "reshare";
  }
}

Label label_from_string(std::string_view s) {
  if (s == "science") return Label::science;
  if (s == "conspiracy") return Label::conspiracy;
  throw ParseError("unknown class label: '" + std::string(s) + "'");
}

InteractionKind interaction_kind_from_string(std::string_view s) {
  if (s == "like") return InteractionKind::like;
  if (s == "comment") return InteractionKind::comment;
  if (s == "reshare") return InteractionKind::reshare;
  throw ParseError("unknown interaction kind: '" + std::string(s) + "'");
}

EdgeType edge_type_from_string(std::string_view s) {
  if (s == "friendship") return EdgeType::friendship;
  if (s == "like") return EdgeType::like;
  if (s == "comment") return EdgeType::comment;
  if (s == "reshare") return EdgeType::reshare;
  throw ParseError("unknown edge type: '" + std::string(s) + "'");
}

std::string_view to_string(FeatureSchema s) {
  return s == FeatureSchema::early18 ? "early-18" : "final-28";
}

namespace {

const char* kSeriesNames[3] = {"friendships_ratio", "size", "interactions_ratio"};
const char* kStatNames[6] = {"mean", "lwm", "qwm", "std", "aac", "max"};

std::vector<std::string> make_early18_names() {
  std::vector<std::string> names;
  names.reserve(18);
  for (const char* series : kSeriesNames)
    for (const char* stat : kStatNames)
      names.push_back(std::string(series) + "_" + stat);
  return names;
}

std::vector<std::string> make_final28_names() {
  std::vector<std::string> names = {
      "size",          "friendships_ratio", "interactions_ratio",
      "lifetime_minutes", "time_to_90pct_minutes",
      "avg_degree",    "clustering",        "assortativity",
      "avg_path_length", "diameter",
  };
  for (const auto& n : make_early18_names()) names.push_back(n);
  return names;
}

}  // namespace

const std::vector<std::string>& feature_names(FeatureSchema schema) {
  static const std::vector<std::string> early = make_early18_names();
  static const std::vector<std::string> final28 = make_final28_names();
  return schema == FeatureSchema::early18 ? early : final28;
}

std::size_t feature_count(FeatureSchema schema) {
  return schema == FeatureSchema::early18 ? 18u : 28u;
}

void check_feature_vector(const FeatureVector& fv) {
  if (fv.values.size() != feature_count(fv.schema))
    throw Error("feature vector has " + std::to_string(fv.values.size()) +
                " values, schema " + std::string(to_string(fv.schema)) +
                " requires " + std::to_string(feature_count(fv.schema)));
  for (double v : fv.values)
    if (!std::isfinite(v)) throw Error("feature vector contains a non-finite value");
}

void FriendshipStore::add_edge(std::string_view a, std::string_view b) {
  if (a == b) return;
  std::uint32_t ia = intern(a), ib = intern(b);
  adj_[ia].push_back(ib);
  adj_[ib].push_back(ia);
  finalized_ = false;
}

std::uint32_t FriendshipStore::intern(std::string_view user) {
  auto it = index_.find(std::string(user));
  if (it != index_.end()) return it->second;
  std::uint32_t id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(user);
  index_.emplace(names_.back(), id);
  adj_.emplace_back();
  return id;
}

void FriendshipStore::finalize() {
  edge_count_ = 0;
  for (auto& nbrs : adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    edge_count_ += nbrs.size();
  }
  edge_count_ /= 2;
  finalized_ = true;
}

std::uint32_t FriendshipStore::id_of(std::string_view user) const {
  auto it = index_.find(std::string(user));
  return it == index_.end() ? npos : it->second;
}

bool FriendshipStore::contains(std::string_view user) const { return id_of(user) != npos; }

std::span<const std::uint32_t> FriendshipStore::neighbors(std::uint32_t id) const {
  if (id >= adj_.size()) return {};
  return adj_[id];
}

bool FriendshipStore::are_friends(std::string_view a, std::string_view b) const {
  std::uint32_t ia = id_of(a), ib = id_of(b);
  if (ia == npos || ib == npos || ia == ib) return false;
  const auto& sa = adj_[ia];
  const auto& sb = adj_[ib];
  const auto& shorter = sa.size() <= sb.size() ? sa : sb;
  std::uint32_t target = sa.size() <= sb.size() ? ib : ia;
  if (!finalized_) return std::find(shorter.begin(), shorter.end(), target) != shorter.end();
  return std::binary_search(shorter.begin(), shorter.end(), target);
}

std::vector<std::pair<std::string, std::string>> FriendshipStore::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(edge_count_);
  for (std::uint32_t u = 0; u < adj_.size(); ++u)
    for (std::uint32_t v : adj_[u]) {
      if (names_[u] < names_[v]) out.emplace_back(names_[u], names_[v]);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PropagationGraph::has_vertex(std::string_view name) const {
  return std::binary_search(vertices.begin(), vertices.end(), name);
}

ValidationReport validate_dataset(std::span<const PostRecord> posts,
                                  std::span<const InteractionRecord> interactions,
                                  const FriendshipStore& friends) {
  (void)friends;  // store is symmetric by construction; loader warnings are appended by callers
  ValidationReport report;
  std::unordered_map<std::string_view, const PostRecord*> by_id;
  for (const auto& p : posts) {
    if (!by_id.emplace(p.post_id, &p).second)
      report.violations.push_back("duplicate post_id '" + p.post_id + "'");
    if (p.created_at < 0)
      report.violations.push_back("post '" + p.post_id + "' has negative created_at");
  }
  for (const auto& i : interactions) {
    auto it = by_id.find(i.post_id);
    if (it == by_id.end()) {
      report.violations.push_back("interaction by '" + i.user_id +
                                  "' references unknown post '" + i.post_id + "'");
      continue;
    }
    if (i.kind != InteractionKind::like && !i.timestamp.has_value())
      report.violations.push_back("untimed " + std::string(to_string(i.kind)) + " by '" +
                                  i.user_id + "' on post '" + i.post_id + "'");
    if (i.timestamp && *i.timestamp < it->second->created_at)
      report.violations.push_back("interaction precedes post: '" + i.user_id + "' on '" +
                                  i.post_id + "'");
    if (i.via_user_id && *i.via_user_id == i.user_id)
      report.violations.push_back("self-referential via_user_id for '" + i.user_id +
                                  "' on post '" + i.post_id + "'");
  }
  return report;
}

}  // namespace casc
