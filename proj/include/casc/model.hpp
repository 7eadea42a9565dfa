#pragma once

// Domain types for posts, interactions, friendships and propagation graphs.
// Everything here is immutable after construction and safe to share across
// parallel workers.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace casc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct UnknownPostError : Error { using Error::Error; };
struct InvalidStepError : Error { using Error::Error; };
struct DegenerateGraphError : Error { using Error::Error; };
struct EmptySeriesError : Error { using Error::Error; };
struct SchemaMismatchError : Error { using Error::Error; };
struct SingleClassError : Error { using Error::Error; };
struct LengthMismatchError : Error { using Error::Error; };
struct TooFewSamplesError : Error { using Error::Error; };
struct InvalidParamsError : Error { using Error::Error; };

enum class Label : std::uint8_t { science = 0, conspiracy = 1 };

enum class InteractionKind : std::uint8_t { like = 0, comment = 1, reshare = 2 };

// Order doubles as the collapse precedence for parallel edges (ascending).
enum class EdgeType : std::uint8_t { friendship = 0, like = 1, comment = 2, reshare = 3 };

std::string_view to_string(Label l);
std::string_view to_string(InteractionKind k);
std::string_view to_string(EdgeType t);
Label label_from_string(std::string_view s);
InteractionKind interaction_kind_from_string(std::string_view s);
EdgeType edge_type_from_string(std::string_view s);

struct PostRecord {
  std::string post_id;
  std::string page_id;
  Label label = Label::science;
  std::int64_t created_at = 0;  // absolute seconds
};

struct InteractionRecord {
  std::string post_id;
  std::string user_id;
  InteractionKind kind = InteractionKind::like;
  std::optional<std::int64_t> timestamp;  // absolute seconds; likes may be untimed
  std::optional<std::string> via_user_id; // set when the interaction happened on a friend's interaction
};

// Undirected, deduplicated user-user adjacency. Node ids are interned so
// neighbour scans and pair queries work on dense integer ids.
class FriendshipStore {
 public:
  // Inserts the undirected pair {a, b}; self-edges and duplicates are dropped.
  void add_edge(std::string_view a, std::string_view b);

  // Sorts adjacency lists; must be called once after the last add_edge.
  void finalize();

  bool are_friends(std::string_view a, std::string_view b) const;
  bool contains(std::string_view user) const;

  // Dense id of a user, or npos when the user has no recorded friendships.
  static constexpr std::uint32_t npos = 0xffffffffu;
  std::uint32_t id_of(std::string_view user) const;
  const std::string& name_of(std::uint32_t id) const { return names_[id]; }
  std::span<const std::uint32_t> neighbors(std::uint32_t id) const;

  std::size_t user_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  // Undirected edges as (id, id) pairs with first < second, sorted.
  std::vector<std::pair<std::string, std::string>> edges() const;

 private:
  std::uint32_t intern(std::string_view user);

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::size_t edge_count_ = 0;
  bool finalized_ = false;
};

struct PropEdge {
  std::string u, v;                      // endpoints, u < v lexicographically
  std::optional<std::int64_t> time_s;    // seconds since post creation; absent for untimed likes
  EdgeType type = EdgeType::friendship;

  bool operator==(const PropEdge&) const = default;
};

// Per-post undirected potential propagation graph; horizon absent means the
// final graph, present means the snapshot at that many minutes.
struct PropagationGraph {
  std::string post_id;
  std::string seed_id;
  std::vector<std::string> vertices;     // sorted, includes seed_id
  std::vector<PropEdge> edges;           // sorted by (u, v); simple graph
  std::optional<int> horizon_minutes;

  bool operator==(const PropagationGraph&) const = default;

  bool has_vertex(std::string_view name) const;
};

enum class FeatureSchema : std::uint8_t { early18 = 0, final28 = 1 };

std::string_view to_string(FeatureSchema s);

// Fixed, documented feature-name order for each schema.
const std::vector<std::string>& feature_names(FeatureSchema schema);
std::size_t feature_count(FeatureSchema schema);

struct FeatureVector {
  FeatureSchema schema = FeatureSchema::final28;
  std::vector<double> values;
};

// Throws Error when sizes mismatch or values are not finite.
void check_feature_vector(const FeatureVector& fv);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_dataset(std::span<const PostRecord> posts,
                                  std::span<const InteractionRecord> interactions,
                                  const FriendshipStore& friends);

}  // namespace casc
