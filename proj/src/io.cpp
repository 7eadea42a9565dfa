#include "casc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace casc {

using nlohmann::json;

namespace {

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::string require_string(const json& obj, const char* key, const std::filesystem::path& path,
                           std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    parse_fail(path, line_no, std::string("missing or non-string field '") + key + "'");
  return it->get<std::string>();
}

std::int64_t require_int(const json& obj, const char* key, const std::filesystem::path& path,
                         std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer())
    parse_fail(path, line_no, std::string("missing or non-integer field '") + key + "'");
  return it->get<std::int64_t>();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<PostRecord> read_posts_jsonl(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::vector<PostRecord> posts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(path, line_no, e.what());
    }
    PostRecord p;
    p.post_id = require_string(obj, "post_id", path, line_no);
    p.page_id = require_string(obj, "page_id", path, line_no);
    try {
      p.label = label_from_string(require_string(obj, "label", path, line_no));
    } catch (const ParseError& e) {
      parse_fail(path, line_no, e.what());
    }
    p.created_at = require_int(obj, "created_at", path, line_no);
    posts.push_back(std::move(p));
  }
  return posts;
}

std::vector<InteractionRecord> read_interactions_jsonl(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::vector<InteractionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(path, line_no, e.what());
    }
    InteractionRecord r;
    r.post_id = require_string(obj, "post_id", path, line_no);
    r.user_id = require_string(obj, "user_id", path, line_no);
    try {
      r.kind = interaction_kind_from_string(require_string(obj, "kind", path, line_no));
    } catch (const ParseError& e) {
      parse_fail(path, line_no, e.what());
    }
    if (auto it = obj.find("timestamp"); it != obj.end() && !it->is_null()) {
      if (!it->is_number_integer()) parse_fail(path, line_no, "timestamp must be int or null");
      r.timestamp = it->get<std::int64_t>();
    }
    if (auto it = obj.find("via_user_id"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) parse_fail(path, line_no, "via_user_id must be string or null");
      r.via_user_id = it->get<std::string>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

FriendshipStore read_friendships_csv(const std::filesystem::path& path,
                                     std::vector<std::string>* warnings) {
  auto in = open_for_read(path);
  FriendshipStore store;
  std::set<std::pair<std::string, std::string>> raw_rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line == "user_id,friend_id") continue;
    auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size())
      parse_fail(path, line_no, "expected 'user_id,friend_id'");
    std::string a = line.substr(0, comma);
    std::string b = line.substr(comma + 1);
    if (a == b) {
      if (warnings) warnings->push_back("friendships: self-edge for '" + a + "' dropped");
      continue;
    }
    raw_rows.emplace(a, b);
    store.add_edge(a, b);
  }
  if (warnings) {
    for (const auto& [a, b] : raw_rows)
      if (!raw_rows.count({b, a}))
        warnings->push_back("friendships: row (" + a + "," + b +
                            ") lacked its mirror; symmetrized");
  }
  store.finalize();
  return store;
}

void write_posts_jsonl(std::span<const PostRecord> posts, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& p : posts) {
    json obj;
    obj["post_id"] = p.post_id;
    obj["page_id"] = p.page_id;
    obj["label"] = std::string(to_string(p.label));
    obj["created_at"] = p.created_at;
    out << obj.dump() << '\n';
  }
}

void write_interactions_jsonl(std::span<const InteractionRecord> interactions,
                              const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& r : interactions) {
    json obj;
    obj["post_id"] = r.post_id;
    obj["user_id"] = r.user_id;
    obj["kind"] = std::string(to_string(r.kind));
    obj["timestamp"] = r.timestamp ? json(*r.timestamp) : json(nullptr);
    obj["via_user_id"] = r.via_user_id ? json(*r.via_user_id) : json(nullptr);
    out << obj.dump() << '\n';
  }
}

void write_friendships_csv(const FriendshipStore& friends, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "user_id,friend_id\n";
  // both orientations, so readers see a fully symmetric file
  auto edges = friends.edges();
  std::vector<std::pair<std::string, std::string>> rows;
  rows.reserve(edges.size() * 2);
  for (auto& [a, b] : edges) {
    rows.emplace_back(a, b);
    rows.emplace_back(b, a);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [a, b] : rows) out << a << ',' << b << '\n';
}

void Dataset::canonicalize() {
  std::sort(posts.begin(), posts.end(),
            [](const PostRecord& a, const PostRecord& b) { return a.post_id < b.post_id; });
  auto sort_key = [](const InteractionRecord& r) {
    return std::make_tuple(r.post_id, r.timestamp.value_or(INT64_MAX), r.user_id,
                           static_cast<int>(r.kind),
                           r.via_user_id.value_or(std::string()));
  };
  std::sort(interactions.begin(), interactions.end(),
            [&](const InteractionRecord& a, const InteractionRecord& b) {
              return sort_key(a) < sort_key(b);
            });
  offsets.assign(posts.size() + 1, 0);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    while (cursor < interactions.size() && interactions[cursor].post_id < posts[i].post_id)
      ++cursor;  // interactions for unknown posts are skipped here; validation reports them
    offsets[i] = cursor;
    while (cursor < interactions.size() && interactions[cursor].post_id == posts[i].post_id)
      ++cursor;
  }
  offsets[posts.size()] = cursor;
}

Dataset load_dataset(const std::filesystem::path& posts_path,
                     const std::filesystem::path& interactions_path,
                     const std::filesystem::path& friendships_path) {
  Dataset ds;
  ds.posts = read_posts_jsonl(posts_path);
  ds.interactions = read_interactions_jsonl(interactions_path);
  ds.friends = read_friendships_csv(friendships_path, &ds.load_warnings);
  ds.canonicalize();
  return ds;
}

std::string dump_graph(const PropagationGraph& graph) {
  std::ostringstream out;
  out << "# " << graph.post_id << ' ' << graph.seed_id << ' ' << graph.vertices.size() << '\n';
  for (const auto& e : graph.edges) {
    out << e.u << ',' << e.v << ',' << to_string(e.type) << ',';
    if (e.time_s)
      out << *e.time_s;
    else
      out << "null";
    out << '\n';
  }
  return out.str();
}

PropagationGraph parse_graph_dump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  PropagationGraph g;
  bool have_header = false;
  std::size_t declared_vertices = 0;
  std::set<std::string> vertices;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      if (!(hdr >> g.post_id >> g.seed_id >> declared_vertices))
        throw ParseError("graph dump:" + std::to_string(line_no) + ": bad header");
      have_header = true;
      vertices.insert(g.seed_id);
      continue;
    }
    if (!have_header) throw ParseError("graph dump: missing header line");
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      parts.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (parts.size() != 4)
      throw ParseError("graph dump:" + std::to_string(line_no) + ": expected 4 fields");
    PropEdge e;
    e.u = parts[0];
    e.v = parts[1];
    if (e.u > e.v) std::swap(e.u, e.v);
    e.type = edge_type_from_string(parts[2]);
    if (parts[3] != "null") {
      std::int64_t t = 0;
      auto res = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), t);
      if (res.ec != std::errc() || res.ptr != parts[3].data() + parts[3].size())
        throw ParseError("graph dump:" + std::to_string(line_no) + ": bad time field");
      e.time_s = t;
    }
    vertices.insert(e.u);
    vertices.insert(e.v);
    g.edges.push_back(std::move(e));
  }
  if (!have_header) throw ParseError("graph dump: missing header line");
  g.vertices.assign(vertices.begin(), vertices.end());
  if (g.vertices.size() != declared_vertices)
    throw ParseError("graph dump: header declares " + std::to_string(declared_vertices) +
                     " vertices, edges imply " + std::to_string(g.vertices.size()));
  std::sort(g.edges.begin(), g.edges.end(),
            [](const PropEdge& a, const PropEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  return g;
}

}  // namespace casc
