#include "casc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "casc/rng.hpp"

namespace casc {

void SpreadParams::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(direct_rate >= 0.0) || !(decay_hours > 0.0))
    throw InvalidParamsError("direct_rate must be >= 0 and decay_hours > 0");
  if (!prob(friend_prob) || !prob(via_prob) || !prob(like_frac))
    throw InvalidParamsError("friend_prob, via_prob and like_frac must be probabilities");
  if (horizon_minutes <= 0) throw InvalidParamsError("horizon_minutes must be positive");
  if (max_users < 1) throw InvalidParamsError("max_users must be >= 1");
}

FriendshipStore gen_friendship_graph(int n, int m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw InvalidParamsError("need 1 <= m < n for preferential attachment");
  Rng rng(derive_seed(seed, hash_tag("friendship-graph")));
  auto name = [](int id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%06d", id);
    return std::string(buf);
  };
  FriendshipStore store;
  std::vector<std::uint32_t> targets;  // one entry per unit of degree
  targets.reserve(static_cast<std::size_t>(2 * m) * static_cast<std::size_t>(n));
  for (int a = 0; a <= m; ++a)
    for (int b = a + 1; b <= m; ++b) {
      store.add_edge(name(a), name(b));
      targets.push_back(static_cast<std::uint32_t>(a));
      targets.push_back(static_cast<std::uint32_t>(b));
    }
  std::vector<std::uint32_t> chosen;
  for (int v = m + 1; v < n; ++v) {
    chosen.clear();
    while (chosen.size() < static_cast<std::size_t>(m)) {
      std::uint32_t t = targets[rng.below(targets.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (std::uint32_t t : chosen) {
      store.add_edge(name(v), name(static_cast<int>(t)));
      targets.push_back(t);
      targets.push_back(static_cast<std::uint32_t>(v));
    }
  }
  store.finalize();
  return store;
}

std::pair<PostRecord, std::vector<InteractionRecord>> gen_cascade(
    const FriendshipStore& friends, const std::string& page_id, const std::string& post_id,
    std::int64_t created_at, Label label, const SpreadParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, hash_tag("cascade")));
  PostRecord post{post_id, page_id, label, created_at};
  std::vector<InteractionRecord> interactions;

  const double horizon_h = static_cast<double>(params.horizon_minutes) / 60.0;
  const double tail = 1.0 - std::exp(-horizon_h / params.decay_hours);
  const double expected_direct = params.direct_rate * params.decay_hours * tail;
  const std::uint64_t n_direct = rng.poisson(expected_direct);

  struct Arrival {
    std::uint32_t user;
    int minute;
  };
  std::vector<Arrival> arrivals;
  arrivals.reserve(n_direct);
  const std::size_t n_users = friends.user_count();
  for (std::uint64_t i = 0; i < n_direct; ++i) {
    const double t_hours = -params.decay_hours * std::log(1.0 - rng.uniform() * tail);
    int minute = static_cast<int>(std::lround(t_hours * 60.0));
    minute = std::clamp(minute, 0, params.horizon_minutes);
    arrivals.push_back({static_cast<std::uint32_t>(rng.below(n_users)), minute});
  }

  auto record = [&](std::uint32_t user, int minute, const std::string* via) {
    InteractionRecord rec;
    rec.post_id = post_id;
    rec.user_id = friends.name_of(user);
    if (rng.uniform() < params.like_frac) {
      rec.kind = InteractionKind::like;  // untimed, per the ingestion grain
    } else {
      rec.kind = rng.uniform() < 0.5 ? InteractionKind::reshare : InteractionKind::comment;
      rec.timestamp = created_at + static_cast<std::int64_t>(minute) * 60;
    }
    if (via) rec.via_user_id = *via;
    interactions.push_back(std::move(rec));
  };

  std::unordered_set<std::uint32_t> activated;
  std::vector<Arrival> frontier;
  for (const Arrival& a : arrivals) {
    if (activated.count(a.user)) {
      record(a.user, a.minute, nullptr);  // repeat interaction by the same user
      continue;
    }
    if (activated.size() >= static_cast<std::size_t>(params.max_users)) continue;
    activated.insert(a.user);
    record(a.user, a.minute, nullptr);
    frontier.assign(1, a);
    while (!frontier.empty()) {
      Arrival cur = frontier.back();
      frontier.pop_back();
      if (activated.size() >= static_cast<std::size_t>(params.max_users)) break;
      for (std::uint32_t f : friends.neighbors(cur.user)) {
        if (activated.size() >= static_cast<std::size_t>(params.max_users)) break;
        if (activated.count(f)) continue;
        if (rng.uniform() >= params.friend_prob) continue;
        const int delay = 1 + static_cast<int>(rng.below(60));
        const int tf = cur.minute + delay;
        if (tf > params.horizon_minutes) continue;
        activated.insert(f);
        const std::string& parent = friends.name_of(cur.user);
        record(f, tf, rng.uniform() < params.via_prob ? &parent : nullptr);
        frontier.push_back({f, tf});
      }
    }
  }
  return {std::move(post), std::move(interactions)};
}

Preset preset_from_string(std::string_view s) {
  if (s == "separable") return Preset::separable;
  if (s == "null") return Preset::null_dynamics;
  throw ParseError("unknown preset '" + std::string(s) + "' (expected separable|null)");
}

std::string_view to_string(Preset p) {
  return p == Preset::separable ? "separable" : "null";
}

GenConfig preset_config(Preset preset) {
  GenConfig cfg;
  if (preset == Preset::null_dynamics) {
    SpreadParams p;  // defaults: moderate mixed dynamics
    cfg.science = p;
    cfg.conspiracy = p;
  } else {
    SpreadParams broadcast;
    broadcast.direct_rate = 30.0;
    broadcast.decay_hours = 3.0;
    broadcast.friend_prob = 0.02;
    broadcast.via_prob = 0.3;
    SpreadParams word_of_mouth;
    word_of_mouth.direct_rate = 4.0;
    word_of_mouth.decay_hours = 8.0;
    word_of_mouth.friend_prob = 0.35;
    word_of_mouth.via_prob = 0.6;
    cfg.science = broadcast;
    cfg.conspiracy = word_of_mouth;
  }
  return cfg;
}

Dataset gen_dataset(Preset preset, int n_per_class, std::uint64_t seed) {
  return gen_dataset(preset_config(preset), n_per_class, seed);
}

Dataset gen_dataset(const GenConfig& config, int n_per_class, std::uint64_t seed) {
  if (n_per_class < 10) throw InvalidParamsError("n_per_class must be >= 10");
  config.science.validate();
  config.conspiracy.validate();
  Dataset ds;
  ds.friends = gen_friendship_graph(config.n_users, config.attach_m,
                                    derive_seed(seed, hash_tag("graph")));
  const int pages_per_class = 5;
  constexpr std::int64_t kEpochBase = 1600000000;
  for (int cls = 0; cls < 2; ++cls) {
    const Label label = cls == 0 ? Label::science : Label::conspiracy;
    const SpreadParams& params = cls == 0 ? config.science : config.conspiracy;
    const char* prefix = cls == 0 ? "sci" : "con";
    for (int i = 0; i < n_per_class; ++i) {
      char post_id[24], page_id[24];
      std::snprintf(post_id, sizeof(post_id), "%s_p%05d", prefix, i);
      std::snprintf(page_id, sizeof(page_id), "%s_page%02d", prefix, i % pages_per_class);
      auto [post, interactions] =
          gen_cascade(ds.friends, page_id, post_id,
                      kEpochBase + static_cast<std::int64_t>(i) * 3600 + cls * 1800, label,
                      params, derive_seed(seed, hash_tag(post_id)));
      ds.posts.push_back(std::move(post));
      for (auto& rec : interactions) ds.interactions.push_back(std::move(rec));
    }
  }
  ds.canonicalize();
  return ds;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_posts_jsonl(dataset.posts, dir / "posts.jsonl");
  write_interactions_jsonl(dataset.interactions, dir / "interactions.jsonl");
  write_friendships_csv(dataset.friends, dir / "friendships.csv");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

void apply_key(SpreadParams& p, const std::string& key, const std::string& value,
               const std::filesystem::path& path, std::size_t line_no) {
  try {
    if (key == "direct_rate") p.direct_rate = std::stod(value);
    else if (key == "decay_hours") p.decay_hours = std::stod(value);
    else if (key == "friend_prob") p.friend_prob = std::stod(value);
    else if (key == "via_prob") p.via_prob = std::stod(value);
    else if (key == "like_frac") p.like_frac = std::stod(value);
    else if (key == "horizon_minutes") p.horizon_minutes = std::stoi(value);
    else if (key == "max_users") p.max_users = std::stoi(value);
    else
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown key '" +
                       key + "'");
  } catch (const std::invalid_argument&) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad value for '" +
                     key + "'");
  }
}

}  // namespace

GenConfig read_gen_config(const std::filesystem::path& path, Preset base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  GenConfig cfg = preset_config(base);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "science" && section != "conspiracy")
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": unknown section '" + section + "'");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      if (key == "n_users") cfg.n_users = std::stoi(value);
      else if (key == "attach_m") cfg.attach_m = std::stoi(value);
      else
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown key '" +
                         key + "'");
    } else if (section == "science") {
      apply_key(cfg.science, key, value, path, line_no);
    } else {
      apply_key(cfg.conspiracy, key, value, path, line_no);
    }
  }
  return cfg;
}

void write_gen_config(const GenConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "n_users = " << config.n_users << "\n";
  out << "attach_m = " << config.attach_m << "\n";
  auto emit = [&](const char* name, const SpreadParams& p) {
    out << "\n[" << name << "]\n";
    out << "direct_rate = " << format_double(p.direct_rate) << "\n";
    out << "decay_hours = " << format_double(p.decay_hours) << "\n";
    out << "friend_prob = " << format_double(p.friend_prob) << "\n";
    out << "via_prob = " << format_double(p.via_prob) << "\n";
    out << "like_frac = " << format_double(p.like_frac) << "\n";
    out << "horizon_minutes = " << p.horizon_minutes << "\n";
    out << "max_users = " << p.max_users << "\n";
  };
  emit("science", config.science);
  emit("conspiracy", config.conspiracy);
}

}  // namespace casc
