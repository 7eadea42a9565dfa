#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "casc/features_evolution.hpp"
#include "casc/graph_builder.hpp"
#include "casc/pipeline.hpp"
#include "casc/synthgen.hpp"

using namespace casc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& leaf) {
  auto dir = fs::temp_directory_path() / ("casc_synth_" + leaf);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("preferential-attachment graph") {
  SUBCASE("edge count is C(m+1,2) + (n-m-1)m") {
    auto g = gen_friendship_graph(100, 2, 7);
    CHECK(g.edge_count() == 3 + 97 * 2);
    CHECK(g.user_count() == 100);
  }

  SUBCASE("n = m+1 yields the clique alone") {
    auto g = gen_friendship_graph(4, 3, 7);
    CHECK(g.edge_count() == 6);
    CHECK(g.are_friends("u000000", "u000003"));
  }

  SUBCASE("same seed reproduces the exact edge set") {
    auto a = gen_friendship_graph(200, 3, 11);
    auto b = gen_friendship_graph(200, 3, 11);
    CHECK(a.edges() == b.edges());
    auto c = gen_friendship_graph(200, 3, 12);
    CHECK(a.edges() != c.edges());
  }

  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(gen_friendship_graph(5, 5, 1), InvalidParamsError);
    CHECK_THROWS_AS(gen_friendship_graph(5, 0, 1), InvalidParamsError);
  }
}

TEST_CASE("cascade generation") {
  auto friends = gen_friendship_graph(500, 3, 3);

  SUBCASE("friend_prob 0 keeps every interaction direct") {
    SpreadParams params;
    params.friend_prob = 0.0;
    params.like_frac = 0.0;
    auto [post, interactions] = gen_cascade(friends, "page", "p1", 1000, Label::science,
                                            params, 21);
    CHECK_FALSE(interactions.empty());
    for (const auto& rec : interactions) CHECK_FALSE(rec.via_user_id.has_value());
    // every non-friendship edge touches the seed
    auto g = build_final_graph(post, interactions, friends);
    for (const auto& e : g.edges)
      if (e.type != EdgeType::friendship) CHECK((e.u == "page" || e.v == "page"));
  }

  SUBCASE("vanishing direct rate gives an empty cascade") {
    SpreadParams params;
    params.direct_rate = 1e-12;
    auto [post, interactions] = gen_cascade(friends, "page", "p1", 1000, Label::science,
                                            params, 5);
    CHECK(interactions.empty());
  }

  SUBCASE("like_frac 1 leaves snapshots empty") {
    SpreadParams params;
    params.like_frac = 1.0;
    auto [post, interactions] = gen_cascade(friends, "page", "p1", 1000, Label::science,
                                            params, 9);
    REQUIRE_FALSE(interactions.empty());
    for (const auto& rec : interactions) {
      CHECK(rec.kind == InteractionKind::like);
      CHECK_FALSE(rec.timestamp.has_value());
    }
    auto snap = build_snapshot(post, interactions, friends, 2880);
    CHECK(snap.vertices.size() == 1);
    auto series = build_series(post, interactions, friends, 8);
    for (const auto& s : series)
      for (double v : s.values) CHECK(v == 0.0);
  }

  SUBCASE("timestamps respect the horizon and the user cap holds") {
    SpreadParams params;
    params.direct_rate = 60.0;
    params.friend_prob = 0.4;
    params.max_users = 60;
    auto [post, interactions] = gen_cascade(friends, "page", "p1", 1000, Label::science,
                                            params, 13);
    std::set<std::string> users;
    for (const auto& rec : interactions) {
      users.insert(rec.user_id);
      if (rec.timestamp)
        CHECK(*rec.timestamp <= 1000 + static_cast<std::int64_t>(params.horizon_minutes) * 60);
    }
    CHECK(users.size() <= 60);
  }

  SUBCASE("parameter validation") {
    SpreadParams params;
    params.friend_prob = 1.5;
    CHECK_THROWS_AS(params.validate(), InvalidParamsError);
  }
}

TEST_CASE("generated datasets validate cleanly and are deterministic") {
  auto ds = gen_dataset(Preset::null_dynamics, 12, 99);
  CHECK(ds.posts.size() == 24);
  auto report = validate_dataset(ds.posts, ds.interactions, ds.friends);
  CHECK(report.ok());

  SUBCASE("output files are byte-identical across runs") {
    auto dir_a = temp_dir("det_a");
    auto dir_b = temp_dir("det_b");
    write_dataset(ds, dir_a);
    write_dataset(gen_dataset(Preset::null_dynamics, 12, 99), dir_b);
    for (const char* name : {"posts.jsonl", "interactions.jsonl", "friendships.csv"})
      CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    auto other = gen_dataset(Preset::null_dynamics, 12, 100);
    auto dir_c = temp_dir("det_c");
    write_dataset(other, dir_c);
    CHECK(slurp(dir_a / "interactions.jsonl") != slurp(dir_c / "interactions.jsonl"));
  }

  SUBCASE("file round-trip reproduces the feature matrix exactly") {
    auto dir = temp_dir("roundtrip");
    write_dataset(ds, dir);
    auto loaded = load_dataset(dir / "posts.jsonl", dir / "interactions.jsonl",
                               dir / "friendships.csv");
    CHECK(loaded.load_warnings.empty());
    auto direct = final_feature_table(ds, 30, 720, 1);
    auto reloaded = final_feature_table(loaded, 30, 720, 1);
    CHECK(direct.post_ids == reloaded.post_ids);
    CHECK(direct.labels == reloaded.labels);
    CHECK(direct.x.data == reloaded.x.data);  // bitwise
  }

  SUBCASE("n_per_class below 10 is rejected") {
    CHECK_THROWS_AS(gen_dataset(Preset::null_dynamics, 9, 1), InvalidParamsError);
  }
}

TEST_CASE("preset configs differ only where they should") {
  auto null_cfg = preset_config(Preset::null_dynamics);
  CHECK(null_cfg.science.friend_prob == null_cfg.conspiracy.friend_prob);
  CHECK(null_cfg.science.direct_rate == null_cfg.conspiracy.direct_rate);
  auto sep = preset_config(Preset::separable);
  CHECK(sep.conspiracy.friend_prob > sep.science.friend_prob);
  CHECK(sep.science.direct_rate > sep.conspiracy.direct_rate);
}

TEST_CASE("INI config round-trip and overrides") {
  auto dir = temp_dir("ini");
  auto cfg = preset_config(Preset::separable);
  cfg.n_users = 777;
  cfg.conspiracy.friend_prob = 0.123;
  write_gen_config(cfg, dir / "gen.ini");
  auto loaded = read_gen_config(dir / "gen.ini", Preset::null_dynamics);
  CHECK(loaded.n_users == 777);
  CHECK(loaded.conspiracy.friend_prob == doctest::Approx(0.123));
  CHECK(loaded.science.direct_rate == cfg.science.direct_rate);

  SUBCASE("partial overrides keep preset defaults") {
    std::ofstream out(dir / "partial.ini");
    out << "[conspiracy]\nfriend_prob = 0.9\n";
    out.close();
    auto partial = read_gen_config(dir / "partial.ini", Preset::null_dynamics);
    CHECK(partial.conspiracy.friend_prob == doctest::Approx(0.9));
    CHECK(partial.science.friend_prob ==
          doctest::Approx(preset_config(Preset::null_dynamics).science.friend_prob));
  }

  SUBCASE("unknown keys are rejected with a located error") {
    std::ofstream out(dir / "bad.ini");
    out << "[science]\nvirality = 3\n";
    out.close();
    CHECK_THROWS_WITH_AS(read_gen_config(dir / "bad.ini", Preset::null_dynamics),
                         doctest::Contains("virality"), ParseError);
  }

  SUBCASE("unknown preset names are rejected") {
    CHECK_THROWS_AS(preset_from_string("bogus"), ParseError);
  }
}
