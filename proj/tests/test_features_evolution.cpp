#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "casc/features_evolution.hpp"
#include "casc/model.hpp"
#include "casc/rng.hpp"
#include "helpers.hpp"

using namespace casc;

namespace {

constexpr std::int64_t kCreated = 5000;

InteractionRecord ix(const std::string& user, InteractionKind kind,
                     std::optional<double> minutes,
                     std::optional<std::string> via = std::nullopt) {
  InteractionRecord r;
  r.post_id = "p";
  r.user_id = user;
  r.kind = kind;
  if (minutes) r.timestamp = kCreated + static_cast<std::int64_t>(*minutes * 60.0);
  r.via_user_id = std::move(via);
  return r;
}

PostRecord post() { return {"p", "s", Label::conspiracy, kCreated}; }

}  // namespace

TEST_CASE("series_stats reproduces the hand-derived values") {
  SUBCASE("v = [1,2,3]") {
    const double v[] = {1, 2, 3};
    auto s = series_stats(v);
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.linear_weighted_mean == doctest::Approx(14.0 / 6.0).epsilon(1e-12));
    CHECK(s.quadratic_weighted_mean == doctest::Approx(216.0 / 84.0).epsilon(1e-12));
    CHECK(s.std_dev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(s.avg_abs_change == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(s.maximum == 3.0);
  }

  SUBCASE("constant series") {
    const double v[] = {5, 5, 5, 5};
    auto s = series_stats(v);
    CHECK(s.mean == 5.0);
    CHECK(s.linear_weighted_mean == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s.quadratic_weighted_mean == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s.std_dev == 0.0);
    CHECK(s.avg_abs_change == 0.0);
    CHECK(s.maximum == 5.0);
  }

  SUBCASE("v = [1,3,2]") {
    const double v[] = {1, 3, 2};
    auto s = series_stats(v);
    CHECK(s.avg_abs_change == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.maximum == 3.0);
  }

  SUBCASE("single point collapses the weighted means") {
    const double v[] = {7.5};
    auto s = series_stats(v);
    CHECK(s.mean == 7.5);
    CHECK(s.linear_weighted_mean == 7.5);
    CHECK(s.quadratic_weighted_mean == 7.5);
    CHECK(s.std_dev == 0.0);
    CHECK(s.avg_abs_change == 0.0);
    CHECK(s.maximum == 7.5);
  }

  SUBCASE("empty series is rejected") {
    CHECK_THROWS_AS(series_stats({}), EmptySeriesError);
  }
}

TEST_CASE("weighted-mean normalizers are exact on the all-ones series") {
  for (int n = 1; n <= 96; ++n) {
    std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    auto s = series_stats(ones);
    CHECK(s.linear_weighted_mean == 1.0);     // exact, not approximate
    CHECK(s.quadratic_weighted_mean == 1.0);
  }
}

TEST_CASE("weighted means stay between the series min and max") {
  Rng rng(321);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + rng.below(96));
    for (auto& x : v) x = rng.uniform() * 100.0;
    auto s = series_stats(v);
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    CHECK(s.linear_weighted_mean >= lo - 1e-9);
    CHECK(s.linear_weighted_mean <= hi + 1e-9);
    CHECK(s.quadratic_weighted_mean >= lo - 1e-9);
    CHECK(s.quadratic_weighted_mean <= hi + 1e-9);
    CHECK(s.maximum >= s.mean);
    CHECK(s.std_dev >= 0.0);
  }
}

TEST_CASE("build_series") {
  FriendshipStore friends;
  friends.add_edge("a", "b");
  friends.finalize();

  SUBCASE("no timed interactions give all-zero series") {
    std::vector<InteractionRecord> interactions{ix("a", InteractionKind::like, std::nullopt)};
    auto series = build_series(post(), interactions, friends, 8);
    for (const auto& s : series) {
      REQUIRE(s.values.size() == 8);
      for (double v : s.values) CHECK(v == 0.0);
    }
  }

  SUBCASE("a single direct interaction pins all three series") {
    std::vector<InteractionRecord> interactions{ix("a", InteractionKind::comment, 5.0)};
    auto series = build_series(post(), interactions, friends, 4);
    for (int k = 0; k < 4; ++k) {
      CHECK(series[0].values[k] == 0.0);  // friendships ratio
      CHECK(series[1].values[k] == 1.0);  // size
      CHECK(series[2].values[k] == 2.0);  // interactions ratio |V|/|E|
    }
  }

  SUBCASE("size series is non-decreasing and saturates after the last interaction") {
    std::vector<InteractionRecord> interactions{
        ix("a", InteractionKind::comment, 10.0),
        ix("b", InteractionKind::comment, 100.0),
        ix("c", InteractionKind::reshare, 310.0),
    };
    auto series = build_series(post(), interactions, friends, 16);
    const auto& size = series[1].values;
    for (std::size_t i = 0; i + 1 < size.size(); ++i) CHECK(size[i] <= size[i + 1]);
    for (std::size_t i = 11; i < size.size(); ++i) CHECK(size[i] == size[10]);
    CHECK(size.front() == 1.0);
    CHECK(size.back() == 4.0);  // three seed edges plus the (a,b) friendship edge
  }

  SUBCASE("size series is non-decreasing on random cascades") {
    for (std::uint64_t seed = 200; seed < 215; ++seed) {
      auto fx = testutil::random_cascade(seed);
      auto series = build_series(fx.post, fx.interactions, fx.friends, 96);
      const auto& size = series[1].values;
      for (std::size_t i = 0; i + 1 < size.size(); ++i) CHECK(size[i] <= size[i + 1]);
    }
  }

  SUBCASE("step bounds are validated") {
    CHECK_THROWS_AS(build_series(post(), {}, friends, 0), InvalidStepError);
    CHECK_THROWS_AS(build_series(post(), {}, friends, 97), InvalidStepError);
  }
}

TEST_CASE("early_features") {
  FriendshipStore friends;
  friends.add_edge("a", "b");
  friends.finalize();
  std::vector<InteractionRecord> interactions{
      ix("a", InteractionKind::comment, 5.0),
      ix("b", InteractionKind::reshare, 95.0, "a"),
  };

  SUBCASE("delta=30 collapses to the first snapshot") {
    auto fv = early_features(post(), interactions, friends, 30);
    REQUIRE(fv.values.size() == 18);
    CHECK(fv.schema == FeatureSchema::early18);
    // friendships block: mean = lwm = qwm = max = v1, std = aac = 0
    CHECK(fv.values[0] == fv.values[5]);
    CHECK(fv.values[1] == fv.values[0]);
    CHECK(fv.values[2] == fv.values[0]);
    CHECK(fv.values[3] == 0.0);
    CHECK(fv.values[4] == 0.0);
    // size block at one interaction
    CHECK(fv.values[6] == 1.0);
    CHECK(fv.values[11] == 1.0);
  }

  SUBCASE("delta=2880 uses 96 points and matches series_stats directly") {
    auto fv = early_features(post(), interactions, friends, 2880);
    auto series = build_series(post(), interactions, friends, 96);
    auto sf = series_stats(series[0].values);
    auto ss = series_stats(series[1].values);
    auto si = series_stats(series[2].values);
    CHECK(fv.values[0] == sf.mean);
    CHECK(fv.values[5] == sf.maximum);
    CHECK(fv.values[6] == ss.mean);
    CHECK(fv.values[9] == ss.std_dev);
    CHECK(fv.values[12] == si.mean);
    CHECK(fv.values[17] == si.maximum);
  }

  SUBCASE("delta must be a positive multiple of the step") {
    CHECK_THROWS_AS(early_features(post(), interactions, friends, 45), InvalidStepError);
    CHECK_THROWS_AS(early_features(post(), interactions, friends, 0), InvalidStepError);
  }

  SUBCASE("order: friendships block, size block, interactions block") {
    const auto& names = feature_names(FeatureSchema::early18);
    CHECK(names[0] == "friendships_ratio_mean");
    CHECK(names[5] == "friendships_ratio_max");
    CHECK(names[6] == "size_mean");
    CHECK(names[12] == "interactions_ratio_mean");
    CHECK(names[17] == "interactions_ratio_max");
  }
}
