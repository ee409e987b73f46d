#include "flat_configs.hpp"
#include "oracles.hpp"

#include "stackplace/stability.hpp"
#include "stackplace/world.hpp"

#include <doctest.h>

#include <algorithm>

using namespace stackplace;

TEST_CASE("convex hull drops interior and collinear points") {
  const std::vector<Vec2> pts = {Vec2(0, 0), Vec2(1, 0), Vec2(0.5, 0), Vec2(1, 1),
                                 Vec2(0, 1), Vec2(0.5, 0.5), Vec2(0.2, 0.7)};
  const auto hull = convex_hull(pts);
  REQUIRE(hull.size() == 4);
  double area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    area += a.x() * b.y() - a.y() * b.x();
  }
  CHECK(area == doctest::Approx(2.0));  // twice the area, positive when CCW
}

TEST_CASE("support margin") {
  const std::vector<Vec2> sq = {Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)};
  CHECK(support_margin(sq, Vec2(0, 0)) == doctest::Approx(1.0));
  CHECK(support_margin(sq, Vec2(0.75, 0.1)) == doctest::Approx(0.25));
  CHECK(support_margin(sq, Vec2(3, 0)) == doctest::Approx(-2.0));
  CHECK(support_margin(sq, Vec2(1, 0)) == doctest::Approx(0.0));

  const std::vector<Vec2> seg = {Vec2(0, 0), Vec2(1, 0)};
  CHECK(support_margin(seg, Vec2(0.5, 0)) <= 0.0);
  CHECK(support_margin(seg, Vec2(0.5, 0.3)) == doctest::Approx(-0.3));
}

TEST_CASE("patch_supports examples") {
  std::vector<Vec2> patch;
  for (int j = -20; j <= 20; ++j)
    for (int i = -20; i <= 20; ++i) patch.emplace_back(i * 1e-3, j * 1e-3);
  CHECK(patch_supports(patch, Vec2::Zero(), 1e-3));
  CHECK(patch_supports(patch, Vec2(0.0185, 0.0), 1e-3));
  CHECK(!patch_supports(patch, Vec2(0.0195, 0.0), 1e-3));
  CHECK(!patch_supports(patch, Vec2(0.02, 0.0), 0.0 + 1e-15));
  CHECK(!patch_supports(patch, Vec2(0.05, 0.0), 1e-3));
  const std::vector<Vec2> line = {Vec2(0, 0), Vec2(0.01, 0), Vec2(0.02, 0)};
  CHECK(!patch_supports(line, Vec2(0.01, 0), 0.0));
}

TEST_CASE("stability oracle agrees with the brute-force tipping check") {
  std::mt19937_64 rng(11);
  ContactParams params;
  params.sample_pitch = 3e-3;
  int patches = 0;
  for (int i = 0; i < 500; ++i) {
    const auto c = flat_configs::random_config(rng, params);
    const auto a = flat_configs::compare(c);
    CHECK(a != flat_configs::Agreement::Disagree);
    if (a != flat_configs::Agreement::PointContact) ++patches;
  }
  CHECK(patches > 400);
}
