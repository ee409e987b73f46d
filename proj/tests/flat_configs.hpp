#pragma once

// Random flat-bottomed objects over pucks and rectangular blocks.

#include "oracles.hpp"

#include "stackplace/world.hpp"

namespace flat_configs {

using namespace stackplace;

struct Config {
  World world;
  Vec2 tip;
};

inline Config random_config(std::mt19937_64& rng, const ContactParams& params) {
  HeldObject o;
  o.footprint = {oracle::uniform(rng, 0, 1) < 0.5 ? FootprintShape::Disk : FootprintShape::Square,
                 oracle::uniform(rng, 0.02, 0.06)};
  o.true_com_offset = Vec3(oracle::uniform(rng, -0.01, 0.01), oracle::uniform(rng, -0.01, 0.01), 0.0);

  std::vector<SurfaceModel> surfaces = {FlatPlane{-0.5}};
  const int kind = static_cast<int>(oracle::uniform(rng, 0, 3));
  if (kind == 0) {
    surfaces.push_back(Puck{Vec2(oracle::uniform(rng, -0.02, 0.02), oracle::uniform(rng, -0.02, 0.02)),
                            oracle::uniform(rng, 0.01, 0.06), 0.05, 0.0, {}});
  } else {
    // One block, or two blocks at the same height.
    HeightField f(Vec2(-0.15, -0.15), 2e-3, 151, 151);
    for (int b = 0; b < kind; ++b) {
      const Vec2 c(oracle::uniform(rng, -0.04, 0.04), oracle::uniform(rng, -0.04, 0.04));
      const Vec2 half(oracle::uniform(rng, 0.005, 0.04), oracle::uniform(rng, 0.005, 0.04));
      for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i) {
          const Vec2 d = (f.node_position(i, j) - c).cwiseAbs();
          if (d.x() <= half.x() && d.y() <= half.y()) f.set_node(i, j, 0.05);
        }
    }
    surfaces.push_back(f);
  }
  const Vec2 tip(oracle::uniform(rng, -0.06, 0.06), oracle::uniform(rng, -0.06, 0.06));
  return {World(Tower(surfaces), o, {}, params), tip};
}

enum class Agreement { Agree, Disagree, Tie, PointContact };

/// Compares the world's oracle with the brute-force tipping check on the
/// world's support patch. Ties sit within 1e-9 m of the margin.
inline Agreement compare(const Config& c) {
  const World& w = c.world;
  const auto s = w.support_at(c.tip);
  if (!s || s->patch.empty()) return Agreement::PointContact;
  const Vec2 com = c.tip + w.held().true_com_offset.head<2>();
  const double margin = w.params().stability_margin;
  std::vector<Vec2> pts;
  for (const auto& p : s->patch) pts.push_back(p.head<2>());
  const bool lo = oracle::brute_force_supported(pts, com, margin - 1e-9);
  const bool hi = oracle::brute_force_supported(pts, com, margin + 1e-9);
  if (lo != hi) return Agreement::Tie;
  return w.stability_oracle(c.tip) == oracle::brute_force_supported(pts, com, margin)
             ? Agreement::Agree
             : Agreement::Disagree;
}

}  // namespace flat_configs
