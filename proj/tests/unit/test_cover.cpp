#include <map>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "ucover/cover.hpp"

using namespace ucover;
using ucover::testing::hexagon;
using ucover::testing::line4;

TEST_CASE("hexagon fine-scale cover grows like the line") {
  auto c6 = hexagon();
  for (int r = 1; r <= 6; ++r) {
    CoverBudget b;
    b.radius = r;
    auto cover = build_cover(c6, 2, 0, b);
    CHECK(cover.size() == static_cast<std::size_t>(2 * r + 1));
    CHECK(cover.size() == oracle::chain_classes(c6, 2, 0, r, 8));
    CHECK(!cover.complete());
    CHECK(verify_endpoint_ucm(c6, 2, cover).verdict == UcmVerdict::Inconclusive);
    CHECK(verify_endpoint_ucm(c6, 2, cover).exhausted_budget == "radius");
  }
}

TEST_CASE("hexagon coarse-scale cover is the hexagon itself") {
  auto c6 = hexagon();
  auto cover = build_cover(c6, 1, 0, {});
  CHECK(cover.complete());
  CHECK(cover.size() == 6);
  CHECK(oracle::chain_classes(c6, 1, 0, 6, 8) == 6);
  auto report = verify_endpoint_ucm(c6, 1, cover);
  CHECK(report.verdict == UcmVerdict::Ucm);
  CHECK(report.transverse_scale == std::optional<int>(1));
  auto p = endpoint_map(cover);
  std::sort(p.begin(), p.end());
  CHECK(p == std::vector<Point>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("tree cover") {
  auto l4 = line4();
  CoverBudget b;
  b.radius = 3;
  auto cover = build_cover(l4, 1, 0, b);
  CHECK(cover.size() == 4);
  cover.expand();
  CHECK(cover.complete());
  CHECK(verify_endpoint_ucm(l4, 1, cover).verdict == UcmVerdict::Ucm);
}

TEST_CASE("endpoint map") {
  auto c6 = hexagon();
  CoverBudget b;
  b.radius = 6;
  auto cover = build_cover(c6, 2, 0, b);
  CHECK(cover.endpoint(0) == 0);
  for (std::size_t v = 0; v < cover.size(); ++v)
    if (cover.representative(static_cast<int>(v)).seq == std::vector<Point>{0, 1, 2}) CHECK(cover.endpoint(static_cast<int>(v)) == 2);
  // vertices n and n + 6 on the line share an endpoint
  auto up = lift_chain(cover, 0, Chain{2, {0, 1, 2, 3, 4, 5, 0}});
  CHECK(cover.endpoint(up.back()) == cover.endpoint(0));
  CHECK(up.back() != 0);
}

TEST_CASE("lifting chains") {
  auto c6 = hexagon();
  CoverBudget b;
  b.radius = 1;
  auto fine = build_cover(c6, 2, 0, b);
  Chain loop{2, {0, 1, 2, 3, 4, 5, 0}};
  auto lift = lift_chain(fine, 0, loop);
  CHECK(lift.back() != 0);
  CHECK(fine.representative(lift.back()).length() == 7);
  CHECK(lift_chain(fine, 0, Chain{2, {0}}) == std::vector<int>{0});
  CHECK_THROWS_AS(lift_chain(fine, 0, Chain{2, {1, 2}}), Error);
  auto fresh = build_cover(c6, 2, 0, b);
  CHECK_THROWS_AS(lift_chain(fresh, 0, Chain{2, {0, 1, 2, 3, 4, 5, 0, 1, 2}}, 3), Error);

  auto coarse = build_cover(c6, 1, 0, {});
  Chain loop1{1, loop.seq};
  auto lift1 = lift_chain(coarse, 0, loop1);
  CHECK(lift1.back() == 0);
  // lift fidelity and uniqueness
  for (std::size_t i = 0; i < lift1.size(); ++i) CHECK(coarse.endpoint(lift1[i]) == loop1.seq[i]);
  CHECK(lift_chain(coarse, 0, loop1) == lift1);
  // a finer-scale chain lifts through the coarse cover too
  CHECK(lift_chain(coarse, 0, loop).back() == 0);
}

TEST_CASE("lifted entourages follow their definition") {
  auto c6 = hexagon();
  auto cover = build_cover(c6, 1, 0, {});
  const auto n = static_cast<int>(cover.size());
  for (int j = 1; j <= 2; ++j) {
    auto rel = cover.lifted_scale(j);
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u) {
        const Point x = cover.endpoint(v), y = cover.endpoint(u);
        bool expected = false;
        if (c6.scale(j).contains(x, y)) {
          Chain c = cover.representative(v);
          if (x != y) c.seq.push_back(y);
          expected = decide_e_homotopic(c6, 1, c, cover.representative(u)).answer == Answer::Yes;
        }
        CHECK(rel.contains(v, u) == expected);
      }
  }
}

TEST_CASE("bonding maps on H1") {
  auto c6 = hexagon();
  auto m = bonding_h1_map(c6, 2, 1);
  CHECK(m.rows() == 0);
  CHECK(m.cols() == 1);
  CHECK(bonding_h1_map(c6, 2, 2) == IntMatrix::identity(1));
  CHECK_THROWS_AS(bonding_h1_map(c6, 1, 2), Error);
  CHECK(critical_scales(c6) == std::vector<std::pair<int, int>>{{1, 2}});
  CHECK(critical_scales(line4()).empty());
  CHECK(critical_scales(ucover::testing::triangle()).empty());
  auto l4 = line4();
  CHECK(bonding_h1_map(l4, 2, 1).rows() == 0);
}

TEST_CASE("bonding maps compose") {
  // Two circles of different sizes: the 8-cycle at three radii.
  auto c8 = from_metric(ucover::testing::cycle_distances(8), {3, 2, 1});
  CHECK(h1_at_scale(c8, 3) == AbelianGroupInv{1, {}});
  CHECK(h1_at_scale(c8, 2) == AbelianGroupInv{1, {}});
  CHECK(h1_at_scale(c8, 1).trivial());
  auto m32 = bonding_h1_map(c8, 3, 2);
  CHECK(is_isomorphism(m32, h1_at_scale(c8, 3), h1_at_scale(c8, 2)));
  CHECK(critical_scales(c8) == std::vector<std::pair<int, int>>{{1, 2}});

  std::mt19937 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 4);
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = 1 + static_cast<int>(rng() % 5);
    auto s = from_metric(d, {4, 3, 2});
    auto m21 = bonding_h1_map(s, 2, 1), m32b = bonding_h1_map(s, 3, 2), m31 = bonding_h1_map(s, 3, 1);
    auto composed = m21 * m32b;
    // compare modulo the torsion of the target
    auto target = h1_at_scale(s, 1);
    REQUIRE(composed.rows() == m31.rows());
    for (std::size_t r = 0; r < m31.rows(); ++r)
      for (std::size_t c = 0; c < m31.cols(); ++c) {
        Integer diff = composed(r, c) - m31(r, c);
        if (r >= target.rank) diff = floor_mod(diff, target.torsion[r - target.rank]);
        CHECK(diff == 0);
      }
    for (int k = 1; k <= 3; ++k) CHECK(bonding_h1_map(s, k, k) == IntMatrix::identity(h1_at_scale(s, k).num_coordinates()));
  }
}

TEST_CASE("complete covers have constant fibers") {
  std::mt19937 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 4);
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = 1 + static_cast<int>(rng() % 4);
    auto s = from_metric(d, {2, 1});
    for (int k = 1; k <= 2; ++k) {
      CoverBudget b;
      b.radius = 12;
      auto cover = build_cover(s, k, 0, b);
      if (!cover.complete()) continue;
      ++checked;
      std::map<Point, int> fiber;
      for (Point x : endpoint_map(cover)) ++fiber[x];
      HomotopyContext ctx(s, k, 0);
      auto order = ctx.group_order();
      REQUIRE(order.has_value());
      for (const auto& [x, count] : fiber) CHECK(count == static_cast<int>(*order));
      CHECK(fiber.size() == chain_components(s, k).blocks[static_cast<std::size_t>(chain_components(s, k).block_of[0])].size());
      CHECK(verify_endpoint_ucm(s, k, cover).verdict == UcmVerdict::Ucm);
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("DOT export") {
  auto cover = build_cover(line4(), 1, 0, {});
  auto dot = to_dot(cover);
  CHECK(dot.find("graph cover {") == 0);
  CHECK(dot.find("v0 -- v1") != std::string::npos);
  CHECK(dot.find("label=\"0.1.2\"") != std::string::npos);
}
