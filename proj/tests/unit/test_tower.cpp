#include <array>
#include <functional>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_inputs.hpp"
#include "ucover/tower.hpp"

using namespace ucover;
using namespace ucover::testing;

namespace {

std::vector<Point> identity_points(int n) {
  std::vector<Point> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

SpaceTower constant_tower(const FilteredSpace& x, int n) {
  std::vector<FilteredSpace> spaces(static_cast<std::size_t>(n), x);
  std::vector<std::vector<Point>> bonding(static_cast<std::size_t>(n - 1), identity_points(x.size()));
  return make_space_tower(spaces, bonding);
}

FilteredSpace discrete(std::vector<std::string> names) {
  const int n = static_cast<int>(names.size());
  return FilteredSpace(std::move(names), {Relation(n)}, true);
}

/// Threads by filtering the full product.
std::set<std::vector<Point>> product_threads(const SpaceTower& t) {
  std::set<std::vector<Point>> out;
  std::vector<Point> cur;
  std::function<void(int)> rec = [&](int i) {
    if (i == t.size()) {
      for (int k = 1; k < t.size(); ++k)
        if (t.bonding[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(cur[static_cast<std::size_t>(k)])] !=
            cur[static_cast<std::size_t>(k - 1)])
          return;
      out.insert(cur);
      return;
    }
    for (Point x = 0; x < t.spaces[static_cast<std::size_t>(i)].size(); ++x) {
      cur.push_back(x);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

AbelianGroupInv z() { return AbelianGroupInv{1, {}}; }

TowerAb doubling_tower(Stabilization s = Stabilization::None) {
  return make_tower_ab({z(), z(), z()}, {IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{2}})}, s);
}

IntVector iv(std::initializer_list<long long> xs) {
  IntVector v;
  for (long long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("limit of a constant tower is the space") {
  auto lim = assemble_limit_space(constant_tower(hexagon(), 3));
  CHECK(lim.space.size() == 6);
  CHECK(lim.space.scales() == hexagon().scales());
  CHECK(lim.schedule.front() == std::pair{1, 1});
  for (const auto& p : lim.projections) CHECK(p.assignment == identity_points(6));
}

TEST_CASE("limit of the mod-3 tower is the graph of the map") {
  auto t = make_space_tower({triangle(), hexagon_r1()}, {mod3_map()});
  auto lim = assemble_limit_space(t);
  REQUIRE(lim.threads.size() == 6);
  for (Point x = 0; x < 6; ++x) CHECK(lim.threads[static_cast<std::size_t>(x)] == std::vector<Point>{x % 3, x});
  CHECK(lim.space.name(4) == "(1,4)");
  CHECK(lim.find({1, 4}) == 4);
  CHECK(lim.find({0, 4}) == -1);
}

TEST_CASE("empty limits and guards") {
  FilteredSpace empty(std::vector<std::string>{}, {Relation(0)}, true);
  auto t = make_space_tower({triangle(), empty}, {{}});
  auto lim = assemble_limit_space(t);
  CHECK(lim.empty());
  CHECK(lim.space.size() == 0);
  CHECK_THROWS_AS(assemble_limit_space(constant_tower(hexagon(), 3), 10), Error);
  CHECK_THROWS_AS(make_space_tower({hexagon_r1()}, {mod3_map()}), Error);
  // The identity from the coarse hexagon onto the fine one is not continuous.
  FilteredSpace coarse = from_metric(cycle_distances(6), {2});
  CHECK_THROWS_AS(make_space_tower({hexagon_r1(), coarse}, {identity_points(6)}), Error);
}

TEST_CASE("threads agree with the filtered product") {
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_space_tower(rng, 1 + trial % 4, 2 + trial % 5, 1 + trial % 3);
    auto lim = assemble_limit_space(t);
    std::set<std::vector<Point>> got(lim.threads.begin(), lim.threads.end());
    CHECK(got == product_threads(t));
    for (int i = 1; i < t.size(); ++i)
      for (std::size_t th = 0; th < lim.threads.size(); ++th)
        CHECK(t.bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(
                  lim.projections[static_cast<std::size_t>(i)].assignment[th])] ==
              lim.projections[static_cast<std::size_t>(i - 1)].assignment[th]);
    const auto& sc = lim.space.scales();
    for (std::size_t s = 0; s + 1 < sc.size(); ++s) CHECK(!(sc[s] == sc[s + 1]));
    CHECK(strong_ml_check(t).ok);
  }
}

TEST_CASE("strong Mittag-Leffler") {
  auto id = strong_ml_check(constant_tower(hexagon(), 3));
  CHECK(id.ok);
  CHECK(!id.certified);
  CHECK(id.indices[0].witness == 2);
  CHECK(id.indices[2].witness == 3);

  // {a} <- {a, b} <- {a}
  auto t = make_space_tower({discrete({"a"}), discrete({"a", "b"}), discrete({"a"})}, {{0, 0}, {0}});
  auto r = strong_ml_check(t);
  CHECK(r.ok);
  CHECK(r.indices[1].witness == 3);
  CHECK(r.indices[1].equal);
  CHECK(r.indices[0].witness == 2);

  CHECK(strong_ml_check(make_space_tower({hexagon()}, {})).ok);
}

TEST_CASE("reconstruction from fiber quotients") {
  auto mod3 = make_map(hexagon_r1(), triangle(), mod3_map());
  auto r = quotient_tower_reconstruct(mod3);
  CHECK(r.hypothesis_unmet.empty());
  CHECK(r.ok);
  CHECK(r.q == identity_points(6));
  CHECK(r.levels[0].blocks.num_blocks() == 6);

  auto l4 = quotient_tower_reconstruct(identity_map(line4()));
  CHECK(l4.ok);
  CHECK(l4.q == identity_points(4));
  CHECK(l4.cube_witness == std::vector<int>{2, 2});

  FilteredSpace point({"*"}, {Relation(1)}, true);
  auto c = quotient_tower_reconstruct(make_map(hexagon(), point, std::vector<Point>(6, 0)));
  CHECK(!c.hypothesis_unmet.empty());
  CHECK(!c.ok);

  Rng rng(47);
  int passed = 0;
  for (int t = 0; t < 80; ++t) {
    auto f = random_factorable_map(rng);
    auto rr = quotient_tower_reconstruct(f);
    if (!rr.hypothesis_unmet.empty()) continue;
    ++passed;
    CHECK(rr.injective);
    CHECK(rr.surjective);
    CHECK(rr.entourages_preserved);
    CHECK(rr.limit_map_matches);
  }
  CHECK(passed > 20);
}

TEST_CASE("telescoping on small towers") {
  auto id = make_tower_ab({z(), z(), z(), z()}, {IntMatrix::from_rows({{1}}), IntMatrix::from_rows({{1}}),
                                                 IntMatrix::from_rows({{1}})});
  auto f = telescoping_solve(id, {iv({1}), iv({1}), iv({1})}, TelescopingMode::Forward);
  CHECK(f.solved);
  CHECK(f.verified);
  CHECK(f.h == std::vector<IntVector>{iv({0}), iv({-1}), iv({-2}), iv({-3})});

  auto dbl = doubling_tower();
  auto fw = telescoping_solve(dbl, {iv({1}), iv({0})}, TelescopingMode::Forward);
  CHECK(!fw.solved);
  CHECK(fw.unsolvable_step == 1);
  auto bw = telescoping_solve(dbl, {iv({1}), iv({0})}, TelescopingMode::Backward);
  CHECK(bw.solved);
  CHECK(bw.verified);
  CHECK(bw.h == std::vector<IntVector>{iv({1}), iv({0}), iv({0})});
  CHECK(lim1_transform(dbl, {iv({1}), iv({0})}, bw.h) == bw.h);
  CHECK_THROWS_AS(lim1_transform(dbl, {iv({1}), iv({0})}, {iv({0}), iv({0}), iv({0})}), Error);

  // Z/4 <- Z/4 by doubling; g = (1) needs 2 h_2 = -1 in Z/4.
  AbelianGroupInv z4{0, {Integer(4)}};
  auto t4 = make_tower_ab({z4, z4}, {IntMatrix::from_rows({{2}})});
  CHECK(!telescoping_solve(t4, {iv({1})}, TelescopingMode::Forward).solved);
  auto ok4 = telescoping_solve(t4, {iv({2})}, TelescopingMode::Forward);
  CHECK(ok4.solved);
  CHECK(ok4.verified);
}

TEST_CASE("towers are validated") {
  AbelianGroupInv z4{0, {Integer(4)}};
  AbelianGroupInv z2{0, {Integer(2)}};
  // Z/2 -> Z/4 sending the generator to 1 is not well defined.
  CHECK_THROWS_AS(make_tower_ab({z4, z2}, {IntMatrix::from_rows({{1}})}), Error);
  CHECK_NOTHROW(make_tower_ab({z4, z2}, {IntMatrix::from_rows({{2}})}));
  CHECK_THROWS_AS(make_tower_ab({z(), z()}, {IntMatrix::from_rows({{1, 0}})}), Error);
  CHECK_THROWS_AS(make_tower_ab({AbelianGroupInv{0, {Integer(4), Integer(2)}}}, {}), Error);
  CHECK_THROWS_AS(make_tower_ab({z2, z()}, {IntMatrix::from_rows({{1}})}, Stabilization::RepeatLast), Error);
}

TEST_CASE("backward telescoping always verifies") {
  Rng rng(53);
  for (int t = 0; t < 60; ++t) {
    auto tower = random_surjective_tower(rng, 2 + t % 4);
    std::vector<IntVector> g;
    for (int i = 1; i < tower.size(); ++i) {
      IntVector v;
      for (std::size_t c = 0; c < tower.groups[static_cast<std::size_t>(i - 1)].num_coordinates(); ++c)
        v.emplace_back(static_cast<int>(rng() % 11) - 5);
      g.push_back(v);
    }
    auto bw = telescoping_solve(tower, g, TelescopingMode::Backward);
    CHECK(bw.verified);
    // Surjective bondings make every forward step solvable.
    auto fw = telescoping_solve(tower, g, TelescopingMode::Forward);
    CHECK(fw.solved);
    CHECK(fw.verified);
  }
}

TEST_CASE("lim1 verdicts") {
  auto id = make_tower_ab({z(), z()}, {IntMatrix::from_rows({{1}})});
  auto v = lim1_verdict(id);
  CHECK(v.trivial);
  CHECK(v.certificate == "surjectivity");

  auto none = lim1_verdict(doubling_tower());
  CHECK(!none.trivial);
  CHECK(none.first_index == 1);
  auto rep = lim1_verdict(doubling_tower(Stabilization::RepeatLast));
  CHECK(!rep.trivial);
  CHECK(rep.first_index == 1);
  CHECK(lim1_verdict(doubling_tower(Stabilization::BijectionsBeyond)).certificate == "mittag-leffler");

  // Z/2 <- Z <- Z with projection then doubling: images in Z/2 are 0 from
  // depth 3 on, images in Z keep shrinking.
  AbelianGroupInv z2{0, {Integer(2)}};
  auto proj = make_tower_ab({z2, z(), z()}, {IntMatrix::from_rows({{1}}), IntMatrix::from_rows({{2}})},
                            Stabilization::RepeatLast);
  auto pv = lim1_verdict(proj);
  CHECK(!pv.trivial);
  CHECK(pv.first_index == 2);

  // Doubling on Z/4 dies after two steps.
  AbelianGroupInv z4{0, {Integer(4)}};
  auto dies = make_tower_ab({z4, z4}, {IntMatrix::from_rows({{2}})}, Stabilization::RepeatLast);
  auto dv = lim1_verdict(dies);
  CHECK(dv.trivial);
  CHECK(dv.certificate == "mittag-leffler");
  CHECK(dv.stable_from == std::optional<int>(4));

  CHECK(image_lattice(doubling_tower(), 3, 1) == IntMatrix::from_rows({{4}}));
}

TEST_CASE("surjective towers certify trivial lim1") {
  Rng rng(59);
  for (int t = 0; t < 60; ++t) {
    auto tower = random_surjective_tower(rng, 2 + t % 4);
    for (std::size_t i = 0; i < tower.bonding.size(); ++i) {
      const auto& g = tower.groups[i];
      oracle::Matrix m;
      const auto& b = tower.bonding[i];
      for (std::size_t r = 0; r < b.rows(); ++r) {
        std::vector<Integer> row;
        for (std::size_t c = 0; c < b.cols(); ++c) row.push_back(b(r, c));
        for (std::size_t c = 0; c < b.rows(); ++c)
          row.push_back(c == r && r >= g.rank ? g.torsion[r - g.rank] : Integer(0));
        m.push_back(row);
      }
      auto f = oracle::invariant_factors_by_minors(m);
      CHECK(f.size() == b.rows());
      for (const auto& d : f) CHECK(d == 1);
    }
    auto v = lim1_verdict(tower);
    CHECK(v.trivial);
    CHECK(v.certificate == "surjectivity");
  }
}

TEST_CASE("finite group towers") {
  auto cyclic = [](int n) {
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    return make_finite_group(t);
  };
  // S3 as permutations of {0,1,2}, sign onto Z/2.
  std::vector<std::array<int, 3>> perms{{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] = perms[a][static_cast<std::size_t>(perms[b][static_cast<std::size_t>(i)])];
      table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  auto s3 = make_finite_group(table);
  CHECK(s3.order() == 6);
  CHECK_THROWS_AS(make_finite_group({{0, 1}, {0, 1}}), Error);

  auto tower = make_finite_group_tower({cyclic(2), s3, s3}, {{0, 1, 1, 1, 0, 0}, {0, 1, 2, 3, 4, 5}});
  CHECK_THROWS_AS(make_finite_group_tower({cyclic(2), s3}, {{0, 1, 0, 1, 0, 0}}), Error);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 6; ++b)
      for (auto form : {ProductForm::RightInverse, ProductForm::LeftInverse}) {
        std::vector<int> g{a, b};
        auto h = telescoping_backward(tower, g, form);
        CHECK(telescoping_identity_holds(tower, g, h, form));
        CHECK(h.back() == 0);
      }
  for (int b = 0; b < 6; ++b) {
    std::vector<int> g{1, b};
    auto h = lim1_transform(tower, g);
    CHECK(telescoping_identity_holds(tower, g, h, ProductForm::LeftInverse));
  }
  CHECK(lim1_verdict(tower).certificate == "surjectivity");
  auto into = make_finite_group_tower({cyclic(4), cyclic(2)}, {{0, 2}});
  auto v = lim1_verdict(into);
  CHECK(!v.trivial);
  CHECK(v.first_index == 1);
}

TEST_CASE("limits of compatible maps") {
  auto x = constant_tower(hexagon_r1(), 3);
  auto r = tower_map_limits(x, triangle(), {mod3_map(), mod3_map(), mod3_map()});
  CHECK(r.hypothesis_unmet.empty());
  CHECK(r.limit_map.assignment == mod3_map());
  CHECK(r.generates);
  CHECK(r.lifts);
  CHECK(r.implication_holds);

  auto ids = tower_map_limits(constant_tower(line4(), 2), line4(), {identity_points(4), identity_points(4)});
  CHECK(ids.generates);
  CHECK(ids.lifts);
  CHECK(ids.strongly_unique);

  CHECK_THROWS_AS(tower_map_limits(x, triangle(), {mod3_map(), mod3_map(), {1, 2, 0, 1, 2, 0}}), Error);

  auto y = constant_tower(triangle(), 3);
  auto two = tower_map_limits(x, y, {mod3_map(), mod3_map(), mod3_map()});
  CHECK(two.hypothesis_unmet.empty());
  CHECK(two.unique);
  CHECK(two.strongly_unique);
  CHECK(two.surjective);
  CHECK(two.implication_holds);

  // Both towers are {a} <- {a,b}; the maps send everything to a, so the
  // limit map misses the thread through b.
  const FilteredSpace one({"a"}, {Relation(1)}, true);
  const FilteredSpace pair({"a", "b"}, {Relation(2)}, true);
  auto a_b = make_space_tower({one, pair}, {{0, 0}});
  auto miss = tower_map_limits(a_b, a_b, {{0}, {0, 0}});
  CHECK_FALSE(miss.surjective);
}

TEST_CASE("limit maps keep verified properties") {
  Rng rng(61);
  int generating = 0;
  for (int t = 0; t < 60; ++t) {
    auto x = random_space_tower(rng, 1 + t % 3, 3 + t % 5, 1 + t % 3);
    FilteredMap top = pushforward_map(rng, x.spaces.front(), 1 + static_cast<int>(rng() % static_cast<unsigned>(x.spaces.front().size())));
    std::vector<std::vector<Point>> maps;
    for (int i = 1; i <= x.size(); ++i) {
      std::vector<Point> m;
      for (Point p : x.composite(i, 1)) m.push_back(top(p));
      maps.push_back(m);
    }
    auto r = tower_map_limits(x, top.target, maps);
    CHECK(r.implication_holds);
    if (std::find(r.hypothesis_unmet.begin(), r.hypothesis_unmet.end(), "generates") == r.hypothesis_unmet.end())
      ++generating;
  }
  CHECK(generating > 0);
}
