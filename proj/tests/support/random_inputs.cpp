#include "random_inputs.hpp"

#include <algorithm>

namespace ucover::testing {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

FilteredSpace random_space(Rng& rng, int n, int scales, double density, bool diagonal_last) {
  std::vector<PointPair> pairs;
  for (Point a = 0; a < n; ++a)
    for (Point b = a + 1; b < n; ++b)
      if (coin(rng, density)) pairs.emplace_back(a, b);
  std::vector<Relation> rels;
  for (int s = 0; s < scales; ++s) {
    if (s > 0) {
      std::vector<PointPair> kept;
      for (const auto& p : pairs)
        if (coin(rng, 0.6)) kept.push_back(p);
      pairs = std::move(kept);
    }
    if (diagonal_last && s + 1 == scales) pairs.clear();
    rels.emplace_back(n, pairs);
  }
  const bool hausdorff = rels.back().is_diagonal();
  return FilteredSpace(default_names(n), std::move(rels), hausdorff);
}

FilteredMap voltage_cover(Rng& rng, const FilteredSpace& base, int sheets, int pulled) {
  const int nb = base.size();
  const int n = nb * sheets;
  auto id = [&](Point a, int i) { return a * sheets + ((i % sheets) + sheets) % sheets; };
  std::vector<int> voltage;
  for (std::size_t e = 0; e < base.scale(1).pairs().size(); ++e) voltage.push_back(uniform(rng, 0, sheets - 1));

  std::vector<Relation> rels;
  for (int k = 1; k <= base.num_scales(); ++k) {
    std::vector<PointPair> pairs;
    const auto& coarse = base.scale(1).pairs();
    for (std::size_t e = 0; e < coarse.size(); ++e) {
      const auto [a, b] = coarse[e];
      if (!base.scale(k).contains(a, b)) continue;
      for (int i = 0; i < sheets; ++i) {
        if (k < pulled) {
          for (int j = 0; j < sheets; ++j) pairs.emplace_back(id(a, i), id(b, j));
        } else {
          pairs.emplace_back(id(a, i), id(b, i + voltage[e]));
        }
      }
    }
    if (k < pulled)
      for (Point a = 0; a < nb; ++a)
        for (int i = 0; i < sheets; ++i)
          for (int j = i + 1; j < sheets; ++j) pairs.emplace_back(id(a, i), id(a, j));
    rels.emplace_back(n, std::move(pairs));
  }
  const bool hausdorff = rels.back().is_diagonal();
  FilteredSpace source(default_names(n), std::move(rels), hausdorff);
  std::vector<Point> f(static_cast<std::size_t>(n));
  for (Point x = 0; x < n; ++x) f[static_cast<std::size_t>(x)] = x / sheets;
  return make_map(std::move(source), base, std::move(f));
}

FilteredMap pushforward_map(Rng& rng, const FilteredSpace& source, int target_size) {
  const int n = source.size();
  std::vector<Point> f(static_cast<std::size_t>(n));
  std::vector<Point> order(static_cast<std::size_t>(n));
  for (Point x = 0; x < n; ++x) order[static_cast<std::size_t>(x)] = x;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < order.size(); ++i)
    f[static_cast<std::size_t>(order[i])] =
        i < static_cast<std::size_t>(target_size) ? static_cast<Point>(i) : uniform(rng, 0, target_size - 1);
  std::vector<Relation> rels;
  for (const auto& r : source.scales()) rels.push_back(r.image(f, target_size));
  const bool hausdorff = rels.back().is_diagonal();
  FilteredSpace target(default_names(target_size), std::move(rels), hausdorff);
  return make_map(source, std::move(target), std::move(f));
}

FilteredMap random_map(Rng& rng) {
  const int scales = uniform(rng, 1, 3);
  if (coin(rng, 0.5)) {
    const int sheets = uniform(rng, 1, 2);
    const int nb = uniform(rng, 2, 8 / sheets);
    FilteredSpace base = random_space(rng, nb, scales, 0.6, coin(rng, 0.5));
    return voltage_cover(rng, base, sheets, uniform(rng, 1, scales + 1));
  }
  const int n = uniform(rng, 2, 8);
  FilteredSpace source = random_space(rng, n, scales, 0.5, coin(rng, 0.3));
  return pushforward_map(rng, source, uniform(rng, 1, n));
}

FilteredMap random_factorable_map(Rng& rng) {
  for (;;) {
    FilteredMap f = random_map(rng);
    if (check_generates(f).ok && check_chain_lifting(f).ok &&
        check_approx_uniqueness(f, UniquenessMode::Strong).ok)
      return f;
  }
}

SpaceTower random_space_tower(Rng& rng, int levels, int deepest_size, int scales) {
  std::vector<FilteredSpace> spaces{random_space(rng, deepest_size, scales, 0.5, coin(rng, 0.5))};
  std::vector<std::vector<Point>> bonding;
  for (int l = 1; l < levels; ++l) {
    FilteredMap f = pushforward_map(rng, spaces.front(), uniform(rng, 1, spaces.front().size()));
    spaces.insert(spaces.begin(), f.target);
    bonding.insert(bonding.begin(), f.assignment);
  }
  return make_space_tower(std::move(spaces), std::move(bonding));
}

TowerAb random_surjective_tower(Rng& rng, int levels) {
  std::vector<int> ranks{uniform(rng, 1, 2)};
  for (int l = 1; l < levels; ++l) ranks.push_back(ranks.back() + uniform(rng, 0, 1));
  std::vector<AbelianGroupInv> groups;
  for (int r : ranks) groups.push_back(AbelianGroupInv{static_cast<std::size_t>(r), {}});
  const bool torsion = coin(rng, 0.5);
  if (torsion) {
    // The top group becomes Z^(r-1) + Z/d.
    groups[0].rank -= 1;
    groups[0].torsion = {Integer(uniform(rng, 2, 6))};
  }
  std::vector<IntMatrix> bonding;
  for (int l = 0; l + 1 < levels; ++l) {
    const auto rows = static_cast<std::size_t>(ranks[static_cast<std::size_t>(l)]);
    const auto cols = static_cast<std::size_t>(ranks[static_cast<std::size_t>(l + 1)]);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, -3, 3);
    // U m V = D; replacing D by [I | 0] gives an onto matrix.
    const SmithForm s = smith_normal_form(m);
    IntMatrix d(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) d(i, i) = 1;
    IntMatrix onto = s.U_inverse * d * s.V_inverse;
    if (l == 0 && torsion)
      for (std::size_t j = 0; j < cols; ++j) onto(rows - 1, j) = floor_mod(onto(rows - 1, j), groups[0].torsion[0]);
    bonding.push_back(std::move(onto));
  }
  return make_tower_ab(std::move(groups), std::move(bonding));
}

ActionSpec random_action(Rng& rng) {
  const int sheets = uniform(rng, 1, 3);
  const int orbits = uniform(rng, 1, 3);
  const int n = sheets * orbits;
  Permutation shift;
  for (int p = 0; p < n; ++p) shift.push_back((p / sheets) * sheets + (p % sheets + 1) % sheets);
  std::vector<Permutation> generators{shift};
  if (n <= 4 && coin(rng, 0.5)) {
    Permutation extra(shift.size());
    for (int p = 0; p < n; ++p) extra[static_cast<std::size_t>(p)] = p;
    std::shuffle(extra.begin(), extra.end(), rng);
    generators.push_back(std::move(extra));
  }
  FilteredSpace space = random_space(rng, n, uniform(rng, 1, 3), 0.5, true);
  if (coin(rng, 0.7)) {
    const ActionSpec bare = close_group(space, generators);
    std::vector<Relation> scales;
    for (int k = 1; k <= space.num_scales(); ++k) scales.push_back(saturate_invariant(bare, k));
    space = FilteredSpace(space.names(), std::move(scales), space.hausdorff());
  }
  return close_group(space, std::move(generators));
}

}  // namespace ucover::testing
