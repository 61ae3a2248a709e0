#include "ucover/action.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace ucover {

namespace {

Permutation compose(const Permutation& g, const Permutation& h) {
  Permutation out(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) out[x] = g[static_cast<std::size_t>(h[x])];
  return out;
}

Permutation identity_perm(int n) {
  Permutation id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  return id;
}

bool is_permutation(const Permutation& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Point x : p) {
    if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = true;
  }
  return true;
}

/// Orbits of the group generated by `perms` on n points.
Partition orbit_partition(int n, const std::vector<Permutation>& perms) {
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  for (Point s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    label[static_cast<std::size_t>(s)] = s;
    std::deque<Point> queue{s};
    while (!queue.empty()) {
      const Point x = queue.front();
      queue.pop_front();
      for (const auto& p : perms) {
        const Point y = p[static_cast<std::size_t>(x)];
        if (label[static_cast<std::size_t>(y)] >= 0) continue;
        label[static_cast<std::size_t>(y)] = s;
        queue.push_back(y);
      }
    }
  }
  return Partition::from_labels(label);
}

/// Blocks of `blocks` with the images of every scale.
FilteredSpace block_space(const FilteredSpace& space, const Partition& blocks) {
  const int nb = static_cast<int>(blocks.num_blocks());
  std::vector<std::string> names;
  for (const auto& block : blocks.blocks) {
    std::string name;
    for (Point x : block) name += (name.empty() ? "" : "+") + space.name(x);
    names.push_back(std::move(name));
  }
  std::vector<Relation> scales;
  for (const auto& rel : space.scales()) scales.push_back(rel.image(blocks.block_of, nb));
  const bool hausdorff = scales.empty() || scales.back().is_diagonal();
  return FilteredSpace(std::move(names), std::move(scales), hausdorff);
}

struct Preservation {
  std::vector<int> forward, backward;
  bool ok = false;
};

/// For a point map a -> b: per scale of b a scale of a mapped inside it, and
/// per scale of a a scale of b pulling back inside it.
Preservation preservation(const FilteredSpace& a, const FilteredSpace& b, const std::vector<Point>& map) {
  Preservation p;
  for (const auto& target : b.scales()) {
    int found = 0;
    for (int j = 1; j <= a.num_scales() && !found; ++j)
      if (a.scale(j).image(map, b.size()).subset_of(target)) found = j;
    p.forward.push_back(found);
  }
  for (const auto& source : a.scales()) {
    int found = 0;
    for (int s = 1; s <= b.num_scales() && !found; ++s)
      if (Relation::preimage(b.scale(s), map).subset_of(source)) found = s;
    p.backward.push_back(found);
  }
  auto all = [](const std::vector<int>& v) { return std::none_of(v.begin(), v.end(), [](int w) { return w == 0; }); };
  p.ok = all(p.forward) && all(p.backward);
  return p;
}

bool bijective(const std::vector<Point>& map, int target_size) {
  if (static_cast<int>(map.size()) != target_size) return false;
  std::vector<bool> hit(static_cast<std::size_t>(target_size), false);
  for (Point y : map) {
    if (y < 0 || y >= target_size || hit[static_cast<std::size_t>(y)]) return false;
    hit[static_cast<std::size_t>(y)] = true;
  }
  return true;
}

/// Threads of a group tower, indexed by the last coordinate.
std::vector<std::vector<int>> group_threads(const FiniteGroupTower& t) {
  const int n = static_cast<int>(t.groups.size());
  std::vector<std::vector<int>> out;
  for (int last = 0; last < t.groups.back().order(); ++last) {
    std::vector<int> thread(static_cast<std::size_t>(n));
    thread.back() = last;
    for (int i = n - 1; i >= 1; --i)
      thread[static_cast<std::size_t>(i - 1)] =
          t.bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(thread[static_cast<std::size_t>(i)])];
    out.push_back(std::move(thread));
  }
  return out;
}

/// Permutation of limit threads by a group thread acting levelwise.
Permutation thread_action(const ActionTower& tower, const LimitSpace& lim, const std::vector<int>& gthread) {
  Permutation perm;
  for (const auto& t : lim.threads) {
    std::vector<Point> moved(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      moved[i] = tower.actions[i][static_cast<std::size_t>(gthread[i])][static_cast<std::size_t>(t[i])];
    const int id = lim.find(moved);
    if (id < 0) throw Error(ErrorCode::InvalidArgument, "group thread does not preserve threads");
    perm.push_back(id);
  }
  return perm;
}

}  // namespace

// ----------------------------------------------------------------- groups

ActionSpec::ActionSpec(FilteredSpace space, std::vector<Permutation> generators, std::vector<Permutation> elements)
    : space_(std::move(space)), generators_(std::move(generators)), elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], static_cast<int>(i));
  faithful_ = true;
  for (std::size_t i = 1; i < elements_.size(); ++i)
    if (elements_[i] == elements_[0]) faithful_ = false;
}

int ActionSpec::index_of(const Permutation& p) const {
  const auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

int ActionSpec::mul(int g, int h) const { return index_of(compose(element(g), element(h))); }

int ActionSpec::inv(int g) const {
  const Permutation& p = element(g);
  Permutation out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[static_cast<std::size_t>(p[x])] = static_cast<Point>(x);
  return index_of(out);
}

FiniteGroup ActionSpec::group() const {
  std::vector<std::vector<int>> table(elements_.size());
  for (int g = 0; g < order(); ++g)
    for (int h = 0; h < order(); ++h) table[static_cast<std::size_t>(g)].push_back(mul(g, h));
  return make_finite_group(std::move(table));
}

ActionSpec close_group(const FilteredSpace& space, std::vector<Permutation> generators, std::size_t order_bound) {
  const int n = space.size();
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (!is_permutation(generators[i], n))
      throw Error(ErrorCode::NotAPermutation, "generator is not a permutation of the points", static_cast<int>(i));
  std::vector<Permutation> elements{identity_perm(n)};
  std::map<Permutation, int> seen{{elements.front(), 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& s : generators) {
      Permutation p = compose(s, elements[head]);
      if (seen.contains(p)) continue;
      if (elements.size() >= order_bound)
        throw Error(ErrorCode::GroupTooLarge, "group exceeds the order bound of " + std::to_string(order_bound));
      seen.emplace(p, static_cast<int>(elements.size()));
      elements.push_back(std::move(p));
    }
  }
  return ActionSpec(space, std::move(generators), std::move(elements));
}

std::vector<int> generated_subgroup(const ActionSpec& action, const std::vector<int>& generators) {
  std::vector<int> out{0};
  std::vector<bool> in(static_cast<std::size_t>(action.order()), false);
  in[0] = true;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (int s : generators) {
      const int p = action.mul(s, out[head]);
      if (in[static_cast<std::size_t>(p)]) continue;
      in[static_cast<std::size_t>(p)] = true;
      out.push_back(p);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> moving_within(const ActionSpec& action, const Relation& e) {
  std::vector<int> out;
  for (int g = 0; g < action.order(); ++g)
    for (Point x = 0; x < action.space().size(); ++x)
      if (e.contains(x, action.act(g, x))) {
        out.push_back(g);
        break;
      }
  return out;
}

SubgroupAtScale subgroup_at_scale(const ActionSpec& action, int k) {
  action.space().check_scale(k);
  SubgroupAtScale s;
  s.scale = k;
  s.movers = moving_within(action, action.space().scale(k));
  s.elements = generated_subgroup(action, s.movers);
  return s;
}

bool is_invariant(const ActionSpec& action, const Relation& e) {
  for (const auto& g : action.generators())
    for (const auto& [x, y] : e.pairs())
      if (!e.contains(g[static_cast<std::size_t>(x)], g[static_cast<std::size_t>(y)])) return false;
  return true;
}

Relation saturate_invariant(const ActionSpec& action, int k) {
  action.space().check_scale(k);
  return saturate_invariant(action, action.space().scale(k));
}

Relation saturate_invariant(const ActionSpec& action, const Relation& e) {
  std::vector<PointPair> pairs;
  for (const auto& g : action.elements())
    for (const auto& [x, y] : e.pairs()) pairs.emplace_back(g[static_cast<std::size_t>(x)], g[static_cast<std::size_t>(y)]);
  return Relation(e.size(), std::move(pairs));
}

// -------------------------------------------------------------- diagnosis

ActionDiagnosis diagnose_action(const ActionSpec& action) {
  const FilteredSpace& space = action.space();
  const int n = space.size();
  const int m = space.num_scales();
  const int order = action.order();
  ActionDiagnosis d;

  std::vector<std::vector<int>> subgroups;
  for (int k = 1; k <= m; ++k) subgroups.push_back(subgroup_at_scale(action, k).elements);
  std::vector<int> inverse;
  for (int g = 0; g < order; ++g) inverse.push_back(action.inv(g));

  for (int a = 1; a <= m; ++a) {
    const Relation& ea = space.scale(a);
    // reach[x][y]: some translate of x is E_a-close to y.
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (Point x = 0; x < n; ++x)
      for (int h = 0; h < order; ++h) {
        const Point hx = action.act(h, x);
        reach[static_cast<std::size_t>(x)][static_cast<std::size_t>(hx)] = true;
        for (Point y : ea.neighbors(hx)) reach[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = true;
      }
    std::vector<bool> row(static_cast<std::size_t>(m), false);
    int witness = 0;
    for (int b = a; b <= m; ++b) {
      const Relation& eb = space.scale(b);
      bool ok = true;
      for (Point x = 0; x < n && ok; ++x) {
        std::vector<Point> close{x};
        close.insert(close.end(), eb.neighbors(x).begin(), eb.neighbors(x).end());
        for (Point z : close)
          for (int g = 0; g < order && ok; ++g)
            if (!reach[static_cast<std::size_t>(x)][static_cast<std::size_t>(action.act(inverse[static_cast<std::size_t>(g)], z))])
              ok = false;
      }
      row[static_cast<std::size_t>(b - 1)] = ok;
      if (ok && !witness) witness = b;
    }
    d.neutral_pairs.push_back(std::move(row));
    d.neutral_witness.push_back(witness);
  }
  d.neutral = std::none_of(d.neutral_witness.begin(), d.neutral_witness.end(), [](int w) { return w == 0; });

  for (int k = 1; k <= m; ++k) {
    std::optional<std::pair<int, Point>> ce;
    for (int g = 1; g < order && !ce; ++g)
      for (Point x = 0; x < n && !ce; ++x)
        if (space.scale(k).contains(x, action.act(g, x))) ce = std::pair{g, x};
    if (!ce && !d.upd_scale) d.upd_scale = k;
    d.upd_counterexample.push_back(ce);
  }
  d.upd = d.upd_scale.has_value();

  for (int a = 1; a <= m; ++a) {
    const Relation& ea = space.scale(a);
    int found = 0;
    for (int b = 1; b <= m && !found; ++b) {
      bool ok = true;
      for (int h : subgroups[static_cast<std::size_t>(b - 1)])
        for (Point x = 0; x < n && ok; ++x) ok = ea.contains(x, action.act(h, x));
      if (ok) found = b;
    }
    d.bounded_orbits_witness.push_back(found);
  }
  d.bounded_orbits =
      std::none_of(d.bounded_orbits_witness.begin(), d.bounded_orbits_witness.end(), [](int w) { return w == 0; });

  for (int k = 1; k <= m; ++k) d.invariant_basis.push_back(saturate_invariant(action, k));
  for (int a = 1; a <= m; ++a) {
    int found = 0;
    for (int b = 1; b <= m && !found; ++b)
      if (d.invariant_basis[static_cast<std::size_t>(b - 1)].subset_of(space.scale(a))) found = b;
    d.equicontinuity_witness.push_back(found);
  }
  d.equicontinuous =
      std::none_of(d.equicontinuity_witness.begin(), d.equicontinuity_witness.end(), [](int w) { return w == 0; });

  for (int a = 1; a <= m; ++a) {
    const Relation& ea = space.scale(a);
    int found = 0;
    for (int b = 1; b <= m && !found; ++b) {
      bool ok = true;
      for (int h : subgroups[static_cast<std::size_t>(b - 1)])
        for (const auto& [x, y] : space.scale(b).pairs())
          if (!ea.contains(action.act(h, x), action.act(h, y))) ok = false;
      if (ok) found = b;
    }
    d.ss_equicontinuity_witness.push_back(found);
  }
  d.ss_equicontinuous = std::none_of(d.ss_equicontinuity_witness.begin(), d.ss_equicontinuity_witness.end(),
                                     [](int w) { return w == 0; });
  return d;
}

// -------------------------------------------------------------- quotients

QuotientAction quotient_at_scale(const ActionSpec& action, int k) {
  const FilteredSpace& space = action.space();
  space.check_scale(k);
  if (!action.faithful()) throw Error(ErrorCode::NotFaithful, "quotients need a faithful action");
  const int n = space.size();
  const int order = action.order();

  QuotientAction q;
  q.scale = k;
  q.entourage = space.scale(k);
  if (!is_invariant(action, q.entourage)) {
    q.entourage = saturate_invariant(action, q.entourage);
    q.saturated = true;
  }
  q.subgroup = generated_subgroup(action, moving_within(action, q.entourage));

  std::vector<Permutation> sub_perms;
  for (int h : q.subgroup) sub_perms.push_back(action.element(h));
  q.orbits = orbit_partition(n, sub_perms);
  q.projection = q.orbits.block_of;
  q.space = block_space(space, q.orbits);

  std::vector<bool> in_sub(static_cast<std::size_t>(order), false);
  for (int h : q.subgroup) in_sub[static_cast<std::size_t>(h)] = true;
  q.normal = true;
  for (int g = 0; g < order && q.normal; ++g)
    for (int h : q.subgroup)
      if (!in_sub[static_cast<std::size_t>(action.mul(action.mul(g, h), action.inv(g)))]) q.normal = false;

  std::vector<int> coset_label;
  for (int g = 0; g < order; ++g) {
    int least = g;
    for (int h : q.subgroup) least = std::min(least, action.mul(g, h));
    coset_label.push_back(least);
  }
  q.cosets = Partition::from_labels(coset_label);
  q.group_projection = q.cosets.block_of;
  if (!q.normal) return q;

  const int nc = static_cast<int>(q.cosets.num_blocks());
  const int no = static_cast<int>(q.orbits.num_blocks());
  std::vector<std::vector<int>> table(static_cast<std::size_t>(nc));
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b)
      table[static_cast<std::size_t>(a)].push_back(q.group_projection[static_cast<std::size_t>(
          action.mul(q.cosets.blocks[static_cast<std::size_t>(a)].front(), q.cosets.blocks[static_cast<std::size_t>(b)].front()))]);
  q.group = make_finite_group(std::move(table));

  q.induced_well_defined = true;
  for (int c = 0; c < nc; ++c) {
    Permutation perm;
    for (int u = 0; u < no; ++u) {
      const Point image = q.projection[static_cast<std::size_t>(
          action.act(q.cosets.blocks[static_cast<std::size_t>(c)].front(), q.orbits.blocks[static_cast<std::size_t>(u)].front()))];
      for (int g : q.cosets.blocks[static_cast<std::size_t>(c)])
        for (Point x : q.orbits.blocks[static_cast<std::size_t>(u)])
          if (q.projection[static_cast<std::size_t>(action.act(g, x))] != image) q.induced_well_defined = false;
      perm.push_back(image);
    }
    q.induced.push_back(std::move(perm));
  }

  q.induced_faithful = true;
  for (int c = 1; c < nc; ++c)
    if (q.induced[static_cast<std::size_t>(c)] == q.induced[0]) q.induced_faithful = false;

  const Relation pushed = q.entourage.image(q.projection, no);
  q.induced_upd = true;
  for (int c = 1; c < nc; ++c)
    for (int u = 0; u < no; ++u)
      if (pushed.contains(u, q.induced[static_cast<std::size_t>(c)][static_cast<std::size_t>(u)])) q.induced_upd = false;

  const Partition whole = orbit_partition(n, action.elements());
  const Partition induced_orbits = orbit_partition(no, q.induced);
  q.orbit_map_consistent = true;
  for (Point x = 0; x < n; ++x)
    if (whole.block_of[static_cast<std::size_t>(x)] !=
        induced_orbits.block_of[static_cast<std::size_t>(q.projection[static_cast<std::size_t>(x)])])
      q.orbit_map_consistent = false;
  return q;
}

FilteredMap orbit_map(const ActionSpec& action) {
  const Partition orbits = orbit_partition(action.space().size(), action.elements());
  return make_map(action.space(), block_space(action.space(), orbits), orbits.block_of);
}

// ----------------------------------------------------------------- towers

ActionTower make_action_tower(FiniteGroupTower groups, SpaceTower spaces, std::vector<std::vector<Permutation>> actions) {
  const int n = spaces.size();
  if (static_cast<int>(groups.groups.size()) != n || static_cast<int>(actions.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "group, space and action towers must have the same length");
  for (int i = 0; i < n; ++i) {
    const FiniteGroup& g = groups.groups[static_cast<std::size_t>(i)];
    const FilteredSpace& x = spaces.spaces[static_cast<std::size_t>(i)];
    const auto& act = actions[static_cast<std::size_t>(i)];
    if (static_cast<int>(act.size()) != g.order())
      throw Error(ErrorCode::DimensionMismatch, "one permutation per group element", i + 1);
    for (const auto& p : act)
      if (!is_permutation(p, x.size())) throw Error(ErrorCode::NotAPermutation, "level action", i + 1);
    if (act[static_cast<std::size_t>(g.identity)] != identity_perm(x.size()))
      throw Error(ErrorCode::InvalidArgument, "identity acts nontrivially", i + 1);
    for (int a = 0; a < g.order(); ++a)
      for (int b = 0; b < g.order(); ++b)
        if (act[static_cast<std::size_t>(g.mul(a, b))] !=
            compose(act[static_cast<std::size_t>(a)], act[static_cast<std::size_t>(b)]))
          throw Error(ErrorCode::InvalidArgument, "level is not a group action", i + 1);
    if (i + 1 == n) continue;
    const auto& phi = spaces.bonding[static_cast<std::size_t>(i)];
    const auto& psi = groups.bonding[static_cast<std::size_t>(i)];
    const auto& upper = actions[static_cast<std::size_t>(i + 1)];
    for (int a = 0; a < groups.groups[static_cast<std::size_t>(i + 1)].order(); ++a)
      for (std::size_t x = 0; x < phi.size(); ++x)
        if (phi[static_cast<std::size_t>(upper[static_cast<std::size_t>(a)][x])] !=
            act[static_cast<std::size_t>(psi[static_cast<std::size_t>(a)])][static_cast<std::size_t>(phi[x])])
          throw Error(ErrorCode::InvalidArgument, "bonding maps do not intertwine the actions", i + 1);
  }
  return ActionTower{std::move(groups), std::move(spaces), std::move(actions)};
}

ActionTowerReport action_tower_verify(const ActionSpec& action, std::size_t product_bound) {
  ActionTowerReport r;
  const FilteredSpace& space = action.space();
  const ActionDiagnosis d = diagnose_action(action);
  if (!action.faithful()) r.hypothesis_unmet.emplace_back("faithful");
  if (!d.equicontinuous) r.hypothesis_unmet.emplace_back("equicontinuity");
  if (!space.hausdorff()) r.hypothesis_unmet.emplace_back("hausdorff");
  if (!d.bounded_orbits) r.hypothesis_unmet.emplace_back("bounded-orbits");
  if (!r.hypothesis_unmet.empty()) return r;

  const int n = space.size();
  const int m = space.num_scales();
  for (int k = 1; k <= m; ++k) r.levels.push_back(quotient_at_scale(action, k));
  auto level = [&](int k) -> const QuotientAction& { return r.levels[static_cast<std::size_t>(k - 1)]; };

  std::vector<FiniteGroup> groups;
  std::vector<std::vector<int>> psi;
  std::vector<FilteredSpace> spaces;
  std::vector<std::vector<Point>> phi;
  std::vector<std::vector<Permutation>> actions;
  for (int k = 1; k <= m; ++k) {
    groups.push_back(level(k).group);
    spaces.push_back(level(k).space);
    actions.push_back(level(k).induced);
    if (k == 1) continue;
    std::vector<int> p;
    for (const auto& coset : level(k).cosets.blocks) p.push_back(level(k - 1).group_projection[static_cast<std::size_t>(coset.front())]);
    psi.push_back(std::move(p));
    std::vector<Point> f;
    for (const auto& orbit : level(k).orbits.blocks) f.push_back(level(k - 1).projection[static_cast<std::size_t>(orbit.front())]);
    phi.push_back(std::move(f));
  }
  r.tower = make_action_tower(make_finite_group_tower(std::move(groups), std::move(psi)),
                              make_space_tower(std::move(spaces), std::move(phi)), std::move(actions));
  const ActionTower& tower = *r.tower;

  // (a) the group embeds in, and here fills, the thread group.
  const auto gthreads = group_threads(tower.groups);
  auto group_thread_of = [&](int g) {
    std::vector<int> t;
    for (int k = 1; k <= m; ++k) t.push_back(level(k).group_projection[static_cast<std::size_t>(g)]);
    return t;
  };
  std::vector<Point> gmap;
  for (int g = 0; g < action.order(); ++g) {
    const auto t = group_thread_of(g);
    gmap.push_back(t.back());
    if (gthreads[static_cast<std::size_t>(t.back())] != t) gmap.back() = -1;
  }
  r.group_homomorphism = std::find(gmap.begin(), gmap.end(), -1) == gmap.end();
  for (int a = 0; a < action.order() && r.group_homomorphism; ++a)
    for (int b = 0; b < action.order(); ++b) {
      const auto ta = group_thread_of(a);
      const auto tb = group_thread_of(b);
      const auto tab = group_thread_of(action.mul(a, b));
      for (int k = 1; k <= m; ++k)
        if (tower.groups.groups[static_cast<std::size_t>(k - 1)].mul(ta[static_cast<std::size_t>(k - 1)],
                                                                     tb[static_cast<std::size_t>(k - 1)]) !=
            tab[static_cast<std::size_t>(k - 1)])
          r.group_homomorphism = false;
    }
  {
    std::vector<Point> sorted = gmap;
    std::sort(sorted.begin(), sorted.end());
    r.group_injective = r.group_homomorphism && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
  r.group_bijective = r.group_homomorphism && bijective(gmap, static_cast<int>(gthreads.size()));
  r.part_a = r.group_homomorphism && r.group_injective && r.group_bijective;

  // (b) the space embeds in, and here fills, the thread space.
  const LimitSpace lx = assemble_limit_space(tower.spaces, product_bound);
  std::vector<Point> xmap;
  for (Point x = 0; x < n; ++x) {
    std::vector<Point> t;
    for (int k = 1; k <= m; ++k) t.push_back(level(k).projection[static_cast<std::size_t>(x)]);
    xmap.push_back(lx.find(t));
  }
  r.space_bijective = bijective(xmap, lx.space.size());
  r.space_entourages_preserved = r.space_bijective && preservation(space, lx.space, xmap).ok;
  r.equivariant = r.space_bijective && r.group_homomorphism;
  for (int g = 0; g < action.order() && r.equivariant; ++g) {
    const auto tg = gthreads[static_cast<std::size_t>(gmap[static_cast<std::size_t>(g)])];
    const Permutation moved = thread_action(tower, lx, tg);
    for (Point x = 0; x < n; ++x)
      if (moved[static_cast<std::size_t>(xmap[static_cast<std::size_t>(x)])] != xmap[static_cast<std::size_t>(action.act(g, x))])
        r.equivariant = false;
  }
  r.part_b = r.space_bijective && r.space_entourages_preserved && r.equivariant;

  // (c) quotient of the limit against the limit of the quotients.
  std::vector<Permutation> limit_perms;
  for (const auto& t : gthreads) limit_perms.push_back(thread_action(tower, lx, t));
  const Partition limit_orbits = orbit_partition(lx.space.size(), limit_perms);
  const FilteredSpace quotient_of_limit = block_space(lx.space, limit_orbits);

  std::vector<Partition> level_orbits;
  std::vector<FilteredSpace> yspaces;
  std::vector<std::vector<Point>> ybonding;
  for (int k = 1; k <= m; ++k) {
    level_orbits.push_back(orbit_partition(tower.spaces.spaces[static_cast<std::size_t>(k - 1)].size(),
                                           tower.actions[static_cast<std::size_t>(k - 1)]));
    yspaces.push_back(block_space(tower.spaces.spaces[static_cast<std::size_t>(k - 1)], level_orbits.back()));
    if (k == 1) continue;
    std::vector<Point> f;
    for (const auto& orbit : level_orbits.back().blocks)
      f.push_back(level_orbits[static_cast<std::size_t>(k - 2)].block_of[static_cast<std::size_t>(
          tower.spaces.bonding[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(orbit.front())])]);
    ybonding.push_back(std::move(f));
  }
  const LimitSpace ly = assemble_limit_space(make_space_tower(std::move(yspaces), std::move(ybonding)), product_bound);
  auto orbit_thread = [&](const std::vector<Point>& t) {
    std::vector<Point> y;
    for (int k = 1; k <= m; ++k)
      y.push_back(level_orbits[static_cast<std::size_t>(k - 1)].block_of[static_cast<std::size_t>(t[static_cast<std::size_t>(k - 1)])]);
    return ly.find(y);
  };

  r.quotient_well_defined = true;
  std::vector<Point> cmap;
  for (const auto& block : limit_orbits.blocks) {
    const int id = orbit_thread(lx.threads[static_cast<std::size_t>(block.front())]);
    for (Point t : block)
      if (orbit_thread(lx.threads[static_cast<std::size_t>(t)]) != id) r.quotient_well_defined = false;
    cmap.push_back(id);
  }
  {
    std::vector<Point> sorted = cmap;
    std::sort(sorted.begin(), sorted.end());
    r.quotient_injective = std::find(sorted.begin(), sorted.end(), -1) == sorted.end() &&
                           std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }

  // Surjectivity by the telescoping construction, starting from
  // representatives that alternate between the least and greatest member of
  // each orbit so the defects are not all trivial.
  r.quotient_surjective = true;
  for (int yid = 0; yid < ly.space.size(); ++yid) {
    const auto& y = ly.threads[static_cast<std::size_t>(yid)];
    TelescopedThread tt;
    tt.orbit = yid;
    for (int k = 1; k <= m; ++k) {
      const auto& members =
          level_orbits[static_cast<std::size_t>(k - 1)].blocks[static_cast<std::size_t>(y[static_cast<std::size_t>(k - 1)])];
      tt.representatives.push_back(k % 2 ? members.front() : members.back());
    }
    bool found_all = true;
    for (int k = 1; k < m; ++k) {
      const Point down = tower.spaces.bonding[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(tt.representatives[static_cast<std::size_t>(k)])];
      const auto& act = tower.actions[static_cast<std::size_t>(k - 1)];
      int defect = -1;
      for (int c = 0; c < static_cast<int>(act.size()) && defect < 0; ++c)
        if (act[static_cast<std::size_t>(c)][static_cast<std::size_t>(tt.representatives[static_cast<std::size_t>(k - 1)])] == down)
          defect = c;
      if (defect < 0) found_all = false;
      tt.defects.push_back(std::max(defect, 0));
    }
    if (found_all) {
      tt.corrections = telescoping_backward(tower.groups, tt.defects, ProductForm::LeftInverse);
      for (int k = 1; k <= m; ++k)
        tt.corrected.push_back(tower.actions[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(
            tt.corrections[static_cast<std::size_t>(k - 1)])][static_cast<std::size_t>(tt.representatives[static_cast<std::size_t>(k - 1)])]);
      const int thread = lx.find(tt.corrected);
      tt.verified = telescoping_identity_holds(tower.groups, tt.defects, tt.corrections, ProductForm::LeftInverse) &&
                    thread >= 0 && orbit_thread(lx.threads[static_cast<std::size_t>(thread)]) == yid;
    }
    if (!tt.verified) r.quotient_surjective = false;
    r.telescoped.push_back(std::move(tt));
  }
  r.quotient_entourages_preserved = r.quotient_well_defined && r.quotient_injective && r.quotient_surjective &&
                                    preservation(quotient_of_limit, ly.space, cmap).ok;
  r.part_c = r.quotient_well_defined && r.quotient_injective && r.quotient_surjective && r.quotient_entourages_preserved;

  // (d)
  r.bondings_surjective = lim1_verdict(tower.groups).trivial;
  r.part_d = r.bondings_surjective;
  r.ok = r.part_a && r.part_b && r.part_c && r.part_d;
  return r;
}

LimitActionReport limit_action_verify(const ActionTower& tower, std::size_t product_bound) {
  LimitActionReport r;
  const int n = tower.spaces.size();

  std::vector<FilteredSpace> discrete;
  for (const auto& g : tower.groups.groups) discrete.emplace_back(g.names, std::vector<Relation>{Relation(g.order())}, true);
  const SpaceTower as_sets = make_space_tower(std::move(discrete), tower.groups.bonding);
  if (!strong_ml_check(as_sets, product_bound).ok) r.hypothesis_unmet.emplace_back("strong-ml");
  if (!r.hypothesis_unmet.empty()) return r;

  bool levels_neutral = true, levels_bounded = true, levels_hausdorff = true;
  for (int i = 0; i < n; ++i) {
    const ActionSpec level = close_group(tower.spaces.spaces[static_cast<std::size_t>(i)], tower.actions[static_cast<std::size_t>(i)]);
    r.level_diagnoses.push_back(diagnose_action(level));
    levels_neutral = levels_neutral && r.level_diagnoses.back().neutral;
    levels_bounded = levels_bounded && r.level_diagnoses.back().bounded_orbits;
    levels_hausdorff = levels_hausdorff && level.space().hausdorff();
  }

  r.limit_space = assemble_limit_space(tower.spaces, product_bound);
  std::vector<Permutation> perms;
  for (const auto& t : group_threads(tower.groups)) perms.push_back(thread_action(tower, *r.limit_space, t));
  r.limit_action = close_group(r.limit_space->space, std::move(perms));
  r.limit_diagnosis = diagnose_action(*r.limit_action);
  r.projection = verify_gucm(orbit_map(*r.limit_action));

  const bool lim1_trivial = lim1_verdict(tower.groups).trivial;
  r.neutral_implication = !levels_neutral || r.limit_diagnosis->neutral;
  r.bounded_orbits_implication = !levels_bounded || r.limit_diagnosis->bounded_orbits;
  r.gucm_implication = !(levels_neutral && levels_bounded && levels_hausdorff && lim1_trivial) || r.projection->gucm;
  r.ok = r.neutral_implication && r.bounded_orbits_implication && r.gucm_implication;
  return r;
}

}  // namespace ucover
