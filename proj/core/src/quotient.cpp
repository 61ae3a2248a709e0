#include "ucover/quotient.hpp"

#include <deque>

namespace ucover {

FilteredMap make_map(FilteredSpace source, FilteredSpace target, std::vector<Point> assignment) {
  if (static_cast<int>(assignment.size()) != source.size())
    throw Error(ErrorCode::DimensionMismatch, "assignment must give one value per source point");
  for (std::size_t x = 0; x < assignment.size(); ++x)
    if (assignment[x] < 0 || assignment[x] >= target.size())
      throw Error(ErrorCode::UnknownPoint, "assignment leaves the target", static_cast<int>(x));
  return FilteredMap{std::move(source), std::move(target), std::move(assignment), {}};
}

FilteredMap identity_map(const FilteredSpace& space) {
  std::vector<Point> id(static_cast<std::size_t>(space.size()));
  for (Point x = 0; x < space.size(); ++x) id[static_cast<std::size_t>(x)] = x;
  return make_map(space, space, std::move(id));
}

namespace {

Relation image_of(const FilteredMap& f, int j) {
  return f.source.scale(j).image(f.assignment, f.target.size());
}

/// First pair of `inner` (diagonal included) missing from `image`, where the
/// image's diagonal only covers points hit by f.
std::optional<PointPair> missing_from_image(const Relation& inner, const Relation& image, const std::vector<bool>& hit) {
  for (Point y = 0; y < inner.size(); ++y)
    if (!hit[static_cast<std::size_t>(y)]) return PointPair{y, y};
  for (const auto& pr : inner.pairs())
    if (!image.contains(pr.first, pr.second)) return pr;
  return std::nullopt;
}

std::optional<PointPair> escaping(const Relation& image, const Relation& outer) {
  for (const auto& pr : image.pairs())
    if (!outer.contains(pr.first, pr.second)) return pr;
  return std::nullopt;
}

}  // namespace

GenerationWitness check_generates(const FilteredMap& f) {
  GenerationWitness w;
  const int ms = f.source.num_scales();
  const int mt = f.target.num_scales();
  std::vector<Relation> images;
  for (int j = 1; j <= ms; ++j) images.push_back(image_of(f, j));
  std::vector<bool> hit(static_cast<std::size_t>(f.target.size()), false);
  for (Point y : f.assignment) hit[static_cast<std::size_t>(y)] = true;

  w.ok = true;
  for (int k = 1; k <= mt; ++k) {
    int found = 0;
    if (!f.continuity.empty()) {
      const int j = f.continuity.at(static_cast<std::size_t>(k - 1));
      if (j >= 1 && j <= ms && images[static_cast<std::size_t>(j - 1)].subset_of(f.target.scale(k))) found = j;
    } else {
      for (int j = 1; j <= ms && !found; ++j)
        if (images[static_cast<std::size_t>(j - 1)].subset_of(f.target.scale(k))) found = j;
    }
    w.continuity.push_back(found);
    if (!found && w.ok) {
      w.ok = false;
      w.failing_target_scale = k;
      w.counterexample = escaping(images.back(), f.target.scale(k));
    }
  }
  for (int j = 1; j <= ms; ++j) {
    int found = 0;
    for (int k = 1; k <= mt && !found; ++k)
      if (!missing_from_image(f.target.scale(k), images[static_cast<std::size_t>(j - 1)], hit)) found = k;
    w.image_contains.push_back(found);
    if (!found && w.ok) {
      w.ok = false;
      w.failing_source_scale = j;
      w.counterexample = missing_from_image(f.target.scale(mt), images[static_cast<std::size_t>(j - 1)], hit);
    }
  }
  return w;
}

bool lifts_steps(const FilteredMap& f, int a, int b, std::pair<Point, Point>* counterexample) {
  const Relation& e = f.source.scale(a);
  const Relation image = image_of(f, b);
  for (Point x = 0; x < f.source.size(); ++x) {
    for (Point y : image.neighbors(f(x))) {
      bool lifted = false;
      for (Point z : e.neighbors(x))
        if (f(z) == y) {
          lifted = true;
          break;
        }
      if (!lifted) {
        if (counterexample) *counterexample = {x, y};
        return false;
      }
    }
  }
  return true;
}

LiftingWitness check_chain_lifting(const FilteredMap& f) {
  LiftingWitness w;
  w.ok = true;
  const int m = f.source.num_scales();
  for (int a = 1; a <= m; ++a) {
    int found = 0;
    for (int b = 1; b <= m && !found; ++b)
      if (lifts_steps(f, a, b)) found = b;
    w.witness.push_back(found);
    if (!found && w.ok) {
      w.ok = false;
      w.failing_scale = a;
      std::pair<Point, Point> ce;
      lifts_steps(f, a, m, &ce);
      w.counterexample = ce;
    }
  }
  return w;
}

std::string_view to_string(UniquenessMode m) { return m == UniquenessMode::Plain ? "plain" : "strong"; }

namespace {

struct PairSearch {
  int n = 0;
  std::vector<int> parent;  // -1 unvisited, -2 start
  std::vector<int> order;
};

PairSearch search_pairs(const FilteredMap& f, int b) {
  const Relation& e = f.source.scale(b);
  PairSearch s;
  s.n = f.source.size();
  const auto n = static_cast<std::size_t>(s.n);
  s.parent.assign(n * n, -1);
  std::deque<int> queue;
  for (Point x = 0; x < s.n; ++x) {
    const int id = x * s.n + x;
    s.parent[static_cast<std::size_t>(id)] = -2;
    queue.push_back(id);
  }
  auto closed = [&](Point p) {
    std::vector<Point> out{p};
    out.insert(out.end(), e.neighbors(p).begin(), e.neighbors(p).end());
    return out;
  };
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    s.order.push_back(id);
    const Point p = id / s.n;
    const Point q = id % s.n;
    const auto qn = closed(q);
    for (Point p2 : closed(p))
      for (Point q2 : qn) {
        if (f(p2) != f(q2)) continue;
        const int nid = p2 * s.n + q2;
        if (s.parent[static_cast<std::size_t>(nid)] != -1) continue;
        s.parent[static_cast<std::size_t>(nid)] = id;
        queue.push_back(nid);
      }
  }
  return s;
}

}  // namespace

std::vector<bool> lifted_pairs(const FilteredMap& f, int b) {
  f.source.check_scale(b);
  PairSearch s = search_pairs(f, b);
  std::vector<bool> out(s.parent.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.parent[i] != -1;
  return out;
}

bool unique_at(const FilteredMap& f, UniquenessMode mode, int a, int b, ChainPair* counterexample) {
  f.source.check_scale(a);
  f.source.check_scale(b);
  const Relation& close = f.source.scale(mode == UniquenessMode::Plain ? a : b);
  PairSearch s = search_pairs(f, b);
  // Breadth-first order makes the first violation a shortest one.
  for (int id : s.order) {
    if (close.contains(id / s.n, id % s.n)) continue;
    if (counterexample) {
      ChainPair cp;
      for (int cur = id; cur >= 0; cur = s.parent[static_cast<std::size_t>(cur)]) {
        cp.first.insert(cp.first.begin(), cur / s.n);
        cp.second.insert(cp.second.begin(), cur % s.n);
      }
      *counterexample = std::move(cp);
    }
    return false;
  }
  return true;
}

UniquenessWitness check_approx_uniqueness(const FilteredMap& f, UniquenessMode mode) {
  UniquenessWitness w;
  w.ok = true;
  w.mode = mode;
  const int m = f.source.num_scales();
  for (int a = 1; a <= m; ++a) {
    int found = 0;
    for (int b = m; b >= a && !found; --b)
      if (unique_at(f, mode, a, b)) found = b;
    w.witness.push_back(found);
    if (!found && w.ok) {
      w.ok = false;
      w.failing_scale = a;
      ChainPair cp;
      unique_at(f, mode, a, m, &cp);
      w.counterexample = std::move(cp);
    }
  }
  return w;
}

Partition fiber_e_components(const FilteredMap& f, int k) {
  return components_within(f.source.scale(k), f.assignment);
}

QuotientSpace build_fiber_quotient(const FilteredMap& f, int k) {
  QuotientSpace out;
  out.scale = k;
  out.blocks = fiber_e_components(f, k);
  out.q = out.blocks.block_of;
  const int nb = static_cast<int>(out.blocks.num_blocks());

  std::vector<std::string> names;
  for (const auto& block : out.blocks.blocks) {
    std::string name;
    for (Point x : block) name += (name.empty() ? "" : "+") + f.source.name(x);
    names.push_back(std::move(name));
    out.g.push_back(f(block.front()));
  }
  std::vector<Relation> scales;
  for (const auto& rel : f.source.scales()) scales.push_back(rel.image(out.q, nb));
  const bool hausdorff = scales.empty() || scales.back().is_diagonal();
  out.space = FilteredSpace(std::move(names), std::move(scales), hausdorff);

  if (!unique_at(f, UniquenessMode::Strong, k, k)) out.hypothesis_unmet.emplace_back("strong-uniqueness");
  if (!check_chain_lifting(f).ok) out.hypothesis_unmet.emplace_back("chain-lifting");

  out.g_after_q_is_f = true;
  for (Point x = 0; x < f.source.size(); ++x)
    if (out.g[static_cast<std::size_t>(out.q[static_cast<std::size_t>(x)])] != f(x)) out.g_after_q_is_f = false;

  out.q_has_chain_lifting = check_chain_lifting(make_map(f.source, out.space, out.q)).ok;

  const Relation& e = f.source.scale(k);
  out.identification_rule = true;
  for (Point x = 0; x < f.source.size(); ++x)
    for (Point y = 0; y < f.source.size(); ++y) {
      const bool same = out.q[static_cast<std::size_t>(x)] == out.q[static_cast<std::size_t>(y)];
      if (same != (f(x) == f(y) && e.contains(x, y))) out.identification_rule = false;
    }
  return out;
}

bool is_transverse(const FilteredMap& f, const Relation& e) {
  for (const auto& [x, y] : e.pairs())
    if (f(x) == f(y)) return false;
  return true;
}

Factorization factor_and_verify(const FilteredMap& f, int e) {
  f.source.check_scale(e);
  Factorization r;
  r.requested_scale = e;
  if (!check_generates(f).ok) {
    r.failing_axiom = "generates";
    return r;
  }
  if (!check_chain_lifting(f).ok) {
    r.failing_axiom = "chain-lifting";
    return r;
  }
  const UniquenessWitness u = check_approx_uniqueness(f, UniquenessMode::Strong);
  if (!u.ok) {
    r.failing_axiom = "strong-uniqueness";
    return r;
  }
  r.preconditions = true;
  r.scale = u.witness.at(static_cast<std::size_t>(e - 1));

  QuotientSpace qs = build_fiber_quotient(f, r.scale);
  const Relation& fr = f.source.scale(r.scale);
  r.blocks_bounded = true;
  for (const auto& block : qs.blocks.blocks)
    for (Point x : block)
      for (Point y : block)
        if (!fr.contains(x, y)) r.blocks_bounded = false;

  const FilteredMap g = make_map(qs.space, f.target, qs.g);
  r.g_generates = check_generates(g).ok;
  r.g_lifts = check_chain_lifting(g).ok;
  r.image_scale_transverse = is_transverse(g, qs.space.scale(r.scale));
  for (int j = 1; j <= qs.space.num_scales() && !r.g_transverse_scale; ++j)
    if (is_transverse(g, qs.space.scale(j))) r.g_transverse_scale = j;
  r.g_is_ucm = r.g_generates && r.g_lifts && r.g_transverse_scale > 0;
  r.quotient = std::move(qs);
  return r;
}

GucmReport verify_gucm(const FilteredMap& f) {
  GucmReport r;
  r.generation = check_generates(f);
  r.lifting = check_chain_lifting(f);
  r.uniqueness = check_approx_uniqueness(f, UniquenessMode::Plain);
  r.gucm = r.generation.ok && r.lifting.ok && r.uniqueness.ok;
  return r;
}

}  // namespace ucover
