#include "ucover/tower.hpp"

#include <algorithm>
#include <set>

namespace ucover {

std::string_view to_string(Stabilization s) {
  switch (s) {
    case Stabilization::None:
      return "none";
    case Stabilization::BijectionsBeyond:
      return "bijections-beyond";
    case Stabilization::RepeatLast:
      return "repeat-last";
  }
  return "none";
}

// ------------------------------------------------------------ space towers

FilteredMap SpaceTower::bonding_map(int i) const {
  if (i < 1 || i >= size()) throw Error(ErrorCode::BadScalePair, "no bonding map at this index", i);
  const auto s = static_cast<std::size_t>(i);
  return FilteredMap{spaces[s], spaces[s - 1], bonding[s - 1], {}};
}

std::vector<Point> SpaceTower::composite(int beta, int alpha) const {
  if (alpha < 1 || beta > size() || beta < alpha)
    throw Error(ErrorCode::BadScalePair, "composite needs 1 <= alpha <= beta <= n");
  std::vector<Point> out(static_cast<std::size_t>(spaces[static_cast<std::size_t>(beta - 1)].size()));
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = static_cast<Point>(x);
  for (int i = beta - 1; i >= alpha; --i)
    for (Point& x : out) x = bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(x)];
  return out;
}

SpaceTower make_space_tower(std::vector<FilteredSpace> spaces, std::vector<std::vector<Point>> bonding,
                            Stabilization stabilization) {
  if (spaces.empty()) throw Error(ErrorCode::InvalidArgument, "a tower needs at least one space");
  if (bonding.size() + 1 != spaces.size())
    throw Error(ErrorCode::DimensionMismatch, "a tower of n spaces needs n - 1 bonding maps");
  for (std::size_t i = 0; i < bonding.size(); ++i) {
    const FilteredMap phi = make_map(spaces[i + 1], spaces[i], bonding[i]);
    for (int k = 1; k <= phi.target.num_scales(); ++k) {
      bool found = false;
      for (int j = 1; j <= phi.source.num_scales() && !found; ++j)
        found = phi.source.scale(j).image(phi.assignment, phi.target.size()).subset_of(phi.target.scale(k));
      if (!found)
        throw Error(ErrorCode::InvalidArgument,
                    "bonding map " + std::to_string(i + 1) + " is not uniformly continuous", static_cast<int>(i + 1));
    }
  }
  return SpaceTower{std::move(spaces), std::move(bonding), stabilization};
}

int LimitSpace::find(const std::vector<Point>& coordinates) const {
  if (coordinates.empty()) return -1;
  // Threads are indexed by their last coordinate.
  const Point last = coordinates.back();
  if (last < 0 || static_cast<std::size_t>(last) >= threads.size()) return -1;
  return threads[static_cast<std::size_t>(last)] == coordinates ? last : -1;
}

LimitSpace assemble_limit_space(const SpaceTower& tower, std::size_t product_bound) {
  const int n = tower.size();
  const FilteredSpace& deepest = tower.spaces.back();
  if (static_cast<std::size_t>(deepest.size()) * static_cast<std::size_t>(n) > product_bound)
    throw Error(ErrorCode::ProductTooLarge, "thread table exceeds the product bound");

  LimitSpace out;
  std::vector<std::vector<Point>> coords(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) coords[static_cast<std::size_t>(i - 1)] = tower.composite(n, i);
  std::vector<std::string> names;
  for (Point x = 0; x < deepest.size(); ++x) {
    std::vector<Point> t;
    std::string name = "(";
    for (int i = 1; i <= n; ++i) {
      const Point xi = coords[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(x)];
      t.push_back(xi);
      name += (i > 1 ? "," : "") + tower.spaces[static_cast<std::size_t>(i - 1)].name(xi);
    }
    out.threads.push_back(std::move(t));
    names.push_back(name + ")");
  }

  int max_scales = 0;
  for (const auto& s : tower.spaces) max_scales = std::max(max_scales, s.num_scales());
  std::vector<Relation> scales;
  std::optional<Relation> cumulative;
  for (int sum = 2; sum <= n + max_scales; ++sum)
    for (int i = 1; i <= n; ++i) {
      const int j = sum - i;
      const FilteredSpace& xi = tower.spaces[static_cast<std::size_t>(i - 1)];
      if (j < 1 || j > xi.num_scales()) continue;
      Relation pulled = Relation::preimage(xi.scale(j), coords[static_cast<std::size_t>(i - 1)]);
      cumulative = cumulative ? cumulative->intersect(pulled) : pulled;
      if (scales.empty() || !(scales.back() == *cumulative)) {
        scales.push_back(*cumulative);
        out.schedule.emplace_back(i, j);
      }
    }
  const bool hausdorff = scales.back().is_diagonal();
  out.space = FilteredSpace(std::move(names), std::move(scales), hausdorff);
  for (int i = 1; i <= n; ++i)
    out.projections.push_back(
        FilteredMap{out.space, tower.spaces[static_cast<std::size_t>(i - 1)], coords[static_cast<std::size_t>(i - 1)], {}});
  return out;
}

StrongMlReport strong_ml_check(const SpaceTower& tower, std::size_t product_bound) {
  const LimitSpace limit = assemble_limit_space(tower, product_bound);
  const int n = tower.size();
  StrongMlReport r;
  r.ok = true;
  r.certified = tower.stabilization == Stabilization::BijectionsBeyond;
  for (int alpha = 1; alpha <= n; ++alpha) {
    const auto& proj = limit.projections[static_cast<std::size_t>(alpha - 1)].assignment;
    const std::set<Point> on_limit(proj.begin(), proj.end());
    StrongMlReport::Index idx;
    idx.index = alpha;
    for (int beta = alpha < n ? alpha + 1 : n; beta <= n && !idx.witness; ++beta) {
      const auto phi = tower.composite(beta, alpha);
      const std::set<Point> image(phi.begin(), phi.end());
      if (std::includes(on_limit.begin(), on_limit.end(), image.begin(), image.end())) {
        idx.witness = beta;
        idx.equal = image == on_limit;
      }
    }
    if (!idx.witness) r.ok = false;
    r.indices.push_back(idx);
  }
  return r;
}

// ----------------------------------------------------------- reconstruction

ReconstructionReport quotient_tower_reconstruct(const FilteredMap& f, std::size_t product_bound) {
  ReconstructionReport r;
  const GucmReport gucm = verify_gucm(f);
  if (!gucm.generation.ok) r.hypothesis_unmet.emplace_back("generates");
  if (!gucm.lifting.ok) r.hypothesis_unmet.emplace_back("chain-lifting");
  if (!gucm.uniqueness.ok) r.hypothesis_unmet.emplace_back("uniqueness");
  if (!check_approx_uniqueness(f, UniquenessMode::Strong).ok) r.hypothesis_unmet.emplace_back("strong-uniqueness");
  const FilteredSpace& x = f.source;
  const int m = x.num_scales();
  bool separated = x.hausdorff();
  if (!separated) {
    separated = true;
    for (const auto& [a, b] : x.scale(m).pairs())
      if (f(a) == f(b)) separated = false;
  }
  if (!separated) r.hypothesis_unmet.emplace_back("hausdorff");
  if (!r.hypothesis_unmet.empty()) return r;

  for (int k = 1; k <= m; ++k) r.levels.push_back(build_fiber_quotient(f, k));
  std::vector<FilteredSpace> spaces;
  std::vector<std::vector<Point>> bonding;
  for (int k = 1; k <= m; ++k) {
    spaces.push_back(r.levels[static_cast<std::size_t>(k - 1)].space);
    if (k == 1) continue;
    std::vector<Point> phi;
    for (const auto& block : r.levels[static_cast<std::size_t>(k - 1)].blocks.blocks)
      phi.push_back(r.levels[static_cast<std::size_t>(k - 2)].q[static_cast<std::size_t>(block.front())]);
    bonding.push_back(std::move(phi));
  }
  r.tower = make_space_tower(std::move(spaces), std::move(bonding));
  r.limit = assemble_limit_space(*r.tower, product_bound);
  const LimitSpace& lim = *r.limit;

  std::vector<bool> hit(lim.threads.size(), false);
  r.injective = true;
  for (Point p = 0; p < x.size(); ++p) {
    std::vector<Point> t;
    for (const auto& level : r.levels) t.push_back(level.q[static_cast<std::size_t>(p)]);
    const int id = lim.find(t);
    if (id < 0) throw Error(ErrorCode::InvalidArgument, "point does not map to a thread", p);
    if (hit[static_cast<std::size_t>(id)]) r.injective = false;
    hit[static_cast<std::size_t>(id)] = true;
    r.q.push_back(id);
  }
  r.surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });

  const int nt = lim.space.size();
  for (const auto& ls : lim.space.scales()) {
    int found = 0;
    for (int j = 1; j <= m && !found; ++j)
      if (x.scale(j).image(r.q, nt).subset_of(ls)) found = j;
    r.forward_witness.push_back(found);
  }
  for (int j = 1; j <= m; ++j) {
    int found = 0;
    for (int s = 1; s <= lim.space.num_scales() && !found; ++s)
      if (Relation::preimage(lim.space.scale(s), r.q).subset_of(x.scale(j))) found = s;
    r.backward_witness.push_back(found);

    int cube = 0;
    for (int b = 1; b <= m && !cube; ++b) {
      if (!x.scale(b).power(3).subset_of(x.scale(j))) continue;
      const auto& level = r.levels[static_cast<std::size_t>(b - 1)];
      const Relation threads_close =
          Relation::preimage(level.space.scale(b), lim.projections[static_cast<std::size_t>(b - 1)].assignment);
      if (Relation::preimage(threads_close, r.q).subset_of(x.scale(j))) cube = b;
    }
    r.cube_witness.push_back(cube);
  }
  r.entourages_preserved =
      std::none_of(r.forward_witness.begin(), r.forward_witness.end(), [](int w) { return w == 0; }) &&
      std::none_of(r.backward_witness.begin(), r.backward_witness.end(), [](int w) { return w == 0; });

  r.limit_map_matches = true;
  for (Point p = 0; p < x.size(); ++p) {
    const auto& t = lim.threads[static_cast<std::size_t>(r.q[static_cast<std::size_t>(p)])];
    for (int k = 1; k <= m; ++k)
      if (r.levels[static_cast<std::size_t>(k - 1)].g[static_cast<std::size_t>(t[static_cast<std::size_t>(k - 1)])] !=
          f(p))
        r.limit_map_matches = false;
  }
  r.ok = r.injective && r.surjective && r.entourages_preserved && r.limit_map_matches;
  return r;
}

// ---------------------------------------------------------- abelian towers

IntVector normalize(const AbelianGroupInv& group, IntVector x) {
  if (x.size() != group.num_coordinates())
    throw Error(ErrorCode::DimensionMismatch, "element has the wrong number of coordinates");
  for (std::size_t t = 0; t < group.torsion.size(); ++t)
    x[group.rank + t] = floor_mod(x[group.rank + t], group.torsion[t]);
  return x;
}

namespace {

bool is_zero_in(const AbelianGroupInv& group, const IntVector& x) {
  for (const auto& c : normalize(group, x))
    if (c != 0) return false;
  return true;
}

IntVector subtract(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntVector add(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

/// Torsion relations of a group as columns.
IntMatrix relation_columns(const AbelianGroupInv& group) {
  const std::size_t c = group.num_coordinates();
  IntMatrix rel(c, c);
  for (std::size_t t = 0; t < group.torsion.size(); ++t) rel(group.rank + t, group.rank + t) = group.torsion[t];
  return rel;
}

void reduce_rows(const AbelianGroupInv& group, IntMatrix& m) {
  for (std::size_t t = 0; t < group.torsion.size(); ++t)
    for (std::size_t j = 0; j < m.cols(); ++j) m(group.rank + t, j) = floor_mod(m(group.rank + t, j), group.torsion[t]);
}

IntMatrix composite_matrix(const TowerAb& tower, int beta, int alpha) {
  IntMatrix m = IntMatrix::identity(tower.groups[static_cast<std::size_t>(beta - 1)].num_coordinates());
  for (int i = beta - 1; i >= alpha; --i) {
    m = tower.bonding[static_cast<std::size_t>(i - 1)] * m;
    reduce_rows(tower.groups[static_cast<std::size_t>(i - 1)], m);
  }
  return m;
}

TowerAb extend(const TowerAb& tower, int extra) {
  TowerAb out = tower;
  for (int e = 0; e < extra; ++e) {
    out.groups.push_back(tower.groups.back());
    out.bonding.push_back(tower.bonding.back());
  }
  return out;
}

}  // namespace

IntVector TowerAb::apply(int i, const IntVector& x) const {
  if (i < 1 || i >= size()) throw Error(ErrorCode::BadScalePair, "no bonding map at this index", i);
  return normalize(groups[static_cast<std::size_t>(i - 1)], bonding[static_cast<std::size_t>(i - 1)].apply(x));
}

TowerAb make_tower_ab(std::vector<AbelianGroupInv> groups, std::vector<IntMatrix> bonding, Stabilization stabilization) {
  if (groups.empty()) throw Error(ErrorCode::InvalidArgument, "a tower needs at least one group");
  if (bonding.size() + 1 != groups.size())
    throw Error(ErrorCode::DimensionMismatch, "a tower of n groups needs n - 1 bonding matrices");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& t = groups[i].torsion;
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] <= 1 || (k + 1 < t.size() && t[k + 1] % t[k] != 0))
        throw Error(ErrorCode::InvalidArgument, "torsion must be invariant factors d_1 | d_2 | ... with d_1 > 1",
                    static_cast<int>(i + 1));
  }
  for (std::size_t i = 0; i < bonding.size(); ++i) {
    const auto& target = groups[i];
    const auto& source = groups[i + 1];
    const IntMatrix& m = bonding[i];
    if (m.rows() != target.num_coordinates() || m.cols() != source.num_coordinates())
      throw Error(ErrorCode::DimensionMismatch, "bonding matrix " + std::to_string(i + 1) + " has the wrong shape",
                  static_cast<int>(i + 1));
    for (std::size_t t = 0; t < source.torsion.size(); ++t) {
      IntVector col = m.column(source.rank + t);
      for (auto& c : col) c *= source.torsion[t];
      if (!is_zero_in(target, col))
        throw Error(ErrorCode::InvalidArgument,
                    "bonding matrix " + std::to_string(i + 1) + " does not respect torsion orders",
                    static_cast<int>(i + 1));
    }
  }
  if (stabilization == Stabilization::RepeatLast && (groups.size() < 2 || !(groups.back() == groups[groups.size() - 2])))
    throw Error(ErrorCode::InvalidArgument, "repeating the last bonding map needs equal last two groups");
  return TowerAb{std::move(groups), std::move(bonding), stabilization};
}

bool telescoping_identity_holds(const TowerAb& tower, const std::vector<IntVector>& g,
                                const std::vector<IntVector>& h) {
  const int n = tower.size();
  if (static_cast<int>(g.size()) != n - 1 || static_cast<int>(h.size()) != n) return false;
  for (int i = 1; i < n; ++i) {
    const auto& gi = g[static_cast<std::size_t>(i - 1)];
    const IntVector lhs = subtract(h[static_cast<std::size_t>(i - 1)], tower.apply(i, h[static_cast<std::size_t>(i)]));
    if (!is_zero_in(tower.groups[static_cast<std::size_t>(i - 1)], subtract(lhs, gi))) return false;
  }
  return true;
}

TelescopingResult telescoping_solve(const TowerAb& tower, const std::vector<IntVector>& g, TelescopingMode mode) {
  const int n = tower.size();
  if (static_cast<int>(g.size()) != n - 1) throw Error(ErrorCode::DimensionMismatch, "need one g_i for each i < n");
  for (int i = 1; i < n; ++i)
    if (g[static_cast<std::size_t>(i - 1)].size() != tower.groups[static_cast<std::size_t>(i - 1)].num_coordinates())
      throw Error(ErrorCode::DimensionMismatch, "g_i has the wrong number of coordinates", i);

  TelescopingResult r;
  auto zero = [&](int i) { return IntVector(tower.groups[static_cast<std::size_t>(i - 1)].num_coordinates()); };
  if (mode == TelescopingMode::Backward) {
    r.h.assign(static_cast<std::size_t>(n), {});
    r.h.back() = zero(n);
    for (int i = n - 1; i >= 1; --i)
      r.h[static_cast<std::size_t>(i - 1)] =
          normalize(tower.groups[static_cast<std::size_t>(i - 1)],
                    add(g[static_cast<std::size_t>(i - 1)], tower.apply(i, r.h[static_cast<std::size_t>(i)])));
  } else {
    r.h.push_back(zero(1));
    for (int i = 1; i < n; ++i) {
      const auto& gi = tower.groups[static_cast<std::size_t>(i - 1)];
      const IntVector rhs = subtract(r.h.back(), g[static_cast<std::size_t>(i - 1)]);
      const IntMatrix& m = tower.bonding[static_cast<std::size_t>(i - 1)];
      IntVector x(m.cols());
      if (gi.num_coordinates() > 0) {
        const auto sol = solve_integer(m.hconcat(relation_columns(gi)), rhs);
        if (!sol) {
          r.unsolvable_step = i;
          return r;
        }
        std::copy(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m.cols()), x.begin());
      }
      r.h.push_back(normalize(tower.groups[static_cast<std::size_t>(i)], std::move(x)));
    }
  }
  r.solved = true;
  r.verified = telescoping_identity_holds(tower, g, r.h);
  return r;
}

std::vector<IntVector> lim1_transform(const TowerAb& tower, const std::vector<IntVector>& g,
                                      const std::vector<IntVector>& h) {
  if (!telescoping_identity_holds(tower, g, h))
    throw Error(ErrorCode::InvalidArgument, "h does not solve the telescoping identity for g");
  return h;
}

IntMatrix image_lattice(const TowerAb& tower, int beta, int alpha) {
  if (alpha < 1 || beta > tower.size() || beta < alpha)
    throw Error(ErrorCode::BadScalePair, "image needs 1 <= alpha <= beta <= n");
  const auto& group = tower.groups[static_cast<std::size_t>(alpha - 1)];
  const IntMatrix gens = composite_matrix(tower, beta, alpha).hconcat(relation_columns(group));
  return hermite_row_basis(gens.transpose());
}

Lim1Verdict lim1_verdict(const TowerAb& tower) {
  Lim1Verdict v;
  const int n = tower.size();
  int first_non_surjective = 0;
  for (int i = 1; i < n && !first_non_surjective; ++i)
    if (!is_surjective(tower.bonding[static_cast<std::size_t>(i - 1)], tower.groups[static_cast<std::size_t>(i - 1)]))
      first_non_surjective = i;
  if (!first_non_surjective) {
    v.trivial = true;
    v.certificate = "surjectivity";
    return v;
  }
  switch (tower.stabilization) {
    case Stabilization::BijectionsBeyond:
      v.trivial = true;
      v.certificate = "mittag-leffler";
      v.stable_from = n;
      return v;
    case Stabilization::RepeatLast: {
      constexpr int horizon = 24;
      const TowerAb ext = extend(tower, horizon);
      for (int k = 0; k < horizon; ++k)
        if (image_lattice(ext, n + k + 1, n) == image_lattice(ext, n + k, n)) {
          // Once ψ(L) = L for the image L of the repeated map, every deeper
          // image is L as well.
          v.trivial = true;
          v.certificate = "mittag-leffler";
          v.stable_from = n + k;
          return v;
        }
      v.reason = "images keep shrinking through the extrapolation horizon";
      for (int i = 1; i <= n && !v.first_index; ++i)
        if (!(image_lattice(ext, n + horizon, i) == image_lattice(ext, n + horizon - 1, i))) v.first_index = i;
      return v;
    }
    case Stabilization::None:
      break;
  }
  v.reason = "bonding map " + std::to_string(first_non_surjective) + " is not surjective and no stabilization is declared";
  for (int i = 1; i < n && !v.first_index; ++i)
    if (!(image_lattice(tower, n, i) == image_lattice(tower, n - 1, i))) v.first_index = i;
  return v;
}

// ---------------------------------------------------- finite group towers

FiniteGroup make_finite_group(std::vector<std::vector<int>> table, std::vector<std::string> names) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "a group has at least one element");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorCode::DimensionMismatch, "table must be square");
    for (int c : row)
      if (c < 0 || c >= n) throw Error(ErrorCode::InvalidArgument, "table entry out of range");
  }
  FiniteGroup g;
  g.table = std::move(table);
  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = g.mul(e, a) == a && g.mul(a, e) == a;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw Error(ErrorCode::InvalidArgument, "table has no identity");
  for (int a = 0; a < n; ++a) {
    int inv = -1;
    for (int b = 0; b < n && inv < 0; ++b)
      if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity) inv = b;
    if (inv < 0) throw Error(ErrorCode::InvalidArgument, "element has no inverse", a);
    g.inverses.push_back(inv);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw Error(ErrorCode::InvalidArgument, "table is not associative");
  g.names = names.empty() ? default_names(n) : std::move(names);
  if (static_cast<int>(g.names.size()) != n) throw Error(ErrorCode::DimensionMismatch, "one name per element");
  return g;
}

FiniteGroupTower make_finite_group_tower(std::vector<FiniteGroup> groups, std::vector<std::vector<int>> bonding) {
  if (groups.empty()) throw Error(ErrorCode::InvalidArgument, "a tower needs at least one group");
  if (bonding.size() + 1 != groups.size())
    throw Error(ErrorCode::DimensionMismatch, "a tower of n groups needs n - 1 bonding maps");
  for (std::size_t i = 0; i < bonding.size(); ++i) {
    const auto& src = groups[i + 1];
    const auto& dst = groups[i];
    const auto& psi = bonding[i];
    if (static_cast<int>(psi.size()) != src.order())
      throw Error(ErrorCode::DimensionMismatch, "bonding map needs one value per element", static_cast<int>(i + 1));
    for (int v : psi)
      if (v < 0 || v >= dst.order())
        throw Error(ErrorCode::InvalidArgument, "bonding value out of range", static_cast<int>(i + 1));
    for (int a = 0; a < src.order(); ++a)
      for (int b = 0; b < src.order(); ++b)
        if (psi[static_cast<std::size_t>(src.mul(a, b))] !=
            dst.mul(psi[static_cast<std::size_t>(a)], psi[static_cast<std::size_t>(b)]))
          throw Error(ErrorCode::InvalidArgument, "bonding map is not a homomorphism", static_cast<int>(i + 1));
  }
  return FiniteGroupTower{std::move(groups), std::move(bonding)};
}

namespace {

int psi(const FiniteGroupTower& t, int i, int x) {
  return t.bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(x)];
}

}  // namespace

std::vector<int> telescoping_backward(const FiniteGroupTower& tower, const std::vector<int>& g, ProductForm form) {
  const int n = static_cast<int>(tower.groups.size());
  if (static_cast<int>(g.size()) != n - 1) throw Error(ErrorCode::DimensionMismatch, "need one g_i for each i < n");
  std::vector<int> h(static_cast<std::size_t>(n));
  h.back() = tower.groups.back().identity;
  for (int i = n - 1; i >= 1; --i) {
    const FiniteGroup& gi = tower.groups[static_cast<std::size_t>(i - 1)];
    const int image = psi(tower, i, h[static_cast<std::size_t>(i)]);
    const int gv = g[static_cast<std::size_t>(i - 1)];
    h[static_cast<std::size_t>(i - 1)] = form == ProductForm::RightInverse ? gi.mul(gv, image) : gi.mul(image, gv);
  }
  return h;
}

bool telescoping_identity_holds(const FiniteGroupTower& tower, const std::vector<int>& g, const std::vector<int>& h,
                                ProductForm form) {
  const int n = static_cast<int>(tower.groups.size());
  if (static_cast<int>(g.size()) != n - 1 || static_cast<int>(h.size()) != n) return false;
  for (int i = 1; i < n; ++i) {
    const FiniteGroup& gi = tower.groups[static_cast<std::size_t>(i - 1)];
    const int image_inv = gi.inv(psi(tower, i, h[static_cast<std::size_t>(i)]));
    const int hi = h[static_cast<std::size_t>(i - 1)];
    const int rhs = form == ProductForm::RightInverse ? gi.mul(hi, image_inv) : gi.mul(image_inv, hi);
    if (rhs != g[static_cast<std::size_t>(i - 1)]) return false;
  }
  return true;
}

std::vector<int> lim1_transform(const FiniteGroupTower& tower, const std::vector<int>& g) {
  std::vector<int> inv_g;
  for (std::size_t i = 0; i < g.size(); ++i) inv_g.push_back(tower.groups[i].inv(g[i]));
  std::vector<int> h = telescoping_backward(tower, inv_g, ProductForm::RightInverse);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = tower.groups[i].inv(h[i]);
  if (!telescoping_identity_holds(tower, g, h, ProductForm::LeftInverse))
    throw Error(ErrorCode::InvalidArgument, "transformed solution failed to verify");
  return h;
}

Lim1Verdict lim1_verdict(const FiniteGroupTower& tower) {
  Lim1Verdict v;
  for (std::size_t i = 0; i < tower.bonding.size(); ++i) {
    const std::set<int> image(tower.bonding[i].begin(), tower.bonding[i].end());
    if (static_cast<int>(image.size()) != tower.groups[i].order()) {
      v.reason = "bonding map " + std::to_string(i + 1) + " is not surjective";
      v.first_index = static_cast<int>(i + 1);
      return v;
    }
  }
  v.trivial = true;
  v.certificate = "surjectivity";
  return v;
}

// ------------------------------------------------------------ limit maps

namespace {

bool hits_everything(const FilteredMap& f) {
  std::vector<bool> hit(static_cast<std::size_t>(f.target.size()), false);
  for (Point p : f.assignment)
    if (p >= 0) hit[static_cast<std::size_t>(p)] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

}  // namespace

MapLimitReport tower_map_limits(const SpaceTower& x, const FilteredSpace& y, const std::vector<std::vector<Point>>& maps,
                                std::size_t product_bound) {
  const int n = x.size();
  if (static_cast<int>(maps.size()) != n) throw Error(ErrorCode::DimensionMismatch, "need one map per tower space");
  std::vector<FilteredMap> fs;
  for (int i = 1; i <= n; ++i) fs.push_back(make_map(x.spaces[static_cast<std::size_t>(i - 1)], y, maps[static_cast<std::size_t>(i - 1)]));
  for (int i = 1; i < n; ++i)
    for (Point p = 0; p < x.spaces[static_cast<std::size_t>(i)].size(); ++p)
      if (fs[static_cast<std::size_t>(i)](p) != fs[static_cast<std::size_t>(i - 1)](x.bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(p)]))
        throw Error(ErrorCode::InvalidArgument, "maps are not compatible with the bonding maps", i + 1);

  const LimitSpace limit = assemble_limit_space(x, product_bound);
  std::vector<Point> values;
  for (const auto& t : limit.threads) values.push_back(fs.back()(t.back()));
  MapLimitReport r{{}, make_map(limit.space, y, std::move(values)), false, false, false, false, false, false};

  const bool ml = strong_ml_check(x, product_bound).ok;
  const bool all_generate = std::all_of(fs.begin(), fs.end(), [](const FilteredMap& f) { return check_generates(f).ok; });
  const bool all_lift = std::all_of(fs.begin(), fs.end(), [](const FilteredMap& f) { return check_chain_lifting(f).ok; });
  if (!ml) r.hypothesis_unmet.emplace_back("strong-mittag-leffler");
  if (!all_generate) r.hypothesis_unmet.emplace_back("generates");
  if (!all_lift) r.hypothesis_unmet.emplace_back("chain-lifting");

  r.generates = check_generates(r.limit_map).ok;
  r.lifts = check_chain_lifting(r.limit_map).ok;
  r.unique = check_approx_uniqueness(r.limit_map, UniquenessMode::Plain).ok;
  r.strongly_unique = check_approx_uniqueness(r.limit_map, UniquenessMode::Strong).ok;
  r.surjective = hits_everything(r.limit_map);
  r.implication_holds = !ml || ((!all_generate || r.generates) && (!all_lift || r.lifts));
  return r;
}

MapLimitReport tower_map_limits(const SpaceTower& x, const SpaceTower& y, const std::vector<std::vector<Point>>& maps,
                                std::size_t product_bound) {
  const int n = x.size();
  if (y.size() != n || static_cast<int>(maps.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "towers and maps must have equal length");
  std::vector<FilteredMap> fs;
  for (int i = 1; i <= n; ++i)
    fs.push_back(make_map(x.spaces[static_cast<std::size_t>(i - 1)], y.spaces[static_cast<std::size_t>(i - 1)],
                          maps[static_cast<std::size_t>(i - 1)]));
  for (int i = 1; i < n; ++i)
    for (Point p = 0; p < x.spaces[static_cast<std::size_t>(i)].size(); ++p) {
      const Point down = x.bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(p)];
      const Point across = fs[static_cast<std::size_t>(i)](p);
      if (y.bonding[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(across)] !=
          fs[static_cast<std::size_t>(i - 1)](down))
        throw Error(ErrorCode::InvalidArgument, "maps are not compatible with the bonding maps", i + 1);
    }

  const LimitSpace lx = assemble_limit_space(x, product_bound);
  const LimitSpace ly = assemble_limit_space(y, product_bound);
  std::vector<Point> values;
  for (const auto& t : lx.threads) {
    std::vector<Point> image;
    for (int i = 1; i <= n; ++i) image.push_back(fs[static_cast<std::size_t>(i - 1)](t[static_cast<std::size_t>(i - 1)]));
    values.push_back(ly.find(image));
  }
  MapLimitReport r{{}, make_map(lx.space, ly.space, std::move(values)), false, false, false, false, false, false};

  const bool all_unique = std::all_of(fs.begin(), fs.end(), [](const FilteredMap& f) {
    return check_approx_uniqueness(f, UniquenessMode::Plain).ok;
  });
  const bool all_strong = std::all_of(fs.begin(), fs.end(), [](const FilteredMap& f) {
    return check_approx_uniqueness(f, UniquenessMode::Strong).ok;
  });
  if (!all_unique) r.hypothesis_unmet.emplace_back("uniqueness");
  if (!all_strong) r.hypothesis_unmet.emplace_back("strong-uniqueness");

  r.generates = check_generates(r.limit_map).ok;
  r.lifts = check_chain_lifting(r.limit_map).ok;
  r.unique = check_approx_uniqueness(r.limit_map, UniquenessMode::Plain).ok;
  r.strongly_unique = check_approx_uniqueness(r.limit_map, UniquenessMode::Strong).ok;
  r.surjective = hits_everything(r.limit_map);
  r.implication_holds = (!all_unique || r.unique) && (!all_strong || r.strongly_unique);
  return r;
}

}  // namespace ucover
