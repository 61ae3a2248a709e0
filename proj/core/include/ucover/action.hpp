#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucover/quotient.hpp"
#include "ucover/space.hpp"
#include "ucover/tower.hpp"

namespace ucover {

/// perm[x] is the image of point x.
using Permutation = std::vector<Point>;

inline constexpr std::size_t kDefaultOrderBound = 10000;

/// A finite group acting on a filtered space, materialized as the list of
/// permutations it induces. Products compose right to left: (g h)(x) = g(h(x)).
class ActionSpec {
 public:
  ActionSpec() = default;
  ActionSpec(FilteredSpace space, std::vector<Permutation> generators, std::vector<Permutation> elements);

  const FilteredSpace& space() const noexcept { return space_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }
  /// Element 0 is the identity; the rest in breadth-first order over the
  /// generators.
  const std::vector<Permutation>& elements() const noexcept { return elements_; }
  const Permutation& element(int g) const { return elements_.at(static_cast<std::size_t>(g)); }
  int order() const noexcept { return static_cast<int>(elements_.size()); }
  /// Only the identity fixes every point.
  bool faithful() const noexcept { return faithful_; }

  int index_of(const Permutation& p) const;
  int mul(int g, int h) const;
  int inv(int g) const;
  Point act(int g, Point x) const { return element(g)[static_cast<std::size_t>(x)]; }

  FiniteGroup group() const;

 private:
  FilteredSpace space_;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::map<Permutation, int> index_;
  bool faithful_ = true;
};

/// Closes the generators under composition. Throws NotAPermutation or
/// GroupTooLarge.
ActionSpec close_group(const FilteredSpace& space, std::vector<Permutation> generators,
                       std::size_t order_bound = kDefaultOrderBound);

/// Subgroup generated by the given elements, as sorted element indices.
std::vector<int> generated_subgroup(const ActionSpec& action, const std::vector<int>& generators);

/// Elements moving some point within `e`.
std::vector<int> moving_within(const ActionSpec& action, const Relation& e);

struct SubgroupAtScale {
  int scale = 1;
  /// Sorted element indices.
  std::vector<int> elements;
  /// The generating set: elements moving some point within E_k.
  std::vector<int> movers;
};

SubgroupAtScale subgroup_at_scale(const ActionSpec& action, int k);

bool is_invariant(const ActionSpec& action, const Relation& e);
/// Smallest invariant relation containing E_k.
Relation saturate_invariant(const ActionSpec& action, int k);
Relation saturate_invariant(const ActionSpec& action, const Relation& e);

struct ActionDiagnosis {
  /// neutral_pairs[a-1][b-1] for b >= a: (x, gy) ∈ E_b forces some
  /// (hx, y) ∈ E_a.
  std::vector<std::vector<bool>> neutral_pairs;
  /// Per scale a: the coarsest b that works (0 when none).
  std::vector<int> neutral_witness;
  bool neutral = false;

  /// Per scale: an element g != 1 and point x with (x, gx) ∈ E_k.
  std::vector<std::optional<std::pair<int, Point>>> upd_counterexample;
  /// Coarsest scale with no counterexample.
  std::optional<int> upd_scale;
  bool upd = false;

  /// Per scale a: the coarsest b whose subgroup has E_a-bounded orbits.
  std::vector<int> bounded_orbits_witness;
  bool bounded_orbits = false;

  /// Per scale a: the coarsest b whose saturation lies in E_a.
  std::vector<int> equicontinuity_witness;
  /// The saturations of the scales.
  std::vector<Relation> invariant_basis;
  bool equicontinuous = false;

  /// Per scale a: the coarsest b with E_b ⊆ g⁻¹(E_a) for all g in G_{E_b}.
  std::vector<int> ss_equicontinuity_witness;
  bool ss_equicontinuous = false;
};

ActionDiagnosis diagnose_action(const ActionSpec& action);

struct QuotientAction {
  int scale = 1;
  /// E_k was not invariant and was replaced by its saturation.
  bool saturated = false;
  Relation entourage;
  std::vector<int> subgroup;
  /// Orbits of the subgroup, ordered by smallest point.
  Partition orbits;
  /// Orbit space with the images of all scales.
  FilteredSpace space;
  std::vector<Point> projection;
  /// Cosets of the subgroup, ordered by smallest element index.
  Partition cosets;
  std::vector<int> group_projection;
  FiniteGroup group;
  /// induced[c][u] is the image of orbit u under coset c.
  std::vector<Permutation> induced;
  bool normal = false;
  /// The coset and orbit representatives do not affect the induced action.
  bool induced_well_defined = false;
  bool induced_faithful = false;
  /// No coset other than the identity moves an orbit within p(F).
  bool induced_upd = false;
  /// Orbits of the whole group are unions of these orbits and the induced
  /// action has the same orbit map.
  bool orbit_map_consistent = false;
};

/// Throws NotFaithful when the action is not faithful.
QuotientAction quotient_at_scale(const ActionSpec& action, int k);

/// Compatible actions of a group tower on a space tower.
struct ActionTower {
  FiniteGroupTower groups;
  SpaceTower spaces;
  /// actions[i][g] is the permutation of spaces[i] by element g of groups[i].
  std::vector<std::vector<Permutation>> actions;
};

/// Checks that each level is an action and that bonding maps intertwine
/// the actions.
ActionTower make_action_tower(FiniteGroupTower groups, SpaceTower spaces, std::vector<std::vector<Permutation>> actions);

struct TelescopedThread {
  /// The orbit (point of X/G) the thread represents.
  int orbit = 0;
  /// Chosen representatives x_i, one per level.
  std::vector<Point> representatives;
  /// g_i with φ(x_{i+1}) = g_i x_i.
  std::vector<int> defects;
  /// k_i with g_i = ψ(k_{i+1})⁻¹ k_i.
  std::vector<int> corrections;
  /// k_i x_i, a thread of the space tower.
  std::vector<Point> corrected;
  bool verified = false;
};

struct ActionTowerReport {
  std::vector<std::string> hypothesis_unmet;
  std::vector<QuotientAction> levels;
  std::optional<ActionTower> tower;

  /// (a) g -> ([g]_k) into the thread group.
  bool group_homomorphism = false;
  bool group_injective = false;
  bool group_bijective = false;
  /// (b) x -> ([x]_k) onto the thread space.
  bool space_bijective = false;
  bool space_entourages_preserved = false;
  /// ([gx]_k) = ([g]_k)([x]_k).
  bool equivariant = false;
  /// (c) (lim X_i)/(lim G_i) -> lim (X_i/G_i).
  bool quotient_well_defined = false;
  bool quotient_injective = false;
  bool quotient_surjective = false;
  bool quotient_entourages_preserved = false;
  std::vector<TelescopedThread> telescoped;
  /// (d) every ψ is onto.
  bool bondings_surjective = false;

  bool part_a = false, part_b = false, part_c = false, part_d = false;
  bool ok = false;
};

ActionTowerReport action_tower_verify(const ActionSpec& action, std::size_t product_bound = kDefaultProductBound);

struct LimitActionReport {
  std::vector<std::string> hypothesis_unmet;
  std::vector<ActionDiagnosis> level_diagnoses;
  std::optional<LimitSpace> limit_space;
  /// Permutations of the threads by the thread group.
  std::optional<ActionSpec> limit_action;
  std::optional<ActionDiagnosis> limit_diagnosis;
  std::optional<GucmReport> projection;
  bool neutral_implication = false;
  bool bounded_orbits_implication = false;
  bool gucm_implication = false;
  bool ok = false;
};

LimitActionReport limit_action_verify(const ActionTower& tower, std::size_t product_bound = kDefaultProductBound);

/// The orbit map X -> X/G with the images of all scales.
FilteredMap orbit_map(const ActionSpec& action);

}  // namespace ucover
