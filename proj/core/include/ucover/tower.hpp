#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucover/integer_matrix.hpp"
#include "ucover/quotient.hpp"
#include "ucover/space.hpp"

namespace ucover {

/// What the input promises about the tower beyond its last index.
enum class Stabilization {
  None,
  /// Every bonding map past the truncation is a bijection.
  BijectionsBeyond,
  /// The last group and bonding map repeat forever.
  RepeatLast,
};

std::string_view to_string(Stabilization s);

/// X_1 <- X_2 <- ... <- X_n; index 1 is the top of the tower.
struct SpaceTower {
  std::vector<FilteredSpace> spaces;
  /// bonding[i] sends points of spaces[i + 1] to points of spaces[i].
  std::vector<std::vector<Point>> bonding;
  Stabilization stabilization = Stabilization::None;

  int size() const noexcept { return static_cast<int>(spaces.size()); }
  /// The bonding map X_{i+1} -> X_i (1-based).
  FilteredMap bonding_map(int i) const;
  /// Composite X_beta -> X_alpha for beta >= alpha.
  std::vector<Point> composite(int beta, int alpha) const;
};

/// Checks dimensions and uniform continuity of every bonding map.
SpaceTower make_space_tower(std::vector<FilteredSpace> spaces, std::vector<std::vector<Point>> bonding,
                            Stabilization stabilization = Stabilization::None);

inline constexpr std::size_t kDefaultProductBound = 1000000;

struct LimitSpace {
  /// Thread space; no points when the limit is empty.
  FilteredSpace space;
  /// threads[t][i - 1] is the i-th coordinate of thread t.
  std::vector<std::vector<Point>> threads;
  std::vector<FilteredMap> projections;
  /// For each scale of `space`, the (i, j) at which that relation first
  /// appeared.
  std::vector<std::pair<int, int>> schedule;

  bool empty() const noexcept { return threads.empty(); }
  /// Thread index with the given coordinates, or -1.
  int find(const std::vector<Point>& coordinates) const;
};

/// Threads with the cumulative intersections of π_i⁻¹(E_j) in the order
/// (i + j, i). Throws ProductTooLarge when threads times tower length
/// exceeds `product_bound`.
LimitSpace assemble_limit_space(const SpaceTower& tower, std::size_t product_bound = kDefaultProductBound);

struct StrongMlReport {
  struct Index {
    int index = 0;
    /// Deeper index whose image lies in the limit projection; equal to
    /// `index` only for the last one.
    int witness = 0;
    /// The inclusion is an equality.
    bool equal = false;
  };
  std::vector<Index> indices;
  bool ok = false;
  /// The verdict extends past the truncation.
  bool certified = false;
};

StrongMlReport strong_ml_check(const SpaceTower& tower, std::size_t product_bound = kDefaultProductBound);

struct ReconstructionReport {
  std::vector<std::string> hypothesis_unmet;
  std::vector<QuotientSpace> levels;
  std::optional<SpaceTower> tower;
  std::optional<LimitSpace> limit;
  /// Source point -> thread index.
  std::vector<Point> q;
  bool injective = false;
  bool surjective = false;
  /// Per limit scale: a source scale mapped inside it (0 when none).
  std::vector<int> forward_witness;
  /// Per source scale E: a scale F with F∘F∘F ⊆ E whose thread relation
  /// π_F⁻¹(q_F(F)) pulls back into E (0 when none).
  std::vector<int> cube_witness;
  /// Per source scale: a limit scale pulling back inside it (0 when none).
  std::vector<int> backward_witness;
  bool entourages_preserved = false;
  /// The limit of the maps g_E agrees with f along q.
  bool limit_map_matches = false;
  bool ok = false;
};

/// Rebuilds the source of f as the limit of its fiber quotients. The
/// Hausdorff hypothesis is met when the source is flagged Hausdorff or its
/// finest scale joins no two distinct points of a fiber.
ReconstructionReport quotient_tower_reconstruct(const FilteredMap& f,
                                                std::size_t product_bound = kDefaultProductBound);

// --------------------------------------------------------- abelian towers

/// G_1 <- G_2 <- ... <- G_n of finitely generated abelian groups in
/// invariant-factor coordinates.
struct TowerAb {
  std::vector<AbelianGroupInv> groups;
  /// bonding[i] is the matrix of G_{i+2} -> G_{i+1} (0-based i): columns are
  /// images of source coordinates.
  std::vector<IntMatrix> bonding;
  Stabilization stabilization = Stabilization::None;

  int size() const noexcept { return static_cast<int>(groups.size()); }
  /// ψ: G_{i+1} -> G_i applied to x (1-based i), reduced.
  IntVector apply(int i, const IntVector& x) const;
};

/// Validates dimensions, invariant factors (each > 1 and dividing the next)
/// and that torsion coordinates map to elements of matching order.
TowerAb make_tower_ab(std::vector<AbelianGroupInv> groups, std::vector<IntMatrix> bonding,
                      Stabilization stabilization = Stabilization::None);

/// Torsion coordinates reduced into [0, d).
IntVector normalize(const AbelianGroupInv& group, IntVector x);

enum class TelescopingMode { Forward, Backward };

struct TelescopingResult {
  bool solved = false;
  std::vector<IntVector> h;
  /// 1-based step i whose equation ψ(h_{i+1}) = h_i - g_i has no solution.
  int unsolvable_step = 0;
  bool verified = false;
};

/// Finds (h_i) with g_i = h_i - ψ(h_{i+1}) for i < n. Forward mode fixes
/// h_1 = 0 and solves for each h_{i+1}; backward mode fixes h_n = 0.
TelescopingResult telescoping_solve(const TowerAb& tower, const std::vector<IntVector>& g, TelescopingMode mode);
bool telescoping_identity_holds(const TowerAb& tower, const std::vector<IntVector>& g,
                                const std::vector<IntVector>& h);

/// Converts a solution of g_i = h_i - ψ(h_{i+1}) into one of
/// g_i = -ψ(h_{i+1}) + h_i. In an abelian group this is the identity; the
/// result is re-verified and throws InvalidArgument if `h` is no solution.
std::vector<IntVector> lim1_transform(const TowerAb& tower, const std::vector<IntVector>& g,
                                      const std::vector<IntVector>& h);

struct Lim1Verdict {
  bool trivial = false;
  /// "surjectivity" or "mittag-leffler" when trivial.
  std::string certificate;
  /// Why no certificate applies.
  std::string reason;
  /// First index whose images were not shown to stabilize (0 when none).
  int first_index = 0;
  /// Depth from which images are stable, for the Mittag-Leffler certificate.
  std::optional<int> stable_from;
};

/// Only ever certifies triviality; never claims lim¹ is nonzero.
Lim1Verdict lim1_verdict(const TowerAb& tower);

/// Image of the composite G_beta -> G_alpha as a canonical lattice basis in
/// the coordinates of G_alpha (torsion relations included).
IntMatrix image_lattice(const TowerAb& tower, int beta, int alpha);

// ------------------------------------------------------ finite group towers

/// Finite group by multiplication table.
struct FiniteGroup {
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> inverses;
  std::vector<std::string> names;

  int order() const noexcept { return static_cast<int>(table.size()); }
  int mul(int a, int b) const { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inverses[static_cast<std::size_t>(a)]; }
};

FiniteGroup make_finite_group(std::vector<std::vector<int>> table, std::vector<std::string> names = {});

struct FiniteGroupTower {
  std::vector<FiniteGroup> groups;
  /// bonding[i] sends elements of groups[i + 1] to elements of groups[i].
  std::vector<std::vector<int>> bonding;
};

/// Checks that every bonding map is a homomorphism.
FiniteGroupTower make_finite_group_tower(std::vector<FiniteGroup> groups, std::vector<std::vector<int>> bonding);

enum class ProductForm {
  /// g_i = h_i ψ(h_{i+1})⁻¹
  RightInverse,
  /// g_i = ψ(h_{i+1})⁻¹ h_i
  LeftInverse,
};

/// h_n = 1 and back-substitution; always succeeds.
std::vector<int> telescoping_backward(const FiniteGroupTower& tower, const std::vector<int>& g, ProductForm form);
bool telescoping_identity_holds(const FiniteGroupTower& tower, const std::vector<int>& g, const std::vector<int>& h,
                                ProductForm form);
/// A LeftInverse-form solution for g built from the RightInverse-form
/// solution for the pointwise inverses of g.
std::vector<int> lim1_transform(const FiniteGroupTower& tower, const std::vector<int>& g);
/// Trivial(surjectivity) or Undetermined.
Lim1Verdict lim1_verdict(const FiniteGroupTower& tower);

// ------------------------------------------------------------ limit maps

struct MapLimitReport {
  std::vector<std::string> hypothesis_unmet;
  FilteredMap limit_map;
  /// Conclusions replayed on the limit map; only meaningful for the parts
  /// whose hypotheses hold.
  bool generates = false;
  bool lifts = false;
  bool unique = false;
  bool strongly_unique = false;
  /// Every point of the target limit is hit. Not implied by the other
  /// conclusions when the targets vary, so it is only reported.
  bool surjective = false;
  /// Each verified hypothesis yields its conclusion.
  bool implication_holds = false;
};

/// Compatible maps f_i: X_i -> Y (f_i ∘ φ = f_{i-1}); generation and chain
/// lifting pass to the limit when the tower is strong Mittag-Leffler.
MapLimitReport tower_map_limits(const SpaceTower& x, const FilteredSpace& y, const std::vector<std::vector<Point>>& maps,
                                std::size_t product_bound = kDefaultProductBound);
/// Compatible maps between two towers; plain and strong uniqueness pass to
/// the limit.
MapLimitReport tower_map_limits(const SpaceTower& x, const SpaceTower& y, const std::vector<std::vector<Point>>& maps,
                                std::size_t product_bound = kDefaultProductBound);

}  // namespace ucover
