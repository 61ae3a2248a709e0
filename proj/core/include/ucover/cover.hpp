#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ucover/integer_matrix.hpp"
#include "ucover/rips.hpp"
#include "ucover/space.hpp"

namespace ucover {

struct CoverBudget {
  /// Breadth-first extension rounds.
  int radius = 6;
  /// Budget for identifying new chain classes against old ones.
  HomotopyBudget identification;
};

/// One slot of the edge table: the vertex reached from a vertex by one
/// E_k-step to `successor`, or -1 while unexplored.
struct CoverEdge {
  Point successor;
  int target = -1;
};

/// Budget-bounded realization of the cover at scale k: vertices are
/// homotopy classes of E_k-chains from the basepoint, each stored by its
/// canonical representative.
class PartialCover {
 public:
  PartialCover(const FilteredSpace& space, int k, Point basepoint, HomotopyBudget identification = {});

  const FilteredSpace& space() const noexcept { return *space_; }
  int scale() const noexcept { return scale_; }
  Point basepoint() const noexcept { return basepoint_; }
  std::size_t size() const noexcept { return reps_.size(); }
  const Chain& representative(int v) const { return reps_.at(static_cast<std::size_t>(v)); }
  Point endpoint(int v) const { return reps_.at(static_cast<std::size_t>(v)).back(); }
  const std::vector<CoverEdge>& edges(int v) const { return edges_.at(static_cast<std::size_t>(v)); }
  /// Target of the step from v to y; -1 if unexplored; v itself when y is
  /// v's endpoint.
  int edge(int v, Point y) const;

  int rounds() const noexcept { return rounds_; }
  bool complete() const noexcept { return complete_; }
  bool identification_incomplete() const noexcept { return !undetermined_.empty(); }
  /// Vertex pairs whose identification came back Unknown.
  const std::vector<std::pair<int, int>>& undetermined() const noexcept { return undetermined_; }

  /// Runs one breadth-first round over the current frontier; returns the
  /// number of new vertices.
  std::size_t expand();
  /// Resolves one slot, creating a vertex if needed. Returns the target.
  int resolve(int v, Point y);

  /// F̂_j on the discovered vertices for j >= k (pairs whose slot is still
  /// unexplored are left out and listed by `undetermined_pairs`).
  Relation lifted_scale(int j) const;
  std::vector<std::pair<int, Point>> unexplored_slots(int j) const;

  std::vector<Point> endpoint_map() const;

 private:
  int identify(const Chain& candidate);

  std::shared_ptr<const FilteredSpace> space_;
  int scale_;
  Point basepoint_;
  std::unique_ptr<HomotopyContext> context_;
  std::vector<Chain> reps_;
  std::vector<std::vector<CoverEdge>> edges_;
  std::vector<int> frontier_;
  int rounds_ = 0;
  bool complete_ = false;
  std::vector<std::pair<int, int>> undetermined_;
};

PartialCover build_cover(const FilteredSpace& space, int k, Point basepoint, const CoverBudget& budget = {});

std::vector<Point> endpoint_map(const PartialCover& cover);

/// The discovered vertices with scales F̂_k ⊇ ... ⊇ F̂_m. Vertex names are
/// the representatives' point names joined by '.'.
FilteredSpace cover_space(const PartialCover& cover);

enum class UcmVerdict { Ucm, NotUcm, Inconclusive };
std::string_view to_string(UcmVerdict v);

struct UcmReport {
  struct Generation {
    int scale = 0;
    bool ok = false;
    /// First point pair of E_j (restricted to the component) missing from
    /// p(F̂_j), or first extra pair; empty when ok.
    std::optional<PointPair> missing;
    std::optional<PointPair> extra;
    bool symmetric = true;
  };
  struct Lifting {
    int scale = 0;
    bool ok = false;
    /// Scale of F̂ that lifts every E_j-step (equal to j when ok).
    int witness_scale = 0;
    std::optional<std::pair<int, Point>> counterexample;
  };
  std::vector<Generation> generation;
  std::vector<Lifting> lifting;
  bool generates = false;
  bool chain_lifting = false;
  std::optional<int> transverse_scale;
  std::optional<std::pair<int, int>> transversality_counterexample;
  UcmVerdict verdict = UcmVerdict::Inconclusive;
  /// Which budget blocked a decision when Inconclusive.
  std::string exhausted_budget;
};

UcmReport verify_endpoint_ucm(const FilteredSpace& space, int k, const PartialCover& cover);

/// Matrix of the map H_1(scale j) -> H_1(scale k) for j >= k, in the
/// coordinates of `h1_at_scale`: column i is the image of the i-th source
/// coordinate vector.
IntMatrix bonding_h1_map(const FilteredSpace& space, int j, int k);

/// Adjacent pairs (k, k+1) whose bonding map on H_1 is not an isomorphism.
std::vector<std::pair<int, int>> critical_scales(const FilteredSpace& space);

/// Lifts a chain at a scale finer than or equal to the cover's, starting at
/// `start`. The cover is extended on demand; more than `max_new_vertices`
/// new vertices raises BudgetExhausted.
std::vector<int> lift_chain(PartialCover& cover, int start, const Chain& downstairs,
                            std::size_t max_new_vertices = 10000);

/// Graphviz rendering: one node per vertex labeled by its representative,
/// one undirected edge per resolved slot.
std::string to_dot(const PartialCover& cover);

}  // namespace ucover
