#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ucover/fp_group.hpp"
#include "ucover/integer_matrix.hpp"
#include "ucover/space.hpp"

namespace ucover {

/// Vertices, edges and triangles of the Rips complex at one scale.
struct Rips2Skeleton {
  int scale = 1;
  int vertices = 0;
  /// (a, b) with a < b, sorted.
  std::vector<PointPair> edges;
  /// (a, b, c) with a < b < c, sorted.
  std::vector<std::array<Point, 3>> triangles;
};

Rips2Skeleton rips_2_skeleton(const FilteredSpace& space, int k);

using EdgeWord = Word;

/// Edge-path presentation of the Rips complex at scale k.
///
/// The spanning tree is breadth-first from the basepoint, visiting neighbors
/// in input order. Generators are the non-tree edges oriented from the
/// smaller endpoint; there is one relator per triangle, read through the
/// tree. A forest presentation covers every component, each rooted at its
/// first point in input order (the basepoint's component first).
struct GroupPresentation {
  int scale = 1;
  Point basepoint = 0;
  bool forest = false;
  /// Points covered by the tree(s), ascending.
  std::vector<Point> points;
  /// Tree parent per point; -1 for roots and uncovered points.
  std::vector<int> parent;
  std::vector<PointPair> generator_edges;
  std::vector<Word> relators;

  Presentation group() const { return Presentation{generator_edges.size(), relators}; }
  bool covers(Point x) const;
  /// Letter word for traversing the step a -> b (empty for tree edges and
  /// repeated points).
  Word step(Point a, Point b) const;

  /// Edge-index -> generator id lookup; -1 for tree edges.
  std::vector<PointPair> edge_keys;
  std::vector<int> edge_generator;
};

GroupPresentation presentation_at_scale(const FilteredSpace& space, int k, Point basepoint);
GroupPresentation forest_presentation(const FilteredSpace& space, int k);

/// Word of a chain read through the tree, freely reduced.
EdgeWord chain_word(const GroupPresentation& p, const Chain& chain);

/// H_1 of the 2-skeleton at scale k together with coordinates for loops.
struct H1Data {
  GroupPresentation presentation;
  RowQuotient quotient;

  const AbelianGroupInv& group() const { return quotient.group; }
  /// Coordinates of the class of a word over the presentation generators.
  IntVector coordinates(const Word& w) const;
};

H1Data h1_data(const FilteredSpace& space, int k);
H1Data h1_data(const FilteredSpace& space, int k, Point basepoint);

/// Whole-space H_1.
AbelianGroupInv h1_at_scale(const FilteredSpace& space, int k);
/// H_1 of the chain component containing `basepoint`.
AbelianGroupInv h1_at_scale(const FilteredSpace& space, int k, Point basepoint);

/// Class of a loop in the whole-space H_1 coordinates.
IntVector h1_class(const FilteredSpace& space, int k, const Chain& loop);

struct HomotopyBudget {
  std::size_t coset_rows = 100000;
  TietzeBudget tietze;
  std::size_t quotient_search_nodes = 200000;
  int max_quotient_degree = 4;
};

enum class Answer { Yes, No, Unknown };

std::string_view to_string(Answer a);

struct HomotopyVerdict {
  Answer answer = Answer::Unknown;
  /// identical, free-reduction, h1, tietze, free-group, trivial-group,
  /// coset-enumeration, finite-quotient, budget
  std::string method;
  /// For No via h1: the nonzero class difference.
  IntVector h1_witness;
  /// For No via finite-quotient: generator images of a separating quotient
  /// of the simplified presentation.
  std::optional<PermutationImages> quotient_witness;
  /// Named budget when the answer is Unknown.
  std::string exhausted_budget;
};

/// Answers word problems in the edge-path group at one basepoint, caching the
/// presentation, its simplification and (when it closes) a coset table.
class HomotopyContext {
 public:
  HomotopyContext(const FilteredSpace& space, int k, Point basepoint, HomotopyBudget budget = {});

  const GroupPresentation& presentation() const noexcept { return presentation_; }
  const RowQuotient& h1() const noexcept { return h1_; }
  const TietzeResult& simplified() const noexcept { return tietze_; }
  /// Order of the group when coset enumeration closed.
  std::optional<std::size_t> group_order();

  /// Is the word trivial in the group?
  HomotopyVerdict is_trivial(const Word& w);
  /// Are two chains from the basepoint's component with common endpoints
  /// homotopic relative to their endpoints?
  HomotopyVerdict homotopic(const Chain& c, const Chain& d);

 private:
  const CosetTable* regular_table();

  const FilteredSpace* space_;
  int scale_;
  HomotopyBudget budget_;
  GroupPresentation presentation_;
  RowQuotient h1_;
  TietzeResult tietze_;
  bool enumeration_tried_ = false;
  std::optional<CosetTable> table_;
};

HomotopyVerdict decide_e_homotopic(const FilteredSpace& space, int k, const Chain& c, const Chain& d,
                                   const HomotopyBudget& budget = {});

/// Repeatedly removes the first interior point whose neighbors are
/// E_k-related, collapsing repeated consecutive points.
Chain reduce_chain(const FilteredSpace& space, int k, const Chain& chain);

}  // namespace ucover
