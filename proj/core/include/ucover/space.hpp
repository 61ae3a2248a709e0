#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ucover/error.hpp"

namespace ucover {

using Point = int;
using PointPair = std::pair<Point, Point>;

/// Symmetric reflexive relation on the points 0..n-1.
///
/// Only off-diagonal pairs are stored, each once as (min, max) in sorted
/// order; the diagonal is implicit. Membership is a binary search.
class Relation {
 public:
  Relation() = default;
  /// The diagonal on n points.
  explicit Relation(int n);
  /// Normalizes `pairs`: orders each pair, drops diagonal pairs, dedupes.
  Relation(int n, std::vector<PointPair> pairs);

  static Relation full(int n);

  int size() const noexcept { return n_; }
  bool contains(Point x, Point y) const;
  const std::vector<PointPair>& pairs() const noexcept { return pairs_; }
  /// Points related to x other than x itself, ascending.
  const std::vector<Point>& neighbors(Point x) const { return adjacency_[static_cast<std::size_t>(x)]; }
  bool is_diagonal() const noexcept { return pairs_.empty(); }
  bool subset_of(const Relation& other) const;
  Relation intersect(const Relation& other) const;
  /// Relational composite R o R o ... (k factors); symmetric for symmetric R.
  Relation power(int k) const;
  /// Image under a point map into a set of `target_size` points.
  Relation image(std::span<const int> map, int target_size) const;
  /// Preimage of `target` along a point map defined on n points.
  static Relation preimage(const Relation& target, std::span<const int> map);

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.n_ == b.n_ && a.pairs_ == b.pairs_;
  }

 private:
  void build_adjacency();

  int n_ = 0;
  std::vector<PointPair> pairs_;
  std::vector<std::vector<Point>> adjacency_;
};

/// Finite point set with a descending chain of entourages E_1 ⊇ ... ⊇ E_m.
///
/// Scale indices are 1-based; index 1 is the coarsest relation. Values are
/// immutable after construction.
class FilteredSpace {
 public:
  FilteredSpace() = default;
  /// Checks nesting and the Hausdorff flag; relations are symmetric and
  /// reflexive by construction.
  FilteredSpace(std::vector<std::string> names, std::vector<Relation> scales, bool hausdorff);

  int size() const noexcept { return static_cast<int>(names_.size()); }
  int num_scales() const noexcept { return static_cast<int>(scales_.size()); }
  bool hausdorff() const noexcept { return hausdorff_; }

  const Relation& scale(int k) const;
  const std::vector<Relation>& scales() const noexcept { return scales_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Point x) const;
  Point index_of(std::string_view name) const;

  void check_point(Point x) const;
  void check_scale(int k) const;

  /// Induced subspace on `points` (kept in the given order).
  FilteredSpace restrict(std::span<const Point> points) const;

  friend bool operator==(const FilteredSpace& a, const FilteredSpace& b) {
    return a.names_ == b.names_ && a.scales_ == b.scales_ && a.hausdorff_ == b.hausdorff_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Relation> scales_;
  bool hausdorff_ = false;
};

/// An E_k-chain: consecutive points of `seq` are E_k-related.
struct Chain {
  int scale = 1;
  std::vector<Point> seq;

  Point front() const { return seq.front(); }
  Point back() const { return seq.back(); }
  std::size_t length() const noexcept { return seq.size(); }

  friend bool operator==(const Chain&, const Chain&) = default;
};

/// Disjoint blocks covering a carrier set. Blocks are sorted internally
/// and ordered by their smallest member.
struct Partition {
  std::vector<std::vector<Point>> blocks;
  /// block_of[x] for points of the carrier, -1 outside it.
  std::vector<int> block_of;

  std::size_t num_blocks() const noexcept { return blocks.size(); }
  /// Canonical partition from a per-point label (labels < 0 are outside).
  static Partition from_labels(std::span<const int> labels);
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Builds a space from ordered pair lists, rejecting anything that is not
/// already symmetric, reflexive and nested.
FilteredSpace validate_space(std::vector<std::string> points,
                             const std::vector<std::vector<PointPair>>& relations,
                             bool hausdorff);

/// E_k = {(x, y) : d(x, y) <= r_k}; radii must be strictly decreasing and
/// nonnegative. The space is Hausdorff iff r_m is below every positive
/// distance.
FilteredSpace from_metric(const std::vector<std::vector<double>>& distances,
                          const std::vector<double>& radii,
                          std::vector<std::string> names = {});

bool is_chain(const FilteredSpace& space, int k, std::span<const Point> seq);
Chain make_chain(const FilteredSpace& space, int k, std::vector<Point> seq);

Partition chain_components(const FilteredSpace& space, int k);
/// Components of the relation restricted to points with equal `label`.
Partition components_within(const Relation& relation, std::span<const int> label);

Chain concat_chains(const Chain& c, const Chain& d);
Chain invert_chain(const Chain& c);

/// Names "0", "1", ..., "n-1".
std::vector<std::string> default_names(int n);

}  // namespace ucover
