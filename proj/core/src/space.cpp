#include "ucover/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "detail/union_find.hpp"

namespace ucover {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NonReflexive: return "NonReflexive";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::HausdorffViolated: return "HausdorffViolated";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::NonDecreasingRadii: return "NonDecreasingRadii";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::BadScale: return "BadScale";
    case ErrorCode::BadScalePair: return "BadScalePair";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::OutsideComponent: return "OutsideComponent";
    case ErrorCode::NotALoop: return "NotALoop";
    case ErrorCode::NotAChain: return "NotAChain";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::NotFaithful: return "NotFaithful";
    case ErrorCode::ProductTooLarge: return "ProductTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Relation

Relation::Relation(int n) : n_(n) { build_adjacency(); }

Relation::Relation(int n, std::vector<PointPair> pairs) : n_(n) {
  pairs_.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw Error(ErrorCode::UnknownPoint, "relation pair out of range", a < 0 || a >= n ? a : b);
    }
    if (a == b) continue;
    pairs_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  build_adjacency();
}

Relation Relation::full(int n) {
  std::vector<PointPair> all;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) all.emplace_back(a, b);
  return Relation(n, std::move(all));
}

void Relation::build_adjacency() {
  adjacency_.assign(static_cast<std::size_t>(n_), {});
  for (auto [a, b] : pairs_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

bool Relation::contains(Point x, Point y) const {
  if (x == y) return x >= 0 && x < n_;
  PointPair key{std::min(x, y), std::max(x, y)};
  return std::binary_search(pairs_.begin(), pairs_.end(), key);
}

bool Relation::subset_of(const Relation& other) const {
  if (n_ != other.n_) return false;
  return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
}

Relation Relation::intersect(const Relation& other) const {
  if (n_ != other.n_) throw Error(ErrorCode::DimensionMismatch, "intersecting relations on different point sets");
  std::vector<PointPair> common;
  std::set_intersection(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                        std::back_inserter(common));
  return Relation(n_, std::move(common));
}

Relation Relation::power(int k) const {
  if (k <= 1) return *this;
  // reach[x] = points joined to x by at most k steps
  std::vector<PointPair> out;
  for (Point x = 0; x < n_; ++x) {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<Point> layer{x};
    seen[x] = 1;
    for (int step = 0; step < k; ++step) {
      std::vector<Point> next;
      for (Point p : layer)
        for (Point q : adjacency_[p])
          if (!seen[q]) {
            seen[q] = 1;
            next.push_back(q);
          }
      layer.insert(layer.end(), next.begin(), next.end());
    }
    for (Point y = x + 1; y < n_; ++y)
      if (seen[y]) out.emplace_back(x, y);
  }
  return Relation(n_, std::move(out));
}

Relation Relation::image(std::span<const int> map, int target_size) const {
  if (static_cast<int>(map.size()) != n_) {
    throw Error(ErrorCode::DimensionMismatch, "point map has wrong length");
  }
  std::vector<PointPair> out;
  out.reserve(pairs_.size());
  for (auto [a, b] : pairs_) out.emplace_back(map[a], map[b]);
  return Relation(target_size, std::move(out));
}

Relation Relation::preimage(const Relation& target, std::span<const int> map) {
  const int n = static_cast<int>(map.size());
  std::vector<PointPair> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (target.contains(map[a], map[b])) out.emplace_back(a, b);
  return Relation(n, std::move(out));
}

// ----------------------------------------------------------- FilteredSpace

FilteredSpace::FilteredSpace(std::vector<std::string> names, std::vector<Relation> scales, bool hausdorff)
    : names_(std::move(names)), scales_(std::move(scales)), hausdorff_(hausdorff) {
  if (scales_.empty()) throw Error(ErrorCode::InvalidArgument, "a filtered space needs at least one scale");
  for (std::size_t k = 0; k < scales_.size(); ++k) {
    if (scales_[k].size() != size()) {
      throw Error(ErrorCode::DimensionMismatch, "scale " + std::to_string(k + 1) + " has wrong point count",
                  static_cast<int>(k + 1));
    }
  }
  for (std::size_t k = 0; k + 1 < scales_.size(); ++k) {
    if (!scales_[k + 1].subset_of(scales_[k])) {
      throw Error(ErrorCode::NotNested, "scale " + std::to_string(k + 2) + " is not contained in scale " +
                                            std::to_string(k + 1),
                  static_cast<int>(k + 1));
    }
  }
  if (hausdorff_ && !scales_.back().is_diagonal()) {
    throw Error(ErrorCode::HausdorffViolated, "finest scale is not the diagonal");
  }
}

const Relation& FilteredSpace::scale(int k) const {
  check_scale(k);
  return scales_[static_cast<std::size_t>(k - 1)];
}

const std::string& FilteredSpace::name(Point x) const {
  check_point(x);
  return names_[static_cast<std::size_t>(x)];
}

Point FilteredSpace::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorCode::UnknownPoint, "no point named '" + std::string(name) + "'");
  return static_cast<Point>(it - names_.begin());
}

void FilteredSpace::check_point(Point x) const {
  if (x < 0 || x >= size()) throw Error(ErrorCode::UnknownPoint, "point " + std::to_string(x) + " out of range", x);
}

void FilteredSpace::check_scale(int k) const {
  if (k < 1 || k > num_scales()) {
    throw Error(ErrorCode::BadScale, "scale index " + std::to_string(k) + " outside 1.." + std::to_string(num_scales()),
                k);
  }
}

FilteredSpace FilteredSpace::restrict(std::span<const Point> points) const {
  std::vector<int> local(static_cast<std::size_t>(size()), -1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < points.size(); ++i) {
    check_point(points[i]);
    local[points[i]] = static_cast<int>(i);
    names.push_back(names_[points[i]]);
  }
  const int n = static_cast<int>(points.size());
  std::vector<Relation> scales;
  for (const auto& rel : scales_) {
    std::vector<PointPair> kept;
    for (auto [a, b] : rel.pairs())
      if (local[a] >= 0 && local[b] >= 0) kept.emplace_back(local[a], local[b]);
    scales.emplace_back(n, std::move(kept));
  }
  bool h = scales.back().is_diagonal();
  return FilteredSpace(std::move(names), std::move(scales), h);
}

// --------------------------------------------------------------- Partition

Partition Partition::from_labels(std::span<const int> labels) {
  Partition p;
  p.block_of.assign(labels.size(), -1);
  std::map<int, int> first_seen;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    if (labels[x] < 0) continue;
    auto [it, inserted] = first_seen.emplace(labels[x], static_cast<int>(p.blocks.size()));
    if (inserted) p.blocks.emplace_back();
    p.blocks[static_cast<std::size_t>(it->second)].push_back(static_cast<Point>(x));
    p.block_of[x] = it->second;
  }
  return p;
}

bool Partition::refines(const Partition& coarser) const {
  for (const auto& block : blocks) {
    const int target = coarser.block_of.at(static_cast<std::size_t>(block.front()));
    for (Point x : block)
      if (coarser.block_of.at(static_cast<std::size_t>(x)) != target || target < 0) return false;
  }
  return true;
}

// -------------------------------------------------------------- operations

FilteredSpace validate_space(std::vector<std::string> points, const std::vector<std::vector<PointPair>>& relations,
                             bool hausdorff) {
  const int n = static_cast<int>(points.size());
  {
    std::set<std::string> unique(points.begin(), points.end());
    if (static_cast<int>(unique.size()) != n) throw Error(ErrorCode::InvalidArgument, "duplicate point names");
  }
  if (relations.empty()) throw Error(ErrorCode::InvalidArgument, "no scales given");
  std::vector<Relation> scales;
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const int index = static_cast<int>(k + 1);
    std::set<PointPair> raw;
    for (auto [a, b] : relations[k]) {
      if (a < 0 || b < 0 || a >= n || b >= n) {
        throw Error(ErrorCode::UnknownPoint, "pair references a missing point at scale " + std::to_string(index),
                    index);
      }
      raw.emplace(a, b);
    }
    for (int x = 0; x < n; ++x) {
      if (!raw.count({x, x})) {
        throw Error(ErrorCode::NonReflexive, "scale " + std::to_string(index) + " misses (" + points[x] + "," +
                                                 points[x] + ")",
                    index);
      }
    }
    for (auto [a, b] : raw) {
      if (!raw.count({b, a})) {
        throw Error(ErrorCode::NonSymmetric, "scale " + std::to_string(index) + " has (" + points[a] + "," +
                                                 points[b] + ") but not its reverse",
                    index);
      }
    }
    scales.emplace_back(n, std::vector<PointPair>(raw.begin(), raw.end()));
  }
  return FilteredSpace(std::move(points), std::move(scales), hausdorff);
}

FilteredSpace from_metric(const std::vector<std::vector<double>>& distances, const std::vector<double>& radii,
                          std::vector<std::string> names) {
  const int n = static_cast<int>(distances.size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(distances[i].size()) != n) {
      throw Error(ErrorCode::AsymmetricMatrix, "distance matrix is not square", i);
    }
    if (distances[i][i] != 0.0) throw Error(ErrorCode::AsymmetricMatrix, "nonzero diagonal entry", i);
    for (int j = 0; j < i; ++j) {
      if (distances[i][j] != distances[j][i]) throw Error(ErrorCode::AsymmetricMatrix, "d(i,j) != d(j,i)", i);
      if (distances[i][j] < 0.0 || std::isnan(distances[i][j])) {
        throw Error(ErrorCode::AsymmetricMatrix, "negative or NaN distance", i);
      }
    }
  }
  if (radii.empty()) throw Error(ErrorCode::NonDecreasingRadii, "no radii given");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] < 0.0) throw Error(ErrorCode::NonDecreasingRadii, "negative radius", static_cast<int>(k + 1));
    if (k > 0 && !(radii[k] < radii[k - 1])) {
      throw Error(ErrorCode::NonDecreasingRadii, "radii must be strictly decreasing", static_cast<int>(k + 1));
    }
  }
  if (names.empty()) names = default_names(n);
  if (static_cast<int>(names.size()) != n) throw Error(ErrorCode::DimensionMismatch, "name count != matrix size");

  double min_positive = std::numeric_limits<double>::infinity();
  std::vector<Relation> scales;
  for (double r : radii) {
    std::vector<PointPair> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (distances[i][j] > 0.0) min_positive = std::min(min_positive, distances[i][j]);
        if (distances[i][j] <= r) pairs.emplace_back(i, j);
      }
    scales.emplace_back(n, std::move(pairs));
  }
  const bool hausdorff = radii.back() < min_positive;
  return FilteredSpace(std::move(names), std::move(scales), hausdorff);
}

bool is_chain(const FilteredSpace& space, int k, std::span<const Point> seq) {
  const Relation& rel = space.scale(k);
  if (seq.empty()) throw Error(ErrorCode::EmptyChain, "chains are nonempty");
  for (Point x : seq) space.check_point(x);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (!rel.contains(seq[i], seq[i + 1])) return false;
  return true;
}

Chain make_chain(const FilteredSpace& space, int k, std::vector<Point> seq) {
  if (!is_chain(space, k, seq)) {
    throw Error(ErrorCode::NotAChain, "sequence is not a chain at scale " + std::to_string(k), k);
  }
  return Chain{k, std::move(seq)};
}

Partition components_within(const Relation& relation, std::span<const int> label) {
  const int n = relation.size();
  detail::UnionFind uf(n);
  for (auto [a, b] : relation.pairs())
    if (label[a] == label[b]) uf.unite(a, b);
  std::vector<int> roots(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) roots[x] = uf.find(x);
  return Partition::from_labels(roots);
}

Partition chain_components(const FilteredSpace& space, int k) {
  const Relation& rel = space.scale(k);
  std::vector<int> same(static_cast<std::size_t>(space.size()), 0);
  return components_within(rel, same);
}

Chain concat_chains(const Chain& c, const Chain& d) {
  if (c.scale != d.scale) throw Error(ErrorCode::ScaleMismatch, "concatenating chains at different scales");
  if (c.seq.empty() || d.seq.empty()) throw Error(ErrorCode::EmptyChain, "chains are nonempty");
  if (c.back() != d.front()) throw Error(ErrorCode::EndpointMismatch, "last point of c differs from first point of d");
  Chain out{c.scale, c.seq};
  out.seq.insert(out.seq.end(), d.seq.begin() + 1, d.seq.end());
  return out;
}

Chain invert_chain(const Chain& c) {
  Chain out{c.scale, c.seq};
  std::reverse(out.seq.begin(), out.seq.end());
  return out;
}

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

}  // namespace ucover
