#pragma once

#include <cstddef>
#include <vector>

#include "ucover/integer_matrix.hpp"
#include "ucover/space.hpp"

// Independent reference computations used only by tests. None of these
// share code paths with the library beyond the space type and Integer.
namespace ucover::oracle {

using Matrix = std::vector<std::vector<Integer>>;

/// Rank over the rationals by fraction-free elimination.
std::size_t rank(Matrix m);
/// Determinant by cofactor-free Bareiss elimination.
Integer determinant(Matrix m);
/// Invariant factors d_i = D_i / D_{i-1} where D_i is the gcd of all i x i
/// minors. Only the nonzero ones are returned.
std::vector<Integer> invariant_factors_by_minors(const Matrix& m);

/// Boundary matrices of the Rips 2-skeleton, listed directly from the
/// relation: d1 is vertices x edges, d2 is edges x triangles.
struct Boundaries {
  Matrix d1, d2;
  std::vector<PointPair> edges;
  std::vector<std::vector<Point>> triangles;
};
Boundaries boundary_matrices(const FilteredSpace& space, int k);

struct H1 {
  std::size_t rank = 0;
  std::vector<Integer> torsion;
};
H1 h1(const FilteredSpace& space, int k);

/// Rank of a matrix over the field with p elements.
std::size_t rank_mod(const Matrix& m, int p);
/// dim H_1 with coefficients in F_p (p prime) or Q (p = 0).
std::size_t betti1(const FilteredSpace& space, int k, int p);

/// Number of homotopy classes of k-chains from `base` with at most `steps`
/// steps, identifying chains by single-point deletions/insertions among all
/// chains with at most `max_points` points.
std::size_t chain_classes(const FilteredSpace& space, int k, Point base, int steps, int max_points);

/// Brute-force approximate uniqueness at one scale pair: all pairs of
/// F-chains (scale b) from a common start with at most `max_points` points
/// and equal images end E-close (scale a). `strong` checks F-closeness.
bool approx_unique_pair(const FilteredSpace& source, const std::vector<int>& f, int a, int b, bool strong,
                        int max_points);
/// The same check by listing every chain pair explicitly: all E_b-chains
/// from each start with at most `max_points` points are grouped by image
/// sequence and compared pairwise.
bool approx_unique_enumerated(const FilteredSpace& source, const std::vector<int>& f, int a, int b, bool strong,
                              int max_points);

}  // namespace ucover::oracle
