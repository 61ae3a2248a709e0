#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ucover {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols = 0);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const;
  IntVector column(std::size_t j) const;
  IntMatrix transpose() const;
  /// M * v for a column vector v.
  IntVector apply(const IntVector& v) const;
  /// v * M for a row vector v.
  IntVector apply_left(const IntVector& v) const;
  /// [A | B]
  IntMatrix hconcat(const IntMatrix& right) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... >= 0.
struct SmithForm {
  IntMatrix U, U_inverse, V, V_inverse, D;
  std::size_t rank = 0;

  /// Nonzero diagonal entries d_1 .. d_rank.
  IntVector invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Canonical basis (Hermite normal form, zero rows dropped) of the lattice
/// spanned by the rows of `a`. Pivots are positive; entries above a pivot
/// lie in [0, pivot).
IntMatrix hermite_row_basis(const IntMatrix& a);

/// Some integer x with A x = b, or nullopt if none exists.
std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b);

/// Finitely generated abelian group Z^rank ⊕ Z/d_1 ⊕ ... with d_1 | d_2 | ...
struct AbelianGroupInv {
  std::size_t rank = 0;
  IntVector torsion;

  bool trivial() const { return rank == 0 && torsion.empty(); }
  std::size_t num_coordinates() const { return rank + torsion.size(); }
  std::string to_string() const;

  friend bool operator==(const AbelianGroupInv&, const AbelianGroupInv&) = default;
};

/// Coordinates for Z^n / (row space of R).
///
/// A row vector a maps to y = a * V; the group is presented in the basis
/// where the relations are diagonal. Coordinates with invariant factor 1 are
/// dropped. Free coordinates come first, then torsion coordinates reduced
/// modulo their factor.
struct RowQuotient {
  SmithForm smith;
  std::size_t generators = 0;
  AbelianGroupInv group;
  /// Positions into the diagonal basis for the free part, then torsion.
  std::vector<std::size_t> free_positions;
  std::vector<std::size_t> torsion_positions;

  static RowQuotient of(const IntMatrix& relations, std::size_t generators);

  IntVector coordinates(const IntVector& generator_vector) const;
  /// Generator vector representing the given coordinate vector.
  IntVector representative(const IntVector& coordinates) const;
  IntVector reduce(const IntVector& coordinates) const;
  bool is_zero(const IntVector& coordinates) const;
};

/// Is the homomorphism `m` from a group with invariants `source` onto one
/// with invariants `target` an isomorphism?
bool is_isomorphism(const IntMatrix& m, const AbelianGroupInv& source, const AbelianGroupInv& target);
/// Is `m` onto `target`?
bool is_surjective(const IntMatrix& m, const AbelianGroupInv& target);

Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);

std::string to_string(const IntVector& v);

}  // namespace ucover
