#include "ucover/integer_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "ucover/error.hpp"

namespace ucover {

using boost::multiprecision::abs;

// --------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns, std::size_t rows) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error(ErrorCode::DimensionMismatch, "ragged matrix columns");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
  return out;
}

IntVector IntMatrix::apply_left(const IntVector& v) const {
  if (v.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "vector-matrix size mismatch");
  IntVector out(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (v[i].is_zero()) continue;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += v[i] * (*this)(i, j);
  }
  return out;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& right) const {
  if (rows_ != right.rows_) throw Error(ErrorCode::DimensionMismatch, "hconcat row mismatch");
  IntMatrix m(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) m(i, cols_ + j) = right(i, j);
  }
  return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product size mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

// ------------------------------------------------------------ Smith form

namespace {

class SmithReducer {
 public:
  explicit SmithReducer(const IntMatrix& a)
      : D(a),
        U(IntMatrix::identity(a.rows())),
        Ui(IntMatrix::identity(a.rows())),
        V(IntMatrix::identity(a.cols())),
        Vi(IntMatrix::identity(a.cols())) {}

  SmithForm run() {
    const std::size_t m = D.rows(), n = D.cols();
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      auto pivot = min_abs_in_block(t);
      if (!pivot) break;
      swap_rows(t, pivot->first);
      swap_cols(t, pivot->second);
      for (;;) {
        bool residue = false;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (D(i, t).is_zero()) continue;
          Integer q = D(i, t) / D(t, t);
          if (!q.is_zero()) add_row(i, t, -q);
          if (!D(i, t).is_zero()) residue = true;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (D(t, j).is_zero()) continue;
          Integer q = D(t, j) / D(t, t);
          if (!q.is_zero()) add_col(j, t, -q);
          if (!D(t, j).is_zero()) residue = true;
        }
        if (residue) {
          move_min_of_cross_to_pivot(t);
          continue;
        }
        bool fixed = false;
        for (std::size_t i = t + 1; i < m && !fixed; ++i)
          for (std::size_t j = t + 1; j < n && !fixed; ++j)
            if (!Integer(D(i, j) % D(t, t)).is_zero()) {
              add_row(t, i, 1);
              fixed = true;
            }
        if (!fixed) break;
      }
      if (D(t, t) < 0) negate_row(t);
    }
    SmithForm out{std::move(U), std::move(Ui), std::move(V), std::move(Vi), std::move(D), t};
    return out;
  }

 private:
  std::optional<std::pair<std::size_t, std::size_t>> min_abs_in_block(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_value;
    for (std::size_t i = t; i < D.rows(); ++i)
      for (std::size_t j = t; j < D.cols(); ++j) {
        if (D(i, j).is_zero()) continue;
        Integer v = abs(D(i, j));
        if (!best || v < best_value) {
          best = std::make_pair(i, j);
          best_value = v;
        }
      }
    return best;
  }

  void move_min_of_cross_to_pivot(std::size_t t) {
    std::size_t bi = t, bj = t;
    Integer best = abs(D(t, t));
    for (std::size_t i = t + 1; i < D.rows(); ++i)
      if (!D(i, t).is_zero() && abs(D(i, t)) < best) {
        best = abs(D(i, t));
        bi = i;
        bj = t;
      }
    for (std::size_t j = t + 1; j < D.cols(); ++j)
      if (!D(t, j).is_zero() && abs(D(t, j)) < best) {
        best = abs(D(t, j));
        bi = t;
        bj = j;
      }
    swap_rows(t, bi);
    swap_cols(t, bj);
  }

  // row_i += q * row_s
  void add_row(std::size_t i, std::size_t s, const Integer& q) {
    for (std::size_t j = 0; j < D.cols(); ++j) D(i, j) += q * D(s, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) += q * U(s, j);
    for (std::size_t r = 0; r < Ui.rows(); ++r) Ui(r, s) -= q * Ui(r, i);
  }
  // col_j += q * col_s
  void add_col(std::size_t j, std::size_t s, const Integer& q) {
    for (std::size_t i = 0; i < D.rows(); ++i) D(i, j) += q * D(i, s);
    for (std::size_t i = 0; i < V.rows(); ++i) V(i, j) += q * V(i, s);
    for (std::size_t c = 0; c < Vi.cols(); ++c) Vi(s, c) -= q * Vi(j, c);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < D.cols(); ++j) std::swap(D(a, j), D(b, j));
    for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U(a, j), U(b, j));
    for (std::size_t r = 0; r < Ui.rows(); ++r) std::swap(Ui(r, a), Ui(r, b));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < D.rows(); ++i) std::swap(D(i, a), D(i, b));
    for (std::size_t i = 0; i < V.rows(); ++i) std::swap(V(i, a), V(i, b));
    for (std::size_t c = 0; c < Vi.cols(); ++c) std::swap(Vi(a, c), Vi(b, c));
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < D.cols(); ++j) D(i, j) = -D(i, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) = -U(i, j);
    for (std::size_t r = 0; r < Ui.rows(); ++r) Ui(r, i) = -Ui(r, i);
  }

  IntMatrix D, U, Ui, V, Vi;
};

}  // namespace

IntVector SmithForm::invariant_factors() const {
  IntVector out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

SmithForm smith_normal_form(const IntMatrix& a) { return SmithReducer(a).run(); }

// ---------------------------------------------------------- Hermite form

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a % b;
  if (!r.is_zero() && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

Integer floor_mod(const Integer& a, const Integer& b) { return a - floor_div(a, b) * b; }

IntMatrix hermite_row_basis(const IntMatrix& a) {
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  const std::size_t n = a.cols();
  std::size_t r = 0;
  auto subtract = [&](std::size_t target, std::size_t source, const Integer& q) {
    for (std::size_t j = 0; j < n; ++j) rows[target][j] -= q * rows[source][j];
  };
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < rows.size(); ++i)
        if (!rows[i][c].is_zero() && (!best || abs(rows[i][c]) < abs(rows[*best][c]))) best = i;
      if (!best) break;
      std::swap(rows[r], rows[*best]);
      bool clean = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c].is_zero()) continue;
        subtract(i, r, rows[i][c] / rows[r][c]);
        if (!rows[i][c].is_zero()) clean = false;
      }
      if (clean) break;
    }
    if (rows[r][c].is_zero()) continue;
    if (rows[r][c] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) subtract(i, r, floor_div(rows[i][c], rows[r][c]));
    ++r;
  }
  rows.resize(r);
  return IntMatrix::from_rows(rows, n);
}

std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side has wrong length");
  SmithForm s = smith_normal_form(a);
  IntVector c = s.U.apply(b);
  IntVector z(a.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < s.rank) {
      if (!Integer(c[i] % s.D(i, i)).is_zero()) return std::nullopt;
      z[i] = c[i] / s.D(i, i);
    } else if (!c[i].is_zero()) {
      return std::nullopt;
    }
  }
  return s.V.apply(z);
}

// ------------------------------------------------------- abelian groups

std::string AbelianGroupInv::to_string() const {
  if (trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    os << "Z";
    if (rank > 1) os << "^" << rank;
    first = false;
  }
  for (const auto& d : torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

RowQuotient RowQuotient::of(const IntMatrix& relations, std::size_t generators) {
  if (relations.rows() > 0 && relations.cols() != generators) {
    throw Error(ErrorCode::DimensionMismatch, "relation matrix width != generator count");
  }
  RowQuotient q;
  q.generators = generators;
  IntMatrix rel = relations.rows() > 0 ? relations : IntMatrix(0, generators);
  q.smith = smith_normal_form(rel);
  for (std::size_t i = 0; i < generators; ++i) {
    if (i < q.smith.rank) {
      const Integer& d = q.smith.D(i, i);
      if (d > 1) {
        q.torsion_positions.push_back(i);
        q.group.torsion.push_back(d);
      }
    } else {
      q.free_positions.push_back(i);
    }
  }
  q.group.rank = q.free_positions.size();
  return q;
}

IntVector RowQuotient::coordinates(const IntVector& generator_vector) const {
  if (generator_vector.size() != generators) throw Error(ErrorCode::DimensionMismatch, "generator vector length");
  IntVector y = generators == 0 ? IntVector{} : smith.V.apply_left(generator_vector);
  IntVector out;
  for (auto p : free_positions) out.push_back(y[p]);
  for (std::size_t t = 0; t < torsion_positions.size(); ++t) {
    out.push_back(floor_mod(y[torsion_positions[t]], group.torsion[t]));
  }
  return out;
}

IntVector RowQuotient::representative(const IntVector& coords) const {
  if (coords.size() != group.num_coordinates()) throw Error(ErrorCode::DimensionMismatch, "coordinate length");
  IntVector y(generators);
  for (std::size_t i = 0; i < free_positions.size(); ++i) y[free_positions[i]] = coords[i];
  for (std::size_t t = 0; t < torsion_positions.size(); ++t) y[torsion_positions[t]] = coords[free_positions.size() + t];
  return generators == 0 ? IntVector{} : smith.V_inverse.apply_left(y);
}

IntVector RowQuotient::reduce(const IntVector& coords) const {
  IntVector out = coords;
  for (std::size_t t = 0; t < group.torsion.size(); ++t) {
    auto& c = out[group.rank + t];
    c = floor_mod(c, group.torsion[t]);
  }
  return out;
}

bool RowQuotient::is_zero(const IntVector& coords) const {
  IntVector r = reduce(coords);
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x.is_zero(); });
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

bool is_surjective(const IntMatrix& m, const AbelianGroupInv& target) {
  const std::size_t rows = target.num_coordinates();
  if (rows == 0) return true;
  if (m.rows() != rows) throw Error(ErrorCode::DimensionMismatch, "matrix rows differ from target coordinates");
  IntMatrix rel(rows, rows);
  for (std::size_t t = 0; t < target.torsion.size(); ++t) rel(target.rank + t, target.rank + t) = target.torsion[t];
  const SmithForm s = smith_normal_form(m.hconcat(rel));
  if (s.rank != rows) return false;
  for (const auto& d : s.invariant_factors())
    if (d != 1) return false;
  return true;
}

bool is_isomorphism(const IntMatrix& m, const AbelianGroupInv& source, const AbelianGroupInv& target) {
  // Finitely generated abelian groups are Hopfian, so a surjection between
  // isomorphic groups is injective.
  return source == target && is_surjective(m, target);
}

}  // namespace ucover
