#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "oprime/rational.hpp"

namespace oprime::exactla {

using Vector = std::vector<Rational>;

/// Sparse exact matrix. Zero entries are never stored and every stored
/// rational is canonical (lowest terms, positive denominator).
class RationalMatrix {
 public:
  using Row = std::map<std::size_t, Rational>;

  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_dense(const std::vector<Vector>& rows, std::size_t cols);
  static RationalMatrix from_dense(const std::vector<Vector>& rows);
  static RationalMatrix column(const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, Rational value);
  void add_to(std::size_t r, std::size_t c, const Rational& value);

  const Row& row(std::size_t r) const { return data_[r]; }
  std::size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }

  RationalMatrix transpose() const;
  std::vector<Vector> to_dense() const;
  Vector apply(const Vector& v) const;
  Vector column_vector(std::size_t c) const;

  /// Places `block` with its top-left corner at (row, col).
  void paste(const RationalMatrix& block, std::size_t row, std::size_t col);

  RationalMatrix& operator+=(const RationalMatrix& other);
  RationalMatrix& operator-=(const RationalMatrix& other);
  RationalMatrix& operator*=(const Rational& scalar);

  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix& b) { return a -= b; }
  friend RationalMatrix operator*(RationalMatrix a, const Rational& s) { return a *= s; }
  friend RationalMatrix operator*(const Rational& s, RationalMatrix a) { return a *= s; }
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

enum class SolveTag { Solution, Inconsistent };

struct SolveOutcome {
  SolveTag tag = SolveTag::Solution;
  /// One exact solution with every free variable set to zero.
  Vector solution;
  /// Coefficients y on the rows of the system with y^T a = 0 and y^T b != 0.
  Vector witness;

  bool consistent() const { return tag == SolveTag::Solution; }
};

/// Right null space basis. Vector k corresponds to the k-th free column
/// (ascending) of the reduced echelon form; its free entry is 1.
std::vector<Vector> kernel(const RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

/// Throws DimensionError when a.rows() != b.size().
SolveOutcome solve(const RationalMatrix& a, const Vector& b);

/// Reduced row echelon form with its pivot columns.
struct Echelon {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Fraction-free elimination followed by normalisation. Pivots are the
/// first nonzero column, rows scanned in ascending order.
Echelon reduced_echelon(const RationalMatrix& m);

/// True iff the witness certifies that a x = b has no solution.
bool verify_witness(const RationalMatrix& a, const Vector& b, const Vector& witness);

bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& v);
Rational dot(const Vector& a, const Vector& b);

/// Incrementally maintained subspace of Q^n kept in reduced echelon form.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }

  /// Adds v; returns false when v was already in the span.
  bool insert(const Vector& v);
  bool contains(const Vector& v) const;
  /// v minus its projection along the pivot coordinates.
  Vector reduce(const Vector& v) const;
  /// Coefficients of v in terms of basis(); nullopt when v is outside.
  std::optional<Vector> coordinates(const Vector& v) const;

  const std::vector<Vector>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  /// Coordinates that are not pivots, ascending; a basis of the quotient.
  std::vector<std::size_t> complement() const;

 private:
  std::size_t ambient_;
  std::vector<Vector> rows_;  // sorted by pivot
  std::vector<std::size_t> pivots_;
};

}  // namespace oprime::exactla
