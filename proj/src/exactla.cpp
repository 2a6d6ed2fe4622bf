#include "oprime/exactla.hpp"

#include <algorithm>
#include <string>

#include "oprime/errors.hpp"

namespace oprime::exactla {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

RationalMatrix RationalMatrix::from_dense(const std::vector<Vector>& rows, std::size_t cols) {
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

RationalMatrix RationalMatrix::from_dense(const std::vector<Vector>& rows) {
  return from_dense(rows, rows.empty() ? 0 : rows.front().size());
}

RationalMatrix RationalMatrix::column(const Vector& v) {
  RationalMatrix m(v.size(), 1);
  for (std::size_t r = 0; r < v.size(); ++r) m.set(r, 0, v[r]);
  return m;
}

Rational RationalMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = data_[r];
  auto it = row.find(c);
  return it == row.end() ? Rational(0) : it->second;
}

void RationalMatrix::set(std::size_t r, std::size_t c, Rational value) {
  if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
  value.canonicalize();
  if (value == 0) {
    data_[r].erase(c);
  } else {
    data_[r][c] = std::move(value);
  }
}

void RationalMatrix::add_to(std::size_t r, std::size_t c, const Rational& value) {
  if (value == 0) return;
  if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
  auto& row = data_[r];
  auto [it, inserted] = row.try_emplace(c, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) row.erase(it);
  }
}

std::size_t RationalMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& [c, v] : data_[r]) t.data_[c].emplace(r, v);
  }
  return t;
}

std::vector<Vector> RationalMatrix::to_dense() const {
  std::vector<Vector> out(rows_, Vector(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& [c, v] : data_[r]) out[r][c] = v;
  }
  return out;
}

Vector RationalMatrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector size mismatch");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc = 0;
    for (const auto& [c, x] : data_[r]) acc += x * v[c];
    out[r] = acc;
  }
  return out;
}

Vector RationalMatrix::column_vector(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

void RationalMatrix::paste(const RationalMatrix& block, std::size_t row, std::size_t col) {
  if (row + block.rows_ > rows_ || col + block.cols_ > cols_) {
    throw DimensionError("block does not fit");
  }
  for (std::size_t r = 0; r < block.rows_; ++r) {
    for (const auto& [c, v] : block.data_[r]) set(row + r, col + c, v);
  }
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& [c, v] : other.data_[r]) add_to(r, c, v);
  }
  return *this;
}

RationalMatrix& RationalMatrix::operator-=(const RationalMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix difference shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& [c, v] : other.data_[r]) add_to(r, c, -v);
  }
  return *this;
}

RationalMatrix& RationalMatrix::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    for (auto& row : data_) row.clear();
    return *this;
  }
  for (auto& row : data_) {
    for (auto& [c, v] : row) v *= scalar;
  }
  return *this;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (const auto& [k, x] : a.data_[r]) {
      for (const auto& [c, y] : b.data_[k]) out.add_to(r, c, x * y);
    }
  }
  return out;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

namespace {

using IntRow = std::vector<Integer>;

Integer lcm_of_denominators(const RationalMatrix::Row& row, const Rational* extra) {
  Integer l = 1;
  for (const auto& [c, v] : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  if (extra != nullptr) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), extra->get_den_mpz_t());
  return l;
}

/// One-step fraction-free (Bareiss) elimination on the first `pivot_cols`
/// columns. Every division is exact since all intermediate entries are
/// minors of the input. Returns the pivot columns; rows beyond the rank are
/// zero on the pivot range.
std::vector<std::size_t> fraction_free_eliminate(std::vector<IntRow>& m, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t width = m.front().size();
  Integer previous = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    if (p != r) std::swap(m[p], m[r]);
    const Integer& pivot = m[r][c];
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      const Integer factor = m[i][c];
      for (std::size_t j = c + 1; j < width; ++j) {
        Integer value = pivot * m[i][j] - factor * m[r][j];
        mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), previous.get_mpz_t());
        m[i][j] = std::move(value);
      }
      m[i][c] = 0;
    }
    previous = pivot;
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<IntRow> integer_rows(const RationalMatrix& a, const Vector* b, bool with_identity) {
  const std::size_t n = a.cols();
  const std::size_t width = n + (b != nullptr ? 1 : 0) + (with_identity ? a.rows() : 0);
  std::vector<IntRow> rows(a.rows(), IntRow(width, 0));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const Rational* rhs = b != nullptr ? &(*b)[r] : nullptr;
    const Integer scale = lcm_of_denominators(a.row(r), rhs);
    for (const auto& [c, v] : a.row(r)) {
      rows[r][c] = v.get_num() * (scale / v.get_den());
    }
    if (b != nullptr) rows[r][n] = rhs->get_num() * (scale / rhs->get_den());
    if (with_identity) rows[r][n + (b != nullptr ? 1 : 0) + r] = scale;
  }
  return rows;
}

/// Turns fraction-free echelon rows into reduced rational rows.
std::vector<Vector> normalise(const std::vector<IntRow>& m, const std::vector<std::size_t>& pivots,
                              std::size_t width) {
  std::vector<Vector> reduced(pivots.size(), Vector(width));
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    const Rational pivot(m[k][pivots[k]]);
    for (std::size_t j = 0; j < width; ++j) {
      if (m[k][j] != 0) {
        reduced[k][j] = Rational(m[k][j]) / pivot;
      }
    }
  }
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const std::size_t pc = pivots[k];
    for (std::size_t i = 0; i < k; ++i) {
      const Rational factor = reduced[i][pc];
      if (factor == 0) continue;
      for (std::size_t j = pc; j < width; ++j) {
        if (reduced[k][j] != 0) reduced[i][j] -= factor * reduced[k][j];
      }
    }
  }
  return reduced;
}

}  // namespace

Echelon reduced_echelon(const RationalMatrix& m) {
  auto rows = integer_rows(m, nullptr, false);
  auto pivots = fraction_free_eliminate(rows, m.cols());
  auto reduced = normalise(rows, pivots, m.cols());
  return {RationalMatrix::from_dense(reduced, m.cols()), pivots};
}

std::vector<Vector> kernel(const RationalMatrix& m) {
  const auto ech = reduced_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < ech.pivots.size(); ++k) {
      v[ech.pivots[k]] = -ech.reduced.at(k, f);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const RationalMatrix& m) {
  auto rows = integer_rows(m, nullptr, false);
  return fraction_free_eliminate(rows, m.cols()).size();
}

SolveOutcome solve(const RationalMatrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    throw DimensionError("solve: system has " + std::to_string(a.rows()) + " rows but rhs has " +
                         std::to_string(b.size()));
  }
  const std::size_t n = a.cols();
  auto rows = integer_rows(a, &b, true);
  const auto pivots = fraction_free_eliminate(rows, n);

  SolveOutcome out;
  for (std::size_t r = pivots.size(); r < rows.size(); ++r) {
    if (rows[r][n] == 0) continue;
    out.tag = SolveTag::Inconsistent;
    out.witness.assign(a.rows(), 0);
    Integer g = 0;
    for (std::size_t k = 0; k < a.rows(); ++k) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), rows[r][n + 1 + k].get_mpz_t());
    for (std::size_t k = 0; k < a.rows(); ++k) out.witness[k] = Rational(rows[r][n + 1 + k] / g);
    return out;
  }

  const auto reduced = normalise(rows, pivots, n + 1);
  out.solution.assign(n, 0);
  for (std::size_t k = 0; k < pivots.size(); ++k) out.solution[pivots[k]] = reduced[k][n];
  return out;
}

bool verify_witness(const RationalMatrix& a, const Vector& b, const Vector& witness) {
  if (witness.size() != a.rows() || b.size() != a.rows()) return false;
  Vector combo(a.cols());
  Rational rhs = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (witness[r] == 0) continue;
    for (const auto& [c, v] : a.row(r)) combo[c] += witness[r] * v;
    rhs += witness[r] * b[r];
  }
  return is_zero(combo) && rhs != 0;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum size mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference size mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector operator*(const Rational& s, const Vector& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("dot product size mismatch");
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vector Subspace::reduce(const Vector& v) const {
  if (v.size() != ambient_) throw DimensionError("subspace ambient mismatch");
  Vector r = v;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Rational factor = r[pivots_[k]];
    if (factor == 0) continue;
    for (std::size_t j = pivots_[k]; j < ambient_; ++j) {
      if (rows_[k][j] != 0) r[j] -= factor * rows_[k][j];
    }
  }
  return r;
}

bool Subspace::contains(const Vector& v) const { return is_zero(reduce(v)); }

bool Subspace::insert(const Vector& v) {
  Vector r = reduce(v);
  auto lead = std::find_if(r.begin(), r.end(), [](const Rational& x) { return x != 0; });
  if (lead == r.end()) return false;
  const std::size_t p = static_cast<std::size_t>(lead - r.begin());
  const Rational scale = r[p];
  for (auto& x : r) x /= scale;
  for (auto& row : rows_) {
    const Rational factor = row[p];
    if (factor == 0) continue;
    for (std::size_t j = p; j < ambient_; ++j) {
      if (r[j] != 0) row[j] -= factor * r[j];
    }
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  const auto idx = pos - pivots_.begin();
  pivots_.insert(pos, p);
  rows_.insert(rows_.begin() + idx, std::move(r));
  return true;
}

std::optional<Vector> Subspace::coordinates(const Vector& v) const {
  if (!contains(v)) return std::nullopt;
  Vector coords(rows_.size());
  for (std::size_t k = 0; k < rows_.size(); ++k) coords[k] = v[pivots_[k]];
  return coords;
}

std::vector<std::size_t> Subspace::complement() const {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t j = 0; j < ambient_; ++j) {
    if (k < pivots_.size() && pivots_[k] == j) {
      ++k;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace oprime::exactla
