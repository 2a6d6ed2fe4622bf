#include <doctest.h>

#include <random>

#include "oprime/errors.hpp"
#include "oprime/exactla.hpp"

using namespace oprime;
using namespace oprime::exactla;

namespace {

RationalMatrix dense(const std::vector<Vector>& rows) { return RationalMatrix::from_dense(rows); }

// Textbook elimination on a dense copy.
std::size_t naive_rank(std::vector<Vector> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

RationalMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 4), sparse(0, 2);
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (sparse(rng) == 0) continue;
      Rational v(num(rng), den(rng));
      v.canonicalize();
      m.set(i, j, v);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("rationals parse and print canonically") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2/4") == Rational(-1, 2));
  CHECK(parse_rational(" 0.25 ") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(to_string(Rational(7)) == "7");
  CHECK_THROWS_AS(parse_rational("1e3"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(parse_rational("x"), InputError);
}

TEST_CASE("kernel of small matrices") {
  auto k = kernel(dense({{1, 2}, {2, 4}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == Vector{-2, 1});
  CHECK(kernel(RationalMatrix::identity(3)).empty());
  auto z = kernel(RationalMatrix(1, 2));
  REQUIRE(z.size() == 2);
  CHECK(z[0] == Vector{1, 0});
  CHECK(z[1] == Vector{0, 1});
}

TEST_CASE("solve returns a solution or a witness") {
  auto bad = solve(dense({{1}, {0}}), {0, 1});
  REQUIRE(!bad.consistent());
  CHECK(bad.witness[0] == 0);
  CHECK(bad.witness[1] != 0);
  CHECK(verify_witness(dense({{1}, {0}}), {0, 1}, bad.witness));

  auto id = solve(RationalMatrix::identity(2), {3, Rational(-1, 2)});
  REQUIRE(id.consistent());
  CHECK(id.solution == Vector{3, Rational(-1, 2)});

  auto free = solve(dense({{1, 1}}), {5});
  REQUIRE(free.consistent());
  CHECK(free.solution == Vector{5, 0});

  CHECK_THROWS_AS(solve(RationalMatrix::identity(2), {1}), DimensionError);
}

TEST_CASE("rank of small matrices") {
  CHECK(rank(dense({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(RationalMatrix::identity(3)) == 3);
  RationalMatrix j(4, 4);
  for (std::size_t i = 0; i + 1 < 4; ++i) j.set(i, i + 1, 1);
  CHECK(rank(j) == 3);
}

TEST_CASE("sparse storage drops zeros") {
  RationalMatrix m(2, 2);
  m.set(0, 0, 1);
  m.add_to(0, 0, -1);
  CHECK(m.nonzeros() == 0);
  CHECK(m.is_zero());
  m.set(1, 0, Rational(2, 4));
  CHECK(m.at(1, 0) == Rational(1, 2));
  CHECK(m.transpose().at(0, 1) == Rational(1, 2));
}

TEST_CASE("random matrices: kernel, rank and solve agree") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = size(rng), c = size(rng);
    RationalMatrix m = random_matrix(rng, r, c);
    auto k = kernel(m);
    for (const auto& v : k) CHECK(is_zero(m.apply(v)));
    CHECK(rank(m) + k.size() == c);
    CHECK(rank(m) == naive_rank(m.to_dense()));

    Vector b(r);
    for (auto& x : b) x = Rational(static_cast<long>(rng() % 7) - 3);
    auto s = solve(m, b);
    if (s.consistent()) {
      CHECK(m.apply(s.solution) == b);
    } else {
      CHECK(verify_witness(m, b, s.witness));
      CHECK(is_zero(m.transpose().apply(s.witness)));
      CHECK(dot(s.witness, b) != 0);
    }
  }
}

TEST_CASE("reduced echelon is idempotent") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    RationalMatrix m = random_matrix(rng, 4, 5);
    auto e = reduced_echelon(m);
    auto again = reduced_echelon(e.reduced);
    CHECK(again.reduced == e.reduced);
    CHECK(e.pivots.size() == rank(m));
  }
}

TEST_CASE("subspace membership and coordinates") {
  Subspace s(3);
  CHECK(s.insert({1, 1, 0}));
  CHECK(s.insert({0, 1, 1}));
  CHECK(!s.insert({1, 2, 1}));
  CHECK(s.dim() == 2);
  CHECK(s.contains({2, 3, 1}));
  CHECK(!s.contains({0, 0, 1}));
  auto c = s.coordinates({2, 3, 1});
  REQUIRE(c);
  Vector back(3, 0);
  for (std::size_t i = 0; i < c->size(); ++i) back = back + (*c)[i] * s.basis()[i];
  CHECK(back == Vector{2, 3, 1});
  CHECK(s.complement().size() == 1);
  CHECK(is_zero(s.reduce({1, 1, 0})));
}
