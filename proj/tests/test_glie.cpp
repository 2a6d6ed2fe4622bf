#include <doctest.h>

#include <variant>

#include "oprime/errors.hpp"
#include "oprime/glie.hpp"

using namespace oprime;
using namespace oprime::glie;
using rootsys::Weight;

namespace {

AlgebraPtr alg(const std::string& name, const std::vector<Weight>& radical = {}) {
  return build_algebra(rootsys::build_root_system(rootsys::cartan_from_name(name)), radical);
}

bool is_valid(const GValidation& v) { return std::holds_alternative<GFunctional>(v); }

}  // namespace

TEST_CASE("algebra dimensions and the radical split") {
  auto sl2 = alg("A1");
  CHECK(sl2->dim() == 3);
  CHECK(sl2->radical_dim() == 0);

  auto gl2 = alg("A1", {Weight{0}});
  CHECK(gl2->dim() == 4);
  CHECK(gl2->j1().size() == 1);
  CHECK(gl2->j2().empty());

  auto adj = alg("A1", {Weight{2}});
  CHECK(adj->dim() == 6);
  CHECK(adj->j1().empty());
  CHECK(adj->j2().size() == 3);

  auto both = alg("A1", {Weight{0}, Weight{2}});
  auto [j1, j2] = split_radical(*both);
  CHECK(j1 == std::vector<std::size_t>{0});
  CHECK(j2 == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("basis labels") {
  auto a = alg("A1", {Weight{0}});
  CHECK(a->label(a->e(0)) == "e");
  CHECK(a->label(a->f(0)) == "f");
  CHECK(a->label(a->h(0)) == "h");
  CHECK(a->label(a->u(0)) == "u1");
  auto b = alg("A2");
  CHECK(b->label(b->e(2)) == "e[a1+a2]");
  CHECK(b->label(b->h(1)) == "h2");
  CHECK(b->find("f[a2]") == b->f(1));
}

TEST_CASE("sl2 brackets") {
  auto a = alg("A1");
  const std::size_t e = a->e(0), f = a->f(0), h = a->h(0);
  CHECK(a->bracket(e, f) == Combination{{h, 1}});
  CHECK(a->bracket(h, e) == Combination{{e, 2}});
  CHECK(a->bracket(h, f) == Combination{{f, -2}});
  CHECK(a->bracket(e, e).empty());
}

TEST_CASE("Jacobi identity and radical invariants on every basis triple") {
  const std::vector<std::pair<std::string, std::vector<Weight>>> cases = {
      {"A1", {}},
      {"A1", {Weight{0}, Weight{2}}},
      {"A1", {Weight{1}, Weight{3}}},
      {"A2", {Weight{1, 1}}},
      {"A2", {Weight{1, 0}, Weight{0, 0}}},
      {"B2", {Weight{0, 1}}},
      {"G2", {}},
      {"A3", {}},
      {"B3", {}},
      {"C3", {}},
  };
  for (const auto& [name, radical] : cases) {
    auto a = alg(name, radical);
    CHECK(check_structure(*a).empty());
    for (std::size_t x = 0; x < a->dim(); ++x) {
      for (std::size_t y = 0; y < a->dim(); ++y) {
        for (std::size_t z = 0; z < a->dim(); ++z) {
          Combination s = a->bracket(a->bracket(Combination{{x, 1}}, Combination{{y, 1}}), Combination{{z, 1}});
          for (const auto& [k, v] : a->bracket(a->bracket(Combination{{y, 1}}, Combination{{z, 1}}), Combination{{x, 1}})) s[k] += v;
          for (const auto& [k, v] : a->bracket(a->bracket(Combination{{z, 1}}, Combination{{x, 1}}), Combination{{y, 1}})) s[k] += v;
          bool zero = true;
          for (const auto& [k, v] : s) zero = zero && v == 0;
          if (!zero) FAIL_CHECK(name << ": Jacobi fails on " << a->label(x) << " " << a->label(y) << " " << a->label(z));
        }
      }
    }
  }
}

TEST_CASE("Cartan elements act on radical vectors by their weights") {
  auto a = alg("A2", {Weight{1, 1}, Weight{0, 0}});
  for (std::size_t i = 0; i < a->rank(); ++i) {
    for (std::size_t k = 0; k < a->radical_dim(); ++k) {
      const Rational c = a->element(a->u(k)).weight[i];
      Combination expect;
      if (c != 0) expect[a->u(k)] = c;
      CHECK(a->bracket(a->h(i), a->u(k)) == expect);
    }
  }
}

TEST_CASE("lowering elements kill the lowest vector of every summand") {
  auto a = alg("B2", {Weight{1, 0}, Weight{0, 1}});
  for (const auto& s : a->summands()) {
    const std::size_t low = a->u(s.offset + s.dim() - 1);
    for (std::size_t b = 0; b < a->roots().positive_roots().size(); ++b) CHECK(a->bracket(a->f(b), low).empty());
  }
}

TEST_CASE("radical weights must be dominant integral") {
  CHECK_THROWS_AS(alg("A1", {Weight{-2}}), InvalidRadicalError);
  CHECK_THROWS_AS(alg("A1", {Weight{Rational(1, 2)}}), InvalidRadicalError);
  CHECK_THROWS_AS(alg("A2", {Weight{1}}), InvalidRadicalError);
}

TEST_CASE("finite-dimensional simple modules") {
  auto a1 = alg("A1");
  auto l2 = realize_simple(a1, Weight{2});
  CHECK(l2.dim() == 3);
  CHECK(l2.weights == std::vector<Weight>{Weight{2}, Weight{0}, Weight{-2}});
  CHECK(realize_simple(a1, Weight{0}).dim() == 1);
  auto a2 = alg("A2");
  CHECK(realize_simple(a2, Weight{1, 0}).dim() == 3);
  CHECK(realize_simple(a2, Weight{1, 1}).dim() == 8);
  CHECK(realize_simple(alg("B2"), Weight{1, 1}).dim() == 16);
  CHECK(realize_simple(alg("G2"), Weight{1, 0}).dim() * realize_simple(alg("G2"), Weight{0, 1}).dim() == 98);
}

TEST_CASE("simple modules respect the brackets") {
  auto a = alg("A2");
  auto s = realize_simple(a, Weight{1, 1});
  for (std::size_t x = 0; x < a->g0_dim(); ++x) {
    for (std::size_t y = 0; y < a->g0_dim(); ++y) {
      exactla::RationalMatrix lhs(s.dim(), s.dim());
      for (const auto& [z, c] : a->bracket(x, y)) lhs += s.action[z] * c;
      CHECK(lhs == s.action[x] * s.action[y] - s.action[y] * s.action[x]);
    }
  }
}

TEST_CASE("functional validation") {
  auto gl2 = alg("A1", {Weight{0}});
  CHECK(is_valid(validate_g(*gl2, {3})));
  CHECK(g_from_j1(*gl2, {3}).value(0) == 3);
  CHECK_THROWS_AS(validate_g(*gl2, {1, 2}), InputError);

  auto adj = alg("A1", {Weight{2}});
  auto bad = validate_g(*adj, {0, 1, 0});
  REQUIRE(!is_valid(bad));
  CHECK(std::get<std::vector<GViolation>>(bad).front().constraint == "g(J2)");
  CHECK(is_valid(validate_g(*adj, {0, 0, 0})));

  auto both = alg("A1", {Weight{0}, Weight{2}});
  auto ok = validate_g(*both, {5, 0, 0, 0});
  REQUIRE(is_valid(ok));
  const auto& g = std::get<GFunctional>(ok);
  for (std::size_t x = 0; x < both->dim(); ++x) {
    for (std::size_t k = 0; k < both->radical_dim(); ++k) CHECK(g.evaluate(both->bracket(x, both->u(k))) == 0);
  }
  CHECK(GFunctional::zero(*both).values() == std::vector<Rational>(4, 0));
}

TEST_CASE("structure constants for G2 are antisymmetric") {
  auto a = alg("G2");
  const auto& r = a->roots();
  for (const auto& p : r.positive_roots()) {
    for (const auto& q : r.positive_roots()) {
      CHECK(a->structure_constant(p, q) == -a->structure_constant(q, p));
    }
  }
}
