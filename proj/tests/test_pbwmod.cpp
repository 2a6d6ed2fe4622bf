#include <doctest.h>

#include "oprime/errors.hpp"
#include "oprime/pbwmod.hpp"

using namespace oprime;
using namespace oprime::pbwmod;
using glie::GFunctional;
using rootsys::Weight;

namespace {

glie::AlgebraPtr alg(const std::string& name, const std::vector<Weight>& radical = {}) {
  return glie::build_algebra(rootsys::build_root_system(rootsys::cartan_from_name(name)), radical);
}

struct Gl2 {
  glie::AlgebraPtr a = alg("A1", {Weight{0}});
  GFunctional g = glie::g_from_j1(*a, {3});
};

std::map<Weight, std::size_t> dims(const TruncatedModule& m) {
  std::map<Weight, std::size_t> out;
  for (const auto& [w, c] : m.components()) {
    if (c.dim() > 0) out[w] = c.dim();
  }
  return out;
}

ModulePtr simple(const glie::AlgebraPtr& a, const Weight& w, const GFunctional& g) {
  return module_from_simple(a, glie::realize_simple(a, w), g);
}

}  // namespace

TEST_CASE("Verma windows for A1 and A2") {
  Gl2 gl;
  auto m = build_verma(gl.a, Weight{5}, gl.g, 4);
  CHECK(m->weights_descending() == std::vector<Weight>{Weight{5}, Weight{3}, Weight{1}, Weight{-1}, Weight{-3}});
  for (const auto& w : m->weights_descending()) CHECK(m->dim_at(w) == 1);
  CHECK(m->classify(Weight{-5}) == Region::Boundary);
  CHECK(m->classify(Weight{7}) == Region::Zero);
  CHECK(m->classify(Weight{4}) == Region::Zero);

  auto a2 = alg("A2");
  auto v = build_verma(a2, Weight{0, 0}, GFunctional::zero(*a2), 2);
  CHECK(v->dim_at(Weight{0, 0} - a2->roots().root_weight(rootsys::RootVector{1, 1})) == 2);
}

TEST_CASE("Verma dimensions follow the partition function") {
  for (const std::string name : {"A2", "B2"}) {
    auto a = alg(name);
    auto m = build_verma(a, Weight{1, Rational(-1, 3)}, GFunctional::zero(*a), 5);
    const auto& r = a->roots();
    for (const auto& [w, c] : m->components()) {
      std::vector<int> eta;
      for (const auto& x : r.to_root_coords(Weight{1, Rational(-1, 3)} - w)) eta.push_back(static_cast<int>(x.get_num().get_si()));
      CHECK(c.dim() == rootsys::kostant_partition(r, eta));
    }
  }
}

TEST_CASE("the radical acts by the functional on a Verma module") {
  Gl2 gl;
  auto m = build_verma(gl.a, Weight{2}, gl.g, 8);
  for (const auto& [w, c] : m->components()) {
    CHECK(m->action_matrix(gl.a->u(0), w) == exactla::RationalMatrix::identity(c.dim()) * Rational(3));
  }
  auto b = alg("A1", {Weight{0}, Weight{2}});
  auto gb = glie::g_from_j1(*b, {Rational(-1, 2)});
  auto mb = build_verma(b, Weight{1}, gb, 6);
  for (std::size_t k = 0; k < b->radical_dim(); ++k) {
    const std::size_t u = b->u(k);
    for (const auto& [w, c] : mb->components()) {
      if (mb->classify(mb->target_of(u, w)) != Region::Window) continue;
      auto mat = mb->action_matrix(u, w);
      if (mb->target_of(u, w) == w) mat -= exactla::RationalMatrix::identity(c.dim()) * gb.value(k);
      CHECK(mat.is_zero());
    }
  }
}

TEST_CASE("bracket compatibility of constructed modules") {
  Gl2 gl;
  std::vector<ModulePtr> ms = {
      build_verma(gl.a, Weight{2}, gl.g, 8),
      build_verma(gl.a, Weight{Rational(1, 2)}, gl.g, 6),
      tensor_with_simple(build_verma(gl.a, Weight{-1}, gl.g, 8), glie::realize_simple(gl.a, Weight{1})),
      simple(gl.a, Weight{3}, gl.g),
  };
  auto a2 = alg("A2", {Weight{1, 1}});
  ms.push_back(build_verma(a2, Weight{0, 1}, GFunctional::zero(*a2), 4));
  auto b2 = alg("B2", {Weight{0, 0}});
  ms.push_back(build_verma(b2, Weight{1, 0}, glie::g_from_j1(*b2, {2}), 4));
  for (const auto& m : ms) CHECK(check_bracket_compatibility(*m).empty());
}

TEST_CASE("PBW labels and word application") {
  Gl2 gl;
  auto m = build_verma(gl.a, Weight{2}, gl.g, 6);
  const std::size_t f = gl.a->f(0);
  auto v = apply(*m, {f, f, f}, basis_vector(*m, Weight{2}, 0));
  CHECK(describe(*m, v) == "f^3 w");
  auto e = m->act(gl.a->e(0), v);
  CHECK(exactla::is_zero(e.coords));
  auto low = basis_vector(*m, Weight{-10}, 0);
  CHECK_THROWS_AS(m->act(f, low), TruncationError);

  auto a2 = alg("A2");
  auto v2 = build_verma(a2, Weight{0, 0}, GFunctional::zero(*a2), 3);
  const auto& comp = *v2->component(Weight{0, 0} - a2->roots().root_weight(rootsys::RootVector{2, 1}));
  CHECK(std::find(comp.labels.begin(), comp.labels.end(), "f[a1] f[a1+a2] w") != comp.labels.end());
}

TEST_CASE("submodules generated by vectors") {
  Gl2 gl;
  auto m = build_verma(gl.a, Weight{2}, gl.g, 12);
  const std::size_t f = gl.a->f(0);
  auto v = apply(*m, {f, f, f}, basis_vector(*m, Weight{2}, 0));
  auto s = submodule_generated(m, {v});
  for (int k = 0; k <= 12; ++k) {
    const Weight w{2 - 2 * k};
    CHECK(s.dim_at(w) == (k >= 3 ? 1u : 0u));
  }
  CHECK(s.contains(v));
  CHECK(check_bracket_compatibility(*s.module).empty());

  auto zero = submodule_generated(m, {WeightVector{Weight{0}, {0}}});
  CHECK(zero.module->total_dim() == 0);
  auto all = submodule_generated(m, {basis_vector(*m, Weight{2}, 0)});
  CHECK(all.module->total_dim() == m->total_dim());
}

TEST_CASE("quotients") {
  Gl2 gl;
  auto m = build_verma(gl.a, Weight{2}, gl.g, 12);
  const std::size_t f = gl.a->f(0);
  auto s = submodule_generated(m, {apply(*m, {f, f, f}, basis_vector(*m, Weight{2}, 0))});
  auto q = quotient(m, s);
  CHECK(dims(*q.module) == std::map<Weight, std::size_t>{{Weight{2}, 1}, {Weight{0}, 1}, {Weight{-2}, 1}});
  CHECK(check_bracket_compatibility(*q.module).empty());

  auto same = quotient(m, submodule_generated(m, {}));
  CHECK(dims(*same.module) == dims(*m));
  auto none = quotient(m, submodule_generated(m, {basis_vector(*m, Weight{2}, 0)}));
  CHECK(none.module->total_dim() == 0);

  auto p = projection(q);
  auto incl = inclusion(s);
  for (const auto& [w, b] : compose(p, incl).blocks) CHECK(b.is_zero());
}

TEST_CASE("an embedding followed by a projection vanishes exactly on the kernel") {
  Gl2 gl;
  auto m = build_verma(gl.a, Weight{2}, gl.g, 12);
  const std::size_t f = gl.a->f(0);
  const WeightVector sing = apply(*m, {f, f, f}, basis_vector(*m, Weight{2}, 0));
  auto q = quotient(m, submodule_generated(m, {sing}));
  auto p = projection(q);

  auto emb = map_from_verma(build_verma(gl.a, Weight{-4}, gl.g, 9), m, sing);
  CHECK(check_intertwines(emb).empty());
  bool vanishes = true;
  for (const auto& [w, b] : compose(p, emb).blocks) vanishes = vanishes && b.is_zero();
  CHECK(vanishes);

  auto id = map_from_verma(build_verma(gl.a, Weight{2}, gl.g, 12), m, basis_vector(*m, Weight{2}, 0));
  bool id_vanishes = true;
  for (const auto& [w, b] : compose(p, id).blocks) id_vanishes = id_vanishes && b.is_zero();
  CHECK(!id_vanishes);
}

TEST_CASE("tensor products with finite-dimensional simples") {
  Gl2 gl;
  auto t = tensor_with_simple(build_verma(gl.a, Weight{-1}, gl.g, 12), glie::realize_simple(gl.a, Weight{1}));
  CHECK(t->dim_at(Weight{0}) == 1);
  for (int k = 1; k <= 12; ++k) CHECK(t->dim_at(Weight{-2 * k}) == 2);
  CHECK(t->dim_at(Weight{-1}) == 0);

  auto m = build_verma(gl.a, Weight{3}, gl.g, 6);
  auto same = tensor_with_simple(m, glie::realize_simple(gl.a, Weight{0}));
  CHECK(dims(*same) == dims(*m));

  auto t0 = tensor_with_simple(build_verma(gl.a, Weight{0}, gl.g, 10), glie::realize_simple(gl.a, Weight{1}));
  CHECK(t0->dim_at(Weight{1}) == 1);
  for (int k = 1; k <= 10; ++k) CHECK(t0->dim_at(Weight{1 - 2 * k}) == 2);
  CHECK(check_bracket_compatibility(*t0).empty());
}

TEST_CASE("Jordan sums") {
  Gl2 gl;
  auto l = simple(gl.a, Weight{2}, gl.g);
  auto n = jordan_sum({l, l}, gl.g, {{0, 0}, {1, 0}}, gl.a->u(0));
  CHECK(check_bracket_compatibility(*n.module).empty());
  CHECK(n.module->dim_at(Weight{2}) == 2);
  auto z = n.module->action_matrix(gl.a->u(0), Weight{2});
  CHECK(z.at(0, 0) == 3);
  CHECK(z.at(1, 1) == 3);
  CHECK(z.at(1, 0) == 1);
  CHECK(z.at(0, 1) == 0);

  auto single = jordan_sum({l}, gl.g, {{0}}, gl.a->u(0));
  for (const auto& [w, c] : single.module->components()) {
    CHECK(single.module->action_matrix(gl.a->u(0), w) == exactla::RationalMatrix::identity(c.dim()) * Rational(3));
  }

  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<ModulePtr> ls(k, l);
    std::vector<std::vector<Rational>> tw(k, std::vector<Rational>(k, 0));
    for (std::size_t i = 0; i + 1 < k; ++i) tw[i + 1][i] = 1;
    CHECK(check_bracket_compatibility(*jordan_sum(ls, gl.g, tw, gl.a->u(0)).module).empty());
  }

  CHECK_THROWS_AS(jordan_sum({l, l}, gl.g, {{1, 0}, {1, 0}}, gl.a->u(0)), InputError);
  CHECK_THROWS_AS(jordan_sum({l, l}, gl.g, {{0, 0}, {1, 0}}, gl.a->e(0)), InputError);
}

TEST_CASE("Jordan sums through a nontrivial radical summand") {
  auto a = alg("A1", {Weight{2}});
  auto g = GFunctional::zero(*a);
  const std::size_t low = a->u(2);
  auto top = simple(a, Weight{3}, g);
  auto bottom = simple(a, Weight{1}, g);
  auto n = jordan_sum({top, bottom}, g, {{0, 0}, {1, 0}}, low);
  CHECK(check_bracket_compatibility(*n.module).empty());
  CHECK_THROWS_AS(tensor_with_simple(n.module, glie::realize_simple(a, Weight{1})), UnsupportedTensor);
}

TEST_CASE("direct sums need matching functionals") {
  Gl2 gl;
  auto other = glie::g_from_j1(*gl.a, {1});
  auto a = simple(gl.a, Weight{1}, gl.g);
  auto b = simple(gl.a, Weight{1}, other);
  CHECK_THROWS_AS(direct_sum({a, b}), InputError);
  auto s = direct_sum({a, simple(gl.a, Weight{3}, gl.g)});
  CHECK(s.module->total_dim() == 6);
  CHECK(check_bracket_compatibility(*s.module).empty());
}

TEST_CASE("functionals from another algebra are rejected") {
  Gl2 gl;
  auto other = alg("A1", {Weight{0}, Weight{2}});
  CHECK_THROWS_AS(build_verma(gl.a, Weight{0}, glie::g_from_j1(*other, {1}), 3), InvalidFunctional);
}
