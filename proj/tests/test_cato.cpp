#include <doctest.h>

#include "oprime/cato.hpp"
#include "oprime/errors.hpp"

using namespace oprime;
using namespace oprime::cato;
using pbwmod::Region;
using rootsys::Weight;

namespace {

glie::AlgebraPtr alg(const std::string& name, const std::vector<Weight>& radical = {}) {
  return glie::build_algebra(rootsys::build_root_system(rootsys::cartan_from_name(name)), radical);
}

struct Gl2 {
  glie::AlgebraPtr a = alg("A1", {Weight{0}});
  GFunctional g = glie::g_from_j1(*a, {3});
};

ModulePtr simple(const glie::AlgebraPtr& a, const Weight& w, const GFunctional& g) {
  return pbwmod::module_from_simple(a, glie::realize_simple(a, w), g);
}

// L(gamma + 2) + L(gamma) over A1 x L(2), joined by the lowest radical vector.
pbwmod::DirectSum witness_pair(const glie::AlgebraPtr& a, int gamma) {
  auto g = GFunctional::zero(*a);
  return pbwmod::jordan_sum({simple(a, Weight{gamma + 2}, g), simple(a, Weight{gamma}, g)}, g, {{0, 0}, {1, 0}},
                            a->u(2));
}

}  // namespace

TEST_CASE("maximal vectors") {
  Gl2 gl;
  auto m = pbwmod::build_verma(gl.a, Weight{2}, gl.g, 12);
  auto at4 = find_maximal_vectors(*m, Weight{-4});
  REQUIRE(at4.basis.size() == 1);
  CHECK(pbwmod::describe(*m, {Weight{-4}, at4.basis[0]}) == "f^3 w");
  CHECK(find_maximal_vectors(*m, Weight{0}).basis.empty());
  CHECK(find_maximal_vectors(*m, Weight{2}).basis.size() == 1);

  auto wrong = glie::g_from_j1(*gl.a, {1});
  CHECK(find_maximal_vectors(*m, Weight{-4}, wrong).basis.empty());

  auto a2 = alg("A2");
  auto v = pbwmod::build_verma(a2, Weight{0, 0}, GFunctional::zero(*a2), 4);
  CHECK(find_maximal_vectors(*v, Weight{-2, 1}).basis.size() == 1);
}

TEST_CASE("singular-vector formula") {
  Gl2 gl;
  auto fc = singular_vector_formula_check(gl.a, Weight{2}, gl.g, 0);
  CHECK(fc.pass);
  CHECK(fc.n == 3);
  CHECK(fc.vector == "f^3 w");
  CHECK(fc.terms.at("u1").size() == 4);

  auto a2 = alg("A2");
  auto f2 = singular_vector_formula_check(a2, Weight{0, 0}, GFunctional::zero(*a2), 0);
  CHECK(f2.pass);
  CHECK(f2.n == 1);

  CHECK_THROWS_AS(singular_vector_formula_check(gl.a, Weight{-1}, gl.g, 0), NotApplicable);
  CHECK_THROWS_AS(singular_vector_formula_check(gl.a, Weight{Rational(1, 2)}, gl.g, 0), NotApplicable);

  auto b = alg("A1", {Weight{0}, Weight{2}});
  for (int l = 0; l <= 3; ++l) CHECK(singular_vector_formula_check(b, Weight{l}, glie::g_from_j1(*b, {7}), 0).pass);
}

TEST_CASE("Verma embeddings") {
  Gl2 gl;
  auto e = embed_verma(gl.a, Weight{-4}, Weight{2}, gl.g, 12);
  REQUIRE(e);
  CHECK(pbwmod::describe(*e->map.target, e->image) == "f^3 w");
  for (int k = 0; k <= 6; ++k) {
    const Weight w{-4 - 2 * k};
    CHECK(exactla::rank(e->map.block(w)) == 1);
  }
  auto id = embed_verma(gl.a, Weight{2}, Weight{2}, gl.g, 12);
  REQUIRE(id);
  CHECK(id->chain.steps.empty());
  CHECK(pbwmod::describe(*id->map.target, id->image) == "w");
  CHECK(!embed_verma(gl.a, Weight{-6}, Weight{2}, gl.g, 12));
  CHECK_THROWS_AS(embed_verma(gl.a, Weight{-3}, Weight{2}, gl.g, 12), NonIntegralError);
  CHECK_THROWS_AS(embed_verma(gl.a, Weight{-4}, Weight{2}, gl.g, 2), TruncationError);

  auto a2 = alg("A2");
  auto g0 = GFunctional::zero(*a2);
  auto chain = embed_verma(a2, Weight{-3, 0}, Weight{0, 0}, g0, 6);
  REQUIRE(chain);
  CHECK(chain->chain.steps.size() == 2);
  CHECK(pbwmod::check_intertwines(chain->map).empty());
}

TEST_CASE("composition multiplicities for sl2") {
  Gl2 gl;
  auto m2 = composition_multiplicities_sl2(gl.a, Weight{2}, gl.g, 12);
  CHECK(m2.multiplicities == std::map<Weight, int>{{Weight{2}, 1}, {Weight{-4}, 1}});
  CHECK(composition_multiplicities_sl2(gl.a, Weight{-1}, gl.g, 12).multiplicities ==
        std::map<Weight, int>{{Weight{-1}, 1}});
  CHECK(composition_multiplicities_sl2(gl.a, Weight{-4}, gl.g, 12).multiplicities ==
        std::map<Weight, int>{{Weight{-4}, 1}});
  CHECK_THROWS_AS(composition_multiplicities_sl2(alg("A2"), Weight{0, 0}, GFunctional::zero(*alg("A2")), 4),
                  UnsupportedRank);
}

TEST_CASE("the maximal submodule misses the top") {
  Gl2 gl;
  for (int l = -5; l <= 5; ++l) CHECK(maximal_submodule_avoids_top(gl.a, Weight{l}, gl.g, 12));
  CHECK(maximal_submodule_avoids_top(gl.a, Weight{Rational(1, 3)}, gl.g, 8));
}

TEST_CASE("homomorphisms between Vermas with different functionals vanish") {
  Gl2 gl;
  auto other = glie::g_from_j1(*gl.a, {1});
  auto src = pbwmod::build_verma(gl.a, Weight{-4}, other, 6);
  auto dst = pbwmod::build_verma(gl.a, Weight{2}, gl.g, 9);
  CHECK(hom_dimension(src, dst) == 0);
  CHECK(hom_dimension(pbwmod::build_verma(gl.a, Weight{-4}, gl.g, 6), dst) == 1);
}

TEST_CASE("J2 nilpotency") {
  auto a = alg("A1", {Weight{2}});
  auto g = GFunctional::zero(*a);
  for (int l : {0, 2, 5}) CHECK(j2_nilpotency_degree(*pbwmod::build_verma(a, Weight{l}, g, 8)) == 1);
  auto pair = witness_pair(a, 1);
  CHECK(j2_nilpotency_degree(*pair.module) == 2);
  CHECK(j2_nilpotency_degree(*simple(a, Weight{3}, g)) == 1);
  Gl2 gl;
  CHECK(j2_nilpotency_degree(*pbwmod::build_verma(gl.a, Weight{1}, gl.g, 4)) == 0);
}

TEST_CASE("J2 nilpotency never exceeds the highest weight filtration length") {
  auto a = alg("A1", {Weight{2}});
  auto g = GFunctional::zero(*a);
  std::vector<ModulePtr> ms = {witness_pair(a, 0).module, witness_pair(a, 2).module, simple(a, Weight{2}, g),
                               pbwmod::build_verma(a, Weight{2}, g, 8)};
  for (const auto& m : ms) CHECK(j2_nilpotency_degree(*m) <= highest_weight_filtration(m, g).length());
}

TEST_CASE("category axioms") {
  Gl2 gl;
  CHECK(check_oprime_axioms(pbwmod::build_verma(gl.a, Weight{2}, gl.g, 8)).all_pass());
  CHECK(check_oprime_axioms(jordan_tower(gl.a, Weight{2}, gl.g, 4, gl.a->u(0)).module).all_pass());

  auto bad = std::make_shared<pbwmod::TruncatedModule>(gl.a, std::vector<Weight>{Weight{0}}, 0, true);
  bad->add_component(Weight{0}, pbwmod::Component{{"v1", "v2"}, {}});
  exactla::RationalMatrix h(2, 2);
  h.set(0, 1, 1);
  bad->set_action(gl.a->h(0), Weight{0}, h);
  bad->add_generator({Weight{0}, {1, 0}});
  bad->add_generator({Weight{0}, {0, 1}});
  auto rep = check_oprime_axioms(bad);
  CHECK(!rep.all_pass());
  CHECK(!rep.entries[1].pass);
  CHECK(rep.entries[0].pass);
}

TEST_CASE("highest weight filtrations") {
  auto a = alg("A1", {Weight{2}});
  auto g = GFunctional::zero(*a);
  auto pair = highest_weight_filtration(witness_pair(a, 1).module, g);
  REQUIRE(pair.length() == 2);
  CHECK(pair.steps[0].weight == Weight{1});
  CHECK(pair.steps[1].weight == Weight{3});
  CHECK(highest_weight_filtration(simple(a, Weight{2}, g), g).length() == 1);

  Gl2 gl;
  auto t3 = highest_weight_filtration(jordan_tower(gl.a, Weight{2}, gl.g, 3, gl.a->u(0)).module);
  REQUIRE(t3.length() == 3);
  for (const auto& s : t3.steps) CHECK(s.weight == Weight{2});
}

TEST_CASE("standard filtrations") {
  Gl2 gl;
  auto p = pbwmod::tensor_with_simple(pbwmod::build_verma(gl.a, Weight{-1}, gl.g, 12),
                                      glie::realize_simple(gl.a, Weight{1}));
  auto f = standard_filtration(p);
  REQUIRE(f.length() == 2);
  CHECK(f.steps[0].weight == Weight{0});
  CHECK(f.steps[1].weight == Weight{-2});
  CHECK(f.g0_length == 2u);

  auto m = standard_filtration(pbwmod::build_verma(gl.a, Weight{3}, gl.g, 12));
  CHECK(m.length() == 1);
  CHECK(m.g0_length == 1u);

  auto sum = pbwmod::direct_sum({pbwmod::build_verma(gl.a, Weight{1}, gl.g, 10), pbwmod::build_verma(gl.a, Weight{-3}, gl.g, 8)});
  auto s = standard_filtration(sum.module);
  REQUIRE(s.length() == 2);
  CHECK(s.steps[0].weight == Weight{1});
  CHECK(s.steps[1].weight == Weight{-3});

  CHECK_THROWS_AS(standard_filtration(simple(gl.a, Weight{2}, gl.g)), NoStandardFiltration);
}

TEST_CASE("non-liftability certificate") {
  Gl2 gl;
  auto p = pbwmod::build_verma(gl.a, Weight{2}, gl.g, 12);
  auto l2 = simple(gl.a, Weight{2}, gl.g);
  auto n = pbwmod::jordan_sum({l2, l2}, gl.g, {{0, 0}, {1, 0}}, gl.a->u(0));
  auto l = pbwmod::direct_sum({l2});
  auto pi = pbwmod::summand_projection(n, l, {0});
  auto phi = pbwmod::map_from_verma(p, l.module, l.module->generators().front());
  auto cert = nonliftability_certificate(p, pi, phi);
  CHECK(!cert.full.liftable);
  CHECK(cert.full.witness_verified);
  CHECK(exactla::verify_witness(cert.full.system, cert.full.rhs, cert.full.witness));
  CHECK(cert.g0_only.liftable);
  CHECK(!cert.radical_failures.empty());

  auto id = pbwmod::summand_projection(l, l, {0});
  auto trivial = nonliftability_certificate(p, id, phi);
  REQUIRE(trivial.full.liftable);
  for (const auto& [w, b] : trivial.full.map->blocks) CHECK(b == phi.block(w));

  auto q = simple_quotient(gl.a, Weight{2}, gl.g, 12);
  auto proj = pbwmod::projection(q);
  auto self = pbwmod::map_from_verma(p, p, pbwmod::basis_vector(*p, Weight{2}, 0));
  auto via = nonliftability_certificate(p, proj, pbwmod::compose(proj, self));
  CHECK(via.full.liftable);

  CHECK_THROWS_AS(nonliftability_certificate(l2, pi, phi), DimensionError);
}

TEST_CASE("universal maps") {
  Gl2 gl;
  auto target = pbwmod::build_verma(gl.a, Weight{2}, gl.g, 12);
  auto rep = find_maximal_vectors(*target, Weight{-4});
  auto map = universal_map(pbwmod::build_verma(gl.a, Weight{-4}, gl.g, 6), target, {Weight{-4}, rep.basis[0]});
  CHECK(pbwmod::check_intertwines(map).empty());
  CHECK_THROWS_AS(universal_map(pbwmod::build_verma(gl.a, Weight{0}, gl.g, 6), target,
                                pbwmod::basis_vector(*target, Weight{0}, 0)),
                  InputError);
}

TEST_CASE("Jordan towers grow linearly") {
  Gl2 gl;
  auto steps = jordan_tower_growth(gl.a, Weight{2}, gl.g, 4);
  REQUIRE(steps.size() == 4);
  for (const auto& s : steps) {
    CHECK(s.axioms_pass);
    CHECK(s.connecting_ok);
    CHECK(s.nilpotency == s.k);
    CHECK(s.span_dim == s.k);
    CHECK(s.dim == 3 * s.k);
  }
  auto t3 = jordan_tower(gl.a, Weight{2}, gl.g, 3, gl.a->u(0));
  auto t2 = jordan_tower(gl.a, Weight{2}, gl.g, 2, gl.a->u(0));
  auto conn = pbwmod::summand_projection(t3, t2, {0, 1});
  CHECK(pbwmod::check_intertwines(conn, std::vector<std::size_t>{gl.a->u(0)}).empty());
  CHECK_THROWS_AS(jordan_tower(gl.a, Weight{-1}, gl.g, 2, gl.a->u(0)), NotApplicable);
}

TEST_CASE("BGG reciprocity on sl2 blocks") {
  Gl2 gl;
  auto t = reciprocity_check_sl2(gl.a, gl.g, Weight{0}, 12);
  CHECK(t.block == std::vector<Weight>{Weight{0}, Weight{-2}});
  CHECK(t.left == std::vector<std::vector<int>>{{1, 1}, {0, 1}});
  CHECK(t.equal());
  CHECK(t.generator_ok);
  for (int l : {1, 2, -4}) CHECK(reciprocity_check_sl2(gl.a, gl.g, Weight{l}, 12).equal());
  CHECK_THROWS_AS(reciprocity_check_sl2(gl.a, gl.g, Weight{-1}, 12), SingularBlockUnsupported);
  auto j2 = alg("A1", {Weight{2}});
  CHECK_THROWS_AS(reciprocity_check_sl2(j2, GFunctional::zero(*j2), Weight{0}, 12), NotApplicable);
}
