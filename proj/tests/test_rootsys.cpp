#include <doctest.h>

#include <algorithm>

#include "oprime/errors.hpp"
#include "oprime/rootsys.hpp"

using namespace oprime;
using namespace oprime::rootsys;

namespace {

RootSystem sys(const std::string& name) { return build_root_system(cartan_from_name(name)); }

std::vector<Weight> integral_grid(std::size_t rank, int lo, int hi) {
  std::vector<Weight> out;
  if (rank == 1) {
    for (int a = lo; a <= hi; ++a) out.push_back(Weight{a});
  } else {
    for (int a = lo; a <= hi; ++a) {
      for (int b = lo; b <= hi; ++b) out.push_back(Weight{a, b});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("positive roots and Weyl group orders") {
  auto a1 = sys("A1");
  CHECK(a1.positive_roots().size() == 1);
  CHECK(a1.rho() == Weight{1});
  CHECK(sys("A2").positive_roots().size() == 3);
  CHECK(sys("A2").weyl_elements().size() == 6);
  CHECK(sys("G2").positive_roots().size() == 6);
  CHECK(sys("G2").weyl_elements().size() == 12);
  CHECK(sys("B2").weyl_elements().size() == 8);
  CHECK(sys("A3").weyl_elements().size() == 24);
  CHECK(sys("B3").weyl_elements().size() == 48);
  CHECK(sys("C3").weyl_elements().size() == 48);
}

TEST_CASE("simple roots come first and labels read as sums") {
  auto r = sys("A2");
  CHECK(r.simple_index(0) == 0);
  CHECK(r.simple_index(1) == 1);
  CHECK(r.root_label(0) == "a1");
  CHECK(r.root_label(2) == "a1+a2");
  CHECK(r.root_weight(RootVector{1, 0}) == Weight{2, -1});
}

TEST_CASE("bad Cartan input is rejected") {
  CHECK_THROWS_AS(cartan_from_name("E9"), InputError);
  CHECK_THROWS_AS(build_root_system({{2, -2}, {-2, 2}}), FiniteTypeError);
  CHECK_THROWS_AS(build_root_system({{2, -1}}), InputError);
}

TEST_CASE("dot action examples") {
  auto a1 = sys("A1");
  CHECK(dot_reflect(a1, 0, Weight{2}) == Weight{-4});
  CHECK(dot_reflect(a1, 0, Weight{-1}) == Weight{-1});
  CHECK(dot_reflect(sys("A2"), 0, Weight{0, 0}) == Weight{-2, 1});
}

TEST_CASE("dot reflections are involutions and match the linear action") {
  for (const std::string name : {"A1", "A2", "B2", "G2"}) {
    auto r = sys(name);
    for (const auto& lam : integral_grid(r.rank(), -3, 3)) {
      for (std::size_t b = 0; b < r.positive_roots().size(); ++b) {
        CHECK(dot_reflect(r, b, dot_reflect(r, b, lam)) == lam);
      }
      for (const auto& w : r.weyl_elements()) CHECK(dot_action(r, w, lam) == r.act(w, lam + r.rho()) - r.rho());
    }
  }
}

TEST_CASE("linkage chains") {
  auto a1 = sys("A1");
  auto c = strongly_linked(a1, Weight{-4}, Weight{2});
  REQUIRE(c);
  REQUIRE(c->steps.size() == 1);
  CHECK(c->steps[0].root == 0);
  CHECK(c->steps[0].result == Weight{-4});
  auto self = strongly_linked(a1, Weight{2}, Weight{2});
  REQUIRE(self);
  CHECK(self->steps.empty());
  CHECK(!strongly_linked(a1, Weight{-6}, Weight{2}));
  CHECK_THROWS_AS(strongly_linked(a1, Weight{-3}, Weight{2}), NonIntegralError);

  auto a2 = sys("A2");
  auto c2 = strongly_linked(a2, Weight{-3, 0}, Weight{0, 0});
  REQUIRE(c2);
  REQUIRE(c2->steps.size() == 2);
  CHECK(c2->steps[0].root == 1);
  CHECK(c2->steps[0].result == Weight{1, -2});
  CHECK(c2->steps[1].root == 0);
  CHECK(c2->steps[1].result == Weight{-3, 0});
}

TEST_CASE("linkage agrees with orbit and order on A1 and A2") {
  for (const std::string name : {"A1", "A2"}) {
    auto r = sys(name);
    for (const auto& lam : integral_grid(r.rank(), -2, 2)) {
      auto orbit = dot_orbit(r, lam);
      if (orbit.size() > 6) continue;
      for (const auto& mu : orbit) {
        const bool linked = strongly_linked(r, mu, lam).has_value();
        CHECK(linked == r.dominated(mu, lam));
      }
      for (const auto& mu : integral_grid(r.rank(), -6, 2)) {
        if (!r.in_root_lattice(lam - mu)) continue;
        if (strongly_linked(r, mu, lam)) {
          CHECK(std::find(orbit.begin(), orbit.end(), mu) != orbit.end());
          CHECK(r.dominated(mu, lam));
        }
      }
    }
  }
}

TEST_CASE("every chain step goes down by a positive multiple of its root") {
  auto r = sys("B2");
  for (const auto& lam : integral_grid(2, 0, 2)) {
    for (const auto& mu : dot_orbit(r, lam)) {
      auto c = strongly_linked(r, mu, lam);
      if (!c) continue;
      Weight cur = lam;
      for (const auto& s : c->steps) {
        CHECK(s.result == dot_reflect(r, s.root, cur));
        CHECK(r.dominated(s.result, cur));
        CHECK(s.result != cur);
        cur = s.result;
      }
      CHECK(cur == mu);
    }
  }
}

TEST_CASE("Kostant partition function") {
  CHECK(kostant_partition(sys("A1"), {3}) == 1);
  auto a2 = sys("A2");
  CHECK(kostant_partition(a2, {0, 0}) == 1);
  CHECK(kostant_partition(a2, {1, 1}) == 2);
  CHECK(kostant_partition(a2, {2, 2}) == 3);
  CHECK(kostant_partition(a2, {-1, 0}) == 0);
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      auto parts = root_partitions(a2, {a, b});
      CHECK(parts.size() == kostant_partition(a2, {a, b}));
      CHECK(std::is_sorted(parts.begin(), parts.end()));
    }
  }
}

TEST_CASE("Weyl dimensions and lowest weights") {
  CHECK(weyl_dimension(sys("A1"), Weight{2}) == 3);
  CHECK(weyl_dimension(sys("A2"), Weight{1, 0}) == 3);
  CHECK(weyl_dimension(sys("A2"), Weight{1, 1}) == 8);
  CHECK(weyl_dimension(sys("G2"), Weight{1, 0}) * weyl_dimension(sys("G2"), Weight{0, 1}) == 98);
  CHECK(lowest_weight(sys("A2"), Weight{1, 1}) == Weight{-1, -1});
  CHECK(lowest_weight(sys("A1"), Weight{3}) == Weight{-3});
}

TEST_CASE("weights print and order") {
  Weight w{2, Rational(-1, 2)};
  CHECK(w.to_string() == "(2,-1/2)");
  CHECK(!w.is_integral());
  CHECK(Weight{1, 0}.is_dominant_integral());
  CHECK(!Weight{1, -1}.is_dominant_integral());
  CHECK(Weight{0, 1} < Weight{1, 0});
}
