#include "oprime/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "oprime/cato.hpp"
#include "oprime/errors.hpp"
#include "oprime/glie.hpp"
#include "oprime/rootsys.hpp"

namespace oprime::acceptance {

using glie::AlgebraPtr;
using glie::GFunctional;
using pbwmod::ModulePtr;
using rootsys::RootSystem;
using rootsys::Weight;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

AlgebraPtr algebra(const std::string& cartan, const std::vector<Weight>& radical) {
  return glie::build_algebra(rootsys::build_root_system(rootsys::cartan_from_name(cartan)), radical);
}

std::string join(const std::set<Weight>& ws) {
  std::string s = "{";
  for (const auto& w : ws) s += (s.size() > 1 ? " " : "") + w.to_string();
  return s + "}";
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

// gl2-like: sl2 with a one-dimensional centre z, g(z) = 3.
struct Gl2 {
  AlgebraPtr a = algebra("A1", {Weight{0}});
  GFunctional g = glie::g_from_j1(*a, {3});
};

Outcome linkage_sl2(Collector& c) {
  Gl2 gl;
  const auto& r = gl.a->roots();
  const int depth = 12;
  Outcome o;
  int embeddings = 0;
  for (int l = -5; l <= 5; ++l) {
    const Weight lam{l};
    auto m = pbwmod::build_verma(gl.a, lam, gl.g, depth);
    c.modules.push_back(m);
    std::set<Weight> linked, found;
    for (int k = 0; k <= depth; ++k) {
      const Weight mu{l - 2 * k};
      const bool is_linked = rootsys::strongly_linked(r, mu, lam).has_value();
      auto e = cato::embed_verma(gl.a, mu, lam, gl.g, depth);
      if (is_linked != e.has_value()) fail(o, "embedding and linkage disagree at " + mu.to_string());
      if (k == 0) continue;
      if (is_linked) {
        linked.insert(mu);
        ++embeddings;
        exactla::Subspace s(m->dim_at(mu));
        for (const auto& b : cato::find_maximal_vectors(*m, mu, gl.g).basis) s.insert(b);
        if (!s.contains(e->image.coords)) fail(o, "embedding image at " + mu.to_string() + " is not maximal");
      } else {
        auto src = pbwmod::build_verma(gl.a, mu, gl.g, depth - k);
        if (cato::hom_dimension(src, m) != 0) fail(o, "nonzero map from unlinked M" + mu.to_string());
      }
    }
    for (const auto& w : cato::maximal_weights(*m, {lam})) found.insert(w);
    if (found != linked) fail(o, "lam " + lam.to_string() + ": maximal " + join(found) + " vs linked " + join(linked));
  }
  if (o.pass) o.detail = std::to_string(embeddings) + " proper embeddings, maximal weights match linkage for 11 weights";
  return o;
}

Outcome linkage_sl3(Collector& c) {
  auto a = algebra("A2", {});
  const auto& r = a->roots();
  const auto g = GFunctional::zero(*a);
  const Weight lam{0, 0};
  const int depth = 6;
  Outcome o;
  auto m = pbwmod::build_verma(a, lam, g, depth);
  c.modules.push_back(m);

  std::set<Weight> expected, found;
  for (const auto& w : rootsys::dot_orbit(r, lam)) {
    if (w == lam) continue;
    auto d = r.depth_below(lam, w);
    if (d && *d <= depth && rootsys::strongly_linked(r, w, lam)) expected.insert(w);
  }
  for (const auto& w : cato::maximal_weights(*m, {lam})) {
    found.insert(w);
    if (cato::find_maximal_vectors(*m, w, g).basis.size() != 1) fail(o, "maximal space at " + w.to_string() + " is not a line");
  }
  if (found != expected) fail(o, "maximal " + join(found) + " vs orbit " + join(expected));
  for (const auto& w : expected) {
    if (!cato::embed_verma(a, w, lam, g, depth)) fail(o, "no embedding from " + w.to_string());
  }
  auto chain = rootsys::strongly_linked(r, Weight{-3, 0}, lam);
  const bool chain_ok = chain && chain->steps.size() == 2 && chain->steps[0].root == r.simple_index(1) &&
                        chain->steps[0].result == Weight{1, -2} && chain->steps[1].root == r.simple_index(0) &&
                        chain->steps[1].result == Weight{-3, 0};
  if (!chain_ok) fail(o, "chain to (-3,0) is not (a2, a1)");
  if (o.pass) o.detail = "maximal weights " + join(found) + ", chain (a2, a1) to (-3,0)";
  return o;
}

Outcome singular_formula(Collector& c) {
  Outcome o;
  int checks = 0;
  struct Case {
    std::string cartan;
    std::vector<Weight> radical;
    std::vector<std::vector<Rational>> j1_samples;
  };
  const std::vector<std::vector<Rational>> one{{0}, {3}, {Rational(-5, 2)}};
  const std::vector<Case> cases = {
      {"A1", {Weight{0}}, one},
      {"A1", {Weight{2}}, {{}}},
      {"A1", {Weight{0}, Weight{2}}, one},
      {"A2", {Weight{0, 0}}, one},
      {"A2", {Weight{1, 1}}, {{}}},
      {"A2", {Weight{0, 0}, Weight{1, 1}}, one},
  };
  for (const auto& cs : cases) {
    auto a = algebra(cs.cartan, cs.radical);
    const std::size_t rank = a->rank();
    for (const auto& j1 : cs.j1_samples) {
      const auto g = glie::g_from_j1(*a, j1);
      for (std::size_t i = 0; i < rank; ++i) {
        for (int li = 0; li <= 2; ++li) {
          std::vector<Weight> lams;
          if (rank == 1) {
            lams.push_back(Weight{li});
          } else {
            for (Rational other : {Rational(-1), Rational(1, 2)}) {
              Weight w{0, 0};
              w[i] = li;
              w[1 - i] = other;
              lams.push_back(w);
            }
          }
          for (const auto& lam : lams) {
            auto fc = cato::singular_vector_formula_check(a, lam, g, i);
            c.modules.push_back(fc.module);
            ++checks;
            if (!fc.pass) {
              fail(o, cs.cartan + " lam " + lam.to_string() + " i " + std::to_string(i + 1) + ": " + fc.failures.front());
            }
          }
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " (algebra, g, lam, i) cases, every term matches";
  return o;
}

Outcome g_constraints(Collector&) {
  auto a = algebra("A1", {Weight{0}, Weight{2}});
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), coin(0, 1);
  Outcome o;
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool on_j1_only = coin(rng) == 1;
    std::vector<Rational> values(a->radical_dim());
    for (auto& v : values) {
      v = Rational(num(rng), den(rng));
      v.canonicalize();
    }
    if (on_j1_only) {
      for (std::size_t k : a->j2()) values[k] = 0;
    }
    bool vanishes = true;
    for (std::size_t k : a->j2()) vanishes = vanishes && values[k] == 0;
    auto res = glie::validate_g(*a, values);
    const auto* g = std::get_if<GFunctional>(&res);
    if (bool(g) != vanishes) {
      fail(o, "trial " + std::to_string(trial) + ": validate_g disagrees with vanishing on L(2)");
      continue;
    }
    if (!g) {
      ++rejected;
      if (std::get<std::vector<glie::GViolation>>(res).empty()) fail(o, "rejection without a violation");
      continue;
    }
    ++accepted;
    for (std::size_t x = 0; x < a->dim(); ++x) {
      for (std::size_t k = 0; k < a->radical_dim(); ++k) {
        if (g->evaluate(a->bracket(x, a->u(k))) != 0) {
          fail(o, "accepted g is nonzero on [" + a->label(x) + "," + a->label(a->u(k)) + "]");
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(accepted) + " accepted, " + std::to_string(rejected) + " rejected";
  return o;
}

Outcome j2_zero(Collector& c) {
  auto a = algebra("A1", {Weight{2}});
  const auto g = GFunctional::zero(*a);
  Outcome o;
  std::size_t blocks = 0;
  for (int l : {0, 2, 5}) {
    auto m = pbwmod::build_verma(a, Weight{l}, g, 8);
    c.modules.push_back(m);
    for (std::size_t k : a->j2()) {
      const std::size_t u = a->u(k);
      for (const auto& [w, comp] : m->components()) {
        if (m->classify(m->target_of(u, w)) != pbwmod::Region::Window) continue;
        ++blocks;
        if (!m->action_matrix(u, w).is_zero()) fail(o, a->label(u) + " acts nontrivially at " + w.to_string());
      }
    }
  }
  if (o.pass) o.detail = std::to_string(blocks) + " J2 blocks, all zero";
  return o;
}

Outcome nonliftable(Collector& c) {
  Gl2 gl;
  Outcome o;
  auto p = pbwmod::build_verma(gl.a, Weight{2}, gl.g, 12);
  auto l2 = pbwmod::module_from_simple(gl.a, glie::realize_simple(gl.a, Weight{2}), gl.g);
  auto n = pbwmod::jordan_sum({l2, l2}, gl.g, {{0, 0}, {1, 0}}, gl.a->u(0));
  auto l = pbwmod::direct_sum({l2});
  auto pi = pbwmod::summand_projection(n, l, {0});
  auto phi = pbwmod::map_from_verma(p, l.module, l.module->generators().front());
  c.modules.insert(c.modules.end(), {p, l2, n.module, l.module});
  auto cert = cato::nonliftability_certificate(p, pi, phi);
  if (cert.full.liftable) fail(o, "full system is liftable");
  if (!cert.full.liftable && !cert.full.witness_verified) fail(o, "witness does not verify");
  if (!cert.g0_only.liftable) fail(o, "g0 system is inconsistent");
  if (cert.g0_only.liftable) {
    std::vector<std::size_t> g0;
    for (std::size_t x = 0; x < gl.a->g0_dim(); ++x) g0.push_back(x);
    if (!pbwmod::check_intertwines(*cert.g0_only.map, g0).empty()) fail(o, "g0 lift does not intertwine g0");
    if (cert.radical_failures.empty()) fail(o, "g0 lift unexpectedly intertwines z");
  }
  if (o.pass) {
    o.detail = "full system inconsistent (" + std::to_string(cert.full.equations) + " equations, witness verified), g0 system liftable";
  }
  return o;
}

Outcome tower(Collector& c) {
  Gl2 gl;
  Outcome o;
  const Weight gamma{2};
  auto steps = cato::jordan_tower_growth(gl.a, gamma, gl.g, 6);
  for (const auto& s : steps) {
    const std::string k = "k=" + std::to_string(s.k);
    if (!s.axioms_pass) fail(o, k + ": axioms fail");
    if (!s.connecting_ok) fail(o, k + ": connecting map fails");
    if (s.nilpotency != s.k) fail(o, k + ": nilpotency " + std::to_string(s.nilpotency));
    if (s.span_dim != s.k) fail(o, k + ": span dimension " + std::to_string(s.span_dim));
    c.modules.push_back(cato::jordan_tower(gl.a, gamma, gl.g, s.k, gl.a->u(0)).module);
  }
  if (o.pass) o.detail = "k=1..6: nilpotency k, span k, dims 3..18";
  return o;
}

Outcome reciprocity(Collector& c) {
  Gl2 gl;
  Outcome o;
  const int depth = 12;
  auto t = cato::reciprocity_check_sl2(gl.a, gl.g, Weight{0}, depth);
  c.modules.push_back(pbwmod::build_verma(gl.a, Weight{0}, gl.g, depth));
  c.modules.push_back(pbwmod::tensor_with_simple(pbwmod::build_verma(gl.a, Weight{-1}, gl.g, depth),
                                                 glie::realize_simple(gl.a, Weight{1})));
  for (const auto& f : t.filtrations) c.filtration_lengths.emplace_back(f.length(), f.g0_length.value_or(0));
  const std::vector<std::vector<int>> expected{{1, 1}, {0, 1}};
  if (!t.generator_ok) fail(o, "J does not act by g on the generator of P(-2,g)");
  if (t.left != expected) fail(o, "filtration multiplicities differ from (1,1;0,1)");
  if (t.right != expected) fail(o, "composition multiplicities differ from (1,1;0,1)");
  if (o.pass) o.detail = "block {0,-2}: both sides (1,1;0,1)";
  return o;
}

// Multisets of positive roots, by coin change over the root coordinates.
std::map<std::vector<int>, std::size_t> partition_oracle(const RootSystem& r, int max_height) {
  const std::size_t n = r.rank();
  std::vector<std::vector<int>> points;
  std::vector<int> cur(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      points.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, max_height);
  std::sort(points.begin(), points.end());
  std::map<std::vector<int>, std::size_t> dp;
  for (const auto& p : points) dp[p] = 0;
  dp[std::vector<int>(n, 0)] = 1;
  for (const auto& beta : r.positive_roots()) {
    for (const auto& p : points) {
      std::vector<int> q(n);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        q[i] = p[i] - beta[i];
        ok = ok && q[i] >= 0;
      }
      if (ok) dp[p] += dp[q];
    }
  }
  return dp;
}

Outcome weight_dims(Collector& c) {
  Outcome o;
  const int depth = 6;
  auto plain = algebra("A2", {});
  auto central = algebra("A2", {Weight{0, 0}});
  struct Case {
    AlgebraPtr a;
    GFunctional g;
    Weight lam;
  };
  const std::vector<Case> cases = {
      {plain, GFunctional::zero(*plain), Weight{0, 0}},
      {plain, GFunctional::zero(*plain), Weight{1, 2}},
      {plain, GFunctional::zero(*plain), Weight{Rational(-1, 2), Rational(2, 3)}},
      {central, glie::g_from_j1(*central, {5}), Weight{-3, 1}},
  };
  const auto oracle = partition_oracle(plain->roots(), depth);
  std::size_t compared = 0;
  for (const auto& cs : cases) {
    auto m = pbwmod::build_verma(cs.a, cs.lam, cs.g, depth);
    c.modules.push_back(m);
    const auto& r = cs.a->roots();
    for (const auto& [nu, count] : oracle) {
      const Weight w = cs.lam - r.root_weight(nu);
      ++compared;
      if (m->dim_at(w) != count || rootsys::kostant_partition(r, nu) != count) {
        fail(o, "dimension mismatch at lam " + cs.lam.to_string() + " minus " + w.to_string());
      }
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " weight spaces agree with the partition oracle";
  return o;
}

Outcome soundness(Collector& c) {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& m : c.modules) {
    if (!m) continue;
    ++checked;
    auto v = pbwmod::check_bracket_compatibility(*m);
    if (!v.empty()) {
      fail(o, "bracket violation for [" + m->algebra().label(v.front().x) + "," + m->algebra().label(v.front().y) +
                  "] at " + v.front().weight.to_string());
    }
  }
  Gl2 gl;
  for (int l = -5; l <= 5; ++l) {
    auto f = cato::standard_filtration(pbwmod::build_verma(gl.a, Weight{l}, gl.g, 12));
    c.filtration_lengths.emplace_back(f.length(), f.g0_length.value_or(0));
  }
  for (const auto& [full, g0] : c.filtration_lengths) {
    if (full != g0) fail(o, "standard filtration lengths " + std::to_string(full) + " vs g0 " + std::to_string(g0));
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " modules bracket-compatible, " + std::to_string(c.filtration_lengths.size()) +
               " filtrations with equal lengths";
  }
  return o;
}

struct Spec {
  const char* name;
  double limit;
  Outcome (*run)(Collector&);
};

const std::map<int, Spec>& specs() {
  static const std::map<int, Spec> s = {
      {1, {"strong linkage and embeddings, sl2", 10, linkage_sl2}},
      {2, {"strong linkage on sl3", 60, linkage_sl3}},
      {3, {"singular-vector formula", 30, singular_formula}},
      {4, {"functional constraints", 5, g_constraints}},
      {5, {"J2 acts by zero on A1 x L(2) Vermas", 10, j2_zero}},
      {6, {"non-liftability certificate", 10, nonliftable}},
      {7, {"Jordan tower growth", 20, tower}},
      {8, {"BGG reciprocity on the sl2 block {0,-2}", 20, reciprocity}},
      {9, {"weight-space dimensions on A2", 30, weight_dims}},
      {10, {"bracket compatibility and filtration lengths", 105, soundness}},
  };
  return s;
}

}  // namespace

CriterionResult run_criterion(int id, Collector& c) {
  auto it = specs().find(id);
  if (it == specs().end()) throw InputError("no criterion " + std::to_string(id));
  const Spec& s = it->second;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = s.run(c);
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.pass && secs >= s.limit) fail(o, "over the time limit");
  return {id, s.name, o.pass, secs, s.limit, o.detail};
}

std::vector<CriterionResult> run_all() {
  Collector c;
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id, c));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.2f s / %.0f s)", r.seconds, r.limit);
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << "  " << r.name << "  " << buf << "  " << r.detail;
  return os.str();
}

}  // namespace oprime::acceptance
