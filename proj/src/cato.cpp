#include "oprime/cato.hpp"

#include <algorithm>
#include <set>

#include "oprime/errors.hpp"

namespace oprime::cato {

using pbwmod::Closure;
using pbwmod::Region;
using exactla::operator+;
using exactla::operator*;

namespace {

GFunctional resolve_g(const TruncatedModule& m, const std::optional<GFunctional>& g) {
  if (g) return *g;
  if (m.g_label()) return *m.g_label();
  throw InputError("module carries no functional; pass one explicitly");
}

bool is_zero_vec(const WeightVector& v) { return v.coords.empty() || exactla::is_zero(v.coords); }

bool same_vector(const WeightVector& a, const WeightVector& b) {
  if (is_zero_vec(a) || is_zero_vec(b)) return is_zero_vec(a) && is_zero_vec(b);
  return a.weight == b.weight && a.coords == b.coords;
}

WeightVector scaled(const Rational& c, WeightVector v) {
  for (auto& x : v.coords) x *= c;
  return v;
}

WeightVector plus(const WeightVector& a, const WeightVector& b) {
  if (is_zero_vec(a)) return b;
  if (is_zero_vec(b)) return a;
  if (a.weight != b.weight) throw InternalConsistencyError("adding vectors of different weights");
  return {a.weight, a.coords + b.coords};
}

RationalMatrix stack(const std::vector<RationalMatrix>& blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  RationalMatrix out(rows, cols);
  std::size_t at = 0;
  for (const auto& b : blocks) {
    out.paste(b, at, 0);
    at += b.rows();
  }
  return out;
}

std::vector<Vector> e_kernel(const TruncatedModule& m, const Weight& mu) {
  const auto& a = m.algebra();
  const auto& r = a.roots();
  const std::size_t d = m.dim_at(mu);
  if (d == 0) return {};
  std::vector<RationalMatrix> blocks;
  for (std::size_t i = 0; i < r.rank(); ++i) blocks.push_back(m.action_matrix(a.e(r.simple_index(i)), mu));
  return exactla::kernel(stack(blocks, d));
}

std::vector<Weight> sorted_desc(const TruncatedModule& m, std::vector<Weight> ws) {
  std::sort(ws.begin(), ws.end(), [&](const Weight& x, const Weight& y) {
    const int dx = m.depth_of(x).value_or(0), dy = m.depth_of(y).value_or(0);
    if (dx != dy) return dx < dy;
    return y < x;
  });
  return ws;
}

std::vector<rootsys::RootVector> drops_of_height_at_most(std::size_t rank, int h) {
  std::vector<rootsys::RootVector> out;
  rootsys::RootVector cur(rank, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == rank) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, h);
  return out;
}

}  // namespace

MaximalVectorReport find_maximal_vectors(const TruncatedModule& m, const Weight& mu,
                                         const std::optional<GFunctional>& g_in) {
  const GFunctional g = resolve_g(m, g_in);
  const auto& a = m.algebra();
  const auto& r = a.roots();
  MaximalVectorReport rep{mu, {}, g, {}};
  const Region reg = m.classify(mu);
  if (reg == Region::Boundary) throw TruncationError("weight " + mu.to_string() + " lies below the window");
  const std::size_t d = m.dim_at(mu);
  if (reg == Region::Zero || d == 0) return rep;

  std::vector<RationalMatrix> blocks;
  for (std::size_t i = 0; i < r.rank(); ++i) {
    const std::size_t e = a.e(r.simple_index(i));
    if (m.classify(m.target_of(e, mu)) == Region::Boundary) {
      throw TruncationError("no headroom above " + mu.to_string());
    }
    blocks.push_back(m.action_matrix(e, mu));
  }
  for (std::size_t k = 0; k < a.radical_dim(); ++k) {
    const std::size_t u = a.u(k);
    const Weight t = m.target_of(u, mu);
    const Region tr = m.classify(t);
    if (tr == Region::Boundary) {
      rep.unchecked.push_back(a.label(u));
      continue;
    }
    RationalMatrix block = m.action_matrix(u, mu);
    if (t == mu) block -= RationalMatrix::identity(d) * g.value(k);
    blocks.push_back(std::move(block));
  }
  rep.basis = exactla::kernel(stack(blocks, d));
  return rep;
}

std::vector<Weight> maximal_weights(const TruncatedModule& m, const std::vector<Weight>& skip) {
  std::vector<Weight> out;
  for (const auto& w : m.weights_descending()) {
    if (std::find(skip.begin(), skip.end(), w) != skip.end()) continue;
    try {
      if (!find_maximal_vectors(m, w).basis.empty()) out.push_back(w);
    } catch (const TruncationError&) {
    }
  }
  return out;
}

FormulaCheck singular_vector_formula_check(const AlgebraPtr& a, const Weight& lam, const GFunctional& g,
                                           std::size_t i) {
  const auto& r = a->roots();
  if (i >= r.rank()) throw InputError("simple root index out of range");
  if (lam.size() != r.rank()) throw DimensionError("weight rank mismatch");
  const Rational nq = lam[i] + 1;
  if (!is_integer(nq) || nq <= 0) {
    throw NotApplicable("<lam+rho, alpha_" + std::to_string(i + 1) + "^vee> = " + to_string(nq) +
                        " is not a positive integer");
  }
  const int n = static_cast<int>(nq.get_num().get_si());
  Rational lowest = 0;
  for (std::size_t k = 0; k < a->radical_dim(); ++k) {
    Rational h = 0;
    for (const auto& c : r.to_root_coords(a->element(a->u(k)).weight)) h += c;
    lowest = std::min(lowest, h);
  }
  Integer extra = (-lowest.get_num() + lowest.get_den() - 1) / lowest.get_den();
  const int depth = n + static_cast<int>(extra.get_si()) + 1;
  auto m = pbwmod::build_verma(a, lam, g, depth);

  FormulaCheck out;
  out.n = n;
  out.module = m;
  const std::size_t fi = a->f(r.simple_index(i));
  const WeightVector w = pbwmod::basis_vector(*m, lam, 0);
  auto f_power = [&](int k, const WeightVector& v) {
    return pbwmod::apply(*m, std::vector<std::size_t>(static_cast<std::size_t>(k), fi), v);
  };
  const WeightVector v = f_power(n, w);
  out.vector = pbwmod::describe(*m, v);

  for (std::size_t b = 0; b < r.positive_roots().size(); ++b) {
    if (!is_zero_vec(m->act(a->e(b), v))) out.failures.push_back(a->label(a->e(b)) + " does not kill the vector");
  }
  for (std::size_t k = 0; k < a->radical_dim(); ++k) {
    const std::size_t u = a->u(k);
    const WeightVector lhs = m->act(u, v);
    const bool weight_zero = a->element(u).weight == Weight::zero(r.rank());
    const WeightVector expect = weight_zero ? scaled(g.value(k), v) : WeightVector{lhs.weight, {}};
    if (!same_vector(lhs, expect)) out.failures.push_back(a->label(u) + " does not act by g(u)");

    glie::Combination c{{u, 1}};
    WeightVector sum{lhs.weight, {}};
    std::vector<FormulaTerm> terms;
    Integer binom = 1;
    for (int j = 0; j <= n; ++j) {
      const Rational coef = (j % 2 ? -1 : 1) * Rational(binom);
      WeightVector cw{lam + a->element(u).weight - Rational(j) * r.root_weight(r.simple_index(i)), {}};
      if (!c.empty()) {
        const Weight t = lam + a->element(c.begin()->first).weight;
        cw = {t, m->classify(t) == Region::Window ? m->action_matrix(c, lam).apply(w.coords) : Vector{}};
      }
      const Rational gv = g.evaluate(c);
      const WeightVector lowered = f_power(n - j, cw);
      const WeightVector predicted = scaled(gv, f_power(n - j, w));
      FormulaTerm term{static_cast<std::size_t>(j), coef, c.empty() ? "0" : a->label(c.begin()->first), gv,
                       same_vector(lowered, predicted)};
      if (c.size() > 1) term.element = "combination";
      if (!term.matches) out.failures.push_back("term j=" + std::to_string(j) + " for " + a->label(u));
      terms.push_back(term);
      sum = plus(sum, scaled(coef, predicted));
      c = a->bracket(glie::Combination{{fi, 1}}, c);
      binom = binom * (n - j) / (j + 1);
    }
    if (!same_vector(sum, lhs)) out.failures.push_back("binomial expansion fails for " + a->label(u));
    out.terms[a->label(u)] = std::move(terms);
  }
  out.pass = out.failures.empty();
  return out;
}

std::optional<Embedding> embed_verma(const AlgebraPtr& a, const Weight& mu, const Weight& lam, const GFunctional& g,
                                     int depth) {
  const auto& r = a->roots();
  auto chain = rootsys::strongly_linked(r, mu, lam);
  if (!chain) return std::nullopt;
  const int total = *r.depth_below(lam, mu);
  if (total > depth) throw TruncationError("depth " + std::to_string(depth) + " does not reach " + mu.to_string());

  auto target = pbwmod::build_verma(a, lam, g, depth);
  WeightVector v = pbwmod::basis_vector(*target, lam, 0);
  Weight nu = lam;
  for (const auto& step : chain->steps) {
    if (r.is_simple(step.root)) {
      const Rational n = r.pairing(nu + r.rho(), step.root);
      v = pbwmod::apply(*target, std::vector<std::size_t>(n.get_num().get_ui(), a->f(step.root)), v);
    } else {
      auto m = pbwmod::build_verma(a, nu, g, *r.depth_below(nu, step.result));
      auto rep = find_maximal_vectors(*m, step.result, g);
      if (rep.basis.size() != 1) throw InternalConsistencyError("expected one singular vector at " + step.result.to_string());
      v = pbwmod::map_from_verma(m, target, v).apply({step.result, rep.basis.front()});
    }
    nu = step.result;
  }
  if (is_zero_vec(v)) throw InternalConsistencyError("embedding sends the generator to zero");

  auto source = pbwmod::build_verma(a, mu, g, depth - total);
  ModuleMap map = pbwmod::map_from_verma(source, target, v);
  if (!pbwmod::check_intertwines(map).empty()) throw InternalConsistencyError("embedding is not a module map");
  for (const auto& [w, comp] : source->components()) {
    if (exactla::rank(map.block(w)) != comp.dim()) {
      throw InternalConsistencyError("embedding is not injective at " + w.to_string());
    }
  }
  exactla::Subspace top(target->dim_at(mu));
  for (const auto& b : find_maximal_vectors(*target, mu, g).basis) top.insert(b);
  if (!top.contains(v.coords)) throw InternalConsistencyError("image of the generator is not maximal");
  return Embedding{*chain, std::move(map), v};
}

pbwmod::Quotient simple_quotient(const AlgebraPtr& a, const Weight& lam, const GFunctional& g, int depth) {
  auto m = pbwmod::build_verma(a, lam, g, depth);
  std::vector<WeightVector> singular;
  for (const auto& w : m->weights_descending()) {
    if (w == lam) continue;
    try {
      for (auto& b : find_maximal_vectors(*m, w, g).basis) singular.push_back({w, std::move(b)});
    } catch (const TruncationError&) {
    }
  }
  auto sub = pbwmod::submodule_generated(m, singular, Closure::Full);
  return pbwmod::quotient(m, sub);
}

CompositionReport composition_multiplicities_sl2(const AlgebraPtr& a, const Weight& lam, const GFunctional& g,
                                                 int depth) {
  const auto& r = a->roots();
  if (r.rank() != 1) throw UnsupportedRank("composition multiplicities are computed for sl2 only");
  if (lam.size() != 1) throw DimensionError("weight rank mismatch");
  auto m = pbwmod::build_verma(a, lam, g, depth);
  std::map<Weight, long> remaining;
  for (const auto& [w, c] : m->components()) remaining[w] = static_cast<long>(c.dim());

  CompositionReport rep{{}, depth};
  for (const auto& nu : m->weights_descending()) {
    const long mult = remaining[nu];
    if (mult == 0) continue;
    if (mult < 0) throw InternalConsistencyError("negative character after subtraction");
    rep.multiplicities[nu] = static_cast<int>(mult);
    auto l = simple_quotient(a, nu, g, depth - *m->depth_of(nu));
    for (const auto& [w, c] : l.module->components()) remaining[w] -= mult * static_cast<long>(c.dim());
  }
  return rep;
}

namespace {

// Dimension of successive images S_{k+1} = sum_x x S_k until S_k = 0.
std::size_t image_chain_length(const TruncatedModule& m,
                               const std::function<std::optional<RationalMatrix>(const Weight&, Weight&, std::size_t)>& ops,
                               std::size_t op_count) {
  std::map<Weight, exactla::Subspace> cur;
  for (const auto& [w, c] : m.components()) {
    if (c.dim() == 0 || m.classify(w) != Region::Window) continue;
    exactla::Subspace s(c.dim());
    for (std::size_t k = 0; k < c.dim(); ++k) {
      Vector e(c.dim(), 0);
      e[k] = 1;
      s.insert(e);
    }
    cur.emplace(w, std::move(s));
  }
  const std::size_t bound = m.total_dim() + 1;
  for (std::size_t k = 0; k <= bound; ++k) {
    if (cur.empty()) return k;
    std::map<Weight, exactla::Subspace> next;
    for (const auto& [w, s] : cur) {
      for (std::size_t o = 0; o < op_count; ++o) {
        Weight t;
        auto mat = ops(w, t, o);
        if (!mat) continue;
        for (const auto& b : s.basis()) {
          Vector img = mat->apply(b);
          if (exactla::is_zero(img)) continue;
          auto it = next.find(t);
          if (it == next.end()) it = next.emplace(t, exactla::Subspace(m.dim_at(t))).first;
          it->second.insert(img);
        }
      }
    }
    cur = std::move(next);
  }
  throw NotNilpotentWithinBound("images did not vanish within " + std::to_string(bound) + " steps");
}

}  // namespace

std::size_t j2_nilpotency_degree(const TruncatedModule& m) {
  const auto& a = m.algebra();
  if (a.j2().empty()) return 0;
  auto ops = [&](const Weight& w, Weight& t, std::size_t o) -> std::optional<RationalMatrix> {
    const std::size_t u = a.u(a.j2()[o]);
    t = m.target_of(u, w);
    if (m.classify(t) != Region::Window || m.dim_at(t) == 0) return std::nullopt;
    return m.action_matrix(u, w);
  };
  return image_chain_length(m, ops, a.j2().size());
}

std::size_t nilpotency_degree(const TruncatedModule& m, std::size_t u, const Rational& c) {
  const auto& a = m.algebra();
  const bool neutral = a.element(u).weight == Weight::zero(a.rank());
  if (!neutral && c != 0) throw InputError("u - c is not homogeneous when u has nonzero weight");
  auto ops = [&](const Weight& w, Weight& t, std::size_t) -> std::optional<RationalMatrix> {
    t = m.target_of(u, w);
    if (m.classify(t) != Region::Window || m.dim_at(t) == 0) return std::nullopt;
    RationalMatrix mat = m.action_matrix(u, w);
    if (neutral) mat -= RationalMatrix::identity(m.dim_at(w)) * c;
    return mat;
  };
  return image_chain_length(m, ops, 1);
}

bool AxiomReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const AxiomEntry& e) { return e.pass; });
}

AxiomReport check_oprime_axioms(const ModulePtr& mp) {
  const auto& m = *mp;
  const auto& a = m.algebra();
  AxiomReport rep;

  {
    AxiomEntry e{"O'1", true, ""};
    if (m.generators().empty()) {
      e.pass = false;
      e.detail = "no generators recorded";
    } else {
      auto sub = pbwmod::submodule_generated(mp, m.generators(), Closure::Full);
      std::size_t comps = 0;
      for (const auto& [w, c] : m.components()) {
        if (c.dim() == 0 || m.classify(w) != Region::Window) continue;
        ++comps;
        if (sub.dim_at(w) != c.dim()) {
          e.pass = false;
          e.detail = "generators miss part of weight " + w.to_string();
          break;
        }
      }
      if (e.pass) {
        e.detail = std::to_string(m.generators().size()) + " generator(s) span all " + std::to_string(comps) +
                   " weight spaces";
      }
    }
    rep.entries.push_back(e);
  }
  {
    AxiomEntry e{"O'2", true, "every h_i acts by its weight"};
    for (const auto& [w, c] : m.components()) {
      for (std::size_t i = 0; i < a.rank() && e.pass; ++i) {
        if (!(m.action_matrix(a.h(i), w) == RationalMatrix::identity(c.dim()) * w[i])) {
          e.pass = false;
          e.detail = a.label(a.h(i)) + " is not diagonal with eigenvalue " + to_string(w[i]) + " at " + w.to_string();
        }
      }
    }
    rep.entries.push_back(e);
  }
  {
    AxiomEntry e{"O'3", true, ""};
    bool hit = false;
    auto span = pbwmod::raising_span(m, m.generators(), Closure::Full, &hit);
    std::size_t d = 0;
    for (const auto& [w, s] : span) d += s.dim();
    e.pass = !hit;
    e.detail = hit ? "raising span leaves the window" : "U(n)-span of the generators has dimension " + std::to_string(d);
    rep.entries.push_back(e);
  }
  {
    AxiomEntry e{"O'4", true, ""};
    std::size_t largest = 0;
    for (const auto& [w, c] : m.components()) largest = std::max(largest, c.dim());
    for (const auto& [key, mat] : m.stored_actions()) {
      const Weight t = m.target_of(key.first, key.second);
      if (mat.cols() != m.dim_at(key.second) || mat.rows() != m.dim_at(t)) {
        e.pass = false;
        e.detail = "action of " + a.label(key.first) + " at " + key.second.to_string() + " has the wrong shape";
        break;
      }
    }
    if (e.pass) e.detail = "largest weight space has dimension " + std::to_string(largest);
    rep.entries.push_back(e);
  }
  return rep;
}

FiltrationReport highest_weight_filtration(const ModulePtr& m, const std::optional<GFunctional>& g_in) {
  const GFunctional g = resolve_g(*m, g_in);
  FiltrationReport rep{FiltrationKind::HighestWeight, {}, std::nullopt};
  ModulePtr cur = m;
  const std::size_t bound = m->total_dim() + 1;
  while (!cur->generators().empty()) {
    if (rep.steps.size() > bound) throw InternalConsistencyError("highest weight filtration does not terminate");
    auto span = pbwmod::raising_span(*cur, cur->generators(), Closure::Full);
    std::vector<Weight> ws;
    for (const auto& [w, s] : span) ws.push_back(w);
    std::optional<WeightVector> found;
    for (const auto& w : sorted_desc(*cur, ws)) {
      std::vector<Vector> ker;
      try {
        ker = find_maximal_vectors(*cur, w, g).basis;
      } catch (const TruncationError&) {
        continue;
      }
      if (ker.empty()) continue;
      const auto& sb = span.at(w).basis();
      const std::size_t d = cur->dim_at(w);
      RationalMatrix joint(d, ker.size() + sb.size());
      for (std::size_t k = 0; k < ker.size(); ++k) {
        for (std::size_t i = 0; i < d; ++i) joint.set(i, k, ker[k][i]);
      }
      for (std::size_t k = 0; k < sb.size(); ++k) {
        for (std::size_t i = 0; i < d; ++i) joint.set(i, ker.size() + k, -sb[k][i]);
      }
      for (const auto& x : exactla::kernel(joint)) {
        Vector v(d, 0);
        for (std::size_t k = 0; k < ker.size(); ++k) v = v + x[k] * ker[k];
        if (!exactla::is_zero(v)) {
          found = WeightVector{w, v};
          break;
        }
      }
      if (found) break;
    }
    if (!found) throw InternalConsistencyError("nonzero module without a maximal vector in the span of its generators");
    auto sub = pbwmod::submodule_generated(cur, {*found}, Closure::Full);
    rep.steps.push_back({found->weight, g, pbwmod::describe(*cur, *found)});
    cur = pbwmod::quotient(cur, sub).module;
  }
  return rep;
}

namespace {

std::vector<FiltrationStep> peel_vermas(const ModulePtr& m, const GFunctional& g, bool full) {
  const auto& a = m->algebra();
  const auto& r = a.roots();
  std::vector<FiltrationStep> steps;
  ModulePtr cur = m;
  const std::size_t bound = m->total_dim() + 1;
  while (cur->total_dim() > 0) {
    if (steps.size() > bound) throw NoStandardFiltration("peeling does not terminate");
    std::optional<WeightVector> found;
    for (const auto& w : cur->weights_descending()) {
      std::vector<Vector> ker;
      try {
        ker = full ? find_maximal_vectors(*cur, w, g).basis : e_kernel(*cur, w);
      } catch (const TruncationError&) {
        continue;
      }
      if (!ker.empty()) {
        found = WeightVector{w, ker.front()};
        break;
      }
    }
    if (!found) throw NoStandardFiltration("no maximal vector left to peel");
    auto sub = pbwmod::submodule_generated(cur, {*found}, full ? Closure::Full : Closure::G0Only);
    // One layer past the window of a complete module is genuinely zero.
    const int room = cur->depth() - cur->depth_of(found->weight).value_or(0) + (cur->complete() ? 1 : 0);
    for (const auto& eta : drops_of_height_at_most(r.rank(), room)) {
      const Weight w = found->weight - r.root_weight(eta);
      if (cur->classify(w) == Region::Boundary) continue;
      if (sub.dim_at(w) != rootsys::kostant_partition(r, eta)) {
        throw NoStandardFiltration("submodule generated at " + found->weight.to_string() +
                                   " is not a Verma module at " + w.to_string());
      }
    }
    steps.push_back({found->weight, g, pbwmod::describe(*cur, *found)});
    cur = pbwmod::quotient(cur, sub).module;
  }
  return steps;
}

}  // namespace

FiltrationReport standard_filtration(const ModulePtr& m, const std::optional<GFunctional>& g_in) {
  const GFunctional g = resolve_g(*m, g_in);
  FiltrationReport rep{FiltrationKind::Standard, peel_vermas(m, g, true), std::nullopt};
  rep.g0_length = peel_vermas(m, g, false).size();
  return rep;
}

namespace {

struct IntertwinerSystem {
  std::map<Weight, std::size_t> offset;
  std::size_t vars = 0;
  std::vector<std::map<std::size_t, Rational>> rows;
  Vector rhs;
};

IntertwinerSystem intertwiner_system(const TruncatedModule& p, const TruncatedModule& n,
                                     const std::vector<std::size_t>& xs) {
  IntertwinerSystem sys;
  for (const auto& [w, c] : p.components()) {
    if (c.dim() == 0 || p.classify(w) != Region::Window) continue;
    if (n.classify(w) != Region::Window || n.dim_at(w) == 0) continue;
    sys.offset[w] = sys.vars;
    sys.vars += c.dim() * n.dim_at(w);
  }
  auto var = [&](const Weight& w, std::size_t row, std::size_t col) -> std::optional<std::size_t> {
    auto it = sys.offset.find(w);
    if (it == sys.offset.end()) return std::nullopt;
    return it->second + row * p.dim_at(w) + col;
  };
  for (std::size_t x : xs) {
    for (const auto& [w, c] : p.components()) {
      if (c.dim() == 0 || p.classify(w) != Region::Window) continue;
      const Weight t = p.target_of(x, w);
      if (p.classify(t) == Region::Boundary || n.classify(t) == Region::Boundary || n.classify(w) == Region::Boundary) {
        continue;
      }
      const std::size_t nt = n.classify(t) == Region::Window ? n.dim_at(t) : 0;
      if (nt == 0) continue;
      const RationalMatrix nx = n.action_matrix(x, w);
      const RationalMatrix px = p.action_matrix(x, w);
      for (std::size_t r = 0; r < nt; ++r) {
        for (std::size_t col = 0; col < c.dim(); ++col) {
          std::map<std::size_t, Rational> row;
          for (const auto& [k, v] : nx.row(r)) {
            if (auto idx = var(w, k, col)) row[*idx] += v;
          }
          for (std::size_t k = 0; k < px.rows(); ++k) {
            Rational v = px.at(k, col);
            if (v == 0) continue;
            if (auto idx = var(t, r, k)) row[*idx] -= v;
          }
          for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
          if (row.empty()) continue;
          sys.rows.push_back(std::move(row));
          sys.rhs.push_back(0);
        }
      }
    }
  }
  return sys;
}

RationalMatrix to_matrix(const IntertwinerSystem& sys) {
  RationalMatrix m(sys.rows.size(), sys.vars);
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    for (const auto& [j, v] : sys.rows[i]) m.set(i, j, v);
  }
  return m;
}

ModuleMap map_from_solution(const IntertwinerSystem& sys, const ModulePtr& p, const ModulePtr& n, const Vector& x) {
  ModuleMap out{p, n, {}};
  for (const auto& [w, off] : sys.offset) {
    const std::size_t dp = p->dim_at(w), dn = n->dim_at(w);
    RationalMatrix b(dn, dp);
    for (std::size_t r = 0; r < dn; ++r) {
      for (std::size_t c = 0; c < dp; ++c) b.set(r, c, x[off + r * dp + c]);
    }
    out.blocks[w] = std::move(b);
  }
  return out;
}

LiftOutcome solve_lift(const ModulePtr& p, const ModuleMap& pi, const ModuleMap& phi,
                       const std::vector<std::size_t>& xs) {
  const auto& n = *pi.source;
  const auto& l = *pi.target;
  IntertwinerSystem sys = intertwiner_system(*p, n, xs);
  for (const auto& [w, c] : p->components()) {
    if (c.dim() == 0 || p->classify(w) != Region::Window) continue;
    if (l.classify(w) != Region::Window || l.dim_at(w) == 0) continue;
    const RationalMatrix pw = pi.block(w);
    const RationalMatrix fw = phi.block(w);
    auto off = sys.offset.find(w);
    for (std::size_t r = 0; r < l.dim_at(w); ++r) {
      for (std::size_t col = 0; col < c.dim(); ++col) {
        std::map<std::size_t, Rational> row;
        if (off != sys.offset.end()) {
          for (const auto& [k, v] : pw.row(r)) row[off->second + k * c.dim() + col] += v;
        }
        const Rational target = fw.at(r, col);
        if (row.empty() && target == 0) continue;
        sys.rows.push_back(std::move(row));
        sys.rhs.push_back(target);
      }
    }
  }
  LiftOutcome out;
  out.system = to_matrix(sys);
  out.rhs = sys.rhs;
  out.unknowns = sys.vars;
  out.equations = sys.rows.size();
  auto sol = exactla::solve(out.system, out.rhs);
  if (sol.consistent()) {
    out.liftable = true;
    out.map = map_from_solution(sys, p, pi.source, sol.solution);
  } else {
    out.witness = sol.witness;
    out.witness_verified = exactla::verify_witness(out.system, out.rhs, out.witness);
  }
  return out;
}

}  // namespace

NonLiftabilityCertificate nonliftability_certificate(const ModulePtr& p, const ModuleMap& pi, const ModuleMap& phi) {
  if (phi.source != p) throw DimensionError("phi must start at P");
  if (phi.target != pi.target) throw DimensionError("phi and pi must end at the same module");
  if (pi.source->algebra_ptr() != p->algebra_ptr() || pi.target->algebra_ptr() != p->algebra_ptr()) {
    throw DimensionError("diagram modules live over different algebras");
  }
  const auto& l = *pi.target;
  for (const auto& [w, c] : l.components()) {
    if (c.dim() == 0 || pi.source->classify(w) != Region::Window) continue;
    if (exactla::rank(pi.block(w)) != c.dim()) throw DimensionError("pi is not onto at " + w.to_string());
  }
  const auto& a = p->algebra();
  std::vector<std::size_t> all, g0, radical;
  for (std::size_t x = 0; x < a.dim(); ++x) {
    all.push_back(x);
    (x < a.g0_dim() ? g0 : radical).push_back(x);
  }
  NonLiftabilityCertificate cert{solve_lift(p, pi, phi, all), solve_lift(p, pi, phi, g0), {}};
  if (cert.g0_only.liftable) cert.radical_failures = pbwmod::check_intertwines(*cert.g0_only.map, radical);
  return cert;
}

ModuleMap universal_map(const ModulePtr& verma, const ModulePtr& target, const WeightVector& v) {
  const GFunctional g = resolve_g(*verma, std::nullopt);
  exactla::Subspace ok(target->dim_at(v.weight));
  for (const auto& b : find_maximal_vectors(*target, v.weight, g).basis) ok.insert(b);
  if (is_zero_vec(v) || !ok.contains(v.coords)) throw InputError("vector is not maximal of the Verma's weight");
  ModuleMap map = pbwmod::map_from_verma(verma, target, v);
  if (!pbwmod::check_intertwines(map).empty()) throw InternalConsistencyError("universal map does not intertwine");
  return map;
}

std::size_t hom_dimension(const ModulePtr& source, const ModulePtr& target) {
  std::vector<std::size_t> xs;
  for (std::size_t x = 0; x < source->algebra().dim(); ++x) xs.push_back(x);
  IntertwinerSystem sys = intertwiner_system(*source, *target, xs);
  return sys.vars - exactla::rank(to_matrix(sys));
}

pbwmod::DirectSum jordan_tower(const AlgebraPtr& a, const Weight& gamma, const GFunctional& g, std::size_t k,
                               std::size_t u) {
  if (k == 0) throw InputError("tower size must be positive");
  const Weight& wu = a->element(u).weight;
  std::vector<ModulePtr> summands;
  std::map<Weight, ModulePtr> cache;
  for (std::size_t i = 0; i < k; ++i) {
    const Weight w = gamma + Rational(static_cast<long>(i)) * wu;
    if (!w.is_dominant_integral()) throw NotApplicable("tower summand " + w.to_string() + " is not dominant integral");
    auto it = cache.find(w);
    if (it == cache.end()) {
      it = cache.emplace(w, pbwmod::module_from_simple(a, glie::realize_simple(a, w), g)).first;
    }
    summands.push_back(it->second);
  }
  std::vector<std::vector<Rational>> twist(k, std::vector<Rational>(k, 0));
  for (std::size_t i = 0; i + 1 < k; ++i) twist[i + 1][i] = 1;
  return pbwmod::jordan_sum(summands, g, twist, u);
}

std::vector<TowerStep> jordan_tower_growth(const AlgebraPtr& a, const Weight& gamma, const GFunctional& g,
                                           std::size_t k_max, std::optional<std::size_t> u_in) {
  std::size_t u;
  if (u_in) {
    u = *u_in;
  } else if (!a->j1().empty()) {
    u = a->u(a->j1().front());
  } else if (!a->summands().empty()) {
    const auto& s = a->summands().front();
    u = a->u(s.offset + s.dim() - 1);
  } else {
    throw NotApplicable("the tower needs a nonzero radical");
  }
  const bool neutral = a->element(u).weight == Weight::zero(a->rank());
  const Rational c = neutral ? g.value(a->radical_local(u)) : Rational(0);

  std::vector<TowerStep> out;
  std::optional<pbwmod::DirectSum> prev;
  for (std::size_t k = 1; k <= k_max; ++k) {
    pbwmod::DirectSum t = jordan_tower(a, gamma, g, k, u);
    TowerStep step{k, t.module->total_dim(), check_oprime_axioms(t.module).all_pass(), true, 0, 0};
    if (prev) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i + 1 < k; ++i) keep.push_back(i);
      ModuleMap proj = pbwmod::summand_projection(t, *prev, keep);
      step.connecting_ok = pbwmod::check_intertwines(proj).empty();
      for (const auto& [w, comp] : prev->module->components()) {
        if (exactla::rank(proj.block(w)) != comp.dim()) step.connecting_ok = false;
      }
    }
    step.nilpotency = nilpotency_degree(*t.module, u, c);
    std::map<Weight, exactla::Subspace> span;
    WeightVector wj = t.module->generators().front();
    for (std::size_t j = 0; j < k && !is_zero_vec(wj); ++j) {
      auto it = span.find(wj.weight);
      if (it == span.end()) it = span.emplace(wj.weight, exactla::Subspace(wj.coords.size())).first;
      it->second.insert(wj.coords);
      WeightVector next = t.module->act(u, wj);
      if (neutral) next = plus(next, scaled(-c, wj));
      wj = next;
    }
    for (const auto& [w, s] : span) step.span_dim += s.dim();
    out.push_back(step);
    prev = std::move(t);
  }
  return out;
}

ReciprocityTable reciprocity_check_sl2(const AlgebraPtr& a, const GFunctional& g, const Weight& lam, int depth) {
  if (a->rank() != 1) throw UnsupportedRank("reciprocity is checked on sl2 blocks only");
  if (!a->j2().empty()) throw NotApplicable("reciprocity check needs a central radical");
  if (lam.size() != 1) throw DimensionError("weight rank mismatch");
  if (!lam.is_integral()) throw NonIntegralError("block weight must be integral");
  if (lam[0] == -1) throw SingularBlockUnsupported("lam = -1 is the singular block");
  const Weight plus_w = lam[0] > -1 ? lam : Weight{-lam[0] - 2};
  const Weight minus_w{-plus_w[0] - 2};

  ReciprocityTable t;
  t.block = {plus_w, minus_w};
  auto p_plus = pbwmod::build_verma(a, plus_w, g, depth);
  auto p_minus = pbwmod::tensor_with_simple(pbwmod::build_verma(a, Weight{-1}, g, depth),
                                            glie::realize_simple(a, Weight{plus_w[0] + 1}));
  t.generator_ok = true;
  const WeightVector gen = p_minus->generators().front();
  for (std::size_t k = 0; k < a->radical_dim(); ++k) {
    if (!same_vector(p_minus->act(a->u(k), gen), scaled(g.value(k), gen))) t.generator_ok = false;
  }
  t.filtrations = {standard_filtration(p_plus, g), standard_filtration(p_minus, g)};

  t.left.assign(2, std::vector<int>(2, 0));
  t.right.assign(2, std::vector<int>(2, 0));
  for (std::size_t l = 0; l < 2; ++l) {
    for (const auto& s : t.filtrations[l].steps) {
      for (std::size_t m = 0; m < 2; ++m) {
        if (s.weight == t.block[m]) ++t.left[m][l];
      }
    }
  }
  for (std::size_t m = 0; m < 2; ++m) {
    auto comp = composition_multiplicities_sl2(a, t.block[m], g, depth);
    for (std::size_t l = 0; l < 2; ++l) {
      auto it = comp.multiplicities.find(t.block[l]);
      t.right[m][l] = it == comp.multiplicities.end() ? 0 : it->second;
    }
  }
  return t;
}

bool maximal_submodule_avoids_top(const AlgebraPtr& a, const Weight& lam, const GFunctional& g, int depth) {
  auto q = simple_quotient(a, lam, g, depth);
  return q.module->dim_at(lam) == 1;
}

}  // namespace oprime::cato
