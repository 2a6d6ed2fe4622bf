#include "oprime/glie.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "oprime/errors.hpp"
#include "oprime/pbwmod.hpp"

namespace oprime::glie {

using rootsys::RootVector;

namespace {

RootVector negate(RootVector a) {
  for (auto& x : a) x = -x;
  return a;
}

RootVector add(const RootVector& a, const RootVector& b) {
  RootVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool is_positive(const RootVector& a) {
  return std::any_of(a.begin(), a.end(), [](int x) { return x > 0; });
}

void add_term(Combination& c, std::size_t index, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = c.emplace(index, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) c.erase(it);
  }
}

// Structure constants by the extraspecial-pair recursion.
class ChevalleySigns {
 public:
  explicit ChevalleySigns(const RootSystem& r) : r_(r) {
    const auto& pos = r_.positive_roots();
    for (std::size_t xi = 0; xi < pos.size(); ++xi) {
      if (r_.is_simple(xi)) continue;
      for (std::size_t g = 0; g < pos.size(); ++g) {
        RootVector d = add(pos[xi], negate(pos[g]));
        auto di = r_.positive_index(d);
        if (!di) continue;
        int p = 0;
        RootVector probe = d;
        while (true) {
          probe = add(probe, negate(pos[g]));
          if (!is_root(probe)) break;
          ++p;
        }
        extraspecial_[xi] = {g, *di, p + 1};
        break;
      }
    }
  }

  bool is_root(const RootVector& a) const {
    if (is_positive(a)) return r_.positive_index(a).has_value();
    return r_.positive_index(negate(a)).has_value();
  }

  // N_{a,b}; zero when a+b is not a root.
  Rational n(const RootVector& a, const RootVector& b) {
    const RootVector s = add(a, b);
    if (std::all_of(s.begin(), s.end(), [](int x) { return x == 0; }) || !is_root(s)) return 0;
    auto key = std::make_pair(a, b);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Rational value;
    const bool pa = is_positive(a), pb = is_positive(b);
    if (pa && pb) {
      value = positive_pair(*r_.positive_index(a), *r_.positive_index(b));
    } else if (!pa && !pb) {
      value = -n(negate(a), negate(b));
    } else {
      // a + b + c = 0: N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
      const RootVector c = negate(s);
      if (is_positive(b) == is_positive(c)) {
        value = r_.inner(c, c) / r_.inner(a, a) * n(b, c);
      } else {
        value = r_.inner(c, c) / r_.inner(b, b) * n(c, a);
      }
    }
    cache_.emplace(key, value);
    return value;
  }

 private:
  struct Extraspecial {
    std::size_t gamma, delta;
    int value;
  };

  Rational positive_pair(std::size_t alpha, std::size_t beta) {
    const auto& pos = r_.positive_roots();
    const RootVector xi = add(pos[alpha], pos[beta]);
    const auto& es = extraspecial_.at(*r_.positive_index(xi));
    if (alpha == es.gamma && beta == es.delta) return es.value;
    if (alpha > beta) return -positive_pair(beta, alpha);
    const RootVector& a = pos[alpha];
    const RootVector& b = pos[beta];
    const RootVector ng = negate(pos[es.gamma]);
    const RootVector nd = negate(pos[es.delta]);
    Rational bracket = 0;
    const RootVector bg = add(b, ng);
    if (is_root(bg)) bracket += n(b, ng) * n(a, nd) / r_.inner(bg, bg);
    const RootVector ag = add(a, ng);
    if (is_root(ag)) bracket += n(ng, a) * n(b, nd) / r_.inner(ag, ag);
    // N_{-g,-d} = -N_{g,d}
    return r_.inner(xi, xi) / es.value * bracket;
  }

  const RootSystem& r_;
  std::map<std::size_t, Extraspecial> extraspecial_;
  std::map<std::pair<RootVector, RootVector>, Rational> cache_;
};

std::string element_label(const RootSystem& r, Kind kind, std::size_t index) {
  const bool rank_one = r.rank() == 1;
  switch (kind) {
    case Kind::E:
      return rank_one ? "e" : "e[" + r.root_label(index) + "]";
    case Kind::F:
      return rank_one ? "f" : "f[" + r.root_label(index) + "]";
    case Kind::H:
      return rank_one ? "h" : "h" + std::to_string(index + 1);
    case Kind::U:
      return "u" + std::to_string(index + 1);
  }
  return {};
}

}  // namespace

std::vector<std::size_t> SimpleRealization::basis_at(const Weight& w) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == w) out.push_back(k);
  }
  return out;
}

bool RadicalSummand::trivial() const {
  return std::all_of(highest_weight.coords().begin(), highest_weight.coords().end(),
                     [](const Rational& x) { return x == 0; });
}

std::optional<std::size_t> GenReductiveAlgebra::find(const std::string& label) const {
  for (std::size_t x = 0; x < basis_.size(); ++x) {
    if (basis_[x].label == label) return x;
  }
  return std::nullopt;
}

std::optional<std::size_t> GenReductiveAlgebra::root_element(const RootVector& a) const {
  if (a.size() != rank()) return std::nullopt;
  if (is_positive(a)) {
    if (auto i = roots_.positive_index(a)) return e(*i);
    return std::nullopt;
  }
  if (auto i = roots_.positive_index(negate(a))) return f(*i);
  return std::nullopt;
}

std::size_t GenReductiveAlgebra::summand_of(std::size_t k) const {
  for (std::size_t s = 0; s < summands_.size(); ++s) {
    if (k >= summands_[s].offset && k < summands_[s].offset + summands_[s].dim()) return s;
  }
  throw InputError("radical index out of range");
}

bool GenReductiveAlgebra::in_j1(std::size_t k) const { return std::binary_search(j1_.begin(), j1_.end(), k); }

Combination GenReductiveAlgebra::bracket(const Combination& a, const Combination& b) const {
  Combination out;
  for (const auto& [x, cx] : a) {
    for (const auto& [y, cy] : b) {
      for (const auto& [z, cz] : table_[x][y]) add_term(out, z, cx * cy * cz);
    }
  }
  return out;
}

int GenReductiveAlgebra::structure_constant(const RootVector& a, const RootVector& b) const {
  auto x = root_element(a);
  auto y = root_element(b);
  if (!x || !y) throw InvalidRootError("structure constant needs two roots");
  auto z = root_element(add(a, b));
  if (!z) return 0;
  const auto& c = table_[*x][*y];
  auto it = c.find(*z);
  return it == c.end() ? 0 : static_cast<int>(it->second.get_num().get_si());
}

AlgebraPtr build_algebra(const RootSystem& r, const std::vector<Weight>& radical_weights) {
  for (const auto& w : radical_weights) {
    if (w.size() != r.rank()) throw InvalidRadicalError("radical weight " + w.to_string() + " has the wrong rank");
    if (!w.is_dominant_integral()) {
      throw InvalidRadicalError("radical weight " + w.to_string() + " is not dominant integral");
    }
  }

  auto alg = std::make_shared<GenReductiveAlgebra>();
  alg->roots_ = r;
  const auto& pos = r.positive_roots();
  const std::size_t np = pos.size();
  const std::size_t l = r.rank();

  for (std::size_t b = 0; b < np; ++b) {
    alg->basis_.push_back({Kind::E, b, r.root_weight(b), element_label(r, Kind::E, b)});
  }
  for (std::size_t b = 0; b < np; ++b) {
    alg->basis_.push_back({Kind::F, b, -r.root_weight(b), element_label(r, Kind::F, b)});
  }
  for (std::size_t i = 0; i < l; ++i) {
    alg->basis_.push_back({Kind::H, i, Weight::zero(l), element_label(r, Kind::H, i)});
  }

  // g0 brackets
  const std::size_t n0 = alg->basis_.size();
  alg->table_.assign(n0, std::vector<Combination>(n0));
  ChevalleySigns signs(r);
  auto signed_root = [&](std::size_t x) -> RootVector {
    const auto& el = alg->basis_[x];
    return el.kind == Kind::E ? pos[el.index] : negate(pos[el.index]);
  };
  for (std::size_t x = 0; x < n0; ++x) {
    for (std::size_t y = 0; y < n0; ++y) {
      const auto& ex = alg->basis_[x];
      const auto& ey = alg->basis_[y];
      Combination c;
      if (ex.kind == Kind::H && ey.kind == Kind::H) {
        // zero
      } else if (ex.kind == Kind::H) {
        add_term(c, y, ey.weight[ex.index]);
      } else if (ey.kind == Kind::H) {
        add_term(c, x, -ex.weight[ey.index]);
      } else {
        const RootVector a = signed_root(x), b = signed_root(y);
        const RootVector s = add(a, b);
        if (std::all_of(s.begin(), s.end(), [](int v) { return v == 0; })) {
          // [e_a, e_{-a}] = h_a
          const auto& co = r.coroot(ex.index);
          const Rational sign = ex.kind == Kind::E ? 1 : -1;
          for (std::size_t j = 0; j < l; ++j) add_term(c, alg->h(j), sign * co[j]);
        } else if (auto z = alg->root_element(s)) {
          const Rational nab = signs.n(a, b);
          if (!is_integer(nab)) throw InternalConsistencyError("non-integral structure constant");
          add_term(c, *z, nab);
        }
      }
      alg->table_[x][y] = std::move(c);
    }
  }

  // radical summands, realized over g0 alone
  if (!radical_weights.empty()) {
    AlgebraPtr g0 = build_algebra(r, {});
    std::size_t offset = 0;
    for (const auto& w : radical_weights) {
      RadicalSummand s{w, offset, realize_simple(g0, w)};
      for (std::size_t k = 0; k < s.dim(); ++k) {
        alg->basis_.push_back({Kind::U, offset + k, s.realization.weights[k], element_label(r, Kind::U, offset + k)});
        (s.trivial() ? alg->j1_ : alg->j2_).push_back(offset + k);
      }
      offset += s.dim();
      alg->summands_.push_back(std::move(s));
    }
    const std::size_t n = alg->basis_.size();
    for (auto& row : alg->table_) row.resize(n);
    alg->table_.resize(n, std::vector<Combination>(n));
    for (const auto& s : alg->summands_) {
      for (std::size_t x = 0; x < n0; ++x) {
        const auto& m = s.realization.action[x];
        for (std::size_t local = 0; local < s.dim(); ++local) {
          Combination c;
          for (std::size_t row = 0; row < s.dim(); ++row) {
            Rational v = m.at(row, local);
            if (v != 0) add_term(c, n0 + s.offset + row, v);
          }
          const std::size_t u = n0 + s.offset + local;
          Combination neg;
          for (const auto& [z, v] : c) neg.emplace(z, -v);
          alg->table_[x][u] = std::move(c);
          alg->table_[u][x] = std::move(neg);
        }
      }
    }
  }

  auto problems = check_structure(*alg);
  if (!problems.empty()) throw InternalConsistencyError("algebra self-check failed: " + problems.front());
  return alg;
}

SimpleRealization realize_simple(const AlgebraPtr& a, const Weight& lam) {
  const auto& r = a->roots();
  if (lam.size() != r.rank() || !lam.is_dominant_integral()) {
    throw InputError("simple module needs a dominant integral weight, got " + lam.to_string());
  }
  const Weight low = rootsys::lowest_weight(r, lam);
  const int depth = *r.depth_below(lam, low);
  auto verma = pbwmod::build_verma(a, lam, GFunctional::zero(*a), depth);

  std::vector<pbwmod::WeightVector> singular;
  const pbwmod::WeightVector top = pbwmod::basis_vector(*verma, lam, 0);
  for (std::size_t i = 0; i < r.rank(); ++i) {
    const long n = lam[i].get_num().get_si() + 1;
    if (n > depth) continue;  // lies below every weight of L(lam)
    std::vector<std::size_t> word(static_cast<std::size_t>(n), a->f(r.simple_index(i)));
    singular.push_back(pbwmod::apply(*verma, word, top));
  }
  auto sub = pbwmod::submodule_generated(verma, singular, pbwmod::Closure::G0Only);
  auto q = pbwmod::quotient(verma, sub);
  const auto& mod = *q.module;

  SimpleRealization out;
  out.highest_weight = lam;
  std::map<Weight, std::size_t> offsets;
  for (const auto& w : mod.weights_descending()) {
    offsets[w] = out.weights.size();
    const auto* comp = mod.component(w);
    for (std::size_t k = 0; k < comp->dim(); ++k) {
      out.weights.push_back(w);
      out.labels.push_back(comp->labels[k]);
    }
  }
  const Integer expected = rootsys::weyl_dimension(r, lam);
  if (Integer(static_cast<unsigned long>(out.dim())) != expected) {
    throw InternalConsistencyError("realization of L" + lam.to_string() + " has the wrong dimension");
  }

  const std::size_t n0 = a->g0_dim();
  for (std::size_t x = 0; x < n0; ++x) {
    exactla::RationalMatrix m(out.dim(), out.dim());
    for (const auto& [w, off] : offsets) {
      const Weight t = mod.target_of(x, w);
      auto to = offsets.find(t);
      if (to == offsets.end()) continue;  // zero in L(lam)
      m.paste(mod.action_matrix(x, w), to->second, off);
    }
    out.action.push_back(std::move(m));
  }
  return out;
}

GFunctional GFunctional::zero(const GenReductiveAlgebra& a) {
  return GFunctional(&a, std::vector<Rational>(a.radical_dim(), 0));
}

Rational GFunctional::evaluate(const Combination& c) const {
  Rational out = 0;
  const std::size_t n0 = algebra_ ? algebra_->g0_dim() : 0;
  for (const auto& [x, v] : c) {
    if (x >= n0 && x - n0 < values_.size()) out += v * values_[x - n0];
  }
  return out;
}

GValidation validate_g(const GenReductiveAlgebra& a, const std::vector<Rational>& values) {
  if (values.size() != a.radical_dim()) {
    throw InputError("functional has " + std::to_string(values.size()) + " values, radical has dimension " +
                     std::to_string(a.radical_dim()));
  }
  GFunctional g(&a, values);
  std::vector<GViolation> violations;
  for (std::size_t k : a.j2()) {
    if (values[k] != 0) violations.push_back({"g(J2)", {a.u(k)}, values[k]});
  }
  const std::size_t n0 = a.g0_dim();
  for (std::size_t x = 0; x < n0; ++x) {
    const std::string name = a.element(x).kind == Kind::H ? "g([h,u])" : "g([x,u])";
    for (std::size_t k = 0; k < a.radical_dim(); ++k) {
      Rational v = g.evaluate(a.bracket(x, a.u(k)));
      if (v != 0) violations.push_back({name, {x, a.u(k)}, v});
    }
  }
  for (std::size_t k = 0; k < a.radical_dim(); ++k) {
    for (std::size_t m = 0; m < a.radical_dim(); ++m) {
      Rational v = g.evaluate(a.bracket(a.u(k), a.u(m)));
      if (v != 0) violations.push_back({"g([u1,u2])", {a.u(k), a.u(m)}, v});
    }
  }
  if (!violations.empty()) return violations;
  return g;
}

GFunctional g_from_j1(const GenReductiveAlgebra& a, const std::vector<Rational>& j1_values) {
  if (j1_values.size() != a.j1().size()) {
    throw InvalidFunctional("expected " + std::to_string(a.j1().size()) + " values on J1, got " +
                            std::to_string(j1_values.size()));
  }
  std::vector<Rational> values(a.radical_dim(), 0);
  for (std::size_t k = 0; k < a.j1().size(); ++k) values[a.j1()[k]] = j1_values[k];
  auto result = validate_g(a, values);
  if (auto* bad = std::get_if<std::vector<GViolation>>(&result)) {
    throw InvalidFunctional("functional violates " + bad->front().constraint);
  }
  return std::get<GFunctional>(result);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_radical(const GenReductiveAlgebra& a) {
  return {a.j1(), a.j2()};
}

std::vector<std::string> check_structure(const GenReductiveAlgebra& a) {
  std::vector<std::string> problems;
  const std::size_t n = a.dim();
  auto name = [&](std::size_t x) { return a.label(x); };
  auto single = [](std::size_t x) { return Combination{{x, 1}}; };

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      Combination sum = a.bracket(x, y);
      for (const auto& [z, v] : a.bracket(y, x)) add_term(sum, z, v);
      if (!sum.empty()) problems.push_back("antisymmetry fails for " + name(x) + ", " + name(y));
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      for (std::size_t z = y + 1; z < n; ++z) {
        Combination sum = a.bracket(a.bracket(x, y), single(z));
        for (const auto& [w, v] : a.bracket(a.bracket(y, z), single(x))) add_term(sum, w, v);
        for (const auto& [w, v] : a.bracket(a.bracket(z, x), single(y))) add_term(sum, w, v);
        if (!sum.empty()) problems.push_back("Jacobi fails for " + name(x) + ", " + name(y) + ", " + name(z));
      }
    }
  }
  const std::size_t n0 = a.g0_dim();
  for (std::size_t k = 0; k < a.radical_dim(); ++k) {
    const std::size_t u = a.u(k);
    for (std::size_t m = 0; m < a.radical_dim(); ++m) {
      if (!a.bracket(u, a.u(m)).empty()) problems.push_back("[J,J] != 0 at " + name(u) + ", " + name(a.u(m)));
    }
    for (std::size_t x = 0; x < n0; ++x) {
      const auto& c = a.bracket(x, u);
      if (a.in_j1(k) && !c.empty()) problems.push_back("J1 element " + name(u) + " is not central");
      for (const auto& [z, v] : c) {
        if (!a.is_radical(z) || a.in_j1(a.radical_local(z)) != a.in_j1(k)) {
          problems.push_back("[g0, " + name(u) + "] leaves its summand type");
        }
      }
      if (a.element(x).kind == Kind::H) {
        Combination expect;
        add_term(expect, u, a.element(u).weight[a.element(x).index]);
        if (c != expect) problems.push_back("[h, " + name(u) + "] is not diagonal");
      }
    }
  }
  for (const auto& s : a.summands()) {
    const std::size_t lowest = a.u(s.offset + s.dim() - 1);
    for (std::size_t b = 0; b < a.roots().positive_roots().size(); ++b) {
      if (!a.bracket(a.f(b), lowest).empty()) {
        problems.push_back("f does not kill the lowest vector of L" + s.highest_weight.to_string());
      }
    }
  }
  return problems;
}

}  // namespace oprime::glie
