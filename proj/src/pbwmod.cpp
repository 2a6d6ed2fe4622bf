#include "oprime/pbwmod.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "oprime/errors.hpp"

namespace oprime::pbwmod {

using glie::Kind;

// ---------------------------------------------------------------- module ---

TruncatedModule::TruncatedModule(AlgebraPtr algebra, std::vector<Weight> window_tops, int depth, bool complete)
    : algebra_(std::move(algebra)), window_tops_(std::move(window_tops)), depth_(depth), complete_(complete) {
  std::sort(window_tops_.begin(), window_tops_.end());
  window_tops_.erase(std::unique(window_tops_.begin(), window_tops_.end()), window_tops_.end());
}

void TruncatedModule::add_component(const Weight& w, Component c) { components_[w] = std::move(c); }

void TruncatedModule::set_action(std::size_t x, const Weight& source, RationalMatrix m) {
  auto key = std::make_pair(x, source);
  if (m.is_zero()) {
    actions_.erase(key);
  } else {
    actions_[key] = std::move(m);
  }
}

std::optional<int> TruncatedModule::depth_of(const Weight& w) const {
  std::optional<int> best;
  for (const auto& t : window_tops_) {
    auto d = algebra_->roots().depth_below(t, w);
    if (d && (!best || *d < *best)) best = d;
  }
  return best;
}

Region TruncatedModule::classify(const Weight& w) const {
  bool under = false, deep = false, inside = false;
  for (const auto& t : window_tops_) {
    auto d = algebra_->roots().depth_below(t, w);
    if (!d) continue;
    under = true;
    (*d > depth_ ? deep : inside) = true;
  }
  if (!under) return Region::Zero;
  if (complete_) return inside ? Region::Window : Region::Zero;
  return deep ? Region::Boundary : Region::Window;
}

const Component* TruncatedModule::component(const Weight& w) const {
  auto it = components_.find(w);
  return it == components_.end() ? nullptr : &it->second;
}

std::size_t TruncatedModule::dim_at(const Weight& w) const {
  const auto* c = component(w);
  return c ? c->dim() : 0;
}

std::size_t TruncatedModule::total_dim() const {
  std::size_t n = 0;
  for (const auto& [w, c] : components_) n += c.dim();
  return n;
}

std::vector<Weight> TruncatedModule::weights_descending() const {
  std::vector<std::pair<int, Weight>> keyed;
  for (const auto& [w, c] : components_) {
    if (c.dim() == 0) continue;
    keyed.emplace_back(depth_of(w).value_or(0), w);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return b.second < a.second;
  });
  std::vector<Weight> out;
  for (auto& [d, w] : keyed) out.push_back(std::move(w));
  return out;
}

Weight TruncatedModule::target_of(std::size_t x, const Weight& source) const {
  return source + algebra_->element(x).weight;
}

RationalMatrix TruncatedModule::action_matrix(std::size_t x, const Weight& source) const {
  const Region src = classify(source);
  if (src == Region::Boundary) {
    throw TruncationError("weight " + source.to_string() + " lies below the truncation window");
  }
  const Weight t = target_of(x, source);
  const Region tgt = classify(t);
  if (tgt == Region::Boundary && dim_at(source) > 0) {
    throw TruncationError(algebra_->label(x) + " maps " + source.to_string() + " below the truncation window");
  }
  auto it = actions_.find({x, source});
  if (it != actions_.end()) return it->second;
  return RationalMatrix(tgt == Region::Window ? dim_at(t) : 0, dim_at(source));
}

RationalMatrix TruncatedModule::action_matrix(const glie::Combination& x, const Weight& source) const {
  std::optional<RationalMatrix> out;
  for (const auto& [z, c] : x) {
    RationalMatrix m = action_matrix(z, source) * c;
    if (out) {
      *out += m;
    } else {
      out = std::move(m);
    }
  }
  return out ? *out : RationalMatrix(0, dim_at(source));
}

WeightVector TruncatedModule::act(std::size_t x, const WeightVector& v) const {
  const Weight t = target_of(x, v.weight);
  if (v.coords.empty() || exactla::is_zero(v.coords)) {
    if (classify(t) == Region::Boundary) throw TruncationError("target " + t.to_string() + " is outside the window");
    return {t, Vector(dim_at(t), 0)};
  }
  RationalMatrix m = action_matrix(x, v.weight);
  return {t, m.apply(v.coords)};
}

// ------------------------------------------------------------------ maps ---

RationalMatrix ModuleMap::block(const Weight& w) const {
  auto it = blocks.find(w);
  if (it != blocks.end()) return it->second;
  return RationalMatrix(target->dim_at(w), source->dim_at(w));
}

WeightVector ModuleMap::apply(const WeightVector& v) const {
  if (v.coords.empty()) return {v.weight, Vector(target->dim_at(v.weight), 0)};
  return {v.weight, block(v.weight).apply(v.coords)};
}

namespace {

const RationalMatrix* stored(const TruncatedModule& m, std::size_t x, const Weight& w) {
  auto it = m.stored_actions().find({x, w});
  return it == m.stored_actions().end() ? nullptr : &it->second;
}

RationalMatrix product(const RationalMatrix* a, const RationalMatrix* b, std::size_t rows, std::size_t cols) {
  if (!a || !b) return RationalMatrix(rows, cols);
  return *a * *b;
}

bool not_boundary(const TruncatedModule& m, const Weight& w) { return m.classify(w) != Region::Boundary; }

}  // namespace

std::vector<MapViolation> check_intertwines(const ModuleMap& phi,
                                            const std::optional<std::vector<std::size_t>>& generators) {
  const auto& src = *phi.source;
  const auto& tgt = *phi.target;
  std::vector<std::size_t> xs;
  if (generators) {
    xs = *generators;
  } else {
    for (std::size_t x = 0; x < src.algebra().dim(); ++x) xs.push_back(x);
  }
  std::vector<MapViolation> out;
  for (std::size_t x : xs) {
    for (const auto& [w, comp] : src.components()) {
      if (comp.dim() == 0) continue;
      const Weight t = src.target_of(x, w);
      if (!not_boundary(src, t) || !not_boundary(tgt, t) || !not_boundary(tgt, w)) continue;
      RationalMatrix lhs = tgt.action_matrix(x, w) * phi.block(w);
      RationalMatrix rhs = phi.block(t) * src.action_matrix(x, w);
      if (!(lhs == rhs)) out.push_back({x, w});
    }
  }
  return out;
}

ModuleMap compose(const ModuleMap& outer, const ModuleMap& inner) {
  ModuleMap out{inner.source, outer.target, {}};
  for (const auto& [w, comp] : inner.source->components()) {
    if (comp.dim() == 0) continue;
    out.blocks[w] = outer.block(w) * inner.block(w);
  }
  return out;
}

std::vector<BracketViolation> check_bracket_compatibility(const TruncatedModule& m) {
  const auto& a = m.algebra();
  std::vector<BracketViolation> out;
  for (const auto& [mu, comp] : m.components()) {
    if (comp.dim() == 0 || !not_boundary(m, mu)) continue;
    for (std::size_t x = 0; x < a.dim(); ++x) {
      const Weight mx = m.target_of(x, mu);
      if (!not_boundary(m, mx)) continue;
      for (std::size_t y = x + 1; y < a.dim(); ++y) {
        const Weight my = m.target_of(y, mu);
        const Weight mxy = mx + a.element(y).weight;
        if (!not_boundary(m, my) || !not_boundary(m, mxy)) continue;
        const std::size_t rows = m.classify(mxy) == Region::Window ? m.dim_at(mxy) : 0;
        RationalMatrix rhs = product(stored(m, x, my), stored(m, y, mu), rows, comp.dim()) -
                             product(stored(m, y, mx), stored(m, x, mu), rows, comp.dim());
        RationalMatrix lhs(rows, comp.dim());
        for (const auto& [z, c] : a.bracket(x, y)) {
          if (const auto* s = stored(m, z, mu)) lhs += *s * c;
        }
        if (!(lhs == rhs)) out.push_back({x, y, mu});
      }
    }
  }
  return out;
}

// ----------------------------------------------------------------- verma ---

namespace {

using Mono = std::vector<int>;
using PVec = std::map<Mono, Rational>;

void accumulate(PVec& into, const PVec& from, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [m, c] : from) {
    auto [it, inserted] = into.emplace(m, c * scale);
    if (!inserted) {
      it->second += c * scale;
      if (it->second == 0) into.erase(it);
    }
  }
}

// Normal ordering in U(n-) (x) C_(lam,g).
class PbwEngine {
 public:
  PbwEngine(const glie::GenReductiveAlgebra& a, Weight lam, const GFunctional& g)
      : a_(a), lam_(std::move(lam)), g_(g), np_(a.roots().positive_roots().size()) {}

  Weight weight(const Mono& m) const {
    Weight w = lam_;
    for (std::size_t b = 0; b < np_; ++b) {
      if (m[b]) w -= Rational(m[b]) * a_.roots().root_weight(b);
    }
    return w;
  }

  const PVec& act(std::size_t x, const Mono& m) {
    auto key = std::make_pair(x, m);
    if (auto it = act_cache_.find(key); it != act_cache_.end()) return it->second;
    PVec out;
    const auto& el = a_.element(x);
    auto first = std::find_if(m.begin(), m.end(), [](int e) { return e > 0; });
    if (el.kind == Kind::H) {
      Rational v = weight(m)[el.index];
      if (v != 0) out.emplace(m, v);
    } else if (el.kind == Kind::F) {
      out = left_f(el.index, m);
    } else if (first == m.end()) {
      if (el.kind == Kind::U) {
        const Rational& v = g_.value(el.index);
        if (v != 0) out.emplace(m, v);
      }
    } else {
      const std::size_t b = static_cast<std::size_t>(first - m.begin());
      Mono rest = m;
      --rest[b];
      // x f_b m' = f_b (x m') + [x, f_b] m'
      const PVec inner = act(x, rest);
      for (const auto& [t, c] : inner) accumulate(out, left_f(b, t), c);
      for (const auto& [z, c] : a_.bracket(x, a_.f(b))) accumulate(out, act(z, rest), c);
    }
    return act_cache_.emplace(key, std::move(out)).first->second;
  }

  const PVec& left_f(std::size_t beta, const Mono& m) {
    auto key = std::make_pair(beta, m);
    if (auto it = f_cache_.find(key); it != f_cache_.end()) return it->second;
    PVec out;
    auto first = std::find_if(m.begin(), m.end(), [](int e) { return e > 0; });
    const std::size_t b = static_cast<std::size_t>(first - m.begin());
    if (first == m.end() || beta <= b) {
      Mono next = m;
      ++next[beta];
      out.emplace(std::move(next), 1);
    } else {
      Mono rest = m;
      --rest[b];
      // f_beta f_b m' = f_b (f_beta m') + [f_beta, f_b] m'
      const PVec inner = left_f(beta, rest);
      for (const auto& [t, c] : inner) accumulate(out, left_f(b, t), c);
      for (const auto& [z, c] : a_.bracket(a_.f(beta), a_.f(b))) {
        accumulate(out, left_f(a_.element(z).index, rest), c);
      }
    }
    return f_cache_.emplace(key, std::move(out)).first->second;
  }

 private:
  const glie::GenReductiveAlgebra& a_;
  Weight lam_;
  const GFunctional& g_;
  std::size_t np_;
  std::map<std::pair<std::size_t, Mono>, PVec> act_cache_;
  std::map<std::pair<std::size_t, Mono>, PVec> f_cache_;
};

std::string monomial_label(const rootsys::RootSystem& r, const Mono& m) {
  std::string out;
  for (std::size_t b = 0; b < m.size(); ++b) {
    if (m[b] == 0) continue;
    out += r.rank() == 1 ? "f" : "f[" + r.root_label(b) + "]";
    if (m[b] > 1) out += "^" + std::to_string(m[b]);
    out += " ";
  }
  return out + "w";
}

void drops_up_to(std::size_t rank, int depth, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() == rank) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int c : cur) used += c;
  for (int k = 0; used + k <= depth; ++k) {
    cur.push_back(k);
    drops_up_to(rank, depth, cur, out);
    cur.pop_back();
  }
}

GFunctional checked_functional(const AlgebraPtr& a, const GFunctional& g) {
  if (g.algebra() == a.get()) return g;
  if (g.values().size() != a->radical_dim()) throw InvalidFunctional("functional does not match the algebra");
  auto v = glie::validate_g(*a, g.values());
  if (auto* ok = std::get_if<GFunctional>(&v)) return *ok;
  throw InvalidFunctional("functional is not in G for this algebra");
}

}  // namespace

ModulePtr build_verma(const AlgebraPtr& a, const Weight& lam, const GFunctional& g_in, int depth) {
  const auto& r = a->roots();
  if (lam.size() != r.rank()) throw DimensionError("weight rank mismatch");
  if (depth < 0) throw InputError("depth must be nonnegative");
  const GFunctional g = checked_functional(a, g_in);

  auto mod = std::make_shared<TruncatedModule>(a, std::vector<Weight>{lam}, depth, false);
  std::vector<std::vector<int>> drops;
  std::vector<int> cur;
  drops_up_to(r.rank(), depth, cur, drops);

  std::map<Weight, std::map<Mono, std::size_t>> index;
  for (const auto& nu : drops) {
    const Weight w = lam - r.root_weight(nu);
    Component c;
    c.pbw = rootsys::root_partitions(r, nu);
    auto& idx = index[w];
    for (std::size_t k = 0; k < c.pbw.size(); ++k) {
      c.labels.push_back(monomial_label(r, c.pbw[k]));
      idx[c.pbw[k]] = k;
    }
    mod->add_component(w, std::move(c));
  }

  PbwEngine engine(*a, lam, g);
  for (std::size_t x = 0; x < a->dim(); ++x) {
    for (const auto& [w, comp] : mod->components()) {
      const Weight t = mod->target_of(x, w);
      if (mod->classify(t) != Region::Window) continue;
      auto ti = index.find(t);
      if (ti == index.end()) continue;
      RationalMatrix m(ti->second.size(), comp.dim());
      for (std::size_t k = 0; k < comp.dim(); ++k) {
        for (const auto& [mono, c] : engine.act(x, comp.pbw[k])) {
          auto row = ti->second.find(mono);
          if (row == ti->second.end()) throw InternalConsistencyError("PBW rewrite left the target weight space");
          m.set(row->second, k, c);
        }
      }
      mod->set_action(x, w, std::move(m));
    }
  }
  mod->set_g_label(g);
  mod->add_generator(WeightVector{lam, Vector{1}});
  return mod;
}

WeightVector apply(const TruncatedModule& m, const std::vector<std::size_t>& word, const WeightVector& v) {
  WeightVector cur = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) cur = m.act(*it, cur);
  return cur;
}

std::vector<std::size_t> pbw_word(const glie::GenReductiveAlgebra& a, const std::vector<int>& exponents) {
  std::vector<std::size_t> word;
  for (std::size_t b = 0; b < exponents.size(); ++b) {
    for (int k = 0; k < exponents[b]; ++k) word.push_back(a.f(b));
  }
  return word;
}

WeightVector basis_vector(const TruncatedModule& m, const Weight& w, std::size_t index) {
  const std::size_t d = m.dim_at(w);
  if (index >= d) throw InputError("basis index out of range at weight " + w.to_string());
  Vector v(d, 0);
  v[index] = 1;
  return {w, std::move(v)};
}

ModulePtr module_from_simple(const AlgebraPtr& a, const glie::SimpleRealization& s, const GFunctional& g_in) {
  const GFunctional g = checked_functional(a, g_in);
  const auto& r = a->roots();
  const int depth = *r.depth_below(s.highest_weight, rootsys::lowest_weight(r, s.highest_weight));
  auto mod = std::make_shared<TruncatedModule>(a, std::vector<Weight>{s.highest_weight}, depth, true);

  std::map<Weight, std::vector<std::size_t>> positions;
  for (std::size_t k = 0; k < s.dim(); ++k) positions[s.weights[k]].push_back(k);
  for (const auto& [w, ks] : positions) {
    Component c;
    for (std::size_t k : ks) c.labels.push_back(s.labels[k]);
    mod->add_component(w, std::move(c));
  }
  for (std::size_t x = 0; x < a->g0_dim(); ++x) {
    for (const auto& [w, ks] : positions) {
      const Weight t = w + a->element(x).weight;
      auto tp = positions.find(t);
      if (tp == positions.end()) continue;
      RationalMatrix m(tp->second.size(), ks.size());
      for (std::size_t j = 0; j < ks.size(); ++j) {
        for (std::size_t i = 0; i < tp->second.size(); ++i) m.set(i, j, s.action[x].at(tp->second[i], ks[j]));
      }
      mod->set_action(x, w, std::move(m));
    }
  }
  for (std::size_t k : a->j1()) {
    for (const auto& [w, ks] : positions) {
      mod->set_action(a->u(k), w, RationalMatrix::identity(ks.size()) * g.value(k));
    }
  }
  mod->set_g_label(g);
  mod->add_generator(basis_vector(*mod, s.highest_weight, 0));
  return mod;
}

// ------------------------------------------------------------ submodules ---

namespace {

Rational root_height(const rootsys::RootSystem& r, const Weight& w) {
  Rational h = 0;
  for (const auto& c : r.to_root_coords(w)) h += c;
  return h;
}

struct Stage {
  std::vector<std::size_t> elements;
  bool drop_boundary;
};

std::vector<Stage> closure_stages(const glie::GenReductiveAlgebra& a, Closure closure, bool lowering) {
  const auto& r = a.roots();
  std::vector<Stage> stages;
  Stage e{{}, false}, jp{{}, false}, j0{{}, false}, jm{{}, true}, f{{}, true};
  for (std::size_t i = 0; i < r.rank(); ++i) {
    e.elements.push_back(a.e(r.simple_index(i)));
    f.elements.push_back(a.f(r.simple_index(i)));
  }
  for (std::size_t k = 0; k < a.radical_dim(); ++k) {
    const Rational h = root_height(r, a.element(a.u(k)).weight);
    (h > 0 ? jp : h == 0 ? j0 : jm).elements.push_back(a.u(k));
  }
  stages.push_back(e);
  if (closure == Closure::Full) {
    stages.push_back(jp);
    stages.push_back(j0);
    if (lowering) stages.push_back(jm);
  }
  if (lowering) stages.push_back(f);
  return stages;
}

std::map<Weight, exactla::Subspace> close_under(const TruncatedModule& m, const std::vector<WeightVector>& vectors,
                                                const std::vector<Stage>& stages, bool* hit_boundary) {
  std::map<Weight, exactla::Subspace> spaces;
  auto space_at = [&](const Weight& w) -> exactla::Subspace& {
    auto it = spaces.find(w);
    if (it == spaces.end()) it = spaces.emplace(w, exactla::Subspace(m.dim_at(w))).first;
    return it->second;
  };
  for (const auto& v : vectors) {
    if (v.coords.empty() || exactla::is_zero(v.coords)) continue;
    if (m.classify(v.weight) != Region::Window) throw InputError("vector outside the module window");
    space_at(v.weight).insert(v.coords);
  }
  for (const auto& stage : stages) {
    std::deque<WeightVector> work;
    for (const auto& [w, s] : spaces) {
      for (const auto& b : s.basis()) work.push_back({w, b});
    }
    while (!work.empty()) {
      WeightVector v = std::move(work.front());
      work.pop_front();
      for (std::size_t x : stage.elements) {
        const Weight t = m.target_of(x, v.weight);
        const Region reg = m.classify(t);
        if (reg == Region::Zero) continue;
        if (reg == Region::Boundary) {
          if (hit_boundary) *hit_boundary = true;
          if (stage.drop_boundary) continue;
          throw TruncationError("closure needs weight " + t.to_string() + " below the window");
        }
        if (m.dim_at(t) == 0) continue;
        Vector img = m.act(x, v).coords;
        if (exactla::is_zero(img)) continue;
        if (space_at(t).insert(img)) work.push_back({t, std::move(img)});
      }
    }
  }
  for (auto it = spaces.begin(); it != spaces.end();) {
    it = it->second.dim() == 0 ? spaces.erase(it) : std::next(it);
  }
  return spaces;
}

std::vector<std::size_t> closed_elements(const glie::GenReductiveAlgebra& a, Closure closure) {
  std::vector<std::size_t> xs;
  const std::size_t n = closure == Closure::Full ? a.dim() : a.g0_dim();
  for (std::size_t x = 0; x < n; ++x) xs.push_back(x);
  return xs;
}

}  // namespace

std::map<Weight, exactla::Subspace> raising_span(const TruncatedModule& m, const std::vector<WeightVector>& vectors,
                                                 Closure closure, bool* hit_boundary) {
  return close_under(m, vectors, closure_stages(m.algebra(), closure, false), hit_boundary);
}

std::size_t Submodule::dim_at(const Weight& w) const {
  auto it = spaces.find(w);
  return it == spaces.end() ? 0 : it->second.dim();
}

bool Submodule::contains(const WeightVector& v) const {
  if (v.coords.empty() || exactla::is_zero(v.coords)) return true;
  auto it = spaces.find(v.weight);
  return it != spaces.end() && it->second.contains(v.coords);
}

std::string describe(const TruncatedModule& m, const WeightVector& v) {
  const auto* comp = m.component(v.weight);
  std::string out;
  for (std::size_t k = 0; k < v.coords.size(); ++k) {
    const Rational& c = v.coords[k];
    if (c == 0) continue;
    const std::string label = comp ? comp->labels[k] : "?";
    Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) out += oprime::to_string(mag) + "*";
    out += label.find(' ') != std::string::npos && mag != 1 ? "(" + label + ")" : label;
  }
  return out.empty() ? "0" : out;
}

namespace {

ModulePtr restrict_to(const ModulePtr& ambient, const std::map<Weight, exactla::Subspace>& spaces,
                      const std::vector<std::size_t>& elements, const std::vector<WeightVector>& gens) {
  const auto& m = *ambient;
  auto mod = std::make_shared<TruncatedModule>(m.algebra_ptr(), m.window_tops(), m.depth(), m.complete());
  for (const auto& [w, s] : spaces) {
    Component c;
    for (const auto& b : s.basis()) c.labels.push_back(describe(m, {w, b}));
    mod->add_component(w, std::move(c));
  }
  for (std::size_t x : elements) {
    for (const auto& [w, s] : spaces) {
      const Weight t = m.target_of(x, w);
      if (m.classify(t) != Region::Window) continue;
      auto ts = spaces.find(t);
      const RationalMatrix a = m.action_matrix(x, w);
      RationalMatrix out(ts == spaces.end() ? 0 : ts->second.dim(), s.dim());
      for (std::size_t k = 0; k < s.dim(); ++k) {
        Vector img = a.apply(s.basis()[k]);
        if (exactla::is_zero(img)) continue;
        if (ts == spaces.end()) throw InternalConsistencyError("submodule is not closed");
        auto coords = ts->second.coordinates(img);
        if (!coords) throw InternalConsistencyError("submodule is not closed");
        for (std::size_t i = 0; i < coords->size(); ++i) out.set(i, k, (*coords)[i]);
      }
      mod->set_action(x, w, std::move(out));
    }
  }
  for (const auto& g : gens) {
    if (g.coords.empty() || exactla::is_zero(g.coords)) continue;
    auto it = spaces.find(g.weight);
    if (it == spaces.end()) continue;
    if (auto c = it->second.coordinates(g.coords)) mod->add_generator({g.weight, *c});
  }
  if (m.g_label()) mod->set_g_label(*m.g_label());
  return mod;
}

}  // namespace

Submodule submodule_generated(const ModulePtr& m, const std::vector<WeightVector>& vectors, Closure closure) {
  auto spaces = close_under(*m, vectors, closure_stages(m->algebra(), closure, true), nullptr);
  auto mod = restrict_to(m, spaces, closed_elements(m->algebra(), closure), vectors);
  return Submodule{mod, std::move(spaces), m};
}

ModuleMap inclusion(const Submodule& s) {
  ModuleMap out{s.module, s.ambient, {}};
  for (const auto& [w, sp] : s.spaces) {
    RationalMatrix b(s.ambient->dim_at(w), sp.dim());
    for (std::size_t k = 0; k < sp.dim(); ++k) {
      for (std::size_t i = 0; i < sp.basis()[k].size(); ++i) b.set(i, k, sp.basis()[k][i]);
    }
    out.blocks[w] = std::move(b);
  }
  return out;
}

namespace {

Vector reduce_to_kept(const Vector& v, const exactla::Subspace* s, const std::vector<std::size_t>& kept) {
  Vector r = s ? s->reduce(v) : v;
  Vector out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(r[k]);
  return out;
}

}  // namespace

Quotient quotient(const ModulePtr& mp, const Submodule& s) {
  const auto& m = *mp;
  const auto& a = m.algebra();
  Quotient q{nullptr, {}, mp, s.spaces};
  auto mod = std::make_shared<TruncatedModule>(m.algebra_ptr(), m.window_tops(), m.depth(), m.complete());
  auto space = [&](const Weight& w) -> const exactla::Subspace* {
    auto it = s.spaces.find(w);
    return it == s.spaces.end() ? nullptr : &it->second;
  };
  for (const auto& [w, comp] : m.components()) {
    if (comp.dim() == 0) continue;
    std::vector<std::size_t> kept;
    if (const auto* sp = space(w)) {
      kept = sp->complement();
    } else {
      for (std::size_t k = 0; k < comp.dim(); ++k) kept.push_back(k);
    }
    if (kept.empty()) continue;
    Component c;
    for (std::size_t k : kept) c.labels.push_back(comp.labels[k]);
    if (!comp.pbw.empty()) {
      for (std::size_t k : kept) c.pbw.push_back(comp.pbw[k]);
    }
    mod->add_component(w, std::move(c));
    q.kept[w] = std::move(kept);
  }
  // a G0-only submodule need not be stable under the radical
  bool radical_ok = true;
  for (const auto& [w, sp] : s.spaces) {
    for (std::size_t k = 0; k < a.radical_dim() && radical_ok; ++k) {
      const Weight t = m.target_of(a.u(k), w);
      if (m.classify(t) != Region::Window) continue;
      const RationalMatrix am = m.action_matrix(a.u(k), w);
      const auto* ts = space(t);
      for (const auto& b : sp.basis()) {
        Vector img = am.apply(b);
        if (exactla::is_zero(img)) continue;
        if (!ts || !ts->contains(img)) {
          radical_ok = false;
          break;
        }
      }
    }
  }
  const std::size_t limit = radical_ok ? a.dim() : a.g0_dim();
  for (std::size_t x = 0; x < limit; ++x) {
    for (const auto& [w, kept] : q.kept) {
      const Weight t = m.target_of(x, w);
      if (m.classify(t) != Region::Window) continue;
      auto tk = q.kept.find(t);
      if (tk == q.kept.end()) continue;
      const RationalMatrix am = m.action_matrix(x, w);
      RationalMatrix out(tk->second.size(), kept.size());
      for (std::size_t j = 0; j < kept.size(); ++j) {
        Vector col = reduce_to_kept(am.column_vector(kept[j]), space(t), tk->second);
        for (std::size_t i = 0; i < col.size(); ++i) out.set(i, j, col[i]);
      }
      mod->set_action(x, w, std::move(out));
    }
  }
  for (const auto& g : m.generators()) {
    auto tk = q.kept.find(g.weight);
    if (tk == q.kept.end()) continue;
    Vector img = reduce_to_kept(g.coords, space(g.weight), tk->second);
    if (!exactla::is_zero(img)) mod->add_generator({g.weight, std::move(img)});
  }
  if (m.g_label()) mod->set_g_label(*m.g_label());
  q.module = mod;
  return q;
}

ModuleMap projection(const Quotient& q) {
  ModuleMap out{q.ambient, q.module, {}};
  for (const auto& [w, kept] : q.kept) {
    auto it = q.spaces.find(w);
    const exactla::Subspace* sp = it == q.spaces.end() ? nullptr : &it->second;
    const std::size_t d = q.ambient->dim_at(w);
    RationalMatrix b(kept.size(), d);
    for (std::size_t j = 0; j < d; ++j) {
      Vector unit(d, 0);
      unit[j] = 1;
      Vector col = reduce_to_kept(unit, sp, kept);
      for (std::size_t i = 0; i < col.size(); ++i) b.set(i, j, col[i]);
    }
    out.blocks[w] = std::move(b);
  }
  return out;
}

// ---------------------------------------------------------------- tensor ---

ModulePtr tensor_with_simple(const ModulePtr& mp, const glie::SimpleRealization& s) {
  const auto& m = *mp;
  const auto& a = m.algebra();
  for (std::size_t k : a.j2()) {
    for (const auto& [key, mat] : m.stored_actions()) {
      if (key.first == a.u(k) && !mat.is_zero()) {
        throw UnsupportedTensor("J2 acts nontrivially on the first factor");
      }
    }
  }
  std::vector<Weight> tops;
  for (const auto& t : m.window_tops()) tops.push_back(t + s.highest_weight);
  auto mod = std::make_shared<TruncatedModule>(m.algebra_ptr(), tops, m.depth(), m.complete());

  // pieces[nu] = (s index, m weight, offset), ordered by s index
  struct Piece {
    std::size_t k;
    Weight mu;
    std::size_t offset;
  };
  std::map<Weight, std::vector<Piece>> pieces;
  std::map<Weight, Component> comps;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    for (const auto& [mu, comp] : m.components()) {
      if (comp.dim() == 0) continue;
      const Weight nu = mu + s.weights[k];
      if (mod->classify(nu) != Region::Window) continue;
      auto& c = comps[nu];
      pieces[nu].push_back({k, mu, c.labels.size()});
      for (const auto& l : comp.labels) c.labels.push_back(l + " ⊗ " + s.labels[k]);
    }
  }
  for (auto& [nu, c] : comps) mod->add_component(nu, std::move(c));

  auto find_piece = [&](const Weight& nu, std::size_t k) -> const Piece* {
    auto it = pieces.find(nu);
    if (it == pieces.end()) return nullptr;
    for (const auto& p : it->second) {
      if (p.k == k) return &p;
    }
    return nullptr;
  };

  for (std::size_t x = 0; x < a.dim(); ++x) {
    const Weight& wx = a.element(x).weight;
    for (const auto& [nu, ps] : pieces) {
      const Weight t = nu + wx;
      if (mod->classify(t) != Region::Window || mod->dim_at(t) == 0) continue;
      RationalMatrix out(mod->dim_at(t), mod->dim_at(nu));
      for (const auto& p : ps) {
        if (const Piece* q = find_piece(t, p.k)) out.paste(m.action_matrix(x, p.mu), q->offset, p.offset);
        if (x >= a.g0_dim()) continue;
        const auto& sx = s.action[x];
        for (std::size_t k2 = 0; k2 < s.dim(); ++k2) {
          Rational c = sx.at(k2, p.k);
          if (c == 0) continue;
          const Piece* q = find_piece(t, k2);
          if (!q) continue;
          for (std::size_t i = 0; i < m.dim_at(p.mu); ++i) out.add_to(q->offset + i, p.offset + i, c);
        }
      }
      mod->set_action(x, nu, std::move(out));
    }
  }
  for (const auto& g : m.generators()) {
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const Weight nu = g.weight + s.weights[k];
      const Piece* p = find_piece(nu, k);
      if (!p) continue;
      Vector v(mod->dim_at(nu), 0);
      for (std::size_t i = 0; i < g.coords.size(); ++i) v[p->offset + i] = g.coords[i];
      mod->add_generator({nu, std::move(v)});
    }
  }
  if (m.g_label()) mod->set_g_label(*m.g_label());
  return mod;
}

// ---------------------------------------------------------------- sums ---

DirectSum direct_sum(const std::vector<ModulePtr>& summands) {
  if (summands.empty()) throw InputError("direct sum of no modules");
  const auto& a = summands.front()->algebra_ptr();
  std::vector<Weight> tops;
  bool complete = true;
  int depth_min = summands.front()->depth(), depth_max = depth_min;
  for (const auto& s : summands) {
    if (s->algebra_ptr() != a) throw InputError("summands live over different algebras");
    if (s->g_label().has_value() != summands.front()->g_label().has_value() ||
        (s->g_label() && *s->g_label() != *summands.front()->g_label())) {
      throw InputError("summands carry different functionals");
    }
    for (const auto& t : s->window_tops()) tops.push_back(t);
    complete = complete && s->complete();
    depth_min = std::min(depth_min, s->depth());
    depth_max = std::max(depth_max, s->depth());
  }
  auto mod = std::make_shared<TruncatedModule>(a, tops, complete ? depth_max : depth_min, complete);
  DirectSum out{mod, summands, std::vector<std::map<Weight, std::size_t>>(summands.size())};

  std::map<Weight, Component> comps;
  for (std::size_t k = 0; k < summands.size(); ++k) {
    for (const auto& [w, c] : summands[k]->components()) {
      if (c.dim() == 0 || mod->classify(w) != Region::Window) continue;
      auto& dst = comps[w];
      out.offsets[k][w] = dst.labels.size();
      for (const auto& l : c.labels) {
        dst.labels.push_back(summands.size() > 1 ? "(" + std::to_string(k + 1) + ") " + l : l);
      }
    }
  }
  for (auto& [w, c] : comps) mod->add_component(w, std::move(c));

  for (std::size_t x = 0; x < a->dim(); ++x) {
    for (const auto& [w, c] : mod->components()) {
      const Weight t = mod->target_of(x, w);
      if (mod->classify(t) != Region::Window || mod->dim_at(t) == 0) continue;
      RationalMatrix block(mod->dim_at(t), c.dim());
      for (std::size_t k = 0; k < summands.size(); ++k) {
        auto so = out.offsets[k].find(w);
        auto to = out.offsets[k].find(t);
        if (so == out.offsets[k].end() || to == out.offsets[k].end()) continue;
        block.paste(summands[k]->action_matrix(x, w), to->second, so->second);
      }
      mod->set_action(x, w, std::move(block));
    }
  }
  for (std::size_t k = 0; k < summands.size(); ++k) {
    for (const auto& g : summands[k]->generators()) {
      auto it = out.offsets[k].find(g.weight);
      if (it == out.offsets[k].end()) continue;
      Vector v(mod->dim_at(g.weight), 0);
      for (std::size_t i = 0; i < g.coords.size(); ++i) v[it->second + i] = g.coords[i];
      mod->add_generator({g.weight, std::move(v)});
    }
  }
  if (summands.front()->g_label()) mod->set_g_label(*summands.front()->g_label());
  return out;
}

ModuleMap summand_projection(const DirectSum& from, const DirectSum& to, const std::vector<std::size_t>& keep) {
  if (keep.size() != to.summands.size()) throw DimensionError("projection keeps the wrong number of summands");
  ModuleMap out{from.module, to.module, {}};
  for (const auto& [w, c] : from.module->components()) {
    RationalMatrix b(to.module->dim_at(w), c.dim());
    for (std::size_t p = 0; p < keep.size(); ++p) {
      if (keep[p] >= from.summands.size()) throw DimensionError("summand index out of range");
      auto fo = from.offsets[keep[p]].find(w);
      auto tof = to.offsets[p].find(w);
      if (fo == from.offsets[keep[p]].end() || tof == to.offsets[p].end()) continue;
      const std::size_t d = from.summands[keep[p]]->dim_at(w);
      if (d != to.summands[p]->dim_at(w)) throw DimensionError("kept summands differ at " + w.to_string());
      b.paste(RationalMatrix::identity(d), tof->second, fo->second);
    }
    out.blocks[w] = std::move(b);
  }
  return out;
}

namespace {

using Operator = std::map<Weight, RationalMatrix>;

RationalMatrix inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  RationalMatrix inv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector e(n, 0);
    e[k] = 1;
    auto sol = exactla::solve(m, e);
    if (!sol.consistent()) throw InconsistentAction("singular change of basis");
    for (std::size_t i = 0; i < n; ++i) inv.set(i, k, sol.solution[i]);
  }
  return inv;
}

// The U(n0-)-equivariant map from summand j to summand i sending v_j to v_i.
Operator equivariant_map(const TruncatedModule& mj, const WeightVector& vj, const TruncatedModule& mi,
                         const WeightVector& vi) {
  const auto& a = mj.algebra();
  const auto& r = a.roots();
  struct Pairs {
    exactla::Subspace span;
    std::vector<Vector> src, dst;
  };
  std::map<Weight, Pairs> seen;
  std::deque<std::pair<WeightVector, WeightVector>> work;
  seen.emplace(vj.weight, Pairs{exactla::Subspace(mj.dim_at(vj.weight)), {}, {}});
  seen[vj.weight].span.insert(vj.coords);
  seen[vj.weight].src.push_back(vj.coords);
  seen[vj.weight].dst.push_back(vi.coords);
  work.emplace_back(vj, vi);
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    for (std::size_t i = 0; i < r.rank(); ++i) {
      const std::size_t f = a.f(r.simple_index(i));
      WeightVector fx = mj.act(f, x);
      WeightVector fy = mi.act(f, y);
      if (fx.coords.empty() || exactla::is_zero(fx.coords)) {
        if (!fy.coords.empty() && !exactla::is_zero(fy.coords)) {
          throw InconsistentAction("twist is not compatible with the annihilator of the generator");
        }
        continue;
      }
      auto it = seen.find(fx.weight);
      if (it == seen.end()) it = seen.emplace(fx.weight, Pairs{exactla::Subspace(mj.dim_at(fx.weight)), {}, {}}).first;
      if (it->second.span.insert(fx.coords)) {
        it->second.src.push_back(fx.coords);
        it->second.dst.push_back(fy.coords);
        work.emplace_back(fx, fy);
      }
    }
  }
  Operator out;
  const Weight shift = vi.weight - vj.weight;
  for (auto& [w, p] : seen) {
    const std::size_t d = mj.dim_at(w);
    if (p.src.size() != d) throw InconsistentAction("summand is not generated by its top vector");
    RationalMatrix b(d, d), c(mi.dim_at(w + shift), d);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < d; ++i) b.set(i, k, p.src[k][i]);
      for (std::size_t i = 0; i < p.dst[k].size(); ++i) c.set(i, k, p.dst[k][i]);
    }
    out[w] = c * inverse(b);
  }
  // equivariance under every simple f
  for (const auto& [w, phi] : out) {
    for (std::size_t i = 0; i < r.rank(); ++i) {
      const std::size_t f = a.f(r.simple_index(i));
      const Weight t = w + a.element(f).weight;
      auto pt = out.find(t);
      RationalMatrix lhs = mi.action_matrix(f, w + shift) * phi;
      if (pt == out.end()) {
        if (!lhs.is_zero()) throw InconsistentAction("twist is not U(n0-)-equivariant");
        continue;
      }
      if (!(lhs == pt->second * mj.action_matrix(f, w))) {
        throw InconsistentAction("twist is not U(n0-)-equivariant");
      }
    }
  }
  return out;
}

}  // namespace

DirectSum jordan_sum(const std::vector<ModulePtr>& summands, const GFunctional& g,
                     const std::vector<std::vector<Rational>>& twist, std::size_t u) {
  if (summands.empty()) throw InputError("jordan sum of no modules");
  const auto& ap = summands.front()->algebra_ptr();
  const auto& a = *ap;
  const std::size_t k = summands.size();
  if (twist.size() != k) throw DimensionError("twist must be a square matrix over the summands");
  bool lower = true, upper = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (twist[i].size() != k) throw DimensionError("twist must be a square matrix over the summands");
    for (std::size_t j = 0; j < k; ++j) {
      if (twist[i][j] == 0) continue;
      if (i <= j) lower = false;
      if (i >= j) upper = false;
    }
  }
  if (!lower && !upper) throw InputError("twist must be strictly triangular");
  if (u >= a.dim() || !a.is_radical(u)) throw InputError("twisting element must lie in the radical");
  for (std::size_t b = 0; b < a.roots().positive_roots().size(); ++b) {
    if (!a.bracket(a.f(b), u).empty()) throw InputError("twisting element is not killed by n0-");
  }
  const Weight& wu = a.element(u).weight;
  if (!a.roots().in_root_lattice(wu)) throw InputError("twisting element has weight outside the root lattice");
  for (const auto& s : summands) {
    if (!s->complete()) throw InputError("jordan sum needs finite-dimensional summands");
    if (s->generators().empty()) throw InputError("summand without a generator");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (twist[i][j] == 0) continue;
      if (summands[i]->generators()[0].weight != summands[j]->generators()[0].weight + wu) {
        throw InputError("twist entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") joins generators whose weights do not differ by wt(u)");
      }
    }
  }

  DirectSum base = direct_sum(summands);
  auto mod = std::make_shared<TruncatedModule>(*base.module);
  mod->set_g_label(g);

  // u = g(u) + sum of twists
  const std::size_t local = a.radical_local(u);
  Operator op;
  for (const auto& [w, c] : mod->components()) {
    const Weight t = w + wu;
    if (mod->classify(t) != Region::Window || mod->dim_at(t) == 0) continue;
    RationalMatrix m(mod->dim_at(t), c.dim());
    if (t == w && g.value(local) != 0) m = RationalMatrix::identity(c.dim()) * g.value(local);
    op[w] = std::move(m);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (twist[i][j] == 0) continue;
      Operator phi = equivariant_map(*summands[j], summands[j]->generators()[0], *summands[i],
                                     summands[i]->generators()[0]);
      for (const auto& [w, block] : phi) {
        auto so = base.offsets[j].find(w);
        auto to = base.offsets[i].find(w + wu);
        if (so == base.offsets[j].end() || to == base.offsets[i].end()) continue;
        RationalMatrix add(mod->dim_at(w + wu), mod->dim_at(w));
        add.paste(block * twist[i][j], to->second, so->second);
        op[w] += add;
      }
    }
  }

  // the rest of u's summand by commutators with simple e's
  const auto& summand = a.summands()[a.summand_of(local)];
  struct Known {
    exactla::Subspace span;
    std::vector<Vector> combos;
    std::vector<Operator> ops;
  };
  std::map<Weight, Known> known;
  auto local_vec = [&](const glie::Combination& c) {
    Vector v(summand.dim(), 0);
    for (const auto& [z, val] : c) v[a.radical_local(z) - summand.offset] = val;
    return v;
  };
  auto record = [&](const glie::Combination& c, Operator o) {
    const Weight& w = a.element(c.begin()->first).weight;
    auto it = known.find(w);
    if (it == known.end()) it = known.emplace(w, Known{exactla::Subspace(summand.dim()), {}, {}}).first;
    Vector v = local_vec(c);
    if (!it->second.span.insert(v)) return false;
    it->second.combos.push_back(std::move(v));
    it->second.ops.push_back(std::move(o));
    return true;
  };
  std::deque<std::pair<glie::Combination, Operator>> work;
  record({{u, 1}}, op);
  work.emplace_back(glie::Combination{{u, 1}}, op);
  std::vector<std::pair<glie::Combination, Operator>> dependent;
  while (!work.empty()) {
    auto [c, o] = work.front();
    work.pop_front();
    const Weight& wc = a.element(c.begin()->first).weight;
    for (std::size_t i = 0; i < a.rank(); ++i) {
      const std::size_t e = a.e(a.roots().simple_index(i));
      glie::Combination next = a.bracket({{e, 1}}, c);
      if (next.empty()) continue;
      Operator no;
      for (const auto& [w, comp] : mod->components()) {
        const Weight t = w + wc + a.element(e).weight;
        if (mod->classify(t) != Region::Window || mod->dim_at(t) == 0) continue;
        RationalMatrix m(mod->dim_at(t), comp.dim());
        auto ow = o.find(w);
        if (ow != o.end()) m += mod->action_matrix(e, w + wc) * ow->second;
        auto oe = o.find(w + a.element(e).weight);
        if (oe != o.end()) m -= oe->second * mod->action_matrix(e, w);
        no[w] = std::move(m);
      }
      if (record(next, no)) {
        work.emplace_back(next, no);
      } else {
        dependent.emplace_back(next, no);
      }
    }
  }
  std::map<std::size_t, Operator> basis_ops;
  for (auto& [w, kn] : known) {
    const auto positions = summand.realization.basis_at(w);
    if (kn.combos.size() != positions.size()) throw InconsistentAction("radical summand not reached from u");
    const std::size_t d = positions.size();
    RationalMatrix c(d, d);
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t p = 0; p < d; ++p) c.set(p, m, kn.combos[m][positions[p]]);
    }
    RationalMatrix ci = inverse(c);
    for (std::size_t p = 0; p < d; ++p) {
      Operator total;
      for (std::size_t m = 0; m < d; ++m) {
        Rational coef = ci.at(m, p);
        if (coef == 0) continue;
        for (const auto& [sw, mat] : kn.ops[m]) {
          auto it = total.find(sw);
          if (it == total.end()) {
            total.emplace(sw, mat * coef);
          } else {
            it->second += mat * coef;
          }
        }
      }
      basis_ops[summand.offset + positions[p]] = std::move(total);
    }
  }
  for (std::size_t p = 0; p < summand.dim(); ++p) {
    const std::size_t x = a.u(summand.offset + p);
    for (const auto& [w, c] : mod->components()) mod->set_action(x, w, RationalMatrix(0, 0));
    auto it = basis_ops.find(summand.offset + p);
    if (it == basis_ops.end()) continue;
    for (auto& [w, mat] : it->second) mod->set_action(x, w, mat);
  }
  for (const auto& [c, o] : dependent) {
    for (const auto& [w, mat] : o) {
      if (!(mod->action_matrix(c, w) == mat)) {
        throw InconsistentAction("radical action from commutators disagrees at " + w.to_string());
      }
    }
  }

  auto bad = check_bracket_compatibility(*mod);
  if (!bad.empty()) {
    const auto& v = bad.front();
    throw InconsistentAction("bracket of " + a.label(v.x) + " and " + a.label(v.y) + " fails at weight " +
                             v.weight.to_string());
  }
  base.module = mod;
  return base;
}

ModuleMap map_from_verma(const ModulePtr& verma, const ModulePtr& target, const WeightVector& image) {
  const auto& top = verma->window_tops();
  if (top.size() != 1 || image.weight != top.front()) throw InputError("image must have the Verma top weight");
  ModuleMap out{verma, target, {}};
  for (const auto& [w, comp] : verma->components()) {
    if (comp.dim() == 0 || target->classify(w) == Region::Boundary) continue;
    RationalMatrix b(target->dim_at(w), comp.dim());
    for (std::size_t k = 0; k < comp.dim(); ++k) {
      WeightVector v = apply(*target, pbw_word(verma->algebra(), comp.pbw[k]), image);
      for (std::size_t i = 0; i < v.coords.size(); ++i) b.set(i, k, v.coords[i]);
    }
    out.blocks[w] = std::move(b);
  }
  return out;
}

}  // namespace oprime::pbwmod
