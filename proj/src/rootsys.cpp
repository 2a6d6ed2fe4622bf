#include "oprime/rootsys.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "oprime/errors.hpp"

namespace oprime::rootsys {

namespace {

constexpr std::size_t kMaxRoots = 2000;
constexpr int kMaxHeight = 200;
constexpr std::size_t kMaxOrbit = 200000;

bool less_lex(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

bool Weight::is_integral() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& x) { return oprime::is_integer(x); });
}

bool Weight::is_dominant_integral() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](const Rational& x) { return oprime::is_integer(x) && x >= 0; });
}

Weight& Weight::operator+=(const Weight& other) {
  if (other.size() != size()) throw DimensionError("weight rank mismatch");
  for (std::size_t i = 0; i < size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Weight& Weight::operator-=(const Weight& other) {
  if (other.size() != size()) throw DimensionError("weight rank mismatch");
  for (std::size_t i = 0; i < size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Weight operator*(const Rational& s, const Weight& w) {
  Weight out = w;
  for (auto& x : out.coords_) x *= s;
  return out;
}

Weight operator-(const Weight& w) { return Rational(-1) * w; }

bool operator<(const Weight& a, const Weight& b) { return less_lex(a.coords_, b.coords_); }

std::string Weight::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ",";
    out += oprime::to_string(coords_[i]);
  }
  return out + ")";
}

int height(const RootVector& root) { return std::accumulate(root.begin(), root.end(), 0); }

std::optional<std::size_t> RootSystem::positive_index(const RootVector& root) const {
  auto it = std::find(positive_.begin(), positive_.end(), root);
  if (it == positive_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - positive_.begin());
}

bool RootSystem::is_simple(std::size_t root) const { return height(positive_[root]) == 1; }

std::string RootSystem::root_label(std::size_t root) const {
  std::string out;
  const auto& c = positive_[root];
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (c[i] != 1) out += std::to_string(c[i]);
    out += "a" + std::to_string(i + 1);
  }
  return out;
}

Weight RootSystem::root_weight(const RootVector& root) const {
  Weight w = Weight::zero(rank());
  for (std::size_t k = 0; k < rank(); ++k) {
    Rational acc = 0;
    for (std::size_t j = 0; j < rank(); ++j) acc += root[j] * cartan_[k][j];
    w[k] = acc;
  }
  return w;
}

Rational RootSystem::pairing(const Weight& lam, std::size_t root) const {
  if (lam.size() != rank()) throw DimensionError("weight rank mismatch");
  Rational acc = 0;
  for (std::size_t j = 0; j < rank(); ++j) acc += coroots_[root][j] * lam[j];
  return acc;
}

Rational RootSystem::inner(const RootVector& a, const RootVector& b) const {
  Rational acc = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (b[j] == 0) continue;
      acc += a[i] * b[j] * symmetrizer_[i] * cartan_[i][j];
    }
  }
  return acc;
}

std::vector<Rational> RootSystem::to_root_coords(const Weight& diff) const {
  if (diff.size() != rank()) throw DimensionError("weight rank mismatch");
  return cartan_inverse_.apply(diff.coords());
}

bool RootSystem::in_root_lattice(const Weight& diff) const {
  const auto c = to_root_coords(diff);
  return std::all_of(c.begin(), c.end(), [](const Rational& x) { return oprime::is_integer(x); });
}

std::optional<int> RootSystem::depth_below(const Weight& lam, const Weight& mu) const {
  const auto c = to_root_coords(lam - mu);
  long total = 0;
  for (const auto& x : c) {
    if (!oprime::is_integer(x) || x < 0) return std::nullopt;
    total += x.get_num().get_si();
  }
  return static_cast<int>(total);
}

Weight RootSystem::reflect(std::size_t root, const Weight& lam) const {
  return lam - pairing(lam, root) * root_weight(root);
}

Weight RootSystem::act(const WeylElement& w, const Weight& lam) const {
  Weight out = Weight::zero(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < rank(); ++j) acc += w.matrix[i][j] * lam[j];
    out[i] = acc;
  }
  return out;
}

RootVector RootSystem::reflect_root(std::size_t i, const RootVector& root) const {
  int pairing_i = 0;
  for (std::size_t j = 0; j < rank(); ++j) pairing_i += root[j] * cartan_[i][j];
  RootVector out = root;
  out[i] -= pairing_i;
  return out;
}

std::vector<std::vector<int>> cartan_from_name(const std::string& name) {
  static const std::map<std::string, std::vector<std::vector<int>>> table = {
      {"A1", {{2}}},
      {"A2", {{2, -1}, {-1, 2}}},
      {"A3", {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}},
      {"B2", {{2, -1}, {-2, 2}}},
      {"C2", {{2, -2}, {-1, 2}}},
      {"G2", {{2, -1}, {-3, 2}}},
      {"B3", {{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}}},
      {"C3", {{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}}},
  };
  auto it = table.find(name);
  if (it == table.end()) throw InputError("unknown Cartan type '" + name + "'");
  return it->second;
}

RootSystem build_root_system(const std::vector<std::vector<int>>& cartan) {
  const std::size_t n = cartan.size();
  if (n == 0) throw InputError("empty Cartan matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (cartan[i].size() != n) throw InputError("Cartan matrix is not square");
    if (cartan[i][i] != 2) throw InputError("Cartan matrix diagonal must be 2");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cartan[i][j] > 0) throw InputError("Cartan matrix off-diagonal entries must be nonpositive");
      if ((cartan[i][j] == 0) != (cartan[j][i] == 0)) {
        throw InputError("Cartan matrix zero pattern must be symmetric");
      }
    }
  }

  RootSystem r;
  r.cartan_ = cartan;

  // eps_i a_ij = eps_j a_ji, so (alpha_i, alpha_j) = eps_i a_ij is symmetric.
  r.symmetrizer_.assign(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (r.symmetrizer_[start] != 0) continue;
    r.symmetrizer_[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      auto i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || cartan[i][j] == 0) continue;
        Rational expected = r.symmetrizer_[i] * cartan[i][j] / Rational(cartan[j][i]);
        if (r.symmetrizer_[j] == 0) {
          r.symmetrizer_[j] = expected;
          queue.push_back(j);
        } else if (r.symmetrizer_[j] != expected) {
          throw FiniteTypeError("Cartan matrix is not symmetrizable");
        }
      }
    }
  }

  // Reflection closure of the simple roots.
  std::set<RootVector> all;
  std::deque<RootVector> queue;
  for (std::size_t i = 0; i < n; ++i) {
    RootVector a(n, 0);
    a[i] = 1;
    all.insert(a);
    queue.push_back(a);
  }
  while (!queue.empty()) {
    RootVector beta = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      RootVector image = r.reflect_root(i, beta);
      const bool nonneg = std::all_of(image.begin(), image.end(), [](int x) { return x >= 0; });
      const bool nonpos = std::all_of(image.begin(), image.end(), [](int x) { return x <= 0; });
      if (!nonneg && !nonpos) throw FiniteTypeError("reflection produced a mixed-sign root");
      if (std::abs(height(image)) > kMaxHeight || all.size() > kMaxRoots) {
        throw FiniteTypeError("root closure exceeds safety bound; Cartan matrix is not of finite type");
      }
      if (all.insert(image).second) queue.push_back(image);
    }
  }
  for (const auto& beta : all) {
    if (height(beta) > 0) r.positive_.push_back(beta);
  }
  // Ascending height; within a height, larger leading coordinates first so
  // that the simple roots appear in the order alpha_1, ..., alpha_l.
  std::sort(r.positive_.begin(), r.positive_.end(), [](const RootVector& a, const RootVector& b) {
    if (height(a) != height(b)) return height(a) < height(b);
    return a > b;
  });
  r.simple_positions_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    RootVector a(n, 0);
    a[i] = 1;
    r.simple_positions_[i] = *r.positive_index(a);
  }

  for (const auto& beta : r.positive_) {
    const Rational half_norm = r.inner(beta, beta) / 2;
    std::vector<int> co(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      Rational c = beta[j] * r.symmetrizer_[j] / half_norm;
      if (!oprime::is_integer(c)) throw InternalConsistencyError("non-integral coroot coordinate");
      co[j] = static_cast<int>(c.get_num().get_si());
    }
    r.coroots_.push_back(std::move(co));
  }

  {
    std::vector<exactla::Vector> rows(n, exactla::Vector(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = cartan[i][j];
    }
    exactla::RationalMatrix a = exactla::RationalMatrix::from_dense(rows, n);
    exactla::RationalMatrix inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      exactla::Vector e(n);
      e[c] = 1;
      auto out = exactla::solve(a, e);
      if (!out.consistent()) throw FiniteTypeError("singular Cartan matrix");
      for (std::size_t i = 0; i < n; ++i) inv.set(i, c, out.solution[i]);
    }
    r.cartan_inverse_ = inv;
  }

  r.rho_ = Weight(std::vector<Rational>(n, 1));

  if (n <= RootSystem::kMaxWeylRank) {
    using Matrix = std::vector<std::vector<int>>;
    std::vector<Matrix> simple(n, Matrix(n, std::vector<int>(n, 0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          simple[i][k][j] = (k == j ? 1 : 0) - (j == i ? cartan[k][i] : 0);
        }
      }
    }
    auto multiply = [n](const Matrix& a, const Matrix& b) {
      Matrix out(n, std::vector<int>(n, 0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
      return out;
    };
    Matrix id(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    std::map<Matrix, std::size_t> seen{{id, 0}};
    r.weyl_.push_back(WeylElement{{}, id, {}});
    for (std::size_t head = 0; head < r.weyl_.size(); ++head) {
      for (std::size_t i = 0; i < n; ++i) {
        Matrix m = multiply(simple[i], r.weyl_[head].matrix);
        if (seen.count(m)) continue;
        std::vector<std::size_t> word{i};
        word.insert(word.end(), r.weyl_[head].word.begin(), r.weyl_[head].word.end());
        seen.emplace(m, r.weyl_.size());
        r.weyl_.push_back(WeylElement{std::move(word), std::move(m), {}});
      }
    }
    const std::size_t np = r.positive_.size();
    for (auto& w : r.weyl_) {
      w.root_permutation.resize(2 * np);
      for (std::size_t k = 0; k < 2 * np; ++k) {
        RootVector beta = r.positive_[k % np];
        if (k >= np) {
          for (auto& x : beta) x = -x;
        }
        for (std::size_t t = w.word.size(); t-- > 0;) beta = r.reflect_root(w.word[t], beta);
        const bool negative = height(beta) < 0;
        if (negative) {
          for (auto& x : beta) x = -x;
        }
        w.root_permutation[k] = *r.positive_index(beta) + (negative ? np : 0);
      }
    }
  }
  return r;
}

Weight dot_action(const RootSystem& r, const WeylElement& w, const Weight& lam) {
  return r.act(w, lam + r.rho()) - r.rho();
}

Weight dot_reflect(const RootSystem& r, std::size_t root, const Weight& lam) {
  if (root >= r.positive_roots().size()) throw InvalidRootError("root index out of range");
  return r.reflect(root, lam + r.rho()) - r.rho();
}

Weight dot_action(const RootSystem& r, const RootVector& beta, const Weight& lam) {
  auto idx = r.positive_index(beta);
  if (!idx) throw InvalidRootError("not a positive root");
  return dot_reflect(r, *idx, lam);
}

std::vector<Weight> dot_orbit(const RootSystem& r, const Weight& lam) {
  std::set<Weight> seen{lam};
  std::vector<Weight> order{lam};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t i = 0; i < r.rank(); ++i) {
      Weight next = dot_reflect(r, r.simple_index(i), order[head]);
      if (seen.insert(next).second) {
        order.push_back(next);
        if (order.size() > kMaxOrbit) throw FiniteTypeError("dot orbit exceeds safety bound");
      }
    }
  }
  return order;
}

std::optional<LinkageChain> strongly_linked(const RootSystem& r, const Weight& mu, const Weight& lam) {
  if (mu.size() != r.rank() || lam.size() != r.rank()) throw DimensionError("weight rank mismatch");
  if (!r.in_root_lattice(lam - mu)) {
    throw NonIntegralError("lam - mu = " + (lam - mu).to_string() + " is not in the root lattice");
  }
  LinkageChain chain{lam, mu, {}};
  if (mu == lam) return chain;

  const std::size_t np = r.positive_roots().size();
  auto downward = [&](const Weight& nu, std::size_t beta) {
    const Rational n = r.pairing(nu + r.rho(), beta);
    return oprime::is_integer(n) && n > 0;
  };

  std::map<Weight, int> dist{{lam, 0}};
  std::deque<Weight> queue{lam};
  while (!queue.empty()) {
    Weight nu = queue.front();
    queue.pop_front();
    if (nu == mu) break;
    for (std::size_t beta = 0; beta < np; ++beta) {
      if (!downward(nu, beta)) continue;
      Weight next = dot_reflect(r, beta, nu);
      if (dist.emplace(next, dist[nu] + 1).second) queue.push_back(next);
    }
  }
  auto found = dist.find(mu);
  if (found == dist.end()) return std::nullopt;

  std::vector<LinkageStep> reversed;
  Weight current = mu;
  for (int d = found->second; d > 0; --d) {
    bool stepped = false;
    for (std::size_t beta = 0; beta < np && !stepped; ++beta) {
      Weight prev = dot_reflect(r, beta, current);
      auto it = dist.find(prev);
      if (it == dist.end() || it->second != d - 1 || !downward(prev, beta)) continue;
      reversed.push_back({beta, current});
      current = prev;
      stepped = true;
    }
    if (!stepped) throw InternalConsistencyError("linkage chain reconstruction failed");
  }
  chain.steps.assign(reversed.rbegin(), reversed.rend());
  return chain;
}

namespace {

void enumerate_partitions(const RootSystem& r, std::size_t k, RootVector& remaining, std::vector<int>& exps,
                          const std::function<void(const std::vector<int>&)>& emit) {
  const auto& roots = r.positive_roots();
  if (k == roots.size()) {
    if (std::all_of(remaining.begin(), remaining.end(), [](int x) { return x == 0; })) emit(exps);
    return;
  }
  const auto& beta = roots[k];
  int count = 0;
  while (true) {
    exps[k] = count;
    enumerate_partitions(r, k + 1, remaining, exps, emit);
    bool fits = true;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] < beta[i]) fits = false;
    }
    if (!fits) break;
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] -= beta[i];
    ++count;
  }
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] += count * beta[i];
  exps[k] = 0;
}

}  // namespace

std::vector<std::vector<int>> root_partitions(const RootSystem& r, const RootVector& nu) {
  if (nu.size() != r.rank()) throw DimensionError("root vector rank mismatch");
  if (std::any_of(nu.begin(), nu.end(), [](int x) { return x < 0; })) return {};
  std::vector<std::vector<int>> out;
  RootVector remaining = nu;
  std::vector<int> exps(r.positive_roots().size(), 0);
  enumerate_partitions(r, 0, remaining, exps, [&](const std::vector<int>& e) { out.push_back(e); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t kostant_partition(const RootSystem& r, const RootVector& nu) {
  if (nu.size() != r.rank()) throw DimensionError("root vector rank mismatch");
  if (std::any_of(nu.begin(), nu.end(), [](int x) { return x < 0; })) return 0;
  std::size_t count = 0;
  RootVector remaining = nu;
  std::vector<int> exps(r.positive_roots().size(), 0);
  enumerate_partitions(r, 0, remaining, exps, [&](const std::vector<int>&) { ++count; });
  return count;
}

Integer weyl_dimension(const RootSystem& r, const Weight& lam) {
  if (!lam.is_dominant_integral()) throw InputError("Weyl dimension needs a dominant integral weight");
  Rational dim = 1;
  for (std::size_t b = 0; b < r.positive_roots().size(); ++b) {
    dim *= r.pairing(lam + r.rho(), b) / r.pairing(r.rho(), b);
  }
  return dim.get_num();
}

Weight lowest_weight(const RootSystem& r, const Weight& lam) {
  Weight mu = lam;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < r.rank(); ++i) {
      if (mu[i] > 0) {
        mu = r.reflect(r.simple_index(i), mu);
        changed = true;
      }
    }
  }
  return mu;
}

}  // namespace oprime::rootsys
