#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oprime/exactla.hpp"
#include "oprime/rootsys.hpp"

namespace oprime::glie {

using rootsys::RootSystem;
using rootsys::Weight;

/// Sparse linear combination of algebra basis elements.
using Combination = std::map<std::size_t, Rational>;

enum class Kind { E, F, H, U };

struct BasisElement {
  Kind kind;
  /// Positive-root index for E/F, simple index for H, radical-local index for U.
  std::size_t index;
  Weight weight;
  std::string label;
};

/// A finite-dimensional simple g0-module with explicit matrices for every
/// basis element of g0 (indices 0 .. g0_dim-1 of the algebra it was built over).
struct SimpleRealization {
  Weight highest_weight;
  /// Basis ordered by depth below the highest weight; weights[k] and labels[k]
  /// describe basis vector k. Vector 0 is the highest weight vector.
  std::vector<Weight> weights;
  std::vector<std::string> labels;
  std::vector<exactla::RationalMatrix> action;

  std::size_t dim() const { return weights.size(); }
  /// Basis vectors of the given weight.
  std::vector<std::size_t> basis_at(const Weight& w) const;
};

struct RadicalSummand {
  Weight highest_weight;
  std::size_t offset;  // first radical-local index
  SimpleRealization realization;

  std::size_t dim() const { return realization.dim(); }
  bool trivial() const;
};

class GenReductiveAlgebra {
 public:
  const RootSystem& roots() const { return roots_; }
  std::size_t rank() const { return roots_.rank(); }

  std::size_t dim() const { return basis_.size(); }
  std::size_t g0_dim() const { return 2 * roots_.positive_roots().size() + rank(); }
  std::size_t radical_dim() const { return dim() - g0_dim(); }

  const BasisElement& element(std::size_t x) const { return basis_[x]; }
  const std::string& label(std::size_t x) const { return basis_[x].label; }
  std::optional<std::size_t> find(const std::string& label) const;
  /// Basis index of e_a (a positive) or f_{-a} (a negative).
  std::optional<std::size_t> root_element(const rootsys::RootVector& a) const;

  std::size_t e(std::size_t root) const { return root; }
  std::size_t f(std::size_t root) const { return roots_.positive_roots().size() + root; }
  std::size_t h(std::size_t i) const { return 2 * roots_.positive_roots().size() + i; }
  std::size_t u(std::size_t k) const { return g0_dim() + k; }

  bool is_radical(std::size_t x) const { return x >= g0_dim(); }
  std::size_t radical_local(std::size_t x) const { return x - g0_dim(); }

  const Combination& bracket(std::size_t x, std::size_t y) const { return table_[x][y]; }
  Combination bracket(const Combination& a, const Combination& b) const;

  const std::vector<RadicalSummand>& summands() const { return summands_; }
  std::size_t summand_of(std::size_t k) const;
  /// Radical-local indices of J1 (trivial summands) and J2.
  const std::vector<std::size_t>& j1() const { return j1_; }
  const std::vector<std::size_t>& j2() const { return j2_; }
  bool in_j1(std::size_t k) const;

  /// Structure constant N_{a,b} for signed roots a, b; 0 when a+b is not a root.
  int structure_constant(const rootsys::RootVector& a, const rootsys::RootVector& b) const;

 private:
  friend std::shared_ptr<const GenReductiveAlgebra> build_algebra(const RootSystem&, const std::vector<Weight>&);

  RootSystem roots_;
  std::vector<BasisElement> basis_;
  std::vector<std::vector<Combination>> table_;
  std::vector<RadicalSummand> summands_;
  std::vector<std::size_t> j1_, j2_;
};

using AlgebraPtr = std::shared_ptr<const GenReductiveAlgebra>;

/// g0 with a Chevalley basis, plus the abelian radical J = L(w_1) + ... + L(w_k).
/// Every radical weight must be dominant integral (InvalidRadicalError).
/// Jacobi and the radical invariants are checked on all basis triples before
/// returning (InternalConsistencyError on failure).
AlgebraPtr build_algebra(const RootSystem& r, const std::vector<Weight>& radical_weights);

/// L(lam) as the quotient of a truncated Verma module over `a` by the
/// submodule generated by f_i^{<lam+rho, alpha_i^vee>} w.
SimpleRealization realize_simple(const AlgebraPtr& a, const Weight& lam);

struct GViolation;

/// A functional on J that vanishes on J2 and satisfies g([h,u]) = g([x,u]) =
/// g([u1,u2]) = 0. Only validate_g and zero() produce one.
class GFunctional {
 public:
  static GFunctional zero(const GenReductiveAlgebra& a);

  /// Value on radical-local basis index k.
  const Rational& value(std::size_t k) const { return values_[k]; }
  const std::vector<Rational>& values() const { return values_; }
  /// g applied to a combination; non-radical terms contribute nothing.
  Rational evaluate(const Combination& c) const;
  const GenReductiveAlgebra* algebra() const { return algebra_; }

  friend bool operator==(const GFunctional& a, const GFunctional& b) { return a.values_ == b.values_; }
  friend bool operator!=(const GFunctional& a, const GFunctional& b) { return !(a == b); }

 private:
  friend std::variant<GFunctional, std::vector<GViolation>> validate_g(const GenReductiveAlgebra&,
                                                                       const std::vector<Rational>&);
  GFunctional(const GenReductiveAlgebra* a, std::vector<Rational> values)
      : algebra_(a), values_(std::move(values)) {}

  const GenReductiveAlgebra* algebra_ = nullptr;
  std::vector<Rational> values_;
};

struct GViolation {
  /// "g(J2)", "g([h,u])", "g([x,u])" or "g([u1,u2])".
  std::string constraint;
  /// Basis indices involved (global).
  std::vector<std::size_t> witness;
  Rational value;
};

using GValidation = std::variant<GFunctional, std::vector<GViolation>>;

/// `values` covers the full radical basis (radical-local order).
GValidation validate_g(const GenReductiveAlgebra& a, const std::vector<Rational>& values);

/// Convenience: values on J1 in j1() order, zero on J2; throws
/// InvalidFunctional if validation fails.
GFunctional g_from_j1(const GenReductiveAlgebra& a, const std::vector<Rational>& j1_values);

/// (J1 indices, J2 indices), radical-local.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_radical(const GenReductiveAlgebra& a);

/// Problems found by the full structural self-check (empty when consistent).
std::vector<std::string> check_structure(const GenReductiveAlgebra& a);

}  // namespace oprime::glie
