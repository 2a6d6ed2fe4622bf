#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oprime/exactla.hpp"
#include "oprime/glie.hpp"
#include "oprime/rootsys.hpp"

namespace oprime::pbwmod {

using exactla::RationalMatrix;
using exactla::Vector;
using glie::AlgebraPtr;
using glie::GFunctional;
using rootsys::Weight;

struct WeightVector {
  Weight weight;
  Vector coords;
};

/// Where a weight sits relative to a module's truncation window.
enum class Region {
  Window,    // stored component (possibly zero-dimensional)
  Zero,      // the module has no such weight
  Boundary,  // below the truncation depth: unknown, never treated as zero
};

struct Component {
  std::vector<std::string> labels;
  /// PBW exponent vectors, filled for Verma modules only.
  std::vector<std::vector<int>> pbw;

  std::size_t dim() const { return labels.size(); }
};

/// A weight-graded module over a generalized reductive algebra, kept on the
/// window { mu : top - mu in Z>=0 Delta, height(top - mu) <= depth } for each
/// window top. Action matrices map component mu to component mu + wt(x).
class TruncatedModule {
 public:
  TruncatedModule(AlgebraPtr algebra, std::vector<Weight> window_tops, int depth, bool complete);

  void add_component(const Weight& w, Component c);
  void set_action(std::size_t x, const Weight& source, RationalMatrix m);
  void set_g_label(GFunctional g) { g_label_ = std::move(g); }
  void add_generator(WeightVector v) { generators_.push_back(std::move(v)); }

  const glie::GenReductiveAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const std::vector<Weight>& window_tops() const { return window_tops_; }
  int depth() const { return depth_; }
  /// Complete modules are finite-dimensional: weights outside the window are zero.
  bool complete() const { return complete_; }

  Region classify(const Weight& w) const;
  /// Height of w below its window top, if w lies under one.
  std::optional<int> depth_of(const Weight& w) const;

  const std::map<Weight, Component>& components() const { return components_; }
  const Component* component(const Weight& w) const;
  std::size_t dim_at(const Weight& w) const;
  std::size_t total_dim() const;
  /// Nonzero components, highest first (ascending depth, ties by descending
  /// lexicographic weight).
  std::vector<Weight> weights_descending() const;

  /// Action of basis element x out of `source`; a zero matrix of the proper
  /// shape when nothing is stored. Throws TruncationError when the target is
  /// a boundary weight.
  RationalMatrix action_matrix(std::size_t x, const Weight& source) const;
  RationalMatrix action_matrix(const glie::Combination& x, const Weight& source) const;
  const std::map<std::pair<std::size_t, Weight>, RationalMatrix>& stored_actions() const { return actions_; }

  /// Throws TruncationError when x leaves the window.
  WeightVector act(std::size_t x, const WeightVector& v) const;

  const std::optional<GFunctional>& g_label() const { return g_label_; }
  const std::vector<WeightVector>& generators() const { return generators_; }

  Weight target_of(std::size_t x, const Weight& source) const;

 private:
  AlgebraPtr algebra_;
  std::vector<Weight> window_tops_;
  int depth_;
  bool complete_;
  std::map<Weight, Component> components_;
  std::map<std::pair<std::size_t, Weight>, RationalMatrix> actions_;
  std::optional<GFunctional> g_label_;
  std::vector<WeightVector> generators_;
};

using ModulePtr = std::shared_ptr<const TruncatedModule>;

/// Weight-preserving linear map given by per-weight blocks (target x source).
struct ModuleMap {
  ModulePtr source;
  ModulePtr target;
  std::map<Weight, RationalMatrix> blocks;

  /// Block at w, or a zero block of the right shape.
  RationalMatrix block(const Weight& w) const;
  WeightVector apply(const WeightVector& v) const;
};

struct MapViolation {
  std::size_t generator;
  Weight weight;
};

/// Checks x . phi = phi . x on every source component where the target of x
/// is inside both windows. `generators` defaults to the whole basis.
std::vector<MapViolation> check_intertwines(const ModuleMap& phi,
                                            const std::optional<std::vector<std::size_t>>& generators = {});

ModuleMap compose(const ModuleMap& outer, const ModuleMap& inner);

struct BracketViolation {
  std::size_t x, y;
  Weight weight;
};

/// action([x,y]) = action(x)action(y) - action(y)action(x) on every component
/// where all four weights involved are in the window or genuinely zero.
std::vector<BracketViolation> check_bracket_compatibility(const TruncatedModule& m);

/// M(lam, g) on the window of the given depth, with PBW monomial bases.
/// Throws InvalidFunctional when g does not belong to the algebra.
ModulePtr build_verma(const AlgebraPtr& a, const Weight& lam, const GFunctional& g, int depth);

/// Applies word[k-1] first, then ... word[0] (the word reads like x1 x2 ... v).
WeightVector apply(const TruncatedModule& m, const std::vector<std::size_t>& word, const WeightVector& v);

/// Word of f's realizing a PBW exponent vector.
std::vector<std::size_t> pbw_word(const glie::GenReductiveAlgebra& a, const std::vector<int>& exponents);

/// Basis vector `index` of component w as a WeightVector.
WeightVector basis_vector(const TruncatedModule& m, const Weight& w, std::size_t index);

/// A finite-dimensional g0-simple module with J1 acting by g and J2 by zero.
ModulePtr module_from_simple(const AlgebraPtr& a, const glie::SimpleRealization& s, const GFunctional& g);

struct Submodule {
  ModulePtr module;
  /// Subspace of each ambient component spanned by the submodule.
  std::map<Weight, exactla::Subspace> spaces;
  ModulePtr ambient;

  std::size_t dim_at(const Weight& w) const;
  bool contains(const WeightVector& v) const;
};

/// Which basis elements participate in a submodule closure.
enum class Closure { Full, G0Only };

/// Smallest graded subspace inside the window stable under the chosen
/// elements and containing `vectors`.
Submodule submodule_generated(const ModulePtr& m, const std::vector<WeightVector>& vectors,
                              Closure closure = Closure::Full);

/// U(n) . vectors where n = n0 (+ J for Closure::Full): the raising span.
/// Sets `hit_boundary` when the span needed a weight below the window.
std::map<Weight, exactla::Subspace> raising_span(const TruncatedModule& m, const std::vector<WeightVector>& vectors,
                                                 Closure closure, bool* hit_boundary = nullptr);

ModuleMap inclusion(const Submodule& s);

struct Quotient {
  ModulePtr module;
  /// Ambient basis indices kept as the quotient basis at each weight.
  std::map<Weight, std::vector<std::size_t>> kept;
  ModulePtr ambient;
  std::map<Weight, exactla::Subspace> spaces;
};

Quotient quotient(const ModulePtr& m, const Submodule& s);

ModuleMap projection(const Quotient& q);

/// m (x) s with g0 acting diagonally and J acting on the first factor only.
/// Throws UnsupportedTensor when J2 acts nontrivially on m.
ModulePtr tensor_with_simple(const ModulePtr& m, const glie::SimpleRealization& s);

struct DirectSum {
  ModulePtr module;
  std::vector<ModulePtr> summands;
  /// offsets[k][w]: first basis index of summand k inside component w.
  std::vector<std::map<Weight, std::size_t>> offsets;
};

/// Requires all summands to carry the same g label (or none).
DirectSum direct_sum(const std::vector<ModulePtr>& summands);

/// A direct sum of finite-dimensional summands on which the radical element
/// u acts as g(u) + twist between the summand generators. twist(i, j) is the
/// coefficient of the generator of summand i in u . (generator of summand j).
/// Throws InconsistentAction when the result is not a module.
DirectSum jordan_sum(const std::vector<ModulePtr>& summands, const GFunctional& g,
                     const std::vector<std::vector<Rational>>& twist, std::size_t u);

/// Keeps the summands listed in `keep` (in that order) and kills the rest.
ModuleMap summand_projection(const DirectSum& from, const DirectSum& to, const std::vector<std::size_t>& keep);

/// The map M(lam, g) -> target with w |-> vector.
ModuleMap map_from_verma(const ModulePtr& verma, const ModulePtr& target, const WeightVector& image);

/// JSON-friendly label of a vector: "f^3 w", "2*f[a1] w - f[a2] w".
std::string describe(const TruncatedModule& m, const WeightVector& v);

}  // namespace oprime::pbwmod
