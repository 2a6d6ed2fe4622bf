#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oprime/exactla.hpp"
#include "oprime/glie.hpp"
#include "oprime/pbwmod.hpp"
#include "oprime/rootsys.hpp"

namespace oprime::cato {

using exactla::RationalMatrix;
using exactla::Vector;
using glie::AlgebraPtr;
using glie::GFunctional;
using pbwmod::ModuleMap;
using pbwmod::ModulePtr;
using pbwmod::TruncatedModule;
using pbwmod::WeightVector;
using rootsys::Weight;

struct MaximalVectorReport {
  Weight weight;
  std::vector<Vector> basis;
  GFunctional g_observed;
  /// Radical elements whose target weight fell below the window; their
  /// eigen-condition could not be imposed.
  std::vector<std::string> unchecked;
};

/// Vectors at mu killed by every e_i on which each radical u acts by g(u).
/// g defaults to the module's label. Throws TruncationError when some
/// mu + alpha_i lies below the window.
MaximalVectorReport find_maximal_vectors(const TruncatedModule& m, const Weight& mu,
                                         const std::optional<GFunctional>& g = {});

/// Window weights other than those listed in `skip` that carry a maximal vector.
std::vector<Weight> maximal_weights(const TruncatedModule& m, const std::vector<Weight>& skip = {});

struct FormulaTerm {
  std::size_t j;
  Rational binomial;  // C(n,j) (-1)^j
  std::string element;
  Rational g_value;   // g((ad f_i)^j u)
  bool matches;       // f^{n-j} ((ad f_i)^j u) w == g(...) f^{n-j} w
};

struct FormulaCheck {
  bool pass = true;
  int n = 0;
  std::string vector;
  std::vector<std::string> failures;
  /// Per radical basis element, the binomial terms.
  std::map<std::string, std::vector<FormulaTerm>> terms;
  ModulePtr module;  // the Verma module the check ran in
};

/// u f_i^n w = sum_j C(n,j) (-1)^j f_i^{n-j} g((ad f_i)^j u) w with
/// n = <lam + rho, alpha_i^vee>, plus e_j f_i^n w = 0 and u f_i^n w = g(u) f_i^n w.
/// Throws NotApplicable unless n is a positive integer.
FormulaCheck singular_vector_formula_check(const AlgebraPtr& a, const Weight& lam, const GFunctional& g,
                                           std::size_t i);

struct Embedding {
  rootsys::LinkageChain chain;
  ModuleMap map;
  WeightVector image;  // image of the generator of M(mu, g)
};

/// M(mu, g) -> M(lam, g) along the strong-linkage chain; nullopt when mu is
/// not strongly linked to lam. The map is checked to intertwine and to be
/// injective on every component. The source is truncated so its window maps
/// into the target window of the given depth.
std::optional<Embedding> embed_verma(const AlgebraPtr& a, const Weight& mu, const Weight& lam, const GFunctional& g,
                                     int depth);

struct CompositionReport {
  std::map<Weight, int> multiplicities;
  int depth;
};

/// [M(lam, g) : L(nu, g)] for sl2, by character subtraction where each
/// ch L(nu) comes from the Verma quotient by its singular vectors.
CompositionReport composition_multiplicities_sl2(const AlgebraPtr& a, const Weight& lam, const GFunctional& g,
                                                 int depth);

/// L(lam, g) at the given depth: M(lam, g) modulo every maximal vector below the top.
pbwmod::Quotient simple_quotient(const AlgebraPtr& a, const Weight& lam, const GFunctional& g, int depth);

/// Minimal k with every length-k product of J2 actions zero on the window;
/// 0 when J2 = 0.
std::size_t j2_nilpotency_degree(const TruncatedModule& m);

/// Minimal k with (u - c)^k = 0 on the window.
std::size_t nilpotency_degree(const TruncatedModule& m, std::size_t u, const Rational& c);

struct AxiomEntry {
  std::string axiom;
  bool pass;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomEntry> entries;
  bool all_pass() const;
};

AxiomReport check_oprime_axioms(const ModulePtr& m);

enum class FiltrationKind { HighestWeight, Standard };

struct FiltrationStep {
  Weight weight;
  GFunctional g;
  std::string vector;
};

struct FiltrationReport {
  FiltrationKind kind;
  std::vector<FiltrationStep> steps;
  std::size_t length() const { return steps.size(); }
  /// Standard only: length of the filtration of the underlying g0-module.
  std::optional<std::size_t> g0_length;
};

/// Peels maximal vectors found inside the U(n)-span of the generators.
/// Throws InternalConsistencyError when a nonzero module has none.
FiltrationReport highest_weight_filtration(const ModulePtr& m, const std::optional<GFunctional>& g = {});

/// Greedy peeling of Verma submodules, highest weight first. Throws
/// NoStandardFiltration when a generated submodule is not Verma-sized.
FiltrationReport standard_filtration(const ModulePtr& m, const std::optional<GFunctional>& g = {});

struct LiftOutcome {
  bool liftable = false;
  std::optional<ModuleMap> map;
  Vector witness;
  bool witness_verified = false;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  RationalMatrix system;
  Vector rhs;
};

struct NonLiftabilityCertificate {
  LiftOutcome full;
  LiftOutcome g0_only;
  /// When the g0-only system is liftable: radical generators that its lift fails.
  std::vector<pbwmod::MapViolation> radical_failures;
};

/// Solves for psi: P -> N with pi . psi = phi, once intertwining every basis
/// element and once intertwining g0 only. Throws DimensionError when the
/// diagram does not fit together or pi is not onto.
NonLiftabilityCertificate nonliftability_certificate(const ModulePtr& p, const ModuleMap& pi, const ModuleMap& phi);

/// The map M(lam, g) -> target sending w to a maximal
/// vector of weight (lam, g). Throws InputError when v is not maximal.
ModuleMap universal_map(const ModulePtr& verma, const ModulePtr& target, const WeightVector& v);

/// Dimension of the space of window intertwiners source -> target.
std::size_t hom_dimension(const ModulePtr& source, const ModulePtr& target);

struct TowerStep {
  std::size_t k;
  std::size_t dim;
  bool axioms_pass;
  bool connecting_ok;  // T_k -> T_{k-1} is an onto module map (true for k = 1)
  std::size_t nilpotency;
  std::size_t span_dim;
};

/// T_k for k = 1..k_max: k simple summands with u acting by a size-k Jordan
/// block above g(u). u defaults to the first J1 element.
std::vector<TowerStep> jordan_tower_growth(const AlgebraPtr& a, const Weight& gamma, const GFunctional& g,
                                           std::size_t k_max, std::optional<std::size_t> u = {});

/// The module of the tower: summands L(gamma + i wt(u)), twist u v_i = g(u) v_i + v_{i+1}.
pbwmod::DirectSum jordan_tower(const AlgebraPtr& a, const Weight& gamma, const GFunctional& g, std::size_t k,
                               std::size_t u);

struct ReciprocityTable {
  std::vector<Weight> block;  // dominant weight first
  /// left[m][l] = (P(block[l], g) : M(block[m], g))
  std::vector<std::vector<int>> left;
  /// right[m][l] = [M(block[m], g) : L(block[l], g)]
  std::vector<std::vector<int>> right;
  bool generator_ok = false;
  std::vector<FiltrationReport> filtrations;
  bool equal() const { return left == right; }
};

/// BGG reciprocity on the sl2 block of lam with J central. P of the dominant
/// weight is its Verma module, P of the other is M(-1, g) (x) L(lam+ + 1).
/// Throws SingularBlockUnsupported for lam = -1.
ReciprocityTable reciprocity_check_sl2(const AlgebraPtr& a, const GFunctional& g, const Weight& lam, int depth);

/// sl2: the sum of all submodules generated by maximal vectors below the top
/// misses the top component.
bool maximal_submodule_avoids_top(const AlgebraPtr& a, const Weight& lam, const GFunctional& g, int depth);

}  // namespace oprime::cato
