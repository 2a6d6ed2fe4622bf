#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oprime/exactla.hpp"
#include "oprime/rational.hpp"

namespace oprime::rootsys {

/// A weight in fundamental-weight coordinates: coords[i] = <lambda, alpha_i^vee>.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Weight(std::initializer_list<Rational> coords) : coords_(coords) {}
  static Weight zero(std::size_t rank) { return Weight(std::vector<Rational>(rank, 0)); }

  std::size_t size() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_integral() const;
  bool is_dominant_integral() const;

  Weight& operator+=(const Weight& other);
  Weight& operator-=(const Weight& other);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(const Rational& s, const Weight& w);
  friend Weight operator-(const Weight& w);
  friend bool operator==(const Weight& a, const Weight& b) { return a.coords_ == b.coords_; }
  friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }
  /// Lexicographic; used only for ordered containers and tie-breaks.
  friend bool operator<(const Weight& a, const Weight& b);

  /// "(2,-1/2)"
  std::string to_string() const;

 private:
  std::vector<Rational> coords_;
};

/// A root in simple-root coordinates.
using RootVector = std::vector<int>;

int height(const RootVector& root);

struct WeylElement {
  /// Reduced word: the element is s_{word[0]} s_{word[1]} ... .
  std::vector<std::size_t> word;
  /// Linear action on fundamental-weight coordinates.
  std::vector<std::vector<int>> matrix;
  /// Image index of every root (positive roots first, then negatives).
  std::vector<std::size_t> root_permutation;
};

struct LinkageStep {
  std::size_t root;  // index into positive_roots()
  Weight result;
};

struct LinkageChain {
  Weight start;  // lambda
  Weight end;    // mu
  std::vector<LinkageStep> steps;
};

class RootSystem {
 public:
  /// Largest Weyl group order enumerated eagerly (rank <= 3).
  static constexpr std::size_t kMaxWeylRank = 3;

  std::size_t rank() const { return cartan_.size(); }
  /// cartan()[i][j] = <alpha_j, alpha_i^vee>.
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }
  /// Sorted by height, then lexicographically.
  const std::vector<RootVector>& positive_roots() const { return positive_; }
  const Weight& rho() const { return rho_; }
  const std::vector<WeylElement>& weyl_elements() const { return weyl_; }

  std::optional<std::size_t> positive_index(const RootVector& root) const;
  /// Index of alpha_i among positive_roots().
  std::size_t simple_index(std::size_t i) const { return simple_positions_[i]; }
  bool is_simple(std::size_t root) const;
  /// "a1", "a1+a2", "3a1+2a2".
  std::string root_label(std::size_t root) const;

  /// Fundamental-weight coordinates of a root lattice element.
  Weight root_weight(const RootVector& root) const;
  Weight root_weight(std::size_t root) const { return root_weight(positive_[root]); }
  /// Coordinates of the coroot of a positive root in the simple coroot basis.
  const std::vector<int>& coroot(std::size_t root) const { return coroots_[root]; }
  /// <lambda, beta^vee>.
  Rational pairing(const Weight& lam, std::size_t root) const;
  /// W-invariant form with (alpha_i, alpha_i) = 2 * symmetrizer()[i].
  Rational inner(const RootVector& a, const RootVector& b) const;
  const std::vector<Rational>& symmetrizer() const { return symmetrizer_; }

  /// Simple-root coordinates of a weight difference (A^{-1} d).
  std::vector<Rational> to_root_coords(const Weight& diff) const;
  /// height(lam - mu) when lam - mu is a nonnegative integer root combination.
  std::optional<int> depth_below(const Weight& lam, const Weight& mu) const;
  /// mu <= lam in the dominance order.
  bool dominated(const Weight& mu, const Weight& lam) const { return depth_below(lam, mu).has_value(); }
  bool in_root_lattice(const Weight& diff) const;

  Weight reflect(std::size_t root, const Weight& lam) const;
  Weight act(const WeylElement& w, const Weight& lam) const;

  /// Ordinary reflection representation on a root in simple coordinates.
  RootVector reflect_root(std::size_t i, const RootVector& root) const;

 private:
  friend RootSystem build_root_system(const std::vector<std::vector<int>>& cartan);

  std::vector<std::vector<int>> cartan_;
  std::vector<RootVector> positive_;
  std::vector<std::size_t> simple_positions_;
  std::vector<std::vector<int>> coroots_;
  std::vector<Rational> symmetrizer_;
  exactla::RationalMatrix cartan_inverse_;
  Weight rho_;
  std::vector<WeylElement> weyl_;
};

/// Throws InputError for a malformed matrix and FiniteTypeError when the
/// reflection closure does not terminate within the safety bound.
RootSystem build_root_system(const std::vector<std::vector<int>>& cartan);

/// "A1".."A3", "B2", "B3", "C2", "C3", "G2".
std::vector<std::vector<int>> cartan_from_name(const std::string& name);

Weight dot_action(const RootSystem& r, const WeylElement& w, const Weight& lam);
/// s_beta . lam; throws InvalidRootError when beta is not a positive root.
Weight dot_action(const RootSystem& r, const RootVector& beta, const Weight& lam);
Weight dot_reflect(const RootSystem& r, std::size_t root, const Weight& lam);

/// The dot orbit W.lam, by closure under simple dot reflections.
std::vector<Weight> dot_orbit(const RootSystem& r, const Weight& lam);

/// Shortest chain of downward dot reflections from lam to mu. Among shortest
/// chains the one whose root indices, read from the mu end, are
/// lexicographically smallest is returned. nullopt when mu is not strongly
/// linked to lam. Throws NonIntegralError when lam - mu is not in the root
/// lattice.
std::optional<LinkageChain> strongly_linked(const RootSystem& r, const Weight& mu, const Weight& lam);

/// Number of ways to write nu as a multiset of positive roots.
std::size_t kostant_partition(const RootSystem& r, const RootVector& nu);

/// Every exponent vector over positive_roots() whose weighted sum is nu,
/// sorted lexicographically ascending.
std::vector<std::vector<int>> root_partitions(const RootSystem& r, const RootVector& nu);

/// Weyl dimension formula for a dominant integral weight.
Integer weyl_dimension(const RootSystem& r, const Weight& lam);

/// w_0 lam, found by lowering with simple reflections.
Weight lowest_weight(const RootSystem& r, const Weight& lam);

}  // namespace oprime::rootsys
