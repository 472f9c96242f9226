#pragma once

// Truncated power series in variables x (degree <= N) and optional
// parameters t (degree <= s), modulo the span of J * monomials.

#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "germ/exactfield.hpp"
#include "germ/linalg.hpp"

namespace germ {

using Exponent = std::vector<int>;  // x exponents followed by t exponents

constexpr int kInfinity = INT_MAX;

class Jet;

namespace detail {
struct RingData;
}

class JetRing {
 public:
  JetRing() = default;
  JetRing(Field field, std::vector<std::string> vars, int jet_order,
          std::vector<std::string> tvars = {}, int t_order = 0);

  /// Same ring modulo the span of gens * monomials.
  JetRing with_ideal(const std::vector<Jet>& gens) const;
  /// Same variables and ideal over another field (coefficients coerced).
  JetRing over(const Field& field) const;
  /// Same field, ideal and t-parameters with renamed x variables.
  JetRing renamed(std::vector<std::string> vars) const;

  const Field& field() const;
  const std::vector<std::string>& vars() const;
  const std::vector<std::string>& tvars() const;
  std::size_t nvars() const;
  std::size_t ntvars() const;
  int jet_order() const;
  int t_order() const;
  std::size_t dim() const;
  const std::vector<Exponent>& monomials() const;
  const Exponent& monomial(std::size_t i) const;
  /// Index of an admissible exponent, or npos.
  std::size_t index_of(const Exponent& e) const;
  /// Index of mono_i * mono_j, or npos when truncated away.
  std::size_t product_index(std::size_t i, std::size_t j) const;
  int x_degree(std::size_t i) const;
  int t_degree(std::size_t i) const;
  std::string monomial_string(std::size_t i) const;

  /// Ideal generators as given and the span of gens * monomials.
  const std::vector<Jet>& ideal_generators() const;
  const SubspaceBasis& ideal_span() const;
  bool has_ideal() const;

  bool operator==(const JetRing& o) const;
  bool operator!=(const JetRing& o) const { return !(*this == o); }
  bool valid() const { return d_ != nullptr; }

  Jet zero() const;
  Jet one() const;
  Jet constant(const FieldElem& c) const;
  Jet var(std::size_t i) const;
  Jet tvar(std::size_t i) const;
  Jet monomial_jet(std::size_t index, const FieldElem& c) const;
  Jet from_vec(Vec coeffs) const;
  /// Parses an expression in the ring variables and the field generator.
  Jet parse(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0) const;
  /// Parses a monomial string such as "1", "x", "x^2*y".
  std::size_t parse_monomial(std::string_view text) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::shared_ptr<const detail::RingData> d_;
  friend class Jet;
};

class Jet {
 public:
  Jet() = default;

  const JetRing& ring() const { return ring_; }
  const Vec& coeffs() const { return c_; }
  const FieldElem& coeff(std::size_t i) const { return c_[i]; }
  bool is_zero() const { return is_zero_vec(c_); }
  /// Minimal x-degree over the support (kInfinity for zero).
  int x_order() const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator-() const;
  Jet scaled(const FieldElem& c) const;
  Jet pow(unsigned e) const;
  bool operator==(const Jet& o) const;
  bool operator!=(const Jet& o) const { return !(*this == o); }

  /// Exact derivative of the stored polynomial in x variable i.
  Jet derivative(std::size_t i) const;
  /// Substitutes args for the x variables (t parameters kept). Each arg must
  /// lie in the ideal generated by the x variables.
  Jet substitute(const std::vector<Jet>& args) const;
  /// Sets all t parameters to zero.
  Jet at_t_zero() const;
  /// Moves the jet to another ring with the same monomials, re-reducing.
  Jet rebase(const JetRing& ring) const;
  Jet base_change(const JetRing& top, const Extension& ext) const;
  /// Coefficients descended to ring's field, if all lie there.
  std::optional<Jet> descend(const JetRing& base, const Extension& ext) const;

  std::string to_string() const;
  /// {"monomial": "scalar"} for nonzero coefficients.
  std::vector<std::pair<std::string, std::string>> terms() const;

 private:
  Jet(JetRing r, Vec c);
  void normalize();
  JetRing ring_;
  Vec c_;
  friend class JetRing;
};

/// The n-tuple of Jets as one coefficient vector (component blocks).
Vec stack(const std::vector<Jet>& comps);
std::vector<Jet> unstack(const JetRing& ring, const Vec& v, std::size_t m);

// ---- filtrations ------------------------------------------------------------

class Filtration {
 public:
  enum class Kind { MAdic, TAdic, Chain };

  Filtration() = default;
  static Filtration madic(const JetRing& ring);
  static Filtration tadic(const JetRing& ring);
  /// Explicit chain; each level is a list of monomial generators.
  static Filtration chain(const JetRing& ring, const std::vector<std::vector<Exponent>>& levels);

  Kind kind() const { return kind_; }
  const JetRing& ring() const { return ring_; }
  /// The same monomial chain over another ring with identical monomials.
  Filtration on(const JetRing& ring) const;
  std::string spec() const;

  /// Last nonempty level.
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  int explicit_levels() const { return explicit_; }
  /// Largest d with monomial i in level d (0 if not in level 1).
  int minord(std::size_t mono) const { return minord_[mono]; }
  bool in_level(std::size_t mono, int d) const;
  /// Order of a tuple of jets: largest d with v in M^d (modulo the ideal).
  int order_of(const std::vector<Jet>& v) const;
  int order_of_vec(const Vec& v, std::size_t m) const;
  /// Span of M^d in m components together with the ideal span.
  SubspaceBasis level_space(int d, std::size_t m) const;
  /// Coordinates outside M^d in the stacked space (the complement mask).
  std::vector<bool> outside_mask(int d, std::size_t m) const;

  const std::vector<std::vector<Exponent>>& generators() const { return gens_; }

 private:
  void build(int explicit_count);
  Kind kind_ = Kind::MAdic;
  JetRing ring_;
  std::vector<std::vector<Exponent>> gens_;
  int explicit_ = 0;
  std::vector<std::vector<bool>> levels_;  // levels_[d][mono]; levels_[0] = everything
  std::vector<int> minord_;
};

}  // namespace germ
