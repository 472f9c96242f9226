#pragma once

// Sparse multivariate polynomials over an exact field with named variables,
// degree-reverse-lexicographic order, and a basic Buchberger algorithm.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "germ/exactfield.hpp"

namespace germ {

using PolyMono = std::vector<int>;

/// Grevlex, larger monomials first.
struct GrevlexGreater {
  bool operator()(const PolyMono& a, const PolyMono& b) const;
};

class Poly {
 public:
  using Terms = std::map<PolyMono, FieldElem, GrevlexGreater>;

  Poly() = default;
  Poly(Field field, std::size_t nvars) : field_(std::move(field)), n_(nvars) {}
  static Poly constant(const Field& field, std::size_t nvars, const FieldElem& c);
  static Poly variable(const Field& field, std::size_t nvars, std::size_t i);
  /// Parses an expression in the given variable names (and the field generator).
  static Poly parse(std::string_view text, const Field& field, const std::vector<std::string>& names);

  const Field& field() const { return field_; }
  std::size_t nvars() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int total_degree() const;
  const PolyMono& leading_monomial() const { return terms_.begin()->first; }
  const FieldElem& leading_coeff() const { return terms_.begin()->second; }
  /// Variables that occur.
  std::vector<bool> support() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly scaled(const FieldElem& c) const;
  Poly times_term(const PolyMono& mono, const FieldElem& c) const;
  Poly pow(unsigned e) const;
  Poly monic() const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  /// Value at a point; coordinates may lie in an extension of the field.
  FieldElem evaluate(const std::vector<FieldElem>& point) const;
  /// Same polynomial with coefficients coerced into `field`.
  Poly over(const Field& field) const;
  std::string to_string(const std::vector<std::string>& names) const;

  void add_term(const PolyMono& mono, const FieldElem& c);

 private:
  Field field_;
  std::size_t n_ = 0;
  Terms terms_;
};

enum class GroebnerStatus { Inconsistent, Consistent, Undecided };

struct GroebnerResult {
  GroebnerStatus status = GroebnerStatus::Undecided;
  std::vector<Poly> basis;         // reduced basis when decided
  std::vector<std::string> trace;  // steps leading to the constant (when inconsistent)
  std::size_t spairs = 0;          // S-pairs reduced
};

/// S-pair cap from GERM_SPAIR_CAP, or the default.
std::size_t spair_cap_from_env();

/// Buchberger with grevlex. Undecided when more than `spair_cap` S-pairs
/// would be reduced. Throws Unsupported for function fields.
GroebnerResult groebner(const std::vector<Poly>& gens, const std::vector<std::string>& names,
                        std::size_t spair_cap);

}  // namespace germ
