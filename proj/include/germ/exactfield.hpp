#pragma once

// Exact scalars: Q, F_p, simple extensions Q[a]/(m), F_p[b]/(m), and the
// rational function field F_p(s). Elements are kept in canonical form so
// equality is representational.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "germ/error.hpp"

namespace germ {

namespace detail {
struct FieldImpl;
}

class FieldElem;

class Field {
 public:
  enum class Kind { Rationals, Prime, Extension, FunctionField };

  Field() = default;

  static Field rationals();
  static Field prime(long p);
  /// Simple extension of Q or F_p by a root of `minpoly` (monic, coefficients
  /// low to high, in the base field). Rejects reducible polynomials.
  static Field extension(const Field& base, std::string var, const std::vector<FieldElem>& minpoly);
  static Field function_field(long p, std::string var);

  /// Field spec grammar: Q | Fp | F<p>[v]/(poly) | Q[v]/(poly) | F<p>(v).
  static Field parse(std::string_view spec);

  Kind kind() const;
  long characteristic() const;
  /// Degree over the prime field (Q or F_p); 0 for F_p(s).
  int degree() const;
  bool is_finite() const;
  /// Number of elements of a finite field; throws if infinite or > 2^62.
  std::uint64_t size() const;
  /// Q or F_p underneath an extension; the field itself otherwise.
  Field prime_field() const;
  const std::string& generator_name() const;
  FieldElem generator() const;
  /// Minimal polynomial (low to high) over the prime field, for extensions.
  const std::vector<mpq_class>& modulus() const;
  std::string spec() const;

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(long v) const;
  FieldElem from_rational(const mpq_class& q) const;
  /// Element from base coefficients (extension: coefficients of 1, a, a^2, ...).
  FieldElem from_coefficients(std::vector<mpq_class> coeffs) const;
  /// Enumeration index -> element for finite fields (base-p digits).
  FieldElem element_at(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElem& e) const;

  /// Maps an element of this field, of its prime field, or (for an extension
  /// top) of the structurally equal base, into this field.
  FieldElem coerce(const FieldElem& e) const;

  /// Parses a scalar written with integers, '/', and the generator name.
  FieldElem parse_scalar(std::string_view text) const;

  bool valid() const { return impl_ != nullptr; }
  bool operator==(const Field& other) const;
  bool operator!=(const Field& other) const { return !(*this == other); }

  const detail::FieldImpl* impl() const { return impl_.get(); }
  const std::shared_ptr<const detail::FieldImpl>& shared_impl() const { return impl_; }

 private:
  explicit Field(std::shared_ptr<const detail::FieldImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::FieldImpl> impl_;
  friend class FieldElem;
};

class FieldElem {
 public:
  FieldElem() = default;

  Field field() const { return Field(f_); }
  bool is_zero() const { return num_.empty(); }
  bool is_one() const;
  /// True for elements of the prime subfield.
  bool is_prime_scalar() const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
  FieldElem inverse() const;
  FieldElem pow(unsigned long e) const;

  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
  /// Canonical total order (used for deterministic output only).
  bool operator<(const FieldElem& o) const;

  std::string to_string() const;

  /// Numerator coefficients over the prime field, low to high, trimmed.
  const std::vector<mpq_class>& numerator() const { return num_; }
  /// Denominator coefficients (function fields only; {1} otherwise empty).
  const std::vector<mpq_class>& denominator() const { return den_; }

 private:
  FieldElem(std::shared_ptr<const detail::FieldImpl> f, std::vector<mpq_class> num,
            std::vector<mpq_class> den);
  std::shared_ptr<const detail::FieldImpl> f_;
  std::vector<mpq_class> num_;
  std::vector<mpq_class> den_;
  friend class Field;
  friend struct detail::FieldImpl;
};

/// Finite simple extension k -> K with basis 1, a, ..., a^(d-1).
class Extension {
 public:
  Extension() = default;
  Extension(Field base, Field top);

  const Field& base() const { return base_; }
  const Field& top() const { return top_; }
  int degree() const { return degree_; }
  std::vector<FieldElem> basis() const;

  FieldElem embed(const FieldElem& c) const;
  std::vector<FieldElem> coordinates(const FieldElem& e) const;
  std::optional<FieldElem> descend_scalar(const FieldElem& e) const;

 private:
  Field base_, top_;
  int degree_ = 1;
};

/// k -> k[v]/(minpoly), minpoly given as text in a single new variable.
Extension make_extension(const Field& base, std::string_view minpoly);

/// A p-th root of `e` in its own field, when one exists. Throws in char 0.
std::optional<FieldElem> pth_root(const FieldElem& e);

}  // namespace germ
