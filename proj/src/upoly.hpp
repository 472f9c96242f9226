#pragma once

// Dense univariate polynomials over Q (p == 0) or F_p, coefficients low to
// high. Internal to the field implementation.

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "germ/error.hpp"

namespace germ::detail {

using UPoly = std::vector<mpq_class>;

struct Coeffs {
  long p = 0;

  mpq_class norm(const mpq_class& c) const {
    if (p == 0) return c;
    mpz_class P(p);
    mpz_class n = c.get_num() % P;
    if (n < 0) n += P;
    mpz_class d = c.get_den() % P;
    if (d == 0) throw Error(ErrorCode::Domain, "denominator divisible by the characteristic");
    if (d != 1) {
      mpz_class di;
      mpz_invert(di.get_mpz_t(), d.get_mpz_t(), P.get_mpz_t());
      n = (n * di) % P;
    }
    return mpq_class(n);
  }
  mpq_class add(const mpq_class& a, const mpq_class& b) const { return norm(a + b); }
  mpq_class sub(const mpq_class& a, const mpq_class& b) const { return norm(a - b); }
  mpq_class mul(const mpq_class& a, const mpq_class& b) const { return norm(a * b); }
  mpq_class inv(const mpq_class& a) const {
    if (a == 0) throw Error(ErrorCode::Domain, "division by zero");
    if (p == 0) return 1 / a;
    mpz_class r, P(p), n = a.get_num();
    mpz_invert(r.get_mpz_t(), n.get_mpz_t(), P.get_mpz_t());
    return mpq_class(r);
  }

  static void trim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  int deg(const UPoly& a) const { return static_cast<int>(a.size()) - 1; }

  UPoly add(const UPoly& a, const UPoly& b) const {
    UPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      mpq_class s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
      r[i] = norm(s);
    }
    trim(r);
    return r;
  }
  UPoly sub(const UPoly& a, const UPoly& b) const {
    UPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      mpq_class s = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
      r[i] = norm(s);
    }
    trim(r);
    return r;
  }
  UPoly mul(const UPoly& a, const UPoly& b) const {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& c : r) c = norm(c);
    trim(r);
    return r;
  }
  UPoly scale(const UPoly& a, const mpq_class& c) const {
    UPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = norm(a[i] * c);
    trim(r);
    return r;
  }
  std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) const {
    if (b.empty()) throw Error(ErrorCode::Domain, "polynomial division by zero");
    UPoly r = a;
    trim(r);
    if (r.size() < b.size()) return {{}, r};
    UPoly q(r.size() - b.size() + 1, 0);
    mpq_class lead_inv = inv(b.back());
    while (!r.empty() && r.size() >= b.size()) {
      std::size_t shift = r.size() - b.size();
      mpq_class c = norm(r.back() * lead_inv);
      q[shift] = c;
      for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = norm(r[shift + i] - c * b[i]);
      trim(r);
    }
    trim(q);
    return {q, r};
  }
  UPoly mod(const UPoly& a, const UPoly& m) const { return divmod(a, m).second; }
  UPoly monic(const UPoly& a) const {
    if (a.empty()) return a;
    return scale(a, inv(a.back()));
  }
  UPoly gcd(UPoly a, UPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      UPoly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  /// a^{-1} mod m; requires gcd(a, m) = 1.
  UPoly inv_mod(const UPoly& a, const UPoly& m) const {
    UPoly r0 = m, r1 = mod(a, m);
    UPoly s0, s1{mpq_class(1)};
    while (!r1.empty()) {
      auto [q, r] = divmod(r0, r1);
      UPoly s = sub(s0, mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (r0.size() != 1) throw Error(ErrorCode::Domain, "element is not invertible");
    return mod(scale(s0, inv(r0[0])), m);
  }
  UPoly powmod(UPoly base, mpz_class e, const UPoly& m) const {
    UPoly result{mpq_class(1)};
    base = mod(base, m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) result = mod(mul(result, base), m);
      e >>= 1;
      if (e > 0) base = mod(mul(base, base), m);
    }
    return result;
  }
};

}  // namespace germ::detail
