#pragma once

// Test-side oracles, written independently of the library arithmetic:
// truncated power series over Q as exponent maps, and GF(p^k) as integer
// coefficient vectors reduced by a fixed modulus.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "germ/germs.hpp"

namespace oracle {

// ---- truncated series over Q ---------------------------------------------------------

using Exps = std::vector<int>;
using Series = std::map<Exps, mpq_class>;

struct Trunc {
  std::size_t nx = 1;  // leading x exponents; the rest are t exponents
  int N = 0;           // x-degree bound
  int s = 0;           // t-degree bound
  bool keep(const Exps& e) const {
    int dx = 0, dt = 0;
    for (std::size_t i = 0; i < e.size(); ++i) (i < nx ? dx : dt) += e[i];
    return dx <= N && dt <= s;
  }
};

inline void clean(Series& a) {
  for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
}

inline Series add(const Series& a, const Series& b) {
  Series r = a;
  for (auto& [e, c] : b) r[e] += c;
  clean(r);
  return r;
}

inline Series scale(const Series& a, const mpq_class& c) {
  Series r;
  for (auto& [e, v] : a) r[e] = v * c;
  clean(r);
  return r;
}

inline Series mul(const Series& a, const Series& b, const Trunc& t) {
  Series r;
  for (auto& [ea, ca] : a)
    for (auto& [eb, cb] : b) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (t.keep(e)) r[e] += ca * cb;
    }
  clean(r);
  return r;
}

inline Series constant(std::size_t nvars, const mpq_class& c) {
  Series r;
  if (c != 0) r[Exps(nvars, 0)] = c;
  return r;
}

/// f(args) where f has `nf` leading variables replaced by args and any
/// remaining (t) variables kept.
inline Series substitute(const Series& f, std::size_t nf, const std::vector<Series>& args, std::size_t nvars,
                         const Trunc& t) {
  Series r;
  for (auto& [e, c] : f) {
    Series term = constant(nvars, c);
    for (std::size_t i = 0; i < nf; ++i)
      for (int k = 0; k < e[i]; ++k) term = mul(term, args[i], t);
    if (e.size() > nf) {
      Exps tail(nvars, 0);
      for (std::size_t i = nf; i < e.size(); ++i) tail[nvars - (e.size() - i)] = e[i];
      Series mono;
      mono[tail] = 1;
      term = mul(term, mono, t);
    }
    r = add(r, term);
  }
  return r;
}

/// Reads a jet through its monomial table (rational coefficients only).
inline Series from_jet(const germ::Jet& j) {
  Series r;
  const germ::JetRing& R = j.ring();
  for (std::size_t i = 0; i < R.dim(); ++i) {
    const germ::FieldElem& c = j.coeff(i);
    if (c.is_zero()) continue;
    r[R.monomial(i)] = mpq_class(c.to_string());
  }
  return r;
}

inline std::vector<Series> from_jets(const std::vector<germ::Jet>& v) {
  std::vector<Series> out;
  for (auto& j : v) out.push_back(from_jet(j));
  return out;
}

// ---- GF(p^k) ---------------------------------------------------------------------------

/// GF(p^k) with the modulus given low degree first (monic, length k+1).
struct GF {
  int p = 2;
  std::vector<int> mod;
  int k() const { return static_cast<int>(mod.size()) - 1; }
  int size() const {
    int q = 1;
    for (int i = 0; i < k(); ++i) q *= p;
    return q;
  }
  using El = std::vector<int>;
  El from_index(int idx) const {
    El e(k());
    for (int i = 0; i < k(); ++i) {
      e[i] = idx % p;
      idx /= p;
    }
    return e;
  }
  El constant(long c) const {
    El e(k(), 0);
    e[0] = static_cast<int>(((c % p) + p) % p);
    return e;
  }
  El add(const El& a, const El& b) const {
    El r(k());
    for (int i = 0; i < k(); ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  El mul(const El& a, const El& b) const {
    std::vector<int> prod(2 * k(), 0);
    for (int i = 0; i < k(); ++i)
      for (int j = 0; j < k(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    for (int d = 2 * k() - 1; d >= k(); --d) {
      int c = prod[d];
      if (!c) continue;
      for (int i = 0; i <= k(); ++i) prod[d - k() + i] = ((prod[d - k() + i] - c * mod[i]) % p + p) % p;
    }
    return El(prod.begin(), prod.begin() + k());
  }
  El pow(El a, int e) const {
    El r = constant(1);
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  bool is_zero(const El& a) const {
    for (int c : a)
      if (c) return false;
    return true;
  }
};

/// A polynomial as (coefficient, exponent vector) terms with integer coefficients.
struct IntPoly {
  std::vector<std::pair<long, std::vector<int>>> terms;

  std::string to_string(const std::vector<std::string>& names) const {
    std::string s;
    for (auto& [c, e] : terms) {
      if (!s.empty()) s += c < 0 ? "-" : "+";
      else if (c < 0) s += "-";
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) mono += (mono.empty() ? "" : "*") + names[i] + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
      long a = c < 0 ? -c : c;
      if (mono.empty()) s += std::to_string(a);
      else s += (a == 1 ? "" : std::to_string(a) + "*") + mono;
    }
    return s.empty() ? "0" : s;
  }

  GF::El eval(const GF& F, const std::vector<GF::El>& x) const {
    GF::El r = F.constant(0);
    for (auto& [c, e] : terms) {
      GF::El t = F.constant(c);
      for (std::size_t i = 0; i < e.size(); ++i) t = F.mul(t, F.pow(x[i], e[i]));
      r = F.add(r, t);
    }
    return r;
  }
};

/// Exhaustive search for a common zero in GF^n.
inline bool has_common_zero(const GF& F, const std::vector<IntPoly>& sys, std::size_t n) {
  int q = F.size();
  std::vector<int> idx(n, 0);
  std::vector<GF::El> x(n, F.constant(0));
  while (true) {
    bool all = true;
    for (auto& P : sys)
      if (!F.is_zero(P.eval(F, x))) {
        all = false;
        break;
      }
    if (all) return true;
    std::size_t i = 0;
    while (i < n && ++idx[i] == q) {
      idx[i] = 0;
      x[i] = F.constant(0);
      ++i;
    }
    if (i == n) return false;
    x[i] = F.from_index(idx[i]);
  }
}

/// Fixed irreducible moduli (low degree first).
inline GF gf(int p, int k) {
  if (k == 1) return GF{p, {0, 1}};
  if (p == 2 && k == 2) return GF{2, {1, 1, 1}};
  if (p == 2 && k == 3) return GF{2, {1, 1, 0, 1}};
  if (p == 3 && k == 2) return GF{3, {1, 0, 1}};
  if (p == 3 && k == 3) return GF{3, {1, 2, 0, 1}};
  if (p == 5 && k == 2) return GF{5, {2, 0, 1}};
  if (p == 7 && k == 3) return GF{7, {4, 0, 0, 1}};
  throw std::runtime_error("no modulus for this field");
}

}  // namespace oracle
