#include "germ/exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "germ/expr.hpp"
#include "upoly.hpp"

namespace germ {

namespace detail {

struct FieldImpl {
  Field::Kind kind = Field::Kind::Rationals;
  long p = 0;
  std::string var;
  UPoly modulus;  // extensions: monic minimal polynomial over the prime field
  int deg = 1;
  Coeffs ops;

  FieldElem make(const std::shared_ptr<const FieldImpl>& self, UPoly num, UPoly den) const {
    return FieldElem(self, std::move(num), std::move(den));
  }

  // Canonicalizes a numerator/denominator pair in place.
  void canonical(UPoly& num, UPoly& den) const {
    for (auto& c : num) c = ops.norm(c);
    Coeffs::trim(num);
    switch (kind) {
      case Field::Kind::Rationals:
      case Field::Kind::Prime:
        den.clear();
        if (num.size() > 1) throw Error(ErrorCode::Domain, "non-scalar in prime field");
        break;
      case Field::Kind::Extension:
        den.clear();
        if (num.size() >= modulus.size()) num = ops.mod(num, modulus);
        break;
      case Field::Kind::FunctionField: {
        for (auto& c : den) c = ops.norm(c);
        Coeffs::trim(den);
        if (den.empty()) throw Error(ErrorCode::Domain, "division by zero");
        if (num.empty()) {
          den = {mpq_class(1)};
          break;
        }
        UPoly g = ops.gcd(num, den);
        if (g.size() > 1) {
          num = ops.divmod(num, g).first;
          den = ops.divmod(den, g).first;
        }
        mpq_class lc = ops.inv(den.back());
        num = ops.scale(num, lc);
        den = ops.scale(den, lc);
        break;
      }
    }
  }
};

}  // namespace detail

using detail::Coeffs;
using detail::FieldImpl;
using detail::UPoly;

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string upoly_to_string(const UPoly& a, const std::string& var, bool descending = false) {
  if (a.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    std::size_t i = descending ? a.size() - 1 - k : k;
    if (a[i] == 0) continue;
    mpq_class c = a[i];
    bool neg = c < 0;
    if (neg) c = -c;
    std::string term;
    if (i == 0) {
      term = c.get_str();
    } else {
      std::string mono = var + (i > 1 ? "^" + std::to_string(i) : "");
      term = (c == 1) ? mono : c.get_str() + "*" + mono;
    }
    if (out.empty())
      out = neg ? "-" + term : term;
    else
      out += (neg ? "-" : "+") + term;
  }
  return out;
}

// ---- irreducibility -----------------------------------------------------

bool irreducible_mod_p(const UPoly& f, const Coeffs& ops) {
  int d = ops.deg(f);
  if (d <= 1) return d == 1;
  UPoly x{mpq_class(0), mpq_class(1)};
  UPoly h = x;
  for (int i = 1; i <= d / 2; ++i) {
    h = ops.powmod(h, mpz_class(ops.p), f);
    UPoly g = ops.gcd(ops.sub(h, x), f);
    if (g.size() > 1) return false;
  }
  return true;
}

// Factor degrees of a squarefree f over F_p (distinct-degree factorization).
std::vector<int> factor_degrees_mod_p(UPoly f, const Coeffs& ops) {
  std::vector<int> degs;
  UPoly x{mpq_class(0), mpq_class(1)};
  UPoly h = x;
  for (int i = 1; ops.deg(f) >= 2 * i; ++i) {
    h = ops.powmod(h, mpz_class(ops.p), f);
    UPoly g = ops.gcd(ops.sub(h, x), f);
    if (g.size() > 1) {
      for (int k = 0; k < ops.deg(g) / i; ++k) degs.push_back(i);
      f = ops.divmod(f, g).first;
      h = ops.mod(h, f);
    }
  }
  if (ops.deg(f) >= 1) degs.push_back(ops.deg(f));
  return degs;
}

std::vector<mpz_class> integer_primitive(const UPoly& f) {
  mpz_class l = 1;
  for (auto& c : f) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<mpz_class> z;
  for (auto& c : f) z.push_back(mpz_class(c * l));
  mpz_class g = 0;
  for (auto& c : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  for (auto& c : z) c /= g;
  return z;
}

mpz_class eval_int(const std::vector<mpz_class>& f, long a) {
  mpz_class r = 0;
  for (std::size_t i = f.size(); i-- > 0;) r = r * a + f[i];
  return r;
}

std::vector<mpz_class> signed_divisors(mpz_class v) {
  if (v < 0) v = -v;
  std::vector<mpz_class> ds;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      ds.push_back(d);
      if (d * d != v) ds.push_back(v / d);
    }
    if (d > 1000000) throw Error(ErrorCode::Unsupported, "irreducibility check: values too large");
  }
  std::vector<mpz_class> out;
  for (auto& d : ds) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

// Kronecker: does F have an integer factor of degree exactly k?
bool has_factor_of_degree(const std::vector<mpz_class>& F, int k) {
  Coeffs q{0};
  UPoly Fq;
  for (auto& c : F) Fq.push_back(mpq_class(c));
  std::vector<long> pts;
  std::vector<std::vector<mpz_class>> divs;
  for (long a = 0; static_cast<int>(pts.size()) < k + 1; a = (a <= 0 ? 1 - a : -a)) {
    mpz_class v = eval_int(F, a);
    if (v == 0) return k == 1;
    pts.push_back(a);
    divs.push_back(signed_divisors(v));
  }
  std::vector<std::size_t> idx(k + 1, 0);
  std::size_t budget = 5000000;
  for (;;) {
    if (budget-- == 0) throw Error(ErrorCode::Unsupported, "irreducibility check too expensive");
    // Lagrange interpolation through (pts[i], divs[i][idx[i]]).
    UPoly g;
    for (int i = 0; i <= k; ++i) {
      UPoly basis{mpq_class(1)};
      mpq_class denom = 1;
      for (int j = 0; j <= k; ++j) {
        if (j == i) continue;
        basis = q.mul(basis, UPoly{mpq_class(-pts[j]), mpq_class(1)});
        denom *= mpq_class(pts[i] - pts[j]);
      }
      g = q.add(g, q.scale(basis, mpq_class(divs[i][idx[i]]) / denom));
    }
    bool integral = q.deg(g) == k;
    for (auto& c : g)
      if (c.get_den() != 1) integral = false;
    if (integral && q.divmod(Fq, g).second.empty()) return true;
    // advance; first point keeps a positive divisor to halve the search
    int pos = 0;
    for (; pos <= k; ++pos) {
      idx[pos] += (pos == 0 ? 2 : 1);
      if (idx[pos] < divs[pos].size()) break;
      idx[pos] = 0;
    }
    if (pos > k) return false;
  }
}

bool irreducible_over_q(const UPoly& f) {
  int d = static_cast<int>(f.size()) - 1;
  if (d <= 1) return d == 1;
  auto F = integer_primitive(f);
  // Candidate factor degrees allowed by reductions modulo small primes.
  std::set<int> candidates;
  for (int k = 1; k <= d - 1; ++k) candidates.insert(k);
  int used = 0;
  for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
    if (used >= 6 || candidates.empty()) break;
    Coeffs ops{p};
    if (mpz_class(F.back() % p) == 0) continue;
    UPoly fp;
    for (auto& c : F) fp.push_back(ops.norm(mpq_class(c)));
    Coeffs::trim(fp);
    UPoly dfp;
    for (std::size_t i = 1; i < fp.size(); ++i) dfp.push_back(ops.norm(fp[i] * mpq_class(long(i))));
    Coeffs::trim(dfp);
    if (dfp.empty() || ops.gcd(fp, dfp).size() > 1) continue;
    ++used;
    auto degs = factor_degrees_mod_p(ops.monic(fp), ops);
    std::set<int> sums{0};
    for (int dg : degs) {
      std::set<int> next = sums;
      for (int s : sums) next.insert(s + dg);
      sums = std::move(next);
    }
    std::set<int> keep;
    for (int k : candidates)
      if (sums.count(k)) keep.insert(k);
    candidates = std::move(keep);
  }
  for (int k : candidates) {
    if (k > d / 2) continue;
    if (has_factor_of_degree(F, k)) return false;
  }
  return true;
}

long parse_long(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error(ErrorCode::Syntax, "bad field spec '" + std::string(whole) + "'");
  long v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::Syntax, "bad field spec '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
    if (v > 1000000000L) throw Error(ErrorCode::Unsupported, "characteristic too large");
  }
  return v;
}

std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Evaluates a univariate polynomial expression in `var` over Q or F_p.
UPoly eval_upoly(const expr::Node& n, const std::string& var, const Coeffs& ops) {
  struct Ops {
    const std::string& var;
    const Coeffs& ops;
    UPoly number(const mpq_class& q) {
      UPoly r{ops.norm(q)};
      Coeffs::trim(r);
      return r;
    }
    UPoly variable(const std::string& name, std::size_t col) {
      if (name != var)
        throw ParseError("column " + std::to_string(col) + ": unknown symbol '" + name + "'", 1,
                         col);
      return UPoly{mpq_class(0), mpq_class(1)};
    }
    UPoly add(const UPoly& a, const UPoly& b) { return ops.add(a, b); }
    UPoly sub(const UPoly& a, const UPoly& b) { return ops.sub(a, b); }
    UPoly mul(const UPoly& a, const UPoly& b) { return ops.mul(a, b); }
    UPoly neg(const UPoly& a) { return ops.sub(UPoly{}, a); }
    UPoly pow(const UPoly& a, unsigned long e) {
      UPoly r{mpq_class(1)};
      for (unsigned long i = 0; i < e; ++i) r = ops.mul(r, a);
      return r;
    }
    UPoly divide(const UPoly& a, const UPoly& b, std::size_t col) {
      if (b.size() != 1)
        throw ParseError("column " + std::to_string(col) + ": division by a non-constant", 1, col);
      return ops.scale(a, ops.inv(b[0]));
    }
  } o{var, ops};
  return expr::evaluate<UPoly>(n, o);
}

}  // namespace

// ---- Field ----------------------------------------------------------------

Field Field::rationals() {
  static const auto impl = std::make_shared<const FieldImpl>();
  return Field(impl);
}

Field Field::prime(long p) {
  if (!is_prime(p)) throw Error(ErrorCode::Semantic, "characteristic " + std::to_string(p) + " is not prime");
  auto impl = std::make_shared<FieldImpl>();
  impl->kind = Kind::Prime;
  impl->p = p;
  impl->ops.p = p;
  return Field(impl);
}

Field Field::extension(const Field& base, std::string var, const std::vector<FieldElem>& minpoly) {
  if (!base.valid() || (base.kind() != Kind::Rationals && base.kind() != Kind::Prime))
    throw Error(ErrorCode::Unsupported, "extensions are supported over Q and F_p only");
  UPoly m;
  for (auto& c : minpoly) {
    FieldElem cc = base.coerce(c);
    m.push_back(cc.is_zero() ? mpq_class(0) : cc.numerator()[0]);
  }
  Coeffs::trim(m);
  int d = static_cast<int>(m.size()) - 1;
  if (d < 1) throw Error(ErrorCode::Semantic, "minimal polynomial must have degree >= 1");
  if (m.back() != 1) throw Error(ErrorCode::Semantic, "minimal polynomial must be monic");
  if (d > 8) throw Error(ErrorCode::Unsupported, "minimal polynomials of degree > 8 are not supported");
  Coeffs ops{base.characteristic()};
  bool irreducible = ops.p == 0 ? irreducible_over_q(m) : irreducible_mod_p(m, ops);
  if (!irreducible)
    throw Error(ErrorCode::Semantic,
                "reducible minimal polynomial " + upoly_to_string(m, var, true) + " over " + base.spec());
  auto impl = std::make_shared<FieldImpl>();
  impl->kind = Kind::Extension;
  impl->p = ops.p;
  impl->ops = ops;
  impl->var = std::move(var);
  impl->modulus = std::move(m);
  impl->deg = d;
  return Field(impl);
}

Field Field::function_field(long p, std::string var) {
  if (!is_prime(p)) throw Error(ErrorCode::Semantic, "characteristic " + std::to_string(p) + " is not prime");
  auto impl = std::make_shared<FieldImpl>();
  impl->kind = Kind::FunctionField;
  impl->p = p;
  impl->ops.p = p;
  impl->var = std::move(var);
  impl->deg = 0;
  return Field(impl);
}

Field Field::parse(std::string_view raw) {
  std::string s = strip(raw);
  if (s == "Q") return rationals();
  if (s.empty()) throw Error(ErrorCode::Syntax, "empty field spec");
  Field base;
  std::size_t i = 0;
  if (s[0] == 'Q') {
    base = rationals();
    i = 1;
  } else if (s[0] == 'F') {
    i = 1;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    long q = parse_long(std::string_view(s).substr(1, i - 1), s);
    if (i == s.size()) {
      // F<q>, q a prime power: default irreducible polynomial, generator "g".
      long p = 2;
      while (p <= q && q % p != 0) ++p;
      if (p > q) throw Error(ErrorCode::Semantic, "field order " + std::to_string(q) + " is not a prime power");
      long t = q;
      int d = 0;
      while (t % p == 0) {
        t /= p;
        ++d;
      }
      if (t != 1) throw Error(ErrorCode::Semantic, "field order " + std::to_string(q) + " is not a prime power");
      Field fp = prime(p);
      if (d == 1) return fp;
      Coeffs ops{p};
      long count = 1;
      for (int k = 0; k < d; ++k) count *= p;
      for (long idx = 0; idx < count; ++idx) {
        UPoly m;
        long r = idx;
        for (int k = 0; k < d; ++k) {
          m.push_back(mpq_class(r % p));
          r /= p;
        }
        m.push_back(1);
        if (irreducible_mod_p(m, ops)) {
          std::vector<FieldElem> coeffs;
          for (auto& c : m) coeffs.push_back(fp.from_rational(c));
          return extension(fp, "g", coeffs);
        }
      }
      throw Error(ErrorCode::Semantic, "no irreducible polynomial found");
    }
    if (s[i] == '(') {
      if (s.back() != ')') throw Error(ErrorCode::Syntax, "bad field spec '" + s + "'");
      std::string var = strip(std::string_view(s).substr(i + 1, s.size() - i - 2));
      if (var.empty()) throw Error(ErrorCode::Syntax, "missing variable in '" + s + "'");
      return function_field(q, var);
    }
    base = prime(q);
  } else {
    throw Error(ErrorCode::Syntax, "bad field spec '" + s + "'");
  }
  // [v]/(poly)
  if (i >= s.size() || s[i] != '[') throw Error(ErrorCode::Syntax, "bad field spec '" + s + "'");
  std::size_t close = s.find(']', i);
  if (close == std::string::npos) throw Error(ErrorCode::Syntax, "missing ']' in '" + s + "'");
  std::string var = strip(std::string_view(s).substr(i + 1, close - i - 1));
  std::string rest = strip(std::string_view(s).substr(close + 1));
  if (rest.size() < 3 || rest[0] != '/' ) throw Error(ErrorCode::Syntax, "expected '/(poly)' in '" + s + "'");
  std::string poly = strip(std::string_view(rest).substr(1));
  if (poly.size() < 2 || poly.front() != '(' || poly.back() != ')')
    throw Error(ErrorCode::Syntax, "expected '/(poly)' in '" + s + "'");
  auto node = expr::parse(std::string_view(poly).substr(1, poly.size() - 2));
  UPoly m = eval_upoly(*node, var, Coeffs{base.characteristic()});
  std::vector<FieldElem> coeffs;
  for (auto& c : m) coeffs.push_back(base.from_rational(c));
  return extension(base, var, coeffs);
}

Field::Kind Field::kind() const { return impl_->kind; }
long Field::characteristic() const { return impl_->p; }
int Field::degree() const { return impl_->deg; }
bool Field::is_finite() const { return impl_->kind == Kind::Prime || (impl_->kind == Kind::Extension && impl_->p > 0); }

std::uint64_t Field::size() const {
  if (!is_finite()) throw Error(ErrorCode::Domain, "field " + spec() + " is infinite");
  unsigned __int128 s = 1;
  for (int i = 0; i < impl_->deg; ++i) {
    s *= static_cast<unsigned long>(impl_->p);
    if (s > (static_cast<unsigned __int128>(1) << 62)) throw Error(ErrorCode::CapExceeded, "field too large");
  }
  return static_cast<std::uint64_t>(s);
}

Field Field::prime_field() const {
  switch (impl_->kind) {
    case Kind::Rationals:
    case Kind::Prime:
      return *this;
    case Kind::Extension:
    case Kind::FunctionField:
      return impl_->p == 0 ? rationals() : prime(impl_->p);
  }
  return *this;
}

const std::string& Field::generator_name() const { return impl_->var; }

FieldElem Field::generator() const {
  if (impl_->kind == Kind::Extension) {
    UPoly g{mpq_class(0), mpq_class(1)};
    UPoly d;
    impl_->canonical(g, d);
    return FieldElem(impl_, g, d);
  }
  if (impl_->kind == Kind::FunctionField) return FieldElem(impl_, {mpq_class(0), mpq_class(1)}, {mpq_class(1)});
  throw Error(ErrorCode::Domain, "field " + spec() + " has no generator");
}

const std::vector<mpq_class>& Field::modulus() const { return impl_->modulus; }

std::string Field::spec() const {
  switch (impl_->kind) {
    case Kind::Rationals:
      return "Q";
    case Kind::Prime:
      return "F" + std::to_string(impl_->p);
    case Kind::Extension:
      return (impl_->p == 0 ? std::string("Q") : "F" + std::to_string(impl_->p)) + "[" + impl_->var +
             "]/(" + upoly_to_string(impl_->modulus, impl_->var, true) + ")";
    case Kind::FunctionField:
      return "F" + std::to_string(impl_->p) + "(" + impl_->var + ")";
  }
  return "?";
}

FieldElem Field::zero() const {
  if (impl_->kind == Kind::FunctionField) return FieldElem(impl_, {}, {mpq_class(1)});
  return FieldElem(impl_, {}, {});
}
FieldElem Field::one() const { return from_int(1); }
FieldElem Field::from_int(long v) const { return from_rational(mpq_class(v)); }

FieldElem Field::from_rational(const mpq_class& q) const {
  UPoly num{q};
  UPoly den;
  if (impl_->kind == Kind::FunctionField) den = {mpq_class(1)};
  impl_->canonical(num, den);
  return FieldElem(impl_, std::move(num), std::move(den));
}

FieldElem Field::from_coefficients(std::vector<mpq_class> coeffs) const {
  UPoly den;
  if (impl_->kind == Kind::FunctionField) den = {mpq_class(1)};
  impl_->canonical(coeffs, den);
  return FieldElem(impl_, std::move(coeffs), std::move(den));
}

FieldElem Field::element_at(std::uint64_t index) const {
  if (!is_finite()) throw Error(ErrorCode::Domain, "cannot enumerate infinite field " + spec());
  UPoly c;
  for (int i = 0; i < impl_->deg; ++i) {
    c.push_back(mpq_class(static_cast<long>(index % static_cast<std::uint64_t>(impl_->p))));
    index /= static_cast<std::uint64_t>(impl_->p);
  }
  return from_coefficients(std::move(c));
}

std::uint64_t Field::index_of(const FieldElem& e) const {
  FieldElem c = coerce(e);
  std::uint64_t idx = 0;
  const auto& n = c.numerator();
  for (std::size_t i = n.size(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(impl_->p) + n[i].get_num().get_ui();
  return idx;
}

FieldElem Field::coerce(const FieldElem& e) const {
  if (!e.f_) throw Error(ErrorCode::Mismatch, "uninitialized field element");
  if (e.f_ == impl_) return e;
  if (Field(e.f_) == *this) return FieldElem(impl_, e.num_, e.den_);
  if (e.f_->p == impl_->p && e.is_prime_scalar())
    return from_rational(e.num_.empty() ? mpq_class(0) : e.num_[0]);
  throw Error(ErrorCode::Mismatch, "cannot map element of " + Field(e.f_).spec() + " into " + spec());
}

FieldElem Field::parse_scalar(std::string_view text) const {
  auto node = expr::parse(text);
  struct Ops {
    const Field& f;
    FieldElem number(const mpq_class& q) { return f.from_rational(q); }
    FieldElem variable(const std::string& name, std::size_t col) {
      if ((f.kind() == Kind::Extension || f.kind() == Kind::FunctionField) && name == f.generator_name())
        return f.generator();
      throw ParseError("column " + std::to_string(col) + ": unknown symbol '" + name + "'", 1, col);
    }
    FieldElem add(const FieldElem& a, const FieldElem& b) { return a + b; }
    FieldElem sub(const FieldElem& a, const FieldElem& b) { return a - b; }
    FieldElem mul(const FieldElem& a, const FieldElem& b) { return a * b; }
    FieldElem neg(const FieldElem& a) { return -a; }
    FieldElem pow(const FieldElem& a, unsigned long e) { return a.pow(e); }
    FieldElem divide(const FieldElem& a, const FieldElem& b, std::size_t) { return a / b; }
  } ops{*this};
  return expr::evaluate<FieldElem>(*node, ops);
}

bool Field::operator==(const Field& o) const {
  if (impl_ == o.impl_) return true;
  if (!impl_ || !o.impl_) return false;
  return impl_->kind == o.impl_->kind && impl_->p == o.impl_->p && impl_->var == o.impl_->var &&
         impl_->modulus == o.impl_->modulus;
}

// ---- FieldElem ------------------------------------------------------------

FieldElem::FieldElem(std::shared_ptr<const FieldImpl> f, std::vector<mpq_class> num,
                     std::vector<mpq_class> den)
    : f_(std::move(f)), num_(std::move(num)), den_(std::move(den)) {}

namespace {
const FieldImpl& same_field(const FieldElem& a, const FieldElem& b,
                            const std::shared_ptr<const FieldImpl>& fa,
                            const std::shared_ptr<const FieldImpl>& fb) {
  if (!fa || !fb) throw Error(ErrorCode::Mismatch, "uninitialized field element");
  if (fa != fb && !(a.field() == b.field()))
    throw Error(ErrorCode::Mismatch, "field mismatch: " + a.field().spec() + " vs " + b.field().spec());
  return *fa;
}
}  // namespace

bool FieldElem::is_one() const {
  return num_.size() == 1 && num_[0] == 1 && (den_.empty() || (den_.size() == 1 && den_[0] == 1));
}

bool FieldElem::is_prime_scalar() const {
  return num_.size() <= 1 && (den_.empty() || (den_.size() == 1 && den_[0] == 1));
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  const FieldImpl& F = same_field(*this, o, f_, o.f_);
  const Coeffs& ops = F.ops;
  if (F.kind == Field::Kind::FunctionField) {
    UPoly n = ops.add(ops.mul(num_, o.den_), ops.mul(o.num_, den_));
    UPoly d = ops.mul(den_, o.den_);
    F.canonical(n, d);
    return FieldElem(f_, std::move(n), std::move(d));
  }
  return FieldElem(f_, ops.add(num_, o.num_), {});
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
  const FieldImpl& F = same_field(*this, o, f_, o.f_);
  const Coeffs& ops = F.ops;
  if (F.kind == Field::Kind::FunctionField) {
    UPoly n = ops.sub(ops.mul(num_, o.den_), ops.mul(o.num_, den_));
    UPoly d = ops.mul(den_, o.den_);
    F.canonical(n, d);
    return FieldElem(f_, std::move(n), std::move(d));
  }
  return FieldElem(f_, ops.sub(num_, o.num_), {});
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  const FieldImpl& F = same_field(*this, o, f_, o.f_);
  const Coeffs& ops = F.ops;
  UPoly n = ops.mul(num_, o.num_);
  UPoly d;
  if (F.kind == Field::Kind::FunctionField) d = ops.mul(den_, o.den_);
  F.canonical(n, d);
  return FieldElem(f_, std::move(n), std::move(d));
}

FieldElem FieldElem::inverse() const {
  if (!f_) throw Error(ErrorCode::Mismatch, "uninitialized field element");
  if (is_zero()) throw Error(ErrorCode::Domain, "division by zero");
  const FieldImpl& F = *f_;
  switch (F.kind) {
    case Field::Kind::Rationals:
    case Field::Kind::Prime:
      return FieldElem(f_, {F.ops.inv(num_[0])}, {});
    case Field::Kind::Extension:
      return FieldElem(f_, F.ops.inv_mod(num_, F.modulus), {});
    case Field::Kind::FunctionField: {
      UPoly n = den_, d = num_;
      F.canonical(n, d);
      return FieldElem(f_, std::move(n), std::move(d));
    }
  }
  throw Error(ErrorCode::Domain, "bad field");
}

FieldElem FieldElem::operator/(const FieldElem& o) const { return *this * o.inverse(); }

FieldElem FieldElem::operator-() const {
  if (!f_) throw Error(ErrorCode::Mismatch, "uninitialized field element");
  UPoly n = f_->ops.sub(UPoly{}, num_);
  return FieldElem(f_, std::move(n), den_);
}

FieldElem FieldElem::pow(unsigned long e) const {
  FieldElem result = Field(f_).one();
  FieldElem base = *this;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool FieldElem::operator==(const FieldElem& o) const {
  if (f_ != o.f_ && !(field() == o.field())) return false;
  return num_ == o.num_ && den_ == o.den_;
}

bool FieldElem::operator<(const FieldElem& o) const {
  auto cmp = [](const UPoly& a, const UPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  };
  int c = cmp(num_, o.num_);
  if (c != 0) return c < 0;
  return cmp(den_, o.den_) < 0;
}

std::string FieldElem::to_string() const {
  if (!f_) return "<null>";
  switch (f_->kind) {
    case Field::Kind::Rationals:
    case Field::Kind::Prime:
      return num_.empty() ? "0" : num_[0].get_str();
    case Field::Kind::Extension:
      return upoly_to_string(num_, f_->var);
    case Field::Kind::FunctionField: {
      std::string n = upoly_to_string(num_, f_->var);
      if (den_.size() == 1 && den_[0] == 1) return n;
      return "(" + n + ")/(" + upoly_to_string(den_, f_->var) + ")";
    }
  }
  return "?";
}

// ---- Extension -------------------------------------------------------------

Extension::Extension(Field base, Field top) : base_(std::move(base)), top_(std::move(top)) {
  if (base_ == top_) {
    degree_ = 1;
    return;
  }
  if (top_.kind() != Field::Kind::Extension || !(top_.prime_field() == base_))
    throw Error(ErrorCode::Unsupported,
                "extension " + top_.spec() + " over " + base_.spec() + " is not a simple extension of its prime field");
  degree_ = top_.degree();
}

std::vector<FieldElem> Extension::basis() const {
  std::vector<FieldElem> b;
  FieldElem cur = top_.one();
  for (int i = 0; i < degree_; ++i) {
    b.push_back(cur);
    if (i + 1 < degree_) cur = cur * top_.generator();
  }
  return b;
}

FieldElem Extension::embed(const FieldElem& c) const { return top_.coerce(base_.coerce(c)); }

std::vector<FieldElem> Extension::coordinates(const FieldElem& e) const {
  FieldElem t = top_.coerce(e);
  if (degree_ == 1) return {base_.coerce(t)};
  std::vector<FieldElem> out;
  for (int i = 0; i < degree_; ++i)
    out.push_back(i < static_cast<int>(t.numerator().size()) ? base_.from_rational(t.numerator()[i])
                                                             : base_.zero());
  return out;
}

std::optional<FieldElem> Extension::descend_scalar(const FieldElem& e) const {
  auto c = coordinates(e);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (!c[i].is_zero()) return std::nullopt;
  return c[0];
}

Extension make_extension(const Field& base, std::string_view minpoly) {
  auto node = expr::parse(minpoly);
  std::vector<std::string> vars;
  expr::collect_variables(*node, vars);
  if (vars.size() != 1)
    throw Error(ErrorCode::Syntax, "minimal polynomial must use exactly one variable");
  if (base.kind() != Field::Kind::Rationals && base.kind() != Field::Kind::Prime)
    throw Error(ErrorCode::Unsupported, "extensions are supported over Q and F_p only");
  UPoly m = eval_upoly(*node, vars[0], Coeffs{base.characteristic()});
  std::vector<FieldElem> coeffs;
  for (auto& c : m) coeffs.push_back(base.from_rational(c));
  return Extension(base, Field::extension(base, vars[0], coeffs));
}

std::optional<FieldElem> pth_root(const FieldElem& e) {
  Field F = e.field();
  long p = F.characteristic();
  if (p == 0) throw Error(ErrorCode::Domain, "p-th roots need positive characteristic");
  switch (F.kind()) {
    case Field::Kind::Prime:
      return e;
    case Field::Kind::Extension: {
      FieldElem r = e;
      for (int i = 0; i + 1 < F.degree(); ++i) r = r.pow(static_cast<unsigned long>(p));
      return r;
    }
    case Field::Kind::FunctionField: {
      auto root_poly = [p](const std::vector<mpq_class>& a) -> std::optional<std::vector<mpq_class>> {
        std::vector<mpq_class> r;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] == 0) continue;
          if (i % static_cast<std::size_t>(p) != 0) return std::nullopt;
          std::size_t j = i / static_cast<std::size_t>(p);
          if (r.size() <= j) r.resize(j + 1, 0);
          r[j] = a[i];  // c^(1/p) = c in F_p
        }
        return r;
      };
      auto n = root_poly(e.numerator());
      auto d = root_poly(e.denominator());
      if (!n || !d) return std::nullopt;
      return F.from_coefficients(*n) / F.from_coefficients(*d);
    }
    case Field::Kind::Rationals:
      break;
  }
  throw Error(ErrorCode::Domain, "p-th roots need positive characteristic");
}

}  // namespace germ
