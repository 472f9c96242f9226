#include "germ/poly.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "germ/expr.hpp"

namespace germ {

bool GrevlexGreater::operator()(const PolyMono& a, const PolyMono& b) const {
  int da = 0, db = 0;
  for (int e : a) da += e;
  for (int e : b) db += e;
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

Poly Poly::constant(const Field& field, std::size_t nvars, const FieldElem& c) {
  Poly p(field, nvars);
  p.add_term(PolyMono(nvars, 0), c);
  return p;
}

Poly Poly::variable(const Field& field, std::size_t nvars, std::size_t i) {
  Poly p(field, nvars);
  PolyMono m(nvars, 0);
  m[i] = 1;
  p.add_term(m, field.one());
  return p;
}

Poly Poly::parse(std::string_view text, const Field& field, const std::vector<std::string>& names) {
  auto node = expr::parse(text);
  struct Ops {
    const Field& f;
    const std::vector<std::string>& names;
    Poly number(const mpq_class& q) { return constant(f, names.size(), f.from_rational(q)); }
    Poly variable(const std::string& name, std::size_t col) {
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return Poly::variable(f, names.size(), i);
      if ((f.kind() == Field::Kind::Extension || f.kind() == Field::Kind::FunctionField) && f.generator_name() == name)
        return constant(f, names.size(), f.generator());
      throw ParseError("column " + std::to_string(col) + ": unknown symbol '" + name + "'", 1, col);
    }
    Poly add(const Poly& a, const Poly& b) { return a + b; }
    Poly sub(const Poly& a, const Poly& b) { return a - b; }
    Poly mul(const Poly& a, const Poly& b) { return a * b; }
    Poly neg(const Poly& a) { return -a; }
    Poly pow(const Poly& a, unsigned long e) { return a.pow(static_cast<unsigned>(e)); }
    Poly divide(const Poly& a, const Poly& b, std::size_t col) {
      if (!b.is_constant() || b.is_zero())
        throw ParseError("column " + std::to_string(col) + ": division by a non-constant", 1, col);
      return a.scaled(b.leading_coeff().inverse());
    }
  } ops{field, names};
  return expr::evaluate<Poly>(*node, ops);
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int e : terms_.begin()->first)
    if (e) return false;
  return true;
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (int e : terms_.begin()->first) d += e;
  return d;
}

std::vector<bool> Poly::support() const {
  std::vector<bool> s(n_, false);
  for (auto& [m, c] : terms_)
    for (std::size_t i = 0; i < n_; ++i)
      if (m[i]) s[i] = true;
  return s;
}

void Poly::add_term(const PolyMono& mono, const FieldElem& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  if (!field_.valid()) {
    field_ = o.field_;
    n_ = o.n_;
  }
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (!field_.valid()) {
    field_ = o.field_;
    n_ = o.n_;
  }
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly Poly::operator-() const {
  Poly r(field_, n_);
  for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly Poly::scaled(const FieldElem& c) const {
  Poly r(field_, n_);
  if (c.is_zero()) return r;
  for (auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

Poly Poly::times_term(const PolyMono& mono, const FieldElem& c) const {
  Poly r(field_, n_);
  if (c.is_zero()) return r;
  for (auto& [m, v] : terms_) {
    PolyMono mm = m;
    for (std::size_t i = 0; i < n_; ++i) mm[i] += mono[i];
    r.terms_.emplace(std::move(mm), v * c);
  }
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(field_.valid() ? field_ : o.field_, std::max(n_, o.n_));
  for (auto& [m, c] : o.terms_) r += times_term(m, c);
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r = constant(field_, n_, field_.one());
  Poly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::monic() const {
  if (terms_.empty()) return *this;
  return scaled(leading_coeff().inverse());
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  for (; a != terms_.end(); ++a, ++b)
    if (a->first != b->first || a->second != b->second) return false;
  return true;
}

FieldElem Poly::evaluate(const std::vector<FieldElem>& point) const {
  Field F = point.empty() ? field_ : point[0].field();
  FieldElem s = F.zero();
  for (auto& [m, c] : terms_) {
    FieldElem t = F.coerce(c);
    for (std::size_t i = 0; i < n_; ++i)
      if (m[i]) t *= point[i].pow(static_cast<unsigned long>(m[i]));
    s += t;
  }
  return s;
}

Poly Poly::over(const Field& field) const {
  Poly r(field, n_);
  for (auto& [m, c] : terms_) r.terms_.emplace(m, field.coerce(c));
  return r;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto& [m, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!m[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    std::string cs = c.to_string();
    bool simple = cs.find_first_of("+*/", 1) == std::string::npos && cs.find('-', 1) == std::string::npos;
    bool neg = simple && cs[0] == '-';
    std::string mag = neg ? cs.substr(1) : cs;
    if (!simple) mag = "(" + cs + ")";
    std::string term;
    if (mono.empty())
      term = mag;
    else if (mag == "1")
      term = mono;
    else
      term = mag + "*" + mono;
    if (out.empty())
      out = (neg ? "-" : "") + term;
    else
      out += (neg ? "-" : "+") + term;
  }
  return out;
}

// ---- Buchberger ------------------------------------------------------------------

namespace {

bool divides(const PolyMono& a, const PolyMono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

PolyMono lcm(const PolyMono& a, const PolyMono& b) {
  PolyMono l(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) l[i] = std::max(a[i], b[i]);
  return l;
}

PolyMono quotient(const PolyMono& a, const PolyMono& b) {
  PolyMono q(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) q[i] = a[i] - b[i];
  return q;
}

bool coprime(const PolyMono& a, const PolyMono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

/// Full reduction of p by the monic polynomials in g.
Poly reduce(Poly p, const std::vector<Poly>& g, const std::vector<bool>& active) {
  Poly r(p.field(), p.nvars());
  while (!p.is_zero()) {
    PolyMono lm = p.leading_monomial();
    FieldElem lc = p.leading_coeff();
    bool done = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!active[i] || !divides(g[i].leading_monomial(), lm)) continue;
      p -= g[i].times_term(quotient(lm, g[i].leading_monomial()), lc);
      done = true;
      break;
    }
    if (!done) {
      r.add_term(lm, lc);
      p.add_term(lm, -lc);
    }
  }
  return r;
}

}  // namespace

std::size_t spair_cap_from_env() {
  if (const char* v = std::getenv("GERM_SPAIR_CAP")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0') return static_cast<std::size_t>(n);
  }
  return 20000;
}

GroebnerResult groebner(const std::vector<Poly>& gens, const std::vector<std::string>& names, std::size_t spair_cap) {
  GroebnerResult res;
  if (gens.empty()) {
    res.status = GroebnerStatus::Consistent;
    return res;
  }
  const Field& F = gens[0].field();
  if (F.kind() == Field::Kind::FunctionField)
    throw Error(ErrorCode::Unsupported, "Groebner bases are not implemented over function fields (" + F.spec() + ")");

  std::vector<Poly> g;
  std::vector<bool> active;
  std::vector<std::string> origin;
  auto note = [&](std::size_t idx) {
    res.trace.push_back("g" + std::to_string(idx + 1) + " = " + origin[idx] + " = " + g[idx].to_string(names));
  };
  auto inconsistent = [&](const std::string& how) {
    res.status = GroebnerStatus::Inconsistent;
    res.trace.push_back(how + " reduces to 1");
    res.basis = {Poly::constant(F, names.size(), F.one())};
    return res;
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].is_zero()) continue;
    g.push_back(gens[i].monic());
    active.push_back(true);
    origin.push_back("input " + std::to_string(i + 1));
    note(g.size() - 1);
    if (g.back().is_constant()) return inconsistent("input " + std::to_string(i + 1));
  }

  // Pending pairs ordered by lcm degree (normal strategy).
  std::set<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pending.insert({i, j});

  auto pick = [&]() {
    auto best = pending.begin();
    int bestdeg = -1;
    for (auto it = pending.begin(); it != pending.end(); ++it) {
      PolyMono l = lcm(g[it->first].leading_monomial(), g[it->second].leading_monomial());
      int d = 0;
      for (int e : l) d += e;
      if (bestdeg < 0 || d < bestdeg) {
        bestdeg = d;
        best = it;
      }
    }
    auto p = *best;
    pending.erase(best);
    return p;
  };
  auto is_pending = [&](std::size_t a, std::size_t b) { return pending.count({std::min(a, b), std::max(a, b)}) > 0; };

  while (!pending.empty()) {
    auto [i, j] = pick();
    if (!active[i] || !active[j]) continue;
    const PolyMono& li = g[i].leading_monomial();
    const PolyMono& lj = g[j].leading_monomial();
    if (coprime(li, lj)) continue;
    PolyMono l = lcm(li, lj);
    bool chain = false;
    for (std::size_t k = 0; k < g.size() && !chain; ++k)
      if (k != i && k != j && active[k] && divides(g[k].leading_monomial(), l) && !is_pending(i, k) &&
          !is_pending(j, k))
        chain = true;
    if (chain) continue;
    if (++res.spairs > spair_cap) {
      res.status = GroebnerStatus::Undecided;
      res.trace.push_back("S-pair cap " + std::to_string(spair_cap) + " exceeded");
      return res;
    }
    Poly s = g[i].times_term(quotient(l, li), F.one()) - g[j].times_term(quotient(l, lj), F.one());
    Poly r = reduce(s, g, active);
    if (r.is_zero()) continue;
    std::string how = "S(g" + std::to_string(i + 1) + ", g" + std::to_string(j + 1) + ")";
    if (r.is_constant()) return inconsistent(how);
    g.push_back(r.monic());
    active.push_back(true);
    origin.push_back(how);
    note(g.size() - 1);
    std::size_t nidx = g.size() - 1;
    for (std::size_t k = 0; k < nidx; ++k)
      if (active[k]) pending.insert({k, nidx});
  }

  // Reduced basis: drop redundant leading terms, then interreduce.
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!active[i]) continue;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (k != i && active[k] && divides(g[k].leading_monomial(), g[i].leading_monomial()) &&
          (g[k].leading_monomial() != g[i].leading_monomial() || k < i)) {
        active[i] = false;
        break;
      }
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!active[i]) continue;
    active[i] = false;
    g[i] = reduce(g[i], g, active).monic();
    active[i] = true;
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (active[i]) res.basis.push_back(g[i]);
  std::sort(res.basis.begin(), res.basis.end(), [](const Poly& a, const Poly& b) {
    return GrevlexGreater()(b.leading_monomial(), a.leading_monomial());
  });
  res.status = GroebnerStatus::Consistent;
  return res;
}

}  // namespace germ
