#include "germ/jets.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "germ/expr.hpp"

namespace germ {

namespace detail {

struct RingData {
  Field field;
  std::vector<std::string> vars, tvars;
  int N = 1, s = 0;
  std::vector<Exponent> monos;
  std::map<Exponent, std::size_t> index;
  std::vector<std::size_t> product;  // dim * dim
  std::vector<int> xdeg, tdeg;
  std::vector<Jet> ideal_gens;       // stored in the ideal-free ring
  SubspaceBasis ideal;
};

}  // namespace detail

namespace {

void enumerate(std::size_t pos, std::size_t n, int budget, Exponent& cur,
               std::vector<Exponent>& out, std::size_t offset) {
  if (pos == n) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= budget; ++e) {
    cur[offset + pos] = e;
    enumerate(pos + 1, n, budget - e, cur, out, offset);
  }
  cur[offset + pos] = 0;
}

bool simple_scalar(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '-' && i == 0) continue;
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/') return false;
  }
  return true;
}

}  // namespace

// ---- JetRing ----------------------------------------------------------------

JetRing::JetRing(Field field, std::vector<std::string> vars, int jet_order,
                 std::vector<std::string> tvars, int t_order) {
  if (jet_order < 1) throw Error(ErrorCode::Semantic, "jet order must be >= 1");
  if (t_order < 0) throw Error(ErrorCode::Semantic, "t-truncation order must be >= 0");
  auto d = std::make_shared<detail::RingData>();
  d->field = std::move(field);
  d->vars = std::move(vars);
  d->tvars = std::move(tvars);
  d->N = jet_order;
  d->s = d->tvars.empty() ? 0 : t_order;
  std::size_t n = d->vars.size(), nt = d->tvars.size();
  std::vector<Exponent> xs, ts;
  Exponent cur(n + nt, 0);
  enumerate(0, n, d->N, cur, xs, 0);
  enumerate(0, nt, d->s, cur, ts, n);
  for (auto& a : xs)
    for (auto& b : ts) {
      Exponent e = a;
      for (std::size_t i = 0; i < nt; ++i) e[n + i] = b[n + i];
      d->monos.push_back(std::move(e));
    }
  std::sort(d->monos.begin(), d->monos.end(), [](const Exponent& a, const Exponent& b) {
    int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a > b;
  });
  std::size_t dim = d->monos.size();
  for (std::size_t i = 0; i < dim; ++i) {
    d->index[d->monos[i]] = i;
    d->xdeg.push_back(std::accumulate(d->monos[i].begin(), d->monos[i].begin() + n, 0));
    d->tdeg.push_back(std::accumulate(d->monos[i].begin() + n, d->monos[i].end(), 0));
  }
  d->product.assign(dim * dim, npos);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      if (d->xdeg[i] + d->xdeg[j] > d->N || d->tdeg[i] + d->tdeg[j] > d->s) continue;
      Exponent e(n + nt);
      for (std::size_t k = 0; k < n + nt; ++k) e[k] = d->monos[i][k] + d->monos[j][k];
      d->product[i * dim + j] = d->index.at(e);
    }
  d->ideal = SubspaceBasis(d->field, dim);
  d_ = std::move(d);
}

JetRing JetRing::with_ideal(const std::vector<Jet>& gens) const {
  auto d = std::make_shared<detail::RingData>(*d_);
  JetRing free_ring;
  if (d_->ideal_gens.empty() && d_->ideal.rank() == 0) {
    free_ring = *this;
  } else {
    auto fd = std::make_shared<detail::RingData>(*d_);
    fd->ideal_gens.clear();
    fd->ideal = SubspaceBasis(d_->field, d_->monos.size());
    free_ring.d_ = fd;
  }
  d->ideal_gens.clear();
  d->ideal = SubspaceBasis(d->field, d->monos.size());
  for (auto& g : gens) {
    if (g.ring().dim() != dim()) throw Error(ErrorCode::Mismatch, "ideal generator from another ring");
    Jet fg(free_ring, g.coeffs());
    for (auto& c : fg.c_) c = d->field.coerce(c);
    if (!fg.coeff(0).is_zero())
      throw Error(ErrorCode::Semantic, "ideal generator " + fg.to_string() + " has nonzero constant term");
    d->ideal_gens.push_back(fg);
    for (std::size_t m = 0; m < dim(); ++m) d->ideal.add((fg * free_ring.monomial_jet(m, d->field.one())).coeffs());
  }
  JetRing r;
  r.d_ = std::move(d);
  return r;
}

JetRing JetRing::over(const Field& field) const {
  if (field == d_->field) return *this;
  JetRing base(field, d_->vars, d_->N, d_->tvars, d_->s);
  if (d_->ideal_gens.empty()) return base;
  std::vector<Jet> gens;
  for (auto& g : d_->ideal_gens) {
    Vec c(g.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = field.coerce(g.coeffs()[i]);
    gens.push_back(base.from_vec(std::move(c)));
  }
  return base.with_ideal(gens);
}

JetRing JetRing::renamed(std::vector<std::string> vars) const {
  if (vars.size() != d_->vars.size()) throw Error(ErrorCode::Mismatch, "variable count mismatch");
  auto d = std::make_shared<detail::RingData>(*d_);
  d->vars = std::move(vars);
  JetRing r;
  r.d_ = d;
  // Generators live in an ideal-free ring that must carry the new names too.
  if (!d->ideal_gens.empty()) {
    JetRing free_ring(d->field, d->vars, d->N, d->tvars, d->s);
    for (auto& g : d->ideal_gens) g = Jet(free_ring, g.coeffs());
  }
  return r;
}

const Field& JetRing::field() const { return d_->field; }
const std::vector<std::string>& JetRing::vars() const { return d_->vars; }
const std::vector<std::string>& JetRing::tvars() const { return d_->tvars; }
std::size_t JetRing::nvars() const { return d_->vars.size(); }
std::size_t JetRing::ntvars() const { return d_->tvars.size(); }
int JetRing::jet_order() const { return d_->N; }
int JetRing::t_order() const { return d_->s; }
std::size_t JetRing::dim() const { return d_->monos.size(); }
const std::vector<Exponent>& JetRing::monomials() const { return d_->monos; }
const Exponent& JetRing::monomial(std::size_t i) const { return d_->monos[i]; }

std::size_t JetRing::index_of(const Exponent& e) const {
  auto it = d_->index.find(e);
  return it == d_->index.end() ? npos : it->second;
}

std::size_t JetRing::product_index(std::size_t i, std::size_t j) const { return d_->product[i * dim() + j]; }
int JetRing::x_degree(std::size_t i) const { return d_->xdeg[i]; }
int JetRing::t_degree(std::size_t i) const { return d_->tdeg[i]; }

std::string JetRing::monomial_string(std::size_t i) const {
  const Exponent& e = d_->monos[i];
  std::string out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    const std::string& name = k < d_->vars.size() ? d_->vars[k] : d_->tvars[k - d_->vars.size()];
    if (!out.empty()) out += "*";
    out += name;
    if (e[k] > 1) out += "^" + std::to_string(e[k]);
  }
  return out.empty() ? "1" : out;
}

const std::vector<Jet>& JetRing::ideal_generators() const { return d_->ideal_gens; }
const SubspaceBasis& JetRing::ideal_span() const { return d_->ideal; }
bool JetRing::has_ideal() const { return d_->ideal.rank() > 0; }

bool JetRing::operator==(const JetRing& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->field == o.d_->field && d_->vars == o.d_->vars && d_->tvars == o.d_->tvars &&
         d_->N == o.d_->N && d_->s == o.d_->s && d_->ideal == o.d_->ideal;
}

Jet JetRing::zero() const { return Jet(*this, zero_vec(d_->field, dim())); }
Jet JetRing::one() const { return constant(d_->field.one()); }

Jet JetRing::constant(const FieldElem& c) const { return monomial_jet(0, c); }

Jet JetRing::var(std::size_t i) const {
  Exponent e(nvars() + ntvars(), 0);
  e[i] = 1;
  return monomial_jet(index_of(e), d_->field.one());
}

Jet JetRing::tvar(std::size_t i) const {
  Exponent e(nvars() + ntvars(), 0);
  e[nvars() + i] = 1;
  std::size_t idx = index_of(e);
  if (idx == npos) return zero();
  return monomial_jet(idx, d_->field.one());
}

Jet JetRing::monomial_jet(std::size_t index, const FieldElem& c) const {
  Vec v = zero_vec(d_->field, dim());
  if (index != npos) v[index] = d_->field.coerce(c);
  Jet j(*this, std::move(v));
  j.normalize();
  return j;
}

Jet JetRing::from_vec(Vec coeffs) const {
  if (coeffs.size() != dim()) throw Error(ErrorCode::Mismatch, "coefficient vector has wrong length");
  for (auto& c : coeffs) c = d_->field.coerce(c);
  Jet j(*this, std::move(coeffs));
  j.normalize();
  return j;
}

namespace {

Jet unit_inverse(const Jet& u, std::size_t column) {
  const FieldElem& c0 = u.coeff(0);
  if (c0.is_zero())
    throw ParseError("column " + std::to_string(column) + ": division by a non-unit", 1, column);
  Jet unit = u.scaled(c0.inverse());
  Jet n = u.ring().one() - unit;  // unit = 1 - n, n nilpotent
  Jet sum = u.ring().one(), term = u.ring().one();
  int bound = u.ring().jet_order() + u.ring().t_order() + 1;
  for (int k = 1; k <= bound; ++k) {
    term = term * n;
    if (term.is_zero()) break;
    sum = sum + term;
  }
  return sum.scaled(c0.inverse());
}

}  // namespace

Jet JetRing::parse(std::string_view text, std::size_t line, std::size_t column_offset) const {
  auto node = expr::parse(text, line, column_offset);
  struct Ops {
    const JetRing& r;
    std::size_t line;
    Jet number(const mpq_class& q) { return r.constant(r.field().from_rational(q)); }
    Jet variable(const std::string& name, std::size_t col) {
      for (std::size_t i = 0; i < r.nvars(); ++i)
        if (r.vars()[i] == name) return r.var(i);
      for (std::size_t i = 0; i < r.ntvars(); ++i)
        if (r.tvars()[i] == name) return r.tvar(i);
      const Field& f = r.field();
      if ((f.kind() == Field::Kind::Extension || f.kind() == Field::Kind::FunctionField) &&
          f.generator_name() == name)
        return r.constant(f.generator());
      throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                           ": unknown symbol '" + name + "'",
                       line, col);
    }
    Jet add(const Jet& a, const Jet& b) { return a + b; }
    Jet sub(const Jet& a, const Jet& b) { return a - b; }
    Jet mul(const Jet& a, const Jet& b) { return a * b; }
    Jet neg(const Jet& a) { return -a; }
    Jet pow(const Jet& a, unsigned long e) { return a.pow(static_cast<unsigned>(e)); }
    Jet divide(const Jet& a, const Jet& b, std::size_t col) { return a * unit_inverse(b, col); }
  } ops{*this, line};
  return expr::evaluate<Jet>(*node, ops);
}

std::size_t JetRing::parse_monomial(std::string_view text) const {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  Exponent e(nvars() + ntvars(), 0);
  if (s != "1") {
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t end = s.find('*', pos);
      if (end == std::string::npos) end = s.size();
      std::string factor = s.substr(pos, end - pos);
      std::size_t caret = factor.find('^');
      std::string name = factor.substr(0, caret);
      int power = 1;
      if (caret != std::string::npos) {
        try {
          power = std::stoi(factor.substr(caret + 1));
        } catch (...) {
          throw Error(ErrorCode::Syntax, "bad monomial '" + std::string(text) + "'");
        }
      }
      bool found = false;
      for (std::size_t i = 0; i < nvars() + ntvars(); ++i) {
        const std::string& v = i < nvars() ? vars()[i] : tvars()[i - nvars()];
        if (v == name) {
          e[i] += power;
          found = true;
        }
      }
      if (!found) throw Error(ErrorCode::Syntax, "unknown variable '" + name + "' in monomial '" + std::string(text) + "'");
      pos = end + 1;
    }
  }
  std::size_t idx = index_of(e);
  if (idx == npos) throw Error(ErrorCode::Domain, "monomial '" + std::string(text) + "' exceeds the jet order");
  return idx;
}

// ---- Jet ----------------------------------------------------------------------

Jet::Jet(JetRing r, Vec c) : ring_(std::move(r)), c_(std::move(c)) {}

void Jet::normalize() {
  if (ring_.has_ideal()) c_ = ring_.ideal_span().reduce(c_);
}

namespace {
void check_same(const Jet& a, const Jet& b) {
  if (!(a.ring() == b.ring())) throw Error(ErrorCode::Mismatch, "jets from different rings");
}
}  // namespace

int Jet::x_order() const {
  int best = kInfinity;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) best = std::min(best, ring_.x_degree(i));
  return best;
}

Jet Jet::operator+(const Jet& o) const {
  check_same(*this, o);
  return Jet(ring_, add_vec(c_, o.c_));
}

Jet Jet::operator-(const Jet& o) const {
  check_same(*this, o);
  return Jet(ring_, sub_vec(c_, o.c_));
}

Jet Jet::operator-() const { return Jet(ring_, scale_vec(c_, -ring_.field().one())); }

Jet Jet::scaled(const FieldElem& c) const {
  Jet j(ring_, scale_vec(c_, ring_.field().coerce(c)));
  return j;
}

Jet Jet::operator*(const Jet& o) const {
  check_same(*this, o);
  std::size_t dim = c_.size();
  Vec r = zero_vec(ring_.field(), dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (o.c_[j].is_zero()) continue;
      std::size_t k = ring_.product_index(i, j);
      if (k == JetRing::npos) continue;
      r[k] += c_[i] * o.c_[j];
    }
  }
  Jet out(ring_, std::move(r));
  out.normalize();
  return out;
}

Jet Jet::pow(unsigned e) const {
  Jet r = ring_.one();
  for (unsigned i = 0; i < e; ++i) {
    r = r * *this;
    if (r.is_zero()) break;
  }
  return r;
}

bool Jet::operator==(const Jet& o) const { return ring_ == o.ring_ && c_ == o.c_; }

Jet Jet::derivative(std::size_t var) const {
  Vec r = zero_vec(ring_.field(), c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    Exponent e = ring_.monomial(i);
    if (e[var] == 0) continue;
    FieldElem k = ring_.field().from_int(e[var]);
    e[var] -= 1;
    r[ring_.index_of(e)] += c_[i] * k;
  }
  Jet out(ring_, std::move(r));
  out.normalize();
  return out;
}

Jet Jet::substitute(const std::vector<Jet>& args) const {
  if (args.size() != ring_.nvars())
    throw Error(ErrorCode::Mismatch, "substitution expects " + std::to_string(ring_.nvars()) + " arguments, got " +
                                         std::to_string(args.size()));
  if (args.empty()) throw Error(ErrorCode::Mismatch, "substitution without target ring");
  const JetRing& target = args[0].ring();
  if (target.ntvars() != ring_.ntvars())
    throw Error(ErrorCode::Mismatch, "substitution between rings with different parameters");
  for (auto& a : args) {
    check_same(a, args[0]);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!a.c_[i].is_zero() && target.x_degree(i) == 0)
        throw Error(ErrorCode::Domain, "substitution argument " + a.to_string() + " has nonzero constant term");
  }
  std::size_t n = ring_.nvars(), nt = ring_.ntvars();
  int N = ring_.jet_order();
  std::vector<std::vector<Jet>> pw(n);
  for (std::size_t v = 0; v < n; ++v) {
    pw[v].push_back(target.one());
    for (int k = 1; k <= N; ++k) pw[v].push_back(pw[v].back() * args[v]);
  }
  Jet result = target.zero();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    const Exponent& e = ring_.monomial(i);
    Exponent te(target.nvars() + nt, 0);
    for (std::size_t k = 0; k < nt; ++k) te[target.nvars() + k] = e[n + k];
    std::size_t tidx = target.index_of(te);
    if (tidx == JetRing::npos) continue;
    Jet term = target.monomial_jet(tidx, target.field().coerce(c_[i]));
    for (std::size_t v = 0; v < n && !term.is_zero(); ++v)
      if (e[v] > 0) term = term * pw[v][static_cast<std::size_t>(e[v])];
    result = result + term;
  }
  result.normalize();
  return result;
}

Jet Jet::at_t_zero() const {
  Vec r = c_;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (ring_.t_degree(i) > 0) r[i] = ring_.field().zero();
  Jet out(ring_, std::move(r));
  out.normalize();
  return out;
}

Jet Jet::rebase(const JetRing& ring) const {
  if (ring.monomials() != ring_.monomials()) throw Error(ErrorCode::Mismatch, "rebase between rings with different monomials");
  return ring.from_vec(c_);
}

Jet Jet::base_change(const JetRing& top, const Extension& ext) const {
  Vec r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = ext.embed(c_[i]);
  return top.from_vec(std::move(r));
}

std::optional<Jet> Jet::descend(const JetRing& base, const Extension& ext) const {
  Vec r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    auto d = ext.descend_scalar(c_[i]);
    if (!d) return std::nullopt;
    r[i] = *d;
  }
  return base.from_vec(std::move(r));
}

std::vector<std::pair<std::string, std::string>> Jet::terms() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) out.emplace_back(ring_.monomial_string(i), c_[i].to_string());
  return out;
}

std::string Jet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    std::string mono = ring_.monomial_string(i);
    std::string sc = c_[i].to_string();
    std::string term;
    if (mono == "1")
      term = simple_scalar(sc) ? sc : "(" + sc + ")";
    else if (sc == "1")
      term = mono;
    else if (sc == "-1")
      term = "-" + mono;
    else
      term = (simple_scalar(sc) ? sc : "(" + sc + ")") + "*" + mono;
    if (out.empty())
      out = term;
    else
      out += (term[0] == '-' ? "" : "+") + term;
  }
  return out.empty() ? "0" : out;
}

Vec stack(const std::vector<Jet>& comps) {
  Vec v;
  for (auto& c : comps) v.insert(v.end(), c.coeffs().begin(), c.coeffs().end());
  return v;
}

std::vector<Jet> unstack(const JetRing& ring, const Vec& v, std::size_t m) {
  std::size_t dim = ring.dim();
  if (v.size() != dim * m) throw Error(ErrorCode::Mismatch, "stacked vector has wrong length");
  std::vector<Jet> out;
  for (std::size_t k = 0; k < m; ++k)
    out.push_back(ring.from_vec(Vec(v.begin() + static_cast<long>(k * dim), v.begin() + static_cast<long>((k + 1) * dim))));
  return out;
}

// ---- Filtration ---------------------------------------------------------------

Filtration Filtration::madic(const JetRing& ring) {
  Filtration f;
  f.kind_ = Kind::MAdic;
  f.ring_ = ring;
  f.build(0);
  return f;
}

Filtration Filtration::tadic(const JetRing& ring) {
  if (ring.ntvars() == 0) throw Error(ErrorCode::Semantic, "tadic filtration needs t parameters");
  Filtration f;
  f.kind_ = Kind::TAdic;
  f.ring_ = ring;
  f.build(0);
  return f;
}

Filtration Filtration::chain(const JetRing& ring, const std::vector<std::vector<Exponent>>& levels) {
  if (levels.empty()) throw Error(ErrorCode::Semantic, "empty filtration chain");
  Filtration f;
  f.kind_ = Kind::Chain;
  f.ring_ = ring;
  f.gens_ = levels;
  f.build(static_cast<int>(levels.size()));
  return f;
}

Filtration Filtration::on(const JetRing& ring) const {
  if (ring.monomials() != ring_.monomials())
    throw Error(ErrorCode::Mismatch, "filtration moved to a ring with different monomials");
  Filtration f = *this;
  f.ring_ = ring;
  return f;
}

std::string Filtration::spec() const {
  switch (kind_) {
    case Kind::MAdic:
      return "madic";
    case Kind::TAdic:
      return "tadic";
    case Kind::Chain: {
      std::string out = "chain[";
      for (std::size_t l = 0; l < gens_.size(); ++l) {
        if (l) out += ";";
        out += "(";
        for (std::size_t g = 0; g < gens_[l].size(); ++g) {
          if (g) out += ",";
          out += ring_.monomial_string(ring_.index_of(gens_[l][g]));
        }
        out += ")";
      }
      return out + "]";
    }
  }
  return "?";
}

void Filtration::build(int explicit_count) {
  std::size_t dim = ring_.dim();
  std::size_t nv = ring_.nvars() + ring_.ntvars();
  levels_.assign(1, std::vector<bool>(dim, true));
  auto divides = [&](const Exponent& g, const Exponent& m) {
    for (std::size_t k = 0; k < nv; ++k)
      if (g[k] > m[k]) return false;
    return true;
  };
  auto product = [&](const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> r(dim, false);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (!b[j]) continue;
        std::size_t k = ring_.product_index(i, j);
        if (k != JetRing::npos) r[k] = true;
      }
    }
    return r;
  };
  auto subset = [&](const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t i = 0; i < dim; ++i)
      if (a[i] && !b[i]) return false;
    return true;
  };
  auto empty = [](const std::vector<bool>& a) { return std::none_of(a.begin(), a.end(), [](bool x) { return x; }); };

  explicit_ = explicit_count;
  if (kind_ == Kind::Chain) {
    for (int l = 0; l < explicit_count; ++l) {
      std::vector<bool> s(dim, false);
      for (auto& g : gens_[l]) {
        if (g.size() != nv) throw Error(ErrorCode::Mismatch, "filtration generator has wrong arity");
        for (std::size_t i = 0; i < dim; ++i)
          if (divides(g, ring_.monomial(i))) s[i] = true;
      }
      levels_.push_back(std::move(s));
    }
    if (levels_[1][0]) throw Error(ErrorCode::Semantic, "filtration level 1 is not contained in the maximal ideal");
    for (int l = 2; l <= explicit_count; ++l)
      if (!subset(levels_[l], levels_[l - 1]))
        throw Error(ErrorCode::Semantic, "non-descending chain: level " + std::to_string(l) +
                                             " is not contained in level " + std::to_string(l - 1));
    for (int a = 1; a <= explicit_count; ++a)
      for (int b = a; a + b <= explicit_count; ++b)
        if (!subset(product(levels_[a], levels_[b]), levels_[a + b]))
          throw Error(ErrorCode::Semantic, "non-multiplicative chain: level " + std::to_string(a) + " * level " +
                                               std::to_string(b) + " is not contained in level " +
                                               std::to_string(a + b));
  } else {
    explicit_ = 1;
    std::vector<bool> s(dim, false);
    for (std::size_t i = 0; i < dim; ++i)
      s[i] = kind_ == Kind::MAdic ? ring_.x_degree(i) >= 1 : ring_.t_degree(i) >= 1;
    levels_.push_back(std::move(s));
  }
  // Maximal multiplicative extension beyond the explicit range.
  while (!empty(levels_.back())) {
    int d = static_cast<int>(levels_.size());
    std::vector<bool> s(dim, false);
    for (int a = 1; a <= d / 2; ++a) {
      auto p = product(levels_[a], levels_[d - a]);
      for (std::size_t i = 0; i < dim; ++i)
        if (p[i]) s[i] = true;
    }
    for (std::size_t i = 0; i < dim; ++i) s[i] = s[i] && levels_[d - 1][i];
    levels_.push_back(std::move(s));
  }
  levels_.pop_back();
  minord_.assign(dim, 0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t d = 1; d < levels_.size() && levels_[d][i]; ++d) minord_[i] = static_cast<int>(d);
}

bool Filtration::in_level(std::size_t mono, int d) const {
  if (d <= 0) return true;
  if (d >= static_cast<int>(levels_.size())) return false;
  return levels_[static_cast<std::size_t>(d)][mono];
}

int Filtration::order_of(const std::vector<Jet>& v) const {
  Vec s = stack(v);
  return order_of_vec(s, v.size());
}

int Filtration::order_of_vec(const Vec& v, std::size_t m) const {
  std::size_t dim = ring_.dim();
  if (v.size() != dim * m) throw Error(ErrorCode::Mismatch, "vector has wrong length for this filtration");
  if (!ring_.has_ideal()) {
    int best = kInfinity;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) best = std::min(best, minord_[i % dim]);
    return best;
  }
  // Modulo the ideal: the class lies in M^d + J for the largest such d.
  SubspaceBasis zero_level = level_space(max_level() + 1, m);
  if (zero_level.contains(v)) return kInfinity;
  int d = 0;
  while (d < max_level() && level_space(d + 1, m).contains(v)) ++d;
  return d;
}

SubspaceBasis Filtration::level_space(int d, std::size_t m) const {
  std::size_t dim = ring_.dim();
  SubspaceBasis b(ring_.field(), dim * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      if (!in_level(i, d)) continue;
      Vec e = zero_vec(ring_.field(), dim * m);
      e[k * dim + i] = ring_.field().one();
      b.add(e);
    }
    for (auto& row : ring_.ideal_span().rows()) {
      Vec e = zero_vec(ring_.field(), dim * m);
      std::copy(row.begin(), row.end(), e.begin() + static_cast<long>(k * dim));
      b.add(e);
    }
  }
  return b;
}

std::vector<bool> Filtration::outside_mask(int d, std::size_t m) const {
  std::size_t dim = ring_.dim();
  std::vector<bool> mask(dim * m);
  for (std::size_t i = 0; i < dim * m; ++i) mask[i] = !in_level(i % dim, d);
  return mask;
}

}  // namespace germ
