#include "germ/tangent.hpp"

#include <functional>
#include <map>

namespace germ {

namespace {

std::vector<Jet> zeros(const JetRing& r, std::size_t count) { return std::vector<Jet>(count, r.zero()); }

std::vector<Jet> add_all(const std::vector<Jet>& a, const std::vector<Jet>& b) {
  std::vector<Jet> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

std::vector<Jet> scale_all(const std::vector<Jet>& a, const FieldElem& c) {
  std::vector<Jet> out;
  for (auto& j : a) out.push_back(j.scaled(c));
  return out;
}

bool all_zero(const std::vector<Jet>& a) {
  for (auto& j : a)
    if (!j.is_zero()) return false;
  return true;
}

/// D(h) = sum_i xi_i * d/dvar_(offset+i) h, all in one ring.
Jet apply_derivation(const std::vector<Jet>& xi, std::size_t offset, const Jet& h) {
  Jet out = h.ring().zero();
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i].is_zero()) continue;
    Jet d = h.derivative(offset + i);
    if (!d.is_zero()) out = out + xi[i] * d;
  }
  return out;
}

void require_char0(const Field& f) {
  if (f.characteristic() != 0)
    throw Error(ErrorCode::Domain, "exp/log are only available in characteristic 0 (field " + f.spec() + ")");
}

int series_bound(const JetRing& r) { return r.jet_order() + r.t_order() + 2; }

/// exp of the derivation xi (acting on variables offset..offset+count) applied
/// to those variables.
std::vector<Jet> exp_derivation(const std::vector<Jet>& xi, std::size_t offset) {
  const JetRing& r = xi[0].ring();
  const Field& F = r.field();
  std::vector<Jet> out;
  for (std::size_t v = 0; v < xi.size(); ++v) {
    Jet term = r.var(offset + v);
    Jet sum = term;
    int k = 1;
    for (;; ++k) {
      term = apply_derivation(xi, offset, term).scaled(F.from_rational(mpq_class(1, k)));
      if (term.is_zero()) break;
      if (k > series_bound(r)) throw Error(ErrorCode::Domain, "vector field is not order-raising; exp does not terminate");
      sum = sum + term;
    }
    out.push_back(sum);
  }
  return out;
}

std::vector<Jet> log_automorphism(const std::vector<Jet>& phi, std::size_t offset) {
  const JetRing& r = phi[0].ring();
  std::vector<Jet> xi;
  for (std::size_t v = 0; v < phi.size(); ++v) xi.push_back(phi[v] - r.var(offset + v));
  int bound = 2 * series_bound(r) + 2;
  for (int it = 0; it < bound; ++it) {
    std::vector<Jet> e;
    try {
      e = exp_derivation(xi, offset);
    } catch (const Error&) {
      throw Error(ErrorCode::Domain, "log requires an element of level >= 1");
    }
    bool done = true;
    for (std::size_t v = 0; v < phi.size(); ++v) {
      Jet d = phi[v] - e[v];
      if (!d.is_zero()) {
        done = false;
        xi[v] = xi[v] + d;
      }
    }
    if (done) return xi;
  }
  throw Error(ErrorCode::Domain, "log requires an element of level >= 1");
}

std::vector<Jet> mat_mul(const std::vector<Jet>& a, const std::vector<Jet>& b, std::size_t m) {
  std::vector<Jet> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Jet s = a[0].ring().zero();
      for (std::size_t k = 0; k < m; ++k) s = s + a[i * m + k] * b[k * m + j];
      out.push_back(s);
    }
  return out;
}

std::vector<Jet> rebased(const std::vector<Jet>& v, const JetRing& r) {
  std::vector<Jet> out;
  for (auto& j : v) out.push_back(j.rebase(r));
  return out;
}

// ---- generator families ----------------------------------------------------

enum class Part { Right, Matrix, Left, Contact };

struct Generator {
  Part part;
  std::size_t comp;  // component (or matrix row)
  std::size_t col;   // matrix column
  std::size_t mono;  // monomial index in the part's ring
  TangentVector v;
};

struct Family {
  std::vector<Generator> gens;
  // Each final vector is a combination of generators; empty = the generators.
  std::vector<Vec> combos;
  bool identity = true;
};

struct LevelSpaces {
  const Filtration& filt;
  std::map<std::pair<int, std::size_t>, SubspaceBasis> cache;
  const SubspaceBasis& get(int d, std::size_t m) {
    auto key = std::make_pair(d, m);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, filt.level_space(d, m)).first;
    return it->second;
  }
};

/// Kernel-restricts a family by linear conditions on its generators.
void restrict_family(Family& fam, std::size_t first, const Field& F,
                     const std::function<Vec(const TangentVector&)>& cond) {
  std::size_t count = fam.gens.size() - first;
  if (count == 0) return;
  std::vector<Vec> conds;
  for (std::size_t i = first; i < fam.gens.size(); ++i) conds.push_back(cond(fam.gens[i].v));
  if (conds[0].empty()) {
    for (std::size_t i = first; i < fam.gens.size(); ++i) {
      Vec c = zero_vec(F, 0);
      fam.combos.push_back({});
      fam.combos.back().push_back(F.one());
      fam.combos.back().insert(fam.combos.back().begin(), i, F.zero());
    }
    return;
  }
  for (auto& rel : kernel(F, conds[0].size(), conds)) {
    Vec c(first, F.zero());
    c.insert(c.end(), rel.begin(), rel.end());
    fam.combos.push_back(std::move(c));
  }
}

Family build_family(GroupKind kind, const JetRing& X, const JetRing& Y, int j, const Filtration& filt) {
  Family fam;
  fam.identity = false;
  const Field& F = X.field();
  std::size_t n = X.nvars(), m = Y.nvars();
  TangentVector zero = TangentVector::zero(kind, X, Y);
  LevelSpaces ls{filt, {}};
  std::optional<PowerShifts> shifts;
  if (j >= 1 && (has_left(kind) || has_contact(kind))) shifts.emplace(filt);

  std::vector<std::pair<std::size_t, int>> betas;  // monomial, order
  if (j >= 1)
    for (std::size_t b = 0; b < X.dim(); ++b) {
      Jet xb = X.monomial_jet(b, F.one());
      if (xb.is_zero()) continue;
      int ob = filt.order_of({xb});
      if (ob != kInfinity) betas.emplace_back(b, ob);
    }

  if (has_right(kind)) {
    std::size_t first = fam.gens.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < X.dim(); ++a) {
        Jet mono = X.monomial_jet(a, F.one());
        if (mono.is_zero()) continue;
        TangentVector v = zero;
        v.right[i] = mono;
        fam.gens.push_back({Part::Right, i, 0, a, v});
      }
    JetRing Xf = free_ring(X);
    restrict_family(fam, first, F, [&](const TangentVector& v) {
      Vec out;
      for (auto& [b, ob] : betas) {
        Jet r = apply_derivation(v.right, 0, X.monomial_jet(b, F.one()));
        Vec res = ls.get(ob + j, 1).reduce(r.coeffs());
        out.insert(out.end(), res.begin(), res.end());
      }
      for (auto& q : X.ideal_generators()) {
        Jet r = X.zero();
        for (std::size_t i = 0; i < n; ++i) r = r + v.right[i] * q.derivative(i).rebase(X);
        out.insert(out.end(), r.coeffs().begin(), r.coeffs().end());
      }
      return out;
    });
  }
  if (has_matrix(kind)) {
    std::size_t first = fam.gens.size();
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t a = 0; a < X.dim(); ++a) {
          Jet mono = X.monomial_jet(a, F.one());
          if (mono.is_zero()) continue;
          TangentVector v = zero;
          v.matrix[r * m + k] = mono;
          fam.gens.push_back({Part::Matrix, r, k, a, v});
        }
    restrict_family(fam, first, F, [&](const TangentVector& v) {
      Vec out;
      for (std::size_t k = 0; k < m; ++k)
        for (auto& [b, ob] : betas) {
          Jet xb = X.monomial_jet(b, F.one());
          std::vector<Jet> col;
          for (std::size_t r = 0; r < m; ++r) col.push_back(v.matrix[r * m + k] * xb);
          Vec res = ls.get(ob + j, m).reduce(stack(col));
          out.insert(out.end(), res.begin(), res.end());
        }
      return out;
    });
  }
  if (has_left(kind)) {
    std::size_t first = fam.gens.size();
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < Y.dim(); ++a) {
        Jet mono = Y.monomial_jet(a, F.one());
        if (mono.is_zero()) continue;
        if (j >= 1) {
          const Exponent& e = Y.monomial(a);
          int b = 0;
          for (std::size_t v = 0; v < m; ++v) b += e[v];
          if (b == 0) continue;
          Exponent me(n + X.ntvars(), 0);
          for (std::size_t t = 0; t < X.ntvars(); ++t) me[n + t] = e[m + t];
          std::size_t mult = X.index_of(me);
          if (mult != JetRing::npos && shifts->shift(mult, b) < j) continue;
        }
        TangentVector v = zero;
        v.left[k] = mono;
        fam.gens.push_back({Part::Left, k, 0, a, v});
      }
    restrict_family(fam, first, F, [&](const TangentVector& v) {
      Vec out;
      for (auto& q : Y.ideal_generators()) {
        Jet r = Y.zero();
        for (std::size_t k = 0; k < m; ++k) r = r + v.left[k] * q.derivative(k).rebase(Y);
        out.insert(out.end(), r.coeffs().begin(), r.coeffs().end());
      }
      return out;
    });
  }
  if (has_contact(kind)) {
    const JetRing& XY = zero.xy;
    std::size_t first = fam.gens.size();
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < XY.dim(); ++a) {
        const Exponent& e = XY.monomial(a);
        int b = 0;
        for (std::size_t v = 0; v < m; ++v) b += e[n + v];
        if (b == 0) continue;
        Jet mono = XY.monomial_jet(a, F.one());
        if (mono.is_zero()) continue;
        if (j >= 1) {
          Exponent me(n + X.ntvars(), 0);
          for (std::size_t v = 0; v < n; ++v) me[v] = e[v];
          for (std::size_t t = 0; t < X.ntvars(); ++t) me[n + t] = e[n + m + t];
          std::size_t mult = X.index_of(me);
          if (mult != JetRing::npos && shifts->shift(mult, b) < j) continue;
        }
        TangentVector v = zero;
        v.contact[k] = mono;
        fam.gens.push_back({Part::Contact, k, 0, a, v});
      }
    std::optional<JetRing> full;
    std::vector<Jet> qlift;
    if (!Y.ideal_generators().empty()) {
      JetRing fr = free_ring(XY);
      std::vector<Jet> gens;
      for (auto& g : X.ideal_generators()) gens.push_back(lift(g, fr, 0));
      for (auto& g : Y.ideal_generators()) {
        gens.push_back(lift(g, fr, n));
        qlift.push_back(gens.back());
      }
      full = fr.with_ideal(gens);
    }
    restrict_family(fam, first, F, [&](const TangentVector& v) {
      Vec out;
      for (auto& q : qlift) {
        Jet r = full->zero();
        for (std::size_t k = 0; k < m; ++k) r = r + v.contact[k].rebase(*full) * q.derivative(n + k).rebase(*full);
        out.insert(out.end(), r.coeffs().begin(), r.coeffs().end());
      }
      return out;
    });
  }
  return fam;
}

TangentVector combine(const Family& fam, const Vec& c, const TangentVector& zero) {
  TangentVector v = zero;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) v = v + fam.gens[i].v.scaled(c[i]);
  return v;
}

/// Images of monomial generators, sharing the powers of f.
class ImageCache {
 public:
  ImageCache(const MapGerm& f, const JetRing& xy) : f_(f), xy_(xy) {
    const JetRing& X = f.source();
    for (std::size_t i = 0; i < X.nvars(); ++i) {
      std::vector<Jet> d;
      for (auto& c : f.comps()) d.push_back(c.derivative(i));
      df_.push_back(std::move(d));
    }
  }

  Vec image(const Generator& g) {
    const JetRing& X = f_.source();
    std::size_t m = f_.m();
    std::vector<Jet> out(m, X.zero());
    Jet mono;
    switch (g.part) {
      case Part::Right:
        mono = g.v.right[g.comp];
        for (std::size_t k = 0; k < m; ++k) out[k] = -(mono * df_[g.comp][k]);
        break;
      case Part::Matrix:
        out[g.comp] = g.v.matrix[g.comp * m + g.col] * f_.comps()[g.col];
        break;
      case Part::Left:
        out[g.comp] = power(f_.target(), g.mono, ycache_, 0);
        break;
      case Part::Contact:
        out[g.comp] = power(xy_, g.mono, xycache_, X.nvars());
        break;
    }
    return stack(out);
  }

 private:
  // Image of a monomial of `ring` under x -> x, y -> f, t -> t, where the y
  // variables start at `yoff` (0 for the target ring).
  Jet power(const JetRing& ring, std::size_t idx, std::map<std::size_t, Jet>& cache, std::size_t yoff) {
    auto it = cache.find(idx);
    if (it != cache.end()) return it->second;
    const JetRing& X = f_.source();
    Exponent e = ring.monomial(idx);
    std::size_t v = 0;
    while (v < e.size() && e[v] == 0) ++v;
    Jet result;
    if (v == e.size()) {
      result = X.one();
    } else {
      e[v] -= 1;
      Jet prev = power(ring, ring.index_of(e), cache, yoff);
      std::size_t ny = f_.m();
      Jet factor;
      if (v < yoff)
        factor = X.var(v);
      else if (v < yoff + ny)
        factor = f_.comps()[v - yoff];
      else
        factor = X.tvar(v - yoff - ny);
      result = prev * factor;
    }
    cache.emplace(idx, result);
    return result;
  }

  const MapGerm& f_;
  JetRing xy_;
  std::vector<std::vector<Jet>> df_;
  std::map<std::size_t, Jet> ycache_, xycache_;
};

Filtration filtration_on(const Filtration& filt, const JetRing& X) {
  return filt.ring() == X ? filt : filt.on(X);
}

}  // namespace

// ---- TangentVector ------------------------------------------------------------------

TangentVector TangentVector::zero(GroupKind kind, const JetRing& source, const JetRing& target) {
  TangentVector v;
  v.kind = kind;
  v.source = source;
  v.target = target;
  v.xy = product_ring(source, target);
  std::size_t n = source.nvars(), m = target.nvars();
  v.right = zeros(source, n);
  v.left = zeros(target, m);
  v.matrix = zeros(source, m * m);
  v.contact = zeros(v.xy, m);
  return v;
}

TangentVector TangentVector::operator+(const TangentVector& o) const {
  if (o.kind != kind) throw Error(ErrorCode::Mismatch, "adding tangent vectors of different groups");
  TangentVector v = *this;
  v.right = add_all(right, o.right);
  v.left = add_all(left, o.left);
  v.matrix = add_all(matrix, o.matrix);
  v.contact = add_all(contact, o.contact);
  return v;
}

TangentVector TangentVector::scaled(const FieldElem& c) const {
  TangentVector v = *this;
  v.right = scale_all(right, c);
  v.left = scale_all(left, c);
  v.matrix = scale_all(matrix, c);
  v.contact = scale_all(contact, c);
  return v;
}

bool TangentVector::is_zero() const {
  return all_zero(right) && all_zero(left) && all_zero(matrix) && all_zero(contact);
}

bool TangentVector::operator==(const TangentVector& o) const {
  return kind == o.kind && right == o.right && left == o.left && matrix == o.matrix && contact == o.contact;
}

Vec TangentVector::coeffs() const {
  Vec v = stack(right);
  for (auto* part : {&left, &matrix, &contact}) {
    Vec p = stack(*part);
    v.insert(v.end(), p.begin(), p.end());
  }
  return v;
}

std::string TangentVector::to_string() const {
  std::string out;
  auto add = [&](const std::string& s) {
    if (out.empty())
      out = s;
    else if (s[0] == '-')
      out += " - " + s.substr(1);
    else
      out += " + " + s;
  };
  auto coeff = [](const Jet& j) {
    std::string s = j.to_string();
    return j.terms().size() > 1 ? "(" + s + ")" : s;
  };
  if (has_right(kind))
    for (std::size_t i = 0; i < right.size(); ++i)
      if (!right[i].is_zero()) add(coeff(right[i]) + " d/d" + source.vars()[i]);
  if (has_left(kind))
    for (std::size_t i = 0; i < left.size(); ++i)
      if (!left[i].is_zero()) add(coeff(left[i]) + " d/d" + target.vars()[i]);
  if (has_contact(kind))
    for (std::size_t i = 0; i < contact.size(); ++i)
      if (!contact[i].is_zero()) add(coeff(contact[i]) + " d/d" + xy.vars()[source.nvars() + i]);
  if (has_matrix(kind) && !all_zero(matrix)) {
    std::string s = "[";
    for (std::size_t i = 0; i < matrix.size(); ++i) s += (i ? ", " : "") + matrix[i].to_string();
    add("matrix " + s + "]");
  }
  return out.empty() ? "0" : out;
}

TangentVector TangentVector::base_change(const Extension& ext) const {
  TangentVector v;
  v.kind = kind;
  v.source = source.over(ext.top());
  v.target = target.over(ext.top());
  v.xy = xy.over(ext.top());
  auto bc = [&](const std::vector<Jet>& a, const JetRing& r) {
    std::vector<Jet> out;
    for (auto& j : a) out.push_back(j.base_change(r, ext));
    return out;
  };
  v.right = bc(right, v.source);
  v.left = bc(left, v.target);
  v.matrix = bc(matrix, v.source);
  v.contact = bc(contact, v.xy);
  return v;
}

std::optional<TangentVector> TangentVector::descend(const Extension& ext, const JetRing& s, const JetRing& t) const {
  TangentVector v = zero(kind, s, t);
  auto dc = [&](const std::vector<Jet>& a, const JetRing& r, std::vector<Jet>& out) {
    out.clear();
    for (auto& j : a) {
      auto d = j.descend(r, ext);
      if (!d) return false;
      out.push_back(*d);
    }
    return true;
  };
  if (!dc(right, v.source, v.right) || !dc(left, v.target, v.left) || !dc(matrix, v.source, v.matrix) ||
      !dc(contact, v.xy, v.contact))
    return std::nullopt;
  return v;
}

// ---- images and levels ---------------------------------------------------------------

Vec tangent_image(const TangentVector& xi, const MapGerm& f) {
  if (!(xi.source == f.source()) || !(xi.target == f.target()))
    throw Error(ErrorCode::Mismatch, "tangent vector and map live on different spaces");
  const JetRing& X = f.source();
  std::size_t n = X.nvars(), m = f.m();
  std::vector<Jet> out(m, X.zero());
  if (has_right(xi.kind))
    for (std::size_t k = 0; k < m; ++k) out[k] = out[k] - apply_derivation(xi.right, 0, f.comps()[k]);
  if (has_matrix(xi.kind))
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t k = 0; k < m; ++k) out[r] = out[r] + xi.matrix[r * m + k] * f.comps()[k];
  if (has_left(xi.kind))
    for (std::size_t k = 0; k < m; ++k)
      if (!xi.left[k].is_zero()) out[k] = out[k] + xi.left[k].substitute(f.comps());
  if (has_contact(xi.kind)) {
    std::vector<Jet> args = ring_variables(X, 0, n);
    args.insert(args.end(), f.comps().begin(), f.comps().end());
    for (std::size_t k = 0; k < m; ++k)
      if (!xi.contact[k].is_zero()) out[k] = out[k] + xi.contact[k].substitute(args);
  }
  return stack(out);
}

int vector_level(const TangentVector& xi, const Filtration& filt_in) {
  const JetRing& X = xi.source;
  Filtration filt = filtration_on(filt_in, X);
  const Field& F = X.field();
  std::size_t n = X.nvars(), m = xi.target.nvars();
  int level = kInfinity;
  if (has_right(xi.kind) && !all_zero(xi.right))
    for (std::size_t b = 0; b < X.dim(); ++b) {
      Jet xb = X.monomial_jet(b, F.one());
      if (xb.is_zero()) continue;
      Jet r = apply_derivation(xi.right, 0, xb);
      if (r.is_zero()) continue;
      level = std::min(level, filt.order_of({r}) - filt.order_of({xb}));
    }
  if (has_matrix(xi.kind) && !all_zero(xi.matrix))
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t b = 0; b < X.dim(); ++b) {
        Jet xb = X.monomial_jet(b, F.one());
        if (xb.is_zero()) continue;
        std::vector<Jet> col;
        for (std::size_t r = 0; r < m; ++r) col.push_back(xi.matrix[r * m + k] * xb);
        if (all_zero(col)) continue;
        level = std::min(level, filt.order_of(col) - filt.order_of({xb}));
      }
  if ((has_left(xi.kind) && !all_zero(xi.left)) || (has_contact(xi.kind) && !all_zero(xi.contact))) {
    PowerShifts shifts(filt);
    auto term_shift = [&](const Exponent& e, std::size_t xoff_count, std::size_t yoff) {
      int b = 0;
      for (std::size_t v = 0; v < m; ++v) b += e[yoff + v];
      if (b == 0) return -1;
      Exponent me(n + X.ntvars(), 0);
      for (std::size_t v = 0; v < xoff_count; ++v) me[v] = e[v];
      for (std::size_t t = 0; t < X.ntvars(); ++t) me[n + t] = e[yoff + m + t];
      std::size_t mult = X.index_of(me);
      if (mult == JetRing::npos) return kInfinity;
      return shifts.shift(mult, b);
    };
    if (has_left(xi.kind))
      for (auto& c : xi.left)
        for (std::size_t i = 0; i < c.coeffs().size(); ++i)
          if (!c.coeff(i).is_zero()) level = std::min(level, term_shift(xi.target.monomial(i), 0, 0));
    if (has_contact(xi.kind))
      for (auto& c : xi.contact)
        for (std::size_t i = 0; i < c.coeffs().size(); ++i)
          if (!c.coeff(i).is_zero()) level = std::min(level, term_shift(xi.xy.monomial(i), n, n));
  }
  if (level < 0) return -1;
  return std::min(level, filt.max_level());
}

// ---- tangent spaces ---------------------------------------------------------------------

std::vector<TangentVector> filtered_vectors(GroupKind kind, const JetRing& source, const JetRing& target, int j,
                                            const Filtration& filt) {
  if (has_matrix(kind) && target.has_ideal())
    throw Error(ErrorCode::Unsupported, "Klin requires a smooth target (use C or K)");
  Filtration fl = filtration_on(filt, source);
  Family fam = build_family(kind, source, target, j, fl);
  TangentVector zero = TangentVector::zero(kind, source, target);
  std::vector<TangentVector> out;
  for (auto& c : fam.combos) out.push_back(combine(fam, c, zero));
  return out;
}

TangentSpace tangent_space(GroupKind kind, const MapGerm& f, int j, const Filtration& filt) {
  if (j < 0) throw Error(ErrorCode::Domain, "level must be >= 0");
  if (has_matrix(kind) && f.target().has_ideal())
    throw Error(ErrorCode::Unsupported, "Klin requires a smooth target (use C or K)");
  const JetRing& X = f.source();
  Filtration fl = filtration_on(filt, X);
  Family fam = build_family(kind, X, f.target(), j, fl);
  TangentVector zero = TangentVector::zero(kind, X, f.target());
  ImageCache cache(f, zero.xy);
  std::vector<Vec> gen_images;
  for (auto& g : fam.gens) gen_images.push_back(cache.image(g));
  const Field& F = X.field();
  std::size_t dim = X.dim() * f.m();
  TangentSpace ts;
  ts.basis = SubspaceBasis(F, dim);
  for (auto& c : fam.combos) {
    Vec img = zero_vec(F, dim);
    for (std::size_t i = 0; i < c.size(); ++i) axpy(img, c[i], gen_images[i]);
    ts.vectors.push_back(combine(fam, c, zero));
    ts.basis.add(img);
    ts.images.push_back(std::move(img));
  }
  return ts;
}

DerLog der_log(const JetRing& space) {
  Filtration filt = Filtration::madic(space);
  auto vecs = filtered_vectors(GroupKind::R, space, space, 0, filt);
  DerLog out;
  std::size_t n = space.nvars();
  out.basis = SubspaceBasis(space.field(), n * space.dim());
  for (auto& v : vecs) out.basis.add(stack(v.right));
  TangentVector zero = TangentVector::zero(GroupKind::R, space, space);
  for (auto& row : out.basis.rows()) {
    TangentVector v = zero;
    v.right = unstack(space, row, n);
    out.vectors.push_back(v);
  }
  return out;
}

// ---- exp / log ------------------------------------------------------------------------

GroupElement exp_vf(const TangentVector& xi) {
  const JetRing& X = xi.source;
  const JetRing& Y = xi.target;
  require_char0(X.field());
  std::size_t n = X.nvars(), m = Y.nvars();
  std::vector<Jet> phi, psi, mat, contact;
  if (has_right(xi.kind)) phi = exp_derivation(rebased(xi.right, free_ring(X)), 0);
  if (has_left(xi.kind)) psi = exp_derivation(rebased(xi.left, free_ring(Y)), 0);
  if (has_matrix(xi.kind)) {
    std::vector<Jet> term, sum;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) term.push_back(i == k ? X.one() : X.zero());
    sum = term;
    for (int k = 1;; ++k) {
      term = scale_all(mat_mul(term, xi.matrix, m), X.field().from_rational(mpq_class(1, k)));
      if (all_zero(term)) break;
      if (k > series_bound(X)) throw Error(ErrorCode::Domain, "matrix is not nilpotent; exp does not terminate");
      sum = add_all(sum, term);
    }
    mat = sum;
  }
  if (has_contact(xi.kind)) {
    JetRing fr = free_ring(xi.xy);
    contact = exp_derivation(rebased(xi.contact, fr), n);
  }
  return GroupElement::make(xi.kind, X, Y, phi, psi, mat, contact);
}

TangentVector log_aut(const GroupElement& g) {
  const JetRing& X = g.source();
  const JetRing& Y = g.target();
  require_char0(X.field());
  std::size_t n = X.nvars(), m = Y.nvars();
  TangentVector xi = TangentVector::zero(g.kind(), X, Y);
  if (has_right(g.kind())) xi.right = rebased(log_automorphism(rebased(g.phi(), free_ring(X)), 0), X);
  if (has_left(g.kind())) xi.left = rebased(log_automorphism(rebased(g.psi(), free_ring(Y)), 0), Y);
  if (has_matrix(g.kind())) {
    std::vector<Jet> B = g.matrix();
    for (std::size_t i = 0; i < m; ++i) B[i * m + i] = B[i * m + i] - X.one();
    std::vector<Jet> power = B, sum = B;
    for (int k = 2;; ++k) {
      power = mat_mul(power, B, m);
      if (all_zero(power)) break;
      if (k > series_bound(X)) throw Error(ErrorCode::Domain, "log requires an element of level >= 1");
      FieldElem c = X.field().from_rational(mpq_class(k % 2 == 0 ? -1 : 1, k));
      sum = add_all(sum, scale_all(power, c));
    }
    xi.matrix = sum;
  }
  if (has_contact(g.kind())) {
    JetRing fr = free_ring(g.xy());
    xi.contact = rebased(log_automorphism(rebased(g.contact(), fr), n), g.xy());
  }
  return xi;
}

// ---- Artin-Rees --------------------------------------------------------------------------

ArtinReesResult artin_rees_bound(GroupKind kind, const MapGerm& f, int j, const Filtration& filt_in) {
  Filtration filt = filtration_on(filt_in, f.source());
  if (kind == GroupKind::LR && filt.order_of(f.comps()) < 1)
    throw Error(ErrorCode::Domain, "LR bound requires f in I * R^m (order >= 1)");
  ArtinReesResult res;
  res.full = tangent_space(kind, f, 0, filt).basis;
  res.filtered = tangent_space(kind, f, j, filt).basis;
  int N = f.source().jet_order();
  for (int d = 1; d <= N + 1; ++d) {
    SubspaceBasis inter = res.full.intersect(filt.level_space(d, f.m()));
    if (res.filtered.contains(inter)) {
      res.d = d;
      res.intersection = inter;
      return res;
    }
  }
  return res;
}

}  // namespace germ
