#include "germ/polysys.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"

namespace germ {

namespace {

// ---- unknown layout ------------------------------------------------------------

std::string exps_suffix(const Exponent& e) {
  bool wide = false;
  for (int v : e)
    if (v > 9) wide = true;
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (wide && i) s += "_";
    s += std::to_string(e[i]);
  }
  return s;
}

bool is_pivot(const JetRing& r, std::size_t i) {
  if (!r.has_ideal()) return false;
  const auto& p = r.ideal_span().pivots();
  return std::find(p.begin(), p.end(), i) != p.end();
}

int ydeg(const Exponent& e, std::size_t off, std::size_t m) {
  int b = 0;
  for (std::size_t k = 0; k < m; ++k) b += e[off + k];
  return b;
}

struct Layout {
  GroupKind kind;
  JetRing X, Y, XY;
  std::vector<UnknownInfo> slots;
  std::vector<std::string> names;
};

Layout make_layout(GroupKind kind, const JetRing& X, const JetRing& Y) {
  Layout L{kind, X, Y, product_ring(X, Y), {}, {}};
  std::size_t n = X.nvars(), m = Y.nvars();
  if (has_right(kind)) {
    bool simple = n == 1 && X.ntvars() == 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < X.dim(); ++a) {
        if (X.x_degree(a) < 1 || is_pivot(X, a)) continue;
        L.slots.push_back({UnknownRole::Right, i, a});
        L.names.push_back(simple ? "a" + std::to_string(X.x_degree(a))
                                 : "a" + std::to_string(i + 1) + "_" + exps_suffix(X.monomial(a)));
      }
  }
  if (has_left(kind)) {
    bool simple = m == 1 && Y.ntvars() == 0;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < Y.dim(); ++a) {
        if (Y.x_degree(a) < 1 || is_pivot(Y, a)) continue;
        L.slots.push_back({UnknownRole::Left, k, a});
        L.names.push_back(simple ? "b" + std::to_string(Y.x_degree(a))
                                 : "b" + std::to_string(k + 1) + "_" + exps_suffix(Y.monomial(a)));
      }
  }
  if (has_matrix(kind))
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t a = 0; a < X.dim(); ++a) {
          if (is_pivot(X, a)) continue;
          L.slots.push_back({UnknownRole::Matrix, r * m + c, a});
          L.names.push_back("m" + std::to_string(r + 1) + std::to_string(c + 1) + "_" + exps_suffix(X.monomial(a)));
        }
  if (has_contact(kind))
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < L.XY.dim(); ++a) {
        if (ydeg(L.XY.monomial(a), n, m) < 1 || is_pivot(L.XY, a)) continue;
        L.slots.push_back({UnknownRole::Contact, k, a});
        L.names.push_back("c" + std::to_string(k + 1) + "_" + exps_suffix(L.XY.monomial(a)));
      }
  return L;
}

/// Group element in act convention from slot values in `field`.
GroupElement build_element(const Layout& L, const std::vector<FieldElem>& values, const Field& field) {
  JetRing X = L.X.over(field), Y = L.Y.over(field), XY = L.XY.over(field);
  std::size_t n = X.nvars(), m = Y.nvars();
  Vec phi = zero_vec(field, X.dim() * n), psi = zero_vec(field, Y.dim() * m);
  Vec mat = zero_vec(field, X.dim() * m * m), con = zero_vec(field, XY.dim() * m);
  for (std::size_t s = 0; s < L.slots.size(); ++s) {
    const UnknownInfo& u = L.slots[s];
    FieldElem v = field.coerce(values[s]);
    switch (u.role) {
      case UnknownRole::Right: phi[u.comp * X.dim() + u.mono] = v; break;
      case UnknownRole::Left: psi[u.comp * Y.dim() + u.mono] = v; break;
      case UnknownRole::Matrix: mat[u.comp * X.dim() + u.mono] = v; break;
      case UnknownRole::Contact: con[u.comp * XY.dim() + u.mono] = v; break;
      case UnknownRole::Inverse: break;
    }
  }
  GroupKind kind = L.kind;
  std::vector<Jet> Phi = has_right(kind) ? unstack(X, phi, n) : std::vector<Jet>{};
  std::vector<Jet> Psi = has_left(kind) ? unstack(Y, psi, m) : std::vector<Jet>{};
  std::vector<Jet> Mp = has_matrix(kind) ? unstack(X, mat, m * m) : std::vector<Jet>{};
  std::vector<Jet> Cp = has_contact(kind) ? unstack(XY, con, m) : std::vector<Jet>{};
  std::vector<Jet> phi_inv;
  if (kind == GroupKind::Klin || kind == GroupKind::K) {
    GroupElement gr = GroupElement::make(GroupKind::R, X, X, Phi);
    phi_inv = gr.phi_inverse();
  }
  if (kind == GroupKind::Klin) {
    std::vector<Jet> M;
    for (auto& e : Mp) M.push_back(e.substitute(phi_inv));
    return GroupElement::make(kind, X, Y, Phi, {}, M);
  }
  if (kind == GroupKind::K) {
    std::vector<Jet> args;
    for (auto& p : phi_inv) args.push_back(lift(p, XY, 0));
    for (std::size_t k = 0; k < m; ++k) args.push_back(XY.var(n + k));
    std::vector<Jet> C;
    for (auto& c : Cp) C.push_back(c.substitute(args));
    return GroupElement::make(kind, X, Y, Phi, {}, {}, C);
  }
  return GroupElement::make(kind, X, Y, Phi, Psi, Mp, Cp);
}

// ---- polynomial-coefficient jets ------------------------------------------------------

using PVec = std::vector<Poly>;

class PRing {
 public:
  PRing(const JetRing& r, std::size_t nu) : r_(r), F_(r.field()), nu_(nu) {
    if (r.has_ideal())
      for (std::size_t i = 0; i < r.dim(); ++i) nf_.push_back(r.monomial_jet(i, F_.one()).coeffs());
  }
  const JetRing& ring() const { return r_; }
  PVec zero() const { return PVec(r_.dim(), Poly(F_, nu_)); }
  PVec from_jet(const Jet& j) const {
    PVec v = zero();
    for (std::size_t i = 0; i < r_.dim(); ++i)
      if (!j.coeff(i).is_zero()) v[i] = Poly::constant(F_, nu_, j.coeff(i));
    return v;
  }
  PVec mul(const PVec& a, const PVec& b) const {
    PVec out = zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j].is_zero()) continue;
        std::size_t k = r_.product_index(i, j);
        if (k != JetRing::npos) out[k] += a[i] * b[j];
      }
    }
    return normalize(out);
  }
  PVec normalize(const PVec& v) const {
    if (nf_.empty()) return v;
    PVec out = zero();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      for (std::size_t k = 0; k < nf_[i].size(); ++k)
        if (!nf_[i][k].is_zero()) out[k] += v[i].scaled(nf_[i][k]);
    }
    return out;
  }
  /// Image of the monomial `idx` of `src` under variable v -> images[v]
  /// (images cover the variables then the t parameters of src).
  PVec power(const JetRing& src, std::size_t idx, const std::vector<PVec>& images, std::map<std::size_t, PVec>& cache) const {
    auto it = cache.find(idx);
    if (it != cache.end()) return it->second;
    Exponent e = src.monomial(idx);
    std::size_t v = 0;
    while (v < e.size() && e[v] == 0) ++v;
    PVec result;
    if (v == e.size()) {
      result = from_jet(r_.one());
    } else {
      e[v] -= 1;
      result = mul(power(src, src.index_of(e), images, cache), images[v]);
    }
    cache.emplace(idx, result);
    return result;
  }
  /// Substitution of images into a scalar jet of `src`.
  PVec substitute(const Jet& j, const std::vector<PVec>& images, std::map<std::size_t, PVec>& cache) const {
    PVec out = zero();
    for (std::size_t i = 0; i < j.coeffs().size(); ++i) {
      if (j.coeff(i).is_zero()) continue;
      PVec p = power(j.ring(), i, images, cache);
      for (std::size_t k = 0; k < p.size(); ++k)
        if (!p[k].is_zero()) out[k] += p[k].scaled(j.coeff(i));
    }
    return out;
  }

 private:
  JetRing r_;
  Field F_;
  std::size_t nu_;
  std::vector<Vec> nf_;
};

void add_scaled(PVec& out, const Poly& u, const Vec& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) out[i] += u.scaled(c[i]);
}

Poly det(const std::vector<std::vector<Poly>>& a) {
  std::size_t n = a.size();
  if (n == 1) return a[0][0];
  Poly s = a[0][0] - a[0][0];
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    Poly t = a[0][c] * det(minor);
    if (c % 2) s -= t;
    else s += t;
  }
  return s;
}

}  // namespace

std::size_t PolySystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < unknowns.size(); ++i)
    if (unknowns[i] == name) return i;
  throw Error(ErrorCode::Semantic, "unknown '" + name + "' is not declared");
}

PolySystem compile_system(const MapGerm& f, const MapGerm& ftilde, GroupKind kind, std::optional<int> level,
                          std::optional<Filtration> filt_opt) {
  const JetRing& X = f.source();
  const JetRing& Y = f.target();
  if (!(ftilde.source() == X) || !(ftilde.target() == Y))
    throw Error(ErrorCode::Mismatch, "f and ftilde live on different spaces");
  if (has_matrix(kind) && Y.has_ideal()) throw Error(ErrorCode::Unsupported, "Klin requires a smooth target (use C or K)");
  const Field& F = X.field();
  std::size_t n = X.nvars(), m = Y.nvars();
  Layout L = make_layout(kind, X, Y);

  PolySystem S;
  S.field = F;
  S.kind = kind;
  S.source = X;
  S.target = Y;
  S.unknowns = L.names;
  S.roles = L.slots;
  // Invertibility unknowns.
  std::vector<std::string> zs;
  if (has_right(kind)) zs.push_back("zx");
  if (has_left(kind)) zs.push_back("zy");
  if (has_matrix(kind) || has_contact(kind)) zs.push_back("zm");
  if (zs.size() == 1) zs[0] = "z";
  for (auto& z : zs) {
    S.unknowns.push_back(z);
    S.roles.push_back({UnknownRole::Inverse, 0, 0});
  }
  std::size_t nu = S.unknowns.size();
  auto U = [&](std::size_t s) { return Poly::variable(F, nu, s); };
  std::size_t zi = L.slots.size();

  PRing PX(X, nu);
  auto emit = [&](const Poly& p, const std::string& tag) {
    if (p.is_zero()) return;
    S.equations.push_back(p);
    S.provenance.push_back(tag);
  };
  auto comp_tag = [&](std::size_t k) { return m > 1 ? " of component " + std::to_string(k + 1) : std::string(); };

  // Phi_X as polynomial jets (identity when absent).
  std::vector<PVec> phi_img;
  std::vector<PVec> phi(n, PX.zero());
  if (has_right(kind)) {
    for (std::size_t s = 0; s < L.slots.size(); ++s)
      if (L.slots[s].role == UnknownRole::Right) phi[L.slots[s].comp][L.slots[s].mono] += U(s);
  } else {
    for (std::size_t i = 0; i < n; ++i) phi[i] = PX.from_jet(X.var(i));
  }
  phi_img = phi;
  for (std::size_t t = 0; t < X.ntvars(); ++t) phi_img.push_back(PX.from_jet(X.tvar(t)));
  std::map<std::size_t, PVec> phi_cache;

  // Right-hand side ftilde o Phi_X.
  std::vector<PVec> rhs;
  for (auto& c : ftilde.comps()) rhs.push_back(PX.substitute(c, phi_img, phi_cache));

  // Left-hand side.
  std::vector<PVec> lhs(m, PX.zero());
  if (kind == GroupKind::R) {
    for (std::size_t k = 0; k < m; ++k) lhs[k] = PX.from_jet(f.comps()[k]);
  } else if (has_left(kind)) {
    std::map<std::size_t, Jet> fpow;
    std::function<Jet(std::size_t)> power = [&](std::size_t idx) -> Jet {
      auto it = fpow.find(idx);
      if (it != fpow.end()) return it->second;
      Exponent e = Y.monomial(idx);
      std::size_t v = 0;
      while (v < e.size() && e[v] == 0) ++v;
      Jet r;
      if (v == e.size()) {
        r = X.one();
      } else {
        e[v] -= 1;
        r = power(Y.index_of(e)) * (v < m ? f.comps()[v] : X.tvar(v - m));
      }
      fpow.emplace(idx, r);
      return r;
    };
    for (std::size_t s = 0; s < L.slots.size(); ++s)
      if (L.slots[s].role == UnknownRole::Left) add_scaled(lhs[L.slots[s].comp], U(s), power(L.slots[s].mono).coeffs());
  } else if (has_matrix(kind)) {
    for (std::size_t s = 0; s < L.slots.size(); ++s) {
      const UnknownInfo& u = L.slots[s];
      if (u.role != UnknownRole::Matrix) continue;
      std::size_t r = u.comp / m, c = u.comp % m;
      add_scaled(lhs[r], U(s), (X.monomial_jet(u.mono, F.one()) * f.comps()[c]).coeffs());
    }
  } else if (has_contact(kind)) {
    std::vector<Jet> args = ring_variables(X, 0, n);
    args.insert(args.end(), f.comps().begin(), f.comps().end());
    for (std::size_t s = 0; s < L.slots.size(); ++s) {
      const UnknownInfo& u = L.slots[s];
      if (u.role != UnknownRole::Contact) continue;
      add_scaled(lhs[u.comp], U(s), L.XY.monomial_jet(u.mono, F.one()).substitute(args).coeffs());
    }
  }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < X.dim(); ++i)
      emit(rhs[k][i] - lhs[k][i], "equivalence: " + X.monomial_string(i) + " coefficient" + comp_tag(k));

  // Invertibility.
  auto slot_poly = [&](UnknownRole role, std::size_t comp, std::size_t mono) {
    for (std::size_t s = 0; s < L.slots.size(); ++s)
      if (L.slots[s].role == role && L.slots[s].comp == comp && L.slots[s].mono == mono) return U(s);
    return Poly(F, nu);
  };
  auto unit_index = [](const JetRing& r, std::size_t v) {
    Exponent e(r.nvars() + r.ntvars(), 0);
    if (v != JetRing::npos) e[v] = 1;
    return r.index_of(e);
  };
  Poly one = Poly::constant(F, nu, F.one());
  if (has_right(kind)) {
    std::vector<std::vector<Poly>> a(n, std::vector<Poly>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = slot_poly(UnknownRole::Right, i, unit_index(X, j));
    emit(det(a) * U(zi++) - one, "invertibility of Phi_X");
  }
  if (has_left(kind)) {
    std::vector<std::vector<Poly>> a(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a[i][j] = slot_poly(UnknownRole::Left, i, unit_index(Y, j));
    emit(det(a) * U(zi++) - one, "invertibility of Phi_Y");
  }
  if (has_matrix(kind)) {
    std::vector<std::vector<Poly>> a(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a[i][j] = slot_poly(UnknownRole::Matrix, i * m + j, unit_index(X, JetRing::npos));
    emit(det(a) * U(zi++) - one, "invertibility of the matrix");
  } else if (has_contact(kind)) {
    std::vector<std::vector<Poly>> a(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a[i][j] = slot_poly(UnknownRole::Contact, i, unit_index(L.XY, n + j));
    emit(det(a) * U(zi++) - one, "invertibility of the contact part");
  }

  // Ideal preservation.
  if (has_right(kind))
    for (std::size_t g = 0; g < X.ideal_generators().size(); ++g) {
      PVec img = PX.substitute(X.ideal_generators()[g], phi_img, phi_cache);
      for (std::size_t i = 0; i < X.dim(); ++i)
        emit(img[i], "source ideal generator " + std::to_string(g + 1) + ": " + X.monomial_string(i) + " coefficient");
    }
  if (has_left(kind) && Y.has_ideal()) {
    PRing PY(Y, nu);
    std::vector<PVec> psi(m, PY.zero());
    for (std::size_t s = 0; s < L.slots.size(); ++s)
      if (L.slots[s].role == UnknownRole::Left) psi[L.slots[s].comp][L.slots[s].mono] += U(s);
    for (std::size_t t = 0; t < Y.ntvars(); ++t) psi.push_back(PY.from_jet(Y.tvar(t)));
    std::map<std::size_t, PVec> cache;
    for (std::size_t g = 0; g < Y.ideal_generators().size(); ++g) {
      PVec img = PY.substitute(Y.ideal_generators()[g], psi, cache);
      for (std::size_t i = 0; i < Y.dim(); ++i)
        emit(img[i], "target ideal generator " + std::to_string(g + 1) + ": " + Y.monomial_string(i) + " coefficient");
    }
  }
  if (has_contact(kind) && Y.has_ideal()) {
    JetRing fr = free_ring(L.XY);
    std::vector<Jet> gens;
    for (auto& g : X.ideal_generators()) gens.push_back(lift(g, fr, 0));
    for (auto& g : Y.ideal_generators()) gens.push_back(lift(g, fr, n));
    JetRing full = fr.with_ideal(gens);
    PRing PF(full, nu);
    std::vector<PVec> img;
    for (std::size_t i = 0; i < n; ++i) img.push_back(PF.from_jet(full.var(i)));
    for (std::size_t k = 0; k < m; ++k) {
      PVec c = PF.zero();
      for (std::size_t s = 0; s < L.slots.size(); ++s)
        if (L.slots[s].role == UnknownRole::Contact && L.slots[s].comp == k) c[L.slots[s].mono] += U(s);
      img.push_back(PF.normalize(c));
    }
    for (std::size_t t = 0; t < full.ntvars(); ++t) img.push_back(PF.from_jet(full.tvar(t)));
    std::map<std::size_t, PVec> cache;
    for (std::size_t g = 0; g < Y.ideal_generators().size(); ++g) {
      PVec r = PF.substitute(lift(Y.ideal_generators()[g], fr, n), img, cache);
      for (std::size_t i = 0; i < full.dim(); ++i)
        emit(r[i], "contact preserves target ideal generator " + std::to_string(g + 1) + ": " + full.monomial_string(i) +
                       " coefficient");
    }
  }

  // Level-j congruences.
  if (level && *level >= 1) {
    int j = *level;
    Filtration filt = filt_opt ? (filt_opt->ring() == X ? *filt_opt : filt_opt->on(X)) : Filtration::madic(X);
    auto project = [&](const PVec& v, const SubspaceBasis& q, std::size_t dim, const std::string& tag) {
      PVec out(dim, Poly(F, nu));
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        Vec e = zero_vec(F, dim);
        e[i] = F.one();
        Vec r = q.reduce(e);
        for (std::size_t k = 0; k < dim; ++k)
          if (!r[k].is_zero()) out[k] += v[i].scaled(r[k]);
      }
      for (std::size_t k = 0; k < dim; ++k) emit(out[k], tag);
    };
    for (std::size_t b = 0; b < X.dim(); ++b) {
      Jet xb = X.monomial_jet(b, F.one());
      if (xb.is_zero()) continue;
      int ob = filt.order_of({xb});
      if (ob == kInfinity) continue;
      if (has_right(kind)) {
        PVec img = PX.substitute(xb, phi_img, phi_cache);
        PVec base = PX.from_jet(xb);
        for (std::size_t i = 0; i < img.size(); ++i) img[i] -= base[i];
        project(img, filt.level_space(ob + j, 1), X.dim(), "level " + std::to_string(j) + ": Phi_X on " + X.monomial_string(b));
      }
      if (has_matrix(kind))
        for (std::size_t c = 0; c < m; ++c) {
          PVec col(X.dim() * m, Poly(F, nu));
          for (std::size_t s = 0; s < L.slots.size(); ++s) {
            const UnknownInfo& u = L.slots[s];
            if (u.role != UnknownRole::Matrix || u.comp % m != c) continue;
            Vec prod = (X.monomial_jet(u.mono, F.one()) * xb).coeffs();
            for (std::size_t i = 0; i < prod.size(); ++i)
              if (!prod[i].is_zero()) col[(u.comp / m) * X.dim() + i] += U(s).scaled(prod[i]);
          }
          for (std::size_t i = 0; i < X.dim(); ++i)
            if (!xb.coeff(i).is_zero()) col[c * X.dim() + i] -= Poly::constant(F, nu, xb.coeff(i));
          project(col, filt.level_space(ob + j, m), X.dim() * m,
                  "level " + std::to_string(j) + ": matrix on " + X.monomial_string(b));
        }
    }
    if (has_left(kind) || has_contact(kind)) {
      PowerShifts shifts(filt);
      for (std::size_t s = 0; s < L.slots.size(); ++s) {
        const UnknownInfo& u = L.slots[s];
        if (u.role != UnknownRole::Left && u.role != UnknownRole::Contact) continue;
        const JetRing& R = u.role == UnknownRole::Left ? Y : L.XY;
        std::size_t xoff = u.role == UnknownRole::Left ? 0 : n;
        const Exponent& e = R.monomial(u.mono);
        int b = ydeg(e, xoff, m);
        Exponent me(n + X.ntvars(), 0);
        for (std::size_t v = 0; v < xoff; ++v) me[v] = e[v];
        for (std::size_t t = 0; t < X.ntvars(); ++t) me[n + t] = e[xoff + m + t];
        std::size_t mult = X.index_of(me);
        int sh = mult == JetRing::npos ? kInfinity : shifts.shift(mult, b);
        if (sh >= j) continue;
        bool identity = b == 1 && e[xoff + u.comp] == 1 && mult == 0 && X.monomial(0) == Exponent(n + X.ntvars(), 0);
        emit(identity ? U(s) - one : U(s), "level " + std::to_string(j) + ": " + S.unknowns[s]);
      }
    }
  }
  return S;
}

GroebnerResult groebner_inconsistent(const PolySystem& s, std::size_t spair_cap) {
  return groebner(s.equations, s.unknowns, spair_cap);
}

std::vector<std::vector<FieldElem>> brute_solve(const PolySystem& s, const Field& field, BruteOptions opt) {
  if (!field.is_finite()) throw Error(ErrorCode::Domain, "brute force needs a finite field, got " + field.spec());
  if (s.field.characteristic() != field.characteristic())
    throw Error(ErrorCode::Mismatch, "system over " + s.field.spec() + " cannot be solved over " + field.spec());
  std::uint64_t q = field.size();
  std::size_t u = s.unknowns.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < u; ++i) {
    if (total > opt.cap / q + 1) throw Error(ErrorCode::CapExceeded, "search space exceeds the cap of " + std::to_string(opt.cap));
    total *= q;
  }
  if (total > opt.cap) throw Error(ErrorCode::CapExceeded, "search space " + std::to_string(total) + " exceeds the cap of " + std::to_string(opt.cap));
  std::vector<Poly> eqs;
  for (auto& e : s.equations) eqs.push_back(e.over(field));
  std::vector<FieldElem> elems;
  for (std::uint64_t i = 0; i < q; ++i) elems.push_back(field.element_at(i));

  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, total / 256)));
  std::vector<std::vector<std::uint64_t>> found(threads);
  auto work = [&](unsigned t) {
    std::uint64_t lo = total * t / threads, hi = total * (t + 1) / threads;
    std::vector<FieldElem> point(u);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t r = idx;
      for (std::size_t i = 0; i < u; ++i) {
        point[i] = elems[r % q];
        r /= q;
      }
      bool ok = true;
      for (auto& e : eqs)
        if (!e.evaluate(point).is_zero()) {
          ok = false;
          break;
        }
      if (ok) found[t].push_back(idx);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<std::vector<FieldElem>> out;
  for (auto& part : found)
    for (std::uint64_t idx : part) {
      std::vector<FieldElem> point(u);
      for (std::size_t i = 0; i < u; ++i) {
        point[i] = elems[idx % q];
        idx /= q;
      }
      out.push_back(point);
    }
  return out;
}

GroupElement assemble(const PolySystem& s, const std::vector<FieldElem>& solution) {
  if (!s.kind) throw Error(ErrorCode::Semantic, "system has no group layout to assemble a solution");
  if (solution.size() != s.unknowns.size()) throw Error(ErrorCode::Mismatch, "solution length does not match the unknowns");
  Layout L = make_layout(*s.kind, s.source, s.target);
  Field field = solution.empty() ? s.field : solution[0].field();
  std::vector<FieldElem> values(solution.begin(), solution.begin() + static_cast<std::ptrdiff_t>(L.slots.size()));
  return build_element(L, values, field);
}

std::vector<GroupElement> enumerate_group(GroupKind kind, const JetRing& source, const JetRing& target, std::uint64_t cap) {
  const Field& F = source.field();
  if (!F.is_finite()) throw Error(ErrorCode::Domain, "group enumeration needs a finite field");
  Layout L = make_layout(kind, source, target);
  std::uint64_t q = F.size(), total = 1;
  for (std::size_t i = 0; i < L.slots.size(); ++i) {
    if (total > cap / q) throw Error(ErrorCode::CapExceeded, "jet group exceeds the enumeration cap of " + std::to_string(cap));
    total *= q;
  }
  std::vector<FieldElem> elems;
  for (std::uint64_t i = 0; i < q; ++i) elems.push_back(F.element_at(i));
  std::vector<GroupElement> out;
  std::vector<FieldElem> values(L.slots.size());
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = elems[r % q];
      r /= q;
    }
    try {
      out.push_back(build_element(L, values, F));
    } catch (const Error&) {
    }
  }
  return out;
}

namespace {

std::vector<std::uint64_t> map_key(const MapGerm& f) {
  const Field& F = f.source().field();
  std::vector<std::uint64_t> key;
  for (auto& c : f.vec()) key.push_back(F.index_of(c));
  return key;
}

}  // namespace

OrbitCensus orbit_split(const MapGerm& f, GroupKind kind, const Extension& ext, std::uint64_t cap) {
  const Field& k = ext.base();
  const Field& K = ext.top();
  if (!k.is_finite() || !K.is_finite()) throw Error(ErrorCode::Domain, "orbit splitting needs finite fields");
  if (f.source().field() != k) throw Error(ErrorCode::Mismatch, "map must be defined over the base field " + k.spec());
  const JetRing& X = f.source();
  const JetRing& Y = f.target();
  MapGerm fK = f.base_change(ext);
  OrbitCensus census;

  auto bigG = enumerate_group(kind, fK.source(), fK.target(), cap);
  census.group_size_big = bigG.size();
  std::map<std::vector<std::uint64_t>, MapGerm> big;
  for (auto& g : bigG) {
    MapGerm h = g.act(fK);
    big.emplace(map_key(h), h);
  }
  census.big_orbit_size = big.size();
  std::map<std::vector<std::uint64_t>, MapGerm> rational;
  for (auto& [key, h] : big)
    if (auto d = h.descend(ext, X, Y)) rational.emplace(map_key(*d), *d);
  census.rational_points = rational.size();

  auto smallG = enumerate_group(kind, X, Y, cap);
  census.group_size_small = smallG.size();
  std::set<std::vector<std::uint64_t>> seen;
  for (auto& [key, h] : rational) {
    if (seen.count(key)) continue;
    std::set<std::vector<std::uint64_t>> orbit;
    for (auto& g : smallG) orbit.insert(map_key(g.act(h)));
    for (auto& o : orbit) {
      if (!rational.count(o)) throw Error(ErrorCode::Obstruction, "k-orbit leaves the K-orbit; group enumeration is inconsistent");
      seen.insert(o);
    }
    census.representatives.push_back(h);
    census.sizes.push_back(orbit.size());
  }
  return census;
}

// ---- JSON ----------------------------------------------------------------------------

std::string system_to_json(const PolySystem& s) {
  nlohmann::ordered_json j;
  j["field"] = s.field.spec();
  j["unknowns"] = s.unknowns;
  std::vector<std::string> eqs;
  for (auto& e : s.equations) eqs.push_back(e.to_string(s.unknowns));
  j["equations"] = eqs;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < s.provenance.size(); ++i) prov[std::to_string(i + 1)] = s.provenance[i];
  j["provenance"] = prov;
  return j.dump(2);
}

PolySystem system_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Syntax, std::string("invalid system JSON: ") + e.what());
  }
  PolySystem s;
  try {
    s.field = j.contains("field") ? Field::parse(j["field"].get<std::string>()) : Field::rationals();
    s.unknowns = j.at("unknowns").get<std::vector<std::string>>();
    std::vector<std::string> eqs = j.at("equations").get<std::vector<std::string>>();
    std::map<std::string, std::string> prov;
    if (j.contains("provenance") && j["provenance"].is_object())
      for (auto& [key, v] : j["provenance"].items())
        if (v.is_string()) prov[key] = v.get<std::string>();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      s.equations.push_back(Poly::parse(eqs[i], s.field, s.unknowns));
      auto it = prov.find(std::to_string(i + 1));
      s.provenance.push_back(it == prov.end() ? "equation " + std::to_string(i + 1) : it->second);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Syntax, std::string("invalid system JSON: ") + e.what());
  }
  return s;
}

}  // namespace germ
