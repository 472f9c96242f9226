#include "germ/germs.hpp"

#include <algorithm>

namespace germ {

GroupKind parse_group(std::string_view name) {
  if (name == "R") return GroupKind::R;
  if (name == "L") return GroupKind::L;
  if (name == "LR" || name == "A") return GroupKind::LR;
  if (name == "C") return GroupKind::C;
  if (name == "K") return GroupKind::K;
  if (name == "Klin" || name == "K_lin") return GroupKind::Klin;
  throw Error(ErrorCode::Syntax, "unknown group '" + std::string(name) + "' (expected R, L, LR, C, K or Klin)");
}

std::string group_name(GroupKind g) {
  switch (g) {
    case GroupKind::R: return "R";
    case GroupKind::L: return "L";
    case GroupKind::LR: return "LR";
    case GroupKind::C: return "C";
    case GroupKind::K: return "K";
    case GroupKind::Klin: return "Klin";
  }
  return "?";
}

bool has_right(GroupKind g) {
  return g == GroupKind::R || g == GroupKind::LR || g == GroupKind::K || g == GroupKind::Klin;
}
bool has_left(GroupKind g) { return g == GroupKind::L || g == GroupKind::LR; }
bool has_matrix(GroupKind g) { return g == GroupKind::Klin; }
bool has_contact(GroupKind g) { return g == GroupKind::C || g == GroupKind::K; }

JetRing free_ring(const JetRing& ring) {
  return JetRing(ring.field(), ring.vars(), ring.jet_order(), ring.tvars(), ring.t_order());
}

std::vector<Jet> ring_variables(const JetRing& ring, std::size_t offset, std::size_t count) {
  std::vector<Jet> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(ring.var(offset + i));
  return v;
}

Jet lift(const Jet& j, const JetRing& to, std::size_t offset) {
  return j.substitute(ring_variables(to, offset, j.ring().nvars()));
}

JetRing product_ring(const JetRing& source, const JetRing& target) {
  std::vector<std::string> names = source.vars();
  for (auto& y : target.vars()) {
    std::string n = y;
    while (std::find(names.begin(), names.end(), n) != names.end() ||
           std::find(source.tvars().begin(), source.tvars().end(), n) != source.tvars().end())
      n += "_y";
    names.push_back(n);
  }
  JetRing xy(source.field(), names, source.jet_order(), source.tvars(), source.t_order());
  if (source.ideal_generators().empty()) return xy;
  std::vector<Jet> gens;
  for (auto& g : source.ideal_generators()) gens.push_back(lift(g, xy, 0));
  return xy.with_ideal(gens);
}

namespace {

using Matrix = std::vector<std::vector<FieldElem>>;

std::optional<Matrix> invert_matrix(const Field& F, Matrix a) {
  std::size_t n = a.size();
  Matrix inv(n, std::vector<FieldElem>(n, F.zero()));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = F.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    FieldElem s = a[col][col].inverse();
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] = a[col][k] * s;
      inv[col][k] = inv[col][k] * s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      FieldElem m = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] = a[r][k] - m * a[col][k];
        inv[r][k] = inv[r][k] - m * inv[col][k];
      }
    }
  }
  return inv;
}

/// Coefficients of the pure variables x_offset.. in each component.
Matrix linear_part(const std::vector<Jet>& comps, std::size_t offset, std::size_t count) {
  const JetRing& r = comps[0].ring();
  Matrix L(comps.size(), std::vector<FieldElem>(count, r.field().zero()));
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (std::size_t j = 0; j < count; ++j) {
      Exponent e(r.nvars() + r.ntvars(), 0);
      e[offset + j] = 1;
      L[i][j] = comps[i].coeff(r.index_of(e));
    }
  return L;
}

void check_zero_constant(const std::vector<Jet>& comps, const std::string& what) {
  for (auto& c : comps)
    for (std::size_t i = 0; i < c.coeffs().size(); ++i)
      if (!c.coeff(i).is_zero() && c.ring().x_degree(i) == 0)
        throw Error(ErrorCode::Semantic, what + " component " + c.to_string() + " has nonzero constant term");
}

std::vector<Jet> rebase_all(const std::vector<Jet>& v, const JetRing& r) {
  std::vector<Jet> out;
  for (auto& j : v) out.push_back(j.rebase(r));
  return out;
}

/// Ideal generators of `ring` pulled back along comps must vanish.
void check_preserves(const JetRing& ring, const std::vector<Jet>& comps, const std::string& what) {
  for (auto& q : ring.ideal_generators()) {
    Jet image = q.substitute(comps);
    if (!image.is_zero())
      throw Error(ErrorCode::Semantic, what + " does not preserve the ideal: generator " + q.to_string() +
                                           " maps to residual " + image.to_string());
  }
}

std::vector<Jet> matrix_mul(const std::vector<Jet>& a, const std::vector<Jet>& b, std::size_t m) {
  std::vector<Jet> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Jet s = a[0].ring().zero();
      for (std::size_t k = 0; k < m; ++k) s = s + a[i * m + k] * b[k * m + j];
      out.push_back(s);
    }
  return out;
}

std::vector<Jet> matrix_inverse(const std::vector<Jet>& M, std::size_t m) {
  const JetRing& r = M[0].ring();
  const Field& F = r.field();
  Matrix c0(m, std::vector<FieldElem>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) c0[i][j] = M[i * m + j].coeff(0);
  auto inv0 = invert_matrix(F, c0);
  if (!inv0) throw Error(ErrorCode::Semantic, "matrix has singular constant part");
  std::vector<Jet> A;  // A = M0^-1
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) A.push_back(r.constant((*inv0)[i][j]));
  // M^-1 = sum_k (I - A M)^k A, with I - A M nilpotent.
  std::vector<Jet> AM = matrix_mul(A, M, m);
  std::vector<Jet> Nn;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Nn.push_back((i == j ? r.one() : r.zero()) - AM[i * m + j]);
  std::vector<Jet> sum = A, term = A;
  int bound = r.jet_order() + r.t_order() + 1;
  for (int k = 0; k < bound; ++k) {
    term = matrix_mul(Nn, term, m);
    bool zero = std::all_of(term.begin(), term.end(), [](const Jet& j) { return j.is_zero(); });
    if (zero) break;
    for (std::size_t i = 0; i < m * m; ++i) sum[i] = sum[i] + term[i];
  }
  return sum;
}

}  // namespace

std::vector<Jet> invert_aut(const std::vector<Jet>& phi) {
  if (phi.empty()) return {};
  const JetRing& r = phi[0].ring();
  std::size_t n = phi.size();
  if (n != r.nvars()) throw Error(ErrorCode::Mismatch, "automorphism has wrong number of components");
  auto Linv = invert_matrix(r.field(), linear_part(phi, 0, n));
  if (!Linv) throw Error(ErrorCode::Semantic, "automorphism has singular linear part");
  auto apply_linv = [&](const std::vector<Jet>& v) {
    std::vector<Jet> out;
    for (std::size_t i = 0; i < n; ++i) {
      Jet s = r.zero();
      for (std::size_t j = 0; j < n; ++j)
        if (!(*Linv)[i][j].is_zero()) s = s + v[j].scaled((*Linv)[i][j]);
      out.push_back(s);
    }
    return out;
  };
  std::vector<Jet> x = ring_variables(r, 0, n);
  std::vector<Jet> psi = apply_linv(x);
  int bound = 2 * (r.jet_order() + r.t_order()) + 4;
  for (int it = 0; it < bound; ++it) {
    std::vector<Jet> res;
    bool done = true;
    for (std::size_t i = 0; i < n; ++i) {
      res.push_back(phi[i].substitute(psi) - x[i]);
      if (!res.back().is_zero()) done = false;
    }
    if (done) return psi;
    auto corr = apply_linv(res);
    for (std::size_t i = 0; i < n; ++i) psi[i] = psi[i] - corr[i];
  }
  throw Error(ErrorCode::Domain, "automorphism inversion did not converge");
}

// ---- MapGerm ------------------------------------------------------------------

MapGerm MapGerm::make(const JetRing& source, const JetRing& target, std::vector<Jet> comps) {
  if (comps.size() != target.nvars())
    throw Error(ErrorCode::Mismatch, "map has " + std::to_string(comps.size()) + " components but the target has " +
                                         std::to_string(target.nvars()) + " variables");
  if (source.ntvars() != target.ntvars())
    throw Error(ErrorCode::Mismatch, "source and target have different parameters");
  MapGerm f;
  f.source_ = source;
  f.target_ = target;
  f.comps_ = rebase_all(comps, source);
  check_zero_constant(f.comps_, "map");
  for (auto& q : target.ideal_generators()) {
    Jet image = q.substitute(f.comps_);
    if (!image.is_zero())
      throw Error(ErrorCode::Semantic, "map does not send the target ideal into the source ideal: f^#(" +
                                           q.to_string() + ") = " + image.to_string() + " is not in J_X");
  }
  return f;
}

std::string MapGerm::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < comps_.size(); ++i) out += (i ? ", " : "") + comps_[i].to_string();
  return out + ")";
}

MapGerm MapGerm::base_change(const Extension& ext) const {
  MapGerm f;
  f.source_ = source_.over(ext.top());
  f.target_ = target_.over(ext.top());
  for (auto& c : comps_) f.comps_.push_back(c.base_change(f.source_, ext));
  return f;
}

std::optional<MapGerm> MapGerm::descend(const Extension& ext, const JetRing& source, const JetRing& target) const {
  MapGerm f;
  f.source_ = source;
  f.target_ = target;
  for (auto& c : comps_) {
    auto d = c.descend(source, ext);
    if (!d) return std::nullopt;
    f.comps_.push_back(*d);
  }
  return f;
}

// ---- GroupElement ---------------------------------------------------------------

void GroupElement::fill_identity_parts() {
  std::size_t n = source_.nvars(), m = target_.nvars();
  if (phi_.empty()) phi_ = ring_variables(source_, 0, n);
  if (psi_.empty()) psi_ = ring_variables(target_, 0, m);
  if (mat_.empty())
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) mat_.push_back(i == j ? source_.one() : source_.zero());
  if (!xy_.valid()) xy_ = product_ring(source_, target_);
  if (contact_.empty()) contact_ = ring_variables(xy_, n, m);
}

GroupElement GroupElement::identity(GroupKind kind, const JetRing& source, const JetRing& target) {
  GroupElement g;
  g.kind_ = kind;
  g.source_ = source;
  g.target_ = target;
  if (has_matrix(kind) && target.has_ideal())
    throw Error(ErrorCode::Unsupported, "Klin requires a smooth target (use C or K)");
  g.fill_identity_parts();
  g.phi_inv_ = g.phi_;
  g.psi_inv_ = g.psi_;
  return g;
}

GroupElement GroupElement::make(GroupKind kind, const JetRing& source, const JetRing& target,
                                std::vector<Jet> phi, std::vector<Jet> psi, std::vector<Jet> matrix,
                                std::vector<Jet> contact) {
  GroupElement g;
  g.kind_ = kind;
  g.source_ = source;
  g.target_ = target;
  g.xy_ = product_ring(source, target);
  if (has_right(kind)) g.phi_ = rebase_all(phi, source);
  if (has_left(kind)) g.psi_ = rebase_all(psi, target);
  if (has_matrix(kind)) g.mat_ = rebase_all(matrix, source);
  if (has_contact(kind)) g.contact_ = rebase_all(contact, g.xy_);
  g.fill_identity_parts();
  g.validate();
  g.compute_inverse_cache();
  return g;
}

void GroupElement::validate() const {
  std::size_t n = source_.nvars(), m = target_.nvars();
  const Field& F = source_.field();
  if (has_right(kind_)) {
    if (phi_.size() != n) throw Error(ErrorCode::Mismatch, "automorphism needs " + std::to_string(n) + " components");
    check_zero_constant(phi_, "automorphism");
    if (!invert_matrix(F, linear_part(phi_, 0, n)))
      throw Error(ErrorCode::Semantic, "automorphism has singular linear part");
    check_preserves(source_, phi_, "automorphism");
  }
  if (has_left(kind_)) {
    if (psi_.size() != m) throw Error(ErrorCode::Mismatch, "target automorphism needs " + std::to_string(m) + " components");
    check_zero_constant(psi_, "target automorphism");
    if (!invert_matrix(F, linear_part(psi_, 0, m)))
      throw Error(ErrorCode::Semantic, "target automorphism has singular linear part");
    check_preserves(target_, psi_, "target automorphism");
  }
  if (has_matrix(kind_)) {
    if (target_.has_ideal()) throw Error(ErrorCode::Unsupported, "Klin requires a smooth target (use C or K)");
    if (mat_.size() != m * m) throw Error(ErrorCode::Mismatch, "matrix needs " + std::to_string(m * m) + " entries");
    Matrix c0(m, std::vector<FieldElem>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) c0[i][j] = mat_[i * m + j].coeff(0);
    if (!invert_matrix(F, c0)) throw Error(ErrorCode::Semantic, "matrix has singular constant part");
  }
  if (has_contact(kind_)) {
    if (contact_.size() != m) throw Error(ErrorCode::Mismatch, "contact element needs " + std::to_string(m) + " components");
    for (auto& c : contact_) {
      for (std::size_t i = 0; i < c.coeffs().size(); ++i) {
        if (c.coeff(i).is_zero()) continue;
        const Exponent& e = xy_.monomial(i);
        int ydeg = 0;
        for (std::size_t k = n; k < n + m; ++k) ydeg += e[k];
        if (ydeg == 0)
          throw Error(ErrorCode::Semantic, "contact element does not vanish on y = 0: component " + c.to_string());
      }
    }
    if (!invert_matrix(F, linear_part(contact_, n, m)))
      throw Error(ErrorCode::Semantic, "contact element has singular y-linear part");
    if (!target_.ideal_generators().empty()) {
      std::vector<Jet> gens;
      for (auto& g : source_.ideal_generators()) gens.push_back(lift(g, free_ring(xy_), 0));
      for (auto& g : target_.ideal_generators()) gens.push_back(lift(g, free_ring(xy_), n));
      JetRing full = free_ring(xy_).with_ideal(gens);
      for (auto& q : target_.ideal_generators()) {
        Jet image = q.substitute(rebase_all(contact_, full));
        if (!image.is_zero())
          throw Error(ErrorCode::Semantic, "contact element does not preserve the target ideal: q = " + q.to_string() +
                                               " gives residual " + image.to_string());
      }
    }
  }
}

void GroupElement::compute_inverse_cache() {
  if (has_right(kind_)) {
    phi_inv_ = rebase_all(invert_aut(rebase_all(phi_, free_ring(source_))), source_);
    check_preserves(source_, phi_inv_, "inverse automorphism");
  } else {
    phi_inv_ = phi_;
  }
  if (has_left(kind_)) {
    psi_inv_ = rebase_all(invert_aut(rebase_all(psi_, free_ring(target_))), target_);
    check_preserves(target_, psi_inv_, "inverse target automorphism");
  } else {
    psi_inv_ = psi_;
  }
}

MapGerm GroupElement::act(const MapGerm& f) const {
  if (!(f.source() == source_) || !(f.target() == target_))
    throw Error(ErrorCode::Mismatch, "group element and map live on different spaces");
  std::size_t n = source_.nvars(), m = target_.nvars();
  std::vector<Jet> h = f.comps();
  if (has_right(kind_))
    for (auto& c : h) c = c.substitute(phi_inv_);
  if (has_matrix(kind_)) {
    std::vector<Jet> out;
    for (std::size_t i = 0; i < m; ++i) {
      Jet s = source_.zero();
      for (std::size_t k = 0; k < m; ++k) s = s + mat_[i * m + k] * h[k];
      out.push_back(s);
    }
    h = std::move(out);
  }
  if (has_left(kind_)) {
    std::vector<Jet> out;
    for (auto& p : psi_) out.push_back(p.substitute(h));
    h = std::move(out);
  }
  if (has_contact(kind_)) {
    std::vector<Jet> args = ring_variables(source_, 0, n);
    args.insert(args.end(), h.begin(), h.end());
    std::vector<Jet> out;
    for (auto& c : contact_) out.push_back(c.substitute(args));
    h = std::move(out);
  }
  return MapGerm::make(source_, target_, std::move(h));
}

GroupElement GroupElement::compose(const GroupElement& o) const {
  if (o.kind_ != kind_) throw Error(ErrorCode::Mismatch, "cannot compose elements of different groups");
  if (!(o.source_ == source_) || !(o.target_ == target_))
    throw Error(ErrorCode::Mismatch, "cannot compose elements on different spaces");
  std::size_t n = source_.nvars(), m = target_.nvars();
  GroupElement g = *this;
  if (has_right(kind_)) {
    g.phi_.clear();
    for (auto& p : phi_) g.phi_.push_back(p.substitute(o.phi_));
    g.phi_inv_.clear();
    for (auto& p : o.phi_inv_) g.phi_inv_.push_back(p.substitute(phi_inv_));
  }
  if (has_left(kind_)) {
    g.psi_.clear();
    for (auto& p : psi_) g.psi_.push_back(p.substitute(o.psi_));
    g.psi_inv_.clear();
    for (auto& p : o.psi_inv_) g.psi_inv_.push_back(p.substitute(psi_inv_));
  }
  if (has_matrix(kind_)) {
    std::vector<Jet> m2;
    for (auto& e : o.mat_) m2.push_back(e.substitute(phi_inv_));
    g.mat_ = matrix_mul(mat_, m2, m);
  }
  if (has_contact(kind_)) {
    std::vector<Jet> inner_args;
    if (kind_ == GroupKind::K)
      for (auto& p : phi_inv_) inner_args.push_back(lift(p, xy_, 0));
    else
      inner_args = ring_variables(xy_, 0, n);
    for (std::size_t k = 0; k < m; ++k) inner_args.push_back(xy_.var(n + k));
    std::vector<Jet> inner;
    for (auto& c : o.contact_) inner.push_back(c.substitute(inner_args));
    std::vector<Jet> outer_args = ring_variables(xy_, 0, n);
    outer_args.insert(outer_args.end(), inner.begin(), inner.end());
    g.contact_.clear();
    for (auto& c : contact_) g.contact_.push_back(c.substitute(outer_args));
  }
  return g;
}

GroupElement GroupElement::inverse() const {
  std::size_t n = source_.nvars(), m = target_.nvars();
  GroupElement g = *this;
  std::swap(g.phi_, g.phi_inv_);
  std::swap(g.psi_, g.psi_inv_);
  if (has_matrix(kind_)) {
    std::vector<Jet> mphi;
    for (auto& e : mat_) mphi.push_back(e.substitute(phi_));
    g.mat_ = matrix_inverse(mphi, m);
  }
  if (has_contact(kind_)) {
    JetRing fr = free_ring(xy_);
    std::vector<Jet> args;
    if (kind_ == GroupKind::K)
      for (auto& p : phi_) args.push_back(lift(p, fr, 0));
    else
      args = ring_variables(fr, 0, n);
    for (std::size_t k = 0; k < m; ++k) args.push_back(fr.var(n + k));
    std::vector<Jet> full = ring_variables(fr, 0, n);
    for (auto& c : contact_) full.push_back(c.rebase(fr).substitute(args));
    auto inv = invert_aut(full);
    g.contact_.clear();
    for (std::size_t k = 0; k < m; ++k) g.contact_.push_back(inv[n + k].rebase(xy_));
  }
  return g;
}

bool GroupElement::is_identity() const { return *this == identity(kind_, source_, target_); }

bool GroupElement::operator==(const GroupElement& o) const {
  return kind_ == o.kind_ && phi_ == o.phi_ && psi_ == o.psi_ && mat_ == o.mat_ && contact_ == o.contact_;
}

GroupElement GroupElement::base_change(const Extension& ext) const {
  GroupElement g;
  g.kind_ = kind_;
  g.source_ = source_.over(ext.top());
  g.target_ = target_.over(ext.top());
  g.xy_ = xy_.over(ext.top());
  auto bc = [&](const std::vector<Jet>& v, const JetRing& r) {
    std::vector<Jet> out;
    for (auto& j : v) out.push_back(j.base_change(r, ext));
    return out;
  };
  g.phi_ = bc(phi_, g.source_);
  g.phi_inv_ = bc(phi_inv_, g.source_);
  g.psi_ = bc(psi_, g.target_);
  g.psi_inv_ = bc(psi_inv_, g.target_);
  g.mat_ = bc(mat_, g.source_);
  g.contact_ = bc(contact_, g.xy_);
  return g;
}

std::optional<GroupElement> GroupElement::descend(const Extension& ext, const JetRing& source,
                                                  const JetRing& target) const {
  GroupElement g;
  g.kind_ = kind_;
  g.source_ = source;
  g.target_ = target;
  g.xy_ = product_ring(source, target);
  bool ok = true;
  auto dc = [&](const std::vector<Jet>& v, const JetRing& r) {
    std::vector<Jet> out;
    for (auto& j : v) {
      auto d = j.descend(r, ext);
      if (!d) {
        ok = false;
        return out;
      }
      out.push_back(*d);
    }
    return out;
  };
  g.phi_ = dc(phi_, source);
  g.phi_inv_ = dc(phi_inv_, source);
  g.psi_ = dc(psi_, target);
  g.psi_inv_ = dc(psi_inv_, target);
  g.mat_ = dc(mat_, source);
  g.contact_ = dc(contact_, g.xy_);
  if (!ok) return std::nullopt;
  return g;
}

std::vector<GroupElement> GroupElement::factors() const {
  auto part = [&](GroupKind k) {
    GroupElement g = identity(k, source_, target_);
    if (has_right(k)) {
      g.phi_ = phi_;
      g.phi_inv_ = phi_inv_;
    }
    if (has_left(k)) {
      g.psi_ = psi_;
      g.psi_inv_ = psi_inv_;
    }
    if (has_matrix(k)) g.mat_ = mat_;
    if (has_contact(k)) g.contact_ = contact_;
    return g;
  };
  switch (kind_) {
    case GroupKind::LR:
      return {part(GroupKind::L), part(GroupKind::R)};
    case GroupKind::K:
      return {part(GroupKind::C), part(GroupKind::R)};
    case GroupKind::Klin: {
      GroupElement mpart = identity(GroupKind::Klin, source_, target_);
      mpart.mat_ = mat_;
      return {mpart, part(GroupKind::R)};
    }
    default:
      return {*this};
  }
}

std::string GroupElement::to_string() const {
  auto tup = [](const std::vector<Jet>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
    return s + ")";
  };
  std::string out = group_name(kind_) + ":";
  if (has_right(kind_)) out += " phi=" + tup(phi_);
  if (has_left(kind_)) out += " psi=" + tup(psi_);
  if (has_matrix(kind_)) out += " M=" + tup(mat_);
  if (has_contact(kind_)) out += " C=" + tup(contact_);
  return out;
}

// ---- levels -----------------------------------------------------------------------

PowerShifts::PowerShifts(const Filtration& filt) : filt_(filt) {
  const JetRing& r = filt.ring();
  std::size_t dim = r.dim();
  maxb_ = r.jet_order();
  for (int d = 0; d <= filt.max_level(); ++d) {
    std::vector<bool> s(dim, false);
    for (std::size_t i = 0; i < dim; ++i) s[i] = r.x_degree(i) >= 1 && filt.in_level(i, d);
    std::vector<std::vector<bool>> pw(static_cast<std::size_t>(maxb_) + 1);
    pw[1] = s;
    for (int b = 2; b <= maxb_; ++b) {
      std::vector<bool> next(dim, false);
      for (std::size_t i = 0; i < dim; ++i) {
        if (!pw[b - 1][i]) continue;
        for (std::size_t j = 0; j < dim; ++j) {
          if (!s[j]) continue;
          std::size_t k = r.product_index(i, j);
          if (k != JetRing::npos) next[k] = true;
        }
      }
      pw[b] = std::move(next);
    }
    pow_.push_back(std::move(pw));
  }
}

int PowerShifts::shift(std::size_t mono, int b) const {
  const JetRing& r = filt_.ring();
  if (b < 1 || b > maxb_) return kInfinity;
  int best = kInfinity;
  for (int d = 0; d < static_cast<int>(pow_.size()); ++d) {
    const auto& set = pow_[d][b];
    int mo = kInfinity;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!set[i]) continue;
      std::size_t k = r.product_index(mono, i);
      if (k == JetRing::npos) continue;
      mo = std::min(mo, filt_.minord(k));
    }
    if (mo != kInfinity) best = std::min(best, mo - d);
  }
  return best;
}

int group_level(const GroupElement& g, const Filtration& filt_in) {
  Filtration filt = filt_in.ring() == g.source() ? filt_in : filt_in.on(g.source());
  const JetRing& X = g.source();
  std::size_t n = X.nvars(), m = g.target().nvars();
  int level = kInfinity;
  auto shifts = [&]() -> const PowerShifts& {
    static thread_local std::optional<PowerShifts> cache;
    static thread_local std::string key;
    std::string k = filt.spec() + "|" + std::to_string(X.dim()) + "|" + std::to_string(X.nvars()) + "|" +
                    std::to_string(X.jet_order()) + "|" + std::to_string(X.t_order());
    if (!cache || key != k) {
      cache.emplace(filt);
      key = k;
    }
    return *cache;
  };
  for (auto& part : g.factors()) {
    switch (part.kind()) {
      case GroupKind::R:
        for (std::size_t i = 1; i < X.dim(); ++i) {
          Jet mu = X.monomial_jet(i, X.field().one());
          if (mu.is_zero()) continue;
          Jet diff = mu.substitute(part.phi_inverse()) - mu;
          if (diff.is_zero()) continue;
          level = std::min(level, filt.order_of({diff}) - filt.order_of({mu}));
        }
        break;
      case GroupKind::Klin:
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t i = 0; i < X.dim(); ++i) {
            Jet mu = X.monomial_jet(i, X.field().one());
            if (mu.is_zero()) continue;
            std::vector<Jet> v;
            bool zero = true;
            for (std::size_t r = 0; r < m; ++r) {
              Jet e = part.matrix()[r * m + k] - (r == k ? X.one() : X.zero());
              v.push_back(e * mu);
              if (!v.back().is_zero()) zero = false;
            }
            if (zero) continue;
            level = std::min(level, filt.order_of(v) - filt.order_of({mu}));
          }
        break;
      case GroupKind::L: {
        const JetRing& Y = g.target();
        for (std::size_t k = 0; k < m; ++k) {
          Jet diff = part.psi()[k] - Y.var(k);
          for (std::size_t i = 0; i < Y.dim(); ++i) {
            if (diff.coeff(i).is_zero()) continue;
            const Exponent& e = Y.monomial(i);
            int b = 0;
            for (std::size_t v = 0; v < m; ++v) b += e[v];
            Exponent me(n + X.ntvars(), 0);
            for (std::size_t t = 0; t < X.ntvars(); ++t) me[n + t] = e[m + t];
            std::size_t mono = X.index_of(me);
            if (mono == JetRing::npos) continue;
            level = std::min(level, shifts().shift(mono, b));
          }
        }
        break;
      }
      case GroupKind::C: {
        const JetRing& XY = g.xy();
        for (std::size_t k = 0; k < m; ++k) {
          Jet diff = part.contact()[k] - XY.var(n + k);
          for (std::size_t i = 0; i < XY.dim(); ++i) {
            if (diff.coeff(i).is_zero()) continue;
            const Exponent& e = XY.monomial(i);
            int b = 0;
            for (std::size_t v = 0; v < m; ++v) b += e[n + v];
            Exponent me(n + X.ntvars(), 0);
            for (std::size_t v = 0; v < n; ++v) me[v] = e[v];
            for (std::size_t t = 0; t < X.ntvars(); ++t) me[n + t] = e[n + m + t];
            std::size_t mono = X.index_of(me);
            if (mono == JetRing::npos) continue;
            level = std::min(level, shifts().shift(mono, b));
          }
        }
        break;
      }
      default:
        break;
    }
  }
  if (level < 0) return -1;
  return std::min(level, filt.max_level());
}

}  // namespace germ
