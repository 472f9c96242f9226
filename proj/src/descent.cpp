#include "germ/descent.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace germ {

namespace {

std::vector<Jet> at_zero(const std::vector<Jet>& v) {
  std::vector<Jet> out;
  for (auto& j : v) out.push_back(j.at_t_zero());
  return out;
}

std::string first_mismatch(const MapGerm& a, const MapGerm& b) {
  const JetRing& X = a.source();
  for (std::size_t k = 0; k < a.m(); ++k) {
    const Vec& ca = a.comps()[k].coeffs();
    const Vec& cb = b.comps()[k].coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i)
      if (ca[i] != cb[i]) {
        std::string s = "coefficient " + X.monomial_string(i);
        if (a.m() > 1) s += " of component " + std::to_string(k + 1);
        return s;
      }
  }
  return "";
}

TangentVector combination(const TangentSpace& ts, const Vec& c, const TangentVector& zero) {
  TangentVector xi = zero;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) xi = xi + ts.vectors[i].scaled(c[i]);
  return xi;
}

/// Peels ftilde down to f inside G^(j) over the field of f; returns acc with
/// act(acc, ftilde) = f.
GroupElement peel(GroupKind kind, const MapGerm& f, const MapGerm& ftilde, int j, const Filtration& filt,
                  std::vector<PeelStep>* log) {
  const JetRing& X = f.source();
  const Field& F = X.field();
  std::size_t m = f.m();
  std::size_t dim = X.dim() * m;
  // Filtered tangent spaces by level, built on demand. Solving with the
  // highest usable level keeps the second-order terms out of the next order.
  std::map<int, TangentSpace> spaces;
  auto space = [&](int level) -> const TangentSpace& {
    auto it = spaces.find(level);
    if (it == spaces.end()) it = spaces.emplace(level, tangent_space(kind, f, level, filt)).first;
    return it->second;
  };
  TangentVector zero = TangentVector::zero(kind, X, f.target());
  GroupElement acc = GroupElement::identity(kind, X, f.target());
  MapGerm cur = ftilde;
  int bound = filt.max_level() + 2;
  int last = -1;
  for (int it = 1; cur != f; ++it) {
    Vec v = sub_vec(cur.vec(), f.vec());
    int ord = filt.order_of_vec(v, m);
    if (it > bound || ord == kInfinity || ord <= last)
      throw Error(ErrorCode::Obstruction, "jet-level obstruction: residual order stalled at " + std::to_string(ord));
    SubspaceBasis q = filt.level_space(ord + j, m);
    Vec target = q.reduce(v);
    std::optional<Vec> c;
    const TangentSpace* ts = nullptr;
    for (int level = std::max(j, std::min(ord, filt.max_level())); level >= j && !c; --level) {
      ts = &space(level);
      std::vector<Vec> gens;
      for (auto& img : ts->images) gens.push_back(q.reduce(img));
      c = solve_combination(F, dim, gens, target);
    }
    if (!c) {
      std::vector<Jet> res = unstack(X, v, m);
      std::string s;
      for (auto& r : res) s += (s.empty() ? "" : ", ") + r.to_string();
      throw Error(ErrorCode::Obstruction, "jet-level obstruction: residual (" + s + ") is not in the filtered tangent space");
    }
    TangentVector xi = combination(*ts, *c, zero);
    GroupElement e = exp_vf(xi.scaled(-F.one()));
    cur = e.act(cur);
    acc = e.compose(acc);
    if (log) log->push_back({it, xi, ord});
    last = ord;
  }
  return acc;
}

void require_char0(const Field& F) {
  if (F.characteristic() != 0)
    throw Error(ErrorCode::Domain, "descent needs characteristic 0 (field " + F.spec() + "); use the polynomial-system path");
}

}  // namespace

GroupElement restrict_t_zero(const GroupElement& g) {
  GroupKind k = g.kind();
  return GroupElement::make(k, g.source(), g.target(), has_right(k) ? at_zero(g.phi()) : std::vector<Jet>{},
                            has_left(k) ? at_zero(g.psi()) : std::vector<Jet>{},
                            has_matrix(k) ? at_zero(g.matrix()) : std::vector<Jet>{},
                            has_contact(k) ? at_zero(g.contact()) : std::vector<Jet>{});
}

MapGerm restrict_t_zero(const MapGerm& f) { return MapGerm::make(f.source(), f.target(), at_zero(f.comps())); }

WitnessCheck verify_witness(const GroupElement& g, const MapGerm& f, const MapGerm& ftilde, int j,
                            const Filtration& filt) {
  WitnessCheck w;
  if (!(g.source() == f.source()) || !(g.target() == f.target()) || !(ftilde.source() == f.source())) {
    w.diagnostics = "spaces do not match";
    return w;
  }
  w.level = group_level(g, filt);
  MapGerm out = g.act(f);
  if (out != ftilde) {
    w.diagnostics = "witness action mismatch at " + first_mismatch(out, ftilde);
    return w;
  }
  if (w.level < j) {
    w.diagnostics = "level " + std::to_string(w.level) + " < " + std::to_string(j);
    return w;
  }
  w.ok = true;
  w.diagnostics = "level " + std::to_string(w.level);
  return w;
}

DescentCertificate descend(const DescentProblem& p) {
  const JetRing& X = p.f.source();
  require_char0(X.field());
  if (p.j < 1) throw Error(ErrorCode::Domain, "descent needs level j >= 1");
  if (!(p.ftilde.source() == X) || !(p.ftilde.target() == p.f.target()))
    throw Error(ErrorCode::Mismatch, "f and ftilde live on different spaces");
  if (p.witness.kind() != p.kind)
    throw Error(ErrorCode::Mismatch, "witness belongs to " + group_name(p.witness.kind()) + ", not " + group_name(p.kind));

  MapGerm fK = p.ext ? p.f.base_change(*p.ext) : p.f;
  MapGerm ftK = p.ext ? p.ftilde.base_change(*p.ext) : p.ftilde;
  Filtration filtK = p.ext ? p.filt.on(fK.source()) : p.filt;
  WitnessCheck wc = verify_witness(p.witness, fK, ftK, p.j, filtK);
  if (!wc.ok) {
    if (wc.diagnostics.rfind("level", 0) == 0)
      throw Error(ErrorCode::Semantic, "witness level too low: " + wc.diagnostics);
    throw Error(ErrorCode::Semantic, wc.diagnostics);
  }

  DescentCertificate cert;
  GroupElement acc = peel(p.kind, p.f, p.ftilde, p.j, p.filt, &cert.log);
  cert.g = acc.inverse();
  WitnessCheck final_check = verify_witness(cert.g, p.f, p.ftilde, p.j, p.filt);
  if (!final_check.ok) throw Error(ErrorCode::Obstruction, "descended element fails verification: " + final_check.diagnostics);
  return cert;
}

GroupElement stabilizer_sample(const MapGerm& f, GroupKind kind, int j, const Filtration& filt, std::uint64_t seed) {
  const JetRing& X = f.source();
  const Field& F = X.field();
  require_char0(F);
  if (j < 1) throw Error(ErrorCode::Domain, "stabilizer samples need level j >= 1");
  TangentSpace ts = tangent_space(kind, f, j, filt);
  std::size_t dim = X.dim() * f.m();
  TangentVector zero = TangentVector::zero(kind, X, f.target());
  auto rel = kernel(F, dim, ts.images);
  if (rel.empty()) return GroupElement::identity(kind, X, f.target());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(-2, 2);
  auto scalar = [&] {
    FieldElem c = F.from_int(coin(rng));
    if (F.kind() == Field::Kind::Extension) c = c + F.from_int(coin(rng)) * F.generator();
    return c;
  };
  TangentVector xi = zero;
  for (auto& r : rel) xi = xi + combination(ts, r, zero).scaled(scalar());
  if (xi.is_zero()) return GroupElement::identity(kind, X, f.target());
  GroupElement s0 = exp_vf(xi);
  // s0 fixes f to first order; correct the higher-order defect inside G^(j).
  MapGerm moved = s0.act(f);
  GroupElement h = peel(kind, f, moved, j, filt, nullptr);
  return h.compose(s0);
}

DescentCertificate family_trivialize(GroupKind kind, const MapGerm& ft, const std::optional<Extension>& ext,
                                     const GroupElement& witness) {
  const JetRing& X = ft.source();
  if (X.ntvars() == 0) throw Error(ErrorCode::Domain, "family mode needs t parameters");
  MapGerm f0 = restrict_t_zero(ft);
  GroupElement g0 = restrict_t_zero(witness);
  GroupElement normalized = g0.inverse().compose(witness);
  DescentProblem p;
  p.kind = kind;
  p.f = ft;
  p.ftilde = f0;
  p.ext = ext;
  p.witness = normalized;
  p.j = 1;
  p.filt = Filtration::tadic(X);
  return descend(p);
}

}  // namespace germ
