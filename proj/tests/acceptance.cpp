// Acceptance run: one PASS/FAIL line per criterion, with wall time against
// a fixed limit. A failure that matches a certified, documented deviation is
// printed as such; any other failure makes the exit status nonzero.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "germ/polysys.hpp"
#include "oracle.hpp"

using namespace germ;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
  bool recorded = false;  // failure matches a deviation certified below and kept in the ledger
};

Field Q = Field::rationals();

std::string eqs_text(const PolySystem& s) {
  std::string out;
  for (auto& e : s.equations) out += (out.empty() ? "" : ", ") + e.to_string(s.unknowns);
  return out;
}

bool contains_eq(const PolySystem& s, const std::string& e) {
  for (auto& p : s.equations)
    if (p.to_string(s.unknowns) == e) return true;
  return false;
}

PolySystem literal(const Field& F, std::vector<std::string> names, const std::vector<oracle::IntPoly>& eqs) {
  PolySystem s;
  s.field = F;
  s.unknowns = std::move(names);
  for (auto& e : eqs) {
    s.equations.push_back(Poly::parse(e.to_string(s.unknowns), F, s.unknowns));
    s.provenance.push_back("literal");
  }
  return s;
}

// ---- 1 ------------------------------------------------------------------------------------

Outcome quadratic_obstruction() {
  Field F3 = Field::prime(3);
  JetRing X(F3, {"x"}, 2);
  MapGerm f = MapGerm::make(X, X, {X.parse("x^2")});
  MapGerm ft = MapGerm::make(X, X, {X.parse("2*x^2")});
  PolySystem s = compile_system(f, ft, GroupKind::R);
  // oracle: 2*a1^2 - 1 and a1*z - 1 in (a1, a2, z)
  std::vector<oracle::IntPoly> expect{{{{2, {2, 0, 0}}, {-1, {0, 0, 0}}}}, {{{1, {1, 0, 1}}, {-1, {0, 0, 0}}}}};
  bool shape = s.unknowns == std::vector<std::string>{"a1", "a2", "z"} &&
               eqs_text(s) == eqs_text(literal(F3, s.unknowns, expect));
  auto none = brute_solve(s, F3);
  Field F9 = Field::parse("F3[b]/(b^2+1)");
  auto sols = brute_solve(s, F9);
  JetRing XK = X.over(F9);
  MapGerm fK = MapGerm::make(XK, XK, {XK.parse("x^2")}), ftK = MapGerm::make(XK, XK, {XK.parse("2*x^2")});
  std::size_t verified = 0;
  for (auto& sol : sols)
    if (verify_witness(assemble(s, sol), fK, ftK, 0, Filtration::madic(XK)).ok) ++verified;
  bool oracle3 = oracle::has_common_zero(oracle::gf(3, 1), expect, 3);
  bool oracle9 = oracle::has_common_zero(oracle::gf(3, 2), expect, 3);
  GroebnerResult gb = groebner_inconsistent(s);
  std::ostringstream d;
  d << "system {" << eqs_text(s) << "}; F3 solutions " << none.size() << " (oracle " << (oracle3 ? "some" : "none")
    << "); F9 solutions " << sols.size() << ", verified " << verified << " (oracle " << (oracle9 ? "some" : "none")
    << "); closure " << (gb.status == GroebnerStatus::Consistent ? "consistent" : "not consistent");
  bool ok = shape && none.empty() && !oracle3 && !sols.empty() && verified == sols.size() && oracle9 &&
            gb.status == GroebnerStatus::Consistent;
  return {ok, d.str()};
}

// ---- 2 ------------------------------------------------------------------------------------

Outcome cube_obstruction() {
  Field k = Field::parse("F3(s)");
  JetRing X(k, {"x"}, 6);
  PolySystem S = compile_system(MapGerm::make(X, X, {X.parse("x^3+s*x^6")}), MapGerm::make(X, X, {X.parse("x^3")}),
                                GroupKind::R);
  bool shape = contains_eq(S, "a2^3+(2*s)");  // a2^3 - s
  bool no_root = !pth_root(k.generator()).has_value();

  // Adjoining a cube root: F3(r) with s = r^3.
  Field kr = Field::function_field(3, "r");
  JetRing Xr(kr, {"x"}, 6);
  MapGerm fr = MapGerm::make(Xr, Xr, {Xr.parse("x^3+r^3*x^6")}), gr = MapGerm::make(Xr, Xr, {Xr.parse("x^3")});
  PolySystem Sr = compile_system(fr, gr, GroupKind::R);
  std::vector<FieldElem> pt(Sr.unknowns.size(), kr.zero());
  pt[Sr.index_of("a1")] = kr.one();
  pt[Sr.index_of("a2")] = kr.generator();
  pt[Sr.index_of("z")] = kr.one();
  bool vanishes = true;
  for (auto& e : Sr.equations) vanishes = vanishes && e.evaluate(pt).is_zero();
  bool witness = vanishes && verify_witness(assemble(Sr, pt), fr, gr, 0, Filtration::madic(Xr)).ok;

  // Finite surrogate: 3 is not a cube in F7 and becomes one in F7[w]/(w^3-3).
  oracle::IntPoly cube{{{1, {3}}, {-3, {0}}}};
  Field F7 = Field::prime(7), F343 = Field::parse("F7[w]/(w^3-3)");
  auto small = brute_solve(literal(F7, {"a"}, {cube}), F7);
  auto big = brute_solve(literal(F7, {"a"}, {cube}), F343);
  bool oracle_small = oracle::has_common_zero(oracle::gf(7, 1), {cube}, 1);
  bool oracle_big = oracle::has_common_zero(oracle::gf(7, 3), {cube}, 1);

  std::ostringstream d;
  d << "equation a2^3-s " << (shape ? "present" : "absent") << "; cube root of s in F3(s): "
    << (no_root ? "none" : "found") << "; over F3(s^(1/3)) witness a2=s^(1/3) " << (witness ? "verified" : "rejected")
    << "; surrogate a^3=3: F7 " << small.size() << " solutions, F343 " << big.size();
  bool ok = shape && no_root && witness && small.empty() && !oracle_small && big.size() == 3 && oracle_big;
  return {ok, d.str()};
}

// ---- 3 ------------------------------------------------------------------------------------

struct Template {
  std::vector<std::string> src, tgt, comps;
};

Outcome descent_round_trip() {
  const std::vector<Template> templates{
      {{"x"}, {"u"}, {"x^2"}},
      {{"x"}, {"u"}, {"x^3+x^4"}},
      {{"x", "y"}, {"u"}, {"x"}},
      {{"x", "y"}, {"u"}, {"x*y"}},
      {{"x", "y"}, {"u"}, {"x^2+y^3"}},
      {{"x"}, {"u", "v"}, {"x^2", "x^3"}},
      {{"x", "y"}, {"u", "v"}, {"x", "y^2"}},
      {{"x", "y"}, {"u", "v"}, {"x", "x*y"}},
      {{"x", "y"}, {"u", "v"}, {"x^2", "x*y"}},
  };
  Extension e = make_extension(Q, "a^2-2");
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> coef(-2, 2);
  int instances = 0, passed = 0, nontrivial = 0, steps = 0;
  std::string first_failure;
  for (GroupKind kind : {GroupKind::R, GroupKind::Klin, GroupKind::LR}) {
    for (int i = 0; i < 100; ++i) {
      const Template& T = templates[static_cast<std::size_t>(i) % templates.size()];
      int N = 3 + i % 2;
      int j = 1 + (i / 2) % 2;
      JetRing X(Q, T.src, N), Y(Q, T.tgt, N);
      Filtration m = Filtration::madic(X);
      std::vector<Jet> comps;
      for (auto& c : T.comps) comps.push_back(X.parse(c));
      MapGerm f = MapGerm::make(X, Y, comps);
      auto high = [&](const JetRing& R, int from) {
        Jet r = R.zero();
        for (std::size_t k = 0; k < R.dim(); ++k)
          if (R.x_degree(k) >= from && coef(rng) > 0) r = r + R.monomial_jet(k, Q.from_int(coef(rng)));
        return r;
      };
      std::vector<Jet> phi, psi, mat;
      for (std::size_t v = 0; v < X.nvars(); ++v) phi.push_back(X.var(v) + high(X, j + 1));
      if (kind == GroupKind::LR)
        for (std::size_t v = 0; v < Y.nvars(); ++v) psi.push_back(Y.var(v) + high(Y, j + 1));
      if (kind == GroupKind::Klin)
        for (std::size_t r = 0; r < f.m(); ++r)
          for (std::size_t c = 0; c < f.m(); ++c) mat.push_back((r == c ? X.one() : X.zero()) + high(X, j));
      GroupElement gk = GroupElement::make(kind, X, Y, phi, psi, mat);
      MapGerm ft = gk.act(f);
      GroupElement s = stabilizer_sample(f.base_change(e), kind, j, Filtration::madic(X.over(e.top())),
                                         static_cast<std::uint64_t>(1000 + i));
      GroupElement w = gk.base_change(e).compose(s);
      ++instances;
      if (!w.descend(e, X, Y)) ++nontrivial;
      std::string why;
      try {
        DescentCertificate c = descend({kind, f, ft, e, w, j, m});
        steps += static_cast<int>(c.log.size());
        bool ok = verify_witness(c.g, f, ft, j, m).ok && c.g.source().field() == Q;
        for (std::size_t k = 1; k < c.log.size(); ++k)
          if (c.log[k].order < c.log[k - 1].order + j) ok = false;
        // independent check: Psi o f = ftilde o Phi (R, LR) or (M o Phi) * f = ftilde o Phi (Klin)
        oracle::Trunc tr{X.nvars(), N, 0};
        auto phis = oracle::from_jets(c.g.phi());
        std::vector<oracle::Series> lhs, rhs;
        auto fs = oracle::from_jets(f.comps());
        for (std::size_t k = 0; k < f.m(); ++k)
          rhs.push_back(oracle::substitute(oracle::from_jet(ft.comps()[k]), X.nvars(), phis, X.nvars(), tr));
        if (kind == GroupKind::R) lhs = fs;
        if (kind == GroupKind::LR)
          for (auto& p : c.g.psi()) lhs.push_back(oracle::substitute(oracle::from_jet(p), Y.nvars(), fs, X.nvars(), tr));
        if (kind == GroupKind::Klin)
          for (std::size_t r = 0; r < f.m(); ++r) {
            oracle::Series row;
            for (std::size_t k = 0; k < f.m(); ++k) {
              auto mphi = oracle::substitute(oracle::from_jet(c.g.matrix()[r * f.m() + k]), X.nvars(), phis,
                                             X.nvars(), tr);
              row = oracle::add(row, oracle::mul(mphi, fs[k], tr));
            }
            lhs.push_back(row);
          }
        if (lhs != rhs) ok = false;
        if (ok) ++passed;
        else why = "certificate check failed";
      } catch (const std::exception& ex) {
        why = ex.what();
      }
      if (!why.empty() && first_failure.empty())
        first_failure = std::string(group_name(kind)) + " instance " + std::to_string(i) + ": " + why;
    }
  }
  std::ostringstream d;
  d << passed << "/" << instances << " certificates verified (" << nontrivial << " witnesses not k-rational, "
    << steps << " peeling steps)";
  if (!first_failure.empty()) d << "; first failure: " << first_failure;
  return {passed == instances && nontrivial > 0, d.str()};
}

// ---- 4 ------------------------------------------------------------------------------------

Outcome exp_log_exactness() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(-3, 3);
  const GroupKind kinds[] = {GroupKind::R, GroupKind::L, GroupKind::LR, GroupKind::Klin, GroupKind::C, GroupKind::K};
  int exact = 0, levels = 0;
  for (int i = 0; i < 100; ++i) {
    GroupKind kind = kinds[i % 6];
    int N = 3 + i % 3;
    std::size_t n = 1 + static_cast<std::size_t>(i / 6) % 2;
    std::size_t mm = 1 + static_cast<std::size_t>(i / 12) % 2;
    JetRing X(Q, n == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"}, N);
    JetRing Y(Q, mm == 1 ? std::vector<std::string>{"u"} : std::vector<std::string>{"u", "v"}, N);
    TangentVector v = TangentVector::zero(kind, X, Y);
    auto fill = [&](Jet& j, const JetRing& R, int min_x, std::size_t y_from) {
      for (std::size_t k = 0; k < R.dim(); ++k) {
        int deg = 0;
        for (std::size_t t = 0; t < R.nvars(); ++t) deg += R.monomial(k)[t];
        int ydeg = 0;
        for (std::size_t t = y_from; t < R.nvars(); ++t) ydeg += R.monomial(k)[t];
        if (deg >= min_x && (y_from == R.nvars() || ydeg >= 1) && coef(rng) > 0)
          j = j + R.monomial_jet(k, Q.from_int(coef(rng)));
      }
    };
    if (has_right(kind))
      for (auto& c : v.right) fill(c, X, 2, X.nvars());
    if (has_left(kind))
      for (auto& c : v.left) fill(c, Y, 2, Y.nvars());
    if (has_matrix(kind))
      for (auto& c : v.matrix) fill(c, X, 1, X.nvars());
    if (has_contact(kind))
      for (auto& c : v.contact) fill(c, v.xy, 2, X.nvars());
    GroupElement g = exp_vf(v);
    if (log_aut(g) == v) ++exact;
    Filtration m = Filtration::madic(X);
    if (group_level(g, m) >= vector_level(v, m)) ++levels;
  }
  std::ostringstream d;
  d << exact << "/100 exact round trips, " << levels << "/100 with exp level >= vector level";
  return {exact == 100 && levels == 100, d.str()};
}

// ---- 5 ------------------------------------------------------------------------------------

Outcome artin_rees_suite() {
  struct Case {
    std::vector<std::string> vars, targets, comps;
  };
  const std::vector<Case> suite{{{"x"}, {"u"}, {"x^2"}},
                                {{"x"}, {"u"}, {"x^3"}},
                                {{"x", "y"}, {"u", "v"}, {"x^2", "y^3"}},
                                {{"x", "y"}, {"u", "v"}, {"x", "y^3+x*y"}}};
  // LR at j=2 on the two plane maps: a pure power of y in M^6 is reached by a
  // level-1 target field (v^2 d/du resp. its analogue) and by nothing of level 2,
  // so the inclusion first holds at d = 7 = N+1.
  struct Known {
    std::size_t suite_index;
    std::vector<std::string> witness;
  };
  const std::vector<Known> known{{2, {"y^6", "0"}}, {3, {"0", "y^6"}}};
  int runs = 0, good = 0, max_d = 0, certified_gaps = 0;
  std::string bad;
  for (std::size_t ci = 0; ci < suite.size(); ++ci) {
    const Case& c = suite[ci];
    JetRing X(Q, c.vars, 6), Y(Q, c.targets, 6);
    std::vector<Jet> comps;
    for (auto& s : c.comps) comps.push_back(X.parse(s));
    MapGerm f = MapGerm::make(X, Y, comps);
    Filtration m = Filtration::madic(X);
    for (GroupKind kind : {GroupKind::R, GroupKind::Klin, GroupKind::LR})
      for (int j : {1, 2}) {
        ++runs;
        ArtinReesResult ar = artin_rees_bound(kind, f, j, m);
        bool ok = ar.d && *ar.d <= 6;
        if (ok) {
          // recompute the intersection from the full space and the level space
          SubspaceBasis inter = ar.full.intersect(m.level_space(*ar.d, f.m()));
          ok = ar.filtered.contains(inter) && inter == ar.intersection;
          max_d = std::max(max_d, *ar.d);
        }
        if (ok) {
          ++good;
          continue;
        }
        bool gap = false;
        for (auto& k : known)
          if (k.suite_index == ci && kind == GroupKind::LR && j == 2) {
            std::vector<Jet> w;
            for (auto& s : k.witness) w.push_back(X.parse(s));
            Vec v = stack(w);
            gap = ar.full.contains(v) && !ar.filtered.contains(v) && m.order_of(w) == 6;
          }
        if (gap) ++certified_gaps;
        else if (bad.empty()) bad = group_name(kind) + " j=" + std::to_string(j) + " on (" + c.comps[0] + ", ...)";
      }
  }
  std::ostringstream d;
  d << good << "/" << runs << " bounds certified with d <= 6, largest d = " << max_d;
  if (certified_gaps)
    d << "; " << certified_gaps << " cases (LR, j=2, on (x^2, y^3) and (x, y^3+x*y)) need d = 7 > N, "
      << "certified by a y^6 vector in T f and M^6 outside the level-2 space";
  if (!bad.empty()) d << "; unexplained failure: " << bad;
  Outcome o{good == runs, d.str()};
  o.recorded = !o.ok && bad.empty() && good + certified_gaps == runs;
  return o;
}

// ---- 6 ------------------------------------------------------------------------------------

/// Orbits of x^2 under 2-jets of R by direct enumeration: maps c1 x + c2 x^2,
/// group Phi = a1 x + a2 x^2 with a1 != 0, action f o Phi.
struct OracleCensus {
  std::vector<std::size_t> sizes;  // k-orbit sizes of the k-rational points
};

OracleCensus enumerate_orbits(const oracle::GF& K, int p) {
  using El = oracle::GF::El;
  int q = K.size();
  auto act = [&](const std::pair<El, El>& f, const El& a1, const El& a2) {
    // c1 (a1 x + a2 x^2) + c2 a1^2 x^2
    return std::pair<El, El>{K.mul(f.first, a1), K.add(K.mul(f.first, a2), K.mul(f.second, K.mul(a1, a1)))};
  };
  std::pair<El, El> f{K.constant(0), K.constant(1)};
  std::set<std::pair<El, El>> big;
  for (int i = 1; i < q; ++i)
    for (int j = 0; j < q; ++j) big.insert(act(f, K.from_index(i), K.from_index(j)));
  auto rational = [&](const El& e) {
    for (std::size_t t = 1; t < e.size(); ++t)
      if (e[t]) return false;
    return true;
  };
  std::set<std::pair<El, El>> pts;
  for (auto& g : big)
    if (rational(g.first) && rational(g.second)) pts.insert(g);
  OracleCensus out;
  std::set<std::pair<El, El>> seen;
  for (auto& g : pts) {
    if (seen.count(g)) continue;
    std::set<std::pair<El, El>> orbit;
    for (int i = 1; i < p; ++i)
      for (int j = 0; j < p; ++j) orbit.insert(act(g, K.constant(i), K.constant(j)));
    seen.insert(orbit.begin(), orbit.end());
    out.sizes.push_back(orbit.size());
  }
  std::sort(out.sizes.begin(), out.sizes.end());
  return out;
}

Outcome orbit_splitting() {
  std::ostringstream d;
  bool ok = true;
  for (auto [p, modulus] : {std::pair<int, const char*>{3, "b^2+1"}, std::pair<int, const char*>{5, "b^2+2"}}) {
    Field k = Field::prime(p);
    JetRing X(k, {"x"}, 2);
    OrbitCensus c = orbit_split(MapGerm::make(X, X, {X.parse("x^2")}), GroupKind::R, make_extension(k, modulus));
    std::vector<std::size_t> sizes(c.sizes.begin(), c.sizes.end());
    std::sort(sizes.begin(), sizes.end());
    OracleCensus o = enumerate_orbits(oracle::gf(p, 2), p);
    bool here = c.representatives.size() == 2 && sizes == o.sizes;
    ok = ok && here;
    d << "F" << p << " in F" << p * p << ": " << c.representatives.size() << " orbits {";
    for (std::size_t i = 0; i < c.representatives.size(); ++i)
      d << (i ? ", " : "") << c.representatives[i].to_string() << " x" << c.sizes[i];
    d << "}, oracle " << o.sizes.size() << " orbits; ";
  }
  std::string s = d.str();
  return {ok, s.substr(0, s.size() - 2)};
}

// ---- 7 ------------------------------------------------------------------------------------

Outcome flat_descent() {
  Extension e = make_extension(Q, "a^2-2");
  const Field& K = e.top();
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> coef(-4, 4);
  int failures = 0, memberships = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 3 + static_cast<std::size_t>(i) % 4;
    std::size_t r = 1 + static_cast<std::size_t>(i) % 3;
    auto rnd = [&] {
      Vec v;
      for (std::size_t t = 0; t < n; ++t) v.push_back(Q.from_int(coef(rng)));
      return v;
    };
    std::vector<Vec> gens;
    for (std::size_t t = 0; t < r; ++t) gens.push_back(rnd());
    SubspaceBasis V = SubspaceBasis::span(Q, n, gens);
    SubspaceBasis VK = V.base_change(e);
    // w = u + a*u' with u, u' in V (even i) or random (odd i)
    Vec u = zero_vec(Q, n), u2 = zero_vec(Q, n);
    if (i % 2 == 0) {
      for (auto& g : gens) {
        axpy(u, Q.from_int(coef(rng)), g);
        axpy(u2, Q.from_int(coef(rng)), g);
      }
    } else {
      u = rnd();
      u2 = rnd();
    }
    Vec w;
    for (std::size_t t = 0; t < n; ++t) w.push_back(e.embed(u[t]) + K.generator() * e.embed(u2[t]));
    auto mK = VK.membership(w);
    // coordinate slices of w over the basis {1, a}
    Vec s0, s1;
    for (auto& c : w) {
      auto co = e.coordinates(c);
      s0.push_back(co[0]);
      s1.push_back(co[1]);
    }
    bool in_k = V.contains(s0) && V.contains(s1);
    if (mK.has_value() != in_k) ++failures;
    if (mK) {
      ++memberships;
      // slice the K-coefficients and rebuild both coordinate vectors over k
      Vec r0 = zero_vec(Q, n), r1 = zero_vec(Q, n);
      for (std::size_t t = 0; t < VK.rank(); ++t) {
        auto co = e.coordinates((*mK)[t]);
        Vec row;
        for (auto& c : VK.rows()[t]) row.push_back(e.descend_scalar(c).value());
        axpy(r0, co[0], row);
        axpy(r1, co[1], row);
      }
      if (r0 != s0 || r1 != s1) ++failures;
    }
    if (i % 2 == 0 && !mK) ++failures;
  }
  std::ostringstream d;
  d << "100 instances, " << memberships << " K-memberships descended, " << failures << " failures";
  return {failures == 0, d.str()};
}

// ---- 8 ------------------------------------------------------------------------------------

Outcome family_descent() {
  Extension e = make_extension(Q, "a^2-2");
  JetRing X(Q, {"x"}, 3, {"t"}, 1);
  MapGerm ft = MapGerm::make(X, X, {X.parse("x^2+t*x^3")});
  JetRing XK = X.over(e.top());
  GroupElement w = GroupElement::make(GroupKind::R, XK, XK, invert_aut({XK.parse("x-1/2*t*x^2")}));
  GroupElement s = stabilizer_sample(ft.base_change(e), GroupKind::R, 1, Filtration::tadic(XK), 31);
  DescentCertificate c = family_trivialize(GroupKind::R, ft, e, w.compose(s));
  oracle::Trunc tr{1, 3, 1};
  auto moved = oracle::substitute(oracle::from_jet(ft.comps()[0]), 1, oracle::from_jets(c.g.phi_inverse()), 2, tr);
  bool trivial = moved == oracle::from_jet(X.parse("x^2"));
  bool rational = c.g.source().field() == Q;
  int level = group_level(c.g, Filtration::tadic(X));
  std::ostringstream d;
  d << "trivialization " << c.g.to_string() << ", t-level " << level << ", f_t o phi^-1 = x^2 mod (x^4, t^2): "
    << (trivial ? "yes" : "no");
  return {trivial && rational && level >= 1, d.str()};
}

// ---- 9 ------------------------------------------------------------------------------------

Outcome nullstellensatz_corpus() {
  using P = oracle::IntPoly;
  struct Sys {
    int p;
    std::size_t n;
    std::vector<P> eqs;
  };
  // exponent vectors over (a, b, c, d)
  auto t = [](long c, std::vector<int> e) { return std::pair<long, std::vector<int>>{c, e}; };
  const std::vector<Sys> corpus{
      {2, 1, {P{{t(1, {2}), t(1, {1}), t(1, {0})}}}},
      {2, 1, {P{{t(1, {1}), t(1, {0})}}, P{{t(1, {1})}}}},
      {2, 2, {P{{t(1, {1, 1}), t(1, {0, 0})}}, P{{t(1, {1, 0}), t(1, {0, 1})}}}},
      {2, 2, {P{{t(1, {1, 1}), t(1, {0, 0})}}, P{{t(1, {1, 0})}}}},
      {2, 1, {P{{t(1, {3}), t(1, {1}), t(1, {0})}}}},
      {2, 2, {P{{t(1, {2, 0}), t(1, {0, 1})}}, P{{t(1, {0, 2}), t(1, {1, 0})}}, P{{t(1, {1, 1}), t(1, {0, 0})}}}},
      {2, 3, {P{{t(1, {1, 1, 1}), t(1, {0, 0, 0})}}, P{{t(1, {1, 0, 0}), t(1, {0, 1, 0}), t(1, {0, 0, 1})}},
              P{{t(1, {1, 1, 0}), t(1, {0, 1, 1}), t(1, {1, 0, 1})}}}},
      {2, 2, {P{{t(1, {2, 0}), t(1, {1, 0})}}, P{{t(1, {0, 2}), t(1, {0, 1})}}, P{{t(1, {1, 0}), t(1, {0, 1}), t(1, {0, 0})}},
              P{{t(1, {1, 1}), t(1, {0, 0})}}}},
      {2, 4, {P{{t(1, {1, 0, 0, 1}), t(1, {0, 1, 1, 0}), t(1, {0, 0, 0, 0})}}, P{{t(1, {1, 0, 0, 1})}},
              P{{t(1, {0, 1, 1, 0})}}}},
      {2, 2, {P{{t(1, {2, 0}), t(1, {0, 2}), t(1, {0, 0})}}, P{{t(1, {1, 0}), t(1, {0, 1})}}}},
      {3, 1, {P{{t(1, {2}), t(1, {0})}}}},
      {3, 2, {P{{t(1, {2, 0}), t(-2, {0, 0})}}, P{{t(1, {1, 1}), t(-1, {0, 0})}}}},
      {3, 1, {P{{t(1, {3}), t(-1, {1}), t(-1, {0})}}}},
      {3, 1, {P{{t(1, {1}), t(-1, {0})}}, P{{t(1, {1}), t(1, {0})}}}},
      {3, 2, {P{{t(1, {1, 1}), t(-1, {0, 0})}}, P{{t(1, {2, 0}), t(-1, {0, 2})}}, P{{t(1, {1, 0}), t(1, {0, 1})}}}},
      {3, 2, {P{{t(1, {2, 0}), t(1, {0, 2}), t(1, {0, 0})}}, P{{t(1, {1, 1})}}}},
      {3, 3, {P{{t(1, {1, 1, 0}), t(-1, {0, 0, 0})}}, P{{t(1, {0, 1, 1}), t(-1, {0, 0, 0})}},
              P{{t(1, {1, 0, 1}), t(-1, {0, 0, 0})}}, P{{t(1, {1, 1, 1}), t(-2, {0, 0, 0})}}}},
      {3, 3, {P{{t(1, {2, 0, 0}), t(-1, {0, 1, 0})}}, P{{t(1, {0, 2, 0}), t(-1, {0, 0, 1})}},
              P{{t(1, {0, 0, 2}), t(-1, {1, 0, 0})}}, P{{t(1, {1, 1, 1}), t(-1, {0, 0, 0})}}}},
      {3, 3, {P{{t(1, {2, 0, 0}), t(-1, {0, 1, 0})}}, P{{t(1, {0, 2, 0}), t(-1, {0, 0, 1})}},
              P{{t(1, {0, 0, 2}), t(-1, {1, 0, 0})}}, P{{t(1, {1, 1, 1}), t(-2, {0, 0, 0})}}}},
      {3, 4, {P{{t(1, {1, 1, 0, 0}), t(-1, {0, 0, 1, 0})}}, P{{t(1, {0, 0, 2, 0}), t(1, {0, 0, 0, 0})}},
              P{{t(1, {1, 0, 0, 0}), t(1, {0, 1, 0, 0})}}, P{{t(1, {1, 0, 0, 1}), t(-1, {0, 1, 0, 1}), t(-1, {0, 0, 0, 0})}}}},
  };
  const std::vector<std::string> names{"a", "b", "c", "d"};
  int agree = 0, inconsistent = 0;
  std::string bad;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sys& s = corpus[i];
    std::vector<std::string> vars(names.begin(), names.begin() + static_cast<long>(s.n));
    GroebnerResult gb = groebner_inconsistent(literal(Field::prime(s.p), vars, s.eqs));
    int found = 0;
    for (int k = 1; k <= 3 && !found; ++k)
      if (oracle::has_common_zero(oracle::gf(s.p, k), s.eqs, s.n)) found = k;
    bool ok = gb.status != GroebnerStatus::Undecided && (gb.status == GroebnerStatus::Inconsistent) == (found == 0);
    if (gb.status == GroebnerStatus::Inconsistent) ++inconsistent;
    if (ok) ++agree;
    else if (bad.empty()) bad = "system " + std::to_string(i + 1);
  }
  std::ostringstream d;
  d << agree << "/" << corpus.size() << " systems agree (" << inconsistent << " inconsistent)";
  if (!bad.empty()) d << "; first disagreement: " << bad;
  return {agree == static_cast<int>(corpus.size()), d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "x^2 vs 2x^2 under R at N=2: no F3 point, verified F9 points, consistent over the closure", 1.0,
       quadratic_obstruction},
      {2, "x^3 vs x^3+s*x^6 over F3(s): cube equation, no cube root, solvable after adjoining one", 5.0,
       cube_obstruction},
      {3, "descent round trip for R, Klin, LR over Q(sqrt 2)", 60.0, descent_round_trip},
      {4, "log(exp(xi)) = xi for order-raising vector fields", 10.0, exp_log_exactness},
      {5, "jet-level Artin-Rees bounds", 30.0, artin_rees_suite},
      {6, "orbit splitting of x^2 over F3 in F9 and F5 in F25", 30.0, orbit_splitting},
      {7, "K-membership of k-subspaces descends to k", 5.0, flat_descent},
      {8, "family x^2+t*x^3 trivialized over Q", 1.0, family_descent},
      {9, "Groebner consistency agrees with exhaustive search over F_(p^k), k <= 3", 60.0, nullstellensatz_corpus},
  };
  int passed = 0, recorded = 0, failed = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.limit;
    bool ok = o.ok && in_time;
    const char* tag = ok ? "PASS" : "FAIL";
    if (ok) ++passed;
    else if (o.recorded && in_time) {
      ++recorded;
      tag = "FAIL (recorded deviation)";
    } else
      ++failed;
    std::printf("%s %d %s: %s (%.2f s, limit %.0f s)\n", tag, c.id, c.title, o.detail.c_str(), secs, c.limit);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed, %d recorded deviation(s), %d unexplained failure(s)\n", passed, criteria.size(),
              recorded, failed);
  return failed == 0 ? 0 : 1;
}
