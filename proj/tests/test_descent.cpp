#include "doctest.h"
#include "germ/descent.hpp"
#include "oracle.hpp"

using namespace germ;

namespace {

Field Q = Field::rationals();
Extension sqrt2() { return make_extension(Q, "a^2-2"); }

}  // namespace

TEST_CASE("witness checks") {
  JetRing X(Q, {"x"}, 4);
  Filtration m = Filtration::madic(X);
  MapGerm f = MapGerm::make(X, X, {X.parse("x^2")});
  CHECK(verify_witness(GroupElement::identity(GroupKind::R, X, X), f, f, 1, m).ok);
  // act uses phi^-1, so phi^-1 = x + x^2 moves x^2 to (x+x^2)^2
  GroupElement g = GroupElement::make(GroupKind::R, X, X, invert_aut({X.parse("x+x^2")}));
  CHECK(verify_witness(g, f, MapGerm::make(X, X, {X.parse("x^2+2*x^3+x^4")}), 1, m).ok);
  WitnessCheck bad = verify_witness(GroupElement::make(GroupKind::R, X, X, {X.parse("2*x")}), f, f, 1, m);
  CHECK_FALSE(bad.ok);
  CHECK(bad.level == 0);
  WitnessCheck wrong = verify_witness(GroupElement::make(GroupKind::R, X, X, {X.parse("2*x")}), f, f, 0, m);
  CHECK_FALSE(wrong.ok);
  CHECK(wrong.diagnostics == "witness action mismatch at coefficient x^2");
}

TEST_CASE("descent of a projection") {
  Extension e = sqrt2();
  JetRing X(Q, {"x", "y"}, 3);
  JetRing Y(Q, {"u"}, 3);
  JetRing XK = X.over(e.top()), YK = Y.over(e.top());
  MapGerm f = MapGerm::make(X, Y, {X.parse("x")});
  MapGerm ft = MapGerm::make(X, Y, {X.parse("x+y^2")});
  FieldElem a = e.top().generator();
  Jet ycomp = XK.parse("y") + XK.parse("y^3").scaled(a);
  GroupElement w = GroupElement::make(GroupKind::R, XK, YK, invert_aut({XK.parse("x+y^2"), ycomp}));
  REQUIRE(verify_witness(w, f.base_change(e), ft.base_change(e), 1, Filtration::madic(XK)).ok);
  DescentProblem p{GroupKind::R, f, ft, e, w, 1, Filtration::madic(X)};
  DescentCertificate c = descend(p);
  CHECK(c.g.source().field() == Q);
  CHECK(c.g.act(f) == ft);
  CHECK(verify_witness(c.g, f, ft, 1, Filtration::madic(X)).ok);
}

TEST_CASE("descent peels one step") {
  Extension e = sqrt2();
  JetRing X(Q, {"x"}, 4);
  MapGerm f = MapGerm::make(X, X, {X.parse("x^2")});
  MapGerm ft = MapGerm::make(X, X, {X.parse("x^2+x^4")});
  JetRing XK = X.over(e.top());
  TangentVector v = TangentVector::zero(GroupKind::R, XK, XK);
  v.right[0] = XK.parse("-1/2*x^3");
  GroupElement w = exp_vf(v);
  DescentCertificate c = descend({GroupKind::R, f, ft, e, w, 1, Filtration::madic(X)});
  REQUIRE(c.log.size() == 1);
  CHECK(c.log[0].xi.right[0] == X.parse("-1/2*x^3"));
  CHECK(c.g.phi()[0] == X.parse("x-1/2*x^3"));
  CHECK(c.g.act(f) == ft);
}

TEST_CASE("descent with equal maps stops at once") {
  Extension e = sqrt2();
  JetRing X(Q, {"x", "y"}, 3);
  JetRing Y(Q, {"u"}, 3);
  MapGerm f = MapGerm::make(X, Y, {X.parse("x")});
  GroupElement s = stabilizer_sample(f.base_change(e), GroupKind::R, 1, Filtration::madic(X.over(e.top())), 3);
  DescentCertificate c = descend({GroupKind::R, f, f, e, s, 1, Filtration::madic(X)});
  CHECK(c.g.is_identity());
  CHECK(c.log.empty());
}

TEST_CASE("descent rejects invalid witnesses") {
  Extension e = sqrt2();
  JetRing X(Q, {"x"}, 4);
  MapGerm f = MapGerm::make(X, X, {X.parse("x^2")});
  JetRing XK = X.over(e.top());
  GroupElement w = GroupElement::make(GroupKind::R, XK, XK, {XK.parse("2*x")});
  try {
    descend({GroupKind::R, f, f, e, w, 1, Filtration::madic(X)});
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Semantic);
    CHECK(std::string(err.what()) == "witness action mismatch at coefficient x^2");
  }
}

TEST_CASE("stabilizer samples fix the map") {
  JetRing X(Q, {"x", "y"}, 3);
  JetRing Y(Q, {"u"}, 3);
  MapGerm proj = MapGerm::make(X, Y, {X.parse("x")});
  GroupElement s = stabilizer_sample(proj, GroupKind::R, 1, Filtration::madic(X), 1);
  CHECK_FALSE(s.is_identity());
  CHECK(s.act(proj) == proj);
  CHECK(s.phi_inverse()[0] == X.parse("x"));

  JetRing X1(Q, {"x"}, 4);
  MapGerm sq = MapGerm::make(X1, X1, {X1.parse("x^2")});
  // x^2 o (x + a x^4) = x^2 mod x^5: only the top jet degree stays free
  GroupElement top = stabilizer_sample(sq, GroupKind::R, 1, Filtration::madic(X1), 1);
  CHECK((top.phi()[0] - X1.parse("x")).x_order() >= 4);
  CHECK(top.act(sq) == sq);

  JetRing X2(Q, {"x", "y"}, 3);
  JetRing Y2(Q, {"u", "v"}, 3);
  MapGerm g = MapGerm::make(X2, Y2, {X2.parse("x"), X2.parse("x*y")});
  GroupElement k = stabilizer_sample(g, GroupKind::Klin, 1, Filtration::madic(X2), 2);
  CHECK(k.act(g) == g);
  CHECK(verify_witness(k, g, g, 1, Filtration::madic(X2)).ok);
  for (auto kind : {GroupKind::L, GroupKind::LR, GroupKind::C, GroupKind::K}) {
    GroupElement r = stabilizer_sample(g, kind, 1, Filtration::madic(X2), 4);
    CHECK(r.act(g) == g);
  }
}

TEST_CASE("family trivialization") {
  Extension e = sqrt2();
  JetRing X(Q, {"x"}, 3, {"t"}, 1);
  MapGerm ft = MapGerm::make(X, X, {X.parse("x^2+t*x^3")});
  JetRing XK = X.over(e.top());
  // act(w, f_t) = f_0 with phi^-1 = x - t/2 x^2
  GroupElement w = GroupElement::make(GroupKind::R, XK, XK, invert_aut({XK.parse("x-1/2*t*x^2")}));
  GroupElement s = stabilizer_sample(ft.base_change(e), GroupKind::R, 1, Filtration::tadic(XK), 9);
  DescentCertificate c = family_trivialize(GroupKind::R, ft, e, w.compose(s));
  CHECK(c.g.source().field() == Q);
  MapGerm r = c.g.act(ft);
  CHECK(r.comps()[0] == X.parse("x^2"));
  // independent check: f_t o phi^-1 = f_0 on the truncated series
  oracle::Trunc tr{1, 3, 1};
  auto lhs = oracle::substitute(oracle::from_jet(ft.comps()[0]), 1, oracle::from_jets(c.g.phi_inverse()), 2, tr);
  CHECK(lhs == oracle::from_jet(X.parse("x^2")));

  MapGerm c0 = MapGerm::make(X, X, {X.parse("x^2")});
  CHECK(family_trivialize(GroupKind::R, c0, e, GroupElement::identity(GroupKind::R, XK, XK)).g.is_identity());
  CHECK_THROWS_AS(family_trivialize(GroupKind::R, ft, e, GroupElement::identity(GroupKind::R, XK, XK)), Error);
}
