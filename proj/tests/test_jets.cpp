#include "doctest.h"
#include "germ/germs.hpp"
#include "oracle.hpp"

using namespace germ;

namespace {

JetRing ring1(int N) { return JetRing(Field::rationals(), {"x"}, N); }
JetRing ring2(int N) { return JetRing(Field::rationals(), {"x", "y"}, N); }

}  // namespace

TEST_CASE("jet arithmetic") {
  JetRing R = ring1(2);
  CHECK((R.parse("1+x") * R.parse("1+x")) == R.parse("1+2*x+x^2"));
  JetRing S = ring2(3).with_ideal({ring2(3).parse("x*y")});
  CHECK(S.parse("x*y").is_zero());
  CHECK(ring2(3).parse("(x+y)+(x-y)") == ring2(3).parse("2*x"));
}

TEST_CASE("substitution") {
  JetRing R = ring1(3);
  JetRing Y = JetRing(Field::rationals(), {"y"}, 3);
  CHECK(Y.parse("y^2").substitute({R.parse("x+x^2")}) == R.parse("x^2+2*x^3"));
  CHECK(Y.parse("y").substitute({R.parse("x")}) == R.parse("x"));
  JetRing Y2 = JetRing(Field::rationals(), {"y1", "y2"}, 3);
  CHECK(Y2.parse("y1*y2").substitute({R.parse("x"), R.parse("x^2")}) == R.parse("x^3"));
}

TEST_CASE("random products and substitutions agree with the series oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    int N = 2 + trial % 4;
    JetRing R = ring2(N);
    oracle::Trunc t{2, N, 0};
    auto rnd = [&](bool unit_free) {
      Jet j = R.zero();
      for (std::size_t i = unit_free ? 1 : 0; i < R.dim(); ++i) j = j + R.monomial_jet(i, R.field().from_int(c(rng)));
      return j;
    };
    Jet a = rnd(false), b = rnd(false);
    CHECK(oracle::from_jet(a * b) == oracle::mul(oracle::from_jet(a), oracle::from_jet(b), t));
    Jet u = rnd(true), v = rnd(true);
    auto expected = oracle::substitute(oracle::from_jet(a), 2, {oracle::from_jet(u), oracle::from_jet(v)}, 2, t);
    CHECK(oracle::from_jet(a.substitute({u, v})) == expected);
  }
}

TEST_CASE("filtration orders") {
  JetRing R = ring1(3);
  Filtration m = Filtration::madic(R);
  CHECK(m.order_of({R.parse("x^2+x^3")}) == 2);
  CHECK(m.order_of({R.zero()}) == kInfinity);
  JetRing P = ring2(3);
  // complete flag: m, (y)+m^2, m^2
  Filtration flag = Filtration::chain(P, {{{1, 0}, {0, 1}}, {{0, 1}, {2, 0}, {1, 1}}, {{2, 0}, {1, 1}, {0, 2}}});
  CHECK(flag.order_of({P.parse("y")}) == 2);
  CHECK(flag.order_of({P.parse("x")}) == 1);
  CHECK_NOTHROW(Filtration::chain(R, {{{1}}, {{1}}}));
  CHECK_THROWS_AS(Filtration::chain(R, {{{2}}, {{1}}}), Error);
}

TEST_CASE("ideal spans") {
  JetRing R = ring1(4).with_ideal({ring1(4).parse("x^2")});
  CHECK(R.ideal_span().rank() == 3);
  JetRing S = ring2(3).with_ideal({ring2(3).parse("x*y")});
  CHECK(S.ideal_span().rank() == 3);
  CHECK(ring1(3).ideal_span().rank() == 0);
}

TEST_CASE("maps respect target ideals") {
  JetRing X = ring2(3).with_ideal({ring2(3).parse("x*y")});
  JetRing Y = JetRing(Field::rationals(), {"u", "v"}, 3);
  Y = Y.with_ideal({Y.parse("u*v")});
  CHECK_NOTHROW(MapGerm::make(X, Y, {X.parse("x"), X.parse("y")}));
  CHECK_THROWS_AS(MapGerm::make(ring2(3), Y, {ring2(3).parse("x"), ring2(3).parse("y")}), Error);
}

TEST_CASE("group elements") {
  JetRing R = ring1(3);
  JetRing T = JetRing(Field::rationals(), {"y"}, 3);
  auto inv = invert_aut({R.parse("x+x^2")});
  CHECK(inv[0] == R.parse("x-x^2+2*x^3"));
  CHECK(R.parse("x+x^2").substitute(inv) == R.parse("x"));

  JetRing X2 = ring2(3).with_ideal({ring2(3).parse("x*y")});
  CHECK_NOTHROW(GroupElement::make(GroupKind::R, X2, T, {X2.parse("y"), X2.parse("x")}));
  CHECK_THROWS_AS(GroupElement::make(GroupKind::R, X2, T, {X2.parse("x+y"), X2.parse("y")}), Error);

  JetRing Y2 = JetRing(Field::rationals(), {"u", "v"}, 3);
  JetRing XY = product_ring(R, Y2);
  CHECK_NOTHROW(GroupElement::make(GroupKind::C, R, Y2, {}, {}, {}, {XY.parse("(1+x)*u"), XY.parse("v+x*u^2")}));
  CHECK_THROWS_AS(GroupElement::make(GroupKind::C, R, Y2, {}, {}, {}, {XY.parse("u+x"), XY.parse("v")}), Error);
  JetRing Yn = JetRing(Field::rationals(), {"u"}, 3);
  Yn = Yn.with_ideal({Yn.parse("u^2")});
  JetRing XYn = product_ring(R, Yn);
  CHECK_NOTHROW(GroupElement::make(GroupKind::C, R, Yn, {}, {}, {}, {XYn.parse("(1+x)*u")}));
}

TEST_CASE("actions") {
  JetRing R = ring1(3);
  JetRing T = JetRing(Field::rationals(), {"y"}, 3);
  MapGerm f = MapGerm::make(R, T, {R.parse("x^2")});
  // phi^-1 = x + x^2
  auto phi = invert_aut({R.parse("x+x^2")});
  CHECK(GroupElement::make(GroupKind::R, R, T, phi).act(f).comps()[0] == R.parse("x^2+2*x^3"));
  CHECK(GroupElement::make(GroupKind::Klin, R, T, {}, {}, {R.parse("1+x")}).act(f).comps()[0] == R.parse("x^2+x^3"));
  JetRing R4 = ring1(4);
  JetRing T4 = JetRing(Field::rationals(), {"y"}, 4);
  MapGerm f4 = MapGerm::make(R4, T4, {R4.parse("x^2")});
  CHECK(GroupElement::make(GroupKind::L, R4, T4, {}, {T4.parse("y+y^2")}).act(f4).comps()[0] == R4.parse("x^2+x^4"));
}

TEST_CASE("group levels") {
  JetRing R = ring1(3);
  JetRing T = JetRing(Field::rationals(), {"y"}, 3);
  Filtration m = Filtration::madic(R);
  CHECK(group_level(GroupElement::make(GroupKind::R, R, T, {R.parse("x+x^3")}), m) == 2);
  CHECK(group_level(GroupElement::identity(GroupKind::R, R, T), m) == m.max_level());
  CHECK(group_level(GroupElement::make(GroupKind::R, R, T, {R.parse("2*x")}), m) == 0);
}

TEST_CASE("composition and inverse laws") {
  JetRing R = ring2(3);
  JetRing T = JetRing(Field::rationals(), {"u"}, 3);
  MapGerm f = MapGerm::make(R, T, {R.parse("x^2+y^3+x*y")});
  GroupElement a = GroupElement::make(GroupKind::K, R, T, {R.parse("x+y^2"), R.parse("y-x*y")}, {}, {},
                                      {product_ring(R, T).parse("(1+x)*u+u^2")});
  GroupElement b = GroupElement::make(GroupKind::K, R, T, {R.parse("2*x+y"), R.parse("y+x^2")}, {}, {},
                                      {product_ring(R, T).parse("(3-y)*u")});
  CHECK(a.compose(b).act(f) == a.act(b.act(f)));
  CHECK(a.inverse().act(a.act(f)) == f);
  CHECK(a.compose(a.inverse()).is_identity());
}
