#include "doctest.h"
#include "germ/polysys.hpp"
#include "oracle.hpp"

using namespace germ;

namespace {

std::vector<std::string> eq_strings(const PolySystem& s) {
  std::vector<std::string> out;
  for (auto& e : s.equations) out.push_back(e.to_string(s.unknowns));
  return out;
}

PolySystem literal(const Field& F, std::vector<std::string> names, const std::vector<std::string>& eqs) {
  PolySystem s;
  s.field = F;
  s.unknowns = std::move(names);
  for (auto& e : eqs) {
    s.equations.push_back(Poly::parse(e, F, s.unknowns));
    s.provenance.push_back("literal");
  }
  return s;
}

}  // namespace

TEST_CASE("compiled system for a scaled square") {
  Field F3 = Field::prime(3);
  JetRing X(F3, {"x"}, 2);
  PolySystem s = compile_system(MapGerm::make(X, X, {X.parse("x^2")}), MapGerm::make(X, X, {X.parse("2*x^2")}),
                                GroupKind::R);
  CHECK(s.unknowns == std::vector<std::string>{"a1", "a2", "z"});
  Field Q = Field::rationals();
  JetRing XQ(Q, {"x"}, 2);
  PolySystem q = compile_system(MapGerm::make(XQ, XQ, {XQ.parse("x^2")}),
                                MapGerm::make(XQ, XQ, {XQ.parse("2*x^2")}), GroupKind::R);
  CHECK(eq_strings(q) == std::vector<std::string>{"2*a1^2-1", "a1*z-1"});
}

TEST_CASE("compiled system for the identity") {
  Field Q = Field::rationals();
  JetRing X(Q, {"x"}, 1);
  MapGerm f = MapGerm::make(X, X, {X.parse("x")});
  PolySystem s = compile_system(f, f, GroupKind::R);
  CHECK(eq_strings(s) == std::vector<std::string>{"a1-1", "a1*z-1"});
}

TEST_CASE("cube equation over an imperfect field") {
  Field k = Field::parse("F3(s)");
  JetRing X(k, {"x"}, 6);
  PolySystem S = compile_system(MapGerm::make(X, X, {X.parse("x^3+s*x^6")}), MapGerm::make(X, X, {X.parse("x^3")}),
                                GroupKind::R);
  auto eqs = eq_strings(S);
  CHECK(std::find(eqs.begin(), eqs.end(), "a1^3+2") != eqs.end());
  CHECK(std::find(eqs.begin(), eqs.end(), "a2^3+(2*s)") != eqs.end());
  CHECK_FALSE(pth_root(k.generator()).has_value());
}

TEST_CASE("Groebner consistency") {
  Field Q = Field::rationals();
  CHECK(groebner_inconsistent(literal(Q, {"a", "z"}, {"2*a^2-1", "a*z-1"})).status == GroebnerStatus::Consistent);
  CHECK(groebner_inconsistent(literal(Q, {"a"}, {"a-1", "a-2"})).status == GroebnerStatus::Inconsistent);
  CHECK(groebner_inconsistent(literal(Field::prime(3), {"a"}, {"a^2+1"})).status == GroebnerStatus::Consistent);
  // a tiny cap leaves the question open
  auto capped = groebner_inconsistent(literal(Q, {"a", "b", "c"}, {"a^2-b", "b^2-c", "c^2-a", "a*b*c-2"}), 1);
  CHECK(capped.status == GroebnerStatus::Undecided);
}

TEST_CASE("brute-force solving") {
  Field F3 = Field::prime(3);
  PolySystem s = literal(F3, {"a", "z"}, {"2*a^2-1", "a*z-1"});
  CHECK(brute_solve(s, F3).empty());
  Field F9 = Field::parse("F3[b]/(b^2+1)");
  auto sols = brute_solve(s, F9);
  CHECK(sols.size() == 2);
  for (auto& x : sols) CHECK(F9.from_int(2) * x[0] * x[0] == F9.one());
  Field F2 = Field::prime(2);
  auto one = brute_solve(literal(F2, {"a"}, {"a-1"}), F2);
  REQUIRE(one.size() == 1);
  CHECK(one[0][0].is_one());
  BruteOptions tiny;
  tiny.cap = 10;
  CHECK_THROWS_AS(brute_solve(s, F9, tiny), Error);
}

TEST_CASE("brute force is deterministic across thread counts") {
  Field F9 = Field::parse("F9");
  JetRing X(Field::prime(3), {"x"}, 2);
  PolySystem s = compile_system(MapGerm::make(X, X, {X.parse("x^2")}), MapGerm::make(X, X, {X.parse("2*x^2")}),
                                GroupKind::R);
  BruteOptions one, four;
  one.threads = 1;
  four.threads = 4;
  auto a = brute_solve(s, F9, one), b = brute_solve(s, F9, four);
  CHECK(a == b);
  CHECK(a.size() == 18);
  for (auto& sol : a) {
    GroupElement g = assemble(s, sol);
    JetRing XK = X.over(F9);
    CHECK(verify_witness(g, MapGerm::make(XK, XK, {XK.parse("x^2")}), MapGerm::make(XK, XK, {XK.parse("2*x^2")}), 0,
                         Filtration::madic(XK))
              .ok);
  }
}

TEST_CASE("system JSON round trip") {
  Field F3 = Field::prime(3);
  JetRing X(F3, {"x"}, 2);
  PolySystem s = compile_system(MapGerm::make(X, X, {X.parse("x^2")}), MapGerm::make(X, X, {X.parse("2*x^2")}),
                                GroupKind::R);
  PolySystem r = system_from_json(system_to_json(s));
  CHECK(r.unknowns == s.unknowns);
  CHECK(eq_strings(r) == eq_strings(s));
  CHECK(r.provenance == s.provenance);
  CHECK(system_to_json(r) == system_to_json(s));
}

TEST_CASE("orbit splitting") {
  JetRing X(Field::prime(3), {"x"}, 2);
  OrbitCensus c = orbit_split(MapGerm::make(X, X, {X.parse("x^2")}), GroupKind::R,
                              make_extension(Field::prime(3), "b^2+1"));
  REQUIRE(c.representatives.size() == 2);
  CHECK(c.representatives[0].comps()[0] == X.parse("x^2"));
  CHECK(c.representatives[1].comps()[0] == X.parse("2*x^2"));
  JetRing X5(Field::prime(5), {"x"}, 1);
  OrbitCensus one = orbit_split(MapGerm::make(X5, X5, {X5.parse("x")}), GroupKind::R,
                                make_extension(Field::prime(5), "b^2+2"));
  CHECK(one.representatives.size() == 1);
}
