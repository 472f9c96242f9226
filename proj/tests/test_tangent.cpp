#include "doctest.h"
#include "germ/tangent.hpp"
#include "oracle.hpp"

using namespace germ;

namespace {

Field Q = Field::rationals();

oracle::Series derivative(const oracle::Series& f, std::size_t i) {
  oracle::Series r;
  for (auto& [e, c] : f) {
    if (e[i] == 0) continue;
    oracle::Exps d = e;
    d[i] -= 1;
    r[d] += c * e[i];
  }
  oracle::clean(r);
  return r;
}

/// Derivation sum xi_i d/dx_i applied to g, truncated.
oracle::Series apply(const std::vector<oracle::Series>& xi, const oracle::Series& g, const oracle::Trunc& t) {
  oracle::Series r;
  for (std::size_t i = 0; i < xi.size(); ++i) r = oracle::add(r, oracle::mul(xi[i], derivative(g, i), t));
  return r;
}

Vec to_vec(const oracle::Series& s, const JetRing& R) {
  Vec v = zero_vec(Q, R.dim());
  for (auto& [e, c] : s) {
    std::size_t i = R.index_of(e);
    if (i < R.dim()) v[i] = Q.from_rational(c);
  }
  return v;
}

SubspaceBasis basis_of(const std::vector<std::string>& jets, const JetRing& R) {
  std::vector<Vec> rows;
  for (auto& s : jets) rows.push_back(R.parse(s).coeffs());
  return SubspaceBasis::span(Q, R.dim(), rows);
}

}  // namespace

TEST_CASE("logarithmic derivations") {
  JetRing P(Q, {"x", "y"}, 2);
  DerLog d = der_log(P.with_ideal({P.parse("x*y")}));
  JetRing J = P.with_ideal({P.parse("x*y")});
  auto field = [&](const char* a, const char* b) { return stack({J.parse(a), J.parse(b)}); };
  CHECK(d.basis.contains(field("x", "0")));
  CHECK(d.basis.contains(field("0", "y")));
  CHECK_FALSE(d.basis.contains(field("1", "0")));
  CHECK_FALSE(d.basis.contains(field("0", "x")));
  CHECK(der_log(P).basis.rank() == 2 * P.dim());
  JetRing R(Q, {"x"}, 3);
  JetRing Rx = R.with_ideal({R.parse("x^2")});
  DerLog d1 = der_log(Rx);
  CHECK(d1.basis.contains(stack({Rx.parse("x")})));
  CHECK_FALSE(d1.basis.contains(stack({Rx.parse("1")})));
}

TEST_CASE("image tangent spaces") {
  JetRing X(Q, {"x"}, 3);
  MapGerm f = MapGerm::make(X, X, {X.parse("x^2")});
  Filtration m = Filtration::madic(X);
  CHECK(tangent_space(GroupKind::R, f, 0, m).basis == basis_of({"x", "x^2", "x^3"}, X));
  CHECK(tangent_space(GroupKind::Klin, f, 0, m).basis == basis_of({"x", "x^2", "x^3"}, X));
  CHECK(tangent_space(GroupKind::R, f, 1, m).basis == basis_of({"x^3"}, X));
}

TEST_CASE("T_R and T_Klin agree with the derivative oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int trial = 0; trial < 12; ++trial) {
    int N = 3 + trial % 2;
    JetRing X(Q, {"x", "y"}, N);
    JetRing Y(Q, {"u"}, N);
    oracle::Trunc t{2, N, 0};
    Jet g = X.zero();
    for (std::size_t i = 0; i < X.dim(); ++i)
      if (X.x_degree(i) >= 2) g = g + X.monomial_jet(i, Q.from_int(c(rng)));
    MapGerm f = MapGerm::make(X, Y, {g});
    oracle::Series fs = oracle::from_jet(g);
    std::vector<Vec> rimg, kimg;
    for (std::size_t i = 0; i < X.dim(); ++i) {
      oracle::Series mono;
      mono[X.monomial(i)] = 1;
      oracle::Series zero;
      for (std::size_t v = 0; v < 2; ++v) {
        std::vector<oracle::Series> xi(2, zero);
        xi[v] = mono;
        rimg.push_back(to_vec(apply(xi, fs, t), X));
      }
      kimg.push_back(to_vec(oracle::mul(mono, fs, t), X));
    }
    SubspaceBasis TR = SubspaceBasis::span(Q, X.dim(), rimg);
    auto all = rimg;
    all.insert(all.end(), kimg.begin(), kimg.end());
    SubspaceBasis TK = SubspaceBasis::span(Q, X.dim(), all);
    Filtration m = Filtration::madic(X);
    CHECK(tangent_space(GroupKind::R, f, 0, m).basis == TR);
    CHECK(tangent_space(GroupKind::Klin, f, 0, m).basis == TK);
  }
}

TEST_CASE("exp of vector fields") {
  JetRing X(Q, {"x"}, 4);
  TangentVector v = TangentVector::zero(GroupKind::R, X, X);
  v.right[0] = X.parse("x^2");
  CHECK(exp_vf(v).phi()[0] == X.parse("x+x^2+x^3+x^4"));
  CHECK(exp_vf(TangentVector::zero(GroupKind::R, X, X)).is_identity());
  JetRing X3(Q, {"x"}, 3);
  TangentVector w = TangentVector::zero(GroupKind::L, X3, X3);
  w.left[0] = X3.parse("x^2");
  CHECK(exp_vf(w).psi()[0] == X3.parse("x+x^2+x^3"));
}

TEST_CASE("exp agrees with the series oracle") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    int N = 4;
    JetRing X(Q, {"x", "y"}, N);
    oracle::Trunc t{2, N, 0};
    TangentVector v = TangentVector::zero(GroupKind::R, X, X);
    for (auto& comp : v.right)
      for (std::size_t i = 0; i < X.dim(); ++i)
        if (X.x_degree(i) >= 2) comp = comp + X.monomial_jet(i, Q.from_int(c(rng)));
    auto xi = oracle::from_jets(v.right);
    GroupElement g = exp_vf(v);
    for (std::size_t k = 0; k < 2; ++k) {
      oracle::Series term;
      term[k == 0 ? oracle::Exps{1, 0} : oracle::Exps{0, 1}] = 1;
      oracle::Series sum = term;
      for (int n = 1; n <= N; ++n) {
        term = oracle::scale(apply(xi, term, t), mpq_class(1, n));
        sum = oracle::add(sum, term);
      }
      CHECK(oracle::from_jet(g.phi()[k]) == sum);
    }
  }
}

TEST_CASE("log of automorphisms") {
  JetRing X(Q, {"x"}, 3);
  auto lg = log_aut(GroupElement::make(GroupKind::R, X, X, {X.parse("x+x^2")}));
  CHECK(lg.right[0] == X.parse("x^2-x^3"));
  CHECK(log_aut(GroupElement::identity(GroupKind::R, X, X)).is_zero());
  CHECK(log_aut(GroupElement::make(GroupKind::R, X, X, {X.parse("x+x^3")})).right[0] == X.parse("x^3"));
  JetRing F(Field::prime(5), {"x"}, 3);
  CHECK_THROWS_AS(log_aut(GroupElement::make(GroupKind::R, F, F, {F.parse("x+x^2")})), Error);
}

TEST_CASE("Artin-Rees bounds") {
  JetRing X(Q, {"x"}, 4);
  Filtration m = Filtration::madic(X);
  auto ar = artin_rees_bound(GroupKind::R, MapGerm::make(X, X, {X.parse("x^2")}), 1, m);
  REQUIRE(ar.d.has_value());
  CHECK(*ar.d == 3);
  CHECK(ar.intersection == basis_of({"x^3", "x^4"}, X));
  auto zero = artin_rees_bound(GroupKind::R, MapGerm::make(X, X, {X.zero()}), 1, m);
  REQUIRE(zero.d.has_value());
  CHECK(*zero.d == 1);
  auto lr = artin_rees_bound(GroupKind::LR, MapGerm::make(X, X, {X.parse("x^2")}), 1, m);
  REQUIRE(lr.d.has_value());
  CHECK(*lr.d <= 5);
  CHECK(lr.filtered.contains(lr.intersection));
}
