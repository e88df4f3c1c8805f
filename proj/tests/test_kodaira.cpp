#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"
#include "twistlab/kodaira.hpp"

using namespace twistlab;
using namespace twistlab::gf3;
using namespace twistlab::funcfield;
using namespace twistlab::kodaira;
using elliptic::TwistKind;
using elliptic::WeierstrassModel;

namespace {

CtxPtr gf9() { return FieldTower::global().ctx(2); }

Poly poly(const CtxPtr& ctx, std::initializer_list<int> ascending) {
  std::vector<FieldElement> cs;
  for (int v : ascending) cs.push_back(ctx->from_int(v));
  return Poly::from_coeffs(ctx, std::move(cs));
}

RatFunc rp(const Poly& p) { return RatFunc(p); }

WeierstrassModel cubic_long(const CtxPtr& ctx, const Poly& a2, const Poly& a4, const Poly& a6) {
  return WeierstrassModel::make(ctx, RatFunc::zero(ctx), rp(a2), RatFunc::zero(ctx), rp(a4),
                                rp(a6));
}

void check_fiber(const FiberReport& rep, const std::string& type, unsigned m, long v) {
  CHECK(rep.kodaira_type == type);
  CHECK(rep.components == m);
  CHECK(rep.v_delta_min == v);
}

}  // namespace

TEST_CASE("component counts follow the standard table") {
  CHECK(component_count("I0") == 1);
  CHECK(component_count("I1") == 1);
  CHECK(component_count("I7") == 7);
  CHECK(component_count("II") == 1);
  CHECK(component_count("III") == 2);
  CHECK(component_count("IV") == 3);
  CHECK(component_count("I0*") == 5);
  CHECK(component_count("I2*") == 7);
  CHECK(component_count("IV*") == 7);
  CHECK(component_count("III*") == 8);
  CHECK(component_count("II*") == 9);
  CHECK_ERRCODE(component_count("V"), "BadKodairaSymbol");
  CHECK_ERRCODE(component_count("I*"), "BadKodairaSymbol");
}

TEST_CASE("closed form: the cubic degree table at infinity") {
  auto ctx = gf9();
  const Place inf = Place::infinity(ctx);
  const Place at_t = Place::finite_trusted(poly(ctx, {0, 1}));
  const FieldElement i = ctx->generator();

  const struct {
    int deg;
    const char* type;
    unsigned m;
    long v;
  } rows[] = {{1, "II*", 9, 12}, {2, "IV*", 7, 12}, {4, "IV", 3, 12},
              {5, "II", 1, 12},  {7, "II*", 9, 24}, {8, "IV*", 7, 24}};
  for (const auto& row : rows) {
    const Poly g = Poly::monomial(i, static_cast<unsigned>(row.deg));
    for (TwistKind k : {TwistKind::cubic_tau, TwistKind::cubic_tau2}) {
      check_fiber(classify_closed_form(k, std::nullopt, g, inf), row.type, row.m, row.v);
      check_fiber(classify_closed_form(k, std::nullopt, g, at_t), "I0", 1, 0);
    }
  }

  CHECK_ERRCODE(classify_closed_form(TwistKind::cubic_tau, std::nullopt, poly(ctx, {0, 0, 0, 1}),
                                     inf),
                "UnsupportedDegree");
  CHECK_ERRCODE(classify_closed_form(TwistKind::cubic_tau, std::nullopt, poly(ctx, {1}), inf),
                "UnsupportedDegree");
  CHECK_ERRCODE(classify_closed_form(TwistKind::cubic_tau, poly(ctx, {0, 1}),
                                     Poly::monomial(i, 4), inf),
                "BadParameter");
  auto gf81 = FieldTower::global().ctx(4);
  CHECK_ERRCODE(classify_closed_form(TwistKind::cubic_tau, std::nullopt, Poly::monomial(i, 4),
                                     Place::infinity(gf81)),
                "CtxMismatch");
}

TEST_CASE("closed form: quadratic parity and the two quartic residue tables") {
  auto ctx = gf9();
  const Place at_t = Place::finite_trusted(poly(ctx, {0, 1}));
  const Place inf = Place::infinity(ctx);

  // multiplicity grid f = t^m (t − 1) at the place t
  const char* quad_types[] = {"I0", "I0*", "I0", "I0*", "I0"};
  const char* tau_types[] = {"I0", "III", "I0*", "III*", "I0"};
  const char* tau3_types[] = {"I0", "III*", "I0*", "III", "I0"};
  for (unsigned m = 0; m <= 4; ++m) {
    const Poly f = Poly::monomial(ctx->one(), m) * poly(ctx, {-1, 1});
    const FiberReport q = classify_closed_form(TwistKind::quad, f, std::nullopt, at_t);
    CHECK(q.kodaira_type == quad_types[m]);
    CHECK(q.v_delta_min == (m % 2 ? 6 : 0));
    CHECK(classify_closed_form(TwistKind::quartic_tau, f, std::nullopt, at_t).kodaira_type ==
          tau_types[m]);
    CHECK(classify_closed_form(TwistKind::quartic_tau3, f, std::nullopt, at_t).kodaira_type ==
          tau3_types[m]);
  }

  // at infinity the table argument is minus the degree
  const char* tau_inf[] = {"III*", "I0*", "III", "I0"};   // deg f = 1..4
  const char* tau3_inf[] = {"III", "I0*", "III*", "I0"};  // 3·(−deg) mod 4
  for (unsigned d = 1; d <= 4; ++d) {
    const Poly f = Poly::monomial(ctx->one(), d) + poly(ctx, {1});
    CHECK(classify_closed_form(TwistKind::quad, f, std::nullopt, inf).kodaira_type ==
          (d % 2 ? "I0*" : "I0"));
    CHECK(classify_closed_form(TwistKind::quartic_tau, f, std::nullopt, inf).kodaira_type ==
          tau_inf[d - 1]);
    CHECK(classify_closed_form(TwistKind::quartic_tau3, f, std::nullopt, inf).kodaira_type ==
          tau3_inf[d - 1]);
  }

  check_fiber(classify_closed_form(TwistKind::quad, poly(ctx, {0, 1}), std::nullopt, at_t), "I0*",
              5, 6);
}

TEST_CASE("closed form: sextic parities and the infinity table") {
  auto ctx = gf9();
  const Place inf = Place::infinity(ctx);
  const Place at_t = Place::finite_trusted(poly(ctx, {0, 1}));
  const Poly t = poly(ctx, {0, 1});

  check_fiber(classify_closed_form(TwistKind::sextic_tau, t, t, inf), "IV", 3, 6);
  check_fiber(classify_closed_form(TwistKind::sextic_tau, t, t, at_t), "I0*", 5, 6);
  const Place at_t1 = Place::finite_trusted(poly(ctx, {-1, 1}));
  check_fiber(classify_closed_form(TwistKind::sextic_tau, t, t, at_t1), "I0", 1, 0);

  // with f = t the degree of g walks through every infinity row
  const struct {
    unsigned dg;
    const char* type;
    long v;
  } rows[] = {{1, "IV", 6}, {2, "II", 6}, {4, "II*", 18}, {5, "IV*", 18}};
  for (const auto& row : rows) {
    const Poly g = Poly::monomial(ctx->one(), row.dg);
    const FiberReport rep = classify_closed_form(TwistKind::sextic_tau5, t, g, inf);
    CHECK(rep.kodaira_type == row.type);
    CHECK(rep.v_delta_min == row.v);
  }

  CHECK_ERRCODE(classify_closed_form(TwistKind::sextic_tau, t, Poly::monomial(ctx->one(), 3), inf),
                "UnsupportedDegree");
  // finite places do not need the degree hypothesis on g
  CHECK(classify_closed_form(TwistKind::sextic_tau, t, Poly::monomial(ctx->one(), 3), at_t)
            .kodaira_type == "I0*");
}

TEST_CASE("tate: frozen outcomes for every additive type") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const Poly zero = Poly::zero(ctx);
  const Place at_t = Place::finite_trusted(t);
  const FieldElement i = ctx->generator();

  // smooth fiber of a cubic twist away from infinity
  const WeierstrassModel cub =
      elliptic::build_twist(TwistKind::cubic_tau, std::nullopt, RatFunc(Poly::monomial(i, 4)), 1);
  check_fiber(tate_algorithm(cub, Place::finite_trusted(poly(ctx, {-1, 1}))), "I0", 1, 0);

  // II via a nontrivial cube root in the residue field: cbrt(i) = -i
  check_fiber(tate_algorithm(cubic_long(ctx, zero, t, Poly::constant(i)), at_t), "II", 1, 3);
  check_fiber(tate_algorithm(cubic_long(ctx, zero, t, zero), at_t), "III", 2, 3);
  check_fiber(tate_algorithm(cubic_long(ctx, zero, -Poly::monomial(ctx->one(), 4),
                                        Poly::monomial(-i, 2)),
                             at_t),
              "IV", 3, 12);
  // the quadratic-twist witness: y² = x³ − t²x
  check_fiber(tate_algorithm(WeierstrassModel::short_form(
                                 ctx, rp(-Poly::monomial(ctx->one(), 2)), RatFunc::zero(ctx)),
                             at_t),
              "I0*", 5, 6);
  check_fiber(tate_algorithm(cubic_long(ctx, zero, -Poly::monomial(ctx->one(), 4),
                                        -Poly::monomial(ctx->one(), 4)),
                             at_t),
              "IV*", 7, 12);
  check_fiber(tate_algorithm(cubic_long(ctx, zero, -Poly::monomial(ctx->one(), 3), zero), at_t),
              "III*", 8, 9);
  check_fiber(tate_algorithm(cubic_long(ctx, zero, -Poly::monomial(ctx->one(), 4),
                                        -Poly::monomial(ctx->one(), 5)),
                             at_t),
              "II*", 9, 12);
}

TEST_CASE("tate: multiplicative and starred-multiplicative families") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const Poly one = Poly::one(ctx);
  const Poly zero = Poly::zero(ctx);
  const Place at_t = Place::finite_trusted(t);

  // y² = x³ + x² + tⁿ has a node with v(Δ) = n
  for (unsigned n = 1; n <= 5; ++n) {
    const FiberReport rep =
        tate_algorithm(cubic_long(ctx, one, zero, Poly::monomial(ctx->one(), n)), at_t);
    check_fiber(rep, "I" + std::to_string(n), n, static_cast<long>(n));
    CHECK(rep.notes.find("multiplicative") != std::string::npos);
  }

  // the I_n* subloop, odd and even exits
  check_fiber(tate_algorithm(cubic_long(ctx, t, zero, Poly::monomial(ctx->one(), 4)), at_t),
              "I1*", 6, 7);
  check_fiber(tate_algorithm(cubic_long(ctx, t, Poly::monomial(ctx->one(), 3),
                                        Poly::monomial(ctx->one(), 6)),
                             at_t),
              "I2*", 7, 8);
  check_fiber(tate_algorithm(cubic_long(ctx, t, zero, Poly::monomial(ctx->one(), 6)), at_t),
              "I3*", 8, 9);
  check_fiber(tate_algorithm(cubic_long(ctx, t, Poly::monomial(ctx->one(), 4),
                                        Poly::monomial(ctx->one(), 8)),
                             at_t),
              "I4*", 9, 10);
}

TEST_CASE("tate: non-minimal models are reduced before classification") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const Place at_t = Place::finite_trusted(t);

  // quadratic twist by t²(t+1): even multiplicity is a square twist in disguise
  const Poly f = Poly::monomial(ctx->one(), 2) * poly(ctx, {1, 1});
  const WeierstrassModel m =
      elliptic::build_twist(TwistKind::quad, RatFunc(f), std::nullopt, 1);
  const FiberReport rep = tate_algorithm(m, at_t);
  check_fiber(rep, "I0", 1, 0);
  CHECK(rep.notes.find("non-minimal") != std::string::npos);

  // multiplicity 3 reduces once and lands on I0*
  const Poly f3 = Poly::monomial(ctx->one(), 3);
  check_fiber(tate_algorithm(elliptic::build_twist(TwistKind::quad, RatFunc(f3), std::nullopt, 1),
                             at_t),
              "I0*", 5, 6);
}

TEST_CASE("tate: the infinite place via the 1/t rescale") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const Place inf = Place::infinity(ctx);
  const FieldElement i = ctx->generator();

  const auto twist = [&](TwistKind k, std::optional<Poly> f, std::optional<Poly> g) {
    const auto fr = f ? std::optional<RatFunc>(RatFunc(*f)) : std::nullopt;
    const auto gr = g ? std::optional<RatFunc>(RatFunc(*g)) : std::nullopt;
    return elliptic::build_twist(k, fr, gr, 1);
  };

  check_fiber(tate_algorithm(twist(TwistKind::cubic_tau, std::nullopt, Poly::monomial(i, 4)), inf),
              "IV", 3, 12);
  check_fiber(tate_algorithm(twist(TwistKind::quad, poly(ctx, {0, -1, 0, 1}), std::nullopt), inf),
              "I0*", 5, 6);
  check_fiber(tate_algorithm(twist(TwistKind::quartic_tau, t, std::nullopt), inf), "III*", 8, 9);
  check_fiber(tate_algorithm(twist(TwistKind::quartic_tau3, t, std::nullopt), inf), "III", 2, 3);
  check_fiber(tate_algorithm(twist(TwistKind::sextic_tau, t, t), inf), "IV", 3, 6);

  // constant coefficients have good reduction at infinity
  check_fiber(tate_algorithm(WeierstrassModel::short_form(ctx, RatFunc::constant(-ctx->one()),
                                                          RatFunc::zero(ctx)),
                             inf),
              "I0", 1, 0);
}

TEST_CASE("tate: places of residue degree two") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const FieldElement i = ctx->generator();
  // 1 − i generates GF(9)* (order 8), so it is a nonsquare and t² − (1−i) is irreducible
  const Poly pi = Poly::monomial(ctx->one(), 2) - Poly::constant(ctx->one() - i);
  REQUIRE(funcfield::is_irreducible(pi));
  const Place at_pi = Place::finite(pi);
  CHECK(at_pi.degree() == 2);

  const WeierstrassModel quad =
      elliptic::build_twist(TwistKind::quad, RatFunc(pi), std::nullopt, 1);
  const FiberReport rep = tate_algorithm(quad, at_pi);
  check_fiber(rep, "I0*", 5, 6);
  CHECK(rep.notes.find("residue degree 2") != std::string::npos);
  // the closed form sees the same place through the valuation of f
  const FiberReport table =
      classify_closed_form(TwistKind::quad, pi, std::nullopt, at_pi);
  CHECK(table.kodaira_type == rep.kodaira_type);

  // node over the quadratic residue field
  check_fiber(tate_algorithm(cubic_long(ctx, Poly::one(ctx), Poly::zero(ctx), pi), at_pi), "I1", 1,
              1);
  // additive fiber whose translation needs cbrt(−(1−i)·t) = −t in GF(81)
  check_fiber(tate_algorithm(cubic_long(ctx, Poly::zero(ctx), pi, -Poly::monomial(ctx->one(), 3)),
                             at_pi),
              "II", 1, 3);
}

TEST_CASE("tate input validation") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const Place at_t = Place::finite_trusted(t);

  const RatFunc z = RatFunc::zero(ctx);
  const WeierstrassModel singular{ctx, z, z, z, z, z};
  CHECK_ERRCODE(tate_algorithm(singular, at_t), "SingularModel");

  const RatFunc inv_t = RatFunc(Poly::one(ctx), t);
  const WeierstrassModel laurent{ctx, z, z, z, inv_t, RatFunc::one(ctx)};
  CHECK_ERRCODE(tate_algorithm(laurent, at_t), "NotAPolynomial");

  auto gf81 = FieldTower::global().ctx(4);
  const WeierstrassModel ok = WeierstrassModel::short_form(ctx, RatFunc::constant(-ctx->one()), z);
  CHECK_ERRCODE(tate_algorithm(ok, Place::infinity(gf81)), "CtxMismatch");
}

TEST_CASE("closed form and tate agree across the family grids") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const FieldElement i = ctx->generator();
  const std::vector<Place> places = {Place::finite_trusted(t),
                                     Place::finite_trusted(poly(ctx, {-1, 1})),
                                     Place::infinity(ctx)};
  int agreements = 0;
  const auto compare = [&](TwistKind k, const std::optional<Poly>& f,
                           const std::optional<Poly>& g) {
    const auto fr = f ? std::optional<RatFunc>(RatFunc(*f)) : std::nullopt;
    const auto gr = g ? std::optional<RatFunc>(RatFunc(*g)) : std::nullopt;
    const WeierstrassModel model = elliptic::build_twist(k, fr, gr, 1);
    for (const Place& p : places) {
      const FiberReport a = classify_closed_form(k, f, g, p);
      const FiberReport b = tate_algorithm(model, p);
      CHECK(a.kodaira_type == b.kodaira_type);
      CHECK(a.components == b.components);
      CHECK(a.v_delta_min == b.v_delta_min);
      ++agreements;
    }
  };

  for (unsigned d : {1u, 2u, 4u, 5u, 7u, 8u}) compare(TwistKind::cubic_tau, std::nullopt,
                                                      Poly::monomial(i, d));
  compare(TwistKind::cubic_tau2, std::nullopt, Poly::monomial(i, 4) + t);

  for (unsigned m = 0; m <= 4; ++m) {
    const Poly f = Poly::monomial(ctx->one(), m) * poly(ctx, {-1, 1});
    compare(TwistKind::quad, f, std::nullopt);
    compare(TwistKind::quartic_tau, f, std::nullopt);
    compare(TwistKind::quartic_tau3, f, std::nullopt);
  }

  for (const Poly& f : {t, Poly::monomial(ctx->one(), 2) * poly(ctx, {-1, 1})}) {
    for (const Poly& g : {t, Poly::monomial(ctx->one(), 4)}) {
      compare(TwistKind::sextic_tau, f, g);
      compare(TwistKind::sextic_tau5, f, g);
    }
  }
  CHECK(agreements >= 60);
}

TEST_CASE("surface reports add up the fibration bookkeeping") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const FieldElement i = ctx->generator();

  const SurfaceReport cub =
      surface_report(TwistKind::cubic_tau, std::nullopt, Poly::monomial(i, 4));
  CHECK(cub.euler_number == 12);
  CHECK(cub.b2 == 10);
  CHECK(cub.geometric_rank == 6);
  REQUIRE(cub.fibers.size() == 1);
  CHECK(cub.fibers[0].place.is_infinite());
  CHECK(cub.fibers[0].kodaira_type == "IV");

  const SurfaceReport deg1 = surface_report(TwistKind::cubic_tau, std::nullopt, t);
  CHECK(deg1.geometric_rank == 0);
  REQUIRE(deg1.fibers.size() == 1);
  CHECK(deg1.fibers[0].kodaira_type == "II*");

  const SurfaceReport quad =
      surface_report(TwistKind::quad, poly(ctx, {0, -1, 0, 1}), std::nullopt);
  CHECK(quad.euler_number == 24);
  CHECK(quad.b2 == 22);
  CHECK_FALSE(quad.geometric_rank.has_value());
  REQUIRE(quad.fibers.size() == 4);
  for (const FiberReport& rep : quad.fibers) CHECK(rep.kodaira_type == "I0*");
  CHECK(quad.fibers.back().place.is_infinite());

  const SurfaceReport q3 = surface_report(TwistKind::quartic_tau3, t, std::nullopt);
  CHECK(q3.euler_number == 12);
  REQUIRE(q3.fibers.size() == 2);
  CHECK(q3.fibers[0].kodaira_type == "III*");
  CHECK(q3.fibers[1].kodaira_type == "III");

  const SurfaceReport sx = surface_report(TwistKind::sextic_tau, t, t);
  CHECK(sx.euler_number == 12);
  REQUIRE(sx.fibers.size() == 2);
  CHECK(sx.fibers[0].kodaira_type == "I0*");
  CHECK(sx.fibers[1].kodaira_type == "IV");

  CHECK_ERRCODE(surface_report(TwistKind::cubic_tau, std::nullopt,
                               Poly::monomial(ctx->one(), 3)),
                "UnsupportedDegree");
}

TEST_CASE("shioda-tate: L-function ranks against the surface invariants") {
  auto ctx = gf9();
  const Poly t = poly(ctx, {0, 1});
  const FieldElement i = ctx->generator();

  const ShiodaTateReport a =
      shioda_tate_check(TwistKind::cubic_tau, std::nullopt, Poly::monomial(i, 4), 1);
  CHECK(a.rank == 6);
  CHECK(a.geometric_rank == 6);
  CHECK(a.b2 == 10);
  CHECK(a.fiber_correction == 2);
  CHECK(a.equality_expected);
  CHECK(a.rank_equals_geometric);

  const ShiodaTateReport b = shioda_tate_check(TwistKind::cubic_tau, std::nullopt, t, 1);
  CHECK(b.rank == 0);
  CHECK(b.geometric_rank == 0);
  CHECK(b.fiber_correction == 8);  // II* has 9 components
  CHECK(b.rank_equals_geometric);

  const ShiodaTateReport c =
      shioda_tate_check(TwistKind::cubic_tau2, std::nullopt, Poly::monomial(ctx->one(), 2), 1);
  CHECK(c.rank == 2);
  CHECK(c.geometric_rank == 2);
  CHECK(c.fiber_correction == 6);  // IV* has 7 components
  CHECK(c.equality_expected);

  CHECK_ERRCODE(shioda_tate_check(TwistKind::quad, t, std::nullopt, 1), "BadParameter");
  CHECK_ERRCODE(shioda_tate_check(TwistKind::cubic_tau, std::nullopt, t, 2), "CtxMismatch");
}
