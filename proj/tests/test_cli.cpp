#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "test_util.hpp"
#include "twistlab/pipeline.hpp"
#include "twistlab/textio.hpp"

using namespace twistlab;
using namespace twistlab::funcfield;
using namespace twistlab::gf3;
using namespace twistlab::textio;
using pipeline::Options;
using pipeline::ordered_json;

namespace {

CtxPtr gf9() { return FieldTower::global().ctx(2); }

Poly poly(const CtxPtr& ctx, std::initializer_list<int> ascending) {
  std::vector<FieldElement> cs;
  for (int v : ascending) cs.push_back(ctx->from_int(v));
  return Poly::from_coeffs(ctx, std::move(cs));
}

}  // namespace

TEST_CASE("field elements parse and print in the z-syntax") {
  auto ctx = gf9();
  CHECK(parse_element(ctx, "z") == ctx->generator());
  CHECK(parse_element(ctx, "2") == ctx->from_int(2));
  CHECK(parse_element(ctx, "1 + 2*z") == ctx->one() + ctx->from_int(2) * ctx->generator());
  CHECK(parse_element(ctx, "z*z") == -ctx->one());  // z² = −1 in GF(9)
  CHECK(parse_element(ctx, "z^3") == -ctx->generator());
  CHECK(parse_element(ctx, "5") == ctx->from_int(2));

  CHECK(to_string(ctx->zero()) == "0");
  CHECK(to_string(ctx->one()) == "1");
  CHECK(to_string(ctx->generator()) == "z");
  CHECK(to_string(ctx->one() + ctx->from_int(2) * ctx->generator()) == "1+2*z");

  auto gf81 = FieldTower::global().ctx(4);
  const FieldElement w = gf81->generator();
  CHECK(parse_element(gf81, to_string(w * w * w + w)) == w * w * w + w);

  CHECK_ERRCODE(parse_element(ctx, "t"), "NotAConstant");
  CHECK_ERRCODE(parse_element(ctx, ""), "ParseError");
}

TEST_CASE("polynomials and rational functions round-trip through text") {
  auto ctx = gf9();
  const Poly t = Poly::t(ctx);

  const Poly f = parse_poly(ctx, "t^3 - t");
  CHECK(f == poly(ctx, {0, -1, 0, 1}));
  CHECK(to_string(f) == "t^3 + 2*t");
  CHECK(parse_poly(ctx, to_string(f)) == f);

  CHECK(to_string(Poly::monomial(ctx->generator(), 4)) == "z*t^4");
  CHECK(to_string(poly(ctx, {1, 0, 4})) == "t^2 + 1");

  // composite coefficients are parenthesized so output reparses exactly
  const Poly mixed =
      Poly::monomial(ctx->one() + ctx->generator(), 2) + Poly::constant(ctx->generator());
  CHECK(to_string(mixed) == "(1+z)*t^2 + z");
  CHECK(parse_poly(ctx, to_string(mixed)) == mixed);

  // precedence: ^ binds before unary minus, * / before + -
  CHECK(parse_ratfunc(ctx, "-t^2 + t*t").is_zero());
  CHECK(parse_ratfunc(ctx, "2*t^2/t") == RatFunc(t * Poly::constant(ctx->from_int(2))));
  CHECK(parse_ratfunc(ctx, "(t+1)^2") == RatFunc(poly(ctx, {1, 2, 1})));

  const RatFunc r = parse_ratfunc(ctx, "1/(t^2+1) + t");
  CHECK_FALSE(r.is_polynomial());
  CHECK(to_string(r) == "(t^3 + t + 1)/(t^2 + 1)");
  CHECK(parse_ratfunc(ctx, to_string(r)) == r);

  CHECK_ERRCODE(parse_poly(ctx, "1/t"), "NotAPolynomial");
  CHECK_ERRCODE(parse_ratfunc(ctx, "t +"), "ParseError");
  CHECK_ERRCODE(parse_ratfunc(ctx, "2t"), "ParseError");
  CHECK_ERRCODE(parse_ratfunc(ctx, "t^"), "ParseError");
  CHECK_ERRCODE(parse_ratfunc(ctx, "(t"), "ParseError");
  CHECK_ERRCODE(parse_ratfunc(ctx, "q"), "ParseError");
  CHECK_ERRCODE(parse_ratfunc(ctx, "t^70000"), "ParseError");
  CHECK_ERRCODE(parse_ratfunc(ctx, "1/(t-t)"), "DivisionByZero");
}

TEST_CASE("random values survive a print-parse cycle") {
  auto ctx = gf9();
  std::mt19937_64 rng(7);
  const auto random_poly = [&](int maxdeg) {
    std::vector<FieldElement> cs;
    const int d = static_cast<int>(rng() % (maxdeg + 1));
    for (int j = 0; j <= d; ++j) cs.push_back(ctx->from_index(rng() % ctx->order()));
    return Poly::from_coeffs(ctx, std::move(cs));
  };
  for (int trial = 0; trial < 50; ++trial) {
    const Poly p = random_poly(6);
    CHECK(parse_poly(ctx, to_string(p)) == p);
    Poly den = random_poly(3);
    if (den.is_zero()) den = Poly::one(ctx);
    const RatFunc r(random_poly(5), den);
    CHECK(parse_ratfunc(ctx, to_string(r)) == r);
  }
}

TEST_CASE("twist reports carry the model, invariants and certified partner") {
  Options o;
  o.kind = "cubic-tau";
  o.g = "z*t^4";
  const ordered_json j = pipeline::cmd_twist(o);
  CHECK(j["command"] == "twist");
  CHECK(j["kind"] == "cubic-tau");
  CHECK(j["n"] == 1);
  CHECK(j["q"] == 9);
  CHECK(j["g"] == "z*t^4");
  CHECK(j["model"]["a4"] == "2");
  CHECK(j["model"]["a6"] == "2*z*t^4");
  CHECK(j["discriminant"] == "1");
  CHECK(j["j_invariant"] == "0");
  CHECK(j["isomorphic_partner"]["kind"] == "cubic-tau2");
  CHECK(j["isomorphic_partner"]["verified"] == true);

  Options q;
  q.kind = "quad";
  q.f = "t";
  const ordered_json jq = pipeline::cmd_twist(q);
  CHECK(jq["model"]["a4"] == "2*t^2");
  CHECK(jq["discriminant"] == "t^6");
  CHECK_FALSE(jq.contains("isomorphic_partner"));
}

TEST_CASE("rank reports match the frozen headline numbers") {
  Options o;
  o.kind = "cubic-tau";
  o.g = "z*t^4";
  const ordered_json j = pipeline::cmd_rank(o);
  CHECK(j["rank"] == 6);
  CHECK(j["m_values"]["mX"] == 0);
  CHECK(j["m_values"]["mC"] == 3);
  CHECK(j["fast_path_used"] == true);
  CHECK(j["l_polynomials"]["C"]["genus"] == 3);
  CHECK(j["l_polynomials"]["C"]["path"] == "fast-maximal");
  const ordered_json expected_coeffs = {"1", "18", "135", "540", "1215", "1458", "729"};
  CHECK(j["l_polynomials"]["C"]["coefficients"] == expected_coeffs);

  Options q;
  q.kind = "quad";
  q.f = "t^3 - t";
  const ordered_json jq = pipeline::cmd_rank(q);
  CHECK(jq["rank"] == 4);
  CHECK(jq["m_values"]["mD"] == 1);

  Options s;
  s.kind = "sextic-tau";
  s.f = "t";
  s.g = "t";
  const ordered_json js = pipeline::cmd_rank(s);
  CHECK(js["rank"] == 2);
  CHECK(js["m_values"]["mH"] == 1);
  CHECK(js["m_values"]["mC"] == 0);
  CHECK(js["m_values"]["mD"] == 0);

  Options bad;
  bad.kind = "septic";
  CHECK_ERRCODE(pipeline::cmd_rank(bad), "BadParameter");
  Options nokind;
  CHECK_ERRCODE(pipeline::cmd_rank(nokind), "BadParameter");
  Options badn;
  badn.n = 0;
  badn.kind = "quad";
  badn.f = "t";
  CHECK_ERRCODE(pipeline::cmd_rank(badn), "BadParameter");
  Options badbudget;
  badbudget.kind = "quad";
  badbudget.f = "t";
  badbudget.budget_exponent = 50;
  CHECK_ERRCODE(pipeline::cmd_rank(badbudget), "BadParameter");
}

TEST_CASE("lfun reports expose the cover polynomials") {
  Options o;
  o.kind = "sextic-tau";
  o.f = "t";
  o.g = "t";
  const ordered_json j = pipeline::cmd_lfun(o);
  CHECK(j["supersingular_sign"] == 1);
  REQUIRE(j["covers"].is_array());
  CHECK(j["covers"].size() == 3);
  // every cover entry names itself and carries an ascending coefficient array
  for (const auto& entry : j["covers"]) {
    CHECK(entry.contains("cover"));
    CHECK(entry["coefficients"][0] == "1");
  }
}

TEST_CASE("fiber reports put the closed form and the oracle side by side") {
  Options o;
  o.kind = "quad";
  o.f = "t";
  const ordered_json j = pipeline::cmd_fibers(o);
  CHECK(j["all_agree"] == true);
  REQUIRE(j["fibers"].size() == 2);
  CHECK(j["fibers"][0]["place"] == "t");
  CHECK(j["fibers"][0]["closed_form"]["type"] == "I0*");
  CHECK(j["fibers"][0]["tate"]["type"] == "I0*");
  CHECK(j["fibers"][0]["agree"] == true);
  CHECK(j["fibers"][1]["place"] == "infinity");
  CHECK(j["fibers"][1]["tate"]["type"] == "I0*");

  Options c;
  c.kind = "cubic-tau";
  c.g = "t^2";
  const ordered_json jc = pipeline::cmd_fibers(c);
  REQUIRE(jc["fibers"].size() == 1);
  CHECK(jc["fibers"][0]["place"] == "infinity");
  CHECK(jc["fibers"][0]["closed_form"]["type"] == "IV*");

  Options q;
  q.kind = "quartic-tau";
  q.f = "t";
  const ordered_json jt = pipeline::cmd_fibers(q);
  REQUIRE(jt["fibers"].size() == 2);
  CHECK(jt["fibers"][0]["closed_form"]["type"] == "III");
  CHECK(jt["fibers"][1]["closed_form"]["type"] == "III*");

  Options bad;
  bad.kind = "quad";
  bad.f = "1/t";
  CHECK_ERRCODE(pipeline::cmd_fibers(bad), "NotAPolynomial");
}

TEST_CASE("surface reports include the Shioda-Tate block for cubic kinds") {
  Options o;
  o.kind = "cubic-tau";
  o.g = "z*t^4";
  const ordered_json j = pipeline::cmd_surface(o);
  CHECK(j["euler_number"] == 12);
  CHECK(j["b2"] == 10);
  CHECK(j["geometric_rank"] == 6);
  REQUIRE(j["fibers"].size() == 1);
  CHECK(j["fibers"][0]["type"] == "IV");
  CHECK(j["shioda_tate"]["rank"] == 6);
  CHECK(j["shioda_tate"]["rank_equals_geometric"] == true);

  Options q;
  q.kind = "quad";
  q.f = "t^3 - t";
  const ordered_json jq = pipeline::cmd_surface(q);
  CHECK(jq["euler_number"] == 24);
  CHECK(jq["b2"] == 22);
  CHECK_FALSE(jq.contains("geometric_rank"));
  CHECK_FALSE(jq.contains("shioda_tate"));
  CHECK(jq["fibers"].size() == 4);
}

TEST_CASE("the verified example reproduces the designated rank") {
  Options o;
  const ordered_json j = pipeline::cmd_verify_example(o);
  CHECK(j["n"] == 1);
  CHECK(j["alpha"] == "z");
  CHECK(j["g"] == "z*t^4");
  CHECK(j["genus"] == 3);
  CHECK(j["N1"] == 28);
  CHECK(j["weil_upper"] == 28);
  CHECK(j["maximal"] == true);
  CHECK(j["rank"] == 6);
  CHECK(j["expected_rank"] == 6);
  CHECK(j["geometric_rank"] == 6);
  CHECK(j["fast_path_used"] == true);
  CHECK(j["shioda_tate"]["rank_equals_geometric"] == true);

  Options even;
  even.n = 2;
  CHECK_ERRCODE(pipeline::cmd_verify_example(even), "BadParameter");
  Options extra;
  extra.kind = "quad";
  CHECK_ERRCODE(pipeline::cmd_verify_example(extra), "BadParameter");
}

TEST_CASE("command dispatch and thread-count determinism") {
  Options o;
  o.kind = "quad";
  o.f = "t^3 - t";
  CHECK(pipeline::run_command("rank", o) == pipeline::cmd_rank(o));
  CHECK_ERRCODE(pipeline::run_command("bogus", o), "UnknownCommand");

  Options single = o, multi = o;
  single.threads = 1;
  multi.threads = 4;
  CHECK(pipeline::cmd_rank(single).dump(2) == pipeline::cmd_rank(multi).dump(2));
  CHECK(pipeline::cmd_surface(single).dump(2) == pipeline::cmd_surface(multi).dump(2));

  Options v1, v4;
  v1.threads = 1;
  v4.threads = 4;
  CHECK(pipeline::cmd_verify_example(v1).dump(2) == pipeline::cmd_verify_example(v4).dump(2));
}
