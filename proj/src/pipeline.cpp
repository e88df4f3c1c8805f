#include "twistlab/pipeline.hpp"

#include <algorithm>
#include <vector>

#include "twistlab/elliptic.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/kodaira.hpp"
#include "twistlab/textio.hpp"

namespace twistlab::pipeline {

namespace {

using covers::CountOptions;
using covers::CoverModel;
using elliptic::TwistKind;
using elliptic::WeierstrassModel;
using funcfield::Place;
using funcfield::Poly;
using funcfield::RatFunc;
using gf3::CtxPtr;
using gf3::FieldTower;

constexpr unsigned kMaxTowerN = 10;      // base fields up to GF(3^20)
constexpr unsigned kMaxBudgetExp = 40;   // 3^40 still fits in 64 bits

std::uint64_t pow3(unsigned e) {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < e; ++i) v *= 3;
  return v;
}

// Everything a command needs after validating the raw options.
struct Resolved {
  unsigned n = 1;
  CtxPtr ctx;
  std::optional<TwistKind> kind;
  std::optional<RatFunc> f, g;
  CountOptions copts;
  long mX = 0;
};

Resolved resolve(const Options& opts, bool kind_required) {
  if (opts.n < 1 || opts.n > kMaxTowerN)
    throw ValidationError("BadParameter",
                          "n must be between 1 and " + std::to_string(kMaxTowerN));
  if (opts.budget_exponent > kMaxBudgetExp)
    throw ValidationError("BadParameter",
                          "budget exponent must be at most " + std::to_string(kMaxBudgetExp));
  Resolved r;
  r.n = opts.n;
  r.ctx = FieldTower::global().ctx(2 * opts.n);
  if (opts.kind) {
    const auto k = elliptic::kind_from_name(*opts.kind);
    if (!k) throw ValidationError("BadParameter", "unknown twist kind \"" + *opts.kind + "\"");
    r.kind = *k;
  } else if (kind_required) {
    throw ValidationError("BadParameter", "this command requires --kind");
  }
  if (opts.f) r.f = textio::parse_ratfunc(r.ctx, *opts.f);
  if (opts.g) r.g = textio::parse_ratfunc(r.ctx, *opts.g);
  r.copts.budget = pow3(opts.budget_exponent);
  r.copts.threads = opts.threads;
  r.mX = opts.mX;
  return r;
}

// The twist kinds come in isomorphic pairs related by (x, y) -> (-x, i*y).
std::optional<TwistKind> isomorphic_partner(TwistKind k) {
  switch (k) {
    case TwistKind::cubic_tau: return TwistKind::cubic_tau2;
    case TwistKind::cubic_tau2: return TwistKind::cubic_tau;
    case TwistKind::sextic_tau: return TwistKind::sextic_tau5;
    case TwistKind::sextic_tau5: return TwistKind::sextic_tau;
    default: return std::nullopt;
  }
}

bool is_cubic(TwistKind k) {
  return k == TwistKind::cubic_tau || k == TwistKind::cubic_tau2;
}

ordered_json echo_inputs(const Resolved& r) {
  ordered_json j;
  if (r.f) j["f"] = textio::to_string(*r.f);
  if (r.g) j["g"] = textio::to_string(*r.g);
  return j;
}

ordered_json header(const char* command, const Resolved& r) {
  ordered_json j;
  j["command"] = command;
  if (r.kind) j["kind"] = elliptic::kind_name(*r.kind);
  j["n"] = r.n;
  j["q"] = r.ctx->order();
  const ordered_json inputs = echo_inputs(r);
  for (const auto& [key, value] : inputs.items()) j[key] = value;
  return j;
}

ordered_json coefficient_strings(const std::vector<mpz_class>& coeffs) {
  ordered_json arr = ordered_json::array();
  for (const mpz_class& c : coeffs) arr.push_back(c.get_str());
  return arr;
}

ordered_json cover_entry(const elliptic::MultiplicityEntry& e) {
  ordered_json j;
  j["cover"] = e.cover;
  j["genus"] = e.genus;
  j["m"] = e.m;
  j["path"] = e.path;
  j["coefficients"] = coefficient_strings(e.L.coeffs);
  return j;
}

// The polynomial inputs demanded by the fiber/surface commands.
std::optional<Poly> as_polynomial(const std::optional<RatFunc>& r, const char* name) {
  if (!r) return std::nullopt;
  if (!r->is_polynomial())
    throw ValidationError("NotAPolynomial",
                          std::string(name) + " must be a polynomial for fiber classification");
  return r->as_poly();
}

std::string place_string(const Place& p) {
  return p.is_infinite() ? "infinity" : textio::to_string(p.poly());
}

ordered_json fiber_json(const kodaira::FiberReport& rep) {
  ordered_json j;
  j["type"] = rep.kodaira_type;
  j["components"] = rep.components;
  j["v_delta_min"] = rep.v_delta_min;
  j["notes"] = rep.notes;
  return j;
}

ordered_json shioda_json(const kodaira::ShiodaTateReport& st) {
  ordered_json j;
  j["rank"] = st.rank;
  j["geometric_rank"] = st.geometric_rank;
  j["b2"] = st.b2;
  j["fiber_correction"] = st.fiber_correction;
  j["equality_expected"] = st.equality_expected;
  j["rank_equals_geometric"] = st.rank_equals_geometric;
  return j;
}

elliptic::RankReport run_rank(const Resolved& r) {
  return elliptic::rank_of_twist(*r.kind, r.f, r.g, r.n, r.mX, r.copts);
}

}  // namespace

ordered_json cmd_twist(const Options& opts) {
  const Resolved r = resolve(opts, /*kind_required=*/true);
  const WeierstrassModel model = elliptic::build_twist(*r.kind, r.f, r.g, r.n);
  ordered_json j = header("twist", r);
  ordered_json m;
  m["a1"] = textio::to_string(model.a1);
  m["a2"] = textio::to_string(model.a2);
  m["a3"] = textio::to_string(model.a3);
  m["a4"] = textio::to_string(model.a4);
  m["a6"] = textio::to_string(model.a6);
  j["model"] = m;
  j["discriminant"] = textio::to_string(elliptic::discriminant(model));
  j["j_invariant"] = textio::to_string(elliptic::j_invariant(model));
  if (const auto partner = isomorphic_partner(*r.kind)) {
    const auto iso = elliptic::twist_isomorphism_check(*r.kind, *partner, r.f, r.g, r.n);
    ordered_json p;
    p["kind"] = elliptic::kind_name(*partner);
    p["map"] = iso.map;
    p["inverse"] = iso.inverse;
    p["verified"] = iso.verified;
    j["isomorphic_partner"] = p;
  }
  return j;
}

ordered_json cmd_rank(const Options& opts) {
  const Resolved r = resolve(opts, /*kind_required=*/true);
  const elliptic::RankReport rep = run_rank(r);
  ordered_json j = header("rank", r);
  j["rank"] = rep.rank;
  ordered_json mv;
  mv["mX"] = rep.mX;
  for (const auto& e : rep.m_values)
    if (e.cover != "X") mv["m" + e.cover] = e.m;
  j["m_values"] = mv;
  ordered_json lp;
  for (const auto& e : rep.m_values)
    if (e.cover != "X") lp[e.cover] = cover_entry(e);
  j["l_polynomials"] = lp;
  j["fast_path_used"] = rep.fast_path_used;
  return j;
}

ordered_json cmd_lfun(const Options& opts) {
  const Resolved r = resolve(opts, /*kind_required=*/true);
  const elliptic::RankReport rep = run_rank(r);
  ordered_json j = header("lfun", r);
  j["supersingular_sign"] = (r.n % 2 == 1) ? 1 : -1;
  ordered_json arr = ordered_json::array();
  for (const auto& e : rep.m_values)
    if (e.cover != "X") arr.push_back(cover_entry(e));
  j["covers"] = arr;
  return j;
}

ordered_json cmd_fibers(const Options& opts) {
  const Resolved r = resolve(opts, /*kind_required=*/true);
  const auto fp = as_polynomial(r.f, "f");
  const auto gp = as_polynomial(r.g, "g");
  const WeierstrassModel model = elliptic::build_twist(*r.kind, r.f, r.g, r.n);

  const RatFunc delta = elliptic::discriminant(model);
  std::vector<Place> places;
  for (const auto& fac : funcfield::factorize(delta.as_poly(), opts.seed).factors)
    places.push_back(Place::finite_trusted(fac.factor));
  places.push_back(Place::infinity(r.ctx));
  std::sort(places.begin(), places.end(),
            [](const Place& a, const Place& b) { return a.canonical_less(b); });

  ordered_json j = header("fibers", r);
  ordered_json arr = ordered_json::array();
  bool all_agree = true;
  for (const Place& p : places) {
    const kodaira::FiberReport closed = kodaira::classify_closed_form(*r.kind, fp, gp, p);
    const kodaira::FiberReport tate = kodaira::tate_algorithm(model, p);
    const bool agree = closed.kodaira_type == tate.kodaira_type &&
                       closed.components == tate.components &&
                       closed.v_delta_min == tate.v_delta_min;
    all_agree = all_agree && agree;
    ordered_json entry;
    entry["place"] = place_string(p);
    entry["degree"] = p.degree();
    entry["closed_form"] = fiber_json(closed);
    entry["tate"] = fiber_json(tate);
    entry["agree"] = agree;
    arr.push_back(entry);
  }
  j["fibers"] = arr;
  j["all_agree"] = all_agree;
  return j;
}

ordered_json cmd_surface(const Options& opts) {
  const Resolved r = resolve(opts, /*kind_required=*/true);
  const auto fp = as_polynomial(r.f, "f");
  const auto gp = as_polynomial(r.g, "g");
  const kodaira::SurfaceReport rep = kodaira::surface_report(*r.kind, fp, gp);

  ordered_json j = header("surface", r);
  j["euler_number"] = rep.euler_number;
  j["b2"] = rep.b2;
  if (rep.geometric_rank) j["geometric_rank"] = *rep.geometric_rank;
  ordered_json arr = ordered_json::array();
  for (const auto& fiber : rep.fibers) {
    ordered_json entry;
    entry["place"] = place_string(fiber.place);
    entry["degree"] = fiber.place.degree();
    const ordered_json details = fiber_json(fiber);
    for (const auto& [key, value] : details.items()) entry[key] = value;
    arr.push_back(entry);
  }
  j["fibers"] = arr;
  if (is_cubic(*r.kind) && gp)
    j["shioda_tate"] = shioda_json(kodaira::shioda_tate_check(*r.kind, fp, gp, r.n, r.copts));
  return j;
}

ordered_json cmd_verify_example(const Options& opts) {
  if (opts.kind || opts.f || opts.g)
    throw ValidationError("BadParameter", "verify-example takes only --n (plus budget/threads)");
  if (opts.n % 2 == 0)
    throw ValidationError("BadParameter", "the verified example requires odd n");
  const Resolved r = resolve(opts, /*kind_required=*/false);

  // g = α·t^(3ⁿ+1) with α^(3ⁿ−1) = −1, the curve whose Artin–Schreier cover
  // is maximal and whose rank is exactly 2·3ⁿ.
  const gf3::FieldElement alpha = gf3::solve_alpha(r.n);
  const unsigned d = static_cast<unsigned>(pow3(r.n)) + 1;
  const Poly g = Poly::monomial(alpha, d);

  const CoverModel cover = CoverModel::artin_schreier(r.n, RatFunc(g), opts.seed);
  const covers::MaximalityReport max = covers::maximality_status(cover, r.copts);
  if (max.status != covers::Maximality::maximal)
    throw InternalError("ConsistencyViolation",
                        "the designated cover failed the maximality count");

  elliptic::RankReport rank;
  {
    Resolved rr = r;
    rr.kind = TwistKind::cubic_tau;
    rr.g = RatFunc(g);
    rank = run_rank(rr);
  }
  const long expected = 2 * static_cast<long>(pow3(r.n));
  if (rank.rank != expected)
    throw InternalError("ConsistencyViolation",
                        "rank " + std::to_string(rank.rank) + " differs from the predicted " +
                            std::to_string(expected));

  const kodaira::ShiodaTateReport st =
      kodaira::shioda_tate_check(TwistKind::cubic_tau, std::nullopt, g, r.n, r.copts);

  ordered_json j;
  j["command"] = "verify-example";
  j["n"] = r.n;
  j["q"] = r.ctx->order();
  j["alpha"] = textio::to_string(alpha);
  j["g"] = textio::to_string(g);
  j["genus"] = max.genus;
  j["N1"] = max.n1;
  j["weil_upper"] = max.upper;
  j["maximal"] = true;
  for (const auto& e : rank.m_values)
    if (e.cover == "C") j["l_polynomial"] = cover_entry(e);
  j["rank"] = rank.rank;
  j["expected_rank"] = expected;
  j["geometric_rank"] = st.geometric_rank;
  j["fast_path_used"] = rank.fast_path_used;
  j["shioda_tate"] = shioda_json(st);
  return j;
}

ordered_json run_command(const std::string& command, const Options& opts) {
  if (command == "twist") return cmd_twist(opts);
  if (command == "rank") return cmd_rank(opts);
  if (command == "lfun") return cmd_lfun(opts);
  if (command == "fibers") return cmd_fibers(opts);
  if (command == "surface") return cmd_surface(opts);
  if (command == "verify-example") return cmd_verify_example(opts);
  throw ValidationError("UnknownCommand", "unknown command \"" + command + "\"");
}

}  // namespace twistlab::pipeline
