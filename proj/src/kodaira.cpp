#include "twistlab/kodaira.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <utility>

#include "twistlab/errors.hpp"
#include "twistlab/lfun.hpp"

namespace twistlab::kodaira {
namespace {

using funcfield::RatFunc;
using gf3::CtxPtr;
using gf3::FieldElement;

long mod_floor(long x, long m) { return ((x % m) + m) % m; }

long ceil_div(long a, long b) { return (a + b - 1) / b; }

// ---------------------------------------------------------------------------
// residue-field arithmetic in GF(q)[t]/(π), elements kept as reduced Polys
// ---------------------------------------------------------------------------

Poly rmod(const Poly& a, const Poly& pi) { return a % pi; }

Poly rmul(const Poly& a, const Poly& b, const Poly& pi) { return (a * b) % pi; }

// inverse of a nonzero residue via the extended Euclidean algorithm
Poly rinv(const Poly& a, const Poly& pi) {
  Poly r0 = pi;
  Poly r1 = rmod(a, pi);
  if (r1.is_zero()) throw InternalError("ResidueInverse", "inverse of zero residue requested");
  Poly s0 = Poly::zero(pi.ctx());
  Poly s1 = Poly::one(pi.ctx());
  while (!r1.is_zero()) {
    auto [q, r2] = r0.divmod(r1);
    Poly s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.degree() != 0)
    throw InternalError("ResidueInverse", "place polynomial is not irreducible");
  return rmod(s0 * r0.leading_coeff().inverse(), pi);
}

Poly rpow(Poly base, const mpz_class& e, const Poly& pi) {
  Poly acc = Poly::one(pi.ctx());
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    acc = rmul(acc, acc, pi);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = rmul(acc, base, pi);
  }
  return acc;
}

// cube root in the residue field: Frobenius x ↦ x³ is bijective, inverse is
// x ↦ x^(3^(e−1)) where the field has 3^e elements
Poly rcbrt(const Poly& a, const Poly& pi) {
  const unsigned e = pi.ctx()->degree() * static_cast<unsigned>(pi.degree());
  mpz_class exp;
  mpz_ui_pow_ui(exp.get_mpz_t(), 3, e - 1);
  return rpow(rmod(a, pi), exp, pi);
}

// v_π of a nonzero polynomial
long pval(const Poly& a, const Poly& pi) {
  if (a.is_zero()) throw InternalError("ZeroValuation", "valuation of the zero polynomial");
  long v = 0;
  Poly cur = a;
  for (;;) {
    auto [q, r] = cur.divmod(pi);
    if (!r.is_zero()) return v;
    ++v;
    cur = std::move(q);
  }
}

// v_π(a) ≥ k, treating a = 0 as +infinity
bool val_at_least(const Poly& a, const Poly& pi, long k) {
  return a.is_zero() || pval(a, pi) >= k;
}

Poly divp(const Poly& a, const Poly& pi, long k) {
  Poly cur = a;
  for (long i = 0; i < k; ++i) {
    auto [q, r] = cur.divmod(pi);
    if (!r.is_zero()) throw InternalError("InexactLocalDivision", "division by the uniformizer");
    cur = std::move(q);
  }
  return cur;
}

// residue of a/π^k (valid when v_π(a) ≥ k)
Poly res_shift(const Poly& a, const Poly& pi, long k) {
  if (a.is_zero()) return Poly::zero(pi.ctx());
  return rmod(divp(a, pi, k), pi);
}

// the working y² = x³ + a2x² + a4x + a6 model at one finite place
struct LocalCurve {
  Poly pi;
  Poly a2, a4, a6;

  // x ↦ x + r: a2 is fixed in characteristic 3 (3r = 0), the rest shift
  void translate(const Poly& r) {
    const auto two = pi.ctx()->from_int(2);
    const Poly a4_new = a4 + a2 * r * two;
    const Poly a6_new = a6 + ((r + a2) * r + a4) * r;
    a4 = a4_new;
    a6 = a6_new;
  }

  Poly discriminant() const { return a2 * a2 * a4 * a4 - a2 * a2 * a2 * a6 - a4 * a4 * a4; }
};

std::string star_symbol(long n) { return "I" + std::to_string(n) + "*"; }

FiberReport finish(const Place& place, std::string type, long v_min, std::string notes) {
  const unsigned m = component_count(type);
  return FiberReport{place, std::move(type), m, v_min, std::move(notes)};
}

// Tate's algorithm over the local ring at π, restarted after non-minimal
// reductions.  The model must already be in y² = cubic form.
FiberReport tate_local(LocalCurve c, const Place& place, std::string notes) {
  const Poly& pi = c.pi;
  const Poly delta0 = c.discriminant();
  if (delta0.is_zero()) throw ValidationError("SingularModel", "discriminant vanishes identically");
  long guard = pval(delta0, pi) + 3;
  int reductions = 0;

  for (;;) {
    if (--guard < 0) throw InternalError("InternalLoopGuard", "more iterations than v(delta)");
    const Poly delta = c.discriminant();
    const long v_delta = delta.is_zero() ? -1 : pval(delta, pi);
    if (delta.is_zero()) throw InternalError("InternalLoopGuard", "discriminant collapsed to zero");
    // step 1: good reduction
    if (v_delta == 0) return finish(place, "I0", 0, notes + "smooth");

    // step 2: move the singular point of the reduction to (0, 0); in
    // characteristic 3 it is rational without any root search
    const Poly r2 = rmod(c.a2, pi);
    if (!r2.is_zero()) {
      // F' = −a2·x + a4 has the unique root a4/a2, necessarily the multiple root
      const Poly r = rmul(rmod(c.a4, pi), rinv(r2, pi), pi);
      c.translate(r);
      if (!val_at_least(c.a4, pi, 1) || !val_at_least(c.a6, pi, 1))
        throw InternalError("SingularPointMissed", "translation left a nonsingular origin");
      // a2 is a unit: node, multiplicative reduction
      return finish(place, "I" + std::to_string(v_delta), v_delta, notes + "multiplicative");
    }
    if (!val_at_least(c.a4, pi, 1))
      throw InternalError("SingularPointMissed", "unit a4 with singular reduction");
    c.translate(-rcbrt(rmod(c.a6, pi), pi));
    if (!val_at_least(c.a6, pi, 1))
      throw InternalError("SingularPointMissed", "cube-root translation failed");

    // step 3
    if (!val_at_least(c.a6, pi, 2)) return finish(place, "II", v_delta, notes + "additive");
    // step 4: b8 = a2·a6 − a4² once a1 = a3 = 0 in characteristic 3
    const Poly b8 = c.a2 * c.a6 - c.a4 * c.a4;
    if (!val_at_least(b8, pi, 3)) return finish(place, "III", v_delta, notes + "additive");
    // step 5: b6 = a6
    if (!val_at_least(c.a6, pi, 3)) return finish(place, "IV", v_delta, notes + "additive");

    // step 6: multiplicities of P(T) = T³ + (a2/π)T² + (a4/π²)T + (a6/π³)
    const Poly c2 = res_shift(c.a2, pi, 1);
    const Poly c4 = res_shift(c.a4, pi, 2);
    const Poly c6 = res_shift(c.a6, pi, 3);
    if (!c2.is_zero()) {
      // P' = −c2·T + c4: multiple root iff P vanishes at T = c4/c2
      const Poly r = rmul(c4, rinv(c2, pi), pi);
      const Poly pr = rmod(rmul(rmul(r, r, pi) + rmul(c2, r, pi) + c4, r, pi) + c6, pi);
      if (!pr.is_zero()) return finish(place, "I0*", v_delta, notes + "additive");

      // step 7: exactly one double root (a triple would force c2 = 0);
      // after moving it to 0: v(a2) = 1 and the I_n* subloop runs
      c.translate(pi * r);
      if (!val_at_least(c.a4, pi, 3) || !val_at_least(c.a6, pi, 4))
        throw InternalError("StarLoopSetup", "double root not at the origin");
      for (long j = 1;; ++j) {
        if (--guard < 0) throw InternalError("InternalLoopGuard", "runaway I_n* subloop");
        // odd test, n = 2j−1: Y² − a6/π^{2j+2} separable?
        if (!val_at_least(c.a6, pi, 2 * j + 3)) {
          const long n = 2 * j - 1;
          if (n != v_delta - 6)
            throw InternalError("StarValuationMismatch", "I_n* with v(delta) != n + 6");
          return finish(place, star_symbol(n), v_delta, notes + "additive");
        }
        // even test, n = 2j: (a2/π)X² + (a4/π^{j+2})X + a6/π^{2j+3} separable?
        const Poly qa = res_shift(c.a2, pi, 1);
        const Poly qb = res_shift(c.a4, pi, j + 2);
        const Poly qc = res_shift(c.a6, pi, 2 * j + 3);
        const Poly disc = rmod(rmul(qb, qb, pi) - rmul(qa, qc, pi), pi);
        if (!disc.is_zero()) {
          const long n = 2 * j;
          if (n != v_delta - 6)
            throw InternalError("StarValuationMismatch", "I_n* with v(delta) != n + 6");
          return finish(place, star_symbol(n), v_delta, notes + "additive");
        }
        // double root of the quadratic: −b/(2a) = b/a in characteristic 3
        const Poly x0 = rmul(qb, rinv(qa, pi), pi);
        c.translate(pi.pow(static_cast<unsigned>(j + 1)) * x0);
      }
    }
    if (!c4.is_zero()) return finish(place, "I0*", v_delta, notes + "additive");

    // step 8: triple root −c6^(1/3) of T³ + c6, moved to the origin
    c.translate(pi * -rcbrt(c6, pi));
    if (!val_at_least(c.a2, pi, 2) || !val_at_least(c.a4, pi, 3) || !val_at_least(c.a6, pi, 4))
      throw InternalError("TripleRootSetup", "triple root not at the origin");
    if (!val_at_least(c.a6, pi, 5)) return finish(place, "IV*", v_delta, notes + "additive");
    // step 9
    if (!val_at_least(c.a4, pi, 4)) return finish(place, "III*", v_delta, notes + "additive");
    // step 10
    if (!val_at_least(c.a6, pi, 6)) return finish(place, "II*", v_delta, notes + "additive");

    // step 11: non-minimal — divide and restart
    c.a2 = divp(c.a2, pi, 2);
    c.a4 = divp(c.a4, pi, 4);
    c.a6 = divp(c.a6, pi, 6);
    ++reductions;
    notes = "non-minimal, reduced " + std::to_string(reductions) + "x; ";
  }
}

Poly poly_coeff(const RatFunc& a, const char* name) {
  if (!a.is_polynomial())
    throw ValidationError("NotAPolynomial",
                          std::string(name) + " must be polynomial for fiber classification");
  return a.as_poly();
}

// complete the square: y ↦ y + a1·x + a3 removes a1, a3 when 2 is a unit
LocalCurve squared_model(const WeierstrassModel& w, Poly pi) {
  const Poly a1 = poly_coeff(w.a1, "a1");
  const Poly a2 = poly_coeff(w.a2, "a2");
  const Poly a3 = poly_coeff(w.a3, "a3");
  const Poly a4 = poly_coeff(w.a4, "a4");
  const Poly a6 = poly_coeff(w.a6, "a6");
  return LocalCurve{std::move(pi), a2 + a1 * a1, a4 - a1 * a3, a6 + a3 * a3};
}

void require_kind_inputs(TwistKind kind, const std::optional<Poly>& f,
                         const std::optional<Poly>& g) {
  if (elliptic::kind_needs_f(kind) != f.has_value())
    throw ValidationError("BadParameter", std::string(elliptic::kind_name(kind)) +
                                              (f ? " takes no f" : " requires f"));
  if (elliptic::kind_needs_g(kind) != g.has_value())
    throw ValidationError("BadParameter", std::string(elliptic::kind_name(kind)) +
                                              (g ? " takes no g" : " requires g"));
  if (f && f->is_zero()) throw ValidationError("BadParameter", "f must be nonzero");
  if (g && g->is_zero()) throw ValidationError("BadParameter", "g must be nonzero");
  if (f && g && f->ctx().get() != g->ctx().get() && !f->ctx()->modulus_equals(*g->ctx()))
    throw ValidationError("CtxMismatch", "f and g live over different fields");
}

const CtxPtr& input_ctx(const std::optional<Poly>& f, const std::optional<Poly>& g) {
  return f ? f->ctx() : g->ctx();
}

// local multiplicity of f at the place: v_π(f) at finite places, deg f at
// infinity (the table arguments use ℓ = −v_∞)
long table_multiplicity(const Poly& f, const Place& place) {
  if (place.is_infinite()) return -f.degree();
  const auto v = funcfield::valuation(f, place);
  return v.value_or(0);
}

FiberReport quartic_row(const Place& place, long k, std::string notes) {
  switch (k) {
    case 0: return finish(place, "I0", 0, std::move(notes));
    case 1: return finish(place, "III", 3, std::move(notes));
    case 2: return finish(place, "I0*", 6, std::move(notes));
    case 3: return finish(place, "III*", 9, std::move(notes));
    default: throw InternalError("BadResidue", "quartic residue out of range");
  }
}

}  // namespace

unsigned component_count(const std::string& s) {
  if (s == "II" || s == "I0") return 1;
  if (s == "III") return 2;
  if (s == "IV") return 3;
  if (s == "I0*") return 5;
  if (s == "IV*") return 7;
  if (s == "III*") return 8;
  if (s == "II*") return 9;
  if (s.size() >= 2 && s[0] == 'I') {
    const bool star = s.back() == '*';
    const std::string digits = s.substr(1, s.size() - 1 - (star ? 1 : 0));
    if (!digits.empty() &&
        std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      const unsigned long n = std::stoul(digits);
      return static_cast<unsigned>(star ? n + 5 : (n == 0 ? 1 : n));
    }
  }
  throw ValidationError("BadKodairaSymbol", "unrecognized Kodaira symbol: " + s);
}

FiberReport classify_closed_form(TwistKind kind, const std::optional<Poly>& f,
                                 const std::optional<Poly>& g, const Place& place) {
  require_kind_inputs(kind, f, g);
  const CtxPtr& ctx = input_ctx(f, g);
  if (place.ctx().get() != ctx.get() && !place.ctx()->modulus_equals(*ctx))
    throw ValidationError("CtxMismatch", "place and coefficients live over different fields");

  switch (kind) {
    case TwistKind::cubic_tau:
    case TwistKind::cubic_tau2: {
      const long d = g->degree();
      if (d <= 0 || d % 3 == 0)
        throw ValidationError("UnsupportedDegree",
                              "cubic table requires deg g positive and not divisible by 3");
      if (!place.is_infinite()) return finish(place, "I0", 0, "table: finite fibers smooth");
      const long r = d % 6;
      const long v = 12 * ceil_div(d, 6);
      switch (r) {
        case 1: return finish(place, "II*", v, "table: deg g = 1 mod 6");
        case 2: return finish(place, "IV*", v, "table: deg g = 2 mod 6");
        case 4: return finish(place, "IV", v, "table: deg g = 4 mod 6");
        case 5: return finish(place, "II", v, "table: deg g = 5 mod 6");
        default: throw InternalError("BadResidue", "cubic residue out of range");
      }
    }
    case TwistKind::quad: {
      const long l = table_multiplicity(*f, place);
      if (mod_floor(l, 2) == 1) return finish(place, "I0*", 6, "table: odd multiplicity");
      return finish(place, "I0", 0, "table: even multiplicity");
    }
    case TwistKind::quartic_tau:
      return quartic_row(place, mod_floor(table_multiplicity(*f, place), 4),
                         "table: multiplicity mod 4");
    case TwistKind::quartic_tau3:
      return quartic_row(place, mod_floor(3 * table_multiplicity(*f, place), 4),
                         "table: 3x multiplicity mod 4");
    case TwistKind::sextic_tau:
    case TwistKind::sextic_tau5: {
      if (!place.is_infinite()) {
        const long l = funcfield::valuation(*f, place).value_or(0);
        if (mod_floor(l, 2) == 1) return finish(place, "I0*", 6, "table: odd multiplicity");
        return finish(place, "I0", 0, "table: even multiplicity");
      }
      const long dg = g->degree();
      if (dg <= 0 || dg % 3 == 0)
        throw ValidationError("UnsupportedDegree",
                              "sextic table at infinity requires 3 not dividing deg g");
      const long M = 3 * f->degree() + dg;
      const long N = ceil_div(M, 6);
      const long k = 6 * N - M;
      const long v = 12 * N - 6 * f->degree();
      switch (k) {
        case 1: return finish(place, "II", v, "table: k = 1");
        case 2: return finish(place, "IV", v, "table: k = 2");
        case 4: return finish(place, "IV*", v, "table: k = 4");
        case 5: return finish(place, "II*", v, "table: k = 5");
        default: throw InternalError("BadResidue", "sextic residue out of range");
      }
    }
  }
  throw InternalError("BadKind", "unknown twist kind");
}

FiberReport tate_algorithm(const WeierstrassModel& model, const Place& place) {
  const CtxPtr& ctx = model.ctx;
  if (place.ctx().get() != ctx.get() && !place.ctx()->modulus_equals(*ctx))
    throw ValidationError("CtxMismatch", "place and model live over different fields");

  if (!place.is_infinite()) {
    LocalCurve c = squared_model(model, place.poly());
    std::string notes =
        place.degree() > 1 ? "residue degree " + std::to_string(place.degree()) + "; " : "";
    return tate_local(std::move(c), place, std::move(notes));
  }

  // infinity: s = 1/t with x ↦ t^{2N}x, y ↦ t^{3N}y, i.e. coefficient
  // reversal a_i(t) ↦ s^{iN}·a_i(1/s) with the minimal polynomializing N
  LocalCurve c = squared_model(model, Poly::t(ctx));
  long n_scale = 0;
  if (!c.a2.is_zero()) n_scale = std::max(n_scale, ceil_div(c.a2.degree(), 2));
  if (!c.a4.is_zero()) n_scale = std::max(n_scale, ceil_div(c.a4.degree(), 4));
  if (!c.a6.is_zero()) n_scale = std::max(n_scale, ceil_div(c.a6.degree(), 6));
  if (!c.a2.is_zero()) c.a2 = c.a2.reverse(static_cast<unsigned>(2 * n_scale));
  if (!c.a4.is_zero()) c.a4 = c.a4.reverse(static_cast<unsigned>(4 * n_scale));
  if (!c.a6.is_zero()) c.a6 = c.a6.reverse(static_cast<unsigned>(6 * n_scale));
  std::string notes = "rescaled at infinity, N = " + std::to_string(n_scale) + "; ";
  return tate_local(std::move(c), place, std::move(notes));
}

SurfaceReport surface_report(TwistKind kind, const std::optional<Poly>& f,
                             const std::optional<Poly>& g) {
  require_kind_inputs(kind, f, g);
  const CtxPtr& ctx = input_ctx(f, g);
  if (ctx->degree() % 2 != 0)
    throw ValidationError("BadParameter", "twist coefficients live over GF(3^(2n))");
  const unsigned n = ctx->degree() / 2;

  const auto fr = f ? std::optional<RatFunc>(RatFunc(*f)) : std::nullopt;
  const auto gr = g ? std::optional<RatFunc>(RatFunc(*g)) : std::nullopt;
  const WeierstrassModel model = elliptic::build_twist(kind, fr, gr, n);

  const RatFunc disc = elliptic::discriminant(model);
  if (!disc.is_polynomial())
    throw InternalError("NotAPolynomial", "polynomial inputs gave a non-polynomial discriminant");

  std::vector<Place> places;
  for (const auto& fe : funcfield::factorize(disc.as_poly()).factors)
    places.push_back(Place::finite_trusted(fe.factor));
  places.push_back(Place::infinity(ctx));
  std::sort(places.begin(), places.end(),
            [](const Place& a, const Place& b) { return a.canonical_less(b); });

  SurfaceReport rep;
  for (const Place& place : places) {
    FiberReport tate = tate_algorithm(model, place);
    const FiberReport table = classify_closed_form(kind, f, g, place);
    if (tate.kodaira_type != table.kodaira_type || tate.components != table.components ||
        tate.v_delta_min != table.v_delta_min)
      throw InternalError("OracleDisagreement",
                          "closed form says " + table.kodaira_type + " (v = " +
                              std::to_string(table.v_delta_min) + ") but Tate's algorithm says " +
                              tate.kodaira_type + " (v = " + std::to_string(tate.v_delta_min) +
                              ")");
    tate.notes += "; closed form agrees";
    rep.euler_number += tate.v_delta_min;
    rep.fibers.push_back(std::move(tate));
  }
  rep.b2 = rep.euler_number - 2;
  if (kind == TwistKind::cubic_tau || kind == TwistKind::cubic_tau2)
    rep.geometric_rank = 2 * g->degree() - 2;
  return rep;
}

ShiodaTateReport shioda_tate_check(TwistKind kind, const std::optional<Poly>& f,
                                   const std::optional<Poly>& g, unsigned n,
                                   const CountOptions& opts) {
  if (kind != TwistKind::cubic_tau && kind != TwistKind::cubic_tau2)
    throw ValidationError("BadParameter", "the geometric-rank comparison covers the cubic family");
  require_kind_inputs(kind, f, g);
  if (g->ctx()->degree() != 2 * n)
    throw ValidationError("CtxMismatch", "g must live over GF(3^(2n))");

  const SurfaceReport surf = surface_report(kind, f, g);
  const elliptic::RankReport rank =
      elliptic::rank_of_twist(kind, std::nullopt, RatFunc(*g), n, 0, opts);
  const auto mx = covers::maximality_status(covers::CoverModel::artin_schreier(n, RatFunc(*g)),
                                            opts);
  const bool expect_equal = mx.status != covers::Maximality::neither;

  ShiodaTateReport rep;
  rep.rank = rank.rank;
  rep.geometric_rank = *surf.geometric_rank;
  rep.b2 = surf.b2;
  for (const FiberReport& fib : surf.fibers)
    rep.fiber_correction += static_cast<long>(fib.components) - 1;
  rep.equality_expected = expect_equal;
  rep.rank_equals_geometric = rep.rank == rep.geometric_rank;

  if (rep.rank > rep.geometric_rank)
    throw InternalError("ConsistencyViolation", "rank exceeds the geometric rank");
  if (expect_equal && !rep.rank_equals_geometric)
    throw InternalError("ConsistencyViolation",
                        "extremal rank cover but rank != geometric rank");
  if (rep.b2 - 2 - rep.fiber_correction != rep.geometric_rank)
    throw InternalError("ConsistencyViolation", "fiber components break the rank bookkeeping");
  return rep;
}

}  // namespace twistlab::kodaira
