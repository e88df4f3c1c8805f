#include "twistlab/elliptic.hpp"

#include <algorithm>
#include <utility>

#include "twistlab/errors.hpp"

namespace twistlab::elliptic {

using gf3::FieldTower;

namespace {

bool same_field(const CtxPtr& a, const CtxPtr& b) {
  return a.get() == b.get() || (a->degree() == b->degree() && a->modulus_equals(*b));
}

void require_field(const CtxPtr& expected, const RatFunc& x, const char* what) {
  if (!same_field(expected, x.ctx()))
    throw ValidationError("CtxMismatch", std::string(what) + " lives in the wrong field");
}

// x·k for a small integer k, mapped through the characteristic
RatFunc scl(const RatFunc& x, long k) {
  return x * RatFunc::constant(x.ctx()->from_int(k));
}

RatFunc disc_impl(const WeierstrassModel& w) {
  const RatFunc& a1 = w.a1;
  const RatFunc& a2 = w.a2;
  const RatFunc& a3 = w.a3;
  const RatFunc& a4 = w.a4;
  const RatFunc& a6 = w.a6;
  const RatFunc b2 = a1 * a1 + scl(a2, 4);
  const RatFunc b4 = scl(a4, 2) + a1 * a3;
  const RatFunc b6 = a3 * a3 + scl(a6, 4);
  const RatFunc b8 = a1 * a1 * a6 + scl(a2 * a6, 4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -(b2 * b2 * b8) - scl(b4 * b4 * b4, 8) - scl(b6 * b6, 27) + scl(b2 * b4 * b6, 9);
}

}  // namespace

const char* kind_name(TwistKind k) {
  switch (k) {
    case TwistKind::quad: return "quad";
    case TwistKind::cubic_tau: return "cubic-tau";
    case TwistKind::cubic_tau2: return "cubic-tau2";
    case TwistKind::quartic_tau: return "quartic-tau";
    case TwistKind::quartic_tau3: return "quartic-tau3";
    case TwistKind::sextic_tau: return "sextic-tau";
    case TwistKind::sextic_tau5: return "sextic-tau5";
  }
  throw InternalError("BadKind", "unknown twist kind");
}

std::optional<TwistKind> kind_from_name(const std::string& name) {
  for (TwistKind k : {TwistKind::quad, TwistKind::cubic_tau, TwistKind::cubic_tau2,
                      TwistKind::quartic_tau, TwistKind::quartic_tau3, TwistKind::sextic_tau,
                      TwistKind::sextic_tau5})
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

bool kind_needs_f(TwistKind k) {
  return k != TwistKind::cubic_tau && k != TwistKind::cubic_tau2;
}

bool kind_needs_g(TwistKind k) {
  switch (k) {
    case TwistKind::cubic_tau:
    case TwistKind::cubic_tau2:
    case TwistKind::sextic_tau:
    case TwistKind::sextic_tau5: return true;
    default: return false;
  }
}

WeierstrassModel WeierstrassModel::make(const CtxPtr& ctx, RatFunc a1, RatFunc a2, RatFunc a3,
                                        RatFunc a4, RatFunc a6) {
  require_field(ctx, a1, "a1");
  require_field(ctx, a2, "a2");
  require_field(ctx, a3, "a3");
  require_field(ctx, a4, "a4");
  require_field(ctx, a6, "a6");
  WeierstrassModel w{ctx, std::move(a1), std::move(a2), std::move(a3), std::move(a4),
                     std::move(a6)};
  if (disc_impl(w).is_zero())
    throw ValidationError("SingularModel", "the discriminant vanishes; not an elliptic curve");
  return w;
}

WeierstrassModel WeierstrassModel::short_form(const CtxPtr& ctx, RatFunc a4, RatFunc a6) {
  const RatFunc zero = RatFunc::zero(ctx);
  return make(ctx, zero, zero, zero, std::move(a4), std::move(a6));
}

bool WeierstrassModel::operator==(const WeierstrassModel& o) const {
  return same_field(ctx, o.ctx) && a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 &&
         a6 == o.a6;
}

RatFunc discriminant(const WeierstrassModel& model) { return disc_impl(model); }

RatFunc j_invariant(const WeierstrassModel& model) {
  const RatFunc delta = disc_impl(model);
  if (delta.is_zero())
    throw ValidationError("SingularModel", "j is undefined: the discriminant vanishes");
  const RatFunc b2 = model.a1 * model.a1 + scl(model.a2, 4);
  const RatFunc b4 = scl(model.a4, 2) + model.a1 * model.a3;
  const RatFunc c4 = b2 * b2 - scl(b4, 24);
  return c4 * c4 * c4 / delta;
}

WeierstrassModel build_twist(TwistKind kind, const std::optional<RatFunc>& f,
                             const std::optional<RatFunc>& g, unsigned n) {
  if (n < 1) throw ValidationError("BadParameter", "n must be >= 1");
  const CtxPtr ctx = FieldTower::global().ctx(2 * n);
  if (kind_needs_f(kind) && !f)
    throw ValidationError("BadParameter",
                          std::string(kind_name(kind)) + " twists need the datum f");
  if (kind_needs_g(kind) && !g)
    throw ValidationError("BadParameter",
                          std::string(kind_name(kind)) + " twists need the datum g");
  if (!kind_needs_f(kind) && f)
    throw ValidationError("BadParameter", std::string(kind_name(kind)) + " twists take no f");
  if (!kind_needs_g(kind) && g)
    throw ValidationError("BadParameter", std::string(kind_name(kind)) + " twists take no g");

  if (f) {
    require_field(ctx, *f, "f");
    if (funcfield::is_square(*f).is_square)
      throw ValidationError("SquareF", "f is a square, so the twist is trivial");
  }
  if (g) {
    require_field(ctx, *g, "g");
    try {
      funcfield::as_reduce(*g);
    } catch (const Error& e) {
      if (std::string(e.code()) == "AsTrivial")
        throw ValidationError("AsTrivialG",
                              "g has the form h^3 - h (up to a trace-zero constant), so the "
                              "twist is trivial");
      throw;
    }
  }

  const RatFunc one = RatFunc::one(ctx);
  switch (kind) {
    case TwistKind::quad: return WeierstrassModel::short_form(ctx, -(*f * *f), RatFunc::zero(ctx));
    case TwistKind::cubic_tau: return WeierstrassModel::short_form(ctx, -one, -*g);
    case TwistKind::cubic_tau2: return WeierstrassModel::short_form(ctx, -one, *g);
    case TwistKind::quartic_tau: return WeierstrassModel::short_form(ctx, -*f, RatFunc::zero(ctx));
    case TwistKind::quartic_tau3:
      return WeierstrassModel::short_form(ctx, -(*f * *f * *f), RatFunc::zero(ctx));
    case TwistKind::sextic_tau:
      return WeierstrassModel::short_form(ctx, -(*f * *f), *f * *f * *f * *g);
    case TwistKind::sextic_tau5:
      return WeierstrassModel::short_form(ctx, -(*f * *f), -(*f * *f * *f * *g));
  }
  throw InternalError("BadKind", "unknown twist kind");
}

CurvePoint CurvePoint::affine(RatFunc x, RatFunc y) {
  require_field(x.ctx(), y, "y");
  CurvePoint p;
  p.xy_.emplace(std::move(x), std::move(y));
  return p;
}

const RatFunc& CurvePoint::x() const {
  if (!xy_) throw ValidationError("BadParameter", "the point at infinity has no coordinates");
  return xy_->first;
}

const RatFunc& CurvePoint::y() const {
  if (!xy_) throw ValidationError("BadParameter", "the point at infinity has no coordinates");
  return xy_->second;
}

bool CurvePoint::operator==(const CurvePoint& o) const {
  if (is_infinity() || o.is_infinity()) return is_infinity() == o.is_infinity();
  return xy_->first == o.xy_->first && xy_->second == o.xy_->second;
}

bool on_curve(const WeierstrassModel& w, const CurvePoint& P) {
  if (P.is_infinity()) return true;
  const RatFunc& x = P.x();
  const RatFunc& y = P.y();
  require_field(w.ctx, x, "x");
  const RatFunc lhs = y * y + w.a1 * x * y + w.a3 * y;
  const RatFunc rhs = x * x * x + w.a2 * x * x + w.a4 * x + w.a6;
  return lhs == rhs;
}

namespace {

void require_on_curve(const WeierstrassModel& w, const CurvePoint& P, const char* who) {
  if (!on_curve(w, P))
    throw ValidationError("PointNotOnCurve",
                          std::string(who) + " does not satisfy the model equation");
}

}  // namespace

CurvePoint group_neg(const WeierstrassModel& w, const CurvePoint& P) {
  if (P.is_infinity()) return P;
  require_on_curve(w, P, "P");
  return CurvePoint::affine(P.x(), -P.y() - w.a1 * P.x() - w.a3);
}

CurvePoint group_add(const WeierstrassModel& w, const CurvePoint& P, const CurvePoint& Q) {
  require_on_curve(w, P, "P");
  require_on_curve(w, Q, "Q");
  if (P.is_infinity()) return Q;
  if (Q.is_infinity()) return P;
  const RatFunc &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();

  RatFunc lambda = RatFunc::zero(w.ctx);
  RatFunc nu = RatFunc::zero(w.ctx);
  if (x1 == x2) {
    if (y2 == -y1 - w.a1 * x2 - w.a3) return CurvePoint::infinity();
    // remaining case: P = Q with nonvanishing tangent denominator
    const RatFunc den = scl(y1, 2) + w.a1 * x1 + w.a3;
    lambda = (scl(x1 * x1, 3) + scl(w.a2 * x1, 2) + w.a4 - w.a1 * y1) / den;
    nu = (-(x1 * x1 * x1) + w.a4 * x1 + scl(w.a6, 2) - w.a3 * y1) / den;
  } else {
    const RatFunc den = x2 - x1;
    lambda = (y2 - y1) / den;
    nu = (y1 * x2 - y2 * x1) / den;
  }
  const RatFunc x3 = lambda * lambda + w.a1 * lambda - w.a2 - x1 - x2;
  const RatFunc y3 = -(lambda + w.a1) * x3 - nu - w.a3;
  CurvePoint R = CurvePoint::affine(x3, y3);
  if (!on_curve(w, R))
    throw InternalError("GroupLawViolation", "chord-and-tangent result left the curve");
  return R;
}

CurvePoint scalar_mul(const WeierstrassModel& w, long m, const CurvePoint& P) {
  require_on_curve(w, P, "P");
  if (m == 0) return CurvePoint::infinity();
  CurvePoint base = m < 0 ? group_neg(w, P) : P;
  unsigned long k = m < 0 ? -static_cast<unsigned long>(m) : static_cast<unsigned long>(m);
  CurvePoint acc = CurvePoint::infinity();
  while (k > 0) {
    if (k & 1ul) acc = group_add(w, acc, base);
    k >>= 1;
    if (k > 0) base = group_add(w, base, base);
  }
  return acc;
}

namespace {

void require_unit(const FieldElement& u) {
  const FieldElement one = u.ctx()->one();
  if (u.is_zero() || !(u.pow(4) == one))
    throw ValidationError("BadUnit", "the unit must satisfy u^4 = 1");
}

int norm3(int c) {
  int r = c % 3;
  if (r < 0) r += 3;
  return r;
}

}  // namespace

CurvePoint automorphism_apply(const AutomorphismTag& tag, const CurvePoint& P) {
  require_unit(tag.u);
  if (P.is_infinity()) return P;
  const CtxPtr& ctx = tag.u.ctx();
  require_field(ctx, P.x(), "x");
  const RatFunc u2 = RatFunc::constant(tag.u * tag.u);
  const RatFunc u3 = RatFunc::constant(tag.u * tag.u * tag.u);
  const RatFunc shift = RatFunc::constant(ctx->from_int(norm3(tag.tshift)));
  return CurvePoint::affine(u2 * P.x() + shift, u3 * P.y());
}

unsigned automorphism_order(const AutomorphismTag& tag) {
  require_unit(tag.u);
  const FieldElement one = tag.u.ctx()->one();
  // compose (u1,c1)∘(u2,c2) = (u1·u2, u1²·c2 + c1); u² = ±1 keeps shifts in GF(3)
  FieldElement u_acc = tag.u;
  int c_acc = norm3(tag.tshift);
  unsigned order = 1;
  while (!(u_acc == one && c_acc == 0)) {
    const int sq = tag.u * tag.u == one ? 1 : -1;
    c_acc = norm3(sq * c_acc + norm3(tag.tshift));
    u_acc = tag.u * u_acc;
    if (++order > 12)
      throw InternalError("LoopGuard", "automorphism iteration failed to close");
  }
  if (order != 1 && order != 2 && order != 3 && order != 4 && order != 6)
    throw InternalError("BadOrder", "automorphism order outside {1,2,3,4,6}");
  return order;
}

IsomorphismReport twist_isomorphism_check(TwistKind kind_a, TwistKind kind_b,
                                          const std::optional<RatFunc>& f,
                                          const std::optional<RatFunc>& g, unsigned n) {
  const bool cubic_pair = (kind_a == TwistKind::cubic_tau && kind_b == TwistKind::cubic_tau2) ||
                          (kind_a == TwistKind::cubic_tau2 && kind_b == TwistKind::cubic_tau);
  const bool sextic_pair = (kind_a == TwistKind::sextic_tau && kind_b == TwistKind::sextic_tau5) ||
                           (kind_a == TwistKind::sextic_tau5 && kind_b == TwistKind::sextic_tau);
  if (!cubic_pair && !sextic_pair)
    throw ValidationError("NotIsomorphicPair",
                          std::string(kind_name(kind_a)) + " and " + kind_name(kind_b) +
                              " carry no certified isomorphism over the base function field");

  const WeierstrassModel A = build_twist(kind_a, f, g, n);
  const WeierstrassModel B = build_twist(kind_b, f, g, n);
  const CtxPtr& ctx = A.ctx;

  // i = the square root of −1, taken from the quadratic subfield
  const FieldElement i_elt =
      FieldTower::global().embedding(2, 2 * n).apply(FieldTower::global().ctx(2)->generator());
  if (!(i_elt * i_elt == -ctx->one()))
    throw InternalError("BadUnit", "the embedded generator does not square to -1");

  // Substitute (x, y) = (−X, i·Y) into A: y² = x³ + a4·x + a6 and renormalize:
  //   (iY)² = −Y²  and  (−X)³ + a4(−X) + a6 = −(X³ + a4X − a6),
  // so the image curve is Y² = X³ + a4·X − a6.
  const WeierstrassModel image = WeierstrassModel::short_form(ctx, A.a4, -A.a6);
  if (!(image == B))
    throw InternalError("IsomorphismViolation",
                        "certified map failed to carry the first equation to the second");

  // The inverse map is (X, Y) ↦ (−X, −i·Y); composing must give the identity.
  const RatFunc sx = RatFunc::t(ctx);
  const RatFunc sy = RatFunc::t(ctx).pow(2) + RatFunc::one(ctx);
  const RatFunc i_r = RatFunc::constant(i_elt);
  const RatFunc fwd_x = -sx, fwd_y = i_r * sy;
  const RatFunc back_x = -fwd_x, back_y = -i_r * fwd_y;
  if (!(back_x == sx) || !(back_y == sy))
    throw InternalError("IsomorphismViolation", "map composed with its inverse is not identity");

  IsomorphismReport rep;
  rep.kind_a = kind_a;
  rep.kind_b = kind_b;
  rep.map = "(x, y) -> (-x, i*y)";
  rep.inverse = "(x, y) -> (-x, -i*y)";
  rep.verified = true;
  return rep;
}

namespace {

MultiplicityEntry make_entry(const std::string& name, const covers::CoverModel& cover,
                             unsigned n, const CountOptions& opts) {
  const lfun::TracedL traced = lfun::l_function_traced(cover, opts);
  const auto dec = lfun::supersingular_multiplicity(traced.L, n);
  MultiplicityEntry e;
  e.cover = name;
  e.genus = covers::genus(cover).genus;
  e.m = dec.m;
  e.L = traced.L;
  e.path = traced.path;
  return e;
}

}  // namespace

RankReport rank_of_twist(TwistKind kind, const std::optional<RatFunc>& f,
                         const std::optional<RatFunc>& g, unsigned n, long mX,
                         const CountOptions& opts) {
  if (n < 1) throw ValidationError("BadParameter", "n must be >= 1");
  if (mX < 0) throw ValidationError("BadParameter", "the base multiplicity cannot be negative");
  if (kind_needs_f(kind) && !f)
    throw ValidationError("BadParameter", std::string(kind_name(kind)) + " needs the datum f");
  if (kind_needs_g(kind) && !g)
    throw ValidationError("BadParameter", std::string(kind_name(kind)) + " needs the datum g");
  if (!kind_needs_f(kind) && f)
    throw ValidationError("BadParameter", std::string(kind_name(kind)) + " takes no f");
  if (!kind_needs_g(kind) && g)
    throw ValidationError("BadParameter", std::string(kind_name(kind)) + " takes no g");

  RankReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.mX = mX;

  MultiplicityEntry x_entry;
  x_entry.cover = "X";
  x_entry.genus = 0;
  x_entry.m = static_cast<unsigned>(mX);
  x_entry.L = lfun::l_function(covers::CoverModel::base_p1(n), opts);
  x_entry.path = "assumed";
  rep.m_values.push_back(x_entry);

  long rank = 0;
  switch (kind) {
    case TwistKind::quad: {
      const auto d = make_entry("D", covers::CoverModel::quadratic(n, *f), n, opts);
      rank = 4 * (static_cast<long>(d.m) - mX);
      rep.m_values.push_back(d);
      break;
    }
    case TwistKind::cubic_tau:
    case TwistKind::cubic_tau2: {
      const auto c = make_entry("C", covers::CoverModel::artin_schreier(n, *g), n, opts);
      rank = 2 * (static_cast<long>(c.m) - mX);
      rep.m_values.push_back(c);
      break;
    }
    case TwistKind::quartic_tau:
    case TwistKind::quartic_tau3: {
      const auto gq = make_entry("G", covers::CoverModel::quartic(n, *f), n, opts);
      const auto d = make_entry("D", covers::CoverModel::quadratic(n, *f), n, opts);
      rank = 2 * (static_cast<long>(gq.m) - static_cast<long>(d.m));
      rep.m_values.push_back(gq);
      rep.m_values.push_back(d);
      break;
    }
    case TwistKind::sextic_tau:
    case TwistKind::sextic_tau5: {
      const auto h = make_entry("H", covers::CoverModel::sextic(n, *f, *g), n, opts);
      const auto c = make_entry("C", covers::CoverModel::artin_schreier(n, *g), n, opts);
      const auto d = make_entry("D", covers::CoverModel::quadratic(n, *f), n, opts);
      rank = 2 * (static_cast<long>(h.m) - static_cast<long>(c.m) - static_cast<long>(d.m) + mX);
      rep.m_values.push_back(h);
      rep.m_values.push_back(c);
      rep.m_values.push_back(d);
      break;
    }
  }
  if (rank < 0) {
    std::string ms;
    for (const auto& e : rep.m_values) ms += " m(" + e.cover + ")=" + std::to_string(e.m);
    throw InternalError("NegativeRank",
                        "the multiplicity formula produced a negative rank:" + ms);
  }
  rep.rank = rank;
  rep.fast_path_used = std::all_of(rep.m_values.begin(), rep.m_values.end(), [](const auto& e) {
    return e.path == "trivial" || e.path == "fast-maximal" || e.path == "fast-minimal" ||
           e.path == "assumed";
  });
  return rep;
}

BatteryReport verify_point_battery(const WeierstrassModel& model, const CurvePoint& P,
                                   unsigned bound) {
  BatteryReport rep;
  rep.bound = bound;
  if (P.is_infinity()) {
    rep.passed = false;
    rep.note = "zero point: nothing to test";
    return rep;
  }
  require_on_curve(model, P, "P");
  std::vector<CurvePoint> seen;
  CurvePoint acc = P;
  for (unsigned m = 1; m <= bound; ++m) {
    if (acc.is_infinity()) {
      rep.passed = false;
      rep.note = "multiple " + std::to_string(m) + "P is the zero point (torsion)";
      return rep;
    }
    if (!on_curve(model, acc)) {
      rep.passed = false;
      rep.note = "multiple " + std::to_string(m) + "P left the curve";
      return rep;
    }
    for (const CurvePoint& prev : seen) {
      if (prev == acc) {
        rep.passed = false;
        rep.note = "multiples of P repeat before the bound (torsion)";
        return rep;
      }
    }
    rep.x_degrees.push_back(
        std::max(acc.x().num().degree(), acc.x().den().degree()));
    seen.push_back(acc);
    if (m < bound) acc = group_add(model, acc, P);
  }
  rep.passed = true;
  rep.note = "battery passed: multiples up to " + std::to_string(bound) +
             "P are affine, distinct and on the curve";
  return rep;
}

}  // namespace twistlab::elliptic
