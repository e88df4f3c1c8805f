#pragma once

// Weierstrass models over GF(3^(2n))(t): the seven twisted models of
// y² = x³ − x, the chord-and-tangent group law in its long form (valid in
// characteristic 3), the order-classified automorphisms Φ_{u,c}, certified
// twist isomorphisms, Mordell–Weil ranks from L-function multiplicities, and
// a repeated-multiple battery that witnesses positive rank.

#include <optional>
#include <string>
#include <vector>

#include "twistlab/covers.hpp"
#include "twistlab/funcfield.hpp"
#include "twistlab/gf3.hpp"
#include "twistlab/lfun.hpp"

namespace twistlab::elliptic {

using covers::CountOptions;
using funcfield::RatFunc;
using gf3::CtxPtr;
using gf3::FieldElement;

enum class TwistKind {
  quad,
  cubic_tau,
  cubic_tau2,
  quartic_tau,
  quartic_tau3,
  sextic_tau,
  sextic_tau5,
};

// CLI-facing spelling: "quad", "cubic-tau", "cubic-tau2", ...
const char* kind_name(TwistKind k);
std::optional<TwistKind> kind_from_name(const std::string& name);
bool kind_needs_f(TwistKind k);
bool kind_needs_g(TwistKind k);

// y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆ over GF(3^(2n))(t), nonsingular.
struct WeierstrassModel {
  CtxPtr ctx;
  RatFunc a1, a2, a3, a4, a6;

  // Validates that every coefficient shares `ctx` and that the model is
  // nonsingular (discriminant ≠ 0, error SingularModel).
  static WeierstrassModel make(const CtxPtr& ctx, RatFunc a1, RatFunc a2, RatFunc a3,
                               RatFunc a4, RatFunc a6);
  static WeierstrassModel short_form(const CtxPtr& ctx, RatFunc a4, RatFunc a6);
  bool operator==(const WeierstrassModel& o) const;
};

RatFunc discriminant(const WeierstrassModel& model);
RatFunc j_invariant(const WeierstrassModel& model);  // SingularModel when Δ = 0

// The seven models of the twisting construction, with the data checked:
// f must not be a square, g must not be of the form h³ − h.
WeierstrassModel build_twist(TwistKind kind, const std::optional<RatFunc>& f,
                             const std::optional<RatFunc>& g, unsigned n);

// A point on a Weierstrass model: infinity or affine (x, y).
class CurvePoint {
 public:
  static CurvePoint infinity() { return CurvePoint{}; }
  static CurvePoint affine(RatFunc x, RatFunc y);

  bool is_infinity() const noexcept { return !xy_.has_value(); }
  const RatFunc& x() const;
  const RatFunc& y() const;
  bool operator==(const CurvePoint& o) const;

 private:
  CurvePoint() = default;
  std::optional<std::pair<RatFunc, RatFunc>> xy_;
};

bool on_curve(const WeierstrassModel& model, const CurvePoint& P);
CurvePoint group_neg(const WeierstrassModel& model, const CurvePoint& P);
CurvePoint group_add(const WeierstrassModel& model, const CurvePoint& P, const CurvePoint& Q);
CurvePoint scalar_mul(const WeierstrassModel& model, long m, const CurvePoint& P);

// Φ_{u,c}: (x, y) ↦ (u²x + c, u³y) on y² = x³ − x, with u⁴ = 1 and c in the
// prime field (stored as 0, 1 or 2 so invalid shifts are unrepresentable).
struct AutomorphismTag {
  FieldElement u;
  int tshift = 0;
};

CurvePoint automorphism_apply(const AutomorphismTag& tag, const CurvePoint& P);
unsigned automorphism_order(const AutomorphismTag& tag);

// Certificate that two twist kinds with the same data are isomorphic over the
// base function field, checked symbolically on the model equations.
struct IsomorphismReport {
  TwistKind kind_a;
  TwistKind kind_b;
  std::string map;      // e.g. "(x, y) -> (-x, i*y)"
  std::string inverse;  // e.g. "(x, y) -> (-x, -i*y)"
  bool verified = false;
};

IsomorphismReport twist_isomorphism_check(TwistKind kind_a, TwistKind kind_b,
                                          const std::optional<RatFunc>& f,
                                          const std::optional<RatFunc>& g, unsigned n);

// One L-function multiplicity entering a rank formula.
struct MultiplicityEntry {
  std::string cover;  // "X", "C", "D", "G" or "H"
  long genus = 0;
  unsigned m = 0;
  lfun::LPolynomial L;
  std::string path;  // how the L-polynomial was obtained
};

struct RankReport {
  TwistKind kind;
  unsigned n = 0;
  long rank = 0;
  long mX = 0;
  std::vector<MultiplicityEntry> m_values;
  bool fast_path_used = false;  // no cover needed more than the N₁ count
};

// Mordell–Weil rank of the twist over GF(3^(2n))(t) from the multiplicity of
// the supersingular factor in the L-functions of the attached covers:
//   quad:    4·[m(D) − m(X)]          cubic:  2·[m(C) − m(X)]
//   quartic: 2·[m(G) − m(D)]          sextic: 2·[m(H) − m(C) − m(D) + m(X)]
// m(X) is 0 for the projective line; the parameter exists so the base-curve
// assumption stays visible.  A negative result aborts (NegativeRank).
RankReport rank_of_twist(TwistKind kind, const std::optional<RatFunc>& f,
                         const std::optional<RatFunc>& g, unsigned n, long mX = 0,
                         const CountOptions& opts = {});

struct BatteryReport {
  bool passed = false;
  unsigned bound = 0;
  std::vector<long> x_degrees;  // max(deg num, deg den) of x(mP), m = 1..bound
  std::string note;
};

// Checks that P and its multiples 2P..boundP are affine, pairwise distinct
// and on the curve — a positive-rank witness up to the stated bound (the
// report says "battery passed", never that infinite order is proved).
BatteryReport verify_point_battery(const WeierstrassModel& model, const CurvePoint& P,
                                   unsigned bound = 12);

}  // namespace twistlab::elliptic
