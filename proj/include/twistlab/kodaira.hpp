// Singular-fiber classification for the twist fibrations over P¹ in
// characteristic 3: closed-form tables per twist family, an independent
// Tate's-algorithm oracle run over the local rings of P¹ (long Weierstrass
// form, no char-0 shortcut invariants), and surface-level bookkeeping
// (Euler number, b₂, geometric Mordell–Weil rank) with a Shioda–Tate
// consistency check against the L-function ranks.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistlab/elliptic.hpp"

namespace twistlab::kodaira {

using covers::CountOptions;
using elliptic::TwistKind;
using elliptic::WeierstrassModel;
using funcfield::Place;
using funcfield::Poly;

// Classification of the fiber above one place of P¹.
struct FiberReport {
  Place place;
  std::string kodaira_type;  // "I0", "I3", "II", "III", "IV", "I0*", "I2*", "IV*", "III*", "II*"
  unsigned components = 1;   // m_v, counted geometrically
  long v_delta_min = 0;      // valuation of the minimal discriminant
  std::string notes;
};

// Standard component count of a Kodaira symbol (In → n, In* → n+5, II → 1,
// III → 2, IV → 3, IV* → 7, III* → 8, II* → 9).  ValidationError("BadKodairaSymbol")
// for anything else.
unsigned component_count(const std::string& kodaira_type);

// Table lookup from the twist family's fiber classification: finite places
// via local multiplicities of f, the infinite place via the degree residues.
// f/g presence must match the kind.  UnsupportedDegree when a cubic g (or a
// sextic g at infinity) has degree divisible by 3.
FiberReport classify_closed_form(TwistKind kind, const std::optional<Poly>& f,
                                 const std::optional<Poly>& g, const Place& place);

// Tate's algorithm at the given place for a model with polynomial
// coefficients (NotAPolynomial otherwise).  The infinite place is handled by
// the substitution s = 1/t, x ↦ t^{2N}x, y ↦ t^{3N}y with the minimal N
// making every coefficient polynomial in s.  Residue characteristic 3 is
// assumed: the model is first brought to y² = cubic by completing the square
// (2 is a unit), and every splitting test is done over the exact residue
// field GF(q)[t]/(π).  InternalLoopGuard traps runaway iteration.
FiberReport tate_algorithm(const WeierstrassModel& model, const Place& place);

// Fiber survey of the twist fibration: every place in the support of the
// discriminant plus infinity, each classified by Tate's algorithm and — for
// the family tables — cross-checked against classify_closed_form
// (InternalError("OracleDisagreement") on any mismatch).
struct SurfaceReport {
  long euler_number = 0;              // Σ_v v(Δ_min)
  long b2 = 0;                        // euler_number − 2
  std::optional<long> geometric_rank; // 2·deg g − 2, cubic kinds only
  std::vector<FiberReport> fibers;    // sorted by place
};
SurfaceReport surface_report(TwistKind kind, const std::optional<Poly>& f,
                             const std::optional<Poly>& g);

// Shioda–Tate consistency for the cubic family: the L-function rank must
// never exceed the geometric rank, must equal it when the rank cover is
// maximal or minimal, and the fiber data must satisfy
// b₂ − 2 − Σ(m_v − 1) = geometric rank.  Any failure is a hard
// InternalError("ConsistencyViolation").
struct ShiodaTateReport {
  long rank = 0;
  long geometric_rank = 0;
  long b2 = 0;
  long fiber_correction = 0;       // Σ (m_v − 1)
  bool equality_expected = false;  // rank cover maximal or minimal
  bool rank_equals_geometric = false;
};
ShiodaTateReport shioda_tate_check(TwistKind kind, const std::optional<Poly>& f,
                                   const std::optional<Poly>& g, unsigned n,
                                   const CountOptions& opts = {});

}  // namespace twistlab::kodaira
