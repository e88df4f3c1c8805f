#pragma once

// Univariate polynomials and rational functions over GF(3^(2n)), places of
// the projective line with valuations, factorization, square testing, and
// Artin–Schreier reduction.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "twistlab/gf3.hpp"

namespace twistlab::funcfield {

using gf3::CtxPtr;
using gf3::Embedding;
using gf3::FieldElement;

// Dense univariate polynomial, ascending coefficients, no trailing zeros.
class Poly {
 public:
  explicit Poly(CtxPtr ctx) : ctx_(std::move(ctx)) {}

  static Poly zero(CtxPtr ctx) { return Poly(std::move(ctx)); }
  static Poly one(const CtxPtr& ctx) { return constant(ctx->one()); }
  static Poly constant(FieldElement c);
  static Poly t(const CtxPtr& ctx);  // the indeterminate
  static Poly monomial(FieldElement c, unsigned k);
  static Poly from_coeffs(CtxPtr ctx, std::vector<FieldElement> coeffs);

  const CtxPtr& ctx() const noexcept { return ctx_; }
  const std::vector<FieldElement>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }  // −1 for zero
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  bool is_monic() const;
  FieldElement coeff(unsigned i) const;  // zero-padded access
  FieldElement leading_coeff() const;    // zero for the zero polynomial
  FieldElement constant_coeff() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const FieldElement& c) const;
  std::pair<Poly, Poly> divmod(const Poly& divisor) const;
  Poly operator/(const Poly& o) const;  // exact or truncating division via divmod
  Poly operator%(const Poly& o) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly derivative() const;
  Poly pow(unsigned e) const;
  Poly make_monic() const;
  Poly shift_up(unsigned k) const;  // multiply by t^k
  Poly reverse(unsigned width) const;  // coefficient reversal: t^width · p(1/t)
  FieldElement eval(const FieldElement& x) const;

  // Deterministic total order: by degree, then coefficient indexes from the
  // constant term up.  Used only for canonical sorting.
  bool lex_less(const Poly& o) const;

 private:
  void trim();
  CtxPtr ctx_;
  std::vector<FieldElement> coeffs_;
};

Poly gcd(const Poly& a, const Poly& b);  // monic

enum class PolyOp { add, sub, mul };
Poly poly_arith(const Poly& a, const Poly& b, PolyOp op);

struct FactorExp {
  Poly factor;  // monic irreducible
  unsigned multiplicity;
};

struct Factorization {
  FieldElement unit;
  std::vector<FactorExp> factors;  // canonically sorted, pairwise distinct
};

Factorization factorize(const Poly& p, std::uint64_t seed = 0);

bool is_irreducible(const Poly& p);

// Reduced fraction num/den with monic denominator; gcd(num, den) = 1 is
// re-established after every operation so equality is structural.
class RatFunc {
 public:
  explicit RatFunc(Poly num);
  RatFunc(Poly num, Poly den);

  static RatFunc zero(const CtxPtr& ctx) { return RatFunc(Poly::zero(ctx)); }
  static RatFunc one(const CtxPtr& ctx) { return RatFunc(Poly::one(ctx)); }
  static RatFunc t(const CtxPtr& ctx) { return RatFunc(Poly::t(ctx)); }
  static RatFunc constant(FieldElement c) { return RatFunc(Poly::constant(std::move(c))); }

  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }
  const CtxPtr& ctx() const noexcept { return num_.ctx(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.degree() == 0; }
  bool is_constant() const noexcept { return num_.is_constant() && is_polynomial(); }
  const Poly& as_poly() const;  // requires is_polynomial

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc pow(long e) const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

 private:
  void canonicalize();
  Poly num_, den_;
};

// A place of P¹ over the base field: a monic irreducible polynomial or the
// infinite place (uniformizer 1/t, degree 1).
class Place {
 public:
  static Place finite(Poly pi);        // validates monic irreducible
  static Place finite_trusted(Poly pi);  // caller guarantees irreducibility
  static Place infinity(CtxPtr ctx);

  bool is_infinite() const noexcept { return !pi_.has_value(); }
  const Poly& poly() const;  // finite places only
  unsigned degree() const noexcept { return degree_; }
  const CtxPtr& ctx() const noexcept { return ctx_; }

  bool operator==(const Place& o) const;
  bool operator!=(const Place& o) const { return !(*this == o); }
  // finite places first (by degree, then lex), the infinite place last
  bool canonical_less(const Place& o) const;

 private:
  Place(CtxPtr ctx, std::optional<Poly> pi, unsigned degree)
      : ctx_(std::move(ctx)), pi_(std::move(pi)), degree_(degree) {}
  CtxPtr ctx_;
  std::optional<Poly> pi_;
  unsigned degree_;
};

// v_P(x); std::nullopt encodes +infinity (x = 0).
std::optional<long> valuation(const RatFunc& x, const Place& p);
std::optional<long> valuation(const Poly& x, const Place& p);

struct SquareCheck {
  bool is_square;
  std::optional<RatFunc> root;  // certificate: root² = input when is_square
};
SquareCheck is_square(const RatFunc& x, std::uint64_t seed = 0);

struct AsReduction {
  RatFunc reduced;  // = g − (shift³ − shift); every pole order coprime to 3
  RatFunc shift;
  std::vector<std::pair<Place, unsigned>> poles;  // (place, reduced pole order d_P)
};

// Artin–Schreier reduction of g.  AsTrivial error when g = h³ − h globally.
AsReduction as_reduce(const RatFunc& g, std::uint64_t seed = 0);

// Value of x at a point of P¹ over the embedding's target field; the point is
// a target-field element or std::nullopt for infinity.  Result std::nullopt
// encodes the pole symbol.  Valuations are compared explicitly — no 0/0.
std::optional<FieldElement> eval_at(const RatFunc& x, const std::optional<FieldElement>& point,
                                    const Embedding& emb);

// Poly with coefficients pushed through an embedding (used by point counting).
Poly embed_poly(const Poly& p, const Embedding& emb);

// (v_π(x), unit residue): the valuation of x ≠ 0 at the finite place π and a
// representative mod π of the unit part x·π^(−v) (a nonzero residue).
std::pair<long, Poly> local_unit(const RatFunc& x, const Poly& pi);

// True iff the nonzero residue a mod π is a square in the residue field
// GF(q)[t]/(π) ≅ GF(q^deg π); decided by Euler's criterion.
bool residue_is_square(const Poly& a, const Poly& pi);

}  // namespace twistlab::funcfield
