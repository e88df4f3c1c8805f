#pragma once

// Zeta-function numerators of curves over GF(3^(2n)), assembled from point
// counts by Newton's identities in exact arbitrary-precision arithmetic, plus
// the extraction of the multiplicity of the supersingular linear factor
// (3ⁿT + (−1)^(n+1)) — the quantity every rank formula consumes.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/covers.hpp"

namespace twistlab::lfun {

using covers::CountOptions;
using covers::CoverModel;

// Numerator P(T) = Σ aᵢTⁱ of the zeta function of a smooth projective curve
// over GF(q), q = 3^(2n): degree exactly 2·genus, a₀ = 1, and the functional
// equation a_{2g−i} = q^(g−i)·aᵢ.
struct LPolynomial {
  mpz_class q;
  unsigned genus = 0;
  std::vector<mpz_class> coeffs;  // a₀..a_{2g}, ascending

  // Checked construction.  Aggregate initialization stays available so tests
  // can build deliberately broken inputs.
  static LPolynomial make(mpz_class q, unsigned genus, std::vector<mpz_class> coeffs);
  void validate() const;

  bool operator==(const LPolynomial& other) const {
    return q == other.q && genus == other.genus && coeffs == other.coeffs;
  }
};

// L = (3ⁿT + sign)^(2m) · cofactor, with the cofactor coprime to the factor.
struct LDecomposition {
  unsigned m = 0;
  int sign = 1;          // (−1)^(n+1): +1 for odd n, −1 for even n
  LPolynomial cofactor;  // satisfies the functional equation with genus g − m
};

// (3ⁿT + (−1)^(n+1))², the L-polynomial of y² = x³ − x over GF(3^(2n)).
LPolynomial l_of_E(unsigned n);

// Recover the numerator from point counts N₁..N_{2g} (surplus counts beyond
// 2g are verified against the finished polynomial): the power sums of the
// inverse roots are p_k = (q^k + 1) − N_k and Newton's identities give the
// coefficients; every division by k is checked to be exact.
LPolynomial zeta_numerator(const std::vector<std::int64_t>& counts, const mpz_class& q,
                           unsigned genus);

// Point counts N₁..N_{k_max} implied by a numerator (Newton run in reverse);
// the independent direction used to cross-check counts against polynomials.
std::vector<mpz_class> reconstruct_counts(const LPolynomial& L, unsigned k_max);

// Multiplicity of (3ⁿT + (−1)^(n+1)) in L by repeated exact division.  The
// functional equation pairs inverse roots α ↔ q/α, and −3ⁿ is its own
// partner only through an even count, so a valid input always yields an even
// multiplicity r; the result carries m = r/2.  An odd r aborts loudly — it
// proves the input was corrupted upstream, and rounding would silently turn
// that bug into a wrong rank.
LDecomposition supersingular_multiplicity(const LPolynomial& L, unsigned n);

// Genus + point counts + zeta_numerator for a cover.  Maximal and minimal
// covers short-circuit to (3ⁿT ± 1)^(2g) — only N₁ is needed, which is what
// makes large-genus instances tractable — with a count verification at k = 2
// when the budget allows.  Otherwise counts for k = 1..2g are enumerated; if
// only the smaller fields fit the budget, counts for k = 1..g plus
// functional-equation completion are used instead, verified by one extra
// count when feasible and by Weil bounds on the implied power sums.
LPolynomial l_function(const CoverModel& cover, const CountOptions& opts = {});

// Same computation, also reporting which path produced the polynomial:
// "trivial" (genus 0), "fast-maximal", "fast-minimal", "full" or "half".
struct TracedL {
  LPolynomial L;
  std::string path;
};
TracedL l_function_traced(const CoverModel& cover, const CountOptions& opts = {});

}  // namespace twistlab::lfun
