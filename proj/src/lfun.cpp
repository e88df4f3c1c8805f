#include "twistlab/lfun.hpp"

#include <cassert>
#include <cstdlib>
#include <string>

#include "twistlab/errors.hpp"

namespace twistlab::lfun {

using covers::Maximality;

namespace {

mpz_class pow3z(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, e);
  return r;
}

// q must be 3^(2n) with n ≥ 1; returns n.
unsigned field_exponent_half(const mpz_class& q) {
  mpz_class m = q;
  unsigned e = 0;
  while (m > 1 && mpz_divisible_ui_p(m.get_mpz_t(), 3)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), 3);
    ++e;
  }
  if (m != 1 || e < 2 || e % 2 != 0)
    throw ValidationError("BadParameter",
                          "q must be an even power of 3 (got " + q.get_str() + ")");
  return e / 2;
}

// Power sums p₁..p_{k_max} of the inverse roots of L, by the Newton
// recurrence read in reverse: for m ≤ deg, p_m = −m·a_m − Σ_{j=1}^{m−1} a_j·p_{m−j};
// beyond the degree the same convolution continues with a_m = 0.
std::vector<mpz_class> power_sums(const std::vector<mpz_class>& a, unsigned k_max) {
  const std::size_t deg = a.size() - 1;
  std::vector<mpz_class> p(k_max + 1);  // p[0] unused
  for (unsigned m = 1; m <= k_max; ++m) {
    mpz_class s = 0;
    if (m <= deg) s = mpz_class(m) * a[m];
    const unsigned j_hi = std::min<unsigned>(m - 1, static_cast<unsigned>(deg));
    for (unsigned j = 1; j <= j_hi; ++j) s += a[j] * p[m - j];
    p[m] = -s;
  }
  return p;
}

// Newton's identities: coefficients a₁..a_upto from power sums p₁..p_upto,
// every division by m checked exact.
std::vector<mpz_class> newton_coefficients(const std::vector<mpz_class>& p, unsigned upto) {
  std::vector<mpz_class> a(upto + 1);
  a[0] = 1;
  for (unsigned m = 1; m <= upto; ++m) {
    mpz_class s = 0;
    for (unsigned j = 0; j < m; ++j) s += a[j] * p[m - j];
    if (!mpz_divisible_ui_p(s.get_mpz_t(), m))
      throw ValidationError("NonIntegralCoefficient",
                            "Newton's identity for coefficient " + std::to_string(m) +
                                " does not divide exactly — a point count or the genus is wrong");
    mpz_divexact_ui(s.get_mpz_t(), s.get_mpz_t(), m);
    a[m] = -s;
  }
  return a;
}

std::vector<mpz_class> pk_from_counts(const std::vector<std::int64_t>& counts,
                                      const mpz_class& q, unsigned k_max) {
  std::vector<mpz_class> p(k_max + 1);
  mpz_class qk = 1;
  for (unsigned k = 1; k <= k_max; ++k) {
    qk *= q;
    p[k] = qk + 1 - counts[k - 1];
  }
  return p;
}

// (3ⁿT + sign)^(2g) expanded: aᵢ = C(2g, i)·3^(n·i)·signⁱ.
LPolynomial expand_supersingular_power(unsigned n, int sign, unsigned genus,
                                       const mpz_class& q) {
  const unsigned deg = 2 * genus;
  std::vector<mpz_class> a(deg + 1);
  for (unsigned i = 0; i <= deg; ++i) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), deg, i);
    a[i] = binom * pow3z(static_cast<unsigned long>(n) * i);
    if (sign < 0 && i % 2 == 1) a[i] = -a[i];
  }
  return LPolynomial::make(q, genus, std::move(a));
}

// One synthetic division of Σ aᵢTⁱ by (3ⁿT + sign); returns false (leaving
// `a` untouched) when the division is not exact over the integers.
bool divide_once(std::vector<mpz_class>& a, const mpz_class& three_n, int sign) {
  const std::size_t deg = a.size() - 1;
  if (deg == 0) return false;
  std::vector<mpz_class> b(deg);  // quotient, degree deg−1
  mpz_class carry = a[deg];
  for (std::size_t i = deg; i >= 1; --i) {
    if (!mpz_divisible_p(carry.get_mpz_t(), three_n.get_mpz_t())) return false;
    mpz_divexact(b[i - 1].get_mpz_t(), carry.get_mpz_t(), three_n.get_mpz_t());
    if (sign > 0)
      carry = a[i - 1] - b[i - 1];
    else
      carry = a[i - 1] + b[i - 1];
  }
  if (carry != 0) return false;  // remainder = a₀ − sign·b₀
  a = std::move(b);
  return true;
}

}  // namespace

LPolynomial LPolynomial::make(mpz_class q, unsigned genus, std::vector<mpz_class> coeffs) {
  LPolynomial L{std::move(q), genus, std::move(coeffs)};
  L.validate();
  return L;
}

void LPolynomial::validate() const {
  const unsigned n = field_exponent_half(q);
  (void)n;
  if (coeffs.size() != 2 * static_cast<std::size_t>(genus) + 1)
    throw ValidationError("BadParameter",
                          "expected " + std::to_string(2 * genus + 1) + " coefficients for genus " +
                              std::to_string(genus) + ", got " + std::to_string(coeffs.size()));
  if (coeffs[0] != 1)
    throw ValidationError("FunctionalEquationViolated", "constant coefficient must be 1");
  mpz_class qpow = 1;  // q^(g−i) as i descends from g to 0
  for (unsigned i = genus + 1; i-- > 0;) {
    if (coeffs[2 * genus - i] != qpow * coeffs[i])
      throw ValidationError("FunctionalEquationViolated",
                            "coefficient " + std::to_string(2 * genus - i) + " must equal q^" +
                                std::to_string(genus - i) + " times coefficient " +
                                std::to_string(i) +
                                " — a point count or the genus is wrong");
    if (i > 0) qpow *= q;
  }
}

LPolynomial l_of_E(unsigned n) {
  if (n < 1) throw ValidationError("BadParameter", "n must be >= 1");
  const int sign = n % 2 == 1 ? 1 : -1;
  return expand_supersingular_power(n, sign, 1, pow3z(2ul * n));
}

LPolynomial zeta_numerator(const std::vector<std::int64_t>& counts, const mpz_class& q,
                           unsigned genus) {
  field_exponent_half(q);
  const unsigned need = 2 * genus;
  if (counts.size() < need)
    throw ValidationError("BadParameter", "need at least " + std::to_string(need) +
                                              " point counts for genus " + std::to_string(genus) +
                                              ", got " + std::to_string(counts.size()));
  const unsigned k_max = static_cast<unsigned>(counts.size());
  const std::vector<mpz_class> p = pk_from_counts(counts, q, k_max);
  LPolynomial L{q, genus, newton_coefficients(p, need)};
  L.validate();
  if (k_max > need) {
    // Surplus counts: the polynomial already determines every N_k; any
    // disagreement means a wrong count or a wrong genus.
    const std::vector<mpz_class> pr = power_sums(L.coeffs, k_max);
    for (unsigned k = need + 1; k <= k_max; ++k) {
      if (pr[k] != p[k])
        throw ValidationError("FunctionalEquationViolated",
                              "count N_" + std::to_string(k) +
                                  " is inconsistent with the polynomial determined by the first " +
                                  std::to_string(need) + " counts");
    }
  }
  return L;
}

std::vector<mpz_class> reconstruct_counts(const LPolynomial& L, unsigned k_max) {
  const std::vector<mpz_class> p = power_sums(L.coeffs, k_max);
  std::vector<mpz_class> counts(k_max);
  mpz_class qk = 1;
  for (unsigned k = 1; k <= k_max; ++k) {
    qk *= L.q;
    counts[k - 1] = qk + 1 - p[k];
  }
  return counts;
}

LDecomposition supersingular_multiplicity(const LPolynomial& L, unsigned n) {
  if (n < 1) throw ValidationError("BadParameter", "n must be >= 1");
  if (L.q != pow3z(2ul * n))
    throw ValidationError("BadParameter", "polynomial is over GF(" + L.q.get_str() +
                                              "), not GF(3^" + std::to_string(2 * n) + ")");
  const int sign = n % 2 == 1 ? 1 : -1;
  const mpz_class three_n = pow3z(n);
  std::vector<mpz_class> work = L.coeffs;
  unsigned r = 0;
  while (divide_once(work, three_n, sign)) ++r;
  if (r % 2 != 0)
    throw InternalError("OddMultiplicity",
                        "the factor (" + three_n.get_str() + "T " + (sign > 0 ? "+" : "-") +
                            " 1) divides the polynomial exactly " + std::to_string(r) +
                            " times; the functional equation forces an even count, so the "
                            "input polynomial is corrupted");
  LDecomposition dec;
  dec.m = r / 2;
  dec.sign = sign;
  dec.cofactor = LPolynomial::make(L.q, L.genus - dec.m, std::move(work));
  return dec;
}

LPolynomial l_function(const CoverModel& cover, const CountOptions& opts) {
  return l_function_traced(cover, opts).L;
}

TracedL l_function_traced(const CoverModel& cover, const CountOptions& opts) {
  const long genus_signed = covers::genus(cover).genus;
  assert(genus_signed >= 0);
  const unsigned g = static_cast<unsigned>(genus_signed);
  const unsigned two_n = 2 * cover.n();
  const mpz_class q = pow3z(two_n);
  if (g == 0) return {LPolynomial::make(q, 0, {1}), "trivial"};

  const auto feasible = [&](unsigned k) {
    const unsigned long e = static_cast<unsigned long>(two_n) * k;
    return e <= 40 && pow3z(e) <= opts.budget;
  };
  const auto infeasible_at = [&](unsigned k) {
    const unsigned long e = static_cast<unsigned long>(two_n) * k;
    throw BudgetError("BudgetExceeded", "point count at k = " + std::to_string(k) +
                                            " needs enumeration over GF(3^" + std::to_string(e) +
                                            "), beyond the budget");
  };
  if (!feasible(1)) infeasible_at(1);

  const auto mx = covers::maximality_status(cover, opts);
  if (mx.status == Maximality::maximal || mx.status == Maximality::minimal) {
    const int sign = mx.status == Maximality::maximal ? 1 : -1;
    LPolynomial L = expand_supersingular_power(cover.n(), sign, g, q);
    if (feasible(2)) {
      const mpz_class predicted = reconstruct_counts(L, 2)[1];
      const std::int64_t actual = covers::count_points(cover, 2, opts);
      if (predicted != actual)
        throw InternalError("CountMismatch",
                            "a curve meeting the Weil bound at k = 1 must have N_2 = " +
                                predicted.get_str() + ", but counting gives " +
                                std::to_string(actual));
    }
    return {std::move(L), sign > 0 ? "fast-maximal" : "fast-minimal"};
  }

  const auto counts_up_to = [&](unsigned k_hi) {
    std::vector<std::int64_t> counts(k_hi);
    counts[0] = mx.n1;  // k = 1 was already enumerated for the maximality test
    for (unsigned k = 2; k <= k_hi; ++k) counts[k - 1] = covers::count_points(cover, k, opts);
    return counts;
  };

  if (feasible(2 * g)) return {zeta_numerator(counts_up_to(2 * g), q, g), "full"};

  if (feasible(g)) {
    // Half enumeration: the functional equation determines a_{g+1}..a_{2g}
    // from a₀..a_g, halving the largest field that must be enumerated.
    const std::vector<mpz_class> p = pk_from_counts(counts_up_to(g), q, g);
    std::vector<mpz_class> a = newton_coefficients(p, g);
    a.resize(2 * static_cast<std::size_t>(g) + 1);
    mpz_class qpow = q;
    for (unsigned i = g; i-- > 0;) {
      a[2 * g - i] = qpow * a[i];
      qpow *= q;
    }
    LPolynomial L = LPolynomial::make(q, g, std::move(a));
    // The implied power sums must obey the Weil bound |p_k| ≤ 2g·3^(nk); a
    // violation proves the completed polynomial is not a curve numerator.
    const std::vector<mpz_class> ps = power_sums(L.coeffs, 2 * g);
    for (unsigned k = 1; k <= 2 * g; ++k) {
      const mpz_class bound = 2 * mpz_class(g) * pow3z(static_cast<unsigned long>(cover.n()) * k);
      if (ps[k] > bound || ps[k] < -bound)
        throw InternalError("WeilBoundViolated",
                            "power sum p_" + std::to_string(k) +
                                " of the completed polynomial violates the Weil bound");
    }
    if (feasible(g + 1)) {
      const mpz_class predicted = reconstruct_counts(L, g + 1)[g];
      const std::int64_t actual = covers::count_points(cover, g + 1, opts);
      if (predicted != actual)
        throw InternalError("CountMismatch",
                            "functional-equation completion predicts N_" +
                                std::to_string(g + 1) + " = " + predicted.get_str() +
                                ", but counting gives " + std::to_string(actual));
    }
    return {std::move(L), "half"};
  }

  for (unsigned k = 2; k <= g; ++k)
    if (!feasible(k)) infeasible_at(k);
  infeasible_at(g);  // unreachable: feasible(g) failed above
  std::abort();
}

}  // namespace twistlab::lfun
