#include "twistlab/funcfield.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <random>
#include <utility>

namespace twistlab::funcfield {

namespace {

void require_same_ctx(const CtxPtr& a, const CtxPtr& b) {
  if (!a || !b) throw ValidationError("NullElement", "operation on a default-constructed object");
  if (a != b && !a->modulus_equals(*b))
    throw ValidationError("CtxMismatch", "operands belong to different field contexts");
}

// x^(3^(k-1)) is the cube root in GF(3^k).
FieldElement field_cube_root(const FieldElement& c) {
  return c.frobenius(c.ctx()->degree() - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Poly Poly::constant(FieldElement c) {
  if (c.is_null()) throw ValidationError("NullElement", "constant() needs a field element");
  Poly p(c.ctx());
  p.coeffs_.push_back(std::move(c));
  p.trim();
  return p;
}

Poly Poly::t(const CtxPtr& ctx) { return monomial(ctx->one(), 1); }

Poly Poly::monomial(FieldElement c, unsigned k) {
  if (c.is_null()) throw ValidationError("NullElement", "monomial() needs a field element");
  Poly p(c.ctx());
  if (!c.is_zero()) {
    p.coeffs_.assign(k, c.ctx()->zero());
    p.coeffs_.push_back(std::move(c));
  }
  return p;
}

Poly Poly::from_coeffs(CtxPtr ctx, std::vector<FieldElement> coeffs) {
  Poly p(std::move(ctx));
  for (const auto& c : coeffs) {
    if (c.is_null()) throw ValidationError("NullElement", "from_coeffs() got a null element");
    require_same_ctx(p.ctx_, c.ctx());
  }
  p.coeffs_ = std::move(coeffs);
  p.trim();
  return p;
}

bool Poly::is_monic() const { return !coeffs_.empty() && coeffs_.back().is_one(); }

FieldElement Poly::coeff(unsigned i) const {
  if (i < coeffs_.size()) return coeffs_[i];
  return ctx_->zero();
}

FieldElement Poly::leading_coeff() const {
  if (coeffs_.empty()) return ctx_->zero();
  return coeffs_.back();
}

FieldElement Poly::constant_coeff() const { return coeff(0); }

Poly Poly::operator+(const Poly& o) const {
  require_same_ctx(ctx_, o.ctx_);
  Poly r(ctx_);
  const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
  r.coeffs_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.coeffs_.push_back(coeff(static_cast<unsigned>(i)) + o.coeff(static_cast<unsigned>(i)));
  r.trim();
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  require_same_ctx(ctx_, o.ctx_);
  Poly r(ctx_);
  const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
  r.coeffs_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.coeffs_.push_back(coeff(static_cast<unsigned>(i)) - o.coeff(static_cast<unsigned>(i)));
  r.trim();
  return r;
}

Poly Poly::operator-() const {
  Poly r(ctx_);
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  require_same_ctx(ctx_, o.ctx_);
  if (is_zero() || o.is_zero()) return Poly(ctx_);
  Poly r(ctx_);
  r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, ctx_->zero());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      if (o.coeffs_[j].is_zero()) continue;
      r.coeffs_[i + j] = r.coeffs_[i + j] + coeffs_[i] * o.coeffs_[j];
    }
  }
  r.trim();
  return r;
}

Poly Poly::operator*(const FieldElement& c) const {
  require_same_ctx(ctx_, c.ctx());
  if (c.is_zero()) return Poly(ctx_);
  Poly r(ctx_);
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& a : coeffs_) r.coeffs_.push_back(a * c);
  r.trim();
  return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
  require_same_ctx(ctx_, divisor.ctx_);
  if (divisor.is_zero())
    throw ValidationError("DivisionByZero", "polynomial division by zero");
  Poly q(ctx_), r = *this;
  const int dd = divisor.degree();
  if (r.degree() >= dd) {
    q.coeffs_.assign(static_cast<std::size_t>(r.degree() - dd) + 1, ctx_->zero());
    const FieldElement lc_inv = divisor.leading_coeff().inverse();
    while (!r.is_zero() && r.degree() >= dd) {
      const int shift = r.degree() - dd;
      const FieldElement factor = r.leading_coeff() * lc_inv;
      q.coeffs_[static_cast<std::size_t>(shift)] = factor;
      // r -= factor * t^shift * divisor
      for (int i = 0; i <= dd; ++i) {
        auto& slot = r.coeffs_[static_cast<std::size_t>(i + shift)];
        slot = slot - factor * divisor.coeffs_[static_cast<std::size_t>(i)];
      }
      r.trim();
    }
  }
  q.trim();
  return {std::move(q), std::move(r)};
}

Poly Poly::operator/(const Poly& o) const { return divmod(o).first; }
Poly Poly::operator%(const Poly& o) const { return divmod(o).second; }

bool Poly::operator==(const Poly& o) const {
  require_same_ctx(ctx_, o.ctx_);
  if (coeffs_.size() != o.coeffs_.size()) return false;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != o.coeffs_[i]) return false;
  return true;
}

Poly Poly::derivative() const {
  Poly r(ctx_);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    r.coeffs_.push_back(coeffs_[i] * ctx_->from_int(static_cast<long>(i % 3)));
  r.trim();
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly result = Poly::one(ctx_);
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    base = base * base;
    e >>= 1u;
  }
  return result;
}

Poly Poly::make_monic() const {
  if (is_zero()) return *this;
  return *this * leading_coeff().inverse();
}

Poly Poly::shift_up(unsigned k) const {
  if (is_zero() || k == 0) return *this;
  Poly r(ctx_);
  r.coeffs_.assign(k, ctx_->zero());
  r.coeffs_.insert(r.coeffs_.end(), coeffs_.begin(), coeffs_.end());
  return r;
}

Poly Poly::reverse(unsigned width) const {
  if (degree() > static_cast<int>(width))
    throw InternalError("BadReverseWidth", "reverse width smaller than degree");
  Poly r(ctx_);
  r.coeffs_.assign(width + 1, ctx_->zero());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    r.coeffs_[width - i] = coeffs_[i];
  r.trim();
  return r;
}

FieldElement Poly::eval(const FieldElement& x) const {
  require_same_ctx(ctx_, x.ctx());
  FieldElement acc = ctx_->zero();
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

bool Poly::lex_less(const Poly& o) const {
  if (degree() != o.degree()) return degree() < o.degree();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != o.coeffs_[i]) return coeffs_[i].lex_less(o.coeffs_[i]);
  }
  return false;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  while (!r1.is_zero()) {
    Poly r2 = r0 % r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  return r0.make_monic();
}

Poly poly_arith(const Poly& a, const Poly& b, PolyOp op) {
  switch (op) {
    case PolyOp::add: return a + b;
    case PolyOp::sub: return a - b;
    case PolyOp::mul: return a * b;
  }
  throw InternalError("BadOp", "unknown polynomial operation");
}

// ---------------------------------------------------------------------------
// Modular helpers
// ---------------------------------------------------------------------------

namespace {

Poly powmod(const Poly& base, const mpz_class& e, const Poly& mod) {
  if (e < 0) throw InternalError("NegativeExponent", "powmod needs e >= 0");
  Poly result = Poly::one(base.ctx());
  if (e == 0) return result % mod;
  Poly b = base % mod;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = (result * result) % mod;
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) result = (result * b) % mod;
  }
  return result;
}

// Inverse of a modulo m, gcd(a, m) = 1 required.
Poly invmod(const Poly& a, const Poly& m) {
  Poly r0 = m, r1 = a % m;
  Poly t0 = Poly::zero(a.ctx()), t1 = Poly::one(a.ctx());
  while (!r1.is_zero()) {
    auto [q, r2] = r0.divmod(r1);
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.degree() != 0)
    throw InternalError("NotInvertible", "invmod: operands are not coprime");
  return t0 * r0.leading_coeff().inverse();
}

// Exact cube root of a polynomial whose derivative vanishes (all exponents
// divisible by 3; coefficientwise inverse Frobenius).
Poly poly_cube_root(const Poly& p) {
  std::vector<FieldElement> out;
  const auto& cs = p.coeffs();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i % 3 == 0) {
      out.push_back(field_cube_root(cs[i]));
    } else if (!cs[i].is_zero()) {
      throw InternalError("NotACube", "cube root of a polynomial that is not a cube");
    }
  }
  return Poly::from_coeffs(p.ctx(), std::move(out));
}

Poly random_poly(std::mt19937_64& eng, const CtxPtr& ctx, int deg_bound) {
  std::vector<FieldElement> cs;
  cs.reserve(static_cast<std::size_t>(deg_bound) + 1);
  for (int i = 0; i <= deg_bound; ++i) cs.push_back(ctx->from_index(eng() % ctx->order()));
  return Poly::from_coeffs(ctx, std::move(cs));
}

// Squarefree decomposition in characteristic 3: list of (monic squarefree
// part, multiplicity), multiplicities pairwise distinct.
void squarefree_decompose(const Poly& f, unsigned outer,
                          std::vector<std::pair<Poly, unsigned>>& out) {
  Poly fp = f.derivative();
  if (fp.is_zero()) {
    squarefree_decompose(poly_cube_root(f), outer * 3, out);
    return;
  }
  Poly c = gcd(f, fp);
  Poly w = f / c;
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(w, c);
    Poly z = w / y;
    if (z.degree() > 0) out.emplace_back(z, outer * i);
    ++i;
    w = std::move(y);
    c = c / w;
  }
  if (c.degree() > 0) squarefree_decompose(poly_cube_root(c), outer * 3, out);
}

// Cantor–Zassenhaus equal-degree splitting of a squarefree product of
// irreducibles of common degree d.
void equal_degree_split(const Poly& f, unsigned d, std::mt19937_64& eng,
                        std::vector<Poly>& out) {
  if (f.degree() == static_cast<int>(d)) {
    out.push_back(f.make_monic());
    return;
  }
  const CtxPtr& ctx = f.ctx();
  mpz_class exponent;
  mpz_ui_pow_ui(exponent.get_mpz_t(), static_cast<unsigned long>(ctx->order()), d);
  exponent = (exponent - 1) / 2;
  for (;;) {
    Poly r = random_poly(eng, ctx, f.degree() - 1);
    if (r.degree() < 1) continue;
    Poly s = powmod(r, exponent, f) - Poly::one(ctx);
    Poly g = gcd(s, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(g, d, eng, out);
      equal_degree_split(f / g, d, eng, out);
      return;
    }
  }
}

// Distinct-degree stage; emits monic irreducible factors of the squarefree f.
void distinct_degree_split(Poly f, std::mt19937_64& eng, std::vector<Poly>& out) {
  const CtxPtr& ctx = f.ctx();
  const mpz_class q(static_cast<unsigned long>(ctx->order()));
  Poly h = Poly::t(ctx) % f;
  unsigned d = 0;
  while (f.degree() >= 2 * static_cast<int>(d + 1)) {
    ++d;
    h = powmod(h, q, f);
    Poly g = gcd(h - Poly::t(ctx), f);
    if (g.degree() > 0) {
      equal_degree_split(g, d, eng, out);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.push_back(f.make_monic());
}

}  // namespace

// ---------------------------------------------------------------------------
// factorize / is_irreducible
// ---------------------------------------------------------------------------

Factorization factorize(const Poly& p, std::uint64_t seed) {
  if (p.is_zero())
    throw ValidationError("ZeroPolynomial", "cannot factor the zero polynomial");
  Factorization result;
  result.unit = p.leading_coeff();
  if (p.degree() == 0) return result;

  std::mt19937_64 eng(0x9e3779b97f4a7c15ULL ^ seed);
  std::vector<std::pair<Poly, unsigned>> squarefree;
  squarefree_decompose(p.make_monic(), 1, squarefree);
  for (const auto& [part, mult] : squarefree) {
    std::vector<Poly> irreducibles;
    distinct_degree_split(part, eng, irreducibles);
    for (auto& q : irreducibles) result.factors.push_back({std::move(q), mult});
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const FactorExp& a, const FactorExp& b) { return a.factor.lex_less(b.factor); });

  // Exactness check: unit · Π factor^mult must reproduce the input.
  Poly check = Poly::constant(result.unit);
  for (const auto& fe : result.factors) check = check * fe.factor.pow(fe.multiplicity);
  if (check != p)
    throw InternalError("FactorizationMismatch", "factor product does not reproduce the input");
  return result;
}

bool is_irreducible(const Poly& p) {
  if (p.degree() < 1) return false;
  const CtxPtr& ctx = p.ctx();
  const Poly f = p.make_monic();
  const unsigned n = static_cast<unsigned>(f.degree());
  if (n == 1) return true;
  const mpz_class q(static_cast<unsigned long>(ctx->order()));
  const Poly t = Poly::t(ctx);

  // x^(q^n) ≡ x mod f, and gcd(x^(q^(n/r)) − x, f) = 1 for every prime r | n.
  std::vector<unsigned> prime_divisors;
  unsigned m = n;
  for (unsigned r = 2; r * r <= m; ++r) {
    if (m % r == 0) {
      prime_divisors.push_back(r);
      while (m % r == 0) m /= r;
    }
  }
  if (m > 1) prime_divisors.push_back(m);

  std::vector<Poly> frob;  // frob[j] = x^(q^(j+1)) mod f
  Poly h = t % f;
  for (unsigned j = 1; j <= n; ++j) {
    h = powmod(h, q, f);
    frob.push_back(h);
  }
  if (!(frob[n - 1] == t % f)) return false;
  for (unsigned r : prime_divisors) {
    const Poly g = gcd(frob[n / r - 1] - t, f);
    if (g.degree() != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// RatFunc
// ---------------------------------------------------------------------------

RatFunc::RatFunc(Poly num) : num_(std::move(num)), den_(Poly::one(num_.ctx())) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  require_same_ctx(num_.ctx(), den_.ctx());
  canonicalize();
}

void RatFunc::canonicalize() {
  if (den_.is_zero())
    throw ValidationError("DivisionByZero", "rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly::one(num_.ctx());
    return;
  }
  Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  const FieldElement lc = den_.leading_coeff();
  if (!lc.is_one()) {
    const FieldElement inv = lc.inverse();
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

const Poly& RatFunc::as_poly() const {
  if (!is_polynomial())
    throw ValidationError("NotAPolynomial", "rational function has a nontrivial denominator");
  return num_;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero())
    throw ValidationError("DivisionByZero", "division by the zero rational function");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::pow(long e) const {
  if (e < 0) {
    if (is_zero())
      throw ValidationError("DivisionByZero", "negative power of zero");
    return RatFunc(den_, num_).pow(-e);
  }
  RatFunc result = RatFunc::one(ctx());
  RatFunc base = *this;
  unsigned long k = static_cast<unsigned long>(e);
  while (k > 0) {
    if (k & 1ul) result = result * base;
    base = base * base;
    k >>= 1ul;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Place / valuation
// ---------------------------------------------------------------------------

Place Place::finite(Poly pi) {
  if (pi.degree() < 1 || !pi.is_monic())
    throw ValidationError("InvalidPlace", "finite place needs a monic polynomial of degree >= 1");
  if (!is_irreducible(pi))
    throw ValidationError("InvalidPlace", "finite place needs an irreducible polynomial");
  return finite_trusted(std::move(pi));
}

Place Place::finite_trusted(Poly pi) {
  const unsigned deg = static_cast<unsigned>(pi.degree());
  CtxPtr ctx = pi.ctx();
  return Place(std::move(ctx), std::move(pi), deg);
}

Place Place::infinity(CtxPtr ctx) { return Place(std::move(ctx), std::nullopt, 1); }

const Poly& Place::poly() const {
  if (is_infinite())
    throw ValidationError("InvalidPlace", "the infinite place has no defining polynomial");
  return *pi_;
}

bool Place::operator==(const Place& o) const {
  require_same_ctx(ctx_, o.ctx_);
  if (is_infinite() || o.is_infinite()) return is_infinite() == o.is_infinite();
  return *pi_ == *o.pi_;
}

bool Place::canonical_less(const Place& o) const {
  if (is_infinite()) return false;
  if (o.is_infinite()) return true;
  return pi_->lex_less(*o.pi_);
}

std::optional<long> valuation(const Poly& x, const Place& p) {
  require_same_ctx(x.ctx(), p.ctx());
  if (x.is_zero()) return std::nullopt;  // +infinity
  if (p.is_infinite()) return -static_cast<long>(x.degree());
  long v = 0;
  Poly r = x;
  for (;;) {
    auto [q, rem] = r.divmod(p.poly());
    if (!rem.is_zero()) break;
    ++v;
    r = std::move(q);
  }
  return v;
}

std::optional<long> valuation(const RatFunc& x, const Place& p) {
  if (x.is_zero()) return std::nullopt;
  return *valuation(x.num(), p) - *valuation(x.den(), p);
}

// ---------------------------------------------------------------------------
// is_square
// ---------------------------------------------------------------------------

SquareCheck is_square(const RatFunc& x, std::uint64_t seed) {
  if (x.is_zero())
    throw ValidationError("ZeroInput", "square test of the zero function");
  const CtxPtr& ctx = x.ctx();
  const Factorization fn = factorize(x.num(), seed);
  const Factorization fd = factorize(x.den(), seed);

  for (const auto& fe : fn.factors)
    if (fe.multiplicity % 2 != 0) return {false, std::nullopt};
  for (const auto& fe : fd.factors)
    if (fe.multiplicity % 2 != 0) return {false, std::nullopt};
  // Monic factors all have even multiplicity; x is a square iff the unit is.
  if (fn.unit.character(2) != gf3::PowerClass::yes) return {false, std::nullopt};

  const std::optional<FieldElement> unit_root = fn.unit.sqrt();
  if (!unit_root)
    throw InternalError("SqrtMissing", "character said square but no root was found");
  Poly rnum = Poly::constant(*unit_root);
  for (const auto& fe : fn.factors) rnum = rnum * fe.factor.pow(fe.multiplicity / 2);
  Poly rden = Poly::one(ctx);
  for (const auto& fe : fd.factors) rden = rden * fe.factor.pow(fe.multiplicity / 2);
  RatFunc root(std::move(rnum), std::move(rden));
  if (root * root != x)
    throw InternalError("SqrtMismatch", "square-root certificate failed to verify");
  return {true, std::move(root)};
}

// ---------------------------------------------------------------------------
// as_reduce
// ---------------------------------------------------------------------------

namespace {

// One reduction step at a finite place pi where the pole order e = 3m:
// returns h = b/pi^m with b³ ≡ (leading residue of g) mod pi, so that
// g − (h³ − h) has strictly smaller pole order at pi.
RatFunc finite_reduction_step(const RatFunc& g, const Poly& pi, unsigned e) {
  const CtxPtr& ctx = g.ctx();
  const unsigned m = e / 3;
  Poly rest = g.den();
  for (unsigned i = 0; i < e; ++i) rest = rest / pi;
  // leading residue λ = num · rest⁻¹ mod pi
  const Poly lambda = (g.num() % pi) * invmod(rest, pi) % pi;
  // cube root mod pi: λ^(3^(K−1)) with K the absolute degree of the residue field
  const unsigned K = ctx->degree() * static_cast<unsigned>(pi.degree());
  mpz_class exponent;
  mpz_ui_pow_ui(exponent.get_mpz_t(), 3, K - 1);
  const Poly b = powmod(lambda, exponent, pi);
  return RatFunc(b, pi.pow(m));
}

}  // namespace

AsReduction as_reduce(const RatFunc& g, std::uint64_t seed) {
  const CtxPtr& ctx = g.ctx();
  RatFunc reduced = g;
  RatFunc shift = RatFunc::zero(ctx);

  // Total pole degree only ever decreases; guard against a logic error.
  long guard = 3 * (g.num().degree() + g.den().degree()) + 16;

  for (;;) {
    if (--guard < 0)
      throw InternalError("LoopGuard", "reduction failed to terminate");
    // Pole at infinity: the polynomial-part degree, when positive.
    const Poly poly_part = reduced.num() / reduced.den();
    if (poly_part.degree() >= 3 && poly_part.degree() % 3 == 0) {
      const FieldElement b = field_cube_root(poly_part.leading_coeff());
      const RatFunc h(Poly::monomial(b, static_cast<unsigned>(poly_part.degree() / 3)));
      reduced = reduced - (h * h * h - h);
      shift = shift + h;
      continue;
    }
    // Finite poles with order divisible by 3.
    bool modified = false;
    if (reduced.den().degree() > 0) {
      const Factorization fd = factorize(reduced.den(), seed);
      for (const auto& fe : fd.factors) {
        if (fe.multiplicity % 3 == 0) {
          const RatFunc h = finite_reduction_step(reduced, fe.factor, fe.multiplicity);
          reduced = reduced - (h * h * h - h);
          shift = shift + h;
          modified = true;
          break;
        }
      }
    }
    if (!modified) break;
  }

  if (reduced.is_constant()) {
    const FieldElement c = reduced.num().constant_coeff();
    if (c.is_zero() || c.absolute_trace() == 0)
      throw ValidationError(
          "AsTrivial",
          "g = h^3 - h globally (reduction terminates in a trace-zero constant)");
    // A nonzero-trace constant has no pole anywhere; callers that need a
    // genuine Artin–Schreier cover must reject this themselves.
  }

  // Exact identity: g − reduced = shift³ − shift.
  if (g - reduced != shift * shift * shift - shift)
    throw InternalError("ReductionIdentity", "g - gReduced != shift^3 - shift");

  AsReduction out{std::move(reduced), std::move(shift), {}};
  if (out.reduced.den().degree() > 0) {
    const Factorization fd = factorize(out.reduced.den(), seed);
    for (const auto& fe : fd.factors) {
      if (fe.multiplicity % 3 == 0)
        throw InternalError("ReductionIncomplete", "a finite pole order is divisible by 3");
      out.poles.emplace_back(Place::finite_trusted(fe.factor), fe.multiplicity);
    }
  }
  const int inf_order = out.reduced.num().degree() - out.reduced.den().degree();
  if (inf_order > 0) {
    if (inf_order % 3 == 0)
      throw InternalError("ReductionIncomplete", "the infinite pole order is divisible by 3");
    out.poles.emplace_back(Place::infinity(ctx), static_cast<unsigned>(inf_order));
  }
  std::sort(out.poles.begin(), out.poles.end(),
            [](const auto& a, const auto& b) { return a.first.canonical_less(b.first); });
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Poly embed_poly(const Poly& p, const Embedding& emb) {
  if (!p.ctx()->modulus_equals(*emb.source()))
    throw ValidationError("CtxMismatch", "polynomial does not live in the embedding's source field");
  std::vector<FieldElement> cs;
  cs.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) cs.push_back(emb.apply(c));
  return Poly::from_coeffs(emb.target(), std::move(cs));
}

std::pair<long, Poly> local_unit(const RatFunc& x, const Poly& pi) {
  require_same_ctx(x.ctx(), pi.ctx());
  if (x.is_zero()) throw ValidationError("ZeroInput", "local unit of the zero function");
  if (pi.degree() < 1)
    throw ValidationError("InvalidPlace", "local_unit needs a place polynomial of degree >= 1");
  long vn = 0, vd = 0;
  Poly a = x.num(), b = x.den();
  for (;;) {
    auto [q, r] = a.divmod(pi);
    if (!r.is_zero()) break;
    a = std::move(q);
    ++vn;
  }
  for (;;) {
    auto [q, r] = b.divmod(pi);
    if (!r.is_zero()) break;
    b = std::move(q);
    ++vd;
  }
  const Poly unit = (a % pi) * invmod(b, pi) % pi;
  return {vn - vd, unit};
}

bool residue_is_square(const Poly& a, const Poly& pi) {
  require_same_ctx(a.ctx(), pi.ctx());
  const Poly r = a % pi;
  if (r.is_zero())
    throw ValidationError("ZeroInput", "square test of the zero residue");
  mpz_class half;
  mpz_ui_pow_ui(half.get_mpz_t(), static_cast<unsigned long>(a.ctx()->order()),
                static_cast<unsigned long>(pi.degree()));
  half = (half - 1) / 2;
  const Poly s = powmod(r, half, pi);
  if (s == Poly::one(a.ctx())) return true;
  if (s == -Poly::one(a.ctx())) return false;
  throw InternalError("EulerCriterion", "residue power is not ±1; is the place irreducible?");
}

std::optional<FieldElement> eval_at(const RatFunc& x, const std::optional<FieldElement>& point,
                                    const Embedding& emb) {
  if (!x.ctx()->modulus_equals(*emb.source()))
    throw ValidationError("CtxMismatch", "function does not live in the embedding's source field");
  if (!point.has_value()) {
    // At infinity: compare degrees (valuations), never evaluate 0/0.
    const int dn = x.num().degree(), dd = x.den().degree();
    if (dn > dd) return std::nullopt;  // pole
    if (dn < dd) return emb.target()->zero();
    return emb.apply(x.num().leading_coeff()) / emb.apply(x.den().leading_coeff());
  }
  if (!point->ctx()->modulus_equals(*emb.target()))
    throw ValidationError("CtxMismatch", "point does not live in the embedding's target field");
  const FieldElement dv = embed_poly(x.den(), emb).eval(*point);
  if (dv.is_zero()) return std::nullopt;  // pole: num and den are coprime, so num(point) ≠ 0
  const FieldElement nv = embed_poly(x.num(), emb).eval(*point);
  return nv / dv;
}

}  // namespace twistlab::funcfield
