#include "twistlab/gf3.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace twistlab::gf3 {

namespace {

constexpr std::uint64_t kTableThreshold = 6'000'000;  // build Zech tables up to this order
constexpr unsigned kMaxDegree = 40;                   // 3^40 still fits in uint64

Trit add3(Trit a, Trit b) { return static_cast<Trit>((a + b) % 3); }
Trit sub3(Trit a, Trit b) { return static_cast<Trit>((a + 3 - b) % 3); }
Trit mul3(Trit a, Trit b) { return static_cast<Trit>((a * b) % 3); }

std::uint64_t pow3(unsigned k) {
  std::uint64_t r = 1;
  while (k--) r *= 3;
  return r;
}

// ---- polynomials over the prime field GF(3), used for modulus handling ----

using P3 = std::vector<Trit>;  // ascending coefficients, no trailing zeros

void trim(P3& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int deg(const P3& p) { return static_cast<int>(p.size()) - 1; }

P3 mul(const P3& a, const P3& b) {
  if (a.empty() || b.empty()) return {};
  P3 r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = add3(r[i + j], mul3(a[i], b[j]));
  trim(r);
  return r;
}

// Remainder of a modulo monic m.
P3 mod(P3 a, const P3& m) {
  trim(a);
  while (deg(a) >= deg(m)) {
    Trit c = a.back();
    std::size_t shift = a.size() - m.size();
    for (std::size_t j = 0; j < m.size(); ++j)
      a[shift + j] = sub3(a[shift + j], mul3(c, m[j]));
    trim(a);
  }
  return a;
}

P3 sub(const P3& a, const P3& b) {
  P3 r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    Trit x = i < a.size() ? a[i] : 0;
    Trit y = i < b.size() ? b[i] : 0;
    r[i] = sub3(x, y);
  }
  trim(r);
  return r;
}

P3 make_monic(P3 a) {
  trim(a);
  if (a.empty() || a.back() == 1) return a;
  // leading coefficient is 2; its inverse mod 3 is 2
  for (auto& c : a) c = mul3(c, 2);
  return a;
}

P3 gcd(P3 a, P3 b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    P3 r = mod(a, make_monic(b));
    // make_monic(b) changes b only by a unit, so the remainder ideal is the same
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

// x^(3^r) mod m by repeated cubing.
P3 frobenius_power_of_x(unsigned r, const P3& m) {
  P3 t = {0, 1};  // x
  t = mod(t, m);
  for (unsigned i = 0; i < r; ++i) {
    P3 sq = mul(t, t);
    t = mod(mul(sq, t), m);
  }
  return t;
}

// Rabin irreducibility test for a monic polynomial over GF(3).
bool is_irreducible(const P3& f) {
  int k = deg(f);
  if (k <= 0) return false;
  if (k == 1) return true;
  P3 xk = frobenius_power_of_x(static_cast<unsigned>(k), f);
  if (sub(xk, P3{0, 1}) != P3{}) return false;
  for (int p = 2; p <= k; ++p) {
    if (k % p != 0) continue;
    bool prime = true;
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    P3 xq = frobenius_power_of_x(static_cast<unsigned>(k / p), f);
    P3 g = gcd(sub(xq, P3{0, 1}), f);
    if (deg(g) != 0) return false;
  }
  return true;
}

// First monic irreducible of degree k in lexicographic order of coefficient
// vectors (constant term compared first).
P3 canonical_modulus(unsigned k) {
  if (k == 1) return P3{0, 1};  // x itself: GF(3)[x]/(x) = GF(3)
  std::vector<Trit> c(k, 0);    // c[0] = constant term
  c[0] = 1;  // a zero constant term means x | f, never irreducible: skip that block
  for (;;) {
    P3 f(c.begin(), c.end());
    f.push_back(1);
    trim(f);
    if (static_cast<unsigned>(deg(f)) == k && is_irreducible(f)) return f;
    // advance odometer: the last coefficient varies fastest so that vectors
    // are visited in lex order with the constant term most significant
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && c[pos] == 2) c[pos--] = 0;
    if (pos < 0) throw InternalError("ModulusSearch", "no irreducible polynomial found");
    ++c[pos];
  }
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldCtx
// ---------------------------------------------------------------------------

CtxPtr FieldCtx::make(unsigned degree) {
  if (degree == 0 || degree > kMaxDegree)
    throw ValidationError("BadDegree", "field degree must be in [1, 40]");
  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->init(canonical_modulus(degree));
  return ctx;
}

CtxPtr FieldCtx::make_with_modulus(std::vector<Trit> modulus) {
  P3 m(modulus.begin(), modulus.end());
  trim(m);
  if (deg(m) < 1 || m.back() != 1)
    throw ValidationError("BadModulus", "modulus must be monic of positive degree");
  if (!is_irreducible(m))
    throw ValidationError("BadModulus", "modulus is not irreducible over GF(3)");
  if (static_cast<unsigned>(deg(m)) > kMaxDegree)
    throw ValidationError("BadDegree", "field degree must be in [1, 40]");
  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->init(std::move(m));
  return ctx;
}

void FieldCtx::init(std::vector<Trit> modulus) {
  modulus_ = std::move(modulus);
  degree_ = static_cast<unsigned>(modulus_.size() - 1);
  order_ = pow3(degree_);
  if (order_ <= kTableThreshold) build_tables();
}

std::uint64_t FieldCtx::mul_generic(std::uint64_t a, std::uint64_t b) const {
  // schoolbook product of base-3 digit vectors followed by modulus reduction
  unsigned k = degree_;
  std::array<Trit, 2 * kMaxDegree> prod{};
  std::array<Trit, kMaxDegree> da{}, db{};
  for (unsigned i = 0; i < k; ++i, a /= 3) da[i] = static_cast<Trit>(a % 3);
  for (unsigned i = 0; i < k; ++i, b /= 3) db[i] = static_cast<Trit>(b % 3);
  for (unsigned i = 0; i < k; ++i) {
    if (!da[i]) continue;
    for (unsigned j = 0; j < k; ++j)
      prod[i + j] = add3(prod[i + j], mul3(da[i], db[j]));
  }
  for (unsigned d = 2 * k - 2; d >= k && d < 2 * k; --d) {
    Trit c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    for (unsigned j = 0; j < k; ++j)
      prod[d - k + j] = sub3(prod[d - k + j], mul3(c, modulus_[j]));
  }
  std::uint64_t idx = 0;
  for (unsigned i = k; i-- > 0;) idx = idx * 3 + prod[i];
  return idx;
}

void FieldCtx::build_tables() {
  const std::uint64_t q = order_;
  if (q == 3) {
    // GF(3): handled by the generic paths cheaply, but tables keep the code uniform
  }
  // find a multiplicative generator
  auto factors = prime_factors(q - 1);
  std::uint64_t gen = 0;
  for (std::uint64_t cand = 2; cand < q; ++cand) {
    bool ok = true;
    for (auto p : factors) {
      // cand^((q-1)/p) via square-and-multiply on generic multiplication
      std::uint64_t e = (q - 1) / p, base = cand, acc = 1;
      while (e) {
        if (e & 1) acc = mul_generic(acc, base);
        base = mul_generic(base, base);
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = cand;
      break;
    }
  }
  if (!gen) throw InternalError("GeneratorSearch", "no multiplicative generator found");

  exp_.assign(q - 1, 0);
  log_.assign(q, 0);  // log_[0] unused
  std::uint64_t cur = 1;
  for (std::uint64_t l = 0; l < q - 1; ++l) {
    exp_[l] = static_cast<std::uint32_t>(cur);
    log_[cur] = static_cast<std::uint32_t>(l);
    cur = mul_generic(cur, gen);
  }
}

FieldElement FieldCtx::zero() const { return from_index(0); }
FieldElement FieldCtx::one() const { return from_index(1); }

FieldElement FieldCtx::from_int(long v) const {
  long r = v % 3;
  if (r < 0) r += 3;
  return from_index(static_cast<std::uint64_t>(r));
}

FieldElement FieldCtx::generator() const {
  if (degree_ == 1) return zero();  // residue class of z = x is 0 in GF(3)
  return from_index(3);
}

FieldElement FieldCtx::element(std::vector<Trit> coeffs) const {
  if (coeffs.size() > degree_)
    throw ValidationError("BadCoeffs", "coefficient vector longer than field degree");
  for (auto c : coeffs)
    if (c > 2) throw ValidationError("BadCoeffs", "coefficient not in {0,1,2}");
  coeffs.resize(degree_, 0);
  return FieldElement(shared_from_this(), std::move(coeffs));
}

FieldElement FieldCtx::from_index(std::uint64_t idx) const {
  std::vector<Trit> c(degree_);
  for (unsigned i = 0; i < degree_; ++i, idx /= 3) c[i] = static_cast<Trit>(idx % 3);
  return FieldElement(shared_from_this(), std::move(c));
}

std::uint64_t FieldCtx::idx_add(std::uint64_t a, std::uint64_t b) const {
  // digit-wise addition mod 3 (indices are base-3 digit strings)
  std::uint64_t r = 0, m = 1;
  for (unsigned i = 0; i < degree_; ++i) {
    r += ((a % 3 + b % 3) % 3) * m;
    a /= 3;
    b /= 3;
    m *= 3;
  }
  return r;
}

std::uint64_t FieldCtx::idx_neg(std::uint64_t a) const {
  std::uint64_t r = 0, m = 1;
  for (unsigned i = 0; i < degree_; ++i) {
    r += ((3 - a % 3) % 3) * m;
    a /= 3;
    m *= 3;
  }
  return r;
}

std::uint64_t FieldCtx::idx_sub(std::uint64_t a, std::uint64_t b) const {
  return idx_add(a, idx_neg(b));
}

std::uint64_t FieldCtx::idx_mul(std::uint64_t a, std::uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  if (!log_.empty()) {
    std::uint64_t l = log_[a] + log_[b];
    if (l >= order_ - 1) l -= order_ - 1;
    return exp_[l];
  }
  return mul_generic(a, b);
}

std::uint64_t FieldCtx::idx_inv(std::uint64_t a) const {
  if (a == 0) throw ValidationError("DivisionByZero", "inverse of zero");
  if (!log_.empty()) {
    std::uint64_t l = log_[a];
    return exp_[l ? order_ - 1 - l : 0];
  }
  return idx_pow(a, order_ - 2);
}

std::uint64_t FieldCtx::idx_pow(std::uint64_t a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  if (!log_.empty()) {
    // exponent reduced mod q-1 via 128-bit product to avoid overflow
    unsigned __int128 l = static_cast<unsigned __int128>(log_[a]) * (e % (order_ - 1));
    return exp_[static_cast<std::uint64_t>(l % (order_ - 1))];
  }
  std::uint64_t acc = 1, base = a;
  while (e) {
    if (e & 1) acc = idx_mul(acc, base);
    base = idx_mul(base, base);
    e >>= 1;
  }
  return acc;
}

std::uint64_t FieldCtx::idx_frobenius(std::uint64_t a, unsigned r) const {
  if (a == 0) return 0;
  r %= degree_;
  if (!log_.empty()) {
    std::uint64_t l = log_[a];
    for (unsigned i = 0; i < r; ++i) l = (l * 3) % (order_ - 1);
    return exp_[l];
  }
  std::uint64_t res = a;
  for (unsigned i = 0; i < r; ++i) {
    std::uint64_t sq = mul_generic(res, res);
    res = mul_generic(sq, res);
  }
  return res;
}

Trit FieldCtx::idx_trace(std::uint64_t a) const {
  // trace is GF(3)-linear: Tr(Σ c_j z^j) = Σ c_j Tr(z^j)
  static thread_local const FieldCtx* cached_ctx = nullptr;
  static thread_local std::vector<Trit> basis_trace;
  if (cached_ctx != this) {
    basis_trace.assign(degree_, 0);
    std::uint64_t zj = 1;
    for (unsigned j = 0; j < degree_; ++j) {
      std::uint64_t s = 0, t = zj;
      for (unsigned i = 0; i < degree_; ++i) {
        s = idx_add(s, t);
        t = idx_frobenius(t, 1);
      }
      basis_trace[j] = static_cast<Trit>(s % 3);  // s is a prime-field index
      zj = idx_mul(zj, 3 % order_);
      if (degree_ == 1) zj = 0;
    }
    cached_ctx = this;
  }
  unsigned s = 0;
  for (unsigned j = 0; j < degree_; ++j, a /= 3) s += static_cast<unsigned>(a % 3) * basis_trace[j];
  return static_cast<Trit>(s % 3);
}

PowerClass FieldCtx::idx_character(std::uint64_t a, unsigned m) const {
  if ((order_ - 1) % m != 0)
    throw ValidationError("BadModulusOrder", "m does not divide q - 1");
  if (a == 0) return PowerClass::zero;
  if (!log_.empty()) return log_[a] % m == 0 ? PowerClass::yes : PowerClass::no;
  return idx_pow(a, (order_ - 1) / m) == 1 ? PowerClass::yes : PowerClass::no;
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

namespace {
const CtxPtr& require_ctx(const FieldElement& a) {
  if (a.is_null()) throw ValidationError("NullElement", "uninitialized field element");
  return a.ctx();
}

void require_same_ctx(const FieldElement& a, const FieldElement& b) {
  const auto& ca = require_ctx(a);
  const auto& cb = require_ctx(b);
  if (ca.get() != cb.get() && !ca->modulus_equals(*cb))
    throw ValidationError("CtxMismatch", "elements belong to different field contexts");
}
}  // namespace

bool FieldElement::is_zero() const {
  for (auto c : coeffs_)
    if (c) return false;
  return true;
}

bool FieldElement::is_one() const {
  if (coeffs_.empty() || coeffs_[0] != 1) return false;
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i]) return false;
  return true;
}

std::uint64_t FieldElement::index() const {
  std::uint64_t idx = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) idx = idx * 3 + coeffs_[i];
  return idx;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_ctx(*this, o);
  std::vector<Trit> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = add3(coeffs_[i], o.coeffs_[i]);
  return FieldElement(ctx_, std::move(c));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same_ctx(*this, o);
  std::vector<Trit> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sub3(coeffs_[i], o.coeffs_[i]);
  return FieldElement(ctx_, std::move(c));
}

FieldElement FieldElement::operator-() const {
  require_ctx(*this);
  std::vector<Trit> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sub3(0, coeffs_[i]);
  return FieldElement(ctx_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_ctx(*this, o);
  return ctx_->from_index(ctx_->idx_mul(index(), o.index()));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  require_same_ctx(*this, o);
  if (o.is_zero()) throw ValidationError("DivisionByZero", "division by zero field element");
  return *this * o.inverse();
}

bool FieldElement::operator==(const FieldElement& o) const {
  require_same_ctx(*this, o);
  return coeffs_ == o.coeffs_;
}

FieldElement FieldElement::inverse() const {
  const auto& ctx = require_ctx(*this);
  if (is_zero()) throw ValidationError("DivisionByZero", "inverse of zero field element");
  // extended Euclid in GF(3)[x] between the coefficient polynomial and modulus
  P3 r0(ctx->modulus());
  P3 r1(coeffs_.begin(), coeffs_.end());
  trim(r1);
  P3 s0{}, s1{1};
  while (!r1.empty()) {
    // division: r0 = q r1 + r
    P3 q{}, rem = r0;
    trim(rem);
    P3 r1m = r1;
    Trit lead = r1m.back();
    Trit lead_inv = lead == 1 ? 1 : 2;
    while (deg(rem) >= deg(r1)) {
      int shift = deg(rem) - deg(r1);
      Trit c = mul3(rem.back(), lead_inv);
      if (static_cast<int>(q.size()) <= shift) q.resize(shift + 1, 0);
      q[shift] = add3(q[shift], c);
      for (std::size_t j = 0; j < r1.size(); ++j)
        rem[shift + j] = sub3(rem[shift + j], mul3(c, r1[j]));
      trim(rem);
    }
    P3 s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 = gcd (a nonzero constant); inverse = s0 / r0
  Trit g = r0.empty() ? 1 : r0[0];
  Trit ginv = g == 1 ? 1 : 2;
  std::vector<Trit> c(ctx->degree(), 0);
  for (std::size_t i = 0; i < s0.size() && i < c.size(); ++i) c[i] = mul3(s0[i], ginv);
  return ctx->element(std::move(c));
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  const auto& ctx = require_ctx(*this);
  return ctx->from_index(ctx->idx_pow(index(), e));
}

FieldElement FieldElement::frobenius(unsigned r) const {
  const auto& ctx = require_ctx(*this);
  return ctx->from_index(ctx->idx_frobenius(index(), r));
}

Trit FieldElement::absolute_trace() const {
  const auto& ctx = require_ctx(*this);
  return ctx->idx_trace(index());
}

PowerClass FieldElement::character(unsigned m) const {
  const auto& ctx = require_ctx(*this);
  if (m != 2 && m != 4)
    throw ValidationError("BadModulusOrder", "character order must be 2 or 4");
  return ctx->idx_character(index(), m);
}

std::optional<FieldElement> FieldElement::sqrt() const {
  const auto& ctx = require_ctx(*this);
  if (is_zero()) return ctx->zero();
  const std::uint64_t q = ctx->order();
  if (ctx->idx_character(index(), 2) == PowerClass::no) return std::nullopt;
  if (q % 4 == 3) {
    FieldElement r = pow((q + 1) / 4);
    return r * r == *this ? std::optional<FieldElement>(r) : std::nullopt;
  }
  // Tonelli–Shanks for q ≡ 1 (mod 4)
  std::uint64_t s = q - 1;
  unsigned e = 0;
  while (s % 2 == 0) {
    s /= 2;
    ++e;
  }
  // find a quadratic non-residue
  FieldElement nr = ctx->zero();
  for (std::uint64_t i = 2; i < q; ++i) {
    FieldElement cand = ctx->from_index(i);
    if (ctx->idx_character(i, 2) == PowerClass::no) {
      nr = cand;
      break;
    }
  }
  FieldElement x = pow((s + 1) / 2);
  FieldElement b = pow(s);
  FieldElement g = nr.pow(s);
  unsigned r = e;
  for (;;) {
    FieldElement t = b;
    unsigned m = 0;
    while (!t.is_one() && m < r) {
      t = t * t;
      ++m;
    }
    if (m == 0) return x;
    FieldElement gs = g;
    for (unsigned i = 0; i + 1 < r - m; ++i) gs = gs * gs;
    x = x * gs;
    g = gs * gs;
    b = b * g;
    r = m;
  }
}

bool FieldElement::lex_less(const FieldElement& o) const {
  require_same_ctx(*this, o);
  return std::lexicographical_compare(coeffs_.begin(), coeffs_.end(), o.coeffs_.begin(),
                                      o.coeffs_.end());
}

FieldElement field_arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
    case ArithOp::div:
      return a / b;
  }
  throw InternalError("BadOp", "unknown arithmetic op");
}

FieldElement frobenius(const FieldElement& a, unsigned r) { return a.frobenius(r); }
Trit absolute_trace(const FieldElement& a) { return a.absolute_trace(); }
PowerClass character(const FieldElement& a, unsigned m) { return a.character(m); }

// ---------------------------------------------------------------------------
// Embedding
// ---------------------------------------------------------------------------

namespace {

// Minimal polynomial arithmetic over an arbitrary FieldCtx, only what root
// finding for embeddings needs.  Coefficients ascending, trimmed.
using PE = std::vector<FieldElement>;

void trim_pe(PE& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

PE mul_pe(const PE& a, const PE& b, const CtxPtr& ctx) {
  if (a.empty() || b.empty()) return {};
  PE r(a.size() + b.size() - 1, ctx->zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  trim_pe(r);
  return r;
}

PE mod_pe(PE a, const PE& m, const CtxPtr& ctx) {
  trim_pe(a);
  FieldElement lead_inv = m.back().inverse();
  while (a.size() >= m.size()) {
    FieldElement c = a.back() * lead_inv;
    std::size_t shift = a.size() - m.size();
    for (std::size_t j = 0; j < m.size(); ++j) a[shift + j] = a[shift + j] - c * m[j];
    trim_pe(a);
  }
  (void)ctx;
  return a;
}

PE monic_pe(PE a) {
  trim_pe(a);
  if (a.empty() || a.back().is_one()) return a;
  FieldElement inv = a.back().inverse();
  for (auto& c : a) c = c * inv;
  return a;
}

PE gcd_pe(PE a, PE b, const CtxPtr& ctx) {
  trim_pe(a);
  trim_pe(b);
  while (!b.empty()) {
    PE r = mod_pe(a, monic_pe(b), ctx);
    a = std::move(b);
    b = std::move(r);
  }
  return monic_pe(a);
}

PE powmod_pe(PE base, std::uint64_t e, const PE& m, const CtxPtr& ctx) {
  PE acc{ctx->one()};
  base = mod_pe(std::move(base), m, ctx);
  while (e) {
    if (e & 1) acc = mod_pe(mul_pe(acc, base, ctx), m, ctx);
    base = mod_pe(mul_pe(base, base, ctx), m, ctx);
    e >>= 1;
  }
  return acc;
}

// All roots in ctx of a squarefree polynomial that splits completely over ctx.
std::vector<FieldElement> all_roots(PE f, const CtxPtr& ctx) {
  std::vector<FieldElement> roots;
  std::mt19937_64 rng(0x7515714bu);
  std::vector<PE> stack{monic_pe(std::move(f))};
  while (!stack.empty()) {
    PE cur = std::move(stack.back());
    stack.pop_back();
    trim_pe(cur);
    if (cur.size() <= 1) continue;
    if (cur.size() == 2) {
      roots.push_back(-cur[0]);  // monic linear: x + c
      continue;
    }
    // split with gcd(cur, (x+a)^((q-1)/2) - 1)
    for (;;) {
      FieldElement a = ctx->from_index(rng() % ctx->order());
      PE shifted{a, ctx->one()};
      PE w = powmod_pe(shifted, (ctx->order() - 1) / 2, cur, ctx);
      if (w.empty())
        w = PE{-ctx->one()};
      else
        w[0] = w[0] - ctx->one();
      PE g = gcd_pe(w, cur, ctx);
      if (g.size() > 1 && g.size() < cur.size()) {
        PE quot;  // cur / g by repeated subtraction is wasteful; do real division
        {
          PE rem = cur;
          trim_pe(rem);
          quot.assign(rem.size() - g.size() + 1, ctx->zero());
          FieldElement lead_inv = g.back().inverse();
          while (rem.size() >= g.size() && !rem.empty()) {
            FieldElement c = rem.back() * lead_inv;
            std::size_t shift = rem.size() - g.size();
            quot[shift] = quot[shift] + c;
            for (std::size_t j = 0; j < g.size(); ++j) rem[shift + j] = rem[shift + j] - c * g[j];
            trim_pe(rem);
          }
        }
        stack.push_back(std::move(g));
        stack.push_back(std::move(quot));
        break;
      }
    }
  }
  return roots;
}

}  // namespace

Embedding::Embedding(CtxPtr source, CtxPtr target, FieldElement image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  power_index_.reserve(source_->degree());
  std::uint64_t p = 1;
  for (unsigned j = 0; j < source_->degree(); ++j) {
    power_index_.push_back(p);
    p = target_->idx_mul(p, image_.index());
  }
}

Embedding Embedding::identity(const CtxPtr& ctx) {
  return Embedding(ctx, ctx, ctx->generator());
}

Embedding Embedding::make(CtxPtr source, CtxPtr target) {
  if (target->degree() % source->degree() != 0)
    throw ValidationError("EmbeddingDegree",
                          "source degree must divide target degree for an embedding");
  if (source->degree() == target->degree() && source->modulus_equals(*target))
    return identity(source);
  // roots of the source modulus in the target field; pick the lex-least
  PE f;
  f.reserve(source->modulus().size());
  for (auto c : source->modulus()) f.push_back(target->from_int(c));
  auto roots = all_roots(std::move(f), target);
  if (roots.empty()) throw InternalError("EmbeddingRoots", "source modulus has no roots in target");
  const FieldElement* best = &roots[0];
  for (const auto& r : roots)
    if (r.lex_less(*best)) best = &r;
  return Embedding(std::move(source), std::move(target), *best);
}

FieldElement Embedding::apply(const FieldElement& a) const {
  if (a.ctx().get() != source_.get() && !a.ctx()->modulus_equals(*source_))
    throw ValidationError("CtxMismatch", "element does not belong to the embedding source");
  return target_->from_index(apply_index(a.index()));
}

std::uint64_t Embedding::apply_index(std::uint64_t idx) const {
  std::uint64_t acc = 0;
  for (unsigned j = 0; j < source_->degree(); ++j, idx /= 3) {
    std::uint64_t d = idx % 3;
    if (!d) continue;
    std::uint64_t term = power_index_[j];
    if (d == 2) term = target_->idx_add(term, term);
    acc = target_->idx_add(acc, term);
  }
  return acc;
}

Embedding Embedding::then(const Embedding& next) const {
  if (target_.get() != next.source_.get() && !target_->modulus_equals(*next.source_))
    throw ValidationError("CtxMismatch", "embedding composition contexts do not line up");
  return Embedding(source_, next.target_, next.apply(image_));
}

// ---------------------------------------------------------------------------
// FieldTower
// ---------------------------------------------------------------------------

FieldTower& FieldTower::global() {
  static FieldTower tower;
  return tower;
}

CtxPtr FieldTower::ctx(unsigned degree) {
  std::lock_guard<std::mutex> lock(mu_);
  if (ctx_cache_.size() <= degree) ctx_cache_.resize(degree + 1);
  if (!ctx_cache_[degree]) ctx_cache_[degree] = FieldCtx::make(degree);
  return ctx_cache_[degree];
}

const Embedding& FieldTower::embedding(unsigned from, unsigned to) {
  CtxPtr s, t;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < emb_keys_.size(); ++i)
      if (emb_keys_[i] == std::make_pair(from, to)) return *emb_cache_[i];
  }
  s = ctx(from);
  t = ctx(to);
  auto emb = std::make_unique<Embedding>(Embedding::make(s, t));
  std::lock_guard<std::mutex> lock(mu_);
  for (std::size_t i = 0; i < emb_keys_.size(); ++i)
    if (emb_keys_[i] == std::make_pair(from, to)) return *emb_cache_[i];
  emb_cache_.push_back(std::move(emb));
  emb_keys_.emplace_back(from, to);
  return *emb_cache_.back();
}

// ---------------------------------------------------------------------------

FieldElement solve_alpha(unsigned n) {
  if (n == 0) throw ValidationError("BadDegree", "n must be positive");
  CtxPtr ctx = FieldTower::global().ctx(2 * n);
  // α^(3^n − 1) = −1  ⟺  α^(3^n) = −α  ⟺  frobenius(α, n) = −α (α ≠ 0);
  // scan coefficient vectors in lex order (constant term most significant)
  const unsigned k = 2 * n;
  std::vector<Trit> c(k, 0);
  for (;;) {
    FieldElement cand = ctx->element(std::vector<Trit>(c.begin(), c.end()));
    if (!cand.is_zero() && cand.frobenius(n) == -cand) return cand;
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && c[pos] == 2) c[pos--] = 0;
    if (pos < 0) throw InternalError("AlphaSearch", "no α with α^(3^n − 1) = −1 found");
    ++c[pos];
  }
}

}  // namespace twistlab::gf3
