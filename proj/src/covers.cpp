#include "twistlab/covers.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "twistlab/errors.hpp"

namespace twistlab::covers {

using funcfield::FactorExp;
using funcfield::Factorization;
using funcfield::factorize;
using funcfield::Poly;
using gf3::Embedding;
using gf3::FieldCtx;
using gf3::FieldElement;
using gf3::FieldTower;
using gf3::PowerClass;

namespace {

constexpr std::uint64_t kBruteTableCap = 43046721ull;  // 3^16: memory cap for root tables

std::uint64_t pow3(unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 3;
  return r;
}

// Does f have a place (finite or infinite) of odd valuation?  If not, f is a
// constant times a square and the Kummer covers s² = f, r⁴ = f contain a
// constant-field extension instead of being geometrically integral curves.
bool has_odd_valuation(const RatFunc& f, std::uint64_t seed) {
  for (const Poly* part : {&f.num(), &f.den()}) {
    if (part->degree() < 1) continue;
    for (const auto& fe : factorize(*part, seed).factors)
      if (fe.multiplicity % 2 != 0) return true;
  }
  return (f.num().degree() - f.den().degree()) % 2 != 0;
}

}  // namespace

const char* kind_name(CoverKind k) {
  switch (k) {
    case CoverKind::base_p1: return "base-p1";
    case CoverKind::artin_schreier: return "artin-schreier";
    case CoverKind::quadratic: return "quadratic";
    case CoverKind::quartic: return "quartic";
    case CoverKind::sextic: return "sextic";
  }
  throw InternalError("BadKind", "unknown cover kind");
}

const char* maximality_name(Maximality m) {
  switch (m) {
    case Maximality::maximal: return "maximal";
    case Maximality::minimal: return "minimal";
    case Maximality::maximal_and_minimal: return "maximal-and-minimal";
    case Maximality::neither: return "neither";
  }
  throw InternalError("BadKind", "unknown maximality status");
}

// ---------------------------------------------------------------------------
// CoverModel construction / validation
// ---------------------------------------------------------------------------

namespace {

CtxPtr canonical_base_ctx(unsigned n) {
  if (n < 1)
    throw ValidationError("BadParameter", "tower parameter n must be >= 1");
  return FieldTower::global().ctx(2 * n);
}

void require_cover_ctx(const CtxPtr& cover_ctx, const CtxPtr& data_ctx) {
  if (!cover_ctx->modulus_equals(*data_ctx))
    throw ValidationError("CtxMismatch",
                          "cover data must live in the canonical field GF(3^(2n))");
}

}  // namespace

void CoverModel::adopt_f(const RatFunc& f, std::uint64_t seed) {
  require_cover_ctx(ctx_, f.ctx());
  const auto sq = funcfield::is_square(f, seed);  // throws ZeroInput for f = 0
  if (sq.is_square)
    throw ValidationError("SquareF", "f is a square, so s^2 = f does not define a twist cover");
  if (!has_odd_valuation(f, seed))
    throw ValidationError("ConstantFieldExtension",
                          "f is a constant times a square; the cover degenerates to a "
                          "constant-field extension and is not geometrically integral");
  f_ = f;
}

void CoverModel::adopt_g(const RatFunc& g, std::uint64_t seed) {
  require_cover_ctx(ctx_, g.ctx());
  auto red = funcfield::as_reduce(g, seed);  // throws AsTrivial when g = h³ − h
  if (red.reduced.is_constant())
    throw ValidationError("ConstantFieldExtension",
                          "g reduces to a constant with nonzero trace; w^3 - w = g defines a "
                          "constant-field extension, not a curve over GF(3^(2n))");
  g_reduced_ = std::move(red.reduced);
  g_shift_ = std::move(red.shift);
  g_poles_ = std::move(red.poles);
}

CoverModel CoverModel::base_p1(unsigned n) {
  return CoverModel(CoverKind::base_p1, n, canonical_base_ctx(n));
}

CoverModel CoverModel::artin_schreier(unsigned n, const RatFunc& g, std::uint64_t seed) {
  CoverModel c(CoverKind::artin_schreier, n, canonical_base_ctx(n));
  c.adopt_g(g, seed);
  return c;
}

CoverModel CoverModel::quadratic(unsigned n, const RatFunc& f, std::uint64_t seed) {
  CoverModel c(CoverKind::quadratic, n, canonical_base_ctx(n));
  c.adopt_f(f, seed);
  return c;
}

CoverModel CoverModel::quartic(unsigned n, const RatFunc& f, std::uint64_t seed) {
  CoverModel c(CoverKind::quartic, n, canonical_base_ctx(n));
  c.adopt_f(f, seed);
  return c;
}

CoverModel CoverModel::sextic(unsigned n, const RatFunc& f, const RatFunc& g,
                              std::uint64_t seed) {
  CoverModel c(CoverKind::sextic, n, canonical_base_ctx(n));
  c.adopt_f(f, seed);
  c.adopt_g(g, seed);
  return c;
}

const RatFunc& CoverModel::f() const {
  if (!f_) throw InternalError("MissingField", "this cover kind has no f");
  return *f_;
}

const RatFunc& CoverModel::g_reduced() const {
  if (!g_reduced_) throw InternalError("MissingField", "this cover kind has no g");
  return *g_reduced_;
}

const RatFunc& CoverModel::g_shift() const {
  if (!g_shift_) throw InternalError("MissingField", "this cover kind has no g");
  return *g_shift_;
}

const std::vector<std::pair<Place, unsigned>>& CoverModel::g_poles() const {
  if (!g_reduced_) throw InternalError("MissingField", "this cover kind has no g");
  return g_poles_;
}

// ---------------------------------------------------------------------------
// Genus
// ---------------------------------------------------------------------------

namespace {

// All places where f has nonzero valuation, with that valuation.
std::vector<std::pair<Place, long>> support_of(const RatFunc& f) {
  std::vector<std::pair<Place, long>> out;
  if (f.num().degree() >= 1)
    for (const auto& fe : factorize(f.num()).factors)
      out.emplace_back(Place::finite_trusted(fe.factor), static_cast<long>(fe.multiplicity));
  if (f.den().degree() >= 1)
    for (const auto& fe : factorize(f.den()).factors)
      out.emplace_back(Place::finite_trusted(fe.factor), -static_cast<long>(fe.multiplicity));
  const long v_inf = static_cast<long>(f.den().degree()) - static_cast<long>(f.num().degree());
  if (v_inf != 0) out.emplace_back(Place::infinity(f.ctx()), v_inf);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first.canonical_less(b.first); });
  return out;
}

long valuation_at(const std::vector<std::pair<Place, long>>& support, const Place& p) {
  for (const auto& [place, v] : support)
    if (place == p) return v;
  return 0;
}

// χ₂ of the unit part of f at a place (residue-field square test).
bool unit_is_square_at(const RatFunc& f, const Place& p) {
  if (p.is_infinite()) {
    const FieldElement u = f.num().leading_coeff() / f.den().leading_coeff();
    return u.character(2) == PowerClass::yes;
  }
  const auto [v, unit] = funcfield::local_unit(f, p.poly());
  return funcfield::residue_is_square(unit, p.poly());
}

GenusReport genus_quadratic(const RatFunc& f) {
  GenusReport rep;
  long odd_degree_total = 0;
  for (const auto& [place, v] : support_of(f)) {
    if (v % 2 == 0) continue;
    odd_degree_total += static_cast<long>(place.degree());
    rep.ramification.emplace_back(
        place, "v(f) = " + std::to_string(v) + " odd: ramified in the double cover");
  }
  if (odd_degree_total % 2 != 0)
    throw InternalError("OddRamification",
                        "total degree of odd-valuation places must be even");
  rep.genus = -1 + odd_degree_total / 2;
  if (rep.genus < 0) throw InternalError("NegativeGenus", "quadratic genus came out negative");
  return rep;
}

GenusReport genus_artin_schreier(const std::vector<std::pair<Place, unsigned>>& poles) {
  GenusReport rep;
  long total = 0;
  for (const auto& [place, d] : poles) {
    total += static_cast<long>(d + 1) * static_cast<long>(place.degree());
    rep.ramification.emplace_back(place, "pole of reduced g of order " + std::to_string(d) +
                                             ": contributes (d+1)·deg = " +
                                             std::to_string((d + 1) * place.degree()));
  }
  rep.genus = total - 2;
  if (rep.genus < 0)
    throw InternalError("NegativeGenus", "Artin-Schreier genus came out negative");
  return rep;
}

GenusReport genus_quartic(const RatFunc& f) {
  GenusReport rep;
  long total = -8;
  for (const auto& [place, v] : support_of(f)) {
    const long m = ((v % 4) + 4) % 4;
    if (m == 0) continue;
    const long d = std::gcd(4l, m);
    total += (4 - d) * static_cast<long>(place.degree());
    rep.ramification.emplace_back(place, "v(f) = " + std::to_string(v) + ", gcd(4,v) = " +
                                             std::to_string(d) + ": contributes (4-d)·deg");
  }
  if (total % 2 != 0)
    throw InternalError("OddRamification", "quartic ramification total must be even");
  rep.genus = total / 2 + 1;
  if (rep.genus < 0) throw InternalError("NegativeGenus", "quartic genus came out negative");
  return rep;
}

GenusReport genus_sextic(const RatFunc& f,
                         const std::vector<std::pair<Place, unsigned>>& poles) {
  // Riemann–Hurwitz over the double cover D: 2g_H − 2 = 3(2g_D − 2) + Σ 2(d_Q+1)·deg Q,
  // where Q runs over the poles of g pulled back to D.  No re-reduction of g
  // over D is needed: ramification in D doubles a pole order d to 2d, and
  // gcd(2d, 3) = gcd(d, 3) = 1, so pulled-back orders stay coprime to 3.
  const GenusReport d_rep = genus_quadratic(f);
  const auto support = support_of(f);
  GenusReport rep;
  long total = 3 * (2 * d_rep.genus - 2);
  for (const auto& [place, d] : poles) {
    const long v = valuation_at(support, place);
    const long deg = static_cast<long>(place.degree());
    long contribution;
    std::string desc;
    if (((v % 2) + 2) % 2 == 1) {
      // ramified in D: one place above, pole order doubles
      const unsigned dq = 2 * d;
      if (dq % 3 == 0)
        throw InternalError("PullbackOrder", "pulled-back pole order divisible by 3");
      contribution = 2 * static_cast<long>(dq + 1) * deg;
      desc = "ramified in D (v(f) odd): one place above, pole order " + std::to_string(dq);
    } else if (unit_is_square_at(f, place)) {
      // split: two places of the same degree, pole order unchanged
      contribution = 2 * 2 * static_cast<long>(d + 1) * deg;
      desc = "splits in D (unit square): two places above, pole order " + std::to_string(d);
    } else {
      // inert: one place of doubled degree, pole order unchanged
      contribution = 2 * static_cast<long>(d + 1) * (2 * deg);
      desc = "inert in D (unit non-square): one place of degree " + std::to_string(2 * deg) +
             ", pole order " + std::to_string(d);
    }
    total += contribution;
    rep.ramification.emplace_back(place, desc);
  }
  if (total % 2 != 0)
    throw InternalError("OddRamification", "sextic Riemann-Hurwitz total must be even");
  rep.genus = total / 2 + 1;
  if (rep.genus < 0) throw InternalError("NegativeGenus", "sextic genus came out negative");
  return rep;
}

}  // namespace

GenusReport genus(const CoverModel& cover) {
  switch (cover.kind()) {
    case CoverKind::base_p1: return {};
    case CoverKind::artin_schreier: return genus_artin_schreier(cover.g_poles());
    case CoverKind::quadratic: return genus_quadratic(cover.f());
    case CoverKind::quartic: return genus_quartic(cover.f());
    case CoverKind::sextic: return genus_sextic(cover.f(), cover.g_poles());
  }
  throw InternalError("BadKind", "unknown cover kind");
}

// ---------------------------------------------------------------------------
// Point counting
// ---------------------------------------------------------------------------

namespace {

// Ascending coefficient index vectors of a rational function pushed into the
// enumeration field; all hot-loop arithmetic stays in the index domain.
struct IdxRat {
  std::vector<std::uint64_t> num, den;
  int deg_num, deg_den;
  std::uint64_t lc_ratio;  // index of lc(num)/lc(den) in the big field
};

std::vector<std::uint64_t> embed_indices(const Poly& p, const Embedding& emb) {
  std::vector<std::uint64_t> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(emb.apply(c).index());
  return out;
}

IdxRat embed_rat(const RatFunc& x, const Embedding& emb) {
  IdxRat r;
  r.num = embed_indices(x.num(), emb);
  r.den = embed_indices(x.den(), emb);
  r.deg_num = x.num().degree();
  r.deg_den = x.den().degree();
  const FieldElement lr = emb.apply(x.num().leading_coeff() / x.den().leading_coeff());
  r.lc_ratio = lr.index();
  return r;
}

std::uint64_t ev(const FieldCtx& K, const std::vector<std::uint64_t>& c, std::uint64_t x) {
  std::uint64_t acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = K.idx_add(K.idx_mul(acc, x), c[i]);
  return acc;
}

// Synthetic division by (t − x); caller guarantees p(x) = 0 and deg p ≥ 1.
std::vector<std::uint64_t> deflate(const FieldCtx& K, const std::vector<std::uint64_t>& c,
                                   std::uint64_t x) {
  const std::size_t d = c.size() - 1;
  std::vector<std::uint64_t> q(d, 0);
  q[d - 1] = c[d];
  for (std::size_t j = d - 1; j-- > 0;) q[j] = K.idx_add(c[j + 1], K.idx_mul(x, q[j + 1]));
  return q;
}

// (valuation, unit value) of num/den at the finite point x.  Slow path; only
// reached at the finitely many zeros of num or den.
std::pair<long, std::uint64_t> local_at(const FieldCtx& K, const IdxRat& r, std::uint64_t x) {
  std::uint64_t nv = ev(K, r.num, x);
  std::uint64_t dv = ev(K, r.den, x);
  if (nv != 0 && dv != 0) return {0, K.idx_mul(nv, K.idx_inv(dv))};
  if (nv == 0) {
    long v = 0;
    std::vector<std::uint64_t> cur = r.num;
    do {
      cur = deflate(K, cur, x);
      ++v;
      nv = ev(K, cur, x);
    } while (nv == 0);
    return {v, K.idx_mul(nv, K.idx_inv(dv))};
  }
  long v = 0;
  std::vector<std::uint64_t> cur = r.den;
  do {
    cur = deflate(K, cur, x);
    ++v;
    dv = ev(K, cur, x);
  } while (dv == 0);
  return {-v, K.idx_mul(nv, K.idx_inv(dv))};
}

struct CountContext {
  const FieldCtx* K;
  std::uint64_t qk;
  std::optional<IdxRat> f, g;
};

inline int quad_local_points(const FieldCtx& K, long v, std::uint64_t u) {
  if (((v % 2) + 2) % 2 == 1) return 1;
  return K.idx_character(u, 2) == PowerClass::yes ? 2 : 0;
}

inline int quartic_local_points(const FieldCtx& K, long v, std::uint64_t u) {
  const long m = ((v % 4) + 4) % 4;
  const long d = std::gcd(4l, m);
  if (d == 1) return 1;
  if (d == 2) return K.idx_character(u, 2) == PowerClass::yes ? 2 : 0;
  return K.idx_character(u, 4) == PowerClass::yes ? 4 : 0;
}

// Points of the cover above the finite point x, by the local splitting rules.
int fiber_points(const CountContext& cc, CoverKind kind, std::uint64_t x) {
  const FieldCtx& K = *cc.K;
  switch (kind) {
    case CoverKind::base_p1:
      return 1;
    case CoverKind::artin_schreier: {
      const std::uint64_t dv = ev(K, cc.g->den, x);
      if (dv == 0) return 1;  // pole of reduced g: totally ramified
      const std::uint64_t val = K.idx_mul(ev(K, cc.g->num, x), K.idx_inv(dv));
      return K.idx_trace(val) == 0 ? 3 : 0;
    }
    case CoverKind::quadratic: {
      const std::uint64_t nv = ev(K, cc.f->num, x);
      const std::uint64_t dv = ev(K, cc.f->den, x);
      if (nv != 0 && dv != 0)
        return K.idx_character(K.idx_mul(nv, K.idx_inv(dv)), 2) == PowerClass::yes ? 2 : 0;
      const auto [v, u] = local_at(K, *cc.f, x);
      return quad_local_points(K, v, u);
    }
    case CoverKind::quartic: {
      const std::uint64_t nv = ev(K, cc.f->num, x);
      const std::uint64_t dv = ev(K, cc.f->den, x);
      if (nv != 0 && dv != 0)
        return K.idx_character(K.idx_mul(nv, K.idx_inv(dv)), 4) == PowerClass::yes ? 4 : 0;
      const auto [v, u] = local_at(K, *cc.f, x);
      return quartic_local_points(K, v, u);
    }
    case CoverKind::sextic: {
      int n_d;
      const std::uint64_t nv = ev(K, cc.f->num, x);
      const std::uint64_t dv = ev(K, cc.f->den, x);
      if (nv != 0 && dv != 0) {
        n_d = K.idx_character(K.idx_mul(nv, K.idx_inv(dv)), 2) == PowerClass::yes ? 2 : 0;
      } else {
        const auto [v, u] = local_at(K, *cc.f, x);
        n_d = quad_local_points(K, v, u);
      }
      if (n_d == 0) return 0;
      const std::uint64_t gdv = ev(K, cc.g->den, x);
      if (gdv == 0) return n_d;  // each point of D above x is totally ramified in H/D
      const std::uint64_t val = K.idx_mul(ev(K, cc.g->num, x), K.idx_inv(gdv));
      return K.idx_trace(val) == 0 ? 3 * n_d : 0;
    }
  }
  throw InternalError("BadKind", "unknown cover kind");
}

// Points of the cover above t = ∞, via valuations in the 1/t chart.
int infinity_points(const CountContext& cc, CoverKind kind) {
  const FieldCtx& K = *cc.K;
  const auto as_points = [&](const IdxRat& g) -> int {
    const int v = g.deg_num - g.deg_den;
    if (v > 0) return 1;  // pole of reduced g
    const std::uint64_t val = v < 0 ? 0 : g.lc_ratio;
    return K.idx_trace(val) == 0 ? 3 : 0;
  };
  switch (kind) {
    case CoverKind::base_p1:
      return 1;
    case CoverKind::artin_schreier:
      return as_points(*cc.g);
    case CoverKind::quadratic: {
      const long v = cc.f->deg_den - cc.f->deg_num;
      return quad_local_points(K, v, cc.f->lc_ratio);
    }
    case CoverKind::quartic: {
      const long v = cc.f->deg_den - cc.f->deg_num;
      return quartic_local_points(K, v, cc.f->lc_ratio);
    }
    case CoverKind::sextic: {
      const long v = cc.f->deg_den - cc.f->deg_num;
      const int n_d = quad_local_points(K, v, cc.f->lc_ratio);
      if (n_d == 0) return 0;
      const int vg = cc.g->deg_num - cc.g->deg_den;
      if (vg > 0) return n_d;
      const std::uint64_t val = vg < 0 ? 0 : cc.g->lc_ratio;
      return K.idx_trace(val) == 0 ? 3 * n_d : 0;
    }
  }
  throw InternalError("BadKind", "unknown cover kind");
}

struct Enumeration {
  CtxPtr ctx_k;
  std::uint64_t qk;
  Embedding emb;
};

Enumeration prepare_enumeration(const CoverModel& cover, unsigned k,
                                const CountOptions& opts) {
  if (k < 1) throw ValidationError("BadParameter", "extension index k must be >= 1");
  const unsigned ext_degree = 2 * cover.n() * k;
  if (ext_degree > 40)
    throw BudgetError("BudgetExceeded",
                      "enumeration field 3^" + std::to_string(ext_degree) + " exceeds 3^40");
  const std::uint64_t qk = pow3(ext_degree);
  if (qk > opts.budget)
    throw BudgetError("BudgetExceeded",
                      "enumeration over " + std::to_string(qk) +
                          " field elements exceeds the budget of " + std::to_string(opts.budget));
  auto& tower = FieldTower::global();
  return {tower.ctx(ext_degree), qk, tower.embedding(2 * cover.n(), ext_degree)};
}

CountContext make_count_context(const CoverModel& cover, const Enumeration& en) {
  CountContext cc;
  cc.K = en.ctx_k.get();
  cc.qk = en.qk;
  if (cover.has_f()) cc.f = embed_rat(cover.f(), en.emb);
  if (cover.has_g()) cc.g = embed_rat(cover.g_reduced(), en.emb);
  return cc;
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

std::int64_t count_points(const CoverModel& cover, unsigned k, const CountOptions& opts) {
  const Enumeration en = prepare_enumeration(cover, k, opts);
  if (cover.kind() == CoverKind::base_p1) return static_cast<std::int64_t>(en.qk) + 1;
  const CountContext cc = make_count_context(cover, en);
  const CoverKind kind = cover.kind();

  const unsigned threads = std::min<std::uint64_t>(resolve_threads(opts.threads), en.qk);
  std::vector<std::int64_t> partial(threads, 0);
  auto run_range = [&](std::uint64_t lo, std::uint64_t hi, std::int64_t& sum) {
    std::int64_t acc = 0;
    for (std::uint64_t x = lo; x < hi; ++x) acc += fiber_points(cc, kind, x);
    sum = acc;
  };
  if (threads <= 1) {
    run_range(0, en.qk, partial[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (en.qk + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(en.qk, lo + chunk);
      pool.emplace_back(run_range, lo, hi, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
  }
  // Partial sums combined in worker order: the reduction is a plain integer
  // sum, so the result is identical for every thread count.
  std::int64_t total = 0;
  for (const std::int64_t p : partial) total += p;
  return total + infinity_points(cc, kind);
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------
//
// Counts solutions of the defining equations directly.  Fiber coordinates are
// found by exhaustive search: the tables below record, for every value v in
// the field, how many s satisfy s² = v, how many r satisfy r⁴ = v, and how
// many w satisfy w³ − w = v.  Affine points are then Σ_t table[value at t].
// Boundary analysis, per kind, at points where the defining value is 0 or ∞
// (zeros/poles of f or g and t = ∞), where the affine equation misses points
// of the smooth model or hits singular ones:
//   • Artin–Schreier at a pole of reduced g: the pole order is coprime to 3,
//     so the place is totally ramified in the degree-3 cover: exactly one
//     point above (the only theory input used; everywhere else the count is
//     an explicit root enumeration).
//   • Kummer layers at v = v_t(f) ≠ 0: rescale the fiber coordinate by the
//     uniformizer, leaving y^d = u with d = gcd(4 or 2, v) and u the unit
//     part of f; points above correspond to enumerated roots of y^d = u
//     (d = 1 is the tame totally-ramified case: one point).
//   • Sextic: the D-count above t is computed by the quadratic boundary rule,
//     then multiplied by the enumerated Artin–Schreier fiber (or taken as-is
//     at poles of g, where H/D is totally ramified).
// ---------------------------------------------------------------------------

namespace {

struct RootTables {
  std::vector<std::uint8_t> sq;    // sq[v]   = #{s : s² = v}
  std::vector<std::uint8_t> quart; // quart[v]= #{r : r⁴ = v}
  std::vector<std::uint8_t> cube;  // cube[v] = #{w : w³ − w = v}
};

RootTables build_root_tables(const FieldCtx& K, std::uint64_t qk, bool need_sq,
                             bool need_quart, bool need_cube) {
  RootTables t;
  if (need_sq) t.sq.assign(qk, 0);
  if (need_quart) t.quart.assign(qk, 0);
  if (need_cube) t.cube.assign(qk, 0);
  for (std::uint64_t a = 0; a < qk; ++a) {
    const std::uint64_t a2 = K.idx_mul(a, a);
    if (need_sq) ++t.sq[a2];
    if (need_quart) ++t.quart[K.idx_mul(a2, a2)];
    if (need_cube) ++t.cube[K.idx_sub(K.idx_mul(a2, a), a)];
  }
  return t;
}

int brute_quad_local(const RootTables& t, long v, std::uint64_t u) {
  if (((v % 2) + 2) % 2 == 1) return 1;  // tame odd valuation: unique point above
  return t.sq[u];
}

int brute_quartic_local(const RootTables& t, long v, std::uint64_t u) {
  const long m = ((v % 4) + 4) % 4;
  const long d = std::gcd(4l, m);
  if (d == 1) return 1;  // tame totally ramified: unique point above
  if (d == 2) return t.sq[u];
  return t.quart[u];
}

}  // namespace

std::int64_t brute_force_count(const CoverModel& cover, unsigned k, const CountOptions& opts) {
  CountOptions capped = opts;
  capped.budget = std::min(opts.budget, kBruteTableCap);
  const Enumeration en = prepare_enumeration(cover, k, capped);
  if (cover.kind() == CoverKind::base_p1) {
    // One point per affine parameter value plus the point at infinity.
    std::int64_t total = 0;
    for (std::uint64_t x = 0; x < en.qk; ++x) total += 1;
    return total + 1;
  }
  const CountContext cc = make_count_context(cover, en);
  const FieldCtx& K = *en.ctx_k;
  const CoverKind kind = cover.kind();

  const bool need_sq = kind != CoverKind::artin_schreier;
  const bool need_quart = kind == CoverKind::quartic;
  const bool need_cube = kind == CoverKind::artin_schreier || kind == CoverKind::sextic;
  const RootTables tables = build_root_tables(K, en.qk, need_sq, need_quart, need_cube);

  const auto as_fiber = [&](std::uint64_t x) -> int {
    const std::uint64_t dv = ev(K, cc.g->den, x);
    if (dv == 0) return 1;  // boundary: totally ramified pole of reduced g
    return tables.cube[K.idx_mul(ev(K, cc.g->num, x), K.idx_inv(dv))];
  };
  const auto quad_fiber = [&](std::uint64_t x) -> int {
    const std::uint64_t nv = ev(K, cc.f->num, x);
    const std::uint64_t dv = ev(K, cc.f->den, x);
    if (nv != 0 && dv != 0) return tables.sq[K.idx_mul(nv, K.idx_inv(dv))];
    const auto [v, u] = local_at(K, *cc.f, x);
    return brute_quad_local(tables, v, u);
  };

  std::int64_t total = 0;
  switch (kind) {
    case CoverKind::artin_schreier:
      for (std::uint64_t x = 0; x < en.qk; ++x) total += as_fiber(x);
      break;
    case CoverKind::quadratic:
      for (std::uint64_t x = 0; x < en.qk; ++x) total += quad_fiber(x);
      break;
    case CoverKind::quartic:
      for (std::uint64_t x = 0; x < en.qk; ++x) {
        const std::uint64_t nv = ev(K, cc.f->num, x);
        const std::uint64_t dv = ev(K, cc.f->den, x);
        if (nv != 0 && dv != 0) {
          total += tables.quart[K.idx_mul(nv, K.idx_inv(dv))];
        } else {
          const auto [v, u] = local_at(K, *cc.f, x);
          total += brute_quartic_local(tables, v, u);
        }
      }
      break;
    case CoverKind::sextic:
      for (std::uint64_t x = 0; x < en.qk; ++x) {
        const int n_d = quad_fiber(x);
        if (n_d == 0) continue;
        const std::uint64_t gdv = ev(K, cc.g->den, x);
        if (gdv == 0) {
          total += n_d;  // boundary: H/D totally ramified above poles of g
        } else {
          total += n_d * tables.cube[K.idx_mul(ev(K, cc.g->num, x), K.idx_inv(gdv))];
        }
      }
      break;
    case CoverKind::base_p1:
      throw InternalError("Unreachable", "handled above");
  }

  // Boundary at t = ∞, same local analysis in the 1/t chart.
  switch (kind) {
    case CoverKind::artin_schreier: {
      const int v = cc.g->deg_num - cc.g->deg_den;
      if (v > 0) total += 1;
      else total += tables.cube[v < 0 ? 0 : cc.g->lc_ratio];
      break;
    }
    case CoverKind::quadratic:
      total += brute_quad_local(tables, cc.f->deg_den - cc.f->deg_num, cc.f->lc_ratio);
      break;
    case CoverKind::quartic:
      total += brute_quartic_local(tables, cc.f->deg_den - cc.f->deg_num, cc.f->lc_ratio);
      break;
    case CoverKind::sextic: {
      const int n_d = brute_quad_local(tables, cc.f->deg_den - cc.f->deg_num, cc.f->lc_ratio);
      if (n_d != 0) {
        const int vg = cc.g->deg_num - cc.g->deg_den;
        if (vg > 0) total += n_d;
        else total += n_d * tables.cube[vg < 0 ? 0 : cc.g->lc_ratio];
      }
      break;
    }
    case CoverKind::base_p1:
      break;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Maximality
// ---------------------------------------------------------------------------

MaximalityReport maximality_status(const CoverModel& cover, const CountOptions& opts) {
  const GenusReport g = genus(cover);
  const std::int64_t n1 = count_points(cover, 1, opts);
  const std::uint64_t q = cover.q();
  const std::int64_t root_q = static_cast<std::int64_t>(pow3(cover.n()));
  MaximalityReport rep;
  rep.n1 = n1;
  rep.genus = g.genus;
  rep.q = q;
  rep.upper = static_cast<std::int64_t>(q) + 1 + 2 * g.genus * root_q;
  rep.lower = static_cast<std::int64_t>(q) + 1 - 2 * g.genus * root_q;
  if (n1 == rep.upper && n1 == rep.lower) rep.status = Maximality::maximal_and_minimal;
  else if (n1 == rep.upper) rep.status = Maximality::maximal;
  else if (n1 == rep.lower) rep.status = Maximality::minimal;
  else rep.status = Maximality::neither;
  return rep;
}

}  // namespace twistlab::covers
