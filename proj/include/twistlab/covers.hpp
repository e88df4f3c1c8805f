#pragma once

// The four cover families of P¹ attached to a twist datum (f, g) over
// GF(3^(2n)) — C: w³ − w = g (Artin–Schreier), D: s² = f, G: r⁴ = f and the
// composite H: {s² = f, w³ − w = g} — with genus formulas, rational-point
// counting over extension fields, an independent brute-force counting oracle,
// and the maximal/minimal classification.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/funcfield.hpp"
#include "twistlab/gf3.hpp"

namespace twistlab::covers {

using funcfield::Place;
using funcfield::RatFunc;
using gf3::CtxPtr;

enum class CoverKind { base_p1, artin_schreier, quadratic, quartic, sextic };

const char* kind_name(CoverKind k);

// An immutable, validated cover of P¹ over GF(3^(2n)).  On construction g is
// put into Artin–Schreier-reduced form (all pole orders coprime to 3, shift
// recorded) and f is checked to be a non-square that is not a constant times
// a square — the latter would make the cover a constant-field extension
// rather than a geometrically integral curve.
class CoverModel {
 public:
  static CoverModel base_p1(unsigned n);
  static CoverModel artin_schreier(unsigned n, const RatFunc& g, std::uint64_t seed = 0);
  static CoverModel quadratic(unsigned n, const RatFunc& f, std::uint64_t seed = 0);
  static CoverModel quartic(unsigned n, const RatFunc& f, std::uint64_t seed = 0);
  static CoverModel sextic(unsigned n, const RatFunc& f, const RatFunc& g,
                           std::uint64_t seed = 0);

  CoverKind kind() const noexcept { return kind_; }
  unsigned n() const noexcept { return n_; }
  const CtxPtr& ctx() const noexcept { return ctx_; }  // base field GF(3^(2n))
  std::uint64_t q() const noexcept { return ctx_->order(); }

  bool has_f() const noexcept { return f_.has_value(); }
  bool has_g() const noexcept { return g_reduced_.has_value(); }
  const RatFunc& f() const;
  const RatFunc& g_reduced() const;  // stored in AS-reduced form
  const RatFunc& g_shift() const;    // original g = g_reduced + shift³ − shift
  const std::vector<std::pair<Place, unsigned>>& g_poles() const;

 private:
  CoverModel(CoverKind kind, unsigned n, CtxPtr ctx)
      : kind_(kind), n_(n), ctx_(std::move(ctx)) {}
  void adopt_f(const RatFunc& f, std::uint64_t seed);
  void adopt_g(const RatFunc& g, std::uint64_t seed);

  CoverKind kind_;
  unsigned n_;
  CtxPtr ctx_;
  std::optional<RatFunc> f_;
  std::optional<RatFunc> g_reduced_;
  std::optional<RatFunc> g_shift_;
  std::vector<std::pair<Place, unsigned>> g_poles_;
};

struct GenusReport {
  long genus = 0;
  // (place, human-readable contribution description), canonically ordered
  std::vector<std::pair<Place, std::string>> ramification;
};

GenusReport genus(const CoverModel& cover);

struct CountOptions {
  std::uint64_t budget = 3486784401ull;  // 3^20: largest enumerable field size
  unsigned threads = 1;                  // 0 = hardware concurrency
};

// Number of degree-1 places of the smooth projective model over GF(3^(2nk)).
std::int64_t count_points(const CoverModel& cover, unsigned k, const CountOptions& opts = {});

// Independent oracle: enumerates solutions of the defining equations directly
// (fiber coordinates found by exhaustive root search, never by characters or
// traces) and adds boundary points by explicit local analysis.
std::int64_t brute_force_count(const CoverModel& cover, unsigned k,
                               const CountOptions& opts = {});

enum class Maximality { maximal, minimal, maximal_and_minimal, neither };

const char* maximality_name(Maximality m);

struct MaximalityReport {
  Maximality status;
  std::int64_t n1;    // point count over the base field
  long genus;
  std::uint64_t q;    // 3^(2n)
  std::int64_t upper; // q + 1 + 2g·3^n (Weil upper bound)
  std::int64_t lower; // q + 1 − 2g·3^n (Weil lower bound)
};

MaximalityReport maximality_status(const CoverModel& cover, const CountOptions& opts = {});

}  // namespace twistlab::covers
