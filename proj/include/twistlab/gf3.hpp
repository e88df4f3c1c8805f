#pragma once

// Arithmetic in the tower of finite fields GF(3^k): contexts with a canonical
// modulus, immutable field elements, Frobenius / trace / power-residue
// characters, and explicit embeddings between levels of the tower.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/errors.hpp"

namespace twistlab::gf3 {

using Trit = std::uint8_t;  // a coefficient in {0, 1, 2}

class FieldCtx;
class FieldElement;
using CtxPtr = std::shared_ptr<const FieldCtx>;

// Tri-state answer of the m-th power residue test.
enum class PowerClass { yes, no, zero };

// A field GF(3^k) presented as GF(3)[z]/(modulus).  Immutable after
// construction and safe to share across threads.  For fields small enough,
// discrete-log/Zech tables are precomputed so that the index-domain ops below
// are O(1); larger fields transparently use coefficient arithmetic.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
 public:
  // Canonical context: modulus is the lexicographically least monic
  // irreducible of degree k (coefficient vectors compared constant term
  // first).  For k = 2 this is z^2 + 1.
  static CtxPtr make(unsigned degree);

  // Context with an explicit modulus (ascending coefficients, length k+1,
  // monic, irreducible).  Mostly for tests.
  static CtxPtr make_with_modulus(std::vector<Trit> modulus);

  unsigned degree() const noexcept { return degree_; }
  std::uint64_t order() const noexcept { return order_; }  // 3^k
  const std::vector<Trit>& modulus() const noexcept { return modulus_; }
  const std::string& generator_symbol() const noexcept { return generator_symbol_; }
  bool has_tables() const noexcept { return !log_.empty(); }

  // --- element factories -------------------------------------------------
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(long v) const;          // image of an integer mod 3
  FieldElement generator() const;               // residue class of z
  FieldElement element(std::vector<Trit> coeffs) const;  // length ≤ k, ascending
  FieldElement from_index(std::uint64_t idx) const;      // base-3 digits of idx

  // --- index-domain arithmetic (hot loops) --------------------------------
  // Elements are identified with integers in [0, 3^k): index = Σ c_j 3^j.
  std::uint64_t idx_add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t idx_sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t idx_neg(std::uint64_t a) const;
  std::uint64_t idx_mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t idx_inv(std::uint64_t a) const;  // a ≠ 0
  std::uint64_t idx_pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t idx_frobenius(std::uint64_t a, unsigned r) const;  // a^(3^r)
  Trit idx_trace(std::uint64_t a) const;
  PowerClass idx_character(std::uint64_t a, unsigned m) const;

  bool modulus_equals(const FieldCtx& other) const noexcept {
    return degree_ == other.degree_ && modulus_ == other.modulus_;
  }

 private:
  FieldCtx() = default;
  void init(std::vector<Trit> modulus);
  void build_tables();

  std::uint64_t mul_generic(std::uint64_t a, std::uint64_t b) const;

  unsigned degree_ = 0;
  std::uint64_t order_ = 0;
  std::vector<Trit> modulus_;
  std::string generator_symbol_ = "z";

  // Discrete-log acceleration (present when order_ ≤ table threshold):
  // exp_[l] = index of g^l, log_[index] = l.
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

// An immutable element of one FieldCtx.  Coefficient vector always has
// exactly k entries (ascending powers of z).
class FieldElement {
 public:
  FieldElement() = default;  // "null" element; using it in arithmetic throws

  const CtxPtr& ctx() const noexcept { return ctx_; }
  const std::vector<Trit>& coeffs() const noexcept { return coeffs_; }
  bool is_null() const noexcept { return !ctx_; }
  bool is_zero() const;
  bool is_one() const;
  std::uint64_t index() const;  // Σ c_j 3^j

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;  // DivisionByZero
  FieldElement operator-() const;
  bool operator==(const FieldElement& o) const;  // CtxMismatch across ctxs
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement frobenius(unsigned r) const;  // this^(3^r)
  Trit absolute_trace() const;
  PowerClass character(unsigned m) const;  // m ∈ {2, 4}
  std::optional<FieldElement> sqrt() const;

  // Lexicographic comparison of coefficient vectors, constant term first.
  // Used for deterministic tie-breaking, not a mathematical order.
  bool lex_less(const FieldElement& o) const;

 private:
  friend class FieldCtx;
  FieldElement(CtxPtr ctx, std::vector<Trit> coeffs)
      : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {}

  CtxPtr ctx_;
  std::vector<Trit> coeffs_;
};

// Named operation dispatch (mirrors the CLI-facing operation table).
enum class ArithOp { add, sub, mul, div };
FieldElement field_arith(const FieldElement& a, const FieldElement& b, ArithOp op);

FieldElement frobenius(const FieldElement& a, unsigned r);
Trit absolute_trace(const FieldElement& a);
PowerClass character(const FieldElement& a, unsigned m);

// The ring homomorphism GF(3^k) → GF(3^(k·m)) determined by sending the
// source generator to a root of the source modulus in the target field
// (deterministically the lexicographically least root).
class Embedding {
 public:
  static Embedding identity(const CtxPtr& ctx);
  static Embedding make(CtxPtr source, CtxPtr target);

  const CtxPtr& source() const noexcept { return source_; }
  const CtxPtr& target() const noexcept { return target_; }
  const FieldElement& image_of_generator() const noexcept { return image_; }

  FieldElement apply(const FieldElement& a) const;
  std::uint64_t apply_index(std::uint64_t idx) const;

  // Function composition: (this: k → km) then (next: km → kmℓ).
  Embedding then(const Embedding& next) const;

 private:
  Embedding(CtxPtr source, CtxPtr target, FieldElement image);
  CtxPtr source_;
  CtxPtr target_;
  FieldElement image_;
  std::vector<std::uint64_t> power_index_;  // image^j for j < source degree
};

// Process-wide cache of canonical contexts and embeddings.
class FieldTower {
 public:
  static FieldTower& global();

  CtxPtr ctx(unsigned degree);
  // Canonical embedding between cached canonical contexts; from | to.
  const Embedding& embedding(unsigned from, unsigned to);

 private:
  std::mutex mu_;
  std::vector<CtxPtr> ctx_cache_;
  std::vector<std::unique_ptr<Embedding>> emb_cache_;
  std::vector<std::pair<unsigned, unsigned>> emb_keys_;
};

// Least (lex coefficient order) α in GF(3^(2n)) with α^(3^n − 1) = −1.
FieldElement solve_alpha(unsigned n);

}  // namespace twistlab::gf3
