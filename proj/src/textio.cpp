#include "twistlab/textio.hpp"

#include <cctype>
#include <cstdint>

#include "twistlab/errors.hpp"

namespace twistlab::textio {

namespace {

constexpr long kMaxExponent = 65536;

class Parser {
 public:
  Parser(CtxPtr ctx, const std::string& text) : ctx_(std::move(ctx)), text_(text) {}

  RatFunc run() {
    skip_space();
    if (pos_ == text_.size()) throw ValidationError("ParseError", "empty input");
    RatFunc value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError("ParseError", why + " at position " + std::to_string(pos_) + " in \"" +
                                            text_ + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  long digits() {
    skip_space();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected a number");
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > kMaxExponent) fail("number too large");
      ++pos_;
    }
    return v;
  }

  RatFunc expr() {
    RatFunc value = factor();
    while (true) {
      if (eat('+')) {
        value = value + factor();
      } else if (eat('-')) {
        value = value - factor();
      } else {
        return value;
      }
    }
  }

  RatFunc factor() {
    RatFunc value = unary();
    while (true) {
      if (eat('*')) {
        value = value * unary();
      } else if (eat('/')) {
        const RatFunc d = unary();
        if (d.is_zero()) throw ValidationError("DivisionByZero", "division by the zero function");
        value = value / d;
      } else {
        return value;
      }
    }
  }

  RatFunc unary() {
    if (eat('-')) return -unary();
    RatFunc value = atom();
    if (eat('^')) value = value.pow(digits());
    return value;
  }

  RatFunc atom() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return RatFunc::constant(ctx_->from_int(digits() % 3));
    }
    if (c == 'z') {
      ++pos_;
      return RatFunc::constant(ctx_->generator());
    }
    if (c == 't') {
      ++pos_;
      return RatFunc::t(ctx_);
    }
    if (c == '(') {
      ++pos_;
      RatFunc value = expr();
      if (!eat(')')) fail("expected ')'");
      return value;
    }
    fail(c == '\0' ? "unexpected end of input"
                   : std::string("unexpected character '") + c + "'");
  }

  CtxPtr ctx_;
  const std::string& text_;
  std::size_t pos_ = 0;
};

bool composite(const std::string& s) { return s.find('+') != std::string::npos; }

std::string wrap(const std::string& s) { return composite(s) ? "(" + s + ")" : s; }

}  // namespace

RatFunc parse_ratfunc(const CtxPtr& ctx, const std::string& text) {
  return Parser(ctx, text).run();
}

Poly parse_poly(const CtxPtr& ctx, const std::string& text) {
  const RatFunc r = parse_ratfunc(ctx, text);
  if (!r.is_polynomial())
    throw ValidationError("NotAPolynomial", "\"" + text + "\" is not a polynomial in t");
  return r.as_poly();
}

FieldElement parse_element(const CtxPtr& ctx, const std::string& text) {
  const RatFunc r = parse_ratfunc(ctx, text);
  if (!r.is_constant())
    throw ValidationError("NotAConstant", "\"" + text + "\" is not a constant field element");
  return r.num().constant_coeff();
}

std::string to_string(const FieldElement& e) {
  if (e.is_null()) throw ValidationError("BadParameter", "cannot print a null field element");
  const auto& cs = e.coeffs();
  const std::string& z = e.ctx()->generator_symbol();
  std::string out;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (cs[j] == 0) continue;
    if (!out.empty()) out += "+";
    const bool two = cs[j] == 2;
    if (j == 0) {
      out += two ? "2" : "1";
    } else {
      if (two) out += "2*";
      out += z;
      if (j > 1) out += "^" + std::to_string(j);
    }
  }
  return out.empty() ? "0" : out;
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const FieldElement c = p.coeff(static_cast<unsigned>(k));
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string cs = to_string(c);
    if (k == 0) {
      out += wrap(cs);
      continue;
    }
    if (cs != "1") out += wrap(cs) + "*";
    out += (k == 1) ? "t" : "t^" + std::to_string(k);
  }
  return out;
}

std::string to_string(const RatFunc& r) {
  if (r.is_polynomial()) return to_string(r.num());
  return "(" + to_string(r.num()) + ")/(" + to_string(r.den()) + ")";
}

}  // namespace twistlab::textio
