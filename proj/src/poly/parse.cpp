#include "roacert/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace roacert {

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars,
         const std::map<std::string, double, std::less<>>& params, const TrigPolicy& trig)
      : src_(src), vars_(vars), params_(params), trig_(trig), nvars_(static_cast<int>(vars.size())) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = mul(acc, unary());
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Polynomial den = unary();
        if (den.degree() > 0) throw ParseError("division by a non-constant expression", at);
        const double c = den.coefficient(Exponents(nvars_, 0));
        if (c == 0.0) throw ParseError("division by zero", at);
        acc = scale(acc, 1.0 / c);
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return scale(unary(), -1.0);
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('-')) throw ParseError("negative exponent", at);
      skip_ws();
      std::size_t end = pos_;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      if (end == pos_) throw ParseError("exponent must be a nonnegative integer", at);
      if (end < src_.size() && (src_[end] == '.' || src_[end] == 'e' || src_[end] == 'E')) {
        throw ParseError("non-integer exponent", at);
      }
      int k = 0;
      std::from_chars(src_.data() + pos_, src_.data() + end, k);
      pos_ = end;
      return pow(base, k);
    }
    return base;
  }

  Polynomial atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char ch = src_[pos_];
    if (ch == '(') {
      ++pos_;
      Polynomial p = expr();
      expect(')');
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') return name();
    fail("unexpected character '" + std::string(1, ch) + "'");
  }

  Polynomial number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        end = e;
        digits();
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + end) throw ParseError("malformed number", start);
    pos_ = end;
    return Polynomial::constant(nvars_, value);
  }

  Polynomial name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = src_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      if (id == "sin" || id == "cos") return trig(id == "sin" ? TrigKind::Sin : TrigKind::Cos, start);
      if (id == "sqrt") return square_root(start);
      throw ParseError("unknown function '" + std::string(id) + "'", start);
    }
    for (int i = 0; i < nvars_; ++i) {
      if (vars_[i] == id) return Polynomial::variable(nvars_, i);
    }
    if (auto it = params_.find(id); it != params_.end()) return Polynomial::constant(nvars_, it->second);
    if (id == "pi") return Polynomial::constant(nvars_, 3.14159265358979323846);
    // Shorthand such as `sqrt20` for sqrt(20).
    if (id.size() > 4 && id.substr(0, 4) == "sqrt") {
      double v = 0.0;
      auto res = std::from_chars(id.data() + 4, id.data() + id.size(), v);
      if (res.ec == std::errc() && res.ptr == id.data() + id.size() && v >= 0.0) {
        return Polynomial::constant(nvars_, std::sqrt(v));
      }
    }
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  Polynomial trig(TrigKind kind, std::size_t start) {
    expect('(');
    skip_ws();
    const std::size_t arg_start = pos_;
    // A bare phase name flagged for recasting maps to its sin/cos image.
    std::size_t end = pos_;
    while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
    const std::string_view id = src_.substr(arg_start, end - arg_start);
    if (auto it = trig_.recast.find(id); it != trig_.recast.end()) {
      std::size_t after = end;
      while (after < src_.size() && std::isspace(static_cast<unsigned char>(src_[after]))) ++after;
      if (after < src_.size() && src_[after] == ')') {
        pos_ = after + 1;
        const int index = kind == TrigKind::Sin ? it->second.first : it->second.second;
        return Polynomial::variable(nvars_, index);
      }
      throw ParseError("recast phase '" + std::string(id) + "' must appear alone inside sin/cos", arg_start);
    }
    Polynomial arg = expr();
    expect(')');
    if (arg.degree() == 0) {
      const double c = arg.coefficient(Exponents(nvars_, 0));
      return Polynomial::constant(nvars_, kind == TrigKind::Sin ? std::sin(c) : std::cos(c));
    }
    if (!trig_.taylor_degree) {
      throw ParseError("sin/cos needs a taylor_degree or a recast declaration for its argument", start);
    }
    const Polynomial series = taylor_trig(kind, *trig_.taylor_degree);
    return substitute(series, {arg});
  }

  Polynomial square_root(std::size_t start) {
    expect('(');
    Polynomial arg = expr();
    expect(')');
    if (arg.degree() > 0) throw ParseError("sqrt of a non-constant expression", start);
    const double c = arg.coefficient(Exponents(nvars_, 0));
    if (c < 0.0) throw ParseError("sqrt of a negative number", start);
    return Polynomial::constant(nvars_, std::sqrt(c));
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  const std::map<std::string, double, std::less<>>& params_;
  const TrigPolicy& trig_;
  int nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_poly(std::string_view expr, std::span<const std::string> vars,
                      const std::map<std::string, double, std::less<>>& params, const TrigPolicy& trig) {
  return Parser(expr, vars, params, trig).parse();
}

}  // namespace roacert
