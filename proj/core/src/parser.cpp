#include "qb/poly.hpp"

#include <cctype>

namespace qb {

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  VarSpec vs;
  const FieldPtr& F;

  Parser(const std::string& text, VarSpec v, const FieldPtr& f) : s(text), vs(v), F(f) {}

  [[noreturn]] void fail(const std::string& what) {
    throw Error(Errc::SyntaxError, what + " at position " + std::to_string(pos), pos);
  }

  void skip_ws() {
    while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  long long read_uint() {
    skip_ws();
    if (pos >= s.size() || !isdigit((unsigned char)s[pos])) fail("expected a number");
    long long v = 0;
    while (pos < s.size() && isdigit((unsigned char)s[pos])) {
      v = v * 10 + (s[pos] - '0');
      if (v > (1ll << 40)) fail("number literal too large");
      ++pos;
    }
    return v;
  }

  // number := digits ['/' digits]
  MultiPoly number() {
    size_t start = pos;
    long long num = read_uint();
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      long long den = read_uint();
      if (den == 0) {
        pos = start;
        fail("zero denominator");
      }
      return MultiPoly::constant(vs, F, F->from_rat(Rat(num, den)));
    }
    return MultiPoly::constant(vs, F, F->from_int(num));
  }

  MultiPoly primary() {
    char c = peek();
    if (c == '(') {
      eat('(');
      MultiPoly e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (isdigit((unsigned char)c)) return number();
    if (c == 'x' || c == 'y') {
      size_t start = pos;
      ++pos;
      if (pos >= s.size() || !isdigit((unsigned char)s[pos])) {
        pos = start;
        fail("expected a variable index");
      }
      std::string name(1, c);
      while (pos < s.size() && isdigit((unsigned char)s[pos])) name += s[pos++];
      uint32_t idx = vs.var_index(name);  // throws UnknownVariable
      return MultiPoly::variable(vs, F, idx);
    }
    fail("expected a number, variable or '('");
  }

  // exponent := digits | '(' ['-'] digits ')'
  int read_exponent() {
    skip_ws();
    bool paren = eat('(');
    bool negative = false;
    if (paren && eat('-')) negative = true;
    long long e = read_uint();
    if (paren && !eat(')')) fail("expected ')'");
    if (negative) throw Error(Errc::NegativeExponent, "exponent must be non-negative", pos);
    if (e > 0xFFFF) fail("exponent too large");
    return (int)e;
  }

  MultiPoly factor() {
    MultiPoly base = primary();
    if (eat('^')) {
      int e = read_exponent();
      return base.pow((uint32_t)e);
    }
    return base;
  }

  MultiPoly term() {
    MultiPoly r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }

  MultiPoly expr() {
    bool neg = false;
    if (peek() == '-') {
      eat('-');
      neg = true;
    } else if (peek() == '+') {
      eat('+');
    }
    MultiPoly r = term();
    if (neg) r = -r;
    for (;;) {
      char c = peek();
      if (c == '+') {
        eat('+');
        r = r + term();
      } else if (c == '-') {
        eat('-');
        r = r - term();
      } else {
        break;
      }
    }
    return r;
  }

  MultiPoly run() {
    MultiPoly r = expr();
    skip_ws();
    if (pos != s.size()) fail("unexpected trailing input");
    return r;
  }
};

}  // namespace

MultiPoly parse_poly(const std::string& text, VarSpec vs, const FieldPtr& field) {
  return Parser(text, vs, field).run();
}

}  // namespace qb
