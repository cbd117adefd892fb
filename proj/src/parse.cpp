#include "parshin/parse.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "parshin/error.hpp"

namespace parshin::text {
namespace {

class Reader {
 public:
  Reader(std::string_view text, const FiniteField& field, const std::vector<std::string>& vars)
      : text_(text), field_(field), vars_(vars) {}

  Expression run() {
    Expression e = sum();
    skip_space();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  const FiniteField& field_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& why) const {
    fail(ErrorCode::ParseError, why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  std::optional<char> peek() {
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    return text_[pos_];
  }

  long long integer() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected integer");
    if (pos_ - start > 12) error("integer literal too large");
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  long long signed_integer() {
    bool negative = false;
    if (accept('(')) {
      long long v = signed_integer();
      expect(')');
      return v;
    }
    if (accept('-')) negative = true;
    long long v = integer();
    return negative ? -v : v;
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expression constant(FqElem c) const {
    Expression e;
    if (!c.is_zero()) e.terms[std::vector<int>(vars_.size(), 0)] = c;
    return e;
  }

  // Lowest exponent of the single variable; INT_MAX for zero.
  static int valuation(const Expression& e) {
    int v = std::numeric_limits<int>::max();
    for (const auto& [exp, c] : e.terms) {
      if (!exp.empty()) v = std::min(v, exp[0]);
      else v = std::min(v, 0);
    }
    return v;
  }

  Expression add(Expression a, const Expression& b, bool subtract) const {
    for (const auto& [exp, c] : b.terms) {
      FqElem cur = a.terms.count(exp) ? a.terms[exp] : field_.zero();
      FqElem next = subtract ? field_.sub(cur, c) : field_.add(cur, c);
      if (next.is_zero()) a.terms.erase(exp);
      else a.terms[exp] = next;
    }
    if (b.big_o) a.big_o = a.big_o ? std::min(*a.big_o, *b.big_o) : *b.big_o;
    return a;
  }

  Expression mul(const Expression& a, const Expression& b) const {
    Expression out;
    for (const auto& [ea, ca] : a.terms) {
      for (const auto& [eb, cb] : b.terms) {
        std::vector<int> e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        FqElem cur = out.terms.count(e) ? out.terms[e] : field_.zero();
        FqElem next = field_.add(cur, field_.mul(ca, cb));
        if (next.is_zero()) out.terms.erase(e);
        else out.terms[e] = next;
      }
    }
    const int inf = std::numeric_limits<int>::max();
    std::optional<int> o;
    if (a.big_o) {
      int vb = valuation(b);
      if (vb != inf) o = *a.big_o + vb;
    }
    if (b.big_o) {
      int va = valuation(a);
      if (va != inf) o = o ? std::min(*o, *b.big_o + va) : *b.big_o + va;
    }
    out.big_o = o;
    if (out.big_o) {
      for (auto it = out.terms.begin(); it != out.terms.end();) {
        if (!it->first.empty() && it->first[0] >= *out.big_o) it = out.terms.erase(it);
        else ++it;
      }
    }
    return out;
  }

  Expression power(const Expression& base, long long k) {
    if (k < 0) {
      if (base.terms.size() != 1 || base.big_o) error("negative exponent on a non-monomial");
      const auto& [exp, c] = *base.terms.begin();
      std::vector<int> e(exp.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<int>(-exp[i] * (-k));
      Expression out;
      out.terms[e] = field_.pow(c, k);
      return out;
    }
    if (k > 4096) error("exponent too large");
    Expression out = constant(field_.one());
    for (long long i = 0; i < k; ++i) out = mul(out, base);
    return out;
  }

  Expression atom() {
    auto c = peek();
    if (!c) error("unexpected end of input");
    if (*c == '(') {
      ++pos_;
      Expression e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(*c))) return constant(field_.from_int(integer()));
    std::string id = identifier();
    if (id.empty()) error("unexpected character");
    if (id == "g") return constant(field_.generator());
    if (id == "O") {
      if (vars_.size() != 1) error("O-term needs exactly one variable");
      expect('(');
      Expression inner = sum();
      expect(')');
      if (inner.terms.size() != 1 || inner.big_o) error("O-term must wrap a monomial");
      Expression e;
      e.big_o = inner.terms.begin()->first[0];
      return e;
    }
    auto it = std::find(vars_.begin(), vars_.end(), id);
    if (it == vars_.end()) error("unknown symbol '" + id + "'");
    Expression e;
    std::vector<int> exp(vars_.size(), 0);
    exp[static_cast<std::size_t>(it - vars_.begin())] = 1;
    e.terms[exp] = field_.one();
    return e;
  }

  Expression factor() {
    Expression base = atom();
    if (accept('^')) return power(base, signed_integer());
    return base;
  }

  Expression term() {
    Expression e = factor();
    while (accept('*')) e = mul(e, factor());
    return e;
  }

  Expression sum() {
    Expression e;
    bool first = true;
    for (;;) {
      bool subtract = false;
      if (accept('-')) subtract = true;
      else if (!first && !accept('+')) break;
      e = add(std::move(e), term(), subtract);
      first = false;
    }
    return e;
  }
};

}  // namespace

Expression parse_expression(std::string_view text, const FiniteField& field, const std::vector<std::string>& variables) {
  return Reader(text, field, variables).run();
}

}  // namespace parshin::text
