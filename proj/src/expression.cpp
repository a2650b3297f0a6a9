#include "hysim/expression.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "hysim/errors.hpp"

namespace hysim {

namespace {

class Parser {
 public:
  Parser(const std::string& text, Dims dims) : text_(text), dims_(dims) {}

  Polynomial<Rational> run() {
    Polynomial<Rational> p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression error at column " + std::to_string(pos_ + 1) + ": " + msg, 1,
                      static_cast<int>(pos_ + 1));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Polynomial<Rational> expr() {
    Polynomial<Rational> acc = term();
    while (true) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial<Rational> term() {
    Polynomial<Rational> acc = unary();
    while (true) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        Polynomial<Rational> div = unary();
        if (div.total_degree() != 0) {
          pos_ = at;
          fail("division is only defined by a constant");
        }
        if (div.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc *= Rational(1 / div.terms().begin()->second);
      } else {
        return acc;
      }
    }
  }

  Polynomial<Rational> unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial<Rational> power() {
    Polynomial<Rational> base = primary();
    if (eat('^')) {
      skip_ws();
      const auto [value, ok] = integer();
      if (!ok) fail("expected an integer exponent after '^'");
      if (value < 0) fail("negative exponents are not supported");
      return base.pow(static_cast<unsigned>(value));
    }
    return base;
  }

  Polynomial<Rational> primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial<Rational> inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const auto [value, ok] = integer();
      if (!ok) fail("malformed integer literal");
      return Polynomial<Rational>::constant(dims_, Rational(value));
    }
    if (c == 'x' || c == 'p' || c == 'X' || c == 'P') {
      const std::size_t at = pos_;
      ++pos_;
      const auto [index, ok] = integer();
      if (!ok) {
        pos_ = at;
        fail(std::string("unknown variable '") + c + "'");
      }
      const int coord = resolve(c, static_cast<int>(index), at);
      return Polynomial<Rational>::variable(dims_, coord);
    }
    // produce a friendly message for identifiers like "Y" or "foo"
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      fail("unknown variable '" + text_.substr(pos_, end - pos_) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  int resolve(char kind, int index, std::size_t at) {
    const bool classical = (kind == 'x' || kind == 'p');
    const int limit = classical ? dims_.n_cl : dims_.n_qm;
    if (index < 1 || index > limit) {
      pos_ = at;
      fail("variable '" + std::string(1, kind) + std::to_string(index) + "' is out of range (" +
           (classical ? "n=" : "N=") + std::to_string(limit) + ")");
    }
    switch (kind) {
      case 'x': return cl_x(dims_, index - 1);
      case 'p': return cl_p(dims_, index - 1);
      case 'X': return qm_x(dims_, index - 1);
      default: return qm_p(dims_, index - 1);
    }
  }

  std::pair<long, bool> integer() {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      return {0, false};
    }
    long value = 0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc()) fail("integer literal out of range");
    pos_ = res.ptr - text_.data();
    return {value, true};
  }

  const std::string& text_;
  Dims dims_;
  std::size_t pos_ = 0;
};

template <typename C>
std::string coeff_str(const C& c);

template <>
std::string coeff_str<Rational>(const Rational& c) {
  return c.get_str();
}

template <>
std::string coeff_str<double>(const double& c) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), c);
  return std::string(buf, res.ptr);
}

template <typename C>
bool is_negative(const C& c);
template <>
bool is_negative<Rational>(const Rational& c) {
  return c < 0;
}
template <>
bool is_negative<double>(const double& c) {
  return c < 0;
}

template <typename C>
bool is_one_abs(const C& c);
template <>
bool is_one_abs<Rational>(const Rational& c) {
  return c == 1 || c == -1;
}
template <>
bool is_one_abs<double>(const double& c) {
  return c == 1.0 || c == -1.0;
}

template <typename C>
std::string print_impl(const Polynomial<C>& poly) {
  if (poly.is_zero()) return "0";
  const Dims d = poly.dims();
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : poly.terms()) {
    const bool neg = is_negative(c);
    if (first) {
      if (neg) out << "-";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    C mag = neg ? C(-c) : c;
    bool printed_factor = false;
    if (!is_one_abs(c) || monomial_degree(m, 0, d.total_coords()) == 0) {
      out << coeff_str(mag);
      printed_factor = true;
    }
    for (int v = 0; v < d.total_coords(); ++v) {
      if (m[v] == 0) continue;
      if (printed_factor) out << "*";
      out << coord_name(d, v);
      if (m[v] > 1) out << "^" << int(m[v]);
      printed_factor = true;
    }
  }
  return out.str();
}

}  // namespace

Polynomial<Rational> parse_polynomial(const std::string& text, Dims dims) {
  return Parser(text, dims).run();
}

std::string print_polynomial(const Polynomial<Rational>& poly) { return print_impl(poly); }
std::string print_polynomial(const Polynomial<double>& poly) { return print_impl(poly); }

}  // namespace hysim
