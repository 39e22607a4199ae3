#include <cctype>
#include <string>

#include "kppsym/errors.hpp"
#include "kppsym/expr.hpp"

namespace kppsym {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok type;
  std::size_t offset;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= s_.size()) return {Tok::End, start, ""};
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      std::string text(s_.substr(start, pos_ - start));
      if (text == ".") throw ParseError(start, "malformed number");
      return {Tok::Number, start, text};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return {Tok::Ident, start, std::string(s_.substr(start, pos_ - start))};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, start, "+"};
      case '-': return {Tok::Minus, start, "-"};
      case '*': return {Tok::Star, start, "*"};
      case '/': return {Tok::Slash, start, "/"};
      case '^': return {Tok::Caret, start, "^"};
      case '(': return {Tok::LParen, start, "("};
      case ')': return {Tok::RParen, start, ")"};
      case ',': return {Tok::Comma, start, ","};
      default: break;
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

Rational decimal_value(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(Integer(text, 10));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty()) digits = "0";
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, text.size() - dot - 1);
  Rational q{Integer(digits, 10), scale};
  q.canonicalize();
  return q;
}

Expression identifier(const std::string& name) {
  auto us = name.rfind('_');
  if (us != std::string::npos && us > 0 && us + 1 < name.size()) {
    std::string suffix = name.substr(us + 1);
    if (suffix.find_first_not_of("xt") == std::string::npos) {
      std::vector<std::string> index;
      for (char ch : suffix) index.emplace_back(1, ch);
      return jet(name.substr(0, us), std::move(index));
    }
  }
  return sym(name);
}

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  Expression parse_all() {
    Expression e = expression();
    if (tok_.type != Tok::End) throw ParseError(tok_.offset, "unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  void expect(Tok t, const char* what) {
    if (tok_.type != t) throw ParseError(tok_.offset, std::string("expected '") + what + "'");
    advance();
  }

  Expression expression() {
    std::vector<Expression> terms{term()};
    while (tok_.type == Tok::Plus || tok_.type == Tok::Minus) {
      bool minus = tok_.type == Tok::Minus;
      advance();
      Expression t = term();
      terms.push_back(minus ? -t : t);
    }
    return add(std::move(terms));
  }

  Expression term() {
    Expression acc = unary();
    while (tok_.type == Tok::Star || tok_.type == Tok::Slash) {
      bool div = tok_.type == Tok::Slash;
      std::size_t at = tok_.offset;
      advance();
      Expression rhs = unary();
      if (div && rhs.is_zero()) throw ParseError(at, "division by zero");
      acc = div ? acc / rhs : acc * rhs;
    }
    return acc;
  }

  Expression unary() {
    if (tok_.type == Tok::Minus) {
      advance();
      return -unary();
    }
    return power();
  }

  Expression power() {
    Expression b = atom();
    if (tok_.type == Tok::Caret) {
      std::size_t at = tok_.offset;
      advance();
      Expression x = unary();
      try {
        return pow(b, x);
      } catch (const DomainError& err) {
        throw ParseError(at, err.what());
      }
    }
    return b;
  }

  Expression atom() {
    Token t = tok_;
    switch (t.type) {
      case Tok::Number:
        advance();
        return num(decimal_value(t.text));
      case Tok::LParen: {
        advance();
        Expression e = expression();
        expect(Tok::RParen, ")");
        return e;
      }
      case Tok::Ident: {
        advance();
        if (tok_.type != Tok::LParen) return identifier(t.text);
        advance();
        std::vector<std::pair<Expression, std::size_t>> args;
        args.emplace_back(Expression{}, tok_.offset);
        args.back().first = expression();
        while (tok_.type == Tok::Comma) {
          advance();
          std::size_t at = tok_.offset;
          args.emplace_back(expression(), at);
        }
        expect(Tok::RParen, ")");
        if (t.text == "Diff") return derivative(args, t.offset);
        auto fn = function_from_name(t.text);
        if (!fn) throw UnknownFunction(t.offset, t.text);
        if (args.size() != 1) throw ParseError(t.offset, t.text + " takes exactly one argument");
        return call(*fn, args.front().first);
      }
      case Tok::End:
        throw ParseError(t.offset, "unexpected end of input");
      default:
        throw ParseError(t.offset, "unexpected '" + t.text + "'");
    }
  }

  // Diff(u, x, 2), Diff(u, x, t), Diff(xi, v, 1, w, 1)
  static Expression derivative(const std::vector<std::pair<Expression, std::size_t>>& args, std::size_t at) {
    const Expression& f = args.front().first;
    if (!f.is_atom()) throw ParseError(args.front().second, "Diff expects a function symbol");
    std::vector<std::string> index = f.is(Kind::Jet) ? f.index() : std::vector<std::string>{};
    if (args.size() < 2) throw ParseError(at, "Diff expects at least one variable");
    for (std::size_t i = 1; i < args.size(); ++i) {
      const auto& [v, off] = args[i];
      if (!v.is(Kind::Symbol)) throw ParseError(off, "Diff expects a variable name");
      long count = 1;
      if (i + 1 < args.size() && args[i + 1].first.is_number()) {
        const Expression& n = args[i + 1].first;
        if (!n.is_integer() || n.value() < 0 || n.value() > 64) {
          throw ParseError(args[i + 1].second, "derivative count must be a small non-negative integer");
        }
        count = n.value().get_num().get_si();
        ++i;
      }
      for (long k = 0; k < count; ++k) index.push_back(v.name());
    }
    return jet(f.name(), std::move(index));
  }

  Lexer lex_;
  Token tok_{Tok::End, 0, ""};
};

}  // namespace

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

Rational parse_rational(std::string_view text) {
  Expression e = parse(text);
  if (!e.is_number()) throw ParseError(0, "expected a rational number");
  return e.value();
}

}  // namespace kppsym
