#include <cctype>
#include <fstream>
#include <sstream>

#include "varschouten/error.hpp"
#include "varschouten/textio.hpp"

namespace varschouten {

namespace {

constexpr unsigned kMaxExponent = 10000;

enum class Tok : std::uint8_t { number, ident, symbol, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  const auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t{Tok::end, {}, line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::number;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.text.push_back(src[i]);
        advance();
      }
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::ident;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text.push_back(src[i]);
        advance();
      }
    } else if (std::string_view("+-*/^()[],").find(c) != std::string_view::npos) {
      t.kind = Tok::symbol;
      t.text.assign(1, c);
      advance();
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::end, {}, line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, ContextPtr ctx) : tokens_(lex(text)), ctx_(std::move(ctx)) {}

  Expression parse() {
    Expression e = expr();
    if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool is_symbol(char c) const { return peek().kind == Tok::symbol && peek().text[0] == c; }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw ParseError(t.line, t.column, message);
  }

  void expect(char c) {
    if (!is_symbol(c)) {
      const std::string got = peek().kind == Tok::end ? "end of input" : "'" + peek().text + "'";
      fail(peek(), std::string("expected '") + c + "' but found " + got);
    }
    ++pos_;
  }

  unsigned small_int(const Token& t, unsigned limit, const char* what) {
    if (t.kind != Tok::number) fail(t, std::string("expected ") + what);
    if (t.text.size() > 9 || std::stoul(t.text) > limit)
      fail(t, std::string(what) + " exceeds " + std::to_string(limit));
    return static_cast<unsigned>(std::stoul(t.text));
  }

  Expression expr() {
    Expression acc = signed_term();
    while (is_symbol('+') || is_symbol('-')) {
      const bool minus = take().text[0] == '-';
      Expression t = signed_term();
      if (minus)
        acc -= t;
      else
        acc += t;
    }
    return acc;
  }

  Expression signed_term() {
    bool negate = false;
    while (is_symbol('-')) {
      ++pos_;
      negate = !negate;
    }
    Expression t = term();
    return negate ? -t : t;
  }

  Expression term() {
    Expression acc = factor();
    while (is_symbol('*')) {
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  Expression factor() {
    Expression base = atom();
    while (is_symbol('^')) {
      ++pos_;
      const Token& t = take();
      const unsigned n = small_int(t, kMaxExponent, "exponent");
      if (n == 0) fail(t, "exponent must be positive");
      base = power(base, n);
    }
    return base;
  }

  Expression power(Expression base, unsigned n) {
    Expression result = Expression::constant(ctx_, 1);
    while (n > 0) {
      if (n & 1U) result = result * base;
      n >>= 1U;
      if (n > 0) base = base * base;
    }
    return result;
  }

  Expression atom() {
    const Token& t = peek();
    if (t.kind == Tok::number) return rational();
    if (is_symbol('(')) {
      ++pos_;
      Expression e = expr();
      expect(')');
      return e;
    }
    if (t.kind == Tok::ident) {
      if (t.text == "exp" || t.text == "sin" || t.text == "cos") return function();
      return jet();
    }
    if (t.kind == Tok::end) fail(t, "unexpected end of input");
    fail(t, "unexpected '" + t.text + "'");
  }

  Expression rational() {
    const Token& num = take();
    Rational value(mpz_class(num.text));
    if (is_symbol('/')) {
      ++pos_;
      const Token& den = take();
      if (den.kind != Tok::number) fail(den, "expected denominator");
      const mpz_class d(den.text);
      if (d == 0) fail(den, "zero denominator");
      value /= Rational(d);
    }
    return Expression::constant(ctx_, value);
  }

  Expression function() {
    const Token& name = take();
    const FuncKind kind = name.text == "exp" ? FuncKind::exp : name.text == "sin" ? FuncKind::sin : FuncKind::cos;
    expect('(');
    Expression arg = expr();
    expect(')');
    try {
      return Expression::function(kind, arg);
    } catch (const InvalidExpression& e) {
      fail(name, e.what());
    }
  }

  Expression jet() {
    const Token& name = take();
    if (ctx_->find_independent(name.text))
      fail(name, "explicit dependence on base coordinate '" + name.text + "' is not allowed");
    const auto owner = ctx_->find_owner(name.text);
    if (!owner) fail(name, "unknown identifier '" + name.text + "'");

    std::vector<unsigned> orders(ctx_->dimension(), 0);
    if (is_symbol('[')) {
      const Token& open = take();
      std::vector<unsigned> given;
      given.push_back(small_int(take(), kMaxJetOrder, "derivative order"));
      while (is_symbol(',')) {
        ++pos_;
        given.push_back(small_int(take(), kMaxJetOrder, "derivative order"));
      }
      expect(']');
      if (given.size() != ctx_->dimension())
        fail(open, "multi-index of '" + name.text + "' has " + std::to_string(given.size()) + " entries, expected " +
                       std::to_string(ctx_->dimension()));
      unsigned total = 0;
      for (unsigned o : given) total += o;
      if (total > kMaxJetOrder) fail(open, "total derivative order exceeds " + std::to_string(kMaxJetOrder));
      orders = std::move(given);
    }
    return Expression::jet(ctx_, JetVar(*owner, orders));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ContextPtr ctx_;
};

Parity parse_parity(const std::string& word, std::size_t line, std::size_t col) {
  if (word == "even") return Parity::even;
  if (word == "odd") return Parity::odd;
  throw ParseError(line, col, "parity must be 'even' or 'odd', got '" + word + "'");
}

}  // namespace

Expression parse_density(std::string_view text, const ContextPtr& ctx) {
  return Parser(text, ctx).parse();
}

ContextPtr parse_context(std::string_view text) {
  std::vector<std::string> indeps;
  std::vector<FieldDecl> fields;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::vector<std::pair<std::string, std::size_t>> words;
    for (std::size_t i = 0; i < raw.size();) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      words.emplace_back(raw.substr(start, i - start), start + 1);
    }
    if (words.empty()) continue;
    const auto& head = words.front().first;
    if (head == "indep") {
      if (words.size() < 2) throw ParseError(line, words[0].second, "'indep' needs at least one name");
      for (std::size_t k = 1; k < words.size(); ++k) indeps.push_back(words[k].first);
    } else if (head == "field") {
      if (words.size() != 5 || words[3].first != "antifield")
        throw ParseError(line, words[0].second, "expected 'field <name> <even|odd> antifield <name>'");
      const Parity p = parse_parity(words[2].first, line, words[2].second);
      fields.push_back(FieldDecl{words[1].first, p, words[4].first});
    } else {
      throw ParseError(line, words[0].second, "unknown declaration '" + head + "'");
    }
  }
  if (indeps.empty()) indeps.emplace_back("x");
  try {
    return make_context(std::move(indeps), std::move(fields));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line == 0 ? 1 : line, 1, e.what());
  }
}

ContextPtr load_context(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open context file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_context(buf.str());
}

std::string format_context(const FieldContext& ctx) {
  std::string out = "indep";
  for (const auto& x : ctx.independents()) out += " " + x;
  out += "\n";
  for (const auto& f : ctx.fields())
    out += "field " + f.name + " " + std::string(to_string(f.parity)) + " antifield " + f.antifield + "\n";
  return out;
}

}  // namespace varschouten
