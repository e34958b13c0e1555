#include "varschouten/expr.hpp"

#include <algorithm>

#include "varschouten/error.hpp"

namespace varschouten {

namespace {

/// GMP arithmetic assumes reduced operands; a value built from a raw numerator and
/// denominator (mpq_class(6, 3)) is not, so everything entering from outside is reduced.
Rational canonical(const Rational& q) {
  Rational r = q;
  if (r.get_den() != 1) r.canonicalize();
  return r;
}

constexpr std::size_t mix(std::size_t h, std::uint64_t v) noexcept {
  v += 0x9e3779b97f4a7c15ULL + h;
  v = (v ^ (v >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27U)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(v ^ (v >> 31U));
}

std::size_t hash_rational(const Rational& q) noexcept {
  std::size_t h = mix(0, mpz_get_ui(q.get_num_mpz_t()));
  h = mix(h, static_cast<std::uint64_t>(mpz_sgn(q.get_num_mpz_t()) + 1));
  return mix(h, mpz_get_ui(q.get_den_mpz_t()));
}

std::strong_ordering compare_slot(const FuncFactor& a, const FuncFactor& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  if (a.arg == b.arg) return std::strong_ordering::equal;
  return a.arg->expr.structural_compare(b.arg->expr);
}

std::strong_ordering compare_coeff(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace

std::string_view to_string(FuncKind kind) noexcept {
  switch (kind) {
    case FuncKind::exp: return "exp";
    case FuncKind::sin: return "sin";
    case FuncKind::cos: return "cos";
  }
  return "?";
}

std::strong_ordering compare(const FuncFactor& a, const FuncFactor& b) {
  if (auto c = compare_slot(a, b); c != 0) return c;
  return a.power <=> b.power;
}

std::strong_ordering compare(const MonomialKey& a, const MonomialKey& b) {
  const auto n = std::min(a.even.size(), b.even.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.even[i].var <=> b.even[i].var; c != 0) return c;
    if (auto c = a.even[i].power <=> b.even[i].power; c != 0) return c;
  }
  if (auto c = a.even.size() <=> b.even.size(); c != 0) return c;

  const auto m = std::min(a.funcs.size(), b.funcs.size());
  for (std::size_t i = 0; i < m; ++i)
    if (auto c = compare(a.funcs[i], b.funcs[i]); c != 0) return c;
  if (auto c = a.funcs.size() <=> b.funcs.size(); c != 0) return c;

  return std::lexicographical_compare_three_way(a.odd.begin(), a.odd.end(), b.odd.begin(), b.odd.end());
}

std::size_t hash_value(const MonomialKey& key) noexcept {
  std::size_t h = 0x51ed270b;
  for (const auto& f : key.even) h = mix(mix(h, f.var.key()), f.power);
  for (const auto& f : key.funcs) h = mix(mix(mix(h, static_cast<std::uint64_t>(f.kind)), f.arg->hash), f.power);
  h = mix(h, 0xABCDEF);
  for (const auto& v : key.odd) h = mix(h, v.key());
  return h;
}

int multiply_keys(const MonomialKey& a, const MonomialKey& b, MonomialKey& out) {
  out.even.clear();
  out.funcs.clear();
  out.odd.clear();

  // odd part first: cheapest way to detect annihilation
  int sign = 1;
  out.odd.reserve(a.odd.size() + b.odd.size());
  {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.odd.size() && j < b.odd.size()) {
      if (a.odd[i] == b.odd[j]) return 0;
      if (a.odd[i] < b.odd[j]) {
        out.odd.push_back(a.odd[i++]);
      } else {
        // b.odd[j] jumps over the remaining a.odd[i..]
        if ((a.odd.size() - i) % 2 == 1) sign = -sign;
        out.odd.push_back(b.odd[j++]);
      }
    }
    out.odd.insert(out.odd.end(), a.odd.begin() + static_cast<std::ptrdiff_t>(i), a.odd.end());
    out.odd.insert(out.odd.end(), b.odd.begin() + static_cast<std::ptrdiff_t>(j), b.odd.end());
  }

  out.even.reserve(a.even.size() + b.even.size());
  {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.even.size() && j < b.even.size()) {
      if (a.even[i].var == b.even[j].var) {
        out.even.push_back({a.even[i].var, a.even[i].power + b.even[j].power});
        ++i;
        ++j;
      } else if (a.even[i].var < b.even[j].var) {
        out.even.push_back(a.even[i++]);
      } else {
        out.even.push_back(b.even[j++]);
      }
    }
    out.even.insert(out.even.end(), a.even.begin() + static_cast<std::ptrdiff_t>(i), a.even.end());
    out.even.insert(out.even.end(), b.even.begin() + static_cast<std::ptrdiff_t>(j), b.even.end());
  }

  out.funcs.reserve(a.funcs.size() + b.funcs.size());
  {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.funcs.size() && j < b.funcs.size()) {
      const auto c = compare_slot(a.funcs[i], b.funcs[j]);
      if (c == 0) {
        out.funcs.push_back({a.funcs[i].kind, a.funcs[i].arg, a.funcs[i].power + b.funcs[j].power});
        ++i;
        ++j;
      } else if (c < 0) {
        out.funcs.push_back(a.funcs[i++]);
      } else {
        out.funcs.push_back(b.funcs[j++]);
      }
    }
    out.funcs.insert(out.funcs.end(), a.funcs.begin() + static_cast<std::ptrdiff_t>(i), a.funcs.end());
    out.funcs.insert(out.funcs.end(), b.funcs.begin() + static_cast<std::ptrdiff_t>(j), b.funcs.end());
  }
  return sign;
}

// ---------------------------------------------------------------------------
// ExpressionBuilder

void ExpressionBuilder::add(MonomialKey&& key, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = acc_.try_emplace(std::move(key), canonical(coeff));
  if (!inserted) it->second += canonical(coeff);
}

void ExpressionBuilder::add(const MonomialKey& key, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = acc_.try_emplace(key, canonical(coeff));
  if (!inserted) it->second += canonical(coeff);
}

void ExpressionBuilder::add(const Expression& e) {
  require_same_context(ctx_, e.context());
  for (const auto& m : e.monomials()) add(m.key, m.coeff);
}

void ExpressionBuilder::add(const Expression& e, const Rational& scale) {
  require_same_context(ctx_, e.context());
  if (sgn(scale) == 0) return;
  const Rational c = canonical(scale);
  for (const auto& m : e.monomials()) add(m.key, m.coeff * c);
}

Expression ExpressionBuilder::build() {
  std::vector<Monomial> terms;
  terms.reserve(acc_.size());
  for (auto& [key, coeff] : acc_)
    if (sgn(coeff) != 0) terms.push_back(Monomial{std::move(coeff), key});
  acc_.clear();
  std::sort(terms.begin(), terms.end(),
            [](const Monomial& a, const Monomial& b) { return compare(a.key, b.key) < 0; });
  return Expression(ctx_, std::move(terms));
}

// ---------------------------------------------------------------------------
// Expression

Expression::Expression(ContextPtr ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw InvalidExpression("expression needs a field context");
}

Expression Expression::constant(ContextPtr ctx, const Rational& value) {
  Expression e(std::move(ctx));
  if (sgn(value) != 0) e.terms_.push_back(Monomial{canonical(value), {}});
  return e;
}

Expression Expression::jet(ContextPtr ctx, JetVar var) {
  if (var.owner().value >= ctx->owner_count()) throw InvalidExpression("jet variable owner not in context");
  for (std::size_t d = ctx->dimension(); d < kMaxIndependents; ++d)
    if (var.order(d) != 0) throw InvalidExpression("multi-index exceeds context dimension");
  Expression e(std::move(ctx));
  MonomialKey key;
  if (e.ctx_->owner_parity(var.owner()) == Parity::odd)
    key.odd.push_back(var);
  else
    key.even.push_back({var, 1});
  e.terms_.push_back(Monomial{Rational(1), std::move(key)});
  return e;
}

Expression Expression::function(FuncKind kind, const Expression& argument, unsigned power) {
  if (power == 0) return constant(argument.context(), 1);
  const auto parity = parity_of(argument);
  if (!parity || *parity != Parity::even)
    throw InvalidExpression(std::string("argument of ") + std::string(to_string(kind)) + " must be parity-even");
  if (sgn(eval_zero_section(argument)) != 0)
    throw InvalidExpression(std::string("argument of ") + std::string(to_string(kind)) +
                            " must vanish when all jet variables are zero");
  if (argument.is_zero()) return constant(argument.context(), kind == FuncKind::sin ? 0 : 1);
  Expression e(argument.context());
  MonomialKey key;
  key.funcs.push_back({kind, intern(argument), power});
  e.terms_.push_back(Monomial{Rational(1), std::move(key)});
  return e;
}

Expression Expression::operator-() const {
  Expression e = *this;
  for (auto& m : e.terms_) m.coeff = -m.coeff;
  return e;
}

Expression& Expression::operator+=(const Expression& other) {
  require_same_context(ctx_, other.ctx_);
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  std::vector<Monomial> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < terms_.size() && j < other.terms_.size()) {
    const auto c = compare(terms_[i].key, other.terms_[j].key);
    if (c == 0) {
      Rational s = terms_[i].coeff + other.terms_[j].coeff;
      if (sgn(s) != 0) merged.push_back(Monomial{std::move(s), std::move(terms_[i].key)});
      ++i;
      ++j;
    } else if (c < 0) {
      merged.push_back(std::move(terms_[i++]));
    } else {
      merged.push_back(other.terms_[j++]);
    }
  }
  for (; i < terms_.size(); ++i) merged.push_back(std::move(terms_[i]));
  for (; j < other.terms_.size(); ++j) merged.push_back(other.terms_[j]);
  terms_ = std::move(merged);
  return *this;
}

Expression& Expression::operator-=(const Expression& other) { return *this += -other; }

Expression& Expression::operator*=(const Rational& scale) {
  if (sgn(scale) == 0) {
    terms_.clear();
    return *this;
  }
  const Rational c = canonical(scale);
  for (auto& m : terms_) m.coeff *= c;
  return *this;
}

Expression operator*(const Expression& a, const Expression& b) {
  require_same_context(a.ctx_, b.ctx_);
  if (a.is_zero() || b.is_zero()) return Expression(a.ctx_);
  ExpressionBuilder builder(a.ctx_);
  MonomialKey key;
  for (const auto& ma : a.terms_) {
    for (const auto& mb : b.terms_) {
      const int s = multiply_keys(ma.key, mb.key, key);
      if (s == 0) continue;
      Rational c = ma.coeff * mb.coeff;
      if (s < 0) c = -c;
      builder.add(key, c);
    }
  }
  return builder.build();
}

bool operator==(const Expression& a, const Expression& b) {
  if (!same_context(a.ctx_, b.ctx_)) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    if (!(a.terms_[i].key == b.terms_[i].key)) return false;
  }
  return true;
}

std::strong_ordering Expression::structural_compare(const Expression& other) const {
  const auto n = std::min(terms_.size(), other.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(terms_[i].key, other.terms_[i].key); c != 0) return c;
    if (auto c = compare_coeff(terms_[i].coeff, other.terms_[i].coeff); c != 0) return c;
  }
  return terms_.size() <=> other.terms_.size();
}

std::size_t Expression::hash() const noexcept {
  std::size_t h = terms_.size();
  for (const auto& m : terms_) h = mix(mix(h, hash_value(m.key)), hash_rational(m.coeff));
  return h;
}

// ---------------------------------------------------------------------------
// free functions

Expression add(const Expression& a, const Expression& b) { return a + b; }
Expression mul(const Expression& a, const Expression& b) { return a * b; }

std::optional<Parity> parity_of(const Expression& e) {
  if (e.is_zero()) return Parity::even;
  const Parity p = e.monomials().front().key.parity();
  for (const auto& m : e.monomials())
    if (m.key.parity() != p) return std::nullopt;
  return p;
}

Rational eval_zero_section(const Expression& e) {
  Rational total = 0;
  for (const auto& m : e.monomials()) {
    if (!m.key.even.empty() || !m.key.odd.empty()) continue;
    // arguments vanish on the zero section: exp, cos -> 1 and sin -> 0
    const bool vanishes = std::any_of(m.key.funcs.begin(), m.key.funcs.end(),
                                      [](const FuncFactor& f) { return f.kind == FuncKind::sin; });
    if (!vanishes) total += m.coeff;
  }
  return total;
}

std::vector<JetVar> jet_vars(const Expression& e) {
  std::vector<JetVar> vars;
  for (const auto& m : e.monomials()) {
    for (const auto& f : m.key.even) vars.push_back(f.var);
    for (const auto& f : m.key.funcs) vars.insert(vars.end(), f.arg->vars.begin(), f.arg->vars.end());
    vars.insert(vars.end(), m.key.odd.begin(), m.key.odd.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

unsigned jet_order(const Expression& e) {
  unsigned order = 0;
  for (const auto& v : jet_vars(e)) order = std::max(order, v.total_order());
  return order;
}

std::pair<Expression, Expression> split_by_parity(const Expression& e) {
  ExpressionBuilder even(e.context());
  ExpressionBuilder odd(e.context());
  for (const auto& m : e.monomials()) (m.key.parity() == Parity::even ? even : odd).add(m.key, m.coeff);
  return {even.build(), odd.build()};
}

}  // namespace varschouten
