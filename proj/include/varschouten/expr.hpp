#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "varschouten/context.hpp"

namespace varschouten {

using Rational = mpq_class;

enum class FuncKind : std::uint8_t { exp, sin, cos };
std::string_view to_string(FuncKind kind) noexcept;

struct InternedArg;
/// Hash-consed function argument; two refs are equal iff they point at the same node.
using ArgRef = std::shared_ptr<const InternedArg>;

struct EvenFactor {
  JetVar var;
  unsigned power = 1;

  friend bool operator==(const EvenFactor&, const EvenFactor&) = default;
};

struct FuncFactor {
  FuncKind kind = FuncKind::exp;
  ArgRef arg;
  unsigned power = 1;

  friend bool operator==(const FuncFactor& a, const FuncFactor& b) noexcept {
    return a.kind == b.kind && a.arg == b.arg && a.power == b.power;
  }
};

/// Everything in a monomial except its coefficient. The product it denotes is
/// even factors, then function factors, then the odd variables in ascending order.
struct MonomialKey {
  std::vector<EvenFactor> even;
  std::vector<FuncFactor> funcs;
  std::vector<JetVar> odd;

  bool is_constant() const noexcept { return even.empty() && funcs.empty() && odd.empty(); }
  Parity parity() const noexcept { return (odd.size() % 2 == 0) ? Parity::even : Parity::odd; }

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};

std::strong_ordering compare(const FuncFactor& a, const FuncFactor& b);
std::strong_ordering compare(const MonomialKey& a, const MonomialKey& b);
std::size_t hash_value(const MonomialKey& key) noexcept;

struct MonomialKeyHash {
  std::size_t operator()(const MonomialKey& key) const noexcept { return hash_value(key); }
};

struct Monomial {
  Rational coeff;
  MonomialKey key;
};

/// Canonical element of the graded algebra of jet expressions: a sorted list of
/// monomials with distinct keys and nonzero coefficients. Immutable in practice;
/// all operations return new values.
class Expression {
 public:
  explicit Expression(ContextPtr ctx);

  static Expression constant(ContextPtr ctx, const Rational& value);
  static Expression jet(ContextPtr ctx, JetVar var);
  /// f(argument)^power. The argument must be parity-even and vanish on the zero section.
  static Expression function(FuncKind kind, const Expression& argument, unsigned power = 1);

  const ContextPtr& context() const noexcept { return ctx_; }
  const std::vector<Monomial>& monomials() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Expression operator-() const;
  Expression& operator+=(const Expression& other);
  Expression& operator-=(const Expression& other);
  Expression& operator*=(const Rational& scale);

  friend Expression operator+(Expression a, const Expression& b) { return a += b; }
  friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator*(const Rational& c, Expression e) { return e *= c; }
  friend bool operator==(const Expression& a, const Expression& b);

  std::strong_ordering structural_compare(const Expression& other) const;
  std::size_t hash() const noexcept;

 private:
  friend class ExpressionBuilder;
  Expression(ContextPtr ctx, std::vector<Monomial> terms) : ctx_(std::move(ctx)), terms_(std::move(terms)) {}

  ContextPtr ctx_;
  std::vector<Monomial> terms_;
};

struct InternedArg {
  Expression expr;
  std::size_t hash = 0;
  /// Every jet variable occurring in expr, nested arguments included; sorted.
  std::vector<JetVar> vars;
};

/// Returns the unique node for a canonical argument. Thread-safe.
ArgRef intern(const Expression& argument);

/// Accumulates (key, coeff) contributions and emits the canonical expression.
class ExpressionBuilder {
 public:
  explicit ExpressionBuilder(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  void add(MonomialKey&& key, const Rational& coeff);
  void add(const MonomialKey& key, const Rational& coeff);
  void add(const Expression& e);
  void add(const Expression& e, const Rational& scale);

  Expression build();

 private:
  ContextPtr ctx_;
  std::unordered_map<MonomialKey, Rational, MonomialKeyHash> acc_;
};

/// Graded product of two keys. Returns +1/-1 for the sign picked up while
/// sorting the odd part, or 0 if an odd variable repeats.
int multiply_keys(const MonomialKey& a, const MonomialKey& b, MonomialKey& out);

Expression add(const Expression& a, const Expression& b);
Expression mul(const Expression& a, const Expression& b);

/// Common parity of all monomials; nullopt when parities are mixed. Zero is even.
std::optional<Parity> parity_of(const Expression& e);

/// Value with every jet variable set to zero.
Rational eval_zero_section(const Expression& e);

/// All jet variables occurring in e, including inside function arguments; sorted, unique.
std::vector<JetVar> jet_vars(const Expression& e);

/// Largest total derivative order among the jet variables of e.
unsigned jet_order(const Expression& e);

/// Splits e into its even and odd components.
std::pair<Expression, Expression> split_by_parity(const Expression& e);

}  // namespace varschouten
