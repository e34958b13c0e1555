#include "varschouten/calculus.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "varschouten/error.hpp"

namespace varschouten {

namespace {

Expression single(const ContextPtr& ctx, MonomialKey key, const Rational& coeff) {
  ExpressionBuilder b(ctx);
  b.add(std::move(key), coeff);
  return b.build();
}

bool contains(const std::vector<JetVar>& sorted, JetVar v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

/// key with funcs[index] replaced by its derivative with respect to its argument;
/// the odd part is dropped. Scales coeff accordingly.
MonomialKey differentiate_factor(const MonomialKey& key, std::size_t index, Rational& coeff) {
  MonomialKey rest;
  rest.even = key.even;
  rest.funcs = key.funcs;
  FuncFactor& f = rest.funcs[index];
  coeff *= f.power;
  if (f.kind == FuncKind::exp) return rest;

  const FuncKind partner = f.kind == FuncKind::sin ? FuncKind::cos : FuncKind::sin;
  if (f.kind == FuncKind::cos) coeff = -coeff;
  const ArgRef arg = f.arg;
  if (--f.power == 0) rest.funcs.erase(rest.funcs.begin() + static_cast<std::ptrdiff_t>(index));
  MonomialKey factor;
  factor.funcs.push_back({partner, arg, 1});
  MonomialKey out;
  multiply_keys(rest, factor, out);
  return out;
}

/// Contribution of the chain rule through function factors: sum over factors whose
/// argument depends on var of (even part, f') * d(arg) * (odd part).
/// `inner` differentiates an argument; `sign_past_odd` multiplies each term (right
/// derivatives of odd variables pass the odd part).
void chain_rule(const ContextPtr& ctx, const Monomial& m, JetVar var, int sign_past_odd,
                const std::function<Expression(const Expression&)>& inner, ExpressionBuilder& out) {
  for (std::size_t i = 0; i < m.key.funcs.size(); ++i) {
    const auto& f = m.key.funcs[i];
    if (!contains(f.arg->vars, var)) continue;
    const Expression darg = inner(f.arg->expr);
    if (darg.is_zero()) continue;
    Rational coeff = m.coeff * sign_past_odd;
    MonomialKey rest = differentiate_factor(m.key, i, coeff);
    MonomialKey odd;
    odd.odd = m.key.odd;
    out.add(single(ctx, std::move(rest), coeff) * darg * single(ctx, std::move(odd), 1));
  }
}

void partial_into(const Expression& e, JetVar var, Side side, ExpressionBuilder& out) {
  const auto& ctx = e.context();
  const bool odd_var = ctx->owner_parity(var.owner()) == Parity::odd;
  const auto inner = [&](const Expression& arg) { return partial(arg, var, side); };

  for (const auto& m : e.monomials()) {
    if (odd_var) {
      const auto it = std::lower_bound(m.key.odd.begin(), m.key.odd.end(), var);
      if (it != m.key.odd.end() && *it == var) {
        const auto j = static_cast<std::size_t>(it - m.key.odd.begin());
        const std::size_t crossed = side == Side::left ? j : m.key.odd.size() - 1 - j;
        MonomialKey key = m.key;
        key.odd.erase(key.odd.begin() + static_cast<std::ptrdiff_t>(j));
        out.add(std::move(key), crossed % 2 == 0 ? m.coeff : Rational(-m.coeff));
      }
      const int sign = (side == Side::right && m.key.odd.size() % 2 == 1) ? -1 : 1;
      chain_rule(ctx, m, var, sign, inner, out);
    } else {
      const auto it = std::lower_bound(m.key.even.begin(), m.key.even.end(), var,
                                       [](const EvenFactor& f, JetVar v) { return f.var < v; });
      if (it != m.key.even.end() && it->var == var) {
        MonomialKey key = m.key;
        auto& slot = key.even[static_cast<std::size_t>(it - m.key.even.begin())];
        const Rational coeff = m.coeff * slot.power;
        if (--slot.power == 0) key.even.erase(key.even.begin() + (it - m.key.even.begin()));
        out.add(std::move(key), coeff);
      }
      chain_rule(ctx, m, var, 1, inner, out);
    }
  }
}

/// Sum over present multi-indices s of (-D)^s term(s), evaluated Horner-style one
/// direction at a time so that each total derivative is applied to merged sums.
Expression variational_sum(const ContextPtr& ctx, OwnerId owner, const std::vector<JetVar>& present,
                           const std::function<Expression(JetVar)>& term) {
  const std::size_t n = ctx->dimension();
  std::vector<unsigned> prefix;
  prefix.reserve(n);

  std::function<Expression(std::size_t)> horner = [&](std::size_t d) -> Expression {
    if (d == n) {
      const JetVar v(owner, prefix);
      if (!contains(present, v)) return Expression(ctx);
      return term(v);
    }
    unsigned top = 0;
    bool any = false;
    for (const auto& v : present) {
      bool match = true;
      for (std::size_t k = 0; k < d && match; ++k) match = v.order(k) == prefix[k];
      if (match) {
        top = std::max(top, v.order(d));
        any = true;
      }
    }
    if (!any) return Expression(ctx);
    prefix.push_back(top);
    Expression acc = horner(d + 1);
    prefix.back() = 0;
    for (unsigned s = top; s-- > 0;) {
      prefix.back() = s;
      acc = horner(d + 1) - total_derivative(acc, Direction{d});
    }
    prefix.pop_back();
    return acc;
  };
  return horner(0);
}

std::vector<JetVar> vars_of_owner(const Expression& e, OwnerId owner) {
  auto vars = jet_vars(e);
  std::erase_if(vars, [&](JetVar v) { return v.owner() != owner; });
  return vars;
}

}  // namespace

Expression partial(const Expression& e, JetVar var, Side side) {
  ExpressionBuilder out(e.context());
  partial_into(e, var, side, out);
  return out.build();
}

Expression total_derivative(const Expression& e, Direction d) {
  const auto& ctx = e.context();
  if (d.index >= ctx->dimension()) throw InvalidExpression("direction out of range");
  ExpressionBuilder out(ctx);

  for (const auto& m : e.monomials()) {
    for (std::size_t i = 0; i < m.key.even.size(); ++i) {
      const auto& f = m.key.even[i];
      const JetVar up = f.var.raised(d.index);
      MonomialKey key = m.key;
      if (--key.even[i].power == 0) key.even.erase(key.even.begin() + static_cast<std::ptrdiff_t>(i));
      const auto pos = std::lower_bound(key.even.begin(), key.even.end(), up,
                                        [](const EvenFactor& a, JetVar v) { return a.var < v; });
      if (pos != key.even.end() && pos->var == up)
        ++pos->power;
      else
        key.even.insert(pos, EvenFactor{up, 1});
      out.add(std::move(key), m.coeff * f.power);
    }

    for (std::size_t j = 0; j < m.key.odd.size(); ++j) {
      const JetVar up = m.key.odd[j].raised(d.index);
      MonomialKey key = m.key;
      key.odd.erase(key.odd.begin() + static_cast<std::ptrdiff_t>(j));
      const auto pos = std::lower_bound(key.odd.begin(), key.odd.end(), up);
      if (pos != key.odd.end() && *pos == up) continue;
      const auto p = static_cast<std::size_t>(pos - key.odd.begin());
      key.odd.insert(pos, up);
      const std::size_t moved = p > j ? p - j : j - p;
      out.add(std::move(key), moved % 2 == 0 ? m.coeff : Rational(-m.coeff));
    }

    for (std::size_t i = 0; i < m.key.funcs.size(); ++i) {
      const Expression darg = total_derivative(m.key.funcs[i].arg->expr, d);
      if (darg.is_zero()) continue;
      Rational coeff = m.coeff;
      MonomialKey rest = differentiate_factor(m.key, i, coeff);
      rest.odd = m.key.odd;
      out.add(single(ctx, std::move(rest), coeff) * darg);
    }
  }
  return out.build();
}

Expression euler(const Expression& e, OwnerId owner, Side side) {
  const auto present = vars_of_owner(e, owner);
  if (present.empty()) return Expression(e.context());
  return variational_sum(e.context(), owner, present, [&](JetVar v) { return partial(e, v, side); });
}

std::pair<Expression, Expression> euler_split(const Expression& x, const Expression& y, OwnerId owner, Side side) {
  require_same_context(x.context(), y.context());
  const auto& ctx = x.context();
  const Parity w = ctx->owner_parity(owner);
  const auto [x_even, x_odd] = split_by_parity(x);
  const auto [y_even, y_odd] = split_by_parity(y);

  // left:  d(xy) = (dx) y + (-1)^{|w||x|} x (dy)
  // right: d(xy) = x (dy) + (-1)^{|w||y|} (dx) y
  const auto on_x = [&](JetVar v) {
    const Expression dx = partial(x, v, side);
    if (side == Side::left || w == Parity::even) return dx * y;
    return dx * y_even - dx * y_odd;
  };
  const auto on_y = [&](JetVar v) {
    const Expression dy = partial(y, v, side);
    if (side == Side::right || w == Parity::even) return x * dy;
    return x_even * dy - x_odd * dy;
  };

  const auto px = vars_of_owner(x, owner);
  const auto py = vars_of_owner(y, owner);
  Expression first = px.empty() ? Expression(ctx) : variational_sum(ctx, owner, px, on_x);
  Expression second = py.empty() ? Expression(ctx) : variational_sum(ctx, owner, py, on_y);
  return {std::move(first), std::move(second)};
}

bool is_exact(const Expression& e) {
  if (sgn(eval_zero_section(e)) != 0) return false;
  const auto& ctx = e.context();
  const auto vars = jet_vars(e);
  for (std::size_t o = 0; o < ctx->owner_count(); ++o) {
    const OwnerId owner{static_cast<std::uint8_t>(o)};
    const bool occurs = std::any_of(vars.begin(), vars.end(), [&](JetVar v) { return v.owner() == owner; });
    if (occurs && !euler(e, owner, Side::left).is_zero()) return false;
  }
  return true;
}

}  // namespace varschouten
