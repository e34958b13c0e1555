#pragma once

#include <cstddef>
#include <utility>

#include "varschouten/expr.hpp"

namespace varschouten {

/// Which way a graded derivative acts: a left derivative strikes its variable after
/// moving it to the front of each monomial, a right derivative after moving it to the back.
enum class Side : std::uint8_t { left, right };

struct Direction {
  std::size_t index = 0;
};

/// Graded partial derivative with respect to a single jet variable.
Expression partial(const Expression& e, JetVar var, Side side);

/// Total derivative D_d, an even derivation raising jet orders by one in direction d.
Expression total_derivative(const Expression& e, Direction d);

/// Directed Euler operator: sum over multi-indices s of (-D)^s applied to partial(e, owner_s, side).
Expression euler(const Expression& e, OwnerId owner, Side side);

/// Euler derivative of the product x*y, split into the part where the derivative
/// falls on x and the part where it falls on y. The two parts sum to euler(x*y, owner, side).
std::pair<Expression, Expression> euler_split(const Expression& x, const Expression& y, OwnerId owner, Side side);

/// Whether e integrates to zero: every Euler derivative vanishes and the constant part is zero.
bool is_exact(const Expression& e);

}  // namespace varschouten
