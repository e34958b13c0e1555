#pragma once

#include <optional>
#include <string>

#include "varschouten/expr.hpp"

namespace varschouten {

/// A local functional: a density under the integral sign. Two functionals are equal
/// when their densities differ by a total divergence.
struct Functional {
  ContextPtr context;
  Expression density;
  std::optional<std::string> label;

  explicit Functional(Expression d, std::optional<std::string> name = std::nullopt)
      : context(d.context()), density(std::move(d)), label(std::move(name)) {}

  static Functional zero(ContextPtr ctx) { return Functional(Expression(std::move(ctx))); }

  bool is_zero() const noexcept { return density.is_zero(); }
  std::string display_name() const { return label.value_or("?"); }
};

/// Throws NonHomogeneous when the density mixes parities. Zero is even.
Parity functional_parity(const Functional& f);

bool functional_eq(const Functional& a, const Functional& b);

Functional scale_add(const Rational& c1, const Functional& a, const Rational& c2, const Functional& b);

}  // namespace varschouten
