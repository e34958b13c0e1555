#include <doctest.h>

#include "support/generators.hpp"
#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"
#include "varschouten/functional.hpp"
#include "varschouten/textio.hpp"

using namespace varschouten;

namespace {

Functional I(const char* text, const ContextPtr& ctx = scalar_context()) {
  return Functional(parse_density(text, ctx));
}

}  // namespace

TEST_SUITE("functional") {
  TEST_CASE("parity") {
    CHECK(functional_parity(I("p*q*q[2]")) == Parity::odd);
    CHECK(functional_parity(I("p[1]*exp(q[1])")) == Parity::odd);
    CHECK(functional_parity(I("q*q[2]")) == Parity::even);
    CHECK(functional_parity(Functional::zero(scalar_context())) == Parity::even);
    CHECK_THROWS_AS(functional_parity(I("q + p")), NonHomogeneous);
  }

  TEST_CASE("equality modulo divergences") {
    const auto zero = Functional::zero(scalar_context());
    CHECK(functional_eq(Functional(total_derivative(parse_density("p*q[1]", scalar_context()), {0})), zero));
    CHECK(functional_eq(I("p*q[2]"), I("p[2]*q")));
    CHECK(functional_eq(I("p*q[2]"), I("-p[1]*q[1]")));
    CHECK_FALSE(functional_eq(I("exp(q[1])"), zero));
    CHECK_FALSE(functional_eq(I("q*q[2]"), I("q[1]*q[1]")));
    CHECK(functional_eq(I("q*q[2]"), I("-q[1]*q[1]")));
  }

  TEST_CASE("scale_add") {
    const auto F = I("p*q*q[2]");
    const auto G = I("p[1]*exp(q[1])");
    CHECK(scale_add(1, F, -1, F).is_zero());
    CHECK(scale_add(1, F, 0, G).density == F.density);
    CHECK(scale_add(Rational(1, 2), F, 3, G).density ==
          parse_density("1/2*p*q*q[2] + 3*p[1]*exp(q[1])", scalar_context()));
    CHECK_THROWS_AS(scale_add(1, F, 1, I("u", testgen::plane_context())), ContextMismatch);
  }

  TEST_CASE("equivalence relation on samples") {
    std::mt19937_64 rng(31);
    for (const auto& ctx : testgen::all_contexts())
      for (int k = 0; k < 15; ++k) {
        const Functional a(testgen::random_expression(rng, ctx));
        const Functional b(a.density + total_derivative(testgen::random_expression(rng, ctx), {0}));
        const Functional c(b.density + total_derivative(testgen::random_expression(rng, ctx), {0}));
        const Functional other(testgen::random_nonzero(rng, ctx));
        CHECK(functional_eq(a, a));
        CHECK(functional_eq(a, b));
        CHECK(functional_eq(b, a));
        CHECK(functional_eq(b, c));
        CHECK(functional_eq(a, c));
        CHECK(functional_eq(a, other) == functional_eq(other, a));
      }
  }

  TEST_CASE("parity survives homogeneous exact additions") {
    std::mt19937_64 rng(32);
    for (const auto& ctx : testgen::all_contexts())
      for (int k = 0; k < 15; ++k) {
        testgen::Shape s;
        s.parity = testgen::draw(rng, 0, 1) ? Parity::odd : Parity::even;
        const Functional a(testgen::random_nonzero(rng, ctx, s));
        const Expression extra = total_derivative(testgen::random_expression(rng, ctx, s), {0});
        const Functional b(a.density + extra);
        if (!b.is_zero()) CHECK(functional_parity(b) == functional_parity(a));
      }
  }
}
