#include <doctest.h>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"
#include "varschouten/schouten.hpp"
#include "varschouten/textio.hpp"

using namespace varschouten;

namespace {

Functional I(const char* text, const char* name = nullptr, const ContextPtr& ctx = scalar_context()) {
  return name ? Functional(parse_density(text, ctx), std::string(name)) : Functional(parse_density(text, ctx));
}

struct Triple {
  Functional f = I("p*q*q[2]", "F");
  Functional g = I("p[1]*exp(q[1])", "G");
  Functional h = I("p[2]*cos(q)", "H");
};

/// [[G,H]] with every total derivative expanded.
constexpr const char* kBracketGH =
    "q[1]^2*exp(q[1])*cos(q)*p[2] + q[1]^2*q[2]*exp(q[1])*cos(q)*p[1] + q[2]^2*exp(q[1])*sin(q)*p[1]";

Functional random_homogeneous(std::mt19937_64& rng, const ContextPtr& ctx, testgen::Shape s = {}) {
  s.parity = testgen::draw(rng, 0, 1) ? Parity::odd : Parity::even;
  return Functional(testgen::random_expression(rng, ctx, s));
}

}  // namespace

TEST_SUITE("schouten") {
  TEST_CASE("bracket of G and H") {
    const Triple t;
    const auto gh = schouten_bracket(t.g, t.h);
    CHECK(gh.value.density == parse_density(kBracketGH, scalar_context()));
    CHECK(gh.provenance == std::pair<std::string, std::string>{"G", "H"});

    const auto ctx = scalar_context();
    const auto D = [](const Expression& e) { return total_derivative(e, {0}); };
    const Expression display = -(D(parse_density("p[1]*exp(q[1])", ctx)) * D(D(parse_density("cos(q)", ctx)))) -
                               D(parse_density("exp(q[1])", ctx)) * parse_density("p[2]*sin(q)", ctx);
    CHECK(gh.value.density == display);
  }

  TEST_CASE("bracket of G and H from the word oracle") {
    const Triple t;
    const oracle::Algebra o(*scalar_context());
    CHECK(o.bracket(o.from(t.g.density), o.from(t.h.density)) == o.from(parse_density(kBracketGH, scalar_context())));
  }

  TEST_CASE("zero arguments") {
    const Triple t;
    const auto zero = Functional::zero(scalar_context());
    CHECK(schouten_bracket(t.f, zero).value.is_zero());
    CHECK(schouten_bracket(zero, t.g).value.is_zero());
    CHECK(jacobi_defect(t.f, t.g, zero).is_zero());
    CHECK(graded_symmetry_defect(zero, t.g).is_zero());
  }

  TEST_CASE("homogeneity and context are enforced") {
    const Triple t;
    CHECK_THROWS_AS(schouten_bracket(I("q + p"), t.g), NonHomogeneous);
    CHECK_THROWS_AS(schouten_bracket(t.f, I("u", nullptr, testgen::plane_context())), ContextMismatch);
  }

  TEST_CASE("Jacobi sign") {
    CHECK(jacobi_sign(Parity::odd, Parity::odd) == 1);
    CHECK(jacobi_sign(Parity::odd, Parity::even) == 1);
    CHECK(jacobi_sign(Parity::even, Parity::odd) == 1);
    CHECK(jacobi_sign(Parity::even, Parity::even) == -1);
  }

  TEST_CASE("Jacobi identity on the worked triple") {
    const Triple t;
    CHECK(functional_parity(t.f) == Parity::odd);
    CHECK(functional_parity(t.g) == Parity::odd);
    CHECK(functional_parity(t.h) == Parity::odd);
    const auto sides = jacobi_sides(t.f, t.g, t.h);
    CHECK(sides.sign == 1);
    CHECK_FALSE(sides.lhs.is_zero());
    const auto defect = jacobi_defect(t.f, t.g, t.h);
    CHECK(functional_eq(defect, Functional::zero(scalar_context())));
    CHECK(defect.density == sides.lhs.density - sides.rhs1.density - sides.rhs2.density);
  }

  TEST_CASE("Jacobi defect of the worked triple in the word oracle") {
    const Triple t;
    const oracle::Algebra o(*scalar_context());
    const auto defect = o.jacobi_defect(o.from(t.f.density), o.from(t.g.density), o.from(t.h.density));
    CHECK(o.exact(defect));
    CHECK(o.from(jacobi_defect(t.f, t.g, t.h).density) == defect);
  }

  TEST_CASE("swapped arguments") {
    const Triple t;
    const auto hg = schouten_bracket(t.h, t.g).value;
    const auto gh = schouten_bracket(t.g, t.h).value;
    CHECK(functional_eq(hg, scale_add(-1, gh, 0, gh)));
    CHECK(functional_eq(graded_symmetry_defect(t.g, t.h), Functional::zero(scalar_context())));
  }

  TEST_CASE("symmetry defect of an argument with itself") {
    const auto even = I("q*q[1]*p[1]*p + q*q[2]");
    CHECK(graded_symmetry_defect(even, even).is_zero());
    CHECK_FALSE(schouten_bracket(even, even).value.is_zero());

    const Triple t;
    const auto twice = Rational(2) * schouten_bracket(t.f, t.f).value.density;
    CHECK(graded_symmetry_defect(t.f, t.f).density == twice);
    CHECK(is_exact(twice));
  }

  TEST_CASE("sign ledger") {
    const auto odd = reorder_sign_ledger(Parity::odd, Parity::odd);
    CHECK(odd == std::array<int, 8>{1, 1, 1, -1, -1, -1, 1, 1});
    const auto even = reorder_sign_ledger(Parity::even, Parity::even);
    CHECK(even[0] == -1);
    CHECK(even[1] == -1);
    const auto pw = [](int e) { return ((e % 2) + 2) % 2 == 0 ? 1 : -1; };
    for (int F = 0; F <= 1; ++F)
      for (int G = 0; G <= 1; ++G) {
        const auto l = reorder_sign_ledger(static_cast<Parity>(F), static_cast<Parity>(G));
        CHECK(l[0] == pw(F - 1));
        CHECK(l[1] == pw(G - 1));
        CHECK(l[2] == pw(F + G));
        CHECK(l[3] == -1);
        CHECK(l[4] == pw(G));
        CHECK(l[5] == pw(G));
        CHECK(l[6] == 1);
        CHECK(l[7] == 1);
      }
  }

  TEST_CASE("bracket agrees with the word oracle on random pairs") {
    std::mt19937_64 rng(41);
    testgen::Shape s;
    s.max_terms = 3;
    for (const auto& ctx : testgen::all_contexts()) {
      const oracle::Algebra o(*ctx);
      for (int k = 0; k < 8; ++k) {
        const auto a = random_homogeneous(rng, ctx, s);
        const auto b = random_homogeneous(rng, ctx, s);
        CHECK(o.from(schouten_bracket(a, b).value.density) == o.bracket(o.from(a.density), o.from(b.density)));
      }
    }
  }

  TEST_CASE("shifted grading and graded antisymmetry") {
    std::mt19937_64 rng(42);
    int nonzero = 0;
    for (const auto& ctx : testgen::all_contexts())
      for (int k = 0; k < 25; ++k) {
        const auto a = random_homogeneous(rng, ctx);
        const auto b = random_homogeneous(rng, ctx);
        const auto ab = schouten_bracket(a, b).value;
        if (!ab.is_zero()) {
          ++nonzero;
          CHECK(functional_parity(ab) == flip(functional_parity(a) + functional_parity(b)));
        }
        CHECK(is_exact(graded_symmetry_defect(a, b).density));
      }
    CHECK(nonzero > 50);
  }

  TEST_CASE("bilinearity") {
    std::mt19937_64 rng(43);
    for (const auto& ctx : testgen::all_contexts())
      for (int k = 0; k < 10; ++k) {
        testgen::Shape s;
        s.parity = testgen::draw(rng, 0, 1) ? Parity::odd : Parity::even;
        const Functional f1(testgen::random_expression(rng, ctx, s));
        const Functional f2(testgen::random_expression(rng, ctx, s));
        const auto g = random_homogeneous(rng, ctx);
        const Rational a(static_cast<long>(testgen::draw(rng, 1, 9)) - 5, testgen::draw(rng, 1, 5));
        const Rational b(static_cast<long>(testgen::draw(rng, 1, 9)) - 5, testgen::draw(rng, 1, 5));
        const auto lhs = schouten_bracket(scale_add(a, f1, b, f2), g).value;
        const auto rhs = scale_add(a, schouten_bracket(f1, g).value, b, schouten_bracket(f2, g).value);
        CHECK(lhs.density == rhs.density);
        const auto right = schouten_bracket(g, scale_add(a, f1, b, f2)).value;
        CHECK(functional_eq(right, scale_add(a, schouten_bracket(g, f1).value, b, schouten_bracket(g, f2).value)));
      }
  }

  TEST_CASE("representative independence") {
    std::mt19937_64 rng(44);
    int pairs = 0;
    for (const auto& ctx : testgen::all_contexts())
      for (int k = 0; k < 13; ++k) {
        testgen::Shape s;
        s.parity = testgen::draw(rng, 0, 1) ? Parity::odd : Parity::even;
        const Functional f(testgen::random_expression(rng, ctx, s));
        const auto g = random_homogeneous(rng, ctx);
        const auto dir = Direction{testgen::draw(rng, 0, static_cast<unsigned>(ctx->dimension() - 1))};
        const Functional shifted(f.density + total_derivative(testgen::random_expression(rng, ctx, s), dir));
        CHECK(functional_eq(schouten_bracket(shifted, g).value, schouten_bracket(f, g).value));
        CHECK(functional_eq(schouten_bracket(g, shifted).value, schouten_bracket(g, f).value));
        ++pairs;
      }
    CHECK(pairs >= 50);
  }

  TEST_CASE("Jacobi identity on random triples in several contexts") {
    std::mt19937_64 rng(45);
    testgen::Shape s;
    s.max_terms = 2;
    for (const auto& ctx : testgen::all_contexts())
      for (int k = 0; k < 8; ++k) {
        const auto f = random_homogeneous(rng, ctx, s);
        const auto g = random_homogeneous(rng, ctx, s);
        const auto h = random_homogeneous(rng, ctx, s);
        CHECK(functional_eq(jacobi_defect(f, g, h), Functional::zero(ctx)));
      }
  }

  TEST_CASE("a broken bracket would be caught") {
    // Flipping one coupling sign breaks Jacobi on the worked triple; the oracle must notice.
    const Triple t;
    const oracle::Algebra o(*scalar_context());
    const auto bad = [&](const oracle::Poly& a, const oracle::Poly& b) {
      return o.add(o.mul(o.euler(a, 0, false), o.euler(b, 1, true)), o.mul(o.euler(a, 1, false), o.euler(b, 0, true)));
    };
    const auto F = o.from(t.f.density);
    const auto G = o.from(t.g.density);
    const auto H = o.from(t.h.density);
    auto defect = bad(F, bad(G, H));
    defect = o.add(defect, bad(bad(F, G), H), -1);
    defect = o.add(defect, bad(G, bad(F, H)), -1);
    CHECK_FALSE(o.exact(defect));
  }
}
