#include "varschouten/schouten.hpp"

#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"

namespace varschouten {

namespace {

std::string bracket_label(const Functional& f, const Functional& g) {
  return "[[" + f.display_name() + "," + g.display_name() + "]]";
}

Functional labelled(Functional f, std::string name) {
  f.label = std::move(name);
  return f;
}

}  // namespace

BracketResult schouten_bracket(const Functional& f, const Functional& g) {
  require_same_context(f.context, g.context);
  std::pair<std::string, std::string> provenance{f.display_name(), g.display_name()};
  Functional out = Functional::zero(f.context);
  out.label = bracket_label(f, g);
  if (f.is_zero() || g.is_zero()) return {std::move(out), std::move(provenance)};
  functional_parity(f);
  functional_parity(g);

  ExpressionBuilder acc(f.context);
  for (std::size_t i = 0; i < f.context->fields().size(); ++i) {
    const OwnerId q = OwnerId::field(i);
    const OwnerId p = OwnerId::antifield(i);
    acc.add(euler(f.density, q, Side::right) * euler(g.density, p, Side::left), kCouplingFieldAntifield);
    acc.add(euler(f.density, p, Side::right) * euler(g.density, q, Side::left), kCouplingAntifieldField);
  }
  out.density = acc.build();
  return {std::move(out), std::move(provenance)};
}

int jacobi_sign(Parity f, Parity g) noexcept { return sign_of(flip(f), flip(g)); }

JacobiSides jacobi_sides(const Functional& f, const Functional& g, const Functional& h) {
  require_same_context(f.context, g.context);
  require_same_context(f.context, h.context);
  const Parity pf = functional_parity(f);
  const Parity pg = functional_parity(g);
  functional_parity(h);

  const auto gh = labelled(schouten_bracket(g, h).value, bracket_label(g, h));
  const auto fg = labelled(schouten_bracket(f, g).value, bracket_label(f, g));
  const auto fh = labelled(schouten_bracket(f, h).value, bracket_label(f, h));
  return {schouten_bracket(f, gh).value, schouten_bracket(fg, h).value, schouten_bracket(g, fh).value,
          jacobi_sign(pf, pg)};
}

Functional jacobi_defect(const Functional& f, const Functional& g, const Functional& h) {
  const auto sides = jacobi_sides(f, g, h);
  ExpressionBuilder acc(f.context);
  acc.add(sides.lhs.density);
  acc.add(sides.rhs1.density, -1);
  acc.add(sides.rhs2.density, -sides.sign);
  return Functional(acc.build(), "Jacobi(" + f.display_name() + "," + g.display_name() + "," + h.display_name() + ")");
}

std::array<int, 8> reorder_sign_ledger(Parity f, Parity g) noexcept {
  const int sf = sign_of(f);
  const int sg = sign_of(g);
  return {-sf, -sg, sf * sg, -1, sg, sg, 1, 1};
}

Functional graded_symmetry_defect(const Functional& f, const Functional& g) {
  require_same_context(f.context, g.context);
  if (f.is_zero() || g.is_zero()) {
    const auto& nonzero = f.is_zero() ? g : f;
    if (!nonzero.is_zero()) functional_parity(nonzero);
    return Functional::zero(f.context);
  }
  const int s = jacobi_sign(functional_parity(f), functional_parity(g));
  return scale_add(1, schouten_bracket(f, g).value, s, schouten_bracket(g, f).value);
}

}  // namespace varschouten
