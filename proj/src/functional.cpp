#include "varschouten/functional.hpp"

#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"

namespace varschouten {

Parity functional_parity(const Functional& f) {
  const auto p = parity_of(f.density);
  if (!p) throw NonHomogeneous(f.label ? "functional " + *f.label : std::string("functional"));
  return *p;
}

bool functional_eq(const Functional& a, const Functional& b) {
  require_same_context(a.context, b.context);
  return is_exact(a.density - b.density);
}

Functional scale_add(const Rational& c1, const Functional& a, const Rational& c2, const Functional& b) {
  require_same_context(a.context, b.context);
  ExpressionBuilder out(a.context);
  out.add(a.density, c1);
  out.add(b.density, c2);
  return Functional(out.build());
}

}  // namespace varschouten
