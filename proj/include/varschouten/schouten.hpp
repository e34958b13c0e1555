#pragma once

#include <array>
#include <string>
#include <utility>

#include "varschouten/functional.hpp"

namespace varschouten {

/// Coupling of a field variation against an antifield covector, and the reverse.
inline constexpr int kCouplingFieldAntifield = +1;
inline constexpr int kCouplingAntifieldField = -1;

struct BracketResult {
  Functional value;
  std::pair<std::string, std::string> provenance;
};

/// [[F,G]] = sum over pairs (q, p) of  E_R(F; q) E_L(G; p) - E_R(F; p) E_L(G; q).
BracketResult schouten_bracket(const Functional& f, const Functional& g);

/// (-1)^((|F|-1)(|G|-1)), exponents taken mod 2.
int jacobi_sign(Parity f, Parity g) noexcept;

/// Both sides of the shifted-graded Jacobi identity, kept apart.
struct JacobiSides {
  Functional lhs;   ///< [[F,[[G,H]]]]
  Functional rhs1;  ///< [[[[F,G]],H]]
  Functional rhs2;  ///< [[G,[[F,H]]]]
  int sign = 1;     ///< factor in front of rhs2
};

JacobiSides jacobi_sides(const Functional& f, const Functional& g, const Functional& h);

/// [[F,[[G,H]]]] - [[[[F,G]],H]] - (-1)^((|F|-1)(|G|-1)) [[G,[[F,H]]]].
Functional jacobi_defect(const Functional& f, const Functional& g, const Functional& h);

/// Composite sign of each summand {1}..{8} of the reordered [[G,[[F,H]]]].
std::array<int, 8> reorder_sign_ledger(Parity f, Parity g) noexcept;

/// [[F,G]] + (-1)^((|F|-1)(|G|-1)) [[G,F]].
Functional graded_symmetry_defect(const Functional& f, const Functional& g);

}  // namespace varschouten
