#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "varschouten/functional.hpp"

namespace varschouten {

/// Positions of the three arguments of the Jacobi identity.
enum class Slot : std::uint8_t { F = 0, G = 1, H = 2 };
std::string_view to_string(Slot s) noexcept;

/// How a match or cancellation was established: literal equality after rewriting both
/// sides into second-variation pairing form, or only modulo divergences.
enum class MatchLevel : std::uint8_t { canonical, exact, failed };
std::string_view to_string(MatchLevel level) noexcept;

enum class Verdict : std::uint8_t { verified, unresolved };
std::string_view to_string(Verdict v) noexcept;

/// One summand of a bracket expansion. `hessian` is the argument whose second variation
/// the summand carries once its inner Euler operator is unfolded.
struct TraceTerm {
  int label = 0;
  /// For summands of the reordered second bracket, its index {1}..{8}; 0 otherwise.
  int source = 0;
  Slot hessian = Slot::F;
  Expression density;
  /// Whether the summand integrates to the same functional as its pairing form.
  bool pairing_form_sound = false;
};

/// A second-variation component of F: the jet variables of F paired with G and with H.
struct SecondVariation {
  int label = 0;
  int term_class = 0;
  JetVar g_partner;
  JetVar h_partner;
  Expression from_rhs1;
  /// Already multiplied by the Jacobi sign.
  Expression from_rhs2;
  MatchLevel level = MatchLevel::failed;
};

struct LabelMatch {
  int label = 0;
  MatchLevel level = MatchLevel::failed;
};

struct LedgerEntry {
  int source = 0;
  int label = 0;
  int written = 0;
  int reorder = 0;
  int shift = 0;
  int composite = 0;
};

struct TraceReport {
  std::vector<TraceTerm> lhs_terms;
  std::vector<TraceTerm> rhs1_terms;
  /// Already multiplied by the Jacobi sign.
  std::vector<TraceTerm> rhs2_terms;
  std::vector<SecondVariation> second_variations;
  std::vector<LabelMatch> matches;
  std::vector<std::pair<int, int>> cancellation_pairs;
  std::array<LedgerEntry, 8> ledger{};
  int jacobi_sign = 1;
  /// No LHS summand carries a second variation of F.
  bool lhs_first_order_in_f = false;
  /// The LHS summands add up to [[F,[[G,H]]]] literally, and likewise for both RHS brackets.
  bool sums_consistent = false;
  Verdict verdict = Verdict::unresolved;
  Expression residue;

  explicit TraceReport(ContextPtr ctx) : residue(std::move(ctx)) {}
};

TraceReport expand_trace(const Functional& f, const Functional& g, const Functional& h);

}  // namespace varschouten
