#include "varschouten/trace.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"
#include "varschouten/schouten.hpp"

namespace varschouten {

std::string_view to_string(Slot s) noexcept {
  switch (s) {
    case Slot::F: return "F";
    case Slot::G: return "G";
    case Slot::H: return "H";
  }
  return "?";
}

std::string_view to_string(MatchLevel level) noexcept {
  switch (level) {
    case MatchLevel::canonical: return "canonical";
    case MatchLevel::exact: return "exact";
    case MatchLevel::failed: return "failed";
  }
  return "?";
}

std::string_view to_string(Verdict v) noexcept { return v == Verdict::verified ? "verified" : "unresolved"; }

namespace {

/// E_side(arg; owner) for one of the three arguments.
struct Variation {
  Slot slot;
  OwnerId owner;
  Side side;
  Expression value;
};

/// Which factor of the inner product the outer Euler operator falls on, and on which side it acts.
enum class Shape : std::uint8_t { left_on_x, left_on_y, right_on_x, right_on_y };

/// One summand for a single choice of outer and inner conjugate pair.
///   left shapes:   sign * outer * E_L(x*y; w)|part
///   right shapes:  sign * E_R(x*y; w)|part * outer
struct Piece {
  Shape shape;
  int sign;
  OwnerId w;
  Variation outer;
  Variation x;
  Variation y;
  Expression density;

  const Variation& hessian() const {
    return (shape == Shape::left_on_x || shape == Shape::right_on_x) ? x : y;
  }
};

struct Labelled {
  int label = 0;
  int source = 0;
  std::vector<Piece> pieces;
};

/// Jet variable of the hessian argument paired with the lower and the higher of the
/// other two arguments.
struct PairingKey {
  Slot hessian;
  JetVar first;
  JetVar second;

  friend auto operator<=>(const PairingKey&, const PairingKey&) = default;
};

using PairingForm = std::map<PairingKey, Expression>;

class Inputs {
 public:
  Inputs(const Functional& f, const Functional& g, const Functional& h)
      : ctx_(f.context), densities_{f.density, g.density, h.density} {
    for (std::size_t i = 0; i < 3; ++i) parities_[i] = parity_of(densities_[i]).value_or(Parity::even);
  }

  const ContextPtr& context() const { return ctx_; }
  const Expression& density(Slot s) const { return densities_[static_cast<std::size_t>(s)]; }
  Parity parity(Slot s) const { return parities_[static_cast<std::size_t>(s)]; }
  Parity owner_parity(OwnerId o) const { return ctx_->owner_parity(o); }

  Variation variation(Slot s, OwnerId owner, Side side) const {
    return {s, owner, side, euler(density(s), owner, side)};
  }

  /// Sign turning E_from(arg; u) into E_to(arg; u).
  int side_sign(const Variation& v, Side to) const {
    if (v.side == to) return 1;
    return sign_of(owner_parity(v.owner), flip(parity(v.slot)));
  }

  Parity parity_of_variation(const Variation& v) const { return parity(v.slot) + owner_parity(v.owner); }

 private:
  ContextPtr ctx_;
  std::array<Expression, 3> densities_;
  std::array<Parity, 3> parities_{};
};

/// Memoized D^s(base) over multi-indices s.
class DerivativeCache {
 public:
  explicit DerivativeCache(const Expression& base) : dim_(base.context()->dimension()) { memo_.emplace(0, base); }

  const Expression& at(JetVar index) {
    const JetVar key = index.with_owner(OwnerId{0});
    if (auto it = memo_.find(key.key()); it != memo_.end()) return it->second;
    for (std::size_t d = 0; d < dim_; ++d) {
      if (auto lower = key.lowered(d)) {
        Expression value = total_derivative(at(*lower), Direction{d});
        return memo_.emplace(key.key(), std::move(value)).first->second;
      }
    }
    return memo_.at(0);
  }

 private:
  std::size_t dim_;
  std::map<std::uint64_t, Expression> memo_;
};

std::vector<JetVar> owned_vars(const Expression& e, OwnerId owner) {
  auto vars = jet_vars(e);
  std::erase_if(vars, [&](JetVar v) { return v.owner() != owner; });
  return vars;
}

void add_component(PairingForm& form, const PairingKey& key, const Expression& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = form.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) form.erase(it);
  }
}

/// Rewrites one piece, modulo divergences, as a sum over pairs of jet variables (w_s, u_r)
/// of the hessian argument Z:
///   left:   D^s(a) * (d_L w_s d_L u_r Z) * D^r(b)       (outer a pairs with w)
///   right:  D^r(b) * (Z d_R u_r d_R w_s) * D^s(a)
/// where u is the owner of the inner variation that the outer operator falls on and b is
/// the other inner factor.
void pairing_form(const Inputs& in, const Piece& piece, PairingForm& out) {
  const Variation& hv = piece.hessian();
  const Variation& other = &hv == &piece.x ? piece.y : piece.x;
  const Expression& z = in.density(hv.slot);
  const OwnerId u = hv.owner;
  const OwnerId w = piece.w;
  const Parity pw = in.owner_parity(w);
  const Parity p_outer = in.parity_of_variation(piece.outer);
  const Parity p_other = in.parity_of_variation(other);

  const bool left = piece.shape == Shape::left_on_x || piece.shape == Shape::left_on_y;
  int sign = piece.sign * in.side_sign(hv, left ? Side::left : Side::right);
  if (piece.shape == Shape::left_on_y) sign *= sign_of(p_other, pw + p_outer);
  if (piece.shape == Shape::right_on_x) sign *= sign_of(p_other, pw + p_outer);

  DerivativeCache outer_d(piece.outer.value);
  DerivativeCache other_d(other.value);
  const Side side = left ? Side::left : Side::right;

  for (JetVar ur : owned_vars(z, u)) {
    const Expression first = partial(z, ur, side);
    for (JetVar ws : owned_vars(first, w)) {
      const Expression hess = partial(first, ws, side);
      if (hess.is_zero()) continue;
      const Expression& da = outer_d.at(ws);
      const Expression& db = other_d.at(ur);
      Expression value(in.context());
      switch (piece.shape) {
        case Shape::left_on_x: value = da * hess * db; break;
        case Shape::left_on_y: value = db * da * hess; break;
        case Shape::right_on_y: value = db * hess * da; break;
        case Shape::right_on_x: value = hess * da * db; break;
      }
      if (sign < 0) value = -value;
      const bool outer_first = piece.outer.slot < other.slot;
      add_component(out, PairingKey{hv.slot, outer_first ? ws : ur, outer_first ? ur : ws}, value);
    }
  }
}

Expression sum_density(const ContextPtr& ctx, const Labelled& t) {
  ExpressionBuilder b(ctx);
  for (const auto& p : t.pieces) b.add(p.density);
  return b.build();
}

struct Analysed {
  TraceTerm term;
  PairingForm form;
};

Analysed analyse(const Inputs& in, const Labelled& t, Slot hessian_default) {
  Analysed a{TraceTerm{t.label, t.source, hessian_default, sum_density(in.context(), t), false}, {}};
  for (const auto& p : t.pieces) {
    a.term.hessian = p.hessian().slot;
    pairing_form(in, p, a.form);
  }
  ExpressionBuilder diff(in.context());
  diff.add(a.term.density);
  for (const auto& [key, value] : a.form) diff.add(value, -1);
  a.term.pairing_form_sound = is_exact(diff.build());
  return a;
}

/// Summands of [[X,[[Y,W]]]], labelled 1..8 in the order: outer field variation then
/// antifield variation; inner field pairing then antifield pairing; falling on Y then on W.
std::vector<Labelled> expand_outer_left(const Inputs& in, Slot xs, Slot ys, Slot ws, int scale) {
  std::vector<Labelled> terms(8);
  for (int k = 0; k < 8; ++k) terms[static_cast<std::size_t>(k)].label = k + 1;
  const std::size_t nf = in.context()->fields().size();
  const int kp = kCouplingFieldAntifield;
  const int km = kCouplingAntifieldField;

  for (std::size_t i = 0; i < nf; ++i) {
    const OwnerId qi = OwnerId::field(i);
    const OwnerId pi = OwnerId::antifield(i);
    const Variation outer_q = in.variation(xs, qi, Side::right);
    const Variation outer_p = in.variation(xs, pi, Side::right);
    for (std::size_t j = 0; j < nf; ++j) {
      const OwnerId qj = OwnerId::field(j);
      const OwnerId pj = OwnerId::antifield(j);
      const Variation a = in.variation(ys, qj, Side::right);
      const Variation b = in.variation(ws, pj, Side::left);
      const Variation c = in.variation(ys, pj, Side::right);
      const Variation d = in.variation(ws, qj, Side::left);

      const auto emit_pair = [&](int label_x, int label_y, int sign, OwnerId w, const Variation& outer,
                                 const Variation& x, const Variation& y) {
        if (outer.value.is_zero()) return;
        const auto [on_x, on_y] = euler_split(x.value, y.value, w, Side::left);
        const int s = sign * scale;
        if (!on_x.is_zero())
          terms[static_cast<std::size_t>(label_x - 1)].pieces.push_back(
              {Shape::left_on_x, s, w, outer, x, y, Rational(s) * (outer.value * on_x)});
        if (!on_y.is_zero())
          terms[static_cast<std::size_t>(label_y - 1)].pieces.push_back(
              {Shape::left_on_y, s, w, outer, x, y, Rational(s) * (outer.value * on_y)});
      };
      emit_pair(1, 2, kp * kp, pi, outer_q, a, b);
      emit_pair(3, 4, kp * km, pi, outer_q, c, d);
      emit_pair(5, 6, km * kp, qi, outer_p, a, b);
      emit_pair(7, 8, km * km, qi, outer_p, c, d);
    }
  }
  return terms;
}

/// Summands of [[[[X,Y]],W]] in the order 9,1,10,5,11,3,12,7.
std::vector<Labelled> expand_inner_left(const Inputs& in, Slot xs, Slot ys, Slot ws) {
  static constexpr std::array<int, 8> labels{9, 1, 10, 5, 11, 3, 12, 7};
  std::vector<Labelled> terms(8);
  for (std::size_t k = 0; k < 8; ++k) terms[k].label = labels[k];
  const std::size_t nf = in.context()->fields().size();
  const int kp = kCouplingFieldAntifield;
  const int km = kCouplingAntifieldField;

  for (std::size_t i = 0; i < nf; ++i) {
    const OwnerId qi = OwnerId::field(i);
    const OwnerId pi = OwnerId::antifield(i);
    const Variation outer_p = in.variation(ws, pi, Side::left);
    const Variation outer_q = in.variation(ws, qi, Side::left);
    for (std::size_t j = 0; j < nf; ++j) {
      const OwnerId qj = OwnerId::field(j);
      const OwnerId pj = OwnerId::antifield(j);
      const Variation p = in.variation(xs, qj, Side::right);
      const Variation q = in.variation(ys, pj, Side::left);
      const Variation r = in.variation(xs, pj, Side::right);
      const Variation s = in.variation(ys, qj, Side::left);

      const auto emit_pair = [&](std::size_t slot_x, std::size_t slot_y, int sign, OwnerId w,
                                 const Variation& outer, const Variation& x, const Variation& y) {
        if (outer.value.is_zero()) return;
        const auto [on_x, on_y] = euler_split(x.value, y.value, w, Side::right);
        if (!on_x.is_zero())
          terms[slot_x].pieces.push_back({Shape::right_on_x, sign, w, outer, x, y, Rational(sign) * (on_x * outer.value)});
        if (!on_y.is_zero())
          terms[slot_y].pieces.push_back({Shape::right_on_y, sign, w, outer, x, y, Rational(sign) * (on_y * outer.value)});
      };
      emit_pair(0, 1, kp * kp, qi, outer_p, p, q);
      emit_pair(2, 3, kp * km, qi, outer_p, r, s);
      emit_pair(4, 5, km * kp, pi, outer_q, p, q);
      emit_pair(6, 7, km * km, pi, outer_q, r, s);
    }
  }
  return terms;
}

/// Label in [[[[F,G]],H]] / LHS numbering for each summand {1}..{8} of [[G,[[F,H]]]].
constexpr std::array<int, 8> kSecondBracketLabels{10, 2, 12, 6, 9, 4, 11, 8};

LedgerEntry ledger_entry(int source, Parity f, Parity g) {
  const int F = as_int(f);
  const int G = as_int(g);
  const auto pow = [](int e) { return (e % 2 + 2) % 2 == 0 ? 1 : -1; };
  int written = 1;
  int reorder = 1;
  switch (source) {
    case 1: written = 1; reorder = pow((F - 1) * G); break;
    case 2: written = pow(F); reorder = pow(F * G); break;
    case 3: written = -1; reorder = pow((F - 2) * G); break;
    case 4: written = -pow(F - 1); reorder = pow((F - 1) * G); break;
    case 5:
    case 6: written = -1; reorder = pow(F * (G - 1)); break;
    default: written = 1; reorder = pow((F - 1) * (G - 1)); break;
  }
  const int shift = pow((F - 1) * (G - 1));
  return {source, kSecondBracketLabels[static_cast<std::size_t>(source - 1)], written, reorder, shift,
          written * reorder * shift};
}

bool same_form(const PairingForm& a, const PairingForm& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
           return x.first == y.first && x.second == y.second;
         });
}

}  // namespace

TraceReport expand_trace(const Functional& f, const Functional& g, const Functional& h) {
  require_same_context(f.context, g.context);
  require_same_context(f.context, h.context);
  const Parity pf = functional_parity(f);
  const Parity pg = functional_parity(g);
  functional_parity(h);

  const auto& ctx = f.context;
  const Inputs in(f, g, h);
  const int s = jacobi_sign(pf, pg);

  TraceReport report(ctx);
  report.jacobi_sign = s;
  for (int k = 1; k <= 8; ++k) report.ledger[static_cast<std::size_t>(k - 1)] = ledger_entry(k, pf, pg);

  auto lhs_raw = expand_outer_left(in, Slot::F, Slot::G, Slot::H, 1);
  auto rhs1_raw = expand_inner_left(in, Slot::F, Slot::G, Slot::H);
  auto rhs2_raw = expand_outer_left(in, Slot::G, Slot::F, Slot::H, s);
  for (std::size_t k = 0; k < 8; ++k) {
    rhs2_raw[k].source = rhs2_raw[k].label;
    rhs2_raw[k].label = kSecondBracketLabels[k];
  }

  std::map<int, Analysed> lhs;
  std::map<int, Analysed> rhs;
  std::map<int, Analysed> rhs1_second;
  std::map<int, Analysed> rhs2_second;
  for (const auto& t : lhs_raw) {
    auto a = analyse(in, t, t.label % 2 == 1 ? Slot::G : Slot::H);
    report.lhs_terms.push_back(a.term);
    lhs.emplace(t.label, std::move(a));
  }
  for (const auto& t : rhs1_raw) {
    auto a = analyse(in, t, t.label >= 9 ? Slot::F : Slot::G);
    report.rhs1_terms.push_back(a.term);
    (t.label >= 9 ? rhs1_second : rhs).emplace(t.label, std::move(a));
  }
  for (const auto& t : rhs2_raw) {
    auto a = analyse(in, t, t.label >= 9 ? Slot::F : Slot::H);
    report.rhs2_terms.push_back(a.term);
    (t.label >= 9 ? rhs2_second : rhs).emplace(t.label, std::move(a));
  }

  report.lhs_first_order_in_f = std::all_of(lhs_raw.begin(), lhs_raw.end(), [](const Labelled& t) {
    return std::all_of(t.pieces.begin(), t.pieces.end(), [](const Piece& p) { return p.hessian().slot != Slot::F; });
  });

  {
    const auto gh = schouten_bracket(g, h).value;
    const auto fg = schouten_bracket(f, g).value;
    const auto fh = schouten_bracket(f, h).value;
    const auto total = [&](const std::vector<TraceTerm>& terms) {
      ExpressionBuilder b(ctx);
      for (const auto& t : terms) b.add(t.density);
      return b.build();
    };
    report.sums_consistent = total(report.lhs_terms) == schouten_bracket(f, gh).value.density &&
                             total(report.rhs1_terms) == schouten_bracket(fg, h).value.density &&
                             total(report.rhs2_terms) == Rational(s) * schouten_bracket(g, fh).value.density;
  }

  ExpressionBuilder residue(ctx);
  bool all_good = true;

  for (int k = 1; k <= 8; ++k) {
    const auto& l = lhs.at(k);
    const auto& r = rhs.at(k);
    MatchLevel level = MatchLevel::failed;
    const Expression diff = l.term.density - r.term.density;
    if (diff.is_zero() ||
        (l.term.pairing_form_sound && r.term.pairing_form_sound && same_form(l.form, r.form)))
      level = MatchLevel::canonical;
    else if (is_exact(diff))
      level = MatchLevel::exact;
    else {
      all_good = false;
      residue.add(diff);
    }
    report.matches.push_back({k, level});
  }

  int next_label = 9;
  for (int cls = 9; cls <= 12; ++cls) {
    const auto& a = rhs1_second.at(cls);
    const auto& b = rhs2_second.at(cls);
    std::map<PairingKey, std::pair<Expression, Expression>> comps;
    for (const auto& [key, v] : a.form) comps.try_emplace(key, Expression(ctx), Expression(ctx)).first->second.first = v;
    for (const auto& [key, v] : b.form) comps.try_emplace(key, Expression(ctx), Expression(ctx)).first->second.second = v;

    const bool sound = a.term.pairing_form_sound && b.term.pairing_form_sound;
    const Expression class_sum = a.term.density + b.term.density;
    const bool class_cancels = class_sum.is_zero() || is_exact(class_sum);
    if (!class_cancels) {
      all_good = false;
      residue.add(class_sum);
    }

    for (auto& [key, pair] : comps) {
      SecondVariation sv{next_label++, cls, key.first, key.second, pair.first, pair.second, MatchLevel::failed};
      if (sound && (pair.first + pair.second).is_zero())
        sv.level = MatchLevel::canonical;
      else if (class_cancels)
        sv.level = MatchLevel::exact;
      if (sv.level != MatchLevel::failed) report.cancellation_pairs.emplace_back(sv.label, sv.label);
      report.second_variations.push_back(std::move(sv));
    }
  }

  report.residue = residue.build();
  report.verdict = all_good ? Verdict::verified : Verdict::unresolved;
  return report;
}

}  // namespace varschouten
