#include <deque>
#include <map>
#include <sstream>

#include <json.hpp>

#include "varschouten/textio.hpp"
#include "varschouten/trace.hpp"

namespace varschouten {

namespace {

using json = nlohmann::ordered_json;

std::string rational_fraction(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

std::string rational_plain(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// plain

std::string plain(const Expression& e);

std::string plain_monomial_body(const FieldContext& ctx, const MonomialKey& key) {
  std::string out;
  const auto sep = [&] {
    if (!out.empty()) out += "*";
  };
  for (const auto& f : key.even) {
    sep();
    out += format_jet(ctx, f.var);
    if (f.power > 1) out += "^" + std::to_string(f.power);
  }
  for (const auto& f : key.funcs) {
    sep();
    out += std::string(to_string(f.kind)) + "(" + plain(f.arg->expr) + ")";
    if (f.power > 1) out += "^" + std::to_string(f.power);
  }
  for (const auto& v : key.odd) {
    sep();
    out += format_jet(ctx, v);
  }
  return out;
}

std::string plain(const Expression& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& m : e.monomials()) {
    const bool negative = sgn(m.coeff) < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    const Rational mag = abs(m.coeff);
    if (m.key.is_constant()) {
      out += rational_plain(mag);
      continue;
    }
    if (mag != 1) out += rational_plain(mag) + "*";
    out += plain_monomial_body(*e.context(), m.key);
  }
  return out;
}

// ---------------------------------------------------------------------------
// latex

std::string latex_jet(const FieldContext& ctx, JetVar v) {
  const OwnerId o = v.owner();
  std::string base = ctx.field_name(o);
  if (o.is_antifield()) base += "^{\\dagger}";
  std::string sub;
  for (std::size_t d = 0; d < ctx.dimension(); ++d) {
    const unsigned k = v.order(d);
    const std::string& x = ctx.independents()[d];
    if (k > 3)
      sub += x + "^{" + std::to_string(k) + "}";
    else
      for (unsigned i = 0; i < k; ++i) sub += x;
  }
  if (!sub.empty()) base += "_{" + sub + "}";
  return base;
}

std::string latex(const Expression& e);

std::string latex_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string latex_monomial_body(const FieldContext& ctx, const MonomialKey& key) {
  std::vector<std::string> parts;
  for (const auto& f : key.even) {
    std::string j = latex_jet(ctx, f.var);
    if (f.power > 1) j = "{" + j + "}^{" + std::to_string(f.power) + "}";
    parts.push_back(std::move(j));
  }
  for (const auto& f : key.funcs) {
    const std::string arg = latex(f.arg->expr);
    std::string s;
    if (f.kind == FuncKind::exp) {
      s = "e^{" + arg + "}";
      if (f.power > 1) s = "\\left(" + s + "\\right)^{" + std::to_string(f.power) + "}";
    } else {
      s = f.kind == FuncKind::sin ? "\\sin" : "\\cos";
      if (f.power > 1) s += "^{" + std::to_string(f.power) + "}";
      s += "\\left(" + arg + "\\right)";
    }
    parts.push_back(std::move(s));
  }
  for (const auto& v : key.odd) parts.push_back(latex_jet(ctx, v));
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

std::string latex(const Expression& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& m : e.monomials()) {
    const bool negative = sgn(m.coeff) < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    const Rational mag = abs(m.coeff);
    if (m.key.is_constant()) {
      out += latex_rational(mag);
      continue;
    }
    if (mag != 1) out += latex_rational(mag) + " ";
    out += latex_monomial_body(*e.context(), m.key);
  }
  return out;
}

// ---------------------------------------------------------------------------
// json

class JsonWriter {
 public:
  explicit JsonWriter(const FieldContext& ctx) : ctx_(ctx) {}

  json document(const Expression& e) {
    json out;
    out["monomials"] = monomials(e);
    json args = json::object();
    while (!pending_.empty()) {
      const InternedArg* node = pending_.front();
      pending_.pop_front();
      const std::string id = ids_.at(node);
      args[id] = json{{"monomials", monomials(node->expr)}};
    }
    out["args"] = std::move(args);
    return out;
  }

 private:
  std::string arg_id(const ArgRef& ref) {
    auto [it, inserted] = ids_.try_emplace(ref.get(), "a" + std::to_string(ids_.size()));
    if (inserted) pending_.push_back(ref.get());
    return it->second;
  }

  json monomials(const Expression& e) {
    json list = json::array();
    for (const auto& m : e.monomials()) {
      json even = json::array();
      for (const auto& f : m.key.even) even.push_back(json::array({format_jet(ctx_, f.var, true), f.power}));
      json funcs = json::array();
      for (const auto& f : m.key.funcs) funcs.push_back(json::array({to_string(f.kind), arg_id(f.arg), f.power}));
      json odd = json::array();
      for (const auto& v : m.key.odd) odd.push_back(format_jet(ctx_, v, true));
      list.push_back(json{{"coeff", rational_fraction(m.coeff)}, {"even", even}, {"funcs", funcs}, {"odd", odd}});
    }
    return list;
  }

  const FieldContext& ctx_;
  std::map<const InternedArg*, std::string> ids_;
  std::deque<const InternedArg*> pending_;
};

json expression_json(const Expression& e) { return JsonWriter(*e.context()).document(e); }

// ---------------------------------------------------------------------------
// trace

std::string angle(int label) { return "<" + std::to_string(label) + ">"; }
std::string brace(int source) { return "{" + std::to_string(source) + "}"; }
std::string signed_int(int v) { return v < 0 ? "-1" : "+1"; }

std::string render(const Expression& e, Style style) { return style == Style::latex ? latex(e) : plain(e); }

std::string trace_text(const TraceReport& r, Style style) {
  const auto& ctx = *r.residue.context();
  std::ostringstream out;
  const auto term_line = [&](const TraceTerm& t) {
    out << "  " << (t.source ? brace(t.source) + " -> " : std::string()) << angle(t.label) << "  second variation of "
        << to_string(t.hessian) << (t.pairing_form_sound ? "" : "  (pairing form unsound)") << "\n      "
        << render(t.density, style) << "\n";
  };

  out << "[[F,[[G,H]]]]: " << r.lhs_terms.size() << " summands\n";
  for (const auto& t : r.lhs_terms) term_line(t);
  out << "[[[[F,G]],H]]: " << r.rhs1_terms.size() << " summands\n";
  for (const auto& t : r.rhs1_terms) term_line(t);
  out << "s*[[G,[[F,H]]]] with s = " << signed_int(r.jacobi_sign) << ": " << r.rhs2_terms.size() << " summands\n";
  for (const auto& t : r.rhs2_terms) term_line(t);

  out << "sign ledger (written * reorder * s = composite)\n";
  for (const auto& e : r.ledger)
    out << "  " << brace(e.source) << " -> " << angle(e.label) << "  " << signed_int(e.written) << " * "
        << signed_int(e.reorder) << " * " << signed_int(e.shift) << " = " << signed_int(e.composite) << "\n";

  out << "matches\n";
  for (const auto& m : r.matches) out << "  " << angle(m.label) << "  " << to_string(m.level) << "\n";

  out << "second variations of F\n";
  for (const auto& sv : r.second_variations) {
    out << "  " << angle(sv.label) << "  class " << angle(sv.term_class) << "  G:" << format_jet(ctx, sv.g_partner)
        << "  H:" << format_jet(ctx, sv.h_partner) << "  " << to_string(sv.level) << "\n      "
        << render(sv.from_rhs1, style) << "\n      " << render(sv.from_rhs2, style) << "\n";
  }
  out << "cancellations";
  if (r.cancellation_pairs.empty()) out << " none";
  for (const auto& [a, b] : r.cancellation_pairs) out << " (" << angle(a) << "," << angle(b) << ")";
  out << "\n";
  out << "left side first-order in F: " << (r.lhs_first_order_in_f ? "yes" : "no") << "\n";
  out << "summands add up: " << (r.sums_consistent ? "yes" : "no") << "\n";
  out << "verdict: " << to_string(r.verdict) << "\n";
  if (r.verdict != Verdict::verified) out << "residue: " << render(r.residue, style) << "\n";
  return out.str();
}

json trace_json(const TraceReport& r) {
  const auto& ctx = *r.residue.context();
  const auto terms = [&](const std::vector<TraceTerm>& list) {
    json arr = json::array();
    for (const auto& t : list) {
      json j{{"label", t.label}};
      if (t.source) j["source"] = t.source;
      j["hessian"] = to_string(t.hessian);
      j["pairing_form_sound"] = t.pairing_form_sound;
      j["density"] = expression_json(t.density);
      arr.push_back(std::move(j));
    }
    return arr;
  };
  json ledger = json::array();
  for (const auto& e : r.ledger)
    ledger.push_back(json{{"source", e.source}, {"label", e.label}, {"written", e.written}, {"reorder", e.reorder},
                          {"shift", e.shift}, {"composite", e.composite}});
  json matches = json::array();
  for (const auto& m : r.matches) matches.push_back(json{{"label", m.label}, {"level", to_string(m.level)}});
  json second = json::array();
  for (const auto& sv : r.second_variations)
    second.push_back(json{{"label", sv.label},
                          {"class", sv.term_class},
                          {"g_partner", format_jet(ctx, sv.g_partner, true)},
                          {"h_partner", format_jet(ctx, sv.h_partner, true)},
                          {"level", to_string(sv.level)},
                          {"rhs1", expression_json(sv.from_rhs1)},
                          {"rhs2", expression_json(sv.from_rhs2)}});
  json pairs = json::array();
  for (const auto& [a, b] : r.cancellation_pairs) pairs.push_back(json::array({a, b}));

  return json{{"jacobi_sign", r.jacobi_sign},
              {"lhs_terms", terms(r.lhs_terms)},
              {"rhs1_terms", terms(r.rhs1_terms)},
              {"rhs2_terms", terms(r.rhs2_terms)},
              {"ledger", ledger},
              {"matches", matches},
              {"second_variations", second},
              {"cancellation_pairs", pairs},
              {"lhs_first_order_in_f", r.lhs_first_order_in_f},
              {"sums_consistent", r.sums_consistent},
              {"verdict", to_string(r.verdict)},
              {"residue", expression_json(r.residue)}};
}

}  // namespace

std::string format_jet(const FieldContext& ctx, JetVar v, bool bracket_all) {
  std::string out = ctx.owner_name(v.owner());
  if (!bracket_all && v.total_order() == 0) return out;
  out += "[";
  for (std::size_t d = 0; d < ctx.dimension(); ++d) {
    if (d) out += ",";
    out += std::to_string(v.order(d));
  }
  return out + "]";
}

std::string format(const Expression& e, Style style) {
  switch (style) {
    case Style::plain: return plain(e);
    case Style::latex: return latex(e);
    case Style::json: return expression_json(e).dump(2);
  }
  return {};
}

std::string format_trace(const TraceReport& report, Style style) {
  if (style == Style::json) return trace_json(report).dump(2);
  return trace_text(report, style);
}

}  // namespace varschouten
