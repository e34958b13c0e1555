#include "varschouten/context.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "varschouten/error.hpp"

namespace varschouten {

std::string_view to_string(Parity p) noexcept { return p == Parity::even ? "even" : "odd"; }

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (std::isalpha(static_cast<unsigned char>(s[0])) == 0 && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  });
}

bool is_reserved(const std::string& s) { return s == "exp" || s == "sin" || s == "cos"; }

}  // namespace

FieldContext::FieldContext(std::vector<std::string> independents, std::vector<FieldDecl> fields)
    : independents_(std::move(independents)), fields_(std::move(fields)) {
  if (independents_.empty()) throw InvalidExpression("context needs at least one independent variable");
  if (independents_.size() > kMaxIndependents)
    throw InvalidExpression("at most " + std::to_string(kMaxIndependents) + " independent variables are supported");
  if (fields_.size() > kMaxFields) throw InvalidExpression("too many fields");

  std::set<std::string> seen;
  auto claim = [&](const std::string& name) {
    if (!is_identifier(name)) throw InvalidExpression("'" + name + "' is not an identifier");
    if (is_reserved(name)) throw InvalidExpression("'" + name + "' is a reserved function name");
    if (!seen.insert(name).second) throw InvalidExpression("name '" + name + "' declared twice");
  };
  for (const auto& x : independents_) claim(x);
  for (const auto& f : fields_) {
    claim(f.name);
    claim(f.antifield);
  }
}

const std::string& FieldContext::owner_name(OwnerId owner) const {
  const auto& f = fields_.at(owner.field_index());
  return owner.is_antifield() ? f.antifield : f.name;
}

Parity FieldContext::owner_parity(OwnerId owner) const {
  const auto& f = fields_.at(owner.field_index());
  return owner.is_antifield() ? flip(f.parity) : f.parity;
}

const std::string& FieldContext::field_name(OwnerId owner) const { return fields_.at(owner.field_index()).name; }

std::optional<OwnerId> FieldContext::find_owner(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].name == name) return OwnerId::field(i);
    if (fields_[i].antifield == name) return OwnerId::antifield(i);
  }
  return std::nullopt;
}

std::optional<std::size_t> FieldContext::find_independent(std::string_view name) const {
  for (std::size_t i = 0; i < independents_.size(); ++i)
    if (independents_[i] == name) return i;
  return std::nullopt;
}

std::optional<Parity> FieldContext::uniform_field_parity() const {
  if (fields_.empty()) return std::nullopt;
  const Parity p = fields_.front().parity;
  for (const auto& f : fields_)
    if (f.parity != p) return std::nullopt;
  return p;
}

ContextPtr make_context(std::vector<std::string> independents, std::vector<FieldDecl> fields) {
  return std::make_shared<const FieldContext>(std::move(independents), std::move(fields));
}

ContextPtr scalar_context() {
  static const ContextPtr ctx = make_context({"x"}, {FieldDecl{"q", Parity::even, "p"}});
  return ctx;
}

bool same_context(const ContextPtr& a, const ContextPtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_context(const ContextPtr& a, const ContextPtr& b) {
  if (!same_context(a, b)) throw ContextMismatch();
}

JetVar::JetVar(OwnerId owner, std::span<const unsigned> orders) : key_(pack_owner(owner)) {
  if (orders.size() > kMaxIndependents) throw InvalidExpression("multi-index longer than supported dimension");
  unsigned total = 0;
  for (std::size_t d = 0; d < orders.size(); ++d) {
    if (orders[d] > kMaxJetOrder) throw InvalidExpression("jet order too large");
    total += orders[d];
    key_ |= static_cast<std::uint64_t>(orders[d]) << shift(d);
  }
  if (total > kMaxJetOrder) throw InvalidExpression("jet order too large");
  key_ |= static_cast<std::uint64_t>(total) << 48U;
}

std::vector<unsigned> JetVar::multi_index(std::size_t dimension) const {
  std::vector<unsigned> out(dimension);
  for (std::size_t d = 0; d < dimension; ++d) out[d] = order(d);
  return out;
}

JetVar JetVar::raised(std::size_t direction) const {
  if (order(direction) >= kMaxJetOrder || total_order() >= kMaxJetOrder)
    throw InvalidExpression("jet order overflow while differentiating");
  return JetVar(key_ + (std::uint64_t{1} << shift(direction)) + (std::uint64_t{1} << 48U));
}

std::optional<JetVar> JetVar::lowered(std::size_t direction) const noexcept {
  if (order(direction) == 0) return std::nullopt;
  return JetVar(key_ - (std::uint64_t{1} << shift(direction)) - (std::uint64_t{1} << 48U));
}

JetVar JetVar::with_owner(OwnerId owner) const noexcept {
  return JetVar((key_ & ((std::uint64_t{1} << 56U) - 1)) | pack_owner(owner));
}

}  // namespace varschouten
