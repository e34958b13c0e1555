#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varschouten {

/// Z2 grading; `odd` factors anticommute and square to zero.
enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) noexcept {
  return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
constexpr Parity flip(Parity p) noexcept { return p + Parity::odd; }
constexpr int as_int(Parity p) noexcept { return static_cast<int>(p); }
/// (-1)^p
constexpr int sign_of(Parity p) noexcept { return p == Parity::even ? 1 : -1; }
/// (-1)^(a*b)
constexpr int sign_of(Parity a, Parity b) noexcept {
  return (a == Parity::odd && b == Parity::odd) ? -1 : 1;
}
std::string_view to_string(Parity p) noexcept;

/// Index of a field (even ids) or its antifield (odd ids) in declaration order.
struct OwnerId {
  std::uint8_t value = 0;

  constexpr bool is_antifield() const noexcept { return (value & 1U) != 0; }
  constexpr std::size_t field_index() const noexcept { return value >> 1U; }
  constexpr OwnerId conjugate() const noexcept { return OwnerId{static_cast<std::uint8_t>(value ^ 1U)}; }

  static constexpr OwnerId field(std::size_t i) noexcept { return OwnerId{static_cast<std::uint8_t>(2 * i)}; }
  static constexpr OwnerId antifield(std::size_t i) noexcept {
    return OwnerId{static_cast<std::uint8_t>(2 * i + 1)};
  }

  friend constexpr auto operator<=>(OwnerId, OwnerId) = default;
};

inline constexpr std::size_t kMaxIndependents = 6;
inline constexpr std::size_t kMaxFields = 127;
inline constexpr unsigned kMaxJetOrder = 255;

struct FieldDecl {
  std::string name;
  Parity parity = Parity::even;
  std::string antifield;

  friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

/// Independent variables plus field/antifield declarations. Immutable once built.
class FieldContext {
 public:
  FieldContext(std::vector<std::string> independents, std::vector<FieldDecl> fields);

  std::size_t dimension() const noexcept { return independents_.size(); }
  const std::vector<std::string>& independents() const noexcept { return independents_; }
  const std::vector<FieldDecl>& fields() const noexcept { return fields_; }
  std::size_t owner_count() const noexcept { return 2 * fields_.size(); }

  const std::string& owner_name(OwnerId owner) const;
  Parity owner_parity(OwnerId owner) const;
  /// Name of the field an owner belongs to (the field itself for antifields' partners).
  const std::string& field_name(OwnerId owner) const;

  std::optional<OwnerId> find_owner(std::string_view name) const;
  std::optional<std::size_t> find_independent(std::string_view name) const;

  /// Whether every field has the same parity; returns it if so.
  std::optional<Parity> uniform_field_parity() const;

  friend bool operator==(const FieldContext&, const FieldContext&) = default;

 private:
  std::vector<std::string> independents_;
  std::vector<FieldDecl> fields_;
};

using ContextPtr = std::shared_ptr<const FieldContext>;

ContextPtr make_context(std::vector<std::string> independents, std::vector<FieldDecl> fields);

/// One independent variable x, an even field q and its odd antifield p.
ContextPtr scalar_context();

bool same_context(const ContextPtr& a, const ContextPtr& b) noexcept;
void require_same_context(const ContextPtr& a, const ContextPtr& b);

/// A jet coordinate: owner plus derivative multi-index, packed into one word so that
/// integer order is (owner, total order, multi-index lexicographic).
class JetVar {
 public:
  constexpr JetVar() = default;
  JetVar(OwnerId owner, std::span<const unsigned> orders);
  static JetVar base(OwnerId owner) noexcept { return JetVar(pack_owner(owner)); }

  OwnerId owner() const noexcept { return OwnerId{static_cast<std::uint8_t>(key_ >> 56U)}; }
  unsigned total_order() const noexcept { return static_cast<unsigned>((key_ >> 48U) & 0xFFU); }
  unsigned order(std::size_t direction) const noexcept {
    return static_cast<unsigned>((key_ >> shift(direction)) & 0xFFU);
  }
  std::vector<unsigned> multi_index(std::size_t dimension) const;

  JetVar raised(std::size_t direction) const;
  std::optional<JetVar> lowered(std::size_t direction) const noexcept;
  /// Same multi-index, different owner.
  JetVar with_owner(OwnerId owner) const noexcept;

  std::uint64_t key() const noexcept { return key_; }

  friend constexpr auto operator<=>(JetVar, JetVar) = default;

 private:
  explicit constexpr JetVar(std::uint64_t key) : key_(key) {}
  static constexpr std::uint64_t pack_owner(OwnerId owner) noexcept {
    return static_cast<std::uint64_t>(owner.value) << 56U;
  }
  static constexpr unsigned shift(std::size_t direction) noexcept {
    return 40U - 8U * static_cast<unsigned>(direction);
  }

  std::uint64_t key_ = 0;
};

}  // namespace varschouten
