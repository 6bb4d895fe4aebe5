#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace vpn {

/// Interned name. Equality is identity of the interned string; ordering is
/// lexicographic on the name, so every ordered container iterates in a
/// stable, human-readable order regardless of interning order.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name);

  const std::string& name() const { return *name_; }
  bool valid() const { return name_ != nullptr; }

  friend bool operator==(Symbol a, Symbol b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
    if (a.name_ == b.name_) return std::strong_ordering::equal;
    if (!a.name_) return std::strong_ordering::less;
    if (!b.name_) return std::strong_ordering::greater;
    return *a.name_ <=> *b.name_;
  }

  std::size_t hash() const { return std::hash<const void*>{}(name_); }

 private:
  explicit Symbol(const std::string* name) : name_(name) {}
  const std::string* name_ = nullptr;
};

/// The distinguished constant for the ordinary (black) token.
Symbol epsilon();

inline Symbol operator""_sym(const char* s, std::size_t n) {
  return Symbol::intern(std::string_view(s, n));
}

}  // namespace vpn

template <>
struct std::hash<vpn::Symbol> {
  std::size_t operator()(vpn::Symbol s) const noexcept { return s.hash(); }
};
