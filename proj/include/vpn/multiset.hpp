#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>

namespace vpn {

/// Bag over T. Zero-multiplicity entries are never stored.
template <typename T>
class Multiset {
 public:
  using Count = std::uint32_t;
  using const_iterator = typename std::map<T, Count>::const_iterator;

  Multiset() = default;
  Multiset(std::initializer_list<T> items) {
    for (const auto& x : items) add(x);
  }

  void add(const T& x, Count n = 1) {
    if (n == 0) return;
    entries_[x] += n;
  }

  /// Removes n copies of x. Throws if fewer than n are present.
  void remove(const T& x, Count n = 1) {
    if (n == 0) return;
    auto it = entries_.find(x);
    if (it == entries_.end() || it->second < n) {
      throw std::logic_error("multiset underflow");
    }
    it->second -= n;
    if (it->second == 0) entries_.erase(it);
  }

  /// Sets the multiplicity of x, erasing the entry when n is zero.
  void set(const T& x, Count n) {
    if (n == 0) {
      entries_.erase(x);
    } else {
      entries_[x] = n;
    }
  }

  Count count(const T& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? 0 : it->second;
  }

  /// Bag inclusion: *this >= other.
  bool contains(const Multiset& other) const {
    for (const auto& [x, n] : other.entries_) {
      if (count(x) < n) return false;
    }
    return true;
  }

  Multiset& operator+=(const Multiset& other) {
    for (const auto& [x, n] : other.entries_) add(x, n);
    return *this;
  }
  Multiset& operator-=(const Multiset& other) {
    for (const auto& [x, n] : other.entries_) remove(x, n);
    return *this;
  }
  friend Multiset operator+(Multiset a, const Multiset& b) { return a += b; }
  friend Multiset operator-(Multiset a, const Multiset& b) { return a -= b; }

  /// Pointwise maximum; the set-like union used when identifying shared nodes.
  Multiset max_union(const Multiset& other) const {
    Multiset out = *this;
    for (const auto& [x, n] : other.entries_) {
      if (out.count(x) < n) out.set(x, n);
    }
    return out;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t distinct() const { return entries_.size(); }
  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [x, n] : entries_) s += n;
    return s;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend auto operator<=>(const Multiset& a, const Multiset& b) { return a.entries_ <=> b.entries_; }

 private:
  std::map<T, Count> entries_;
};

}  // namespace vpn
