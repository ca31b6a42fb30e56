#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace modelim {

// Interned identifier. Equality and ordering are on the intern id, which is
// stable for the lifetime of the process; use name() when a lexical order is
// needed.
class Symbol {
public:
  Symbol() = default;

  static Symbol intern(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;  // 0 is the empty name
};

}  // namespace modelim

template <>
struct std::hash<modelim::Symbol> {
  std::size_t operator()(modelim::Symbol s) const noexcept { return s.id(); }
};
