#include "modelim/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace modelim {
namespace {

struct Interner {
  std::shared_mutex mutex;
  std::deque<std::string> names{std::string{}};
  std::unordered_map<std::string_view, std::uint32_t> ids{{std::string_view{}, 0}};
};

Interner& interner() {
  static Interner instance;
  return instance;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& in = interner();
  {
    std::shared_lock lock(in.mutex);
    if (auto it = in.ids.find(name); it != in.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(in.mutex);
  if (auto it = in.ids.find(name); it != in.ids.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(in.names.size());
  // deque keeps element addresses stable, so the view key stays valid
  const std::string& stored = in.names.emplace_back(name);
  in.ids.emplace(stored, id);
  return Symbol(id);
}

const std::string& Symbol::name() const {
  auto& in = interner();
  std::shared_lock lock(in.mutex);
  return in.names[id_];
}

}  // namespace modelim
