#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "varschouten/expr.hpp"

namespace varschouten {

namespace {

struct ArgTable {
  std::mutex mutex;
  std::unordered_multimap<std::size_t, ArgRef> nodes;
};

ArgTable& table() {
  static ArgTable instance;
  return instance;
}

}  // namespace

ArgRef intern(const Expression& argument) {
  const std::size_t h = argument.hash();
  auto& t = table();
  {
    std::lock_guard lock(t.mutex);
    auto [first, last] = t.nodes.equal_range(h);
    for (auto it = first; it != last; ++it)
      if (it->second->expr == argument) return it->second;
  }

  // jet_vars only touches already-interned nested arguments, so build outside the lock
  auto node = std::make_shared<InternedArg>(InternedArg{argument, h, jet_vars(argument)});

  std::lock_guard lock(t.mutex);
  auto [first, last] = t.nodes.equal_range(h);
  for (auto it = first; it != last; ++it)
    if (it->second->expr == argument) return it->second;
  ArgRef ref = std::move(node);
  t.nodes.emplace(h, ref);
  return ref;
}

}  // namespace varschouten
