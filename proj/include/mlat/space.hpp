#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mlat/poset.hpp"

namespace mlat {

/// Finite poset with an equivalence relation. Every subset is clopen, so only the order-theoretic
/// conditions carry content.
struct MqSpace {
  FinitePoset poset;
  EquivRelation equiv;

  std::size_t size() const { return poset.size(); }
  Mask all() const { return poset.all(); }
  Mask up(Mask s) const { return poset.up_closure(s); }
  Mask down(Mask s) const { return poset.down_closure(s); }
  /// E(S) = { y : (x,y) in E for some x in S }.
  Mask e(Mask s) const { return equiv.image(s); }
  Mask e_of(std::size_t x) const { return equiv.class_of(x); }
  const std::string& name(std::size_t x) const { return poset.name(x); }
  std::string set_name(Mask s) const {
    std::string out = "{";
    bool first = true;
    bits::for_each(s, [&](std::size_t x) {
      if (!first) out += ",";
      out += name(x);
      first = false;
    });
    return out + "}";
  }
};

inline MqSpace make_space(FinitePoset p, EquivRelation e) {
  if (p.size() != e.size()) throw StructuralError("order and equivalence live on different carriers");
  return {std::move(p), std::move(e)};
}

struct SpaceMap {
  std::shared_ptr<const MqSpace> source, target;
  std::vector<std::size_t> map;

  std::size_t operator()(std::size_t x) const { return map[x]; }
  Mask image(Mask s) const {
    Mask out = 0;
    bits::for_each(s, [&](std::size_t x) { out |= bits::bit(map[x]); });
    return out;
  }
  Mask preimage(Mask t) const {
    Mask out = 0;
    for (std::size_t x = 0; x < map.size(); ++x)
      if (bits::has(t, map[x])) out |= bits::bit(x);
    return out;
  }
};

}  // namespace mlat
