#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "mlat/duality.hpp"

namespace mlat {

/// Congruences are stored as partitions of the lattice carrier.
using Congruence = EquivRelation;

inline constexpr std::size_t kCongruenceCap = 12;

inline Check is_compatible(const DistLattice& l, const std::vector<UnaryOp>& ops, const EquivRelation& p) {
  Check c;
  const std::size_t n = l.size();
  for (std::size_t a = 0; a < n && c.holds; ++a)
    bits::for_each(p.class_of(a), [&](std::size_t b) {
      if (!c.holds || b <= a) return;
      for (std::size_t x = 0; x < n; ++x) {
        if (!p.related(l.meet(a, x), l.meet(b, x)) || !p.related(l.join(a, x), l.join(b, x))) {
          c.fail({a, b, x}, l.name(a) + "~" + l.name(b) + " not preserved by " + l.name(x));
          return;
        }
      }
      for (std::size_t k = 0; k < ops.size(); ++k)
        if (!p.related(ops[k][a], ops[k][b])) {
          c.fail({a, b}, l.name(a) + "~" + l.name(b) + " not preserved by operator " + std::to_string(k));
          return;
        }
    });
  return c;
}

namespace detail {
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  EquivRelation partition() {
    std::vector<std::size_t> labels(parent.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = find(i);
    return EquivRelation::from_labels(labels);
  }
};

/// Least congruence relating a and b.
inline EquivRelation principal(const DistLattice& l, const std::vector<UnaryOp>& ops, std::size_t a, std::size_t b) {
  UnionFind uf(l.size());
  std::vector<std::pair<std::size_t, std::size_t>> work;
  auto merge = [&](std::size_t x, std::size_t y) {
    if (uf.unite(x, y)) work.emplace_back(x, y);
  };
  merge(a, b);
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    for (std::size_t c = 0; c < l.size(); ++c) {
      merge(l.meet(x, c), l.meet(y, c));
      merge(l.join(x, c), l.join(y, c));
    }
    for (auto& op : ops) merge(op[x], op[y]);
  }
  return uf.partition();
}

inline EquivRelation join(const EquivRelation& p, const EquivRelation& q) {
  UnionFind uf(p.size());
  for (auto* r : {&p, &q})
    for (Mask b : r->blocks()) {
      auto first = bits::lowest(b);
      bits::for_each(b, [&](std::size_t x) { uf.unite(first, x); });
    }
  return uf.partition();
}
}  // namespace detail

/// All partitions compatible with meet, join and the given operators. Every congruence is a join
/// of least congruences collapsing one covering pair; those joins are generated breadth-first.
inline std::vector<Congruence> compatible_partitions(const DistLattice& l, const std::vector<UnaryOp>& ops,
                                                     std::size_t cap = kCongruenceCap) {
  if (l.size() > cap)
    throw ResourceError("congruence search on " + std::to_string(l.size()) + " elements exceeds the cap of " +
                        std::to_string(cap));
  std::vector<EquivRelation> gens;
  for (auto [a, b] : l.order().covers()) gens.push_back(detail::principal(l, ops, a, b));
  std::set<std::vector<Mask>> seen;
  std::vector<Congruence> out{EquivRelation::identity(l.size())};
  seen.insert(out[0].blocks());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto& g : gens) {
      auto j = detail::join(out[i], g);
      if (seen.insert(j.blocks()).second) out.push_back(std::move(j));
    }
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.blocks() < y.blocks(); });
  return out;
}

inline std::vector<Congruence> brute_force_congruences(const MonadicLattice& m, std::size_t cap = kCongruenceCap) {
  return compatible_partitions(m.lattice, {m.nabla, m.delta}, cap);
}
inline std::vector<Congruence> lattice_congruences(const DistLattice& l, std::size_t cap = kCongruenceCap) {
  return compatible_partitions(l, {}, cap);
}

/// min E([y)) together with max E(y).
inline Mask saturation_step(const MqSpace& x, std::size_t y) {
  return x.poset.minimal(x.e(x.poset.up(y))) | x.poset.maximal(x.e_of(y));
}

inline bool is_id_saturated(const MqSpace& x, Mask y) {
  bool ok = true;
  bits::for_each(y, [&](std::size_t p) { ok = ok && bits::subset(saturation_step(x, p), y); });
  return ok;
}
inline bool is_id_saturated(const MqSpace& x, const ElementSet& y) {
  if (y.carrier() != x.size()) throw StructuralError("set does not live on the space's carrier");
  return is_id_saturated(x, y.mask());
}

inline bool is_i_saturated(const MqSpace& x, Mask y) {
  bool ok = true;
  bits::for_each(y, [&](std::size_t p) { ok = ok && bits::subset(x.poset.maximal(x.e_of(p)), y); });
  return ok;
}
inline bool is_i_saturated(const MqSpace& x, const ElementSet& y) {
  if (y.carrier() != x.size()) throw StructuralError("set does not live on the space's carrier");
  return is_i_saturated(x, y.mask());
}

/// Least id-saturated superset: the closure for the topology whose closed sets are the id-saturated sets.
inline Mask sat_closure(const MqSpace& x, Mask y) {
  for (;;) {
    Mask next = y;
    bits::for_each(y, [&](std::size_t p) { next |= saturation_step(x, p); });
    if (next == y) return y;
    y = next;
  }
}
inline ElementSet sat_closure(const MqSpace& x, const ElementSet& y) {
  if (y.carrier() != x.size()) throw StructuralError("set does not live on the space's carrier");
  return {x.size(), sat_closure(x, y.mask())};
}

struct SatFamily {
  std::vector<Mask> sets;  // ascending mask order, a linear extension of inclusion
};

inline constexpr std::size_t kFamilyCap = 20;

inline SatFamily id_saturated_family(const MqSpace& x, std::size_t cap = kFamilyCap) {
  if (x.size() > cap) throw ResourceError("saturated-set scan is capped at " + std::to_string(cap) + " points");
  SatFamily f;
  for (Mask y = 0; y <= x.all(); ++y) {
    if (is_id_saturated(x, y)) f.sets.push_back(y);
    if (y == x.all()) break;
  }
  return f;
}

inline SatFamily i_saturated_family(const MqSpace& x, std::size_t cap = kFamilyCap) {
  if (x.size() > cap) throw ResourceError("saturated-set scan is capped at " + std::to_string(cap) + " points");
  SatFamily f;
  for (Mask y = 0; y <= x.all(); ++y) {
    if (is_i_saturated(x, y)) f.sets.push_back(y);
    if (y == x.all()) break;
  }
  return f;
}

namespace detail {
/// Partition of L by the trace of σ(a) on Y, with σ(a) the prime filters containing a.
inline Congruence trace_partition(const DistLattice& l, const std::vector<Mask>& filters, Mask y) {
  std::vector<std::size_t> labels(l.size());
  for (std::size_t a = 0; a < l.size(); ++a) {
    Mask s = 0;
    for (std::size_t i = 0; i < filters.size(); ++i)
      if (bits::has(filters[i], a)) s |= bits::bit(i);
    labels[a] = static_cast<std::size_t>(s & y);
  }
  return EquivRelation::from_labels(labels);
}
}  // namespace detail

/// Y is a set of points of spectrum(m), indexed as in prime_filters(m.lattice).
inline Congruence theta(const MonadicLattice& m, const ElementSet& y) {
  auto x = spectrum(m);
  if (y.carrier() != x.size()) throw StructuralError("set does not live on the spectrum's carrier");
  if (!is_id_saturated(x, y.mask())) throw PreconditionError("set is not id-saturated");
  return detail::trace_partition(m.lattice, prime_filters(m.lattice), y.mask());
}

inline Congruence theta_q(const DistLattice& l, const UnaryOp& nabla, const ElementSet& y) {
  auto x = q_spectrum(l, nabla);
  if (y.carrier() != x.size()) throw StructuralError("set does not live on the spectrum's carrier");
  if (!is_i_saturated(x, y.mask())) throw PreconditionError("set is not i-saturated");
  return detail::trace_partition(l, prime_filters(l), y.mask());
}

/// Saturated sets of the spectrum side by side with their congruences.
struct CongruenceTable {
  MqSpace space;
  std::vector<Mask> sets;
  std::vector<Congruence> congruences;  // congruences[i] belongs to sets[i]
};

namespace detail {
inline void verify_correspondence(const CongruenceTable& t, std::vector<Congruence> oracle) {
  auto mine = t.congruences;
  auto by_blocks = [](auto& a, auto& b) { return a.blocks() < b.blocks(); };
  std::sort(mine.begin(), mine.end(), by_blocks);
  if (std::adjacent_find(mine.begin(), mine.end()) != mine.end())
    throw InvariantViolation("two saturated sets give the same congruence");
  std::sort(oracle.begin(), oracle.end(), by_blocks);
  if (mine != oracle)
    throw InvariantViolation("congruences from saturated sets (" + std::to_string(mine.size()) +
                             ") differ from the partition search (" + std::to_string(oracle.size()) + ")");
  for (std::size_t i = 0; i < t.sets.size(); ++i)
    for (std::size_t j = 0; j < t.sets.size(); ++j)
      if (bits::subset(t.sets[i], t.sets[j]) != t.congruences[j].refines(t.congruences[i]))
        throw InvariantViolation("set-to-congruence map is not order-reversing at " + t.space.set_name(t.sets[i]) +
                                 ", " + t.space.set_name(t.sets[j]));
}
}  // namespace detail

/// Congruences of m from the id-saturated sets of its spectrum, verified against the partition search.
inline CongruenceTable con_m_table(const MonadicLattice& m, std::size_t cap = kCongruenceCap) {
  if (m.size() > cap)
    throw ResourceError("congruence work on " + std::to_string(m.size()) + " elements exceeds the cap of " +
                        std::to_string(cap));
  CongruenceTable t{spectrum(m), {}, {}};
  auto filters = prime_filters(m.lattice);
  t.sets = id_saturated_family(t.space).sets;
  for (Mask y : t.sets) t.congruences.push_back(detail::trace_partition(m.lattice, filters, y));
  detail::verify_correspondence(t, brute_force_congruences(m, cap));
  return t;
}
inline std::vector<Congruence> con_m(const MonadicLattice& m, std::size_t cap = kCongruenceCap) {
  return con_m_table(m, cap).congruences;
}

/// Congruences of a lattice with quantifier from the i-saturated sets of its spectrum.
inline CongruenceTable q_congruence_table(const DistLattice& l, const UnaryOp& nabla, std::size_t cap = kCongruenceCap) {
  if (l.size() > cap)
    throw ResourceError("congruence work on " + std::to_string(l.size()) + " elements exceeds the cap of " +
                        std::to_string(cap));
  CongruenceTable t{q_spectrum(l, nabla), {}, {}};
  auto filters = prime_filters(l);
  t.sets = i_saturated_family(t.space).sets;
  for (Mask y : t.sets) t.congruences.push_back(detail::trace_partition(l, filters, y));
  detail::verify_correspondence(t, compatible_partitions(l, {nabla}, cap));
  return t;
}
inline std::vector<Congruence> q_congruences(const DistLattice& l, const UnaryOp& nabla, std::size_t cap = kCongruenceCap) {
  return q_congruence_table(l, nabla, cap).congruences;
}

}  // namespace mlat
