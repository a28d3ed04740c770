#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mlat/check.hpp"
#include "mlat/poset.hpp"

namespace mlat {

/// Unary operation on a lattice carrier, as a table of indices.
using UnaryOp = std::vector<std::size_t>;

/// Finite bounded lattice given by its order together with meet and join tables.
class DistLattice {
 public:
  DistLattice() = default;

  /// Computes meets and joins from the order. Throws StructuralError if some pair lacks one.
  static DistLattice from_order(FinitePoset order) {
    const std::size_t n = order.size();
    if (n == 0) throw StructuralError("a lattice needs at least one element");
    DistLattice l;
    l.meet_.assign(n * n, 0);
    l.join_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        auto glb = order.maximal(order.down(a) & order.down(b));
        auto lub = order.minimal(order.up(a) & order.up(b));
        if (bits::count(glb) != 1)
          throw StructuralError("elements " + order.name(a) + " and " + order.name(b) + " have no meet");
        if (bits::count(lub) != 1)
          throw StructuralError("elements " + order.name(a) + " and " + order.name(b) + " have no join");
        l.meet_[a * n + b] = bits::lowest(glb);
        l.join_[a * n + b] = bits::lowest(lub);
      }
    l.bottom_ = bits::lowest(order.minimal(order.all()));
    l.top_ = bits::lowest(order.maximal(order.all()));
    l.order_ = std::move(order);
    return l;
  }

  /// Tables are taken as given; use validate_lattice to check them.
  static DistLattice from_tables(FinitePoset order, std::vector<std::size_t> meet, std::vector<std::size_t> join,
                                 std::size_t bottom, std::size_t top) {
    const std::size_t n = order.size();
    if (meet.size() != n * n || join.size() != n * n) throw StructuralError("operation table has wrong size");
    DistLattice l;
    l.order_ = std::move(order);
    l.meet_ = std::move(meet);
    l.join_ = std::move(join);
    l.bottom_ = bottom;
    l.top_ = top;
    return l;
  }

  std::size_t size() const { return order_.size(); }
  const FinitePoset& order() const { return order_; }
  bool leq(std::size_t a, std::size_t b) const { return order_.leq(a, b); }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a * size() + b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a * size() + b]; }
  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }
  const std::string& name(std::size_t i) const { return order_.name(i); }
  std::optional<std::size_t> index_of(const std::string& s) const { return order_.index_of(s); }

  /// Join of a set of elements (bottom for the empty set).
  std::size_t join_of(Mask s) const {
    std::size_t r = bottom_;
    bits::for_each(s, [&](std::size_t x) { r = join(r, x); });
    return r;
  }
  std::size_t meet_of(Mask s) const {
    std::size_t r = top_;
    bits::for_each(s, [&](std::size_t x) { r = meet(r, x); });
    return r;
  }

  bool operator==(const DistLattice& o) const {
    return order_ == o.order_ && meet_ == o.meet_ && join_ == o.join_ && bottom_ == o.bottom_ && top_ == o.top_;
  }

 private:
  FinitePoset order_;
  std::vector<std::size_t> meet_, join_;
  std::size_t bottom_ = 0, top_ = 0;
};

struct LatticeReport {
  Check tables;        // entries and bounds are carrier indices
  Check bounds;        // bottom below and top above everything
  Check meet_inf;      // meet is the greatest lower bound
  Check join_sup;      // join is the least upper bound
  Check distributive;  // a ^ (b v c) = (a ^ b) v (a ^ c)
  bool sampled = false;

  bool ok() const { return tables.holds && bounds.holds && meet_inf.holds && join_sup.holds && distributive.holds; }
  std::vector<std::pair<std::string, const Check*>> entries() const {
    return {{"tables", &tables}, {"bounds", &bounds}, {"meet-inf", &meet_inf}, {"join-sup", &join_sup},
            {"distributive", &distributive}};
  }
};

struct ValidationLimits {
  std::size_t exhaustive_up_to = 20;  // larger lattices are checked on random triples
  std::size_t samples = 20000;
  std::uint64_t seed = 0x5eed;
};

inline LatticeReport validate_lattice(const DistLattice& l, const ValidationLimits& lim = {}) {
  LatticeReport r;
  const std::size_t n = l.size();
  auto nm = [&](std::size_t i) { return l.name(i); };
  if (l.bottom() >= n || l.top() >= n) {
    r.tables.fail({}, "bottom or top outside carrier");
    r.bounds = r.meet_inf = r.join_sup = r.distributive = r.tables;
    return r;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (l.meet(a, b) >= n || l.join(a, b) >= n) r.tables.fail({a, b}, "operation value outside carrier at (" + nm(a) + "," + nm(b) + ")");
  if (!r.tables.holds) {
    r.bounds = r.meet_inf = r.join_sup = r.distributive = r.tables;
    return r;
  }
  for (std::size_t a = 0; a < n; ++a) {
    r.bounds.require(l.leq(l.bottom(), a), {a}, "bottom not below " + nm(a));
    r.bounds.require(l.leq(a, l.top()), {a}, "top not above " + nm(a));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto m = l.meet(a, b), j = l.join(a, b);
      r.meet_inf.require(l.leq(m, a) && l.leq(m, b), {a, b}, nm(a) + "^" + nm(b) + " is not a lower bound");
      r.join_sup.require(l.leq(a, j) && l.leq(b, j), {a, b}, nm(a) + "v" + nm(b) + " is not an upper bound");
    }
  auto triple = [&](std::size_t a, std::size_t b, std::size_t c) {
    auto m = l.meet(a, b), j = l.join(a, b);
    if (l.leq(c, a) && l.leq(c, b))
      r.meet_inf.require(l.leq(c, m), {a, b, c}, nm(c) + " is a lower bound above " + nm(a) + "^" + nm(b));
    if (l.leq(a, c) && l.leq(b, c))
      r.join_sup.require(l.leq(j, c), {a, b, c}, nm(c) + " is an upper bound below " + nm(a) + "v" + nm(b));
    r.distributive.require(l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)), {a, b, c},
                           "distributivity fails at (" + nm(a) + "," + nm(b) + "," + nm(c) + ")");
  };
  if (n <= lim.exhaustive_up_to) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) triple(a, b, c);
  } else {
    r.sampled = true;
    std::mt19937_64 rng(lim.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < lim.samples; ++s) triple(pick(rng), pick(rng), pick(rng));
  }
  return r;
}

inline Mask join_irreducibles(const DistLattice& l) {
  Mask out = 0;
  for (std::size_t x = 0; x < l.size(); ++x) {
    if (x == l.bottom()) continue;
    bool irr = true;
    for (std::size_t a = 0; a < l.size() && irr; ++a)
      for (std::size_t b = 0; b < l.size() && irr; ++b)
        if (l.join(a, b) == x && a != x && b != x) irr = false;
    if (irr) out |= bits::bit(x);
  }
  return out;
}

inline Mask meet_irreducibles(const DistLattice& l) {
  Mask out = 0;
  for (std::size_t x = 0; x < l.size(); ++x) {
    if (x == l.top()) continue;
    bool irr = true;
    for (std::size_t a = 0; a < l.size() && irr; ++a)
      for (std::size_t b = 0; b < l.size() && irr; ++b)
        if (l.meet(a, b) == x && a != x && b != x) irr = false;
    if (irr) out |= bits::bit(x);
  }
  return out;
}

/// Prime filters by definition: proper, non-empty, increasing, closed under meets, and
/// a v b in F forces a or b in F. Candidates are the increasing subsets of the order.
inline std::vector<Mask> prime_filters_by_definition(const DistLattice& l) {
  std::vector<Mask> out;
  for (Mask f : l.order().all_up_sets()) {
    if (f == 0 || f == l.order().all()) continue;
    bool ok = true;
    for (std::size_t a = 0; a < l.size() && ok; ++a)
      for (std::size_t b = 0; b < l.size() && ok; ++b) {
        bool ina = bits::has(f, a), inb = bits::has(f, b);
        if (ina && inb && !bits::has(f, l.meet(a, b))) ok = false;
        if (bits::has(f, l.join(a, b)) && !ina && !inb) ok = false;
      }
    if (ok) out.push_back(f);
  }
  return out;
}

/// Join-irreducible elements listed in index order; each generates the prime filter at the same position
/// of prime_filters().
inline std::vector<std::size_t> prime_filter_generators(const DistLattice& l) {
  return bits::to_vector(join_irreducibles(l));
}

/// Prime filters, one per join-irreducible j (the principal filter of j), ordered by j.
/// Cross-checked against the definitional scan; disagreement means the input is not distributive
/// or there is a bug.
inline std::vector<Mask> prime_filters(const DistLattice& l) {
  std::vector<Mask> principal;
  for (auto j : prime_filter_generators(l)) principal.push_back(l.order().up(j));
  auto scanned = prime_filters_by_definition(l);
  auto a = principal, b = scanned;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw InvariantViolation("prime filters by definition differ from principal filters of join-irreducibles");
  return principal;
}

inline std::string set_name(const FinitePoset& p, Mask s) {
  std::string out = "{";
  bool first = true;
  bits::for_each(s, [&](std::size_t x) {
    if (!first) out += ",";
    out += p.name(x);
    first = false;
  });
  return out + "}";
}

/// Lattice of increasing subsets of a poset under inclusion. Element i is the i-th entry of
/// p.all_up_sets(); names use set notation.
inline DistLattice up_set_lattice(const FinitePoset& p) {
  auto sets = p.all_up_sets();
  const std::size_t n = sets.size();
  require_carrier(n);
  std::vector<std::string> names;
  for (Mask s : sets) names.push_back(set_name(p, s));
  auto index = [&](Mask s) {
    return static_cast<std::size_t>(std::lower_bound(sets.begin(), sets.end(), s) - sets.begin());
  };
  std::vector<Mask> up(n, 0);
  std::vector<std::size_t> meet(n * n), join(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (bits::subset(sets[i], sets[j])) up[i] |= bits::bit(j);
      meet[i * n + j] = index(sets[i] & sets[j]);
      join[i * n + j] = index(sets[i] | sets[j]);
    }
  auto order = FinitePoset::from_up_masks(std::move(names), std::move(up));
  return DistLattice::from_tables(std::move(order), std::move(meet), std::move(join), 0, n - 1);
}

/// Pair of operators on a lattice, quantifier first.
struct Operators {
  UnaryOp nabla;
  UnaryOp delta;
};

struct LatticeHom {
  std::shared_ptr<const DistLattice> source, target;
  std::vector<std::size_t> map;
  std::optional<Operators> source_ops, target_ops;
};

struct HomReport {
  Check total;
  Check bottom;
  Check top;
  Check meet;
  Check join;
  std::optional<Check> nabla, delta;  // present when both sides carry operators

  bool is_lattice_hom() const { return total.holds && bottom.holds && top.holds && meet.holds && join.holds; }
  bool is_monadic_hom() const { return is_lattice_hom() && nabla && nabla->holds && delta && delta->holds; }
  bool is_bijective = false;
};

inline HomReport check_hom(const LatticeHom& h) {
  HomReport r;
  const auto& s = *h.source;
  const auto& t = *h.target;
  if (h.map.size() != s.size()) {
    r.total.fail({}, "map has " + std::to_string(h.map.size()) + " entries for " + std::to_string(s.size()) + " elements");
  } else {
    for (std::size_t a = 0; a < s.size(); ++a)
      r.total.require(h.map[a] < t.size(), {a}, "image of " + s.name(a) + " outside target");
  }
  if (!r.total.holds) {
    r.bottom = r.top = r.meet = r.join = r.total;
    return r;
  }
  auto f = [&](std::size_t a) { return h.map[a]; };
  r.bottom.require(f(s.bottom()) == t.bottom(), {s.bottom()}, "bottom not preserved");
  r.top.require(f(s.top()) == t.top(), {s.top()}, "top not preserved");
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      r.meet.require(f(s.meet(a, b)) == t.meet(f(a), f(b)), {a, b}, "meet of " + s.name(a) + "," + s.name(b));
      r.join.require(f(s.join(a, b)) == t.join(f(a), f(b)), {a, b}, "join of " + s.name(a) + "," + s.name(b));
    }
  if (h.source_ops && h.target_ops) {
    r.nabla.emplace();
    r.delta.emplace();
    for (std::size_t a = 0; a < s.size(); ++a) {
      r.nabla->require(f(h.source_ops->nabla[a]) == h.target_ops->nabla[f(a)], {a}, "quantifier at " + s.name(a));
      r.delta->require(f(h.source_ops->delta[a]) == h.target_ops->delta[f(a)], {a}, "interior at " + s.name(a));
    }
  }
  Mask hit = 0;
  for (auto v : h.map) hit |= bits::bit(v);
  r.is_bijective = s.size() == t.size() && hit == bits::all(t.size());
  return r;
}

}  // namespace mlat
