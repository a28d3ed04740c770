#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mlat/distlat.hpp"

namespace mlat {

struct MonadicLattice {
  DistLattice lattice;
  UnaryOp nabla;
  UnaryOp delta;

  std::size_t size() const { return lattice.size(); }
  Operators operators() const { return {nabla, delta}; }
};

inline constexpr std::size_t kAxiomCount = 11;

/// Arity of the tuple quantified in each axiom M1..M11 (M1 and M6 are constants).
inline constexpr std::array<std::size_t, kAxiomCount> kAxiomArity = {0, 1, 2, 2, 1, 0, 1, 2, 1, 1, 1};

inline const std::array<std::string, kAxiomCount>& axiom_names() {
  static const std::array<std::string, kAxiomCount> names = {"M1", "M2", "M3", "M4", "M5", "M6",
                                                            "M7", "M8", "M9", "M10", "M11"};
  return names;
}

inline const std::array<std::string, kAxiomCount>& axiom_statements() {
  static const std::array<std::string, kAxiomCount> s = {
      "∇0 = 0",     "x ∧ ∇x = x",   "∇(x ∧ ∇y) = ∇x ∧ ∇y", "∇(x ∨ y) = ∇x ∨ ∇y", "∇∇x = ∇x", "△1 = 1",
      "x ∧ △x = △x", "△(x ∧ y) = △x ∧ △y", "△△x = △x", "∇△x = △x", "△∇x = ∇x"};
  return s;
}

/// Evaluates axiom k (0-based, so 0 is M1) at the tuple (x, y). Unused arguments are ignored.
inline bool axiom_holds_at(std::size_t k, const DistLattice& l, const UnaryOp& nab, const UnaryOp& del,
                           std::size_t x = 0, std::size_t y = 0) {
  switch (k) {
    case 0: return nab[l.bottom()] == l.bottom();
    case 1: return l.meet(x, nab[x]) == x;
    case 2: return nab[l.meet(x, nab[y])] == l.meet(nab[x], nab[y]);
    case 3: return nab[l.join(x, y)] == l.join(nab[x], nab[y]);
    case 4: return nab[nab[x]] == nab[x];
    case 5: return del[l.top()] == l.top();
    case 6: return l.meet(x, del[x]) == del[x];
    case 7: return del[l.meet(x, y)] == l.meet(del[x], del[y]);
    case 8: return del[del[x]] == del[x];
    case 9: return nab[del[x]] == del[x];
    case 10: return del[nab[x]] == nab[x];
  }
  throw PreconditionError("axiom index out of range");
}

struct AxiomReport {
  std::array<Check, kAxiomCount> axioms;
  std::array<bool, kAxiomCount> evaluated{};

  bool ok() const {
    for (std::size_t k = 0; k < kAxiomCount; ++k)
      if (evaluated[k] && !axioms[k].holds) return false;
    return true;
  }
  bool quantifier_ok() const {
    for (std::size_t k = 0; k < 5; ++k)
      if (!axioms[k].holds) return false;
    return true;
  }
  std::vector<std::pair<std::string, const Check*>> entries() const {
    std::vector<std::pair<std::string, const Check*>> out;
    for (std::size_t k = 0; k < kAxiomCount; ++k)
      if (evaluated[k]) out.emplace_back(axiom_names()[k], &axioms[k]);
    return out;
  }
};

inline void require_total(const DistLattice& l, const UnaryOp& op, const char* what) {
  if (op.size() != l.size()) throw PreconditionError(std::string(what) + " table does not cover the carrier");
  for (auto v : op)
    if (v >= l.size()) throw PreconditionError(std::string(what) + " table has a value outside the carrier");
}

namespace detail {
inline AxiomReport evaluate_axioms(const DistLattice& l, const UnaryOp& nab, const UnaryOp& del, std::size_t upto) {
  AxiomReport r;
  const std::size_t n = l.size();
  for (std::size_t k = 0; k < upto; ++k) {
    r.evaluated[k] = true;
    auto& c = r.axioms[k];
    auto failat = [&](std::vector<std::size_t> w) {
      std::string d = axiom_names()[k] + " fails";
      if (!w.empty()) {
        d += " at";
        for (auto x : w) d += " " + l.name(x);
      }
      c.fail(std::move(w), std::move(d));
    };
    switch (kAxiomArity[k]) {
      case 0:
        if (!axiom_holds_at(k, l, nab, del)) failat({});
        break;
      case 1:
        for (std::size_t x = 0; x < n && c.holds; ++x)
          if (!axiom_holds_at(k, l, nab, del, x)) failat({x});
        break;
      default:
        for (std::size_t x = 0; x < n && c.holds; ++x)
          for (std::size_t y = 0; y < n && c.holds; ++y)
            if (!axiom_holds_at(k, l, nab, del, x, y)) failat({x, y});
    }
  }
  return r;
}
}  // namespace detail

inline AxiomReport validate_monadic(const DistLattice& l, const UnaryOp& nab, const UnaryOp& del) {
  require_total(l, nab, "quantifier");
  require_total(l, del, "interior");
  return detail::evaluate_axioms(l, nab, del, kAxiomCount);
}
inline AxiomReport validate_monadic(const MonadicLattice& m) { return validate_monadic(m.lattice, m.nabla, m.delta); }

/// M1..M5 only.
inline AxiomReport validate_quantifier(const DistLattice& l, const UnaryOp& nab) {
  require_total(l, nab, "quantifier");
  return detail::evaluate_axioms(l, nab, UnaryOp(l.size(), 0), 5);
}

/// True iff the witness stored for axiom k really violates it.
inline bool witness_violates(std::size_t k, const DistLattice& l, const UnaryOp& nab, const UnaryOp& del,
                             const std::vector<std::size_t>& w) {
  if (w.size() != kAxiomArity[k]) return false;
  for (auto x : w)
    if (x >= l.size()) return false;
  return !axiom_holds_at(k, l, nab, del, w.size() > 0 ? w[0] : 0, w.size() > 1 ? w[1] : 0);
}

inline Operators simple_pair(const DistLattice& l) {
  if (l.size() < 2) throw DegenerateInput("the simple pair needs 0 != 1");
  Operators ops{UnaryOp(l.size(), l.top()), UnaryOp(l.size(), l.bottom())};
  ops.nabla[l.bottom()] = l.bottom();
  ops.delta[l.top()] = l.top();
  return ops;
}

inline Operators identity_pair(const DistLattice& l) {
  UnaryOp id(l.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  return {id, id};
}

/// Elementwise comparison with the prescription ∇0 = 0, ∇x = 1 otherwise; △1 = 1, △x = 0 otherwise.
/// The one-element lattice satisfies it vacuously.
inline bool is_simple_pair(const MonadicLattice& m) {
  const auto& l = m.lattice;
  for (std::size_t x = 0; x < l.size(); ++x) {
    if (m.nabla[x] != (x == l.bottom() ? l.bottom() : l.top())) return false;
    if (m.delta[x] != (x == l.top() ? l.top() : l.bottom())) return false;
  }
  return true;
}

namespace detail {
inline std::vector<std::size_t> by_height(const DistLattice& l, Mask s, bool descending) {
  auto v = bits::to_vector(s);
  std::stable_sort(v.begin(), v.end(), [&](auto a, auto b) {
    auto ha = bits::count(l.order().down(a)), hb = bits::count(l.order().down(b));
    return descending ? ha > hb : ha < hb;
  });
  return v;
}
}  // namespace detail

/// All quantifiers (M1..M5) on L. A join-preserving map with ∇0 = 0 is fixed by its values on
/// join-irreducibles; those are chosen monotonically and above their argument.
inline std::vector<UnaryOp> enumerate_quantifiers(const DistLattice& l) {
  const std::size_t n = l.size();
  auto ji = detail::by_height(l, join_irreducibles(l), false);
  std::vector<std::size_t> val(n, 0);
  std::vector<UnaryOp> out;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == ji.size()) {
      UnaryOp nab(n);
      for (std::size_t x = 0; x < n; ++x) {
        std::size_t v = l.bottom();
        for (auto j : ji)
          if (l.leq(j, x)) v = l.join(v, val[j]);
        nab[x] = v;
      }
      if (validate_quantifier(l, nab).quantifier_ok()) out.push_back(std::move(nab));
      return;
    }
    std::size_t j = ji[k];
    for (std::size_t v = 0; v < n; ++v) {
      if (!l.leq(j, v)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i)
        if (l.leq(ji[i], j) && !l.leq(val[ji[i]], v)) ok = false;
      if (!ok) continue;
      val[j] = v;
      rec(k + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

/// All interior operators (M6..M9) on L, dually from values on meet-irreducibles.
inline std::vector<UnaryOp> enumerate_interiors(const DistLattice& l) {
  const std::size_t n = l.size();
  auto mi = detail::by_height(l, meet_irreducibles(l), true);
  std::vector<std::size_t> val(n, 0);
  std::vector<UnaryOp> out;
  UnaryOp dummy(n, l.bottom());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == mi.size()) {
      UnaryOp del(n);
      for (std::size_t x = 0; x < n; ++x) {
        std::size_t v = l.top();
        for (auto m : mi)
          if (l.leq(x, m)) v = l.meet(v, val[m]);
        del[x] = v;
      }
      auto r = detail::evaluate_axioms(l, dummy, del, kAxiomCount);
      if (r.axioms[5].holds && r.axioms[6].holds && r.axioms[7].holds && r.axioms[8].holds)
        out.push_back(std::move(del));
      return;
    }
    std::size_t m = mi[k];
    for (std::size_t v = 0; v < n; ++v) {
      if (!l.leq(v, m)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i)
        if (l.leq(m, mi[i]) && !l.leq(v, val[mi[i]])) ok = false;
      if (!ok) continue;
      val[m] = v;
      rec(k + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Every (∇, △) pair on L passing M1..M11, ordered lexicographically by (∇, △) tables.
inline std::vector<MonadicLattice> enumerate_monadic(const DistLattice& l, std::size_t cap = 16) {
  if (l.size() > cap)
    throw ResourceError("lattice of " + std::to_string(l.size()) + " elements exceeds the enumeration cap of " +
                        std::to_string(cap));
  if (!validate_lattice(l).ok()) throw PreconditionError("input is not a bounded distributive lattice");
  auto qs = enumerate_quantifiers(l);
  auto is = enumerate_interiors(l);
  std::vector<MonadicLattice> out;
  for (auto& nab : qs)
    for (auto& del : is) {
      bool linked = true;
      for (std::size_t x = 0; x < l.size() && linked; ++x)
        linked = nab[del[x]] == del[x] && del[nab[x]] == nab[x];
      if (!linked) continue;
      if (validate_monadic(l, nab, del).ok()) out.push_back({l, nab, del});
    }
  return out;
}

inline Mask range_of(const UnaryOp& op) {
  Mask m = 0;
  for (auto v : op) m |= bits::bit(v);
  return m;
}

}  // namespace mlat
