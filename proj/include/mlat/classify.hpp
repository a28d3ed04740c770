#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlat/congruence.hpp"

namespace mlat {

enum class Verdict { Simple, SINotSimple, Neither };
enum class Branch { None, LastQuantifierImage, ExceptionalPoint };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Simple: return "Simple";
    case Verdict::SINotSimple: return "SINotSimple";
    case Verdict::Neither: return "Neither";
  }
  return "?";
}
inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::None: return "none";
    case Branch::LastQuantifierImage: return "last-quantifier-image";
    case Branch::ExceptionalPoint: return "exceptional-point";
  }
  return "?";
}

/// Verdict together with every independent derivation of it, computed on a monadic lattice
/// and its spectrum. The one-element lattice (empty spectrum) counts as neither simple nor
/// subdirectly irreducible in every derivation.
struct Classification {
  Verdict verdict = Verdict::Neither;
  Branch branch = Branch::None;
  Mask last_image = 0;           // last element of the quantifier image minus the top, when that branch fires
  std::size_t point = SIZE_MAX;  // exceptional point, when that branch fires
  std::size_t congruence_count = 0;
  MqSpace space;

  Verdict by_congruences = Verdict::Neither;
  bool simple_by_space = false;             // full E and every point extremal
  bool simple_by_algebra = false;           // simple pair and element separation
  bool si_by_branches = false;              // exactly one of the two branches
  bool si_by_max_closures = false;          // closures of max E(x), exactly one of two forms
  std::optional<bool> si_by_simple_pair;    // only when E is full
  bool branch_last_image = false;
  bool branch_exceptional_point = false;
  bool extremes_cover = false;              // X = min X ∪ max X
  bool separation_by_filters = false;       // a ≰ b separated by a maximal or minimal prime filter
  bool separation_by_elements = false;      // a ≰ b separated by some c or d
  bool pair_is_simple = false;
  bool equivalence_is_full = false;

  std::vector<std::string> disagreements;
  bool agree() const { return disagreements.empty(); }
};

namespace detail {
inline Verdict verdict_from_congruences(const std::vector<Congruence>& cons) {
  if (cons.size() <= 1) return Verdict::Neither;
  if (cons.size() == 2) return Verdict::Simple;
  std::vector<const Congruence*> atoms;
  for (auto& c : cons) {
    if (c.is_identity()) continue;
    bool minimal = true;
    for (auto& d : cons)
      if (!d.is_identity() && !(d == c) && d.refines(c)) minimal = false;
    if (minimal) atoms.push_back(&c);
  }
  return atoms.size() == 1 ? Verdict::SINotSimple : Verdict::Neither;
}

inline bool separation_by_elements(const DistLattice& l) {
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = 0; b < l.size(); ++b) {
      if (l.leq(a, b)) continue;
      bool found = false;
      for (std::size_t c = 0; c < l.size() && !found; ++c) {
        if (l.meet(a, c) != l.bottom() && l.meet(b, c) == l.bottom()) found = true;
        if (l.join(b, c) != l.top() && l.join(a, c) == l.top()) found = true;
      }
      if (!found) return false;
    }
  return true;
}

inline bool separation_by_filters(const DistLattice& l, const MqSpace& x, const std::vector<Mask>& filters) {
  Mask extremal = x.poset.maximal(x.all()) | x.poset.minimal(x.all());
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = 0; b < l.size(); ++b) {
      if (l.leq(a, b)) continue;
      bool found = false;
      bits::for_each(extremal, [&](std::size_t p) {
        if (bits::has(filters[p], a) && !bits::has(filters[p], b)) found = true;
      });
      if (!found) return false;
    }
  return true;
}
}  // namespace detail

/// Points x with E([x)) = X.
inline Mask full_reach_points(const MqSpace& x) {
  Mask v = 0;
  for (std::size_t p = 0; p < x.size(); ++p)
    if (x.e(x.poset.up(p)) == x.all()) v |= bits::bit(p);
  return v;
}

/// Inclusion-greatest member of { E(U) : U increasing } other than X, if one exists.
inline std::optional<Mask> last_quantifier_image(const MqSpace& x) {
  std::vector<Mask> imgs;
  for (Mask u : x.poset.all_up_sets()) {
    Mask e = x.e(u);
    if (e != x.all()) imgs.push_back(e);
  }
  for (Mask c : imgs) {
    bool top = true;
    for (Mask d : imgs) top = top && bits::subset(d, c);
    if (top) return c;
  }
  return std::nullopt;
}

/// Space-side derivations; `cons` are the congruences of the dual algebra.
inline Classification classify_with(const MonadicLattice& m, const MqSpace& x, const std::vector<Mask>& filters,
                                    const std::vector<Congruence>& cons) {
  Classification c;
  c.space = x;
  c.congruence_count = cons.size();
  c.by_congruences = detail::verdict_from_congruences(cons);
  const bool nontrivial = m.size() >= 2;
  const Mask all = x.all();
  const Mask mins = x.poset.minimal(all), maxs = x.poset.maximal(all);

  c.pair_is_simple = is_simple_pair(m);
  c.equivalence_is_full = x.equiv.is_full();
  c.extremes_cover = (mins | maxs) == all;
  c.separation_by_filters = detail::separation_by_filters(m.lattice, x, filters);
  c.separation_by_elements = detail::separation_by_elements(m.lattice);

  // Closure of min X ∪ max X here is the plain topological one, which is the identity on finite spaces.
  c.simple_by_space = nontrivial && c.equivalence_is_full && c.extremes_cover;
  c.simple_by_algebra = nontrivial && c.pair_is_simple && c.separation_by_elements;

  const Mask smin = sat_closure(x, mins);
  auto last = last_quantifier_image(x);
  c.branch_last_image = smin == all && last && *last != 0;
  std::size_t exceptional = SIZE_MAX;
  for (std::size_t p = 0; p < x.size() && exceptional == SIZE_MAX; ++p)
    if (!bits::has(smin, p) && (smin | bits::bit(p)) == all && x.e(x.poset.up(p)) == all) exceptional = p;
  c.branch_exceptional_point = exceptional != SIZE_MAX;
  c.si_by_branches = c.branch_last_image != c.branch_exceptional_point;

  Mask w = 0;
  bool form_b = false;
  for (std::size_t p = 0; p < x.size(); ++p) {
    Mask cl = sat_closure(x, x.poset.maximal(x.e_of(p)));
    if (cl == all) w |= bits::bit(p);
    if (!bits::has(cl, p) && (cl | bits::bit(p)) == all) form_b = true;
  }
  bool form_a = w != 0 && w != all;
  c.si_by_max_closures = form_a != form_b;

  if (c.equivalence_is_full) {
    bool found = false;
    for (std::size_t p = 0; p < x.size(); ++p)
      if (!bits::has(mins | maxs, p) && (mins | maxs | bits::bit(p)) == all) found = true;
    c.si_by_simple_pair = found;
  }

  c.verdict = c.by_congruences;
  if (c.verdict == Verdict::SINotSimple) {
    if (c.branch_last_image && !c.branch_exceptional_point) {
      c.branch = Branch::LastQuantifierImage;
      c.last_image = *last;
    } else if (c.branch_exceptional_point && !c.branch_last_image) {
      c.branch = Branch::ExceptionalPoint;
      c.point = exceptional;
    }
  }

  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) c.disagreements.push_back(what);
  };
  const bool simple = c.by_congruences == Verdict::Simple;
  const bool si = c.by_congruences == Verdict::SINotSimple;
  expect(c.simple_by_space == simple, "space criterion for simplicity disagrees with the congruence count");
  expect(c.simple_by_algebra == simple, "element-separation criterion for simplicity disagrees with the congruence count");
  expect(c.si_by_branches == si, "two-branch criterion disagrees with the monolith check");
  expect(c.si_by_max_closures == si, "max-closure criterion disagrees with the monolith check");
  if (c.si_by_simple_pair) expect(*c.si_by_simple_pair == si, "simple-pair criterion disagrees with the monolith check");
  expect(c.extremes_cover == c.separation_by_filters && c.separation_by_filters == c.separation_by_elements,
         "the three separation conditions disagree");
  if (nontrivial) expect(c.pair_is_simple == c.equivalence_is_full, "simple pair does not match full equivalence");
  return c;
}

/// All derivations without throwing on disagreement.
inline Classification evaluate_classification(const MonadicLattice& m, std::size_t cap = kCongruenceCap) {
  auto x = spectrum(m);
  return classify_with(m, x, prime_filters(m.lattice), brute_force_congruences(m, cap));
}

inline Classification evaluate_classification(const MqSpace& x, std::size_t cap = kCongruenceCap) {
  auto m = dual_algebra(x);
  // Points of x correspond to the prime filters { U : p ∈ U } of the dual algebra.
  auto sets = x.poset.all_up_sets();
  std::vector<Mask> filters(x.size(), 0);
  for (std::size_t p = 0; p < x.size(); ++p)
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (bits::has(sets[i], p)) filters[p] |= bits::bit(i);
  return classify_with(m, x, filters, brute_force_congruences(m, cap));
}

inline Classification throw_on_disagreement(Classification c) {
  if (!c.agree()) {
    std::string msg = "classification derivations disagree:";
    for (auto& d : c.disagreements) msg += " [" + d + "]";
    throw InvariantViolation(msg);
  }
  return c;
}

inline Classification classify(const MonadicLattice& m, std::size_t cap = kCongruenceCap) {
  return throw_on_disagreement(evaluate_classification(m, cap));
}
inline Classification classify(const MqSpace& x, std::size_t cap = kCongruenceCap) {
  return throw_on_disagreement(evaluate_classification(x, cap));
}

/// Re-checks the stored branch witness against the space.
inline bool verify_witness(const MqSpace& x, const Classification& c) {
  const Mask all = x.all();
  const Mask smin = sat_closure(x, x.poset.minimal(all));
  switch (c.branch) {
    case Branch::None: return c.verdict != Verdict::SINotSimple;
    case Branch::LastQuantifierImage: {
      if (smin != all || c.last_image == 0 || c.last_image == all) return false;
      bool is_image = false;
      for (Mask u : x.poset.all_up_sets()) {
        Mask e = x.e(u);
        if (e == c.last_image) is_image = true;
        if (e != all && !bits::subset(e, c.last_image)) return false;
      }
      return is_image;
    }
    case Branch::ExceptionalPoint: {
      auto p = c.point;
      return p < x.size() && !bits::has(smin, p) && (smin | bits::bit(p)) == all && x.e(x.poset.up(p)) == all;
    }
  }
  return false;
}

/// Diagnostics for one point.
struct MinReport {
  Mask max_closure = 0;    // closure of max E(x)
  Mask min_closure = 0;    // closure of min E([x))
  Mask joint_closure = 0;  // closure of both together
  bool closures_coincide = false;
  bool reaches_all = false;  // E([x)) = X
  Mask full_reach = 0;       // V = { y : E([y)) = X }
  bool in_full_reach = false;
  bool full_reach_decreasing = false;
  bool full_reach_e_closed = false;
};

inline MinReport min_check(const MqSpace& x, std::size_t p) {
  if (p >= x.size()) throw PreconditionError("point outside the space");
  MinReport r;
  Mask mx = x.poset.maximal(x.e_of(p));
  Mask mn = x.poset.minimal(x.e(x.poset.up(p)));
  r.max_closure = sat_closure(x, mx);
  r.min_closure = sat_closure(x, mn);
  r.joint_closure = sat_closure(x, mx | mn);
  r.closures_coincide = r.max_closure == r.min_closure && r.min_closure == r.joint_closure;
  r.reaches_all = x.e(x.poset.up(p)) == x.all();
  r.full_reach = full_reach_points(x);
  r.in_full_reach = bits::has(r.full_reach, p);
  r.full_reach_decreasing = x.poset.is_decreasing(r.full_reach);
  r.full_reach_e_closed = x.e(r.full_reach) == r.full_reach;
  return r;
}

}  // namespace mlat
