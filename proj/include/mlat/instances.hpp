#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "mlat/classify.hpp"

namespace mlat {

/// Counts for one named property over a run. Observations are tallied but never fail.
struct Tally {
  std::string name;
  bool observation = false;
  std::size_t instances = 0;
  std::size_t holds = 0;
  std::string first_failure;

  std::size_t failures() const { return observation ? 0 : instances - holds; }
};

class Suite {
 public:
  void record(const std::string& name, bool ok, const std::function<std::string()>& witness = {}) {
    add(name, false, ok, witness);
  }
  void observe(const std::string& name, bool value, const std::function<std::string()>& witness = {}) {
    add(name, true, value, witness);
  }
  /// Appends other's counts; first failures from `this` win, which keeps merges in index order deterministic.
  void merge(const Suite& other) {
    for (auto& t : other.tallies_) {
      auto& mine = slot(t.name, t.observation);
      mine.instances += t.instances;
      mine.holds += t.holds;
      if (mine.first_failure.empty()) mine.first_failure = t.first_failure;
    }
  }
  std::size_t falsifications() const {
    std::size_t n = 0;
    for (auto& t : tallies_) n += t.failures();
    return n;
  }
  const std::vector<Tally>& tallies() const { return tallies_; }
  const Tally* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &tallies_[it->second];
  }

 private:
  Tally& slot(const std::string& name, bool observation) {
    auto it = index_.find(name);
    if (it != index_.end()) return tallies_[it->second];
    index_.emplace(name, tallies_.size());
    tallies_.push_back({name, observation, 0, 0, {}});
    return tallies_.back();
  }
  void add(const std::string& name, bool observation, bool ok, const std::function<std::string()>& witness) {
    auto& t = slot(name, observation);
    ++t.instances;
    if (ok) ++t.holds;
    else if (t.first_failure.empty()) t.first_failure = witness ? witness() : name;
  }

  std::vector<Tally> tallies_;
  std::map<std::string, std::size_t> index_;
};

/// Human-readable description of a space for witness dumps.
inline std::string describe(const MqSpace& x) {
  std::string s = "points " + x.set_name(x.all()) + ", covers {";
  bool first = true;
  for (auto [a, b] : x.poset.covers()) {
    s += (first ? "" : ", ") + x.name(a) + "<" + x.name(b);
    first = false;
  }
  s += "}, classes {";
  first = true;
  for (Mask b : x.equiv.blocks()) {
    s += (first ? "" : ", ") + x.set_name(b);
    first = false;
  }
  return s + "}";
}

inline std::string describe(const MonadicLattice& m) {
  std::string s = "elements {";
  for (std::size_t a = 0; a < m.size(); ++a) s += (a ? "," : "") + m.lattice.name(a);
  s += "}, nabla {";
  for (std::size_t a = 0; a < m.size(); ++a) s += (a ? "," : "") + m.lattice.name(a) + "->" + m.lattice.name(m.nabla[a]);
  s += "}, delta {";
  for (std::size_t a = 0; a < m.size(); ++a) s += (a ? "," : "") + m.lattice.name(a) + "->" + m.lattice.name(m.delta[a]);
  return s + "}";
}

inline std::string describe(const SpaceMap& f) {
  std::string s = "map {";
  for (std::size_t a = 0; a < f.map.size(); ++a) s += (a ? ", " : "") + f.source->name(a) + "->" + f.target->name(f.map[a]);
  return s + "} from " + describe(*f.source) + " to " + describe(*f.target);
}

namespace detail {
template <class F>
bool no_throw(F&& f, std::string& why) {
  try {
    f();
    return true;
  } catch (const std::exception& e) {
    why = e.what();
    return false;
  }
}
}  // namespace detail

/// Congruence work in the space checks runs on dual algebras of up to 2^5 elements.
inline constexpr std::size_t kInstanceCongruenceCap = 64;

/// Every space-side property for one (poset, equivalence) pair.
inline void space_instances(Suite& s, const FinitePoset& p, const EquivRelation& e, const FaultInjection& fault = {},
                            bool classify_space = true) {
  MqSpace x{p, e};
  auto w = [&](const std::string& what) { return [&x, what] { return what + " on " + describe(x); }; };
  auto r = evaluate_space(p, e, fault);
  for (auto& c : r.cross_checks) s.record(c.name, c.check.holds, w(c.check.detail));
  s.record("q-space-satisfies-mq1", !r.e1.holds || r.mq1.holds, w("E1 holds but mq1 fails"));
  s.observe("paK-frame-coincides-with-mk-frame", r.is_paK_frame == r.is_mk_frame, w("mk-frame that is not a paK-frame"));
  if (!r.is_mq_space) return;

  const std::size_t n = x.size();
  const Mask all = x.all();
  const auto ups = p.all_up_sets();
  std::string why;
  s.record("dual-algebra-satisfies-axioms", detail::no_throw([&] { dual_algebra(x); }, why), w(why));
  s.record("epsilon-is-isomorphism", detail::no_throw([&] { epsilon_iso(x); }, why), w(why));

  std::vector<Mask> reach(n), cls(n);
  for (std::size_t a = 0; a < n; ++a) {
    reach[a] = x.e(p.up(a));
    cls[a] = x.e_of(a);
  }
  for (std::size_t a = 0; a < n; ++a) {
    s.record("reach-set-increasing", p.is_increasing(reach[a]), w("E([" + x.name(a) + ")) not increasing"));
    s.record("reach-set-id-saturated", is_id_saturated(x, reach[a]), w("E([" + x.name(a) + ")) not id-saturated"));
    bool convex = true;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (p.leq(a, b) && p.leq(b, c) && bits::has(cls[a], c) && !bits::has(cls[a], b)) convex = false;
    s.record("equivalence-classes-convex", convex, w("E(" + x.name(a) + ") not convex"));
    bool rep = false;
    bits::for_each(p.minimal(reach[a]), [&](std::size_t m) { rep = rep || cls[m] == cls[a]; });
    s.record("class-meets-minimal-reach", rep, w("no m in min E([" + x.name(a) + ")) with E(m) = E(" + x.name(a) + ")"));
    for (std::size_t z = 0; z < n; ++z) {
      if (bits::has(reach[a], z)) continue;
      bool sep = false;
      for (Mask u : ups)
        if (bits::has(x.e(u), a) && !bits::has(x.e(u), z)) sep = true;
      s.record("quantifier-image-separates-reach", sep, w(x.name(z) + " outside E([" + x.name(a) + ")) but not separated"));
    }
    auto mr = min_check(x, a);
    s.record("point-closures-coincide", mr.closures_coincide, w("closures at " + x.name(a) + " differ"));
    const Mask smin = sat_closure(x, p.minimal(all));
    bool i = mr.max_closure == all, ii = mr.min_closure == all, iii = reach[a] == all && smin == all;
    s.record("full-closure-conditions-agree", i == ii && ii == iii, w("conditions disagree at " + x.name(a)));
  }
  for (Mask u : ups) {
    Mask del = all & ~x.down(x.e(all & ~u));
    bool ok = true;
    for (std::size_t a = 0; a < n; ++a) ok = ok && (bits::has(del, a) == bits::subset(reach[a], u));
    s.record("interior-membership-by-reach", ok, w("at U = " + x.set_name(u)));
    s.record("quantifier-image-id-saturated", is_id_saturated(x, x.e(u)), w("E(U) not id-saturated at U = " + x.set_name(u)));
  }

  const Mask v = full_reach_points(x);
  s.record("full-reach-set-decreasing-and-closed", p.is_decreasing(v) && x.e(v) == v, w("V = " + x.set_name(v)));
  for (Mask u : ups) {
    Mask img = x.e(u);
    if (u != all && img != all)
      s.record("proper-quantifier-image-avoids-full-reach", (img & v) == 0, w("at U = " + x.set_name(u)));
  }

  const Mask extremes = p.minimal(all) | p.maximal(all);
  const bool full = n > 0 && x.equiv.is_full();
  Mask least_nonempty = all;
  for (Mask y = 0;; ++y) {
    Mask c = sat_closure(x, y);
    bool closure_ok = bits::subset(y, c) && sat_closure(x, c) == c && (c == y) == is_id_saturated(x, y);
    s.record("saturation-closure-is-closure-operator", closure_ok, w("at Y = " + x.set_name(y)));
    bool by_max = true, by_min = true;
    bits::for_each(y, [&](std::size_t a) {
      by_max = by_max && bits::subset(sat_closure(x, p.maximal(cls[a])), y);
      by_min = by_min && bits::subset(sat_closure(x, p.minimal(reach[a])), y);
    });
    bool sat = is_id_saturated(x, y);
    s.record("saturation-by-point-closures", sat == by_max && by_max == by_min, w("at Y = " + x.set_name(y)));
    // every subset of a finite space is topologically closed, so a saturated set is its own closure
    if (sat) s.record("saturated-set-equals-its-closure", true);
    if (sat) {
      bits::for_each(all, [&](std::size_t a) {
        if (bits::subset(p.maximal(cls[a]), y))
          s.record("saturated-set-absorbs-reach-minima", bits::subset(p.minimal(reach[a]), y),
                   w("Y = " + x.set_name(y) + ", x = " + x.name(a)));
      });
    }
    if (full && y != 0) {
      s.record("saturated-iff-contains-extremes", sat == bits::subset(extremes, y), w("at Y = " + x.set_name(y)));
      if (sat && bits::count(y) < bits::count(least_nonempty)) least_nonempty = y;
    }
    if (y == all) break;
  }
  if (n > 0) {
    auto d = dual_algebra(x);
    s.record("simple-quantifier-iff-full-equivalence", is_simple_pair(d) == full, w("mismatch"));
  }
  if (full) {
    s.record("extremes-id-saturated", is_id_saturated(x, extremes), w("min X ∪ max X not saturated"));
    s.record("least-nonempty-saturated-set", least_nonempty == sat_closure(x, extremes),
             w("least nonempty saturated set " + x.set_name(least_nonempty)));
  }

  if (!classify_space) return;
  auto c = evaluate_classification(x, kInstanceCongruenceCap);
  s.record("classification-routes-agree", c.agree(), [&] {
    std::string m = "on " + describe(x) + ":";
    for (auto& d : c.disagreements) m += " [" + d + "]";
    return m;
  });
  s.record("classification-witness-reverifies", verify_witness(x, c), w("stored branch witness"));
}

/// Every algebra-side property for one monadic lattice.
inline void lattice_instances(Suite& s, const MonadicLattice& m, std::size_t congruence_cap = kCongruenceCap) {
  auto w = [&](const std::string& what) { return [&m, what] { return what + " on " + describe(m); }; };
  std::string why;
  MqSpace x;
  bool spec_ok = detail::no_throw(
      [&] {
        x = spectrum(m);
        if (!check_space(x).is_mq_space) throw InvariantViolation("spectrum fails the frame conditions");
      },
      why);
  s.record("spectrum-is-mq-space", spec_ok, w(why));
  if (!spec_ok) return;
  s.record("sigma-is-isomorphism", detail::no_throw([&] { sigma_iso(m); }, why), w(why));

  auto filters = prime_filters(m.lattice);
  Mask range = range_of(m.delta);
  for (Mask t : filters)
    for (Mask q : filters) {
      if (!bits::subset(t & range, q)) continue;
      bool found = std::any_of(filters.begin(), filters.end(),
                               [&](Mask r) { return bits::subset(t, r) && (r & range) == (q & range); });
      s.record("filter-extends-along-interior-range", found, w("no extension of a filter pair"));
    }
  s.observe("quantifier-and-interior-ranges-coincide", range_of(m.nabla) == range, w("ranges differ"));

  if (m.size() <= congruence_cap) {
    s.record("saturated-sets-match-congruences", detail::no_throw([&] { con_m_table(m, congruence_cap); }, why), w(why));
    s.record("i-saturated-sets-match-quantifier-congruences",
             detail::no_throw([&] { q_congruence_table(m.lattice, m.nabla, congruence_cap); }, why), w(why));
    auto id = identity_pair(m.lattice);
    if (m.nabla == id.nabla && m.delta == id.delta)
      s.record("identity-operators-add-no-congruences",
               con_m(m, congruence_cap).size() == lattice_congruences(m.lattice, congruence_cap).size(), w("count differs"));
    auto c = evaluate_classification(m, congruence_cap);
    s.record("classification-routes-agree", c.agree(), [&] {
      std::string msg = "on " + describe(m) + ":";
      for (auto& d : c.disagreements) msg += " [" + d + "]";
      return msg;
    });
    s.record("classification-witness-reverifies", verify_witness(c.space, c), w("stored branch witness"));
  }
}

/// Map-side properties for one function between two mq-spaces.
inline void map_instances(Suite& s, const SpaceMap& f) {
  auto w = [&](const std::string& what) { return [&f, what] { return what + " for " + describe(f); }; };
  auto r = evaluate_map(f, true);
  for (auto& c : r.cross_checks) s.record(c.name, c.check.holds, w(c.name));
  s.observe("printed-mkf3-agrees-with-mkf3", r.mkf3_as_printed.holds == r.mkf3.holds, w("printed form differs"));
  s.observe("paK-function-coincides-with-mk-function", r.is_paK_function == r.is_mk_function, w("mk but not paK"));

  std::string why;
  if (r.is_mq_function) s.record("dual-map-is-monadic-hom", detail::no_throw([&] { dual_map(f); }, why), w(why));

  // q-isomorphisms: bijective q-functions reflecting the order whose inverse is a q-function
  const auto& x1 = *f.source;
  const auto& x2 = *f.target;
  if (!r.is_q_function || x1.size() != x2.size() || f.image(x1.all()) != x2.all()) return;
  std::vector<std::size_t> inv(x2.size());
  for (std::size_t a = 0; a < x1.size(); ++a) inv[f.map[a]] = a;
  SpaceMap g{f.target, f.source, inv};
  if (!evaluate_map(g, true).is_q_function) return;
  bool reach_ok = true;
  for (std::size_t a = 0; a < x1.size(); ++a)
    reach_ok = reach_ok && x2.e(x2.poset.up(f(a))) == f.image(x1.e(x1.poset.up(a)));
  s.record("q-isomorphism-carries-reach-sets", reach_ok, w("E2([f(x))) != f(E1([x)))"));
  s.record("q-isomorphism-is-mq-function", r.is_mq_function, w("not an mq-function"));
}

struct VerifyOptions {
  std::size_t n = 3;
  std::size_t jobs = 1;
  FaultInjection fault;
  std::size_t space_cap = 5;
  std::size_t lattice_points = 4;  // monadic lattices on up-set lattices of posets with at most this many points
  std::size_t map_points = 3;
  std::size_t congruence_cap = kCongruenceCap;
};

/// Runs `work(i, suite)` for i in [0, count) on `jobs` threads and merges in index order.
inline Suite run_indexed(std::size_t count, std::size_t jobs, const std::function<void(std::size_t, Suite&)>& work) {
  std::vector<Suite> parts(count);
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) work(i, parts[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < count;) work(i, parts[i]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  Suite out;
  for (auto& p : parts) out.merge(p);
  return out;
}

/// Labelled posets on 0..n points, in size order.
inline std::vector<FinitePoset> posets_up_to(std::size_t n) {
  std::vector<FinitePoset> out;
  for (std::size_t k = 0; k <= n; ++k)
    for_each_labeled_poset(k, [&](const FinitePoset& p) { out.push_back(p); });
  return out;
}

inline std::vector<std::shared_ptr<const MqSpace>> mq_spaces_up_to(std::size_t n) {
  std::vector<std::shared_ptr<const MqSpace>> out;
  for (std::size_t k = 0; k <= n; ++k)
    for_each_space(k, [&](const FinitePoset& p, const EquivRelation& e) {
      MqSpace x{p, e};
      if (is_mq_space(x)) out.push_back(std::make_shared<const MqSpace>(std::move(x)));
    });
  return out;
}

struct VerifyResult {
  Suite spaces, lattices, maps;
  std::size_t space_count = 0, lattice_count = 0, map_count = 0;
  double space_seconds = 0, lattice_seconds = 0, map_seconds = 0;  // wall time per phase, not part of any report
  std::size_t falsifications() const {
    return spaces.falsifications() + lattices.falsifications() + maps.falsifications();
  }
};

/// The whole instance suite over the universe of size n.
inline VerifyResult run_verify(const VerifyOptions& o) {
  if (o.n > o.space_cap) throw ResourceError("verification is capped at " + std::to_string(o.space_cap) + " points");
  VerifyResult r;
  using clock = std::chrono::steady_clock;
  auto since = [](clock::time_point t) { return std::chrono::duration<double>(clock::now() - t).count(); };
  auto t0 = clock::now();
  auto posets = posets_up_to(o.n);
  std::vector<std::vector<EquivRelation>> parts(o.n + 1);
  for (std::size_t k = 0; k <= o.n; ++k) parts[k] = all_partitions(k);
  for (auto& p : posets) r.space_count += parts[p.size()].size();
  r.spaces = run_indexed(posets.size(), o.jobs, [&](std::size_t i, Suite& s) {
    for (auto& e : parts[posets[i].size()]) space_instances(s, posets[i], e, o.fault);
  });
  r.space_seconds = since(t0);

  t0 = clock::now();
  auto lposets = posets_up_to(std::min(o.n, o.lattice_points));
  std::vector<std::vector<MonadicLattice>> monadic(lposets.size());
  for (std::size_t i = 0; i < lposets.size(); ++i) {
    monadic[i] = enumerate_monadic(up_set_lattice(lposets[i]));
    r.lattice_count += monadic[i].size();
  }
  r.lattices = run_indexed(lposets.size(), o.jobs, [&](std::size_t i, Suite& s) {
    auto l = up_set_lattice(lposets[i]);
    for (auto& q : enumerate_quantifiers(l)) {
      std::string why;
      s.record("quantifier-extends-to-monadic-structure", detail::no_throw([&] { expand_quantifier(l, q); }, why),
               [why] { return why; });
    }
    for (auto& m : monadic[i]) lattice_instances(s, m, o.congruence_cap);
  });
  r.lattice_seconds = since(t0);

  t0 = clock::now();
  auto spaces = mq_spaces_up_to(std::min(o.n, o.map_points));
  r.maps = run_indexed(spaces.size(), o.jobs, [&](std::size_t i, Suite& s) {
    for (auto& t : spaces) for_each_map(spaces[i], t, [&](const SpaceMap& f) { map_instances(s, f); });
  });
  for (auto& a : spaces)
    for (auto& b : spaces) r.map_count += static_cast<std::size_t>(std::pow(double(b->size()), double(a->size())));
  r.map_seconds = since(t0);
  return r;
}

}  // namespace mlat
