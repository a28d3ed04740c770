#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mlat/check.hpp"
#include "mlat/space.hpp"

namespace mlat {

/// Deliberate faults for exercising the verification harness.
struct FaultInjection {
  bool swap_composition = false;  // evaluate the frame inclusion with the factors of each product swapped
};

/// Conditions on a (poset, equivalence) pair. Topological clauses are kept as vacuous entries.
struct FrameReport {
  Check nonempty;
  Check partial_order;
  Check equivalence;
  Check e1;  // E(U) increasing for every increasing U
  Check e2 = Check::finite_discrete();
  Check mq1;             // (x,y) in E, y <= z  =>  z in E([x))
  Check mq1_upper_form;  // [E(x)) within E([x))
  Check mq1_lower_form;  // E((x]) within (E(x)]
  Check mq2 = Check::finite_discrete();
  Check mk1;  // ≤∘E ⊆ E∘≤
  Check mk3 = Check::finite_discrete();
  Check mk4 = Check::finite_discrete();
  Check mk5 = Check::finite_discrete();
  Check k1_iii;              // R∘E ⊆ E∘R with R the order
  Check k2_order_quasi;      // R reflexive and transitive
  Check k2_composite_quasi;  // E∘R reflexive and transitive
  Check k2_stone = Check::finite_discrete();
  Check k2_closed_images = Check::finite_discrete();
  Check k2_clopen_preimages = Check::finite_discrete();
  Check k3 = Check::finite_discrete();

  bool is_q_space = false;
  bool is_mq_space = false;
  bool is_mk_frame = false;
  bool is_paK_frame = false;

  std::vector<NamedCheck> cross_checks;

  bool cross_checks_hold() const {
    for (auto& c : cross_checks)
      if (!c.check.holds) return false;
    return true;
  }
  std::vector<std::pair<std::string, const Check*>> entries() const {
    return {{"nonempty", &nonempty},
            {"partial-order", &partial_order},
            {"equivalence", &equivalence},
            {"E1", &e1},
            {"E2", &e2},
            {"mq1", &mq1},
            {"mq1-upper-form", &mq1_upper_form},
            {"mq1-lower-form", &mq1_lower_form},
            {"mq2", &mq2},
            {"mk1", &mk1},
            {"mk2", &partial_order},
            {"mk3", &mk3},
            {"mk4", &mk4},
            {"mk5", &mk5},
            {"k1(iii)", &k1_iii},
            {"k2-order-quasi-order", &k2_order_quasi},
            {"k2-composite-quasi-order", &k2_composite_quasi},
            {"k2-stone", &k2_stone},
            {"k2-closed-images", &k2_closed_images},
            {"k2-clopen-preimages", &k2_clopen_preimages},
            {"k3", &k3}};
  }
};

namespace detail {
inline Check relation_inclusion(const BinRelation& a, const BinRelation& b, const FinitePoset& p) {
  Check c;
  for (std::size_t x = 0; x < a.n && c.holds; ++x) {
    Mask extra = a.rows[x] & ~b.rows[x];
    if (extra) {
      auto y = bits::lowest(extra);
      c.fail({x, y}, "(" + p.name(x) + "," + p.name(y) + ") in the left product only");
    }
  }
  return c;
}

inline Check quasi_order(const BinRelation& r, const FinitePoset& p) {
  Check c;
  for (std::size_t x = 0; x < r.n && c.holds; ++x) {
    if (!r.contains(x, x)) c.fail({x}, "not reflexive at " + p.name(x));
    Mask reach = r.image(r.rows[x]) & ~r.rows[x];
    if (reach) c.fail({x, bits::lowest(reach)}, "not transitive from " + p.name(x));
  }
  return c;
}
}  // namespace detail

inline FrameReport evaluate_space(const FinitePoset& p, const EquivRelation& e, const FaultInjection& fault = {}) {
  if (p.size() != e.size()) throw PreconditionError("order and equivalence live on different carriers");
  const std::size_t n = p.size();
  MqSpace x{p, e};
  FrameReport r;
  r.nonempty.require(n > 0, {}, "empty carrier");

  auto leq = p.leq_relation();
  if (!leq.is_reflexive() || !leq.is_transitive() || !leq.is_antisymmetric()) r.partial_order.fail({}, "order is not a partial order");
  auto er = e.to_relation();
  if (!er.is_reflexive() || !er.is_symmetric() || !er.is_transitive()) r.equivalence.fail({}, "not an equivalence");

  for (Mask u : p.all_up_sets()) {
    Mask img = x.e(u);
    if (!p.is_increasing(img)) {
      r.e1.fail({static_cast<std::size_t>(u)}, "E(" + x.set_name(u) + ") = " + x.set_name(img) + " is not increasing");
      break;
    }
  }

  for (std::size_t a = 0; a < n && r.mq1.holds; ++a) {
    Mask reach = x.e(p.up(a));  // E([a))
    bits::for_each(x.e_of(a), [&](std::size_t b) {
      bits::for_each(p.up(b), [&](std::size_t c) {
        if (r.mq1.holds && !bits::has(reach, c))
          r.mq1.fail({a, b, c}, "(" + x.name(a) + "," + x.name(b) + ") in E and " + x.name(b) + " <= " + x.name(c) +
                                    " but no w >= " + x.name(a) + " is E-related to " + x.name(c));
      });
    });
  }
  for (std::size_t a = 0; a < n; ++a) {
    Mask lhs = x.up(x.e_of(a)), rhs = x.e(p.up(a));
    r.mq1_upper_form.require(bits::subset(lhs, rhs), {a}, "[E(" + x.name(a) + ")) not within E([" + x.name(a) + "))");
    Mask lhs2 = x.e(p.down(a)), rhs2 = x.down(x.e_of(a));
    r.mq1_lower_form.require(bits::subset(lhs2, rhs2), {a}, "E((" + x.name(a) + "]) not within (E(" + x.name(a) + ")]");
  }

  auto order_after_e = compose(leq, er);  // ≤∘E: y in [E(x))
  auto e_after_order = compose(er, leq);  // E∘≤: y in E([x))
  if (fault.swap_composition) std::swap(order_after_e, e_after_order);
  r.mk1 = detail::relation_inclusion(order_after_e, e_after_order, p);
  r.k1_iii = r.mk1;
  r.k2_order_quasi = detail::quasi_order(leq, p);
  r.k2_composite_quasi = detail::quasi_order(e_after_order, p);
  if (n == 0) {
    r.k2_order_quasi.fail({}, "empty carrier");
    r.k2_composite_quasi.fail({}, "empty carrier");
  }

  bool base = r.partial_order.holds && r.equivalence.holds;
  r.is_q_space = base && r.e1.holds && r.e2.holds;
  r.is_mq_space = r.is_q_space && r.mq1.holds && r.mq2.holds;
  r.is_mk_frame = base && r.nonempty.holds && r.mk1.holds && r.mk3.holds && r.mk4.holds && r.mk5.holds;
  r.is_paK_frame = base && r.nonempty.holds && r.k1_iii.holds && r.k2_order_quasi.holds &&
                   r.k2_composite_quasi.holds && r.k2_stone.holds && r.k2_closed_images.holds &&
                   r.k2_clopen_preimages.holds && r.k3.holds;

  auto cross = [&](const std::string& name, bool ok, const std::string& detail) {
    NamedCheck c{name, {}};
    if (!ok) c.check.fail({}, detail);
    r.cross_checks.push_back(std::move(c));
  };
  cross("mq1-forms-agree", r.mq1.holds == r.mq1_upper_form.holds && r.mq1.holds == r.mq1_lower_form.holds,
        "the three forms of mq1 disagree");
  if (n > 0)
    cross("mq-space-iff-mk-frame", r.is_mq_space == r.is_mk_frame,
          std::string("mq-space ") + (r.is_mq_space ? "holds" : "fails") + " but mk-frame " +
              (r.is_mk_frame ? "holds" : "fails"));
  cross("paK-frame-implies-mk-frame", !r.is_paK_frame || r.is_mk_frame, "paK-frame that is not an mk-frame");
  if (r.is_mk_frame) {
    bool same = true;
    for (std::size_t a = 0; a < n && same; ++a) {
      Mask induced = 0;
      for (std::size_t b = 0; b < n; ++b)
        if (e_after_order.contains(a, b) && e_after_order.contains(b, a)) induced |= bits::bit(b);
      same = induced == x.e_of(a);
    }
    cross("equivalence-recovered-from-composite", same, "E differs from the equivalence of the quasi-order E∘≤");
  }
  return r;
}

/// evaluate_space, throwing InvariantViolation when a cross-check fails.
inline FrameReport check_space(const FinitePoset& p, const EquivRelation& e, const FaultInjection& fault = {}) {
  auto r = evaluate_space(p, e, fault);
  for (auto& c : r.cross_checks)
    if (!c.check.holds) throw InvariantViolation(c.name + ": " + c.check.detail);
  return r;
}
inline FrameReport check_space(const MqSpace& x, const FaultInjection& fault = {}) { return check_space(x.poset, x.equiv, fault); }

inline bool is_mq_space(const MqSpace& x) { return evaluate_space(x.poset, x.equiv).is_mq_space; }

struct MapReport {
  Check total;
  Check monotone;
  Check continuous = Check::finite_discrete();
  Check q_definition;  // E1(f⁻¹(U)) = f⁻¹(E2(U)) for increasing U
  Check f1;            // E1-related points go to E2-related points
  Check f2;            // E2(f(x)) within (f(E1(x))]
  Check qf1;
  Check qf2;
  Check qf3;
  Check mqf1;
  Check mqf2;
  Check mqf3;
  Check mqf4;
  Check mkf1;
  Check mkf2;
  Check mkf3;             // E2([f(x))) within [f(E1([x))))
  Check mkf3_as_printed;  // E2([f(x))) within [f(E1(x))); diagnostic only
  Check kf1_order;        // [f(x)) = f([x))
  Check kf1_composite;    // E2([f(x))) = f(E1([x)))
  Check kf2;              // E2(f(x)) = (f(E1(x))]

  bool is_q_function = false;
  bool is_mq_function = false;
  bool mq_via_mqf3 = false;
  bool mq_via_mqf4 = false;
  bool is_mk_function = false;
  bool is_paK_function = false;

  std::vector<NamedCheck> cross_checks;

  std::vector<std::pair<std::string, const Check*>> entries() const {
    return {{"total", &total}, {"monotone", &monotone}, {"continuous", &continuous}, {"q-definition", &q_definition},
            {"f1", &f1},       {"f2", &f2},             {"qf1", &qf1},               {"qf2", &qf2},
            {"qf3", &qf3},     {"mqf1", &mqf1},         {"mqf2", &mqf2},             {"mqf3", &mqf3},
            {"mqf4", &mqf4},   {"mkf1", &mkf1},         {"mkf2", &mkf2},             {"mkf3", &mkf3},
            {"mkf3-as-printed", &mkf3_as_printed},      {"kf1-order", &kf1_order},   {"kf1-composite", &kf1_composite},
            {"kf2", &kf2}};
  }
};

/// Literal evaluation of every map condition. Cross-checks are recorded only when both ends
/// are mq-spaces (`ends_valid`) and the map is monotone.
inline MapReport evaluate_map(const SpaceMap& f, bool ends_valid) {
  MapReport r;
  const auto& x1 = *f.source;
  const auto& x2 = *f.target;
  const std::size_t n = x1.size();
  if (f.map.size() != n) {
    r.total.fail({}, "map has " + std::to_string(f.map.size()) + " entries for " + std::to_string(n) + " points");
  } else {
    for (std::size_t a = 0; a < n; ++a)
      r.total.require(f.map[a] < x2.size(), {a}, "image of " + x1.name(a) + " outside target");
  }
  if (!r.total.holds) {
    for (Check* c : {&r.monotone, &r.q_definition, &r.f1, &r.f2, &r.qf1, &r.qf2, &r.qf3, &r.mqf1, &r.mqf2, &r.mqf3,
                     &r.mqf4, &r.mkf1, &r.mkf2, &r.mkf3, &r.mkf3_as_printed, &r.kf1_order, &r.kf1_composite, &r.kf2})
      *c = r.total;
    return r;
  }
  auto nm1 = [&](std::size_t a) { return x1.name(a); };
  for (std::size_t a = 0; a < n; ++a)
    bits::for_each(x1.poset.up(a), [&](std::size_t b) {
      r.monotone.require(x2.poset.leq(f(a), f(b)), {a, b}, nm1(a) + " <= " + nm1(b) + " but images are not ordered");
    });

  const Mask all2 = x2.all();
  for (Mask u : x2.poset.all_up_sets()) {
    auto w = std::vector<std::size_t>{static_cast<std::size_t>(u)};
    auto un = x2.set_name(u);
    r.q_definition.require(x1.e(f.preimage(u)) == f.preimage(x2.e(u)), w, "E1(f⁻¹(U)) != f⁻¹(E2(U)) at U = " + un);
    Mask comp = all2 & ~u;
    Mask lhs = x1.down(x1.e(f.preimage(comp)));
    Mask rhs = f.preimage(x2.down(x2.e(comp)));
    r.qf1.require(bits::subset(lhs, rhs), w, "qf1 fails at V = " + un);
    r.mqf2.require(bits::subset(rhs, lhs), w, "mqf2 fails at V = " + un);
    r.mqf1.require(lhs == rhs, w, "mqf1 fails at V = " + un);
  }
  for (std::size_t a = 0; a < n; ++a) {
    auto w = std::vector<std::size_t>{a};
    auto an = nm1(a);
    bits::for_each(x1.e_of(a), [&](std::size_t b) {
      bool ok = x2.equiv.related(f(a), f(b));
      r.f1.require(ok, {a, b}, "(" + an + "," + nm1(b) + ") in E1 but images are not E2-related");
      r.mkf1.require(ok, {a, b}, "(" + an + "," + nm1(b) + ") in E1 but images are not E2-related");
    });
    Mask e2fx = x2.e_of(f(a));
    Mask lower = x2.down(f.image(x1.e_of(a)));  // (f(E1(x))]
    r.f2.require(bits::subset(e2fx, lower), w, "E2(f(" + an + ")) not within (f(E1(" + an + "))]");
    r.mkf2.require(bits::subset(e2fx, lower), w, "E2(f(" + an + ")) not within (f(E1(" + an + "))]");
    r.kf2.require(e2fx == lower, w, "E2(f(" + an + ")) != (f(E1(" + an + "))]");

    Mask reach2 = x2.e(x2.poset.up(f(a)));          // E2([f(x)))
    Mask fimg = f.image(x1.e(x1.poset.up(a)));      // f(E1([x)))
    Mask fimg_up = x2.up(fimg);                     // [f(E1([x))))
    Mask printed = x2.up(f.image(x1.e_of(a)));      // [f(E1(x)))
    r.qf2.require(bits::subset(fimg, reach2), w, "f(E1([" + an + "))) not within E2([f(" + an + ")))");
    r.qf3.require(bits::subset(fimg_up, reach2), w, "[f(E1([" + an + ")))) not within E2([f(" + an + ")))");
    r.mqf3.require(bits::subset(reach2, fimg_up), w, "E2([f(" + an + "))) not within [f(E1([" + an + "))))");
    r.mqf4.require(reach2 == fimg_up, w, "E2([f(" + an + "))) != [f(E1([" + an + "))))");
    r.mkf3.require(bits::subset(reach2, fimg_up), w, "E2([f(" + an + "))) not within [f(E1([" + an + "))))");
    r.mkf3_as_printed.require(bits::subset(reach2, printed), w, "E2([f(" + an + "))) not within [f(E1(" + an + ")))");
    r.kf1_order.require(x2.poset.up(f(a)) == f.image(x1.poset.up(a)), w, "[f(" + an + ")) != f([" + an + "))");
    r.kf1_composite.require(reach2 == fimg, w, "E2([f(" + an + "))) != f(E1([" + an + ")))");
  }

  const bool mono = r.monotone.holds && r.continuous.holds;
  r.is_q_function = mono && r.f1.holds && r.f2.holds;
  r.is_mq_function = r.is_q_function && r.mqf1.holds;
  r.mq_via_mqf3 = r.is_q_function && r.mqf3.holds;
  r.mq_via_mqf4 = r.is_q_function && r.mqf4.holds;
  r.is_mk_function = mono && r.mkf1.holds && r.mkf2.holds && r.mkf3.holds;
  r.is_paK_function = r.continuous.holds && r.kf1_order.holds && r.kf1_composite.holds && r.kf2.holds;

  if (ends_valid) {
    auto cross = [&](const std::string& name, bool ok) {
      NamedCheck c{name, {}};
      if (!ok) c.check.fail(f.map, name + " fails for this map");
      r.cross_checks.push_back(std::move(c));
    };
    cross("paK-function-implies-mk-function", !r.is_paK_function || r.is_mk_function);
    cross("composite-strong-isotonicity-implies-f1", !r.kf1_composite.holds || r.f1.holds);
    if (mono) {
      cross("q-definition-iff-f1-and-f2", r.q_definition.holds == (r.f1.holds && r.f2.holds));
      cross("q-function-satisfies-qf1", !r.q_definition.holds || r.qf1.holds);
      cross("qf1-qf2-qf3-agree", r.qf1.holds == r.qf2.holds && r.qf2.holds == r.qf3.holds);
      cross("mqf2-iff-mqf3", r.mqf2.holds == r.mqf3.holds);
      cross("mq-function-forms-agree", r.is_mq_function == r.mq_via_mqf3 && r.mq_via_mqf3 == r.mq_via_mqf4);
      cross("mq-function-iff-mk-function", r.is_mq_function == r.is_mk_function);
    }
  }
  return r;
}

inline MapReport check_map(const SpaceMap& f) {
  if (!is_mq_space(*f.source) || !is_mq_space(*f.target))
    throw PreconditionError("map ends must be valid mq-spaces");
  auto r = evaluate_map(f, true);
  for (auto& c : r.cross_checks)
    if (!c.check.holds) {
      std::string w;
      for (std::size_t a = 0; a < f.map.size(); ++a)
        w += (a ? ", " : "") + f.source->name(a) + "->" + f.target->name(f.map[a]);
      throw InvariantViolation(c.name + " for map {" + w + "}");
    }
  return r;
}

struct SpaceEntry {
  MqSpace space;
  FrameReport report;
};

/// Visits every labelled poset on n points paired with every partition, in a fixed order.
template <class F>
void for_each_space(std::size_t n, F&& f, std::size_t cap = 5) {
  if (n > cap) throw ResourceError("space enumeration is capped at " + std::to_string(cap) + " points");
  auto parts = all_partitions(n);
  for_each_labeled_poset(n, [&](const FinitePoset& p) {
    for (auto& e : parts) f(p, e);
  });
}

inline std::vector<SpaceEntry> enumerate_spaces(std::size_t n, std::size_t cap = 5, const FaultInjection& fault = {}) {
  std::vector<SpaceEntry> out;
  for_each_space(
      n, [&](const FinitePoset& p, const EquivRelation& e) { out.push_back({MqSpace{p, e}, check_space(p, e, fault)}); },
      cap);
  return out;
}

inline constexpr std::size_t kMapCap = 1000000;

template <class F>
void for_each_map(std::shared_ptr<const MqSpace> x1, std::shared_ptr<const MqSpace> x2, F&& f, std::size_t cap = kMapCap) {
  const std::size_t n = x1->size(), m = x2->size();
  double count = std::pow(static_cast<double>(m), static_cast<double>(n));
  if (count > static_cast<double>(cap))
    throw ResourceError("enumerating " + std::to_string(m) + "^" + std::to_string(n) + " maps exceeds the cap of " +
                        std::to_string(cap));
  if (m == 0 && n > 0) return;
  std::vector<std::size_t> map(n, 0);
  for (;;) {
    f(SpaceMap{x1, x2, map});
    std::size_t k = 0;
    while (k < n && map[k] + 1 == m) map[k++] = 0;
    if (k == n) return;
    ++map[k];
  }
}

/// All maps between two mq-spaces with their reports; cross-check failures throw.
inline std::vector<std::pair<SpaceMap, MapReport>> enumerate_maps(const MqSpace& a, const MqSpace& b, std::size_t cap = kMapCap) {
  if (!is_mq_space(a) || !is_mq_space(b)) throw PreconditionError("map ends must be valid mq-spaces");
  auto x1 = std::make_shared<const MqSpace>(a);
  auto x2 = std::make_shared<const MqSpace>(b);
  std::vector<std::pair<SpaceMap, MapReport>> out;
  for_each_map(
      x1, x2,
      [&](const SpaceMap& f) {
        auto r = evaluate_map(f, true);
        for (auto& c : r.cross_checks)
          if (!c.check.holds) throw InvariantViolation(c.name);
        out.emplace_back(f, std::move(r));
      },
      cap);
  return out;
}

}  // namespace mlat
