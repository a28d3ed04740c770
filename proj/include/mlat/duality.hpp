#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "mlat/frames.hpp"
#include "mlat/monadic.hpp"

namespace mlat {

namespace detail {
inline std::size_t index_in(const std::vector<Mask>& sorted, Mask s) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), s);
  if (it == sorted.end() || *it != s) return SIZE_MAX;
  return static_cast<std::size_t>(it - sorted.begin());
}

inline void require_monadic(const MonadicLattice& m) {
  if (!validate_lattice(m.lattice).ok()) throw PreconditionError("not a bounded distributive lattice");
  if (!validate_monadic(m).ok()) throw PreconditionError("operators fail the monadic axioms");
}

/// Prime filters of L as subsets of L, in generator order, and the order between them.
inline MqSpace filter_space(const DistLattice& l, const std::vector<Mask>& filters, Mask range) {
  const std::size_t k = filters.size();
  std::vector<std::string> names;
  for (auto j : prime_filter_generators(l)) names.push_back("[" + l.name(j) + ")");
  std::vector<Mask> up(k, 0);
  std::vector<std::size_t> trace_label(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      if (bits::subset(filters[i], filters[j])) up[i] |= bits::bit(j);
    trace_label[i] = static_cast<std::size_t>(filters[i] & range);
  }
  return {FinitePoset::from_up_masks(std::move(names), std::move(up)), EquivRelation::from_labels(trace_label)};
}
}  // namespace detail

/// Prime filters ordered by inclusion, related when they agree on the range of the quantifier.
inline MqSpace q_spectrum(const DistLattice& l, const UnaryOp& nabla) {
  if (!validate_quantifier(l, nabla).quantifier_ok()) throw PreconditionError("not a quantifier");
  return detail::filter_space(l, prime_filters(l), range_of(nabla));
}

inline MqSpace spectrum(const MonadicLattice& m) {
  detail::require_monadic(m);
  auto x = detail::filter_space(m.lattice, prime_filters(m.lattice), range_of(m.nabla));
  auto r = evaluate_space(x.poset, x.equiv);
  if (!r.is_mq_space) throw InvariantViolation("spectrum of a monadic lattice is not an mq-space");
  return x;
}

/// Up-set lattice with ∇U = E(U) and △U = X \ (E(X \ U)]. Element i is X.poset.all_up_sets()[i].
inline MonadicLattice dual_algebra(const MqSpace& x) {
  if (!is_mq_space(x)) throw PreconditionError("space is not an mq-space");
  auto sets = x.poset.all_up_sets();
  MonadicLattice m{up_set_lattice(x.poset), UnaryOp(sets.size()), UnaryOp(sets.size())};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Mask nab = x.e(sets[i]);
    Mask del = x.all() & ~x.down(x.e(x.all() & ~sets[i]));
    m.nabla[i] = detail::index_in(sets, nab);
    m.delta[i] = detail::index_in(sets, del);
    if (m.nabla[i] == SIZE_MAX || m.delta[i] == SIZE_MAX)
      throw InvariantViolation("operator image of " + x.set_name(sets[i]) + " is not increasing");
  }
  auto rep = validate_monadic(m);
  if (!rep.ok()) {
    for (auto& [name, c] : rep.entries())
      if (!c->holds) throw InvariantViolation("dual algebra fails " + name + ": " + c->detail);
  }
  return m;
}

inline std::shared_ptr<const DistLattice> share(const DistLattice& l) { return std::make_shared<const DistLattice>(l); }

/// a ↦ { P : a ∈ P }, into the dual algebra of the spectrum; verified to be a monadic isomorphism.
inline LatticeHom sigma_iso(const MonadicLattice& m) {
  auto x = spectrum(m);
  auto d = dual_algebra(x);
  auto filters = prime_filters(m.lattice);
  auto sets = x.poset.all_up_sets();
  LatticeHom h{share(m.lattice), share(d.lattice), std::vector<std::size_t>(m.size()), m.operators(), d.operators()};
  for (std::size_t a = 0; a < m.size(); ++a) {
    Mask s = 0;
    for (std::size_t i = 0; i < filters.size(); ++i)
      if (bits::has(filters[i], a)) s |= bits::bit(i);
    h.map[a] = detail::index_in(sets, s);
    if (h.map[a] == SIZE_MAX) throw InvariantViolation("sigma(" + m.lattice.name(a) + ") is not increasing");
  }
  auto r = check_hom(h);
  if (!r.is_monadic_hom() || !r.is_bijective) throw InvariantViolation("sigma is not a monadic isomorphism");
  return h;
}

/// x ↦ { U ∈ D(X) : x ∈ U }, into the spectrum of the dual algebra; verified to be an
/// order isomorphism carrying E onto the trace relation.
inline SpaceMap epsilon_iso(const MqSpace& x) {
  auto d = dual_algebra(x);
  auto y = spectrum(d);
  auto sets = x.poset.all_up_sets();
  auto filters = prime_filters(d.lattice);
  SpaceMap f{std::make_shared<const MqSpace>(x), std::make_shared<const MqSpace>(y), std::vector<std::size_t>(x.size())};
  Mask hit = 0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    Mask s = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (bits::has(sets[i], p)) s |= bits::bit(i);
    auto it = std::find(filters.begin(), filters.end(), s);
    if (it == filters.end()) throw InvariantViolation("epsilon(" + x.name(p) + ") is not a prime filter");
    f.map[p] = static_cast<std::size_t>(it - filters.begin());
    hit |= bits::bit(f.map[p]);
  }
  if (y.size() != x.size() || hit != y.all()) throw InvariantViolation("epsilon is not bijective");
  for (std::size_t p = 0; p < x.size(); ++p)
    for (std::size_t q = 0; q < x.size(); ++q) {
      if (x.poset.leq(p, q) != y.poset.leq(f(p), f(q)))
        throw InvariantViolation("epsilon does not preserve and reflect the order at (" + x.name(p) + "," + x.name(q) + ")");
      if (x.equiv.related(p, q) != y.equiv.related(f(p), f(q)))
        throw InvariantViolation("epsilon does not match the equivalences at (" + x.name(p) + "," + x.name(q) + ")");
    }
  return f;
}

/// P ↦ h⁻¹(P), from the spectrum of the target to the spectrum of the source.
inline SpaceMap dual_hom(const LatticeHom& h) {
  if (!h.source_ops || !h.target_ops) throw PreconditionError("homomorphism carries no operators");
  auto r = check_hom(h);
  if (!r.is_monadic_hom()) throw PreconditionError("not a homomorphism of monadic lattices");
  MonadicLattice s{*h.source, h.source_ops->nabla, h.source_ops->delta};
  MonadicLattice t{*h.target, h.target_ops->nabla, h.target_ops->delta};
  auto xs = std::make_shared<const MqSpace>(spectrum(s));
  auto xt = std::make_shared<const MqSpace>(spectrum(t));
  auto fs = prime_filters(s.lattice);
  auto ft = prime_filters(t.lattice);
  SpaceMap f{xt, xs, std::vector<std::size_t>(ft.size())};
  for (std::size_t i = 0; i < ft.size(); ++i) {
    Mask pre = 0;
    for (std::size_t a = 0; a < s.size(); ++a)
      if (bits::has(ft[i], h.map[a])) pre |= bits::bit(a);
    auto it = std::find(fs.begin(), fs.end(), pre);
    if (it == fs.end()) throw InvariantViolation("preimage of " + xt->name(i) + " is not a prime filter");
    f.map[i] = static_cast<std::size_t>(it - fs.begin());
  }
  if (!evaluate_map(f, true).is_mq_function) throw InvariantViolation("dual of a monadic homomorphism is not an mq-function");
  return f;
}

/// U ↦ f⁻¹(U), from the dual algebra of the target to the dual algebra of the source.
inline LatticeHom dual_map(const SpaceMap& f) {
  if (!is_mq_space(*f.source) || !is_mq_space(*f.target)) throw PreconditionError("map ends must be mq-spaces");
  if (!evaluate_map(f, true).is_mq_function) throw PreconditionError("map is not an mq-function");
  auto d1 = dual_algebra(*f.source);
  auto d2 = dual_algebra(*f.target);
  auto s1 = f.source->poset.all_up_sets();
  auto s2 = f.target->poset.all_up_sets();
  LatticeHom h{share(d2.lattice), share(d1.lattice), std::vector<std::size_t>(s2.size()), d2.operators(), d1.operators()};
  for (std::size_t i = 0; i < s2.size(); ++i) {
    h.map[i] = detail::index_in(s1, f.preimage(s2[i]));
    if (h.map[i] == SIZE_MAX) throw InvariantViolation("preimage of an up-set is not increasing");
  }
  if (!check_hom(h).is_monadic_hom()) throw InvariantViolation("dual of an mq-function is not a monadic homomorphism");
  return h;
}

/// Completes a quantifier to a monadic structure: △ is transported from the dual algebra of
/// the quantifier spectrum back along σ.
inline MonadicLattice expand_quantifier(const DistLattice& l, const UnaryOp& nabla) {
  auto x = q_spectrum(l, nabla);
  auto d = dual_algebra(x);
  auto filters = prime_filters(l);
  auto sets = x.poset.all_up_sets();
  std::vector<std::size_t> sigma(l.size()), inverse(sets.size(), SIZE_MAX);
  for (std::size_t a = 0; a < l.size(); ++a) {
    Mask s = 0;
    for (std::size_t i = 0; i < filters.size(); ++i)
      if (bits::has(filters[i], a)) s |= bits::bit(i);
    sigma[a] = detail::index_in(sets, s);
    inverse.at(sigma[a]) = a;
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (inverse[i] == SIZE_MAX) throw InvariantViolation("sigma is not onto the up-set lattice");
    if (d.nabla[sigma[inverse[i]]] != sigma[nabla[inverse[i]]]) throw InvariantViolation("sigma does not carry the quantifier");
  }
  MonadicLattice m{l, nabla, UnaryOp(l.size())};
  for (std::size_t a = 0; a < l.size(); ++a) m.delta[a] = inverse[d.delta[sigma[a]]];
  return m;
}

}  // namespace mlat
