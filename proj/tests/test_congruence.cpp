#include <catch_amalgamated.hpp>

#include "mlat/classify.hpp"
#include "oracles.hpp"

using namespace mlat;

namespace {
MqSpace chain_space(std::size_t n, bool full) {
  std::vector<std::string> names{"p", "q", "r", "s"};
  names.resize(n);
  return {FinitePoset::chain(n, names), full ? EquivRelation::full(n) : EquivRelation::identity(n)};
}

MonadicLattice chain_with(std::size_t n, bool simple) {
  auto l = DistLattice::from_order(FinitePoset::chain(n));
  auto o = simple ? simple_pair(l) : identity_pair(l);
  return {l, o.nabla, o.delta};
}

std::vector<Congruence> oracle_congruences(const DistLattice& l, const std::vector<UnaryOp>& ops) {
  std::vector<Congruence> out;
  for (auto& p : oracle::congruences(l, ops)) out.push_back(EquivRelation::from_labels(p));
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.blocks() < b.blocks(); });
  return out;
}

std::vector<Congruence> sorted(std::vector<Congruence> v) {
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.blocks() < b.blocks(); });
  return v;
}

template <class F>
void each_mq_space(std::size_t upto, F&& f) {
  for (std::size_t n = 0; n <= upto; ++n)
    for_each_space(n, [&](const FinitePoset& p, const EquivRelation& e) {
      MqSpace x{p, e};
      if (is_mq_space(x)) f(x);
    });
}
}  // namespace

TEST_CASE("id-saturated sets on a full three-chain", "[congruence]") {
  auto x = chain_space(3, true);
  CHECK(is_id_saturated(x, Mask{0}));
  CHECK(is_id_saturated(x, x.all()));
  CHECK(is_id_saturated(x, Mask{0b101}));
  CHECK_FALSE(is_id_saturated(x, Mask{0b010}));
  CHECK(sat_closure(x, Mask{0b010}) == 0b111);
  CHECK(sat_closure(x, Mask{0b001}) == 0b101);
  CHECK(sat_closure(x, ElementSet::of(3, {0})) == ElementSet::of(3, {0, 2}));
  CHECK(id_saturated_family(x).sets == std::vector<Mask>{0, 0b101, 0b111});
}

TEST_CASE("i-saturated sets on a full two-chain", "[congruence]") {
  auto x = chain_space(2, true);
  CHECK(is_i_saturated(x, Mask{0}));
  CHECK(is_i_saturated(x, Mask{0b10}));
  CHECK_FALSE(is_i_saturated(x, Mask{0b01}));
  CHECK(id_saturated_family(x).sets == std::vector<Mask>{0, 0b11});
}

TEST_CASE("identity equivalence saturates every set on a two-chain", "[congruence]") {
  CHECK(id_saturated_family(chain_space(2, false)).sets == std::vector<Mask>{0, 1, 2, 3});
}

TEST_CASE("saturated families agree with the direct definitions", "[congruence]") {
  each_mq_space(4, [](const MqSpace& x) {
    oracle::Space o(x);
    std::vector<Mask> ids, is;
    for (Mask y = 0; y <= x.all(); ++y) {
      if (o.id_saturated(y)) ids.push_back(y);
      if (o.i_saturated(y)) is.push_back(y);
      if (y == x.all()) break;
    }
    REQUIRE(id_saturated_family(x).sets == ids);
    REQUIRE(i_saturated_family(x).sets == is);
  });
  CHECK_THROWS_AS(id_saturated_family(MqSpace{FinitePoset::antichain(21), EquivRelation::identity(21)}), ResourceError);
}

TEST_CASE("saturation closure is a closure operator", "[congruence]") {
  each_mq_space(4, [](const MqSpace& x) {
    oracle::Space o(x);
    for (Mask y = 0; y <= x.all(); ++y) {
      Mask c = sat_closure(x, y);
      REQUIRE(bits::subset(y, c));
      REQUIRE(sat_closure(x, c) == c);
      REQUIRE(c == o.saturated_hull(y));
      REQUIRE((c == y) == is_id_saturated(x, y));
      for (Mask z = y; z <= x.all(); ++z)
        if (bits::subset(y, z)) REQUIRE(bits::subset(c, sat_closure(x, z)));
      if (y == x.all()) break;
    }
  });
}

TEST_CASE("saturation in spaces with one equivalence class", "[congruence]") {
  each_mq_space(4, [](const MqSpace& x) {
    if (x.size() == 0 || !x.equiv.is_full()) return;
    Mask least = sat_closure(x, x.poset.minimal(x.all()) | x.poset.maximal(x.all()));
    for (Mask y : id_saturated_family(x).sets)
      if (y != 0) REQUIRE(bits::subset(least, y));
  });
}

TEST_CASE("equivalence classes are convex and reach a minimal point", "[congruence]") {
  each_mq_space(4, [](const MqSpace& x) {
    const auto& p = x.poset;
    for (std::size_t a = 0; a < x.size(); ++a) {
      for (std::size_t b = 0; b < x.size(); ++b)
        for (std::size_t c = 0; c < x.size(); ++c)
          if (p.leq(a, b) && p.leq(b, c) && x.equiv.related(a, c)) REQUIRE(x.equiv.related(a, b));
      Mask mins = p.minimal(x.e(p.up(a)));
      bool found = false;
      bits::for_each(mins, [&](std::size_t m) { found = found || x.e_of(m) == x.e_of(a); });
      REQUIRE(found);
    }
  });
}

TEST_CASE("id-saturation through the closures of a point", "[congruence]") {
  each_mq_space(4, [](const MqSpace& x) {
    for (Mask y = 0; y <= x.all(); ++y) {
      bool by_max = true, by_min = true;
      bits::for_each(y, [&](std::size_t a) {
        by_max = by_max && bits::subset(sat_closure(x, x.poset.maximal(x.e_of(a))), y);
        by_min = by_min && bits::subset(sat_closure(x, x.poset.minimal(x.e(x.poset.up(a)))), y);
      });
      REQUIRE(is_id_saturated(x, y) == by_max);
      REQUIRE(by_max == by_min);
      if (y == x.all()) break;
    }
  });
}

TEST_CASE("theta on a full three-chain spectrum", "[congruence]") {
  auto m = chain_with(4, true);
  auto x = spectrum(m);
  // filters [a) ⊃ [b) ⊃ [1) as points 0,1,2; point 2 is minimal
  REQUIRE(x.poset.leq(2, 1));
  REQUIRE(x.poset.leq(1, 0));
  CHECK(theta(m, ElementSet::full(3)) == EquivRelation::identity(4));
  CHECK(theta(m, ElementSet::empty(3)) == EquivRelation::full(4));
  auto ends = theta(m, ElementSet::of(3, {0, 2}));
  CHECK(ends.blocks() == std::vector<Mask>{0b0001, 0b0110, 0b1000});
  CHECK(is_compatible(m.lattice, {m.nabla, m.delta}, ends).holds);
  // the partition {0},{a},{b,1} is not compatible: △b = 0 but △1 = 1
  auto split = EquivRelation::from_blocks(4, std::vector<Mask>{0b0001, 0b0010, 0b1100});
  CHECK_FALSE(is_compatible(m.lattice, {m.nabla, m.delta}, split).holds);
  CHECK_THROWS_AS(theta(m, ElementSet::of(3, {1})), PreconditionError);
}

TEST_CASE("congruence counts of chains", "[congruence]") {
  CHECK(brute_force_congruences(chain_with(2, true)).size() == 2);
  CHECK(brute_force_congruences(chain_with(3, true)).size() == 2);
  CHECK(brute_force_congruences(chain_with(4, true)).size() == 3);
  auto t3 = con_m_table(chain_with(3, true));
  CHECK(t3.sets.size() == 2);
  auto t4 = con_m_table(chain_with(4, true));
  CHECK(t4.sets.size() == 3);
  CHECK(con_m(chain_with(3, false)).size() == 4);
  CHECK_THROWS_AS(con_m(MonadicLattice{up_set_lattice(FinitePoset::antichain(4)),
                                       identity_pair(up_set_lattice(FinitePoset::antichain(4))).nabla,
                                       identity_pair(up_set_lattice(FinitePoset::antichain(4))).delta}),
                  ResourceError);
}

TEST_CASE("quantifier congruences of chains", "[congruence]") {
  auto c2 = DistLattice::from_order(FinitePoset::chain(2));
  CHECK(q_congruences(c2, simple_pair(c2).nabla).size() == 2);
  auto c3 = DistLattice::from_order(FinitePoset::chain(3));
  auto t = q_congruence_table(c3, simple_pair(c3).nabla);
  CHECK(t.sets == std::vector<Mask>{0, 0b01, 0b11});  // point 0 is the top filter [a)
  CHECK(t.congruences.size() == 3);
  CHECK(q_congruences(c3, identity_pair(c3).nabla).size() == 4);
}

TEST_CASE("congruences agree with the partition scan", "[congruence]") {
  std::size_t checked = 0;
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      auto l = up_set_lattice(p);
      auto plain = lattice_congruences(l);
      REQUIRE(sorted(plain) == oracle_congruences(l, {}));
      for (auto& m : enumerate_monadic(l)) {
        auto mine = sorted(con_m(m));
        REQUIRE(mine == oracle_congruences(l, {m.nabla, m.delta}));
        if (m.nabla == identity_pair(l).nabla && m.delta == identity_pair(l).delta) REQUIRE(mine.size() == plain.size());
        ++checked;
      }
      for (auto& q : enumerate_quantifiers(l)) REQUIRE(sorted(q_congruences(l, q)) == oracle_congruences(l, {q}));
    });
  CHECK(checked > 20);
}

TEST_CASE("dual algebra has the simple pair exactly when one class covers the space", "[congruence]") {
  each_mq_space(4, [](const MqSpace& x) {
    if (x.size() == 0) return;
    REQUIRE(is_simple_pair(dual_algebra(x)) == x.equiv.is_full());
  });
}
