#include <catch_amalgamated.hpp>

#include "mlat/duality.hpp"
#include "mlat/monadic.hpp"
#include "oracles.hpp"

using namespace mlat;

namespace {
DistLattice chain(std::size_t n) { return DistLattice::from_order(FinitePoset::chain(n)); }
}  // namespace

TEST_CASE("identity and simple pairs satisfy all eleven axioms", "[monadic]") {
  auto c3 = chain(3);
  auto id = identity_pair(c3);
  CHECK(validate_monadic(c3, id.nabla, id.delta).ok());
  auto s = simple_pair(c3);
  CHECK(s.nabla == UnaryOp{0, 2, 2});
  CHECK(s.delta == UnaryOp{0, 0, 2});
  CHECK(validate_monadic(c3, s.nabla, s.delta).ok());
  CHECK(is_simple_pair({c3, s.nabla, s.delta}));
  CHECK_FALSE(is_simple_pair({c3, id.nabla, id.delta}));
}

TEST_CASE("failed axiom carries a witness that re-verifies", "[monadic]") {
  auto c3 = chain(3);
  UnaryOp nab{0, 1, 2};
  UnaryOp del{0, 0, 2};
  auto r = validate_monadic(c3, nab, del);
  CHECK_FALSE(r.axioms[10].holds);
  CHECK(r.axioms[10].witness == std::vector<std::size_t>{1});
  for (std::size_t k = 0; k < kAxiomCount; ++k)
    if (!r.axioms[k].holds) CHECK(witness_violates(k, c3, nab, del, r.axioms[k].witness));
}

TEST_CASE("tables must be total", "[monadic]") {
  auto c3 = chain(3);
  CHECK_THROWS_AS(validate_monadic(c3, UnaryOp{0, 1}, UnaryOp{0, 1, 2}), PreconditionError);
  CHECK_THROWS_AS(validate_monadic(c3, UnaryOp{0, 1, 7}, UnaryOp{0, 1, 2}), PreconditionError);
}

TEST_CASE("simple pair prescription", "[monadic]") {
  auto c2 = chain(2);
  auto s2 = simple_pair(c2);
  CHECK(s2.nabla == UnaryOp{0, 1});
  CHECK(s2.delta == UnaryOp{0, 1});
  auto d = up_set_lattice(FinitePoset::antichain(2));
  auto sd = simple_pair(d);
  CHECK(sd.nabla == UnaryOp{0, 3, 3, 3});
  CHECK(sd.delta == UnaryOp{0, 0, 0, 3});
  CHECK_THROWS_AS(simple_pair(chain(1)), DegenerateInput);
}

TEST_CASE("enumeration matches the exhaustive table search", "[monadic]") {
  std::vector<DistLattice> lattices{chain(1), chain(2), chain(3), chain(4), up_set_lattice(FinitePoset::antichain(2))};
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      auto l = up_set_lattice(p);
      if (l.size() <= 4) lattices.push_back(l);
    });
  for (auto& l : lattices) {
    auto got = enumerate_monadic(l);
    std::vector<std::pair<UnaryOp, UnaryOp>> pairs;
    for (auto& m : got) pairs.emplace_back(m.nabla, m.delta);
    REQUIRE(pairs == oracle::monadic_pairs(l));
    auto qs = enumerate_quantifiers(l);
    auto expected = oracle::quantifiers(l);
    std::sort(qs.begin(), qs.end());
    std::sort(expected.begin(), expected.end());
    REQUIRE(qs == expected);
  }
  CHECK(enumerate_monadic(chain(1)).size() == 1);
  CHECK(enumerate_monadic(chain(2)).size() == 1);
}

TEST_CASE("enumeration contains the identity and simple pairs and respects the cap", "[monadic]") {
  auto c3 = chain(3);
  auto all = enumerate_monadic(c3);
  auto has = [&](const Operators& o) {
    return std::any_of(all.begin(), all.end(), [&](auto& m) { return m.nabla == o.nabla && m.delta == o.delta; });
  };
  CHECK(has(identity_pair(c3)));
  CHECK(has(simple_pair(c3)));
  CHECK_THROWS_AS(enumerate_monadic(up_set_lattice(FinitePoset::antichain(5))), ResourceError);
}

TEST_CASE("operator ranges and monotonicity on every enumerated structure", "[monadic]") {
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      auto l = up_set_lattice(p);
      for (auto& m : enumerate_monadic(l)) {
        Mask rn = range_of(m.nabla), rd = range_of(m.delta);
        REQUIRE(bits::has(rn, l.bottom()));
        REQUIRE(bits::has(rd, l.top()));
        bits::for_each(rn, [&](auto a) { bits::for_each(rn, [&](auto b) { REQUIRE(bits::has(rn, l.join(a, b))); }); });
        bits::for_each(rd, [&](auto a) { bits::for_each(rd, [&](auto b) { REQUIRE(bits::has(rd, l.meet(a, b))); }); });
        for (std::size_t x = 0; x < l.size(); ++x) {
          REQUIRE(m.nabla[m.delta[x]] == m.delta[x]);
          REQUIRE(m.delta[m.nabla[x]] == m.nabla[x]);
          for (std::size_t y = 0; y < l.size(); ++y)
            if (l.leq(x, y)) {
              REQUIRE(l.leq(m.nabla[x], m.nabla[y]));
              REQUIRE(l.leq(m.delta[x], m.delta[y]));
            }
        }
      }
    });
}

TEST_CASE("every quantifier extends to a monadic structure through its spectrum", "[monadic]") {
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      auto l = up_set_lattice(p);
      for (auto& q : enumerate_quantifiers(l)) {
        auto m = expand_quantifier(l, q);
        REQUIRE(validate_monadic(m).ok());
      }
    });
}
