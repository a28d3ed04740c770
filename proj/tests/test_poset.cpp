#include <catch_amalgamated.hpp>

#include "mlat/poset.hpp"
#include "oracles.hpp"

using namespace mlat;

namespace {
using Pairs = std::vector<std::pair<std::string, std::string>>;
}

TEST_CASE("order closure of generator pairs", "[poset]") {
  Pairs gens{{"a", "b"}, {"b", "c"}};
  auto p = FinitePoset::from_pairs({"a", "b", "c"}, gens);
  CHECK(p.leq(0, 2));
  CHECK(p.leq(1, 1));
  CHECK_FALSE(p.leq(2, 0));
  CHECK(p.covers().size() == 2);
}

TEST_CASE("cycle through distinct elements is rejected with the cycle", "[poset]") {
  Pairs gens{{"a", "b"}, {"b", "a"}};
  try {
    FinitePoset::from_pairs({"a", "b"}, gens);
    FAIL("accepted a cyclic order");
  } catch (const OrderCycleError& e) {
    CHECK(e.cycle == std::vector<std::string>{"a", "b", "a"});
  }
  Pairs longer{{"a", "b"}, {"b", "c"}, {"c", "a"}};
  CHECK_THROWS_AS(FinitePoset::from_pairs({"a", "b", "c"}, longer), OrderCycleError);
}

TEST_CASE("unknown names and duplicate names are structural errors", "[poset]") {
  Pairs gens{{"a", "z"}};
  CHECK_THROWS_AS(FinitePoset::from_pairs({"a", "b"}, gens), StructuralError);
  CHECK_THROWS_AS(FinitePoset::from_pairs({"a", "a"}, Pairs{}), StructuralError);
}

TEST_CASE("empty carrier is an admissible poset", "[poset]") {
  auto p = FinitePoset::from_pairs({}, Pairs{});
  CHECK(p.size() == 0);
  CHECK(p.all_up_sets() == std::vector<Mask>{0});
}

TEST_CASE("extremes of subsets", "[poset]") {
  // diamond 0 < a, b < 1
  Pairs gens{{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}};
  auto p = FinitePoset::from_pairs({"0", "a", "b", "1"}, gens);
  auto [mn, mx] = p.extremes(ElementSet::full(4));
  CHECK(mn == ElementSet::of(4, {0}));
  CHECK(mx == ElementSet::of(4, {3}));
  auto [mn2, mx2] = p.extremes(ElementSet::of(4, {1, 2}));
  CHECK(mn2 == ElementSet::of(4, {1, 2}));
  CHECK(mx2 == ElementSet::of(4, {1, 2}));
  CHECK(p.up_set(ElementSet::of(4, {1})) == ElementSet::of(4, {1, 3}));
  CHECK(p.down_set(ElementSet::of(4, {1})) == ElementSet::of(4, {0, 1}));
}

TEST_CASE("element sets refuse to mix carriers", "[poset]") {
  auto a = ElementSet::of(3, {0});
  auto b = ElementSet::of(4, {0});
  CHECK_THROWS_AS(a | b, StructuralError);
  CHECK_THROWS_AS(a.subset_of(b), StructuralError);
  auto p = FinitePoset::chain(3);
  CHECK_THROWS_AS(p.up_set(b), StructuralError);
}

TEST_CASE("up-sets agree with the subset scan", "[poset]") {
  for (std::size_t n = 0; n <= 4; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) { REQUIRE(p.all_up_sets() == oracle::up_sets(p)); });
  CHECK(FinitePoset::chain(3).all_up_sets().size() == 4);
  CHECK(FinitePoset::antichain(3).all_up_sets().size() == 8);
}

TEST_CASE("labelled poset counts match the relation scan", "[poset]") {
  std::vector<std::size_t> counts;
  for (std::size_t n = 0; n <= 5; ++n) counts.push_back(all_labeled_posets(n).size());
  CHECK(counts == std::vector<std::size_t>{1, 1, 3, 19, 219, 4231});
  for (std::size_t n = 0; n <= 4; ++n) CHECK(counts[n] == oracle::count_partial_orders(n));
}

TEST_CASE("partition enumeration gives Bell numbers of canonical partitions", "[poset]") {
  for (std::size_t n = 0; n <= 7; ++n) {
    auto parts = all_partitions(n);
    CHECK(parts.size() == oracle::bell(n));
    for (std::size_t i = 1; i < parts.size(); ++i) CHECK_FALSE(parts[i] == parts[i - 1]);
  }
}

TEST_CASE("equivalence relations", "[poset]") {
  std::vector<Mask> blocks{0b101, 0b010};
  auto e = EquivRelation::from_blocks(3, blocks);
  CHECK(e.related(0, 2));
  CHECK_FALSE(e.related(0, 1));
  CHECK(e.image(0b001) == 0b101);
  CHECK(EquivRelation::identity(3).refines(e));
  CHECK(e.refines(EquivRelation::full(3)));
  CHECK_FALSE(EquivRelation::full(3).refines(e));
  CHECK(EquivRelation::from_relation(e.to_relation()) == e);
  std::vector<Mask> overlap{0b011, 0b110};
  CHECK_THROWS_AS(EquivRelation::from_blocks(3, overlap), StructuralError);
  std::vector<Mask> gap{0b001};
  CHECK_THROWS_AS(EquivRelation::from_blocks(3, gap), StructuralError);
}

TEST_CASE("relational product applies the right factor first", "[poset]") {
  // p < q, r isolated; E = {{q,r},{p}}
  auto p = FinitePoset::from_up_masks({"p", "q", "r"}, {0b011, 0b010, 0b100});
  std::vector<Mask> blocks{0b001, 0b110};
  auto e = EquivRelation::from_blocks(3, blocks).to_relation();
  auto le = p.leq_relation();
  auto order_after_e = compose(le, e);  // y in [E(x))
  auto e_after_order = compose(e, le);  // y in E([x))
  CHECK(order_after_e.rows[0] == 0b011);
  CHECK(e_after_order.rows[0] == 0b111);
  CHECK(order_after_e.subset_of(e_after_order));
  CHECK_FALSE(e_after_order.subset_of(order_after_e));
}
