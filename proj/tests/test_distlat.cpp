#include <catch_amalgamated.hpp>

#include "mlat/distlat.hpp"
#include "oracles.hpp"

using namespace mlat;

namespace {
using Pairs = std::vector<std::pair<std::string, std::string>>;

DistLattice chain3() {
  Pairs gens{{"0", "a"}, {"a", "1"}};
  return DistLattice::from_order(FinitePoset::from_pairs({"0", "a", "1"}, gens));
}
DistLattice diamond() {
  Pairs gens{{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}};
  return DistLattice::from_order(FinitePoset::from_pairs({"0", "a", "b", "1"}, gens));
}
}  // namespace

TEST_CASE("meets and joins come from the order", "[distlat]") {
  auto d = diamond();
  CHECK(d.meet(1, 2) == 0);
  CHECK(d.join(1, 2) == 3);
  CHECK(d.bottom() == 0);
  CHECK(d.top() == 3);
  CHECK(validate_lattice(d).ok());
  Pairs gens{{"a", "c"}, {"b", "c"}};
  CHECK_THROWS_AS(DistLattice::from_order(FinitePoset::from_pairs({"a", "b", "c"}, gens)), StructuralError);
}

TEST_CASE("non-distributive diamond is reported with a witness", "[distlat]") {
  Pairs gens{{"0", "a"}, {"0", "b"}, {"0", "c"}, {"a", "1"}, {"b", "1"}, {"c", "1"}};
  auto m3 = DistLattice::from_order(FinitePoset::from_pairs({"0", "a", "b", "c", "1"}, gens));
  auto r = validate_lattice(m3);
  CHECK(r.meet_inf.holds);
  CHECK(r.join_sup.holds);
  REQUIRE_FALSE(r.distributive.holds);
  auto& w = r.distributive.witness;
  REQUIRE(w.size() == 3);
  CHECK(m3.meet(w[0], m3.join(w[1], w[2])) != m3.join(m3.meet(w[0], w[1]), m3.meet(w[0], w[2])));
}

TEST_CASE("corrupted meet table is caught", "[distlat]") {
  auto c = chain3();
  std::vector<std::size_t> meet(9), join(9);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      meet[a * 3 + b] = c.meet(a, b);
      join[a * 3 + b] = c.join(a, b);
    }
  meet[1 * 3 + 2] = 2;  // a ∧ 1 := 1
  auto bad = DistLattice::from_tables(c.order(), meet, join, 0, 2);
  auto r = validate_lattice(bad);
  CHECK_FALSE(r.meet_inf.holds);
  CHECK(r.meet_inf.witness == std::vector<std::size_t>{1, 2});
}

TEST_CASE("large lattices are validated on samples", "[distlat]") {
  auto l = up_set_lattice(FinitePoset::antichain(5));
  CHECK(l.size() == 32);
  auto r = validate_lattice(l);
  CHECK(r.sampled);
  CHECK(r.ok());
}

TEST_CASE("join-irreducibles and prime filters", "[distlat]") {
  auto c = chain3();
  CHECK(join_irreducibles(c) == 0b110);
  CHECK(prime_filters(c) == std::vector<Mask>{0b110, 0b100});
  auto d = diamond();
  CHECK(join_irreducibles(d) == 0b0110);
  CHECK(prime_filters(d) == std::vector<Mask>{0b1010, 0b1100});
  auto two = DistLattice::from_order(FinitePoset::chain(2));
  CHECK(prime_filters(two) == std::vector<Mask>{0b10});
  auto one = DistLattice::from_order(FinitePoset::chain(1));
  CHECK(prime_filters(one).empty());
}

TEST_CASE("up-set lattices are distributive and recover the poset", "[distlat]") {
  for (std::size_t n = 0; n <= 4; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      auto l = up_set_lattice(p);
      REQUIRE(validate_lattice(l).ok());
      auto filters = prime_filters(l);
      REQUIRE(filters.size() == p.size());
      auto scanned = oracle::prime_filters(l);
      auto sorted = filters;
      std::sort(sorted.begin(), sorted.end());
      REQUIRE(sorted == scanned);
    });
  auto l = up_set_lattice(FinitePoset::chain(2, {"p", "q"}));
  CHECK(l.size() == 3);
  CHECK(l.name(0) == "{}");
  CHECK(l.name(1) == "{q}");
  CHECK(l.name(2) == "{p,q}");
  CHECK(up_set_lattice(FinitePoset::antichain(2)).size() == 4);
}

TEST_CASE("homomorphism checks", "[distlat]") {
  auto c3 = std::make_shared<const DistLattice>(chain3());
  auto c2 = std::make_shared<const DistLattice>(DistLattice::from_order(FinitePoset::chain(2)));
  auto id = check_hom({c3, c3, {0, 1, 2}, {}, {}});
  CHECK(id.is_lattice_hom());
  CHECK(id.is_bijective);
  auto collapse = check_hom({c3, c2, {0, 1, 1}, {}, {}});
  CHECK(collapse.is_lattice_hom());
  CHECK_FALSE(collapse.nabla.has_value());
  auto top = check_hom({c2, c2, {1, 1}, {}, {}});
  CHECK_FALSE(top.bottom.holds);
  CHECK(top.top.holds);
  CHECK(top.meet.holds);
  CHECK(top.join.holds);
  auto partial = check_hom({c3, c2, {0, 1}, {}, {}});
  CHECK_FALSE(partial.total.holds);
}
