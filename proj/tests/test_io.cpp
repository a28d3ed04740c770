#include <catch_amalgamated.hpp>

#include <filesystem>

#include "mlat/duality.hpp"
#include "mlat/io.hpp"

using namespace mlat;

namespace {
const std::filesystem::path kSamples = MLAT_SAMPLES_DIR;

ParseError parse_error(const std::string& text) {
  try {
    to_space(std::get<SpaceDoc>(parse_document(text)));
  } catch (const ParseError& e) {
    return e;
  } catch (const std::bad_variant_access&) {
  }
  try {
    auto d = parse_document(text);
    if (auto* l = std::get_if<LatticeDoc>(&d)) {
      to_operators(*l);
      to_lattice(*l);
    }
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for " << text);
  return ParseError("", 0, "");
}

bool same_order(const FinitePoset& a, const FinitePoset& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.name(i) != b.name(i)) return false;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a.leq(i, j) != b.leq(i, j)) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("sample documents round-trip", "[io]") {
  std::size_t seen = 0;
  for (auto& entry : std::filesystem::directory_iterator(kSamples)) {
    if (entry.path().extension() != ".json") continue;
    auto d = load_document(entry.path());
    INFO(entry.path());
    REQUIRE(parse_document(serialize(d)) == d);
    ++seen;
  }
  CHECK(seen >= 6);
}

TEST_CASE("generated documents round-trip and rebuild the structure", "[io]") {
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      auto l = up_set_lattice(p);
      for (auto& m : enumerate_monadic(l)) {
        auto d = lattice_doc(m.lattice, m.operators());
        REQUIRE(parse_document(serialize(d)) == StructureDoc{d});
        REQUIRE(same_order(to_lattice(d).order(), m.lattice.order()));
        auto ops = to_operators(d);
        REQUIRE(ops);
        REQUIRE(ops->nabla == m.nabla);
        REQUIRE(ops->delta == m.delta);
      }
    });
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_space(n, [&](const FinitePoset& p, const EquivRelation& e) {
      MqSpace x{p, e};
      auto d = space_doc(x);
      REQUIRE(parse_document(serialize(d)) == StructureDoc{d});
      auto y = to_space(d);
      REQUIRE(same_order(y.poset, p));
      REQUIRE(y.equiv == e);
    });
}

TEST_CASE("plain lattices carry no operators", "[io]") {
  auto d = std::get<LatticeDoc>(parse_document(R"({"kind":"lattice","elements":["0","1"],"leq":[["0","1"]]})"));
  CHECK_FALSE(d.nabla);
  CHECK_FALSE(to_operators(d));
  CHECK(to_lattice(d).size() == 2);
  CHECK(serialize(d).find("nabla") == std::string::npos);
}

TEST_CASE("malformed text reports its line", "[io]") {
  auto e = parse_error("{\n  \"kind\": \"space\",\n  \"elements\": [\"p\" \"q\"]\n}");
  CHECK(e.line == 3);
  CHECK(e.field.empty());
}

TEST_CASE("semantic errors name the field and its line", "[io]") {
  auto missing = parse_error("{\n\"kind\": \"space\",\n\"elements\": [\"p\"]\n}");
  CHECK(missing.field == "classes");

  auto kind = parse_error("{\n\"kind\": \"graph\"\n}");
  CHECK(kind.field == "kind");
  CHECK(kind.line == 2);

  auto dup = parse_error("{\"kind\":\"space\",\n\"elements\":[\"p\",\"p\"],\"classes\":[[\"p\"]]}");
  CHECK(dup.field == "elements");
  CHECK(dup.line == 2);

  auto unknown = parse_error(R"({"kind":"space","elements":["p"],"leq":[["p","z"]],"classes":[["p"]]})");
  CHECK(unknown.field == "leq[0]");

  auto pair = parse_error(R"({"kind":"space","elements":["p"],"leq":[["p"]],"classes":[["p"]]})");
  CHECK(pair.field == "leq[0]");

  auto overlap = parse_error(R"({"kind":"space","elements":["p","q"],"classes":[["p","q"],["q"]]})");
  CHECK(overlap.field == "classes");
  auto uncovered = parse_error(R"({"kind":"space","elements":["p","q"],"classes":[["p"]]})");
  CHECK(uncovered.field == "classes");

  auto partial = parse_error(
      R"({"kind":"lattice","elements":["0","1"],"leq":[["0","1"]],"nabla":{"0":"0"},"delta":{"0":"0","1":"1"}})");
  CHECK(partial.field == "nabla");
  auto half = parse_error(R"({"kind":"lattice","elements":["0","1"],"leq":[["0","1"]],"nabla":{"0":"0","1":"1"}})");
  CHECK(half.field == "delta");
  auto value = parse_error(
      R"({"kind":"lattice","elements":["0","1"],"nabla":{"0":"0","1":"x"},"delta":{"0":"0","1":"1"}})");
  CHECK(value.field == "nabla.1");
  auto type = parse_error(R"({"kind":"lattice","elements":["0",1]})");
  CHECK(type.field == "elements[1]");
}

TEST_CASE("orders that are not lattices are structural errors", "[io]") {
  auto cycle = std::get<LatticeDoc>(
      parse_document(R"({"kind":"lattice","elements":["0","a","1"],"leq":[["0","a"],["a","1"],["1","a"]]})"));
  CHECK_THROWS_AS(to_lattice(cycle), OrderCycleError);
  auto no_bounds = std::get<LatticeDoc>(parse_document(R"({"kind":"lattice","elements":["a","b"]})"));
  CHECK_THROWS_AS(to_lattice(no_bounds), StructuralError);
}

TEST_CASE("maps load their ends relative to the map file", "[io]") {
  auto path = kSamples / "collapse_to_top.json";
  auto f = to_map(std::get<MapDoc>(load_document(path)), path);
  REQUIRE(f.map.size() == 2);
  CHECK(f.map == std::vector<std::size_t>{1, 1});
  CHECK(f.source->name(0) == "p");

  MapDoc partial{"chain2_space_discrete.json", "chain2_space_discrete.json", {{"p", "q"}}};
  CHECK_THROWS_AS(to_map(partial, path), ParseError);
  MapDoc wrong{"chain3_simple.json", "chain2_space_discrete.json", {}};
  CHECK_THROWS_AS(to_map(wrong, path), ParseError);
  CHECK_THROWS_AS(load_document(kSamples / "missing.json"), ParseError);
}

TEST_CASE("documents written to disk read back", "[io]") {
  auto tmp = std::filesystem::temp_directory_path() / "mlat_io_roundtrip.json";
  auto d = load_document(kSamples / "chain4_simple.json");
  write_document(tmp, d);
  CHECK(load_document(tmp) == d);
  std::filesystem::remove(tmp);
}
