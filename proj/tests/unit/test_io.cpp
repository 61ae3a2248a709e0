#include <functional>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "random_inputs.hpp"
#include "ucover/io.hpp"

using namespace ucover;
using namespace ucover::testing;

namespace {

std::string hexagon_csv() {
  std::ostringstream out;
  out << "# six points on a cycle\n";
  for (const auto& row : cycle_distances(6)) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << "\n";
  }
  return out.str();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("distance CSV with radii") {
  const auto m = parse_distance_csv(hexagon_csv());
  CHECK(m.size() == 6);
  const FilteredSpace s = from_metric(m, parse_radii("2,1"));
  CHECK(s.num_scales() == 2);
  CHECK(s == hexagon());
}

TEST_CASE("malformed CSV is a parse error with a position") {
  CHECK(code_of([] { parse_distance_csv("0,1\n1,0,2\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_distance_csv("0,1,2\n1,0,2\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_distance_csv("0,x\nx,0\n"); }) == ErrorCode::ParseError);
  try {
    parse_distance_csv("0,1\n1,0\n\n2,2,2\n");
  } catch (const Error& e) {
    CHECK(e.index() == 4);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK(code_of([] { parse_radii("2,,1"); }) == ErrorCode::ParseError);
}

TEST_CASE("JSON syntax errors carry the byte offset") {
  try {
    parse_json("{\"points\": [1, 2,]}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.index() > 0);
  }
}

TEST_CASE("action spec from JSON") {
  const Json j = parse_json(R"({"space": {"distances": )" + Json(cycle_distances(6)).dump() +
                            R"(, "radii": [3, 1, 0]}, "generators": [[3, 4, 5, 0, 1, 2]]})");
  const ActionSpec a = action_from_json(j);
  CHECK(a.order() == 2);
  CHECK(a.space() == hexagon_ant());
  CHECK(a.element(1) == Permutation{3, 4, 5, 0, 1, 2});
}

TEST_CASE("explicit spaces accept names or indices") {
  const Json j = parse_json(R"({"points": ["a", "b", "c"], "scales": [[["a", "b"], [1, 2]], []]})");
  const FilteredSpace s = space_from_json(j);
  CHECK(s.size() == 3);
  CHECK(s.scale(1).contains(1, 2));
  CHECK(s.hausdorff());
  CHECK(code_of([] { space_from_json(parse_json(R"({"points": ["a"], "scales": [[["a", "z"]]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { space_from_json(parse_json(R"({"points": ["a", "b"], "scales": [[], [["a", "b"]]]})")); }) ==
        ErrorCode::NotNested);
}

TEST_CASE("canonical serialization round-trips") {
  Rng rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    const FilteredMap f = random_map(rng);
    const std::string text = canonical_dump(to_json(f));
    const FilteredMap back = map_from_json(parse_json(text));
    CHECK(back.source == f.source);
    CHECK(back.target == f.target);
    CHECK(back.assignment == f.assignment);
    CHECK(canonical_dump(to_json(back)) == text);
  }
  const TowerAb t = make_tower_ab({{1, {}}, {1, {}}}, {IntMatrix::from_rows({{2}})}, Stabilization::RepeatLast);
  const std::string text = canonical_dump(to_json(t));
  CHECK(canonical_dump(to_json(tower_ab_from_json(parse_json(text)))) == text);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("barcode of the hexagon") {
  CHECK(barcode_csv(hexagon()) == "scale,rank,torsion\n1,0,\n2,1,\n");
}

TEST_CASE("recorded counterexamples replay, tampered ones do not") {
  Rng rng(92);
  int seen = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const FilteredMap f = random_map(rng);
    const auto gen = check_generates(f);
    if (!gen.ok) {
      ++seen;
      CHECK(replay(parse_json(generation_counterexample(f, gen).dump())).confirmed);
    }
    const auto lift = check_chain_lifting(f);
    if (!lift.ok) {
      ++seen;
      Json doc = lifting_counterexample(f, lift);
      CHECK(replay(doc).confirmed);
      doc["scale"] = 1;
      doc["pair"] = Json{doc["pair"][0], doc["map"]["assignment"][doc["pair"][0].get<int>()]};
      CHECK_FALSE(replay(doc).confirmed);
    }
    for (auto mode : {UniquenessMode::Plain, UniquenessMode::Strong}) {
      const auto u = check_approx_uniqueness(f, mode);
      if (u.ok) continue;
      ++seen;
      Json doc = uniqueness_counterexample(f, u);
      CHECK(replay(doc).confirmed);
      doc["second"] = doc["first"];
      CHECK_FALSE(replay(doc).confirmed);
    }
  }
  CHECK(seen > 10);

  const ActionSpec rot = close_group(hexagon(), {{1, 2, 3, 4, 5, 0}});
  CHECK(replay(upd_counterexample(rot, 2, 1, 0)).confirmed);
  CHECK_FALSE(replay(upd_counterexample(rot, 2, 2, 0)).confirmed);
  CHECK(code_of([] { replay(Json{{"kind", "nonsense"}}); }) == ErrorCode::ParseError);
}

TEST_CASE("reports serialize deterministically") {
  const ActionSpec ant = close_group(hexagon_ant(), {{3, 4, 5, 0, 1, 2}});
  const std::string a = canonical_dump(to_json(action_tower_verify(ant)));
  const std::string b = canonical_dump(to_json(action_tower_verify(ant)));
  CHECK(a == b);
  CHECK(canonical_dump(to_json(diagnose_action(ant))) == canonical_dump(to_json(diagnose_action(ant))));
}
