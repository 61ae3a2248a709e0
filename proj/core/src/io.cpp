#include "ucover/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "ucover/rips.hpp"

namespace ucover {

namespace {

[[noreturn]] void parse_error(const std::string& message, int position = -1) {
  throw Error(ErrorCode::ParseError, message, position);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, const std::string& where) {
  double v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) parse_error(where + ": not a number: '" + field + "'");
  return v;
}

const Json& require(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) parse_error(what + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(where + ": " + e.what());
  }
}

/// A nested object or a path to a JSON file relative to `base`.
Json resolve(const Json& j, const std::filesystem::path& base) {
  if (j.is_string()) return read_json_file(base / j.get<std::string>());
  return j;
}

std::filesystem::path parent_of(const Json& j, const std::filesystem::path& base) {
  if (j.is_string()) return (base / j.get<std::string>()).parent_path();
  return base;
}

Point point_ref(const Json& j, const std::vector<std::string>& names, const std::string& where) {
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v < 0 || v >= static_cast<int>(names.size())) parse_error(where + ": point index out of range");
    return v;
  }
  if (j.is_string()) {
    const auto it = std::find(names.begin(), names.end(), j.get<std::string>());
    if (it == names.end()) parse_error(where + ": unknown point '" + j.get<std::string>() + "'");
    return static_cast<Point>(it - names.begin());
  }
  parse_error(where + ": a point is a name or an index");
}

}  // namespace

// ------------------------------------------------------------------ input

std::vector<std::vector<double>> parse_distance_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    std::istringstream fields(t);
    std::string field;
    int field_no = 0;
    while (std::getline(fields, field, ',')) {
      ++field_no;
      row.push_back(parse_number(trim(field), "line " + std::to_string(line_no) + ", field " + std::to_string(field_no)));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                      " fields, found " + std::to_string(row.size()),
                  line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_error("empty distance matrix");
  if (rows.size() != rows.front().size())
    parse_error("distance matrix has " + std::to_string(rows.size()) + " rows and " +
                std::to_string(rows.front().size()) + " columns");
  return rows;
}

std::vector<double> parse_radii(std::string_view text) {
  std::vector<double> out;
  std::istringstream in{std::string(text)};
  std::string field;
  int i = 0;
  while (std::getline(in, field, ',')) out.push_back(parse_number(trim(field), "radius " + std::to_string(++i)));
  if (out.empty()) parse_error("no radii given");
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(e.what(), static_cast<int>(e.byte));
  }
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return parse_json(read_text_file(path));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what(), e.index());
  }
}

FilteredSpace space_from_json(const Json& j, const std::filesystem::path& base) {
  if (!j.is_object()) parse_error("space: expected an object");
  if (j.contains("distances")) {
    const Json& d = j.at("distances");
    std::vector<std::vector<double>> m =
        d.is_string() ? parse_distance_csv(read_text_file(base / d.get<std::string>()))
                      : get_as<std::vector<std::vector<double>>>(d, "space.distances");
    const auto radii = get_as<std::vector<double>>(require(j, "radii", "space"), "space.radii");
    std::vector<std::string> names;
    if (j.contains("points")) names = get_as<std::vector<std::string>>(j.at("points"), "space.points");
    return from_metric(m, radii, std::move(names));
  }
  const Json& pts = require(j, "points", "space");
  std::vector<std::string> names;
  if (pts.is_number_integer()) {
    names = default_names(pts.get<int>());
  } else {
    names = get_as<std::vector<std::string>>(pts, "space.points");
  }
  const int n = static_cast<int>(names.size());
  const Json& scales = require(j, "scales", "space");
  if (!scales.is_array() || scales.empty()) parse_error("space.scales: expected a nonempty array");
  std::vector<Relation> rels;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const std::string where = "space.scales[" + std::to_string(k) + "]";
    if (!scales[k].is_array()) parse_error(where + ": expected an array of pairs");
    std::vector<PointPair> pairs;
    for (const auto& pr : scales[k]) {
      if (!pr.is_array() || pr.size() != 2) parse_error(where + ": each pair has two entries");
      pairs.emplace_back(point_ref(pr[0], names, where), point_ref(pr[1], names, where));
    }
    rels.emplace_back(n, std::move(pairs));
  }
  const bool hausdorff = j.contains("hausdorff") ? get_as<bool>(j.at("hausdorff"), "space.hausdorff")
                                                 : rels.back().is_diagonal();
  return FilteredSpace(std::move(names), std::move(rels), hausdorff);
}

FilteredSpace load_space(const std::filesystem::path& path, const std::optional<std::vector<double>>& radii) {
  if (path.extension() == ".csv") {
    if (!radii) throw Error(ErrorCode::InvalidArgument, "a CSV distance matrix needs radii");
    return from_metric(parse_distance_csv(read_text_file(path)), *radii);
  }
  Json j = read_json_file(path);
  if (radii && j.contains("distances")) j["radii"] = *radii;
  return space_from_json(j, path.parent_path());
}

FilteredMap map_from_json(const Json& j, const std::filesystem::path& base) {
  const Json& s = require(j, "source", "map");
  const Json& t = require(j, "target", "map");
  FilteredSpace source = space_from_json(resolve(s, base), parent_of(s, base));
  FilteredSpace target = space_from_json(resolve(t, base), parent_of(t, base));
  std::vector<Point> assignment;
  for (const auto& v : require(j, "assignment", "map")) assignment.push_back(point_ref(v, target.names(), "map.assignment"));
  return make_map(std::move(source), std::move(target), std::move(assignment));
}

ActionSpec action_from_json(const Json& j, const std::filesystem::path& base) {
  const Json& s = require(j, "space", "action");
  FilteredSpace space = space_from_json(resolve(s, base), parent_of(s, base));
  auto generators = get_as<std::vector<Permutation>>(require(j, "generators", "action"), "action.generators");
  return close_group(space, std::move(generators));
}

Stabilization stabilization_from_string(std::string_view s) {
  for (auto v : {Stabilization::None, Stabilization::BijectionsBeyond, Stabilization::RepeatLast})
    if (to_string(v) == s) return v;
  parse_error("unknown stabilization '" + std::string(s) + "'");
}

SpaceTower space_tower_from_json(const Json& j, const std::filesystem::path& base) {
  std::vector<FilteredSpace> spaces;
  for (const auto& s : require(j, "spaces", "tower")) spaces.push_back(space_from_json(resolve(s, base), parent_of(s, base)));
  auto bonding = get_as<std::vector<std::vector<Point>>>(require(j, "bonding", "tower"), "tower.bonding");
  const auto stab = j.contains("stabilization") ? stabilization_from_string(j.at("stabilization").get<std::string>())
                                                : Stabilization::None;
  return make_space_tower(std::move(spaces), std::move(bonding), stab);
}

namespace {

Integer integer_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
      parse_error(where + ": not an integer");
    }
  }
  parse_error(where + ": not an integer");
}

}  // namespace

TowerAb tower_ab_from_json(const Json& j) {
  std::vector<AbelianGroupInv> groups;
  for (const auto& g : require(j, "groups", "tower")) {
    AbelianGroupInv a;
    a.rank = get_as<std::size_t>(require(g, "rank", "tower.groups"), "tower.groups.rank");
    if (g.contains("torsion"))
      for (const auto& d : g.at("torsion")) a.torsion.push_back(integer_from_json(d, "tower.groups.torsion"));
    groups.push_back(std::move(a));
  }
  std::vector<IntMatrix> bonding;
  const Json& bs = require(j, "bonding", "tower");
  for (std::size_t i = 0; i < bs.size() && i + 1 < groups.size(); ++i) {
    const std::size_t rows = groups[i].num_coordinates();
    const std::size_t cols = groups[i + 1].num_coordinates();
    IntMatrix m(rows, cols);
    if (bs[i].size() != rows) throw Error(ErrorCode::DimensionMismatch, "bonding matrix row count", static_cast<int>(i + 1));
    for (std::size_t r = 0; r < rows; ++r) {
      if (bs[i][r].size() != cols)
        throw Error(ErrorCode::DimensionMismatch, "bonding matrix column count", static_cast<int>(i + 1));
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = integer_from_json(bs[i][r][c], "tower.bonding");
    }
    bonding.push_back(std::move(m));
  }
  if (bs.size() + 1 != groups.size() && !groups.empty())
    throw Error(ErrorCode::DimensionMismatch, "a tower of n groups needs n - 1 bonding matrices");
  const auto stab = j.contains("stabilization") ? stabilization_from_string(j.at("stabilization").get<std::string>())
                                                : Stabilization::None;
  return make_tower_ab(std::move(groups), std::move(bonding), stab);
}

// ----------------------------------------------------------------- output

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return v.str();
}

Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(integer_to_json(x));
  return out;
}

Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

Json to_json(const AbelianGroupInv& g) {
  return Json{{"rank", g.rank}, {"torsion", to_json(g.torsion)}, {"text", g.to_string()}};
}

Json to_json(const Relation& r) {
  Json out = Json::array();
  for (const auto& [a, b] : r.pairs()) out.push_back({a, b});
  return out;
}

Json to_json(const Partition& p) { return p.blocks; }

Json to_json(const FilteredSpace& s) {
  Json scales = Json::array();
  for (const auto& rel : s.scales()) {
    Json pairs = Json::array();
    for (const auto& [a, b] : rel.pairs()) pairs.push_back({s.name(a), s.name(b)});
    scales.push_back(std::move(pairs));
  }
  return Json{{"points", s.names()}, {"scales", std::move(scales)}, {"hausdorff", s.hausdorff()}};
}

Json to_json(const FilteredMap& f) {
  return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"assignment", f.assignment}};
}

Json to_json(const ActionSpec& a) {
  return Json{{"space", to_json(a.space())}, {"generators", a.generators()}};
}

Json to_json(const SpaceTower& t) {
  Json spaces = Json::array();
  for (const auto& s : t.spaces) spaces.push_back(to_json(s));
  return Json{{"spaces", std::move(spaces)}, {"bonding", t.bonding}, {"stabilization", to_string(t.stabilization)}};
}

Json to_json(const TowerAb& t) {
  Json groups = Json::array();
  for (const auto& g : t.groups) groups.push_back(Json{{"rank", g.rank}, {"torsion", to_json(g.torsion)}});
  Json bonding = Json::array();
  for (const auto& m : t.bonding) bonding.push_back(to_json(m));
  return Json{{"groups", std::move(groups)}, {"bonding", std::move(bonding)}, {"stabilization", to_string(t.stabilization)}};
}

Json to_json(const FiniteGroup& g) {
  return Json{{"order", g.order()}, {"identity", g.identity}, {"table", g.table}, {"names", g.names}};
}

namespace {

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json pair_json(const std::optional<PointPair>& p) { return p ? Json{p->first, p->second} : Json(nullptr); }

}  // namespace

Json to_json(const GenerationWitness& w) {
  return Json{{"ok", w.ok},
              {"continuity", w.continuity},
              {"image_contains", w.image_contains},
              {"failing_target_scale", opt(w.failing_target_scale)},
              {"failing_source_scale", opt(w.failing_source_scale)},
              {"counterexample", pair_json(w.counterexample)}};
}

Json to_json(const LiftingWitness& w) {
  return Json{{"ok", w.ok},
              {"witness", w.witness},
              {"failing_scale", opt(w.failing_scale)},
              {"counterexample", pair_json(w.counterexample)}};
}

Json to_json(const UniquenessWitness& w) {
  Json ce = nullptr;
  if (w.counterexample) ce = Json{{"first", w.counterexample->first}, {"second", w.counterexample->second}};
  return Json{{"ok", w.ok},
              {"mode", to_string(w.mode)},
              {"witness", w.witness},
              {"failing_scale", opt(w.failing_scale)},
              {"counterexample", std::move(ce)}};
}

Json to_json(const GucmReport& r) {
  return Json{{"generation", to_json(r.generation)},
              {"lifting", to_json(r.lifting)},
              {"uniqueness", to_json(r.uniqueness)},
              {"complete_fibers", r.complete_fibers},
              {"gucm", r.gucm}};
}

Json to_json(const QuotientSpace& q) {
  return Json{{"scale", q.scale},
              {"blocks", to_json(q.blocks)},
              {"space", to_json(q.space)},
              {"q", q.q},
              {"g", q.g},
              {"hypothesis_unmet", q.hypothesis_unmet},
              {"g_after_q_is_f", q.g_after_q_is_f},
              {"q_has_chain_lifting", q.q_has_chain_lifting},
              {"identification_rule", q.identification_rule}};
}

Json to_json(const Factorization& f) {
  return Json{{"preconditions", f.preconditions},
              {"failing_axiom", f.failing_axiom.empty() ? Json(nullptr) : Json(f.failing_axiom)},
              {"requested_scale", f.requested_scale},
              {"scale", f.scale},
              {"quotient", f.quotient ? to_json(*f.quotient) : Json(nullptr)},
              {"blocks_bounded", f.blocks_bounded},
              {"g_generates", f.g_generates},
              {"g_lifts", f.g_lifts},
              {"image_scale_transverse", f.image_scale_transverse},
              {"g_transverse_scale", f.g_transverse_scale},
              {"g_is_ucm", f.g_is_ucm}};
}

Json to_json(const UcmReport& r) {
  Json gen = Json::array();
  for (const auto& g : r.generation)
    gen.push_back(Json{{"scale", g.scale},
                       {"ok", g.ok},
                       {"missing", pair_json(g.missing)},
                       {"extra", pair_json(g.extra)},
                       {"symmetric", g.symmetric}});
  Json lift = Json::array();
  for (const auto& l : r.lifting) {
    Json ce = nullptr;
    if (l.counterexample) ce = Json{l.counterexample->first, l.counterexample->second};
    lift.push_back(Json{{"scale", l.scale}, {"ok", l.ok}, {"witness_scale", l.witness_scale}, {"counterexample", ce}});
  }
  Json tce = nullptr;
  if (r.transversality_counterexample)
    tce = Json{r.transversality_counterexample->first, r.transversality_counterexample->second};
  return Json{{"generation", std::move(gen)},
              {"lifting", std::move(lift)},
              {"generates", r.generates},
              {"chain_lifting", r.chain_lifting},
              {"transverse_scale", opt(r.transverse_scale)},
              {"transversality_counterexample", std::move(tce)},
              {"verdict", to_string(r.verdict)},
              {"exhausted_budget", r.exhausted_budget.empty() ? Json(nullptr) : Json(r.exhausted_budget)}};
}

Json to_json(const LimitSpace& l) {
  Json schedule = Json::array();
  for (const auto& [i, j] : l.schedule) schedule.push_back({i, j});
  return Json{{"space", to_json(l.space)}, {"threads", l.threads}, {"schedule", std::move(schedule)}};
}

Json to_json(const StrongMlReport& r) {
  Json idx = Json::array();
  for (const auto& i : r.indices) idx.push_back(Json{{"index", i.index}, {"witness", i.witness}, {"equal", i.equal}});
  return Json{{"indices", std::move(idx)}, {"ok", r.ok}, {"certified", r.certified}};
}

Json to_json(const ReconstructionReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels) levels.push_back(to_json(l));
  return Json{{"hypothesis_unmet", r.hypothesis_unmet},
              {"levels", std::move(levels)},
              {"limit", r.limit ? to_json(*r.limit) : Json(nullptr)},
              {"q", r.q},
              {"injective", r.injective},
              {"surjective", r.surjective},
              {"forward_witness", r.forward_witness},
              {"cube_witness", r.cube_witness},
              {"backward_witness", r.backward_witness},
              {"entourages_preserved", r.entourages_preserved},
              {"limit_map_matches", r.limit_map_matches},
              {"ok", r.ok}};
}

Json to_json(const TelescopingResult& r) {
  Json h = Json::array();
  for (const auto& v : r.h) h.push_back(to_json(v));
  return Json{{"solved", r.solved},
              {"h", std::move(h)},
              {"unsolvable_step", r.unsolvable_step ? Json(r.unsolvable_step) : Json(nullptr)},
              {"verified", r.verified}};
}

Json to_json(const Lim1Verdict& v) {
  return Json{{"verdict", v.trivial ? "trivial" : "undetermined"},
              {"certificate", v.certificate.empty() ? Json(nullptr) : Json(v.certificate)},
              {"reason", v.reason.empty() ? Json(nullptr) : Json(v.reason)},
              {"first_index", v.first_index ? Json(v.first_index) : Json(nullptr)},
              {"stable_from", opt(v.stable_from)}};
}

Json to_json(const ActionDiagnosis& d) {
  Json upd_ce = Json::array();
  for (const auto& c : d.upd_counterexample)
    upd_ce.push_back(c ? Json{{"element", c->first}, {"point", c->second}} : Json(nullptr));
  Json basis = Json::array();
  for (const auto& r : d.invariant_basis) basis.push_back(to_json(r));
  return Json{{"neutral", Json{{"ok", d.neutral}, {"pairs", d.neutral_pairs}, {"witness", d.neutral_witness}}},
              {"upd", Json{{"ok", d.upd}, {"scale", opt(d.upd_scale)}, {"counterexamples", std::move(upd_ce)}}},
              {"bounded_orbits", Json{{"ok", d.bounded_orbits}, {"witness", d.bounded_orbits_witness}}},
              {"equicontinuity",
               Json{{"ok", d.equicontinuous}, {"witness", d.equicontinuity_witness}, {"invariant_basis", std::move(basis)}}},
              {"ss_equicontinuity", Json{{"ok", d.ss_equicontinuous}, {"witness", d.ss_equicontinuity_witness}}}};
}

Json to_json(const QuotientAction& q) {
  return Json{{"scale", q.scale},
              {"saturated", q.saturated},
              {"entourage", to_json(q.entourage)},
              {"subgroup", q.subgroup},
              {"orbits", to_json(q.orbits)},
              {"space", to_json(q.space)},
              {"projection", q.projection},
              {"cosets", to_json(q.cosets)},
              {"coset_table", q.group.table},
              {"induced", q.induced},
              {"normal", q.normal},
              {"induced_well_defined", q.induced_well_defined},
              {"induced_faithful", q.induced_faithful},
              {"induced_upd", q.induced_upd},
              {"orbit_map_consistent", q.orbit_map_consistent}};
}

Json to_json(const ActionTowerReport& r) {
  Json tele = Json::array();
  for (const auto& t : r.telescoped)
    tele.push_back(Json{{"orbit", t.orbit},
                        {"representatives", t.representatives},
                        {"defects", t.defects},
                        {"corrections", t.corrections},
                        {"corrected", t.corrected},
                        {"verified", t.verified}});
  Json sizes = Json::array();
  if (r.tower)
    for (std::size_t i = 0; i < r.tower->groups.groups.size(); ++i)
      sizes.push_back(Json{{"group", r.tower->groups.groups[i].order()}, {"space", r.tower->spaces.spaces[i].size()}});
  return Json{{"hypothesis_unmet", r.hypothesis_unmet},
              {"level_sizes", std::move(sizes)},
              {"a", Json{{"ok", r.part_a},
                         {"homomorphism", r.group_homomorphism},
                         {"injective", r.group_injective},
                         {"bijective", r.group_bijective}}},
              {"b", Json{{"ok", r.part_b},
                         {"bijective", r.space_bijective},
                         {"entourages_preserved", r.space_entourages_preserved},
                         {"equivariant", r.equivariant}}},
              {"c", Json{{"ok", r.part_c},
                         {"well_defined", r.quotient_well_defined},
                         {"injective", r.quotient_injective},
                         {"surjective", r.quotient_surjective},
                         {"entourages_preserved", r.quotient_entourages_preserved},
                         {"telescoped", std::move(tele)}}},
              {"d", Json{{"ok", r.part_d}, {"bondings_surjective", r.bondings_surjective}}},
              {"ok", r.ok}};
}

std::string barcode_csv(const FilteredSpace& space) {
  std::string out = "scale,rank,torsion\n";
  for (int k = 1; k <= space.num_scales(); ++k) {
    const AbelianGroupInv g = h1_at_scale(space, k);
    std::string torsion;
    for (const auto& d : g.torsion) torsion += (torsion.empty() ? "" : " ") + d.str();
    out += std::to_string(k) + "," + std::to_string(g.rank) + "," + torsion + "\n";
  }
  return out;
}

std::string space_to_dot(const FilteredSpace& space, int k) {
  space.check_scale(k);
  std::string out = "graph scale" + std::to_string(k) + " {\n";
  for (Point x = 0; x < space.size(); ++x) out += "  " + std::to_string(x) + " [label=\"" + space.name(x) + "\"];\n";
  for (const auto& [a, b] : space.scale(k).pairs()) out += "  " + std::to_string(a) + " -- " + std::to_string(b) + ";\n";
  return out + "}\n";
}

// ----------------------------------------------------------------- replay

Json generation_counterexample(const FilteredMap& f, const GenerationWitness& w) {
  Json doc{{"kind", "generation"}, {"map", to_json(f)}, {"pair", pair_json(w.counterexample)}};
  doc["target_scale"] = opt(w.failing_target_scale);
  doc["source_scale"] = opt(w.failing_source_scale);
  return doc;
}

Json lifting_counterexample(const FilteredMap& f, const LiftingWitness& w) {
  return Json{{"kind", "lifting"}, {"map", to_json(f)}, {"scale", opt(w.failing_scale)}, {"pair", pair_json(w.counterexample)}};
}

Json uniqueness_counterexample(const FilteredMap& f, const UniquenessWitness& w) {
  Json doc{{"kind", "uniqueness"}, {"map", to_json(f)}, {"mode", to_string(w.mode)}, {"scale", opt(w.failing_scale)}};
  doc["chain_scale"] = f.source.num_scales();
  if (w.counterexample) {
    doc["first"] = w.counterexample->first;
    doc["second"] = w.counterexample->second;
  }
  return doc;
}

Json upd_counterexample(const ActionSpec& a, int scale, int element, Point x) {
  return Json{{"kind", "upd"}, {"action", to_json(a)}, {"scale", scale}, {"element", a.element(element)}, {"point", x}};
}

ReplayResult replay(const Json& doc) {
  const std::string kind = get_as<std::string>(require(doc, "kind", "replay"), "replay.kind");
  ReplayResult r;
  if (kind == "generation") {
    const FilteredMap f = map_from_json(require(doc, "map", "replay"));
    const auto pair = get_as<std::pair<Point, Point>>(require(doc, "pair", "replay"), "replay.pair");
    const Relation image_fine = f.source.scale(f.source.num_scales()).image(f.assignment, f.target.size());
    if (!doc.at("target_scale").is_null()) {
      // Even the finest image escapes E_k, so no source scale maps inside it.
      const int k = doc.at("target_scale").get<int>();
      r.confirmed = image_fine.contains(pair.first, pair.second) && !f.target.scale(k).contains(pair.first, pair.second);
      r.detail = "image pair outside target scale " + std::to_string(k);
    } else {
      // The image of E_j misses a pair of the finest target scale.
      const int j = doc.at("source_scale").get<int>();
      const Relation image = f.source.scale(j).image(f.assignment, f.target.size());
      std::set<Point> hit(f.assignment.begin(), f.assignment.end());
      const bool missing = pair.first == pair.second ? !hit.contains(pair.first) : !image.contains(pair.first, pair.second);
      r.confirmed = f.target.scale(f.target.num_scales()).contains(pair.first, pair.second) && missing;
      r.detail = "finest target pair missing from the image of source scale " + std::to_string(j);
    }
  } else if (kind == "lifting") {
    const FilteredMap f = map_from_json(require(doc, "map", "replay"));
    const int a = get_as<int>(require(doc, "scale", "replay"), "replay.scale");
    const auto [x, y] = get_as<std::pair<Point, Point>>(require(doc, "pair", "replay"), "replay.pair");
    const int m = f.source.num_scales();
    bool lifted = false;
    for (Point z = 0; z < f.source.size(); ++z)
      if (f.source.scale(a).contains(x, z) && f(z) == y) lifted = true;
    const Relation image = f.source.scale(m).image(f.assignment, f.target.size());
    r.confirmed = image.contains(f(x), y) && !lifted;
    r.detail = "step from f(x) has no lift at scale " + std::to_string(a);
  } else if (kind == "uniqueness") {
    const FilteredMap f = map_from_json(require(doc, "map", "replay"));
    const int a = get_as<int>(require(doc, "scale", "replay"), "replay.scale");
    const int b = get_as<int>(require(doc, "chain_scale", "replay"), "replay.chain_scale");
    const bool strong = get_as<std::string>(require(doc, "mode", "replay"), "replay.mode") == "strong";
    const auto c1 = get_as<std::vector<Point>>(require(doc, "first", "replay"), "replay.first");
    const auto c2 = get_as<std::vector<Point>>(require(doc, "second", "replay"), "replay.second");
    bool ok = !c1.empty() && c1.size() == c2.size() && c1.front() == c2.front() && is_chain(f.source, b, c1) &&
              is_chain(f.source, b, c2);
    for (std::size_t i = 0; ok && i < c1.size(); ++i) ok = f(c1[i]) == f(c2[i]);
    const Relation& close = f.source.scale(strong ? b : a);
    r.confirmed = ok && !close.contains(c1.back(), c2.back());
    r.detail = "chains with equal images end apart";
  } else if (kind == "upd") {
    const ActionSpec a = action_from_json(require(doc, "action", "replay"));
    const int k = get_as<int>(require(doc, "scale", "replay"), "replay.scale");
    const int g = a.index_of(get_as<Permutation>(require(doc, "element", "replay"), "replay.element"));
    const Point x = get_as<Point>(require(doc, "point", "replay"), "replay.point");
    r.confirmed = g > 0 && a.space().scale(k).contains(x, a.act(g, x));
    r.detail = "a nontrivial element moves a point within the scale";
  } else {
    parse_error("replay: unknown kind '" + kind + "'");
  }
  return r;
}

}  // namespace ucover
