#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ucover/action.hpp"
#include "ucover/cover.hpp"
#include "ucover/quotient.hpp"
#include "ucover/space.hpp"
#include "ucover/tower.hpp"

namespace ucover {

using Json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "ucover-report/1";

// ------------------------------------------------------------------ input

/// Square, symmetric CSV of distances; blank lines and lines starting with
/// '#' are skipped. Errors name the line and field.
std::vector<std::vector<double>> parse_distance_csv(std::string_view text);
/// "2,1" -> {2, 1}.
std::vector<double> parse_radii(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
/// ParseError carries the byte offset of the syntax error.
Json parse_json(std::string_view text);
Json read_json_file(const std::filesystem::path& path);

/// Either {"points", "scales", "hausdorff"} with pairs given by point name
/// or index, or {"distances", "radii"} where distances is a matrix or a CSV
/// path relative to `base`.
FilteredSpace space_from_json(const Json& j, const std::filesystem::path& base = {});
/// A .csv path needs radii; anything else is read as JSON.
FilteredSpace load_space(const std::filesystem::path& path, const std::optional<std::vector<double>>& radii = {});

/// {"source", "target", "assignment"}; spaces may be inline or file paths.
FilteredMap map_from_json(const Json& j, const std::filesystem::path& base = {});
/// {"space", "generators"}.
ActionSpec action_from_json(const Json& j, const std::filesystem::path& base = {});
/// {"spaces", "bonding", "stabilization"}.
SpaceTower space_tower_from_json(const Json& j, const std::filesystem::path& base = {});
/// {"groups": [{"rank", "torsion"}], "bonding": [matrix rows], "stabilization"}.
TowerAb tower_ab_from_json(const Json& j);
Stabilization stabilization_from_string(std::string_view s);

// ----------------------------------------------------------------- output

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);
/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

Json integer_to_json(const Integer& v);
Json to_json(const IntVector& v);
Json to_json(const IntMatrix& m);
Json to_json(const AbelianGroupInv& g);
Json to_json(const Relation& r);
Json to_json(const Partition& p);
Json to_json(const FilteredSpace& s);
Json to_json(const FilteredMap& f);
Json to_json(const ActionSpec& a);
Json to_json(const SpaceTower& t);
Json to_json(const TowerAb& t);
Json to_json(const FiniteGroup& g);

Json to_json(const GenerationWitness& w);
Json to_json(const LiftingWitness& w);
Json to_json(const UniquenessWitness& w);
Json to_json(const GucmReport& r);
Json to_json(const QuotientSpace& q);
Json to_json(const Factorization& f);
Json to_json(const UcmReport& r);
Json to_json(const LimitSpace& l);
Json to_json(const StrongMlReport& r);
Json to_json(const ReconstructionReport& r);
Json to_json(const TelescopingResult& r);
Json to_json(const Lim1Verdict& v);
Json to_json(const ActionDiagnosis& d);
Json to_json(const QuotientAction& q);
Json to_json(const ActionTowerReport& r);

/// Columns scale, rank, torsion; one row per scale.
std::string barcode_csv(const FilteredSpace& space);
/// Undirected graph of E_k with point names as labels.
std::string space_to_dot(const FilteredSpace& space, int k);

// ----------------------------------------------------------------- replay

/// Self-contained counterexample documents. Each embeds its input so that
/// `replay` can re-check the violation without the original files.
Json generation_counterexample(const FilteredMap& f, const GenerationWitness& w);
Json lifting_counterexample(const FilteredMap& f, const LiftingWitness& w);
Json uniqueness_counterexample(const FilteredMap& f, const UniquenessWitness& w);
Json upd_counterexample(const ActionSpec& a, int scale, int element, Point x);

struct ReplayResult {
  /// The recorded violation is genuine.
  bool confirmed = false;
  std::string detail;
};

ReplayResult replay(const Json& doc);

}  // namespace ucover
