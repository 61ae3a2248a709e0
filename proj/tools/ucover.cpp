// Command line front end: reads inputs, runs one analysis, writes a JSON
// report. Exit codes: 0 verdicts as claimed, 1 counterexample found,
// 2 inconclusive within budget, 3 input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ucover/action.hpp"
#include "ucover/cover.hpp"
#include "ucover/io.hpp"
#include "ucover/quotient.hpp"
#include "ucover/rips.hpp"
#include "ucover/tower.hpp"

namespace {

using namespace ucover;

enum Exit { kOk = 0, kCounterexample = 1, kInconclusive = 2, kInputError = 3 };

struct Budgets {
  int radius = CoverBudget{}.radius;
  std::size_t ident_budget = HomotopyBudget{}.quotient_search_nodes;
  std::size_t coset_rows = HomotopyBudget{}.coset_rows;
  std::size_t product_bound = kDefaultProductBound;

  HomotopyBudget homotopy() const {
    HomotopyBudget b;
    b.coset_rows = coset_rows;
    b.quotient_search_nodes = ident_budget;
    return b;
  }
  Json to_json() const {
    return Json{{"radius", radius}, {"ident_budget", ident_budget}, {"coset_rows", coset_rows}, {"product_bound", product_bound}};
  }
};

template <class T>
void env_default(const char* name, T& value) {
  if (const char* v = std::getenv(name)) {
    try {
      value = static_cast<T>(std::stoll(v));
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed " << name << "=" << v << "\n";
    }
  }
}

struct Run {
  std::string command;
  Json args = Json::object();
  Json inputs = Json::array();
  Json result = Json::object();
  int exit = kOk;

  void input(const std::string& path) {
    inputs.push_back(Json{{"path", path}, {"fnv1a64", fnv1a64_hex(read_text_file(path))}});
  }
  void raise(int code) { exit = std::max(exit, code); }
};

std::optional<std::vector<double>> radii_of(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_radii(text);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------- commands

void analyze(Run& run, const std::string& path, const std::string& radii, const std::string& barcode) {
  run.input(path);
  const FilteredSpace space = load_space(path, radii_of(radii));
  Json scales = Json::array();
  for (int k = 1; k <= space.num_scales(); ++k)
    scales.push_back(Json{{"scale", k},
                          {"components", to_json(chain_components(space, k))},
                          {"h1", to_json(h1_at_scale(space, k))}});
  Json bonding = Json::array();
  for (int k = 1; k < space.num_scales(); ++k)
    bonding.push_back(Json{{"from", k + 1}, {"to", k}, {"matrix", to_json(bonding_h1_map(space, k + 1, k))}});
  Json critical = Json::array();
  for (const auto& [a, b] : critical_scales(space)) critical.push_back({a, b});
  run.result = Json{{"space", to_json(space)}, {"scales", std::move(scales)}, {"bonding", std::move(bonding)},
                    {"critical_scales", std::move(critical)}};
  if (!barcode.empty()) write_text(barcode, barcode_csv(space));
}

void cover(Run& run, const Budgets& budgets, const std::string& path, const std::string& radii, int scale,
           const std::string& basepoint, const std::string& dot) {
  run.input(path);
  const FilteredSpace space = load_space(path, radii_of(radii));
  const Point base = basepoint.empty() ? 0 : space.index_of(basepoint);
  CoverBudget cb;
  cb.radius = budgets.radius;
  cb.identification = budgets.homotopy();
  const PartialCover c = build_cover(space, scale, base, cb);
  const UcmReport report = verify_endpoint_ucm(space, scale, c);
  Json vertices = Json::array();
  for (std::size_t v = 0; v < c.size(); ++v) vertices.push_back(c.representative(static_cast<int>(v)).seq);
  run.result = Json{{"scale", scale},
                    {"basepoint", space.name(base)},
                    {"vertices", std::move(vertices)},
                    {"complete", c.complete()},
                    {"rounds", c.rounds()},
                    {"identification_incomplete", c.identification_incomplete()},
                    {"ucm", to_json(report)}};
  if (!dot.empty()) write_text(dot, to_dot(c));
  if (report.verdict == UcmVerdict::NotUcm) run.raise(kCounterexample);
  if (report.verdict == UcmVerdict::Inconclusive) run.raise(kInconclusive);
}

void map_command(Run& run, const std::string& path) {
  run.input(path);
  const FilteredMap f = map_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
  const GucmReport g = verify_gucm(f);
  const UniquenessWitness strong = check_approx_uniqueness(f, UniquenessMode::Strong);
  Json ce = Json::array();
  if (!g.generation.ok) ce.push_back(generation_counterexample(f, g.generation));
  if (!g.lifting.ok) ce.push_back(lifting_counterexample(f, g.lifting));
  if (!g.uniqueness.ok) ce.push_back(uniqueness_counterexample(f, g.uniqueness));
  if (!strong.ok) ce.push_back(uniqueness_counterexample(f, strong));
  run.result = Json{{"generates", to_json(g.generation)},
                    {"chain_lifting", to_json(g.lifting)},
                    {"uniqueness", to_json(g.uniqueness)},
                    {"strong_uniqueness", to_json(strong)},
                    {"gucm", g.gucm},
                    {"counterexamples", std::move(ce)}};
  if (!g.gucm || !strong.ok) run.raise(kCounterexample);
}

void quotient_command(Run& run, const std::string& path, int scale) {
  run.input(path);
  const FilteredMap f = map_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
  const QuotientSpace q = build_fiber_quotient(f, scale);
  const Factorization fac = factor_and_verify(f, scale);
  run.result = Json{{"quotient", to_json(q)}, {"factorization", to_json(fac)}};
  // Unmet preconditions are reported, not counted as counterexamples.
  if (fac.preconditions && !(fac.g_is_ucm && fac.blocks_bounded)) run.raise(kCounterexample);
}

void tower_command(Run& run, const Budgets& budgets, const std::string& path, bool lim1, const std::string& telescope,
                   const std::string& mode) {
  run.input(path);
  const Json j = read_json_file(path);
  if (j.contains("groups")) {
    const TowerAb t = tower_ab_from_json(j);
    run.result["tower"] = to_json(t);
    if (lim1 || telescope.empty()) run.result["lim1"] = to_json(lim1_verdict(t));
    if (!telescope.empty()) {
      run.input(telescope);
      const Json gj = read_json_file(telescope);
      std::vector<IntVector> g;
      for (const auto& row : gj) {
        IntVector v;
        for (const auto& x : row) v.push_back(x.is_string() ? Integer(x.get<std::string>()) : Integer(x.get<long long>()));
        g.push_back(std::move(v));
      }
      const TelescopingMode m = mode == "forward" ? TelescopingMode::Forward : TelescopingMode::Backward;
      const TelescopingResult r = telescoping_solve(t, g, m);
      run.result["telescoping"] = to_json(r);
      run.result["telescoping"]["mode"] = mode;
      if (r.solved && !r.verified) run.raise(kCounterexample);
    }
    return;
  }
  const SpaceTower t = space_tower_from_json(j, std::filesystem::path(path).parent_path());
  const LimitSpace lim = assemble_limit_space(t, budgets.product_bound);
  run.result = Json{{"limit", to_json(lim)}, {"strong_ml", to_json(strong_ml_check(t, budgets.product_bound))}};
}

void action_command(Run& run, const Budgets& budgets, const std::string& path, int scale) {
  run.input(path);
  const ActionSpec a = action_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
  const ActionDiagnosis d = diagnose_action(a);
  Json quotients = Json::array();
  for (int k = 1; k <= a.space().num_scales(); ++k)
    if (scale == 0 || scale == k) quotients.push_back(to_json(quotient_at_scale(a, k)));
  const ActionTowerReport t = action_tower_verify(a, budgets.product_bound);
  Json ce = Json::array();
  for (int k = 1; k <= a.space().num_scales(); ++k)
    if (const auto& c = d.upd_counterexample[static_cast<std::size_t>(k - 1)]) ce.push_back(upd_counterexample(a, k, c->first, c->second));
  run.result = Json{{"order", a.order()},
                    {"faithful", a.faithful()},
                    {"elements", a.elements()},
                    {"diagnosis", to_json(d)},
                    {"quotients", std::move(quotients)},
                    {"tower", to_json(t)},
                    {"counterexamples", std::move(ce)}};
  if (t.hypothesis_unmet.empty() && !t.ok) run.raise(kCounterexample);
}

void verify_command(Run& run, const std::string& path) {
  run.input(path);
  Json doc = read_json_file(path);
  Json docs = Json::array();
  if (doc.contains("result") && doc["result"].contains("counterexamples")) {
    docs = doc["result"]["counterexamples"];
  } else if (doc.is_array()) {
    docs = doc;
  } else {
    docs.push_back(doc);
  }
  Json results = Json::array();
  for (const auto& d : docs) {
    const ReplayResult r = replay(d);
    results.push_back(Json{{"kind", d.at("kind")}, {"confirmed", r.confirmed}, {"detail", r.detail}});
    if (!r.confirmed) run.raise(kCounterexample);
  }
  run.result = Json{{"replayed", std::move(results)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete homotopy, covers, quotients, towers and group actions on finite filtered spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  Budgets budgets;
  env_default("UCOVER_RADIUS", budgets.radius);
  env_default("UCOVER_IDENT_BUDGET", budgets.ident_budget);
  env_default("UCOVER_COSET_ROWS", budgets.coset_rows);
  env_default("UCOVER_PRODUCT_BOUND", budgets.product_bound);

  std::string out_path;
  bool timing = false;
  app.add_option("-o,--out", out_path, "Write the report here instead of stdout");
  app.add_flag("--timing", timing, "Add wall-clock timing to the report (breaks byte-identical output)");
  app.add_option("--radius", budgets.radius, "Cover expansion rounds")->capture_default_str();
  app.add_option("--ident-budget", budgets.ident_budget, "Node budget for finite quotient search")->capture_default_str();
  app.add_option("--coset-rows", budgets.coset_rows, "Row budget for coset enumeration")->capture_default_str();
  app.add_option("--product-bound", budgets.product_bound, "Bound on threads times tower length")->capture_default_str();

  std::string input, radii, barcode, dot, basepoint, telescope, mode = "backward";
  int scale = 1;
  int action_scale = 0;
  bool lim1 = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "Chain components, H1 per scale, critical scales");
  analyze_cmd->add_option("space", input, "Space file (.json or .csv)")->required();
  analyze_cmd->add_option("--radii", radii, "Comma-separated radii for distance matrices");
  analyze_cmd->add_option("--barcode", barcode, "Write the H1 barcode CSV here");

  auto* cover_cmd = app.add_subcommand("cover", "Build the cover at a scale and check its endpoint map");
  cover_cmd->add_option("space", input)->required();
  cover_cmd->add_option("--radii", radii);
  cover_cmd->add_option("--scale", scale)->capture_default_str();
  cover_cmd->add_option("--basepoint", basepoint, "Basepoint name (default: first point)");
  cover_cmd->add_option("--dot", dot, "Write the cover graph in DOT format here");

  auto* map_cmd = app.add_subcommand("map", "Generation, chain lifting and uniqueness checks");
  map_cmd->add_option("map", input, "Map file")->required();

  auto* quotient_cmd = app.add_subcommand("quotient", "Fiber quotient and factorization");
  quotient_cmd->add_option("map", input)->required();
  quotient_cmd->add_option("--scale", scale)->capture_default_str();

  auto* tower_cmd = app.add_subcommand("tower", "Limits and Mittag-Leffler checks, lim1, telescoping");
  tower_cmd->add_option("tower", input)->required();
  tower_cmd->add_flag("--lim1", lim1, "Decide lim1 triviality");
  tower_cmd->add_option("--telescope", telescope, "JSON list of g_i to telescope");
  tower_cmd->add_option("--mode", mode)->check(CLI::IsMember({"forward", "backward"}))->capture_default_str();

  auto* action_cmd = app.add_subcommand("action", "Diagnosis, quotients and tower verification of an action");
  action_cmd->add_option("action", input)->required();
  action_cmd->add_option("--scale", action_scale, "Only quotient at this scale (default: all)");

  auto* verify_cmd = app.add_subcommand("verify", "Replay recorded counterexamples");
  verify_cmd->add_option("--replay", input, "Report or counterexample file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors count as input errors.
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  Run run;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (analyze_cmd->parsed()) {
      run.command = "analyze";
      run.args = Json{{"space", input}, {"radii", radii}};
      analyze(run, input, radii, barcode);
    } else if (cover_cmd->parsed()) {
      run.command = "cover";
      run.args = Json{{"space", input}, {"radii", radii}, {"scale", scale}, {"basepoint", basepoint}};
      cover(run, budgets, input, radii, scale, basepoint, dot);
    } else if (map_cmd->parsed()) {
      run.command = "map";
      run.args = Json{{"map", input}};
      map_command(run, input);
    } else if (quotient_cmd->parsed()) {
      run.command = "quotient";
      run.args = Json{{"map", input}, {"scale", scale}};
      quotient_command(run, input, scale);
    } else if (tower_cmd->parsed()) {
      run.command = "tower";
      run.args = Json{{"tower", input}, {"lim1", lim1}, {"telescope", telescope}, {"mode", mode}};
      tower_command(run, budgets, input, lim1, telescope, mode);
    } else if (action_cmd->parsed()) {
      run.command = "action";
      run.args = Json{{"action", input}, {"scale", action_scale}};
      action_command(run, budgets, input, action_scale);
    } else if (verify_cmd->parsed()) {
      run.command = "verify";
      run.args = Json{{"replay", input}};
      verify_command(run, input);
    }
  } catch (const Error& e) {
    std::cerr << "ucover: " << e.what() << "\n";
    if (e.code() == ErrorCode::BudgetExhausted || e.code() == ErrorCode::ProductTooLarge ||
        e.code() == ErrorCode::GroupTooLarge)
      return kInconclusive;
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "ucover: " << e.what() << "\n";
    return kInputError;
  }

  Json report{{"schema", kSchemaVersion},
              {"command", Json{{"name", run.command}, {"args", run.args}}},
              {"inputs", run.inputs},
              {"budgets", budgets.to_json()},
              {"result", run.result},
              {"exit_code", run.exit}};
  if (timing)
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const std::string text = canonical_dump(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    try {
      write_text(out_path, text);
    } catch (const Error& e) {
      std::cerr << "ucover: " << e.what() << "\n";
      return kInputError;
    }
  }
  return run.exit;
}
