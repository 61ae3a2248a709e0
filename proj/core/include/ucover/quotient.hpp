#pragma once

#include <optional>
#include <string_view>
#include <string>
#include <vector>

#include "ucover/space.hpp"

namespace ucover {

/// A function between filtered spaces given by its values on source points.
struct FilteredMap {
  FilteredSpace source;
  FilteredSpace target;
  std::vector<Point> assignment;
  /// Optional continuity witnesses: for target scale k (entry k-1), a source
  /// scale j with f(E_j) ⊆ E_k. Empty means "search".
  std::vector<int> continuity;

  Point operator()(Point x) const { return assignment[static_cast<std::size_t>(x)]; }
};

FilteredMap make_map(FilteredSpace source, FilteredSpace target, std::vector<Point> assignment);
FilteredMap identity_map(const FilteredSpace& space);

struct GenerationWitness {
  bool ok = false;
  /// Per target scale: the coarsest source scale whose image lies inside it
  /// (0 when none does).
  std::vector<int> continuity;
  /// Per source scale: the coarsest target scale contained in its image
  /// (0 when the image is not an entourage).
  std::vector<int> image_contains;
  std::optional<int> failing_target_scale;
  std::optional<int> failing_source_scale;
  /// A pair of the finest target scale missing from the failing image, or
  /// the pair escaping the failing target scale.
  std::optional<PointPair> counterexample;
};

GenerationWitness check_generates(const FilteredMap& f);

struct LiftingWitness {
  bool ok = false;
  /// Per source scale a: the coarsest scale b whose image steps lift to
  /// E_a-steps (0 when none).
  std::vector<int> witness;
  /// For the first failing a: a point x and a downstairs step f(x) -> y
  /// inside f(E_m) with no E_a-lift.
  std::optional<int> failing_scale;
  std::optional<std::pair<Point, Point>> counterexample;
};

/// Do f(E_b)-steps from f(x) lift to E_a-steps from x for all x?
bool lifts_steps(const FilteredMap& f, int a, int b, std::pair<Point, Point>* counterexample = nullptr);
LiftingWitness check_chain_lifting(const FilteredMap& f);

enum class UniquenessMode { Plain, Strong };
std::string_view to_string(UniquenessMode m);

struct ChainPair {
  std::vector<Point> first, second;
};

/// All pairs (p, q) reachable from the diagonal by simultaneous E_b-steps
/// with equal images; pair (p, q) stored as p * n + q.
std::vector<bool> lifted_pairs(const FilteredMap& f, int b);

/// Two E_b-chains from a common start with equal images end close (E_a in
/// plain mode, E_b in strong mode). On failure `counterexample` receives a
/// shortest violating chain pair.
bool unique_at(const FilteredMap& f, UniquenessMode mode, int a, int b, ChainPair* counterexample = nullptr);

struct UniquenessWitness {
  bool ok = false;
  UniquenessMode mode = UniquenessMode::Plain;
  /// Per source scale a: the finest b >= a that works (0 when none).
  std::vector<int> witness;
  std::optional<int> failing_scale;
  /// Violation at the finest scale for the first failing a.
  std::optional<ChainPair> counterexample;
};

UniquenessWitness check_approx_uniqueness(const FilteredMap& f, UniquenessMode mode);

Partition fiber_e_components(const FilteredMap& f, int k);

struct QuotientSpace {
  int scale = 1;
  Partition blocks;
  /// Blocks with the images q(E_j) of all source scales.
  FilteredSpace space;
  std::vector<Point> q;
  std::vector<Point> g;
  /// Names the unmet hypothesis ("strong-uniqueness", "chain-lifting") when
  /// the quotient was built without it.
  std::vector<std::string> hypothesis_unmet;
  bool g_after_q_is_f = false;
  bool q_has_chain_lifting = false;
  /// q(x) = q(y) iff f(x) = f(y) and (x, y) ∈ E_k.
  bool identification_rule = false;

  bool flagged() const { return !hypothesis_unmet.empty(); }
};

QuotientSpace build_fiber_quotient(const FilteredMap& f, int k);

struct Factorization {
  bool preconditions = false;
  /// Failing precondition: "generates", "chain-lifting", "strong-uniqueness".
  std::string failing_axiom;
  int requested_scale = 1;
  /// The scale F used (0 when none qualifies).
  int scale = 0;
  std::optional<QuotientSpace> quotient;
  bool blocks_bounded = false;
  bool g_generates = false;
  bool g_lifts = false;
  /// q(F) is transverse to g.
  bool image_scale_transverse = false;
  /// Coarsest scale of the quotient transverse to g (0 when none).
  int g_transverse_scale = 0;
  bool g_is_ucm = false;
};

Factorization factor_and_verify(const FilteredMap& f, int e);

struct GucmReport {
  GenerationWitness generation;
  LiftingWitness lifting;
  UniquenessWitness uniqueness;
  /// Fibers of finite spaces are finite, hence complete.
  bool complete_fibers = true;
  bool gucm = false;
};

GucmReport verify_gucm(const FilteredMap& f);

/// Is `e` transverse to f: (x, y) ∈ e with f(x) = f(y) forces x = y?
bool is_transverse(const FilteredMap& f, const Relation& e);

}  // namespace ucover
