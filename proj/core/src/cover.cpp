#include "ucover/cover.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace ucover {

namespace {

bool shortlex_less(const Chain& a, const Chain& b) {
  if (a.seq.size() != b.seq.size()) return a.seq.size() < b.seq.size();
  return a.seq < b.seq;
}

}  // namespace

PartialCover::PartialCover(const FilteredSpace& space, int k, Point basepoint, HomotopyBudget identification)
    : space_(std::make_shared<const FilteredSpace>(space)), scale_(k), basepoint_(basepoint) {
  space_->check_scale(k);
  space_->check_point(basepoint);
  context_ = std::make_unique<HomotopyContext>(*space_, k, basepoint, identification);
  reps_.push_back(Chain{k, {basepoint}});
  edges_.emplace_back();
  for (Point y : space_->scale(k).neighbors(basepoint)) edges_.back().push_back(CoverEdge{y, -1});
  frontier_.push_back(0);
  complete_ = edges_.back().empty();
}

int PartialCover::edge(int v, Point y) const {
  if (y == endpoint(v)) return v;
  for (const auto& e : edges(v))
    if (e.successor == y) return e.target;
  throw Error(ErrorCode::NotAChain, "step is not an edge at the cover's scale");
}

int PartialCover::identify(const Chain& candidate) {
  std::vector<int> unknown;
  for (std::size_t u = 0; u < reps_.size(); ++u) {
    if (reps_[u].back() != candidate.back()) continue;
    if (reps_[u].seq == candidate.seq) return static_cast<int>(u);
  }
  for (std::size_t u = 0; u < reps_.size(); ++u) {
    if (reps_[u].back() != candidate.back()) continue;
    HomotopyVerdict v = context_->homotopic(candidate, reps_[u]);
    if (v.answer == Answer::Yes) return static_cast<int>(u);
    if (v.answer == Answer::Unknown) unknown.push_back(static_cast<int>(u));
  }
  const int id = static_cast<int>(reps_.size());
  reps_.push_back(candidate);
  edges_.emplace_back();
  for (Point y : space_->scale(scale_).neighbors(candidate.back())) edges_.back().push_back(CoverEdge{y, -1});
  for (int u : unknown) undetermined_.emplace_back(u, id);
  frontier_.push_back(id);
  complete_ = false;
  return id;
}

int PartialCover::resolve(int v, Point y) {
  if (y == endpoint(v)) return v;
  auto& slots = edges_.at(static_cast<std::size_t>(v));
  auto it = std::find_if(slots.begin(), slots.end(), [y](const CoverEdge& e) { return e.successor == y; });
  if (it == slots.end()) throw Error(ErrorCode::NotAChain, "step is not an edge at the cover's scale");
  if (it->target >= 0) return it->target;
  Chain c = reps_[static_cast<std::size_t>(v)];
  c.seq.push_back(y);
  const int target = identify(reduce_chain(*space_, scale_, c));
  // identify may have grown edges_, so look the slot up again
  for (auto& e : edges_[static_cast<std::size_t>(v)])
    if (e.successor == y) e.target = target;
  return target;
}

std::size_t PartialCover::expand() {
  if (complete_) return 0;
  struct Slot {
    Chain candidate;
    int vertex;
    Point successor;
  };
  std::vector<Slot> slots;
  std::vector<int> frontier;
  frontier.swap(frontier_);
  for (int v : frontier)
    for (const auto& e : edges_[static_cast<std::size_t>(v)]) {
      if (e.target >= 0) continue;
      Chain c = reps_[static_cast<std::size_t>(v)];
      c.seq.push_back(e.successor);
      slots.push_back(Slot{reduce_chain(*space_, scale_, c), v, e.successor});
    }
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& a, const Slot& b) { return shortlex_less(a.candidate, b.candidate); });
  const std::size_t before = reps_.size();
  for (const auto& s : slots) {
    const int target = identify(s.candidate);
    for (auto& e : edges_[static_cast<std::size_t>(s.vertex)])
      if (e.successor == s.successor) e.target = target;
  }
  ++rounds_;
  const std::size_t added = reps_.size() - before;
  if (added == 0 && frontier_.empty()) complete_ = true;
  return added;
}

Relation PartialCover::lifted_scale(int j) const {
  if (j < scale_ || j > space_->num_scales()) throw Error(ErrorCode::BadScale, "lifted scales run from k to m", j);
  const Relation& e = space_->scale(j);
  std::vector<PointPair> pairs;
  for (std::size_t v = 0; v < reps_.size(); ++v)
    for (const auto& slot : edges_[v])
      if (slot.target >= 0 && e.contains(reps_[v].back(), slot.successor))
        pairs.emplace_back(static_cast<int>(v), slot.target);
  return Relation(static_cast<int>(reps_.size()), std::move(pairs));
}

std::vector<std::pair<int, Point>> PartialCover::unexplored_slots(int j) const {
  const Relation& e = space_->scale(j);
  std::vector<std::pair<int, Point>> out;
  for (std::size_t v = 0; v < reps_.size(); ++v)
    for (const auto& slot : edges_[v])
      if (slot.target < 0 && e.contains(reps_[v].back(), slot.successor))
        out.emplace_back(static_cast<int>(v), slot.successor);
  return out;
}

std::vector<Point> PartialCover::endpoint_map() const {
  std::vector<Point> out;
  out.reserve(reps_.size());
  for (const auto& c : reps_) out.push_back(c.back());
  return out;
}

PartialCover build_cover(const FilteredSpace& space, int k, Point basepoint, const CoverBudget& budget) {
  PartialCover cover(space, k, basepoint, budget.identification);
  for (int r = 0; r < budget.radius && !cover.complete(); ++r) cover.expand();
  return cover;
}

std::vector<Point> endpoint_map(const PartialCover& cover) { return cover.endpoint_map(); }

FilteredSpace cover_space(const PartialCover& cover) {
  std::vector<std::string> names;
  for (std::size_t v = 0; v < cover.size(); ++v) {
    std::string name;
    for (Point x : cover.representative(static_cast<int>(v)).seq) {
      if (!name.empty()) name += '.';
      name += cover.space().name(x);
    }
    names.push_back(std::move(name));
  }
  std::vector<Relation> scales;
  for (int j = cover.scale(); j <= cover.space().num_scales(); ++j) scales.push_back(cover.lifted_scale(j));
  const bool hausdorff = scales.back().is_diagonal();
  return FilteredSpace(std::move(names), std::move(scales), hausdorff);
}

// --------------------------------------------------------------- UCM check

std::string_view to_string(UcmVerdict v) {
  switch (v) {
    case UcmVerdict::Ucm:
      return "ucm";
    case UcmVerdict::NotUcm:
      return "not-ucm";
    case UcmVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

UcmReport verify_endpoint_ucm(const FilteredSpace& space, int k, const PartialCover& cover) {
  if (cover.scale() != k) throw Error(ErrorCode::ScaleMismatch, "cover was built at another scale");
  UcmReport r;
  if (!cover.complete()) {
    r.exhausted_budget = "radius";
    return r;
  }
  if (cover.identification_incomplete()) {
    r.exhausted_budget = "ident-budget";
    return r;
  }
  const Partition comp = chain_components(space, k);
  const int block = comp.block_of[static_cast<std::size_t>(cover.basepoint())];
  auto inside = [&](Point x) { return comp.block_of[static_cast<std::size_t>(x)] == block; };
  const std::vector<Point> p = cover.endpoint_map();
  const int n = static_cast<int>(cover.size());

  r.generates = true;
  r.chain_lifting = true;
  for (int j = k; j <= space.num_scales(); ++j) {
    const Relation lifted = cover.lifted_scale(j);
    const Relation& e = space.scale(j);
    UcmReport::Generation g;
    g.scale = j;
    std::set<PointPair> image;
    for (const auto& [v, u] : lifted.pairs()) {
      const Point a = p[static_cast<std::size_t>(v)], b = p[static_cast<std::size_t>(u)];
      if (a != b) image.insert({std::min(a, b), std::max(a, b)});
    }
    for (const auto& pr : e.pairs())
      if (inside(pr.first) && inside(pr.second) && !image.count(pr)) {
        g.missing = pr;
        break;
      }
    for (const auto& pr : image)
      if (!e.contains(pr.first, pr.second) || !inside(pr.first)) {
        g.extra = pr;
        break;
      }
    // F̂ must already be symmetric as a table: stepping back undoes a step.
    for (int v = 0; v < n && g.symmetric; ++v)
      for (const auto& slot : cover.edges(v))
        if (slot.target >= 0 && e.contains(p[static_cast<std::size_t>(v)], slot.successor) &&
            cover.edge(slot.target, p[static_cast<std::size_t>(v)]) != v) {
          g.symmetric = false;
          break;
        }
    g.ok = !g.missing && !g.extra && g.symmetric;
    r.generates = r.generates && g.ok;
    r.generation.push_back(g);

    UcmReport::Lifting l;
    l.scale = j;
    l.ok = true;
    for (int v = 0; v < n && l.ok; ++v)
      for (Point y : e.neighbors(p[static_cast<std::size_t>(v)])) {
        const int u = cover.edge(v, y);
        if (u < 0 || p[static_cast<std::size_t>(u)] != y || !lifted.contains(v, u)) {
          l.ok = false;
          l.counterexample = std::make_pair(v, y);
          break;
        }
      }
    if (l.ok) l.witness_scale = j;
    r.chain_lifting = r.chain_lifting && l.ok;
    r.lifting.push_back(l);
  }

  const Relation base = cover.lifted_scale(k);
  for (const auto& [v, u] : base.pairs())
    if (p[static_cast<std::size_t>(v)] == p[static_cast<std::size_t>(u)]) {
      r.transversality_counterexample = std::make_pair(v, u);
      break;
    }
  if (!r.transversality_counterexample) r.transverse_scale = k;

  r.verdict = r.generates && r.chain_lifting && r.transverse_scale ? UcmVerdict::Ucm : UcmVerdict::NotUcm;
  return r;
}

// ------------------------------------------------------------ H1 bonding

namespace {

std::vector<Point> path_to_root(const GroupPresentation& p, Point x) {
  std::vector<Point> out{x};
  while (p.parent[static_cast<std::size_t>(out.back())] >= 0) out.push_back(p.parent[static_cast<std::size_t>(out.back())]);
  return out;
}

}  // namespace

IntMatrix bonding_h1_map(const FilteredSpace& space, int j, int k) {
  if (j < 1 || k < 1 || j > space.num_scales() || k > space.num_scales() || j < k)
    throw Error(ErrorCode::BadScalePair, "need scales k <= j (j finer)", j);
  const H1Data src = h1_data(space, j);
  const H1Data dst = h1_data(space, k);
  const std::size_t src_gens = src.presentation.generator_edges.size();
  const std::size_t dst_gens = dst.presentation.generator_edges.size();

  // Each source generator as a loop at scale j, read at scale k.
  std::vector<IntVector> generator_images;
  for (const auto& [a, b] : src.presentation.generator_edges) {
    std::vector<Point> to_a = path_to_root(src.presentation, a);
    std::reverse(to_a.begin(), to_a.end());
    std::vector<Point> from_b = path_to_root(src.presentation, b);
    std::vector<Point> loop = to_a;
    loop.insert(loop.end(), from_b.begin(), from_b.end());
    generator_images.push_back(abelianize(chain_word(dst.presentation, Chain{k, loop}), dst_gens));
  }

  const std::size_t cols = src.group().num_coordinates();
  const std::size_t rows = dst.group().num_coordinates();
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < cols; ++i) {
    IntVector unit(cols);
    unit[i] = 1;
    const IntVector gens = src.quotient.representative(unit);
    IntVector image(dst_gens);
    for (std::size_t g = 0; g < src_gens; ++g) {
      if (gens[g].is_zero()) continue;
      for (std::size_t t = 0; t < dst_gens; ++t) image[t] += gens[g] * generator_images[g][t];
    }
    const IntVector coords = dst.quotient.coordinates(image);
    for (std::size_t r = 0; r < rows; ++r) m(r, i) = coords[r];
  }
  return m;
}

std::vector<std::pair<int, int>> critical_scales(const FilteredSpace& space) {
  std::vector<std::pair<int, int>> out;
  for (int k = 1; k < space.num_scales(); ++k) {
    const IntMatrix m = bonding_h1_map(space, k + 1, k);
    if (!is_isomorphism(m, h1_at_scale(space, k + 1), h1_at_scale(space, k))) out.emplace_back(k, k + 1);
  }
  return out;
}

std::vector<int> lift_chain(PartialCover& cover, int start, const Chain& downstairs, std::size_t max_new_vertices) {
  if (downstairs.scale < cover.scale())
    throw Error(ErrorCode::ScaleMismatch, "chain is coarser than the cover's scale", downstairs.scale);
  if (!is_chain(cover.space(), downstairs.scale, downstairs.seq))
    throw Error(ErrorCode::NotAChain, "not a chain at its scale", downstairs.scale);
  if (start < 0 || static_cast<std::size_t>(start) >= cover.size())
    throw Error(ErrorCode::InvalidArgument, "no such cover vertex", start);
  if (cover.endpoint(start) != downstairs.front())
    throw Error(ErrorCode::EndpointMismatch, "chain does not start at the vertex's endpoint");
  const std::size_t before = cover.size();
  std::vector<int> out{start};
  for (std::size_t i = 1; i < downstairs.seq.size(); ++i) {
    out.push_back(cover.resolve(out.back(), downstairs.seq[i]));
    if (cover.size() - before > max_new_vertices)
      throw Error(ErrorCode::BudgetExhausted, "lift needs more new cover vertices than allowed");
  }
  return out;
}

std::string to_dot(const PartialCover& cover) {
  std::ostringstream os;
  os << "graph cover {\n";
  for (std::size_t v = 0; v < cover.size(); ++v) {
    os << "  v" << v << " [label=\"";
    bool first = true;
    for (Point x : cover.representative(static_cast<int>(v)).seq) {
      os << (first ? "" : ".") << cover.space().name(x);
      first = false;
    }
    os << "\"];\n";
  }
  for (std::size_t v = 0; v < cover.size(); ++v)
    for (const auto& e : cover.edges(static_cast<int>(v)))
      if (e.target > static_cast<int>(v)) os << "  v" << v << " -- v" << e.target << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace ucover
