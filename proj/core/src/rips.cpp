#include "ucover/rips.hpp"

#include <algorithm>
#include <deque>

namespace ucover {

Rips2Skeleton rips_2_skeleton(const FilteredSpace& space, int k) {
  const Relation& rel = space.scale(k);
  Rips2Skeleton out;
  out.scale = k;
  out.vertices = space.size();
  out.edges = rel.pairs();
  for (const auto& [a, b] : rel.pairs())
    for (Point c : rel.neighbors(b))
      if (c > b && rel.contains(a, c)) out.triangles.push_back({a, b, c});
  std::sort(out.triangles.begin(), out.triangles.end());
  return out;
}

// -------------------------------------------------------------- presentation

bool GroupPresentation::covers(Point x) const {
  return std::binary_search(points.begin(), points.end(), x);
}

Word GroupPresentation::step(Point a, Point b) const {
  if (a == b) return {};
  const PointPair key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edge_keys.begin(), edge_keys.end(), key);
  if (it == edge_keys.end() || *it != key) throw Error(ErrorCode::NotAChain, "step is not an edge at this scale");
  const int g = edge_generator[static_cast<std::size_t>(it - edge_keys.begin())];
  if (g < 0) return {};
  return {letter(static_cast<std::size_t>(g), a > b)};
}

namespace {

GroupPresentation build_presentation(const FilteredSpace& space, int k, Point basepoint, bool forest) {
  space.check_point(basepoint);
  const Relation& rel = space.scale(k);
  const int n = space.size();

  GroupPresentation p;
  p.scale = k;
  p.basepoint = basepoint;
  p.forest = forest;
  p.parent.assign(static_cast<std::size_t>(n), -1);

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  auto grow = [&](Point root) {
    std::deque<Point> queue{root};
    seen[static_cast<std::size_t>(root)] = true;
    while (!queue.empty()) {
      Point x = queue.front();
      queue.pop_front();
      p.points.push_back(x);
      for (Point y : rel.neighbors(x)) {
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = true;
        p.parent[static_cast<std::size_t>(y)] = x;
        queue.push_back(y);
      }
    }
  };
  grow(basepoint);
  if (forest)
    for (Point x = 0; x < n; ++x)
      if (!seen[static_cast<std::size_t>(x)]) grow(x);
  std::sort(p.points.begin(), p.points.end());

  for (const auto& e : rel.pairs()) {
    if (!seen[static_cast<std::size_t>(e.first)]) continue;
    p.edge_keys.push_back(e);
    const bool tree = p.parent[static_cast<std::size_t>(e.first)] == e.second ||
                      p.parent[static_cast<std::size_t>(e.second)] == e.first;
    if (tree) {
      p.edge_generator.push_back(-1);
    } else {
      p.edge_generator.push_back(static_cast<int>(p.generator_edges.size()));
      p.generator_edges.push_back(e);
    }
  }

  for (const auto& t : rips_2_skeleton(space, k).triangles) {
    if (!seen[static_cast<std::size_t>(t[0])]) continue;
    Word w = p.step(t[0], t[1]);
    for (Letter l : p.step(t[1], t[2])) w.push_back(l);
    for (Letter l : p.step(t[2], t[0])) w.push_back(l);
    p.relators.push_back(cyclic_reduce(w));
  }
  return p;
}

}  // namespace

GroupPresentation presentation_at_scale(const FilteredSpace& space, int k, Point basepoint) {
  return build_presentation(space, k, basepoint, false);
}

GroupPresentation forest_presentation(const FilteredSpace& space, int k) {
  if (space.size() == 0) {
    space.check_scale(k);
    GroupPresentation p;
    p.scale = k;
    p.forest = true;
    return p;
  }
  return build_presentation(space, k, 0, true);
}

EdgeWord chain_word(const GroupPresentation& p, const Chain& chain) {
  if (chain.scale != p.scale) throw Error(ErrorCode::ScaleMismatch, "chain scale differs from presentation scale");
  if (chain.seq.empty()) throw Error(ErrorCode::EmptyChain, "chains are nonempty");
  for (Point x : chain.seq)
    if (!p.covers(x)) throw Error(ErrorCode::OutsideComponent, "chain leaves the presented component", x);
  Word w;
  for (std::size_t i = 0; i + 1 < chain.seq.size(); ++i)
    for (Letter l : p.step(chain.seq[i], chain.seq[i + 1])) w.push_back(l);
  return free_reduce(w);
}

// ------------------------------------------------------------------------ H1

IntVector H1Data::coordinates(const Word& w) const {
  return quotient.coordinates(abelianize(w, presentation.generator_edges.size()));
}

namespace {

H1Data make_h1(GroupPresentation p) {
  const std::size_t g = p.generator_edges.size();
  RowQuotient q = RowQuotient::of(p.group().relation_matrix(), g);
  return H1Data{std::move(p), std::move(q)};
}

}  // namespace

H1Data h1_data(const FilteredSpace& space, int k) { return make_h1(forest_presentation(space, k)); }

H1Data h1_data(const FilteredSpace& space, int k, Point basepoint) {
  return make_h1(presentation_at_scale(space, k, basepoint));
}

AbelianGroupInv h1_at_scale(const FilteredSpace& space, int k) { return h1_data(space, k).group(); }

AbelianGroupInv h1_at_scale(const FilteredSpace& space, int k, Point basepoint) {
  return h1_data(space, k, basepoint).group();
}

IntVector h1_class(const FilteredSpace& space, int k, const Chain& loop) {
  if (!is_chain(space, k, loop.seq)) throw Error(ErrorCode::NotAChain, "not a chain at this scale", k);
  if (loop.front() != loop.back()) throw Error(ErrorCode::NotALoop, "chain endpoints differ");
  H1Data h = h1_data(space, k);
  return h.coordinates(chain_word(h.presentation, Chain{k, loop.seq}));
}

// ------------------------------------------------------------------ homotopy

std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "yes";
    case Answer::No:
      return "no";
    case Answer::Unknown:
      return "unknown";
  }
  return "unknown";
}

HomotopyContext::HomotopyContext(const FilteredSpace& space, int k, Point basepoint, HomotopyBudget budget)
    : space_(&space), scale_(k), budget_(budget), presentation_(presentation_at_scale(space, k, basepoint)) {
  const Presentation g = presentation_.group();
  h1_ = RowQuotient::of(g.relation_matrix(), g.generators);
  tietze_ = tietze_simplify(g, budget_.tietze);
}

const CosetTable* HomotopyContext::regular_table() {
  if (!enumeration_tried_) {
    enumeration_tried_ = true;
    table_ = enumerate_cosets(tietze_.simplified, {}, budget_.coset_rows);
  }
  return table_ ? &*table_ : nullptr;
}

std::optional<std::size_t> HomotopyContext::group_order() {
  if (tietze_.simplified.generators == 0) return 1;
  if (h1_.group.rank > 0) return std::nullopt;
  if (const CosetTable* t = regular_table()) return t->index();
  return std::nullopt;
}

HomotopyVerdict HomotopyContext::is_trivial(const Word& word) {
  HomotopyVerdict v;
  const Word w = free_reduce(word);
  if (w.empty()) {
    v.answer = Answer::Yes;
    v.method = "free-reduction";
    return v;
  }
  IntVector c = h1_.coordinates(abelianize(w, presentation_.generator_edges.size()));
  if (!h1_.is_zero(c)) {
    v.answer = Answer::No;
    v.method = "h1";
    v.h1_witness = std::move(c);
    return v;
  }
  const Word m = tietze_.map(w);
  if (m.empty()) {
    v.answer = Answer::Yes;
    v.method = tietze_.simplified.generators == 0 ? "trivial-group" : "tietze";
    return v;
  }
  if (tietze_.simplified.relators.empty()) {
    // The simplified group is free and m is a nonempty reduced word.
    v.answer = Answer::No;
    v.method = "free-group";
    return v;
  }
  // An infinite abelianization means the regular enumeration cannot close.
  if (h1_.group.rank == 0) {
    if (const CosetTable* t = regular_table()) {
      v.answer = t->act(0, m) == 0 ? Answer::Yes : Answer::No;
      v.method = "coset-enumeration";
      return v;
    }
  }
  QuotientSearchResult q =
      find_separating_quotient(tietze_.simplified, m, budget_.max_quotient_degree, budget_.quotient_search_nodes);
  if (q.separating) {
    v.answer = Answer::No;
    v.method = "finite-quotient";
    v.quotient_witness = std::move(q.separating);
    return v;
  }
  v.answer = Answer::Unknown;
  v.method = "budget";
  v.exhausted_budget = h1_.group.rank == 0 ? "coset-rows" : "quotient-search";
  return v;
}

HomotopyVerdict HomotopyContext::homotopic(const Chain& c, const Chain& d) {
  if (c.scale != scale_ || d.scale != scale_) throw Error(ErrorCode::ScaleMismatch, "chain scale differs");
  if (c.seq.empty() || d.seq.empty()) throw Error(ErrorCode::EmptyChain, "chains are nonempty");
  if (c.front() != d.front() || c.back() != d.back())
    throw Error(ErrorCode::EndpointMismatch, "chains do not share endpoints");
  if (c.seq == d.seq) {
    HomotopyVerdict v;
    v.answer = Answer::Yes;
    v.method = "identical";
    return v;
  }
  const Word wc = chain_word(presentation_, c);
  const Word wd = chain_word(presentation_, d);
  return is_trivial(concat(wc, inverse(wd)));
}

HomotopyVerdict decide_e_homotopic(const FilteredSpace& space, int k, const Chain& c, const Chain& d,
                                   const HomotopyBudget& budget) {
  if (c.scale != k || d.scale != k) throw Error(ErrorCode::ScaleMismatch, "chain scale differs from k");
  if (!is_chain(space, k, c.seq) || !is_chain(space, k, d.seq))
    throw Error(ErrorCode::NotAChain, "not a chain at this scale", k);
  if (c.front() != d.front() || c.back() != d.back())
    throw Error(ErrorCode::EndpointMismatch, "chains do not share endpoints");
  HomotopyContext ctx(space, k, c.front(), budget);
  return ctx.homotopic(c, d);
}

Chain reduce_chain(const FilteredSpace& space, int k, const Chain& chain) {
  if (!is_chain(space, k, chain.seq)) throw Error(ErrorCode::NotAChain, "not a chain at this scale", k);
  const Relation& rel = space.scale(k);
  std::vector<Point> s = chain.seq;
  for (;;) {
    auto dup = std::adjacent_find(s.begin(), s.end());
    if (dup != s.end()) {
      s.erase(dup);
      continue;
    }
    bool removed = false;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
      if (rel.contains(s[i - 1], s[i + 1])) {
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    if (!removed) break;
  }
  return Chain{k, std::move(s)};
}

}  // namespace ucover
