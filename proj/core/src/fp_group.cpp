#include "ucover/fp_group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ucover/error.hpp"

namespace ucover {

// ------------------------------------------------------------------ words

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = -l;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(out);
}

IntVector abelianize(const Word& w, std::size_t generators) {
  IntVector v(generators);
  for (Letter l : w) {
    const std::size_t g = generator_of(l);
    if (g >= generators) throw Error(ErrorCode::InvalidArgument, "letter outside generator range");
    v[g] += l > 0 ? 1 : -1;
  }
  return v;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << " ";
    os << "g" << generator_of(w[i]) << (w[i] < 0 ? "^-1" : "");
  }
  return os.str();
}

IntMatrix Presentation::relation_matrix() const {
  std::vector<IntVector> rows;
  rows.reserve(relators.size());
  for (const auto& r : relators) rows.push_back(abelianize(r, generators));
  return IntMatrix::from_rows(rows, generators);
}

// ----------------------------------------------------------------- Tietze

namespace {

Word substitute(const Word& w, std::size_t gen, const Word& value) {
  const Word value_inv = inverse(value);
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (generator_of(l) == gen) {
      const Word& piece = l > 0 ? value : value_inv;
      out.insert(out.end(), piece.begin(), piece.end());
    } else {
      out.push_back(l);
    }
  }
  return free_reduce(out);
}

std::size_t total_length(const std::vector<Word>& words) {
  std::size_t n = 0;
  for (const auto& w : words) n += w.size();
  return n;
}

void normalize_relators(std::vector<Word>& relators) {
  std::vector<Word> out;
  for (auto& r : relators) {
    Word c = cyclic_reduce(r);
    if (c.empty()) continue;
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  relators = std::move(out);
}

}  // namespace

Word TietzeResult::map(const Word& original) const {
  Word out;
  for (Letter l : original) {
    const std::size_t g = generator_of(l);
    if (g >= substitution.size()) throw Error(ErrorCode::InvalidArgument, "letter outside generator range");
    const Word& piece = substitution[g];
    if (l > 0) {
      out.insert(out.end(), piece.begin(), piece.end());
    } else {
      Word inv = inverse(piece);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return free_reduce(out);
}

TietzeResult tietze_simplify(const Presentation& p, const TietzeBudget& budget) {
  // Work over original generator ids; renumber at the end.
  std::vector<Word> relators = p.relators;
  normalize_relators(relators);
  std::vector<Word> value(p.generators);
  std::vector<bool> alive(p.generators, true);
  for (std::size_t g = 0; g < p.generators; ++g) value[g] = Word{letter(g)};

  TietzeResult out;
  for (std::size_t pass = 0;; ++pass) {
    if (pass >= budget.max_passes) {
      out.truncated = true;
      break;
    }
    // Pick the shortest relator containing a generator exactly once.
    std::optional<std::pair<std::size_t, std::size_t>> choice;
    for (std::size_t ri = 0; ri < relators.size(); ++ri) {
      if (choice && relators[ri].size() >= relators[choice->first].size()) continue;
      std::vector<std::size_t> count(p.generators, 0);
      for (Letter l : relators[ri]) ++count[generator_of(l)];
      for (std::size_t g = 0; g < p.generators; ++g)
        if (count[g] == 1) {
          choice = std::make_pair(ri, g);
          break;
        }
    }
    if (!choice) break;
    auto [ri, g] = *choice;
    Word r = relators[ri];
    auto pos = std::find_if(r.begin(), r.end(), [g = g](Letter l) { return generator_of(l) == g; });
    std::rotate(r.begin(), pos, r.end());
    const bool positive = r.front() > 0;
    Word rest(r.begin() + 1, r.end());
    // x rest = 1  =>  x = rest^-1 ;  x^-1 rest = 1  =>  x = rest
    Word x_value = positive ? inverse(rest) : rest;

    std::vector<Word> next;
    for (std::size_t i = 0; i < relators.size(); ++i)
      if (i != ri) next.push_back(substitute(relators[i], g, x_value));
    normalize_relators(next);
    std::vector<Word> next_values = value;
    for (auto& v : next_values) v = substitute(v, g, x_value);
    if (total_length(next) + total_length(next_values) > budget.max_total_length) {
      out.truncated = true;
      break;
    }
    relators = std::move(next);
    value = std::move(next_values);
    alive[g] = false;
    ++out.eliminations;
  }

  std::vector<int> renumber(p.generators, -1);
  for (std::size_t g = 0; g < p.generators; ++g)
    if (alive[g]) {
      renumber[g] = static_cast<int>(out.kept.size());
      out.kept.push_back(g);
    }
  auto rename = [&](const Word& w) {
    Word o;
    o.reserve(w.size());
    for (Letter l : w) {
      const int n = renumber[generator_of(l)];
      o.push_back(letter(static_cast<std::size_t>(n), l < 0));
    }
    return o;
  };
  out.simplified.generators = out.kept.size();
  for (const auto& r : relators) out.simplified.relators.push_back(rename(r));
  out.substitution.reserve(p.generators);
  for (const auto& v : value) out.substitution.push_back(rename(v));
  return out;
}

// ------------------------------------------------------ coset enumeration

namespace {

inline std::size_t column_of(Letter l) { return 2 * generator_of(l) + (l < 0 ? 1 : 0); }

class CosetEnumerator {
 public:
  CosetEnumerator(std::size_t generators, std::size_t max_rows)
      : cols_(2 * generators), max_rows_(max_rows) {
    add_row();
  }

  bool overflow() const { return overflow_; }
  bool alive(int c) const { return parent_[static_cast<std::size_t>(c)] == c; }
  std::size_t rows() const { return parent_.size(); }

  int& at(int c, std::size_t x) { return table_[static_cast<std::size_t>(c) * cols_ + x]; }

  int define(int c, std::size_t x) {
    if (parent_.size() >= max_rows_) {
      overflow_ = true;
      return -1;
    }
    const int n = add_row();
    at(c, x) = n;
    at(n, x ^ 1U) = c;
    return n;
  }

  void scan_and_fill(int c, const Word& w) {
    if (w.empty()) return;
    int f = c, b = c;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    for (;;) {
      while (i <= j && at(f, column_of(w[i])) >= 0) {
        f = at(f, column_of(w[i]));
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, column_of(w[j]) ^ 1U) >= 0) {
        b = at(b, column_of(w[j]) ^ 1U);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        at(f, column_of(w[i])) = b;
        at(b, column_of(w[i]) ^ 1U) = f;
        return;
      }
      if (define(f, column_of(w[i])) < 0) return;
    }
  }

  void fill_row(int c) {
    for (std::size_t x = 0; x < cols_ && alive(c); ++x)
      if (at(c, x) < 0 && define(c, x) < 0) return;
  }

  CosetTable finish(std::size_t generators) {
    std::vector<int> index(parent_.size(), -1);
    int next = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c)
      if (alive(static_cast<int>(c))) index[c] = next++;
    CosetTable out;
    out.generators = generators;
    out.rows_used = parent_.size();
    out.table.assign(static_cast<std::size_t>(next), std::vector<int>(cols_, -1));
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (index[c] < 0) continue;
      for (std::size_t x = 0; x < cols_; ++x) {
        const int target = at(static_cast<int>(c), x);
        out.table[static_cast<std::size_t>(index[c])][x] = index[static_cast<std::size_t>(rep(target))];
      }
    }
    return out;
  }

 private:
  int add_row() {
    const int n = static_cast<int>(parent_.size());
    parent_.push_back(n);
    table_.resize(table_.size() + cols_, -1);
    return n;
  }

  int rep(int k) {
    int r = k;
    while (parent_[static_cast<std::size_t>(r)] != r) r = parent_[static_cast<std::size_t>(r)];
    while (parent_[static_cast<std::size_t>(k)] != r) {
      int next = parent_[static_cast<std::size_t>(k)];
      parent_[static_cast<std::size_t>(k)] = r;
      k = next;
    }
    return r;
  }

  void merge(int k, int l) {
    int a = rep(k), b = rep(l);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    queue_.push_back(b);
  }

  void coincidence(int a, int b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const int g = queue_[qi];
      for (std::size_t x = 0; x < cols_; ++x) {
        const int d = at(g, x);
        if (d < 0) continue;
        at(d, x ^ 1U) = -1;
        const int mu = rep(g);
        const int nu = rep(d);
        if (at(mu, x) >= 0) {
          merge(nu, at(mu, x));
        } else if (at(nu, x ^ 1U) >= 0) {
          merge(mu, at(nu, x ^ 1U));
        } else {
          at(mu, x) = nu;
          at(nu, x ^ 1U) = mu;
        }
      }
    }
  }

  std::size_t cols_;
  std::size_t max_rows_;
  bool overflow_ = false;
  std::vector<int> table_;
  std::vector<int> parent_;
  std::vector<int> queue_;
};

}  // namespace

int CosetTable::act(int coset, const Word& w) const {
  for (Letter l : w) coset = table[static_cast<std::size_t>(coset)][column_of(l)];
  return coset;
}

std::optional<CosetTable> enumerate_cosets(const Presentation& p, const std::vector<Word>& subgroup,
                                           std::size_t max_rows) {
  std::vector<Word> relators;
  for (const auto& r : p.relators) {
    Word c = cyclic_reduce(r);
    if (!c.empty()) relators.push_back(std::move(c));
  }
  CosetEnumerator e(p.generators, std::max<std::size_t>(max_rows, 1));
  for (const auto& h : subgroup) {
    e.scan_and_fill(0, free_reduce(h));
    if (e.overflow()) return std::nullopt;
  }
  for (std::size_t c = 0; c < e.rows(); ++c) {
    const int coset = static_cast<int>(c);
    if (!e.alive(coset)) continue;
    for (const auto& r : relators) {
      e.scan_and_fill(coset, r);
      if (e.overflow()) return std::nullopt;
      if (!e.alive(coset)) break;
    }
    if (!e.alive(coset)) continue;
    e.fill_row(coset);
    if (e.overflow()) return std::nullopt;
  }
  return e.finish(p.generators);
}

// --------------------------------------------------- finite quotient search

namespace {

using Perm = std::vector<int>;

Perm compose(const Perm& a, const Perm& b) {  // x -> b(a(x))
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = b[static_cast<std::size_t>(a[x])];
  return out;
}

Perm invert(const Perm& a) {
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[static_cast<std::size_t>(a[x])] = static_cast<int>(x);
  return out;
}

bool is_identity(const Perm& a) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] != static_cast<int>(x)) return false;
  return true;
}

Perm eval_word(const std::vector<Perm>& img, const std::vector<Perm>& inv, const Word& w, int degree) {
  Perm acc(static_cast<std::size_t>(degree));
  std::iota(acc.begin(), acc.end(), 0);
  for (Letter l : w) {
    const std::size_t g = generator_of(l);
    acc = compose(acc, l > 0 ? img[g] : inv[g]);
  }
  return acc;
}

}  // namespace

std::vector<int> evaluate(const PermutationImages& rep, const Word& w) {
  std::vector<Perm> inv;
  for (const auto& p : rep.images) inv.push_back(invert(p));
  return eval_word(rep.images, inv, w, rep.degree);
}

QuotientSearchResult find_separating_quotient(const Presentation& p, const Word& w, int max_degree,
                                              std::size_t node_budget) {
  QuotientSearchResult result;
  const std::size_t g = p.generators;
  if (g == 0 || free_reduce(w).empty()) return result;

  // Relator r is checked once its highest generator is assigned.
  std::vector<std::vector<const Word*>> due(g);
  for (const auto& r : p.relators) {
    if (r.empty()) continue;
    std::size_t top = 0;
    for (Letter l : r) top = std::max(top, generator_of(l));
    due[top].push_back(&r);
  }

  std::size_t nodes = 0;
  for (int degree = 2; degree <= max_degree; ++degree) {
    std::vector<Perm> elements;
    Perm perm(static_cast<std::size_t>(degree));
    std::iota(perm.begin(), perm.end(), 0);
    do elements.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<Perm> img(g, elements.front()), inv(g, elements.front());
    std::vector<std::size_t> choice(g, 0);
    // Iterative depth-first search over generator images.
    std::size_t depth = 0;
    bool descending = true;
    while (true) {
      if (descending) {
        choice[depth] = 0;
      } else {
        ++choice[depth];
      }
      if (choice[depth] >= elements.size()) {
        if (depth == 0) break;
        --depth;
        descending = false;
        continue;
      }
      if (++nodes > node_budget) {
        result.exhausted = true;
        return result;
      }
      img[depth] = elements[choice[depth]];
      inv[depth] = invert(img[depth]);
      bool ok = true;
      for (const Word* r : due[depth])
        if (!is_identity(eval_word(img, inv, *r, degree))) {
          ok = false;
          break;
        }
      if (!ok) {
        descending = false;
        continue;
      }
      if (depth + 1 == g) {
        if (!is_identity(eval_word(img, inv, w, degree))) {
          result.separating = PermutationImages{degree, img};
          return result;
        }
        descending = false;
        continue;
      }
      ++depth;
      descending = true;
    }
  }
  return result;
}

}  // namespace ucover
