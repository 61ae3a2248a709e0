#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace ucover::oracle {

namespace {

Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Bareiss elimination; returns rank and leaves the last pivot as the
// determinant for square full-rank input.
std::size_t bareiss(Matrix& m, Integer* det) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  Integer prev = 1;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  if (det) *det = (r == rows && rows == cols) ? Integer(sign) * prev : Integer(0);
  return r;
}

// Calls fn on each k-subset of 0..n-1 until it returns false.
bool combinations(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return true;
  for (;;) {
    if (!fn(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::size_t rank(Matrix m) { return bareiss(m, nullptr); }

Integer determinant(Matrix m) {
  if (m.empty()) return 1;
  Integer d;
  bareiss(m, &d);
  return d;
}

std::vector<Integer> invariant_factors_by_minors(const Matrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  const std::size_t r = rank(m);
  std::vector<Integer> divisors{1};
  for (std::size_t size = 1; size <= r; ++size) {
    Integer g = 0;
    combinations(rows, size, [&](const std::vector<std::size_t>& ri) {
      return combinations(cols, size, [&](const std::vector<std::size_t>& ci) {
        Matrix sub(size, std::vector<Integer>(size));
        for (std::size_t a = 0; a < size; ++a)
          for (std::size_t b = 0; b < size; ++b) sub[a][b] = m[ri[a]][ci[b]];
        g = gcd(g, determinant(sub));
        return g != 1;
      });
    });
    divisors.push_back(g);
  }
  std::vector<Integer> out;
  for (std::size_t i = 1; i < divisors.size(); ++i) out.push_back(divisors[i] / divisors[i - 1]);
  return out;
}

Boundaries boundary_matrices(const FilteredSpace& space, int k) {
  const Relation& e = space.scale(k);
  const int n = space.size();
  Boundaries b;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (e.contains(x, y)) b.edges.push_back({x, y});
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int z = y + 1; z < n; ++z)
        if (e.contains(x, y) && e.contains(y, z) && e.contains(x, z)) b.triangles.push_back({x, y, z});
  b.d1.assign(static_cast<std::size_t>(n), std::vector<Integer>(b.edges.size()));
  for (std::size_t j = 0; j < b.edges.size(); ++j) {
    b.d1[static_cast<std::size_t>(b.edges[j].first)][j] = -1;
    b.d1[static_cast<std::size_t>(b.edges[j].second)][j] = 1;
  }
  b.d2.assign(b.edges.size(), std::vector<Integer>(b.triangles.size()));
  auto edge_index = [&](Point x, Point y) {
    return static_cast<std::size_t>(std::find(b.edges.begin(), b.edges.end(), PointPair{x, y}) - b.edges.begin());
  };
  for (std::size_t t = 0; t < b.triangles.size(); ++t) {
    const auto& tr = b.triangles[t];
    b.d2[edge_index(tr[1], tr[2])][t] += 1;
    b.d2[edge_index(tr[0], tr[2])][t] -= 1;
    b.d2[edge_index(tr[0], tr[1])][t] += 1;
  }
  return b;
}

H1 h1(const FilteredSpace& space, int k) {
  Boundaries b = boundary_matrices(space, k);
  const std::size_t cycles = b.edges.size() - (b.edges.empty() ? 0 : rank(b.d1));
  std::vector<Integer> factors = b.triangles.empty() ? std::vector<Integer>{} : invariant_factors_by_minors(b.d2);
  H1 out;
  out.rank = cycles - factors.size();
  for (const auto& d : factors)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

std::size_t rank_mod(const Matrix& m, int p) {
  std::vector<std::vector<long long>> a;
  for (const auto& row : m) {
    std::vector<long long> r;
    for (const auto& x : row) r.push_back(static_cast<long long>(((x % p) + p) % p));
    a.push_back(r);
  }
  auto inv = [p](long long x) {
    long long r = 1, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const long long iv = inv(a[r][c]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const long long factor = a[i][c] * iv % p;
      for (std::size_t j = c; j < cols; ++j) a[i][j] = ((a[i][j] - factor * a[r][j]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

std::size_t betti1(const FilteredSpace& space, int k, int p) {
  Boundaries b = boundary_matrices(space, k);
  auto rk = [p](const Matrix& m) { return m.empty() || m[0].empty() ? 0 : (p == 0 ? rank(m) : rank_mod(m, p)); };
  return b.edges.size() - rk(b.d1) - rk(b.d2);
}

std::size_t chain_classes(const FilteredSpace& space, int k, Point base, int steps, int max_points) {
  const Relation& e = space.scale(k);
  // All chains from base with at most max_points points, no repeated
  // consecutive points.
  std::map<std::vector<Point>, std::size_t> id;
  std::vector<std::vector<Point>> chains;
  std::function<void(std::vector<Point>&)> grow = [&](std::vector<Point>& c) {
    id.emplace(c, chains.size());
    chains.push_back(c);
    if (static_cast<int>(c.size()) == max_points) return;
    for (Point y = 0; y < space.size(); ++y) {
      if (y == c.back() || !e.contains(c.back(), y)) continue;
      c.push_back(y);
      grow(c);
      c.pop_back();
    }
  };
  std::vector<Point> start{base};
  grow(start);

  std::vector<std::size_t> parent(chains.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& c = chains[i];
    for (std::size_t j = 1; j + 1 < c.size(); ++j) {
      if (!e.contains(c[j - 1], c[j + 1])) continue;
      std::vector<Point> d = c;
      d.erase(d.begin() + static_cast<std::ptrdiff_t>(j));
      if (d[j - 1] == d[j]) d.erase(d.begin() + static_cast<std::ptrdiff_t>(j));
      parent[find(i)] = find(id.at(d));
    }
  }
  std::set<std::size_t> classes;
  for (std::size_t i = 0; i < chains.size(); ++i)
    if (static_cast<int>(chains[i].size()) <= steps + 1) classes.insert(find(i));
  return classes.size();
}

bool approx_unique_pair(const FilteredSpace& source, const std::vector<int>& f, int a, int b, bool strong,
                        int max_points) {
  const Relation& close = source.scale(strong ? b : a);
  const Relation& step = source.scale(b);
  const int n = source.size();
  // Chains from s sharing an image sequence end exactly in the set reached
  // by the subset construction below; every such set must be pairwise close.
  int targets = 0;
  for (int v : f) targets = std::max(targets, v + 1);
  std::function<bool(const std::vector<Point>&, int)> ok = [&](const std::vector<Point>& ends, int points) {
    for (Point x : ends)
      for (Point y : ends)
        if (!close.contains(x, y)) return false;
    if (points == max_points) return true;
    for (int v = 0; v < targets; ++v) {
      std::vector<Point> next;
      for (Point y = 0; y < n; ++y) {
        if (f[static_cast<std::size_t>(y)] != v) continue;
        for (Point x : ends)
          if (step.contains(x, y)) {
            next.push_back(y);
            break;
          }
      }
      if (!next.empty() && !ok(next, points + 1)) return false;
    }
    return true;
  };
  for (Point s = 0; s < n; ++s)
    if (!ok({s}, 1)) return false;
  return true;
}

bool approx_unique_enumerated(const FilteredSpace& source, const std::vector<int>& f, int a, int b, bool strong,
                              int max_points) {
  const Relation& close = source.scale(strong ? b : a);
  const Relation& step = source.scale(b);
  const int n = source.size();
  for (Point s = 0; s < n; ++s) {
    std::map<std::vector<int>, std::set<Point>> ends;
    std::vector<Point> chain{s};
    std::function<void()> walk = [&]() {
      std::vector<int> image;
      for (Point x : chain) image.push_back(f[static_cast<std::size_t>(x)]);
      ends[image].insert(chain.back());
      if (static_cast<int>(chain.size()) == max_points) return;
      for (Point y = 0; y < n; ++y)
        if (step.contains(chain.back(), y)) {
          chain.push_back(y);
          walk();
          chain.pop_back();
        }
    };
    walk();
    for (const auto& [image, pts] : ends)
      for (Point x : pts)
        for (Point y : pts)
          if (!close.contains(x, y)) return false;
  }
  return true;
}

}  // namespace ucover::oracle
