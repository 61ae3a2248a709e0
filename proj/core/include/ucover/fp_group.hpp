#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ucover/integer_matrix.hpp"

namespace ucover {

/// Generator g (0-based) is written +(g+1); its inverse is -(g+1).
using Letter = int;
using Word = std::vector<Letter>;

inline std::size_t generator_of(Letter l) { return static_cast<std::size_t>((l > 0 ? l : -l) - 1); }
inline Letter letter(std::size_t generator, bool inverse = false) {
  const int l = static_cast<int>(generator) + 1;
  return inverse ? -l : l;
}

Word free_reduce(const Word& w);
/// Free reduction followed by removal of inverse letter pairs across the ends.
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
/// Exponent sum per generator.
IntVector abelianize(const Word& w, std::size_t generators);
std::string to_string(const Word& w);

struct Presentation {
  std::size_t generators = 0;
  std::vector<Word> relators;

  /// Relator exponent sums as rows (relators × generators).
  IntMatrix relation_matrix() const;
};

struct TietzeBudget {
  std::size_t max_passes = 64;
  std::size_t max_total_length = 20000;
};

/// Result of eliminating generators that occur exactly once in a relator.
struct TietzeResult {
  Presentation simplified;
  /// Original generator id of each surviving generator.
  std::vector<std::size_t> kept;
  /// Per original generator: its value as a word over surviving generators.
  std::vector<Word> substitution;
  std::size_t eliminations = 0;
  bool truncated = false;

  /// Rewrites a word over the original generators.
  Word map(const Word& original) const;
};

TietzeResult tietze_simplify(const Presentation& p, const TietzeBudget& budget = {});

/// Complete coset table; columns are 2g (generator g) and 2g+1 (its inverse).
struct CosetTable {
  std::size_t generators = 0;
  std::vector<std::vector<int>> table;
  std::size_t rows_used = 0;

  std::size_t index() const noexcept { return table.size(); }
  int act(int coset, const Word& w) const;
};

/// Todd–Coxeter (HLT strategy with coincidence processing) for the cosets of
/// the subgroup generated by `subgroup`. Returns nullopt when more than
/// `max_rows` coset rows would be needed.
std::optional<CosetTable> enumerate_cosets(const Presentation& p, const std::vector<Word>& subgroup,
                                           std::size_t max_rows);

/// Images of the generators in a symmetric group S_degree (right actions).
struct PermutationImages {
  int degree = 0;
  std::vector<std::vector<int>> images;
};

struct QuotientSearchResult {
  std::optional<PermutationImages> separating;
  bool exhausted = false;
};

/// Searches homomorphisms into S_2 .. S_max_degree under which `w` is not
/// the identity. Every returned homomorphism satisfies all relators.
QuotientSearchResult find_separating_quotient(const Presentation& p, const Word& w, int max_degree,
                                              std::size_t node_budget);

/// Image of `w` under the permutation representation (identity if empty).
std::vector<int> evaluate(const PermutationImages& rep, const Word& w);

}  // namespace ucover
