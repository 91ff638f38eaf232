#pragma once

// Words in a finite generating set and its inverses. Letter k > 0 is the
// k-th generator (1-based), -k its inverse.

#include <cstdlib>
#include <string>
#include <vector>

#include "nonarch/linalg.hpp"

namespace nonarch {

using Word = std::vector<int>;

namespace detail {
/// Position of a letter in the alphabet order g1, g1^-1, g2, g2^-1, ...
inline int letter_rank(int letter) { return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0); }
inline int rank_letter(int rank) { return rank % 2 == 0 ? rank / 2 + 1 : -(rank / 2 + 1); }
}  // namespace detail

/// Freely reduced words of length <= max_len over num_gens generators, in
/// shortlex order. The empty word comes first when include_empty is set.
inline std::vector<Word> enumerate_words(std::size_t num_gens, std::size_t max_len, bool include_empty = true) {
  std::vector<Word> out;
  if (include_empty) out.push_back({});
  std::vector<Word> layer{{}};
  const int alphabet = static_cast<int>(2 * num_gens);
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (int r = 0; r < alphabet; ++r) {
        const int letter = detail::rank_letter(r);
        if (!w.empty() && w.back() == -letter) continue;
        Word e = w;
        e.push_back(letter);
        next.push_back(std::move(e));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline std::string word_str(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (int letter : w) {
    if (!s.empty()) s += ' ';
    s += "g" + std::to_string(std::abs(letter));
    if (letter < 0) s += "^-1";
  }
  return s;
}

inline Word word_inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = -l;
  return out;
}

}  // namespace nonarch
