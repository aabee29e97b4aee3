#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rewire/rng.hpp"

namespace rewire {

enum class Color { Red, Blue };

inline const char* color_name(Color c) { return c == Color::Red ? "red" : "blue"; }
inline Color other_color(Color c) { return c == Color::Red ? Color::Blue : Color::Red; }

// One node state: a position on the N-cycle plus two outgoing pointers,
// one per color.  Both pointer maps are permutations of {0,...,n-1}.
// Internal indices are 0-based; the text format is 1-based.
struct PointerConfig {
  int n = 0;
  std::vector<int> red;   // red[i]  = target of node i's red pointer
  std::vector<int> blue;  // blue[i] = target of node i's blue pointer

  std::vector<int>& perm(Color c) { return c == Color::Red ? red : blue; }
  const std::vector<int>& perm(Color c) const { return c == Color::Red ? red : blue; }

  bool operator==(const PointerConfig&) const = default;

  // Throws std::invalid_argument on n < 3, size mismatch, or non-bijection.
  void validate() const;
};

// blue = identity, red = +1 shift (doubled cycle as the blue phase graph).
PointerConfig make_canonical_config(int n);

// Both pointer maps drawn as independent uniform permutations.
PointerConfig make_random_config(int n, Rng& rng);

// Line-oriented text format (1-based, ascending source index):
//   N <n>
//   red <i> <j>    (n lines)
//   blue <i> <j>   (n lines)
std::string config_to_text(const PointerConfig& config);
PointerConfig config_from_text(const std::string& text);

}  // namespace rewire
