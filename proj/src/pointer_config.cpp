#include "rewire/pointer_config.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rewire {

namespace {

void check_bijection(const std::vector<int>& p, int n, const char* name) {
  if (static_cast<int>(p.size()) != n) {
    throw std::invalid_argument(std::string(name) + " pointer array has wrong length");
  }
  std::vector<char> seen(n, 0);
  for (int v : p) {
    if (v < 0 || v >= n) {
      throw std::invalid_argument(std::string(name) + " pointer target out of range");
    }
    if (seen[v]) {
      throw std::invalid_argument(std::string(name) + " pointer map is not a bijection");
    }
    seen[v] = 1;
  }
}

}  // namespace

void PointerConfig::validate() const {
  if (n < 3) throw std::invalid_argument("pointer config requires n >= 3");
  check_bijection(red, n, "red");
  check_bijection(blue, n, "blue");
}

PointerConfig make_canonical_config(int n) {
  PointerConfig c;
  c.n = n;
  c.red.resize(n);
  c.blue.resize(n);
  for (int i = 0; i < n; ++i) {
    c.red[i] = (i + 1) % n;
    c.blue[i] = i;
  }
  c.validate();
  return c;
}

PointerConfig make_random_config(int n, Rng& rng) {
  PointerConfig c;
  c.n = n;
  c.red.resize(n);
  c.blue.resize(n);
  std::iota(c.red.begin(), c.red.end(), 0);
  std::iota(c.blue.begin(), c.blue.end(), 0);
  // Fisher-Yates with our own draws, for cross-platform reproducibility.
  for (int i = n - 1; i > 0; --i) {
    std::swap(c.red[i], c.red[rng.uniform_int(i + 1)]);
  }
  for (int i = n - 1; i > 0; --i) {
    std::swap(c.blue[i], c.blue[rng.uniform_int(i + 1)]);
  }
  c.validate();
  return c;
}

std::string config_to_text(const PointerConfig& config) {
  config.validate();
  std::ostringstream out;
  out << "N " << config.n << "\n";
  for (int i = 0; i < config.n; ++i) {
    out << "red " << (i + 1) << " " << (config.red[i] + 1) << "\n";
  }
  for (int i = 0; i < config.n; ++i) {
    out << "blue " << (i + 1) << " " << (config.blue[i] + 1) << "\n";
  }
  return out.str();
}

PointerConfig config_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok != "N") {
    throw std::invalid_argument("config text must start with 'N <n>'");
  }
  int n = 0;
  if (!(in >> n) || n < 3) {
    throw std::invalid_argument("config text has invalid n");
  }
  PointerConfig c;
  c.n = n;
  c.red.assign(n, -1);
  c.blue.assign(n, -1);
  std::string color;
  int i = 0;
  int j = 0;
  int lines = 0;
  while (in >> color >> i >> j) {
    if (i < 1 || i > n || j < 1 || j > n) {
      throw std::invalid_argument("config text index out of range");
    }
    if (color == "red") {
      c.red[i - 1] = j - 1;
    } else if (color == "blue") {
      c.blue[i - 1] = j - 1;
    } else {
      throw std::invalid_argument("config text has unknown color '" + color + "'");
    }
    ++lines;
  }
  if (!in.eof()) throw std::invalid_argument("config text has a malformed line");
  if (lines != 2 * n) throw std::invalid_argument("config text has wrong line count");
  c.validate();
  return c;
}

}  // namespace rewire
