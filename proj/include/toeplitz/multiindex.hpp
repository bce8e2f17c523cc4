#pragma once

// Multi-index combinatorics: canonical representatives, permutation orbits
// under S_n and their even/odd halves under A_n.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace toeplitz {

inline constexpr int kMaxDimension = 12;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void validate_dimension(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw DimensionError("dimension n must lie in [1, " + std::to_string(kMaxDimension) +
                         "], got " + std::to_string(n));
  }
}

// Exponent tuple m = (m_1, ..., m_n), every entry >= 0.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
    if (exponents_.empty()) throw DimensionError("multi-index must have at least one entry");
    for (int e : exponents_) {
      if (e < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
    }
  }

  MultiIndex(std::initializer_list<int> exponents)
      : MultiIndex(std::vector<int>(exponents)) {}

  static MultiIndex zero(int n) {
    validate_dimension(n);
    return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  int size() const { return static_cast<int>(exponents_.size()); }
  int operator[](int k) const { return exponents_[static_cast<std::size_t>(k)]; }
  const std::vector<int>& exponents() const { return exponents_; }
  auto begin() const { return exponents_.begin(); }
  auto end() const { return exponents_.end(); }

  // |m|
  int degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

  // ln(m!) = sum_k ln(m_k!)
  double log_factorial() const {
    double s = 0.0;
    for (int e : exponents_) s += std::lgamma(static_cast<double>(e) + 1.0);
    return s;
  }

  bool is_weakly_decreasing() const {
    return std::is_sorted(exponents_.begin(), exponents_.end(), std::greater<>{});
  }

  bool is_strictly_decreasing() const {
    return std::adjacent_find(exponents_.begin(), exponents_.end(), std::less_equal<>{}) ==
           exponents_.end();
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (i) os << ',';
      os << exponents_[i];
    }
    os << ')';
    return os.str();
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& m) {
    return os << m.to_string();
  }

 private:
  std::vector<int> exponents_;
};

// Bijection of {0, ..., n-1}. Acts on tuples by sigma(m)_i = m_{sigma(i)}.
class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
    const int n = size();
    if (n < 1) throw DimensionError("permutation must act on at least one point");
    std::vector<bool> seen(map_.size(), false);
    for (int v : map_) {
      if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
        throw std::invalid_argument("permutation mapping is not a bijection");
      }
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
  }

  // Transposition of zero-based positions i and j.
  static Permutation swap(int n, int i, int j) {
    auto p = identity(n).map_;
    std::swap(p.at(static_cast<std::size_t>(i)), p.at(static_cast<std::size_t>(j)));
    return Permutation(std::move(p));
  }

  // Cycle c_0 -> c_1 -> ... -> c_{k-1} -> c_0 (zero-based).
  static Permutation cycle(int n, const std::vector<int>& c) {
    auto p = identity(n).map_;
    for (std::size_t i = 0; i < c.size(); ++i) {
      p.at(static_cast<std::size_t>(c[i])) = c[(i + 1) % c.size()];
    }
    return Permutation(std::move(p));
  }

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int i) const { return map_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& mapping() const { return map_; }

  // +1 for even, -1 for odd; counted from the cycle decomposition.
  int sign() const {
    std::vector<bool> seen(map_.size(), false);
    int transpositions = 0;
    for (std::size_t s = 0; s < map_.size(); ++s) {
      if (seen[s]) continue;
      int len = 0;
      for (std::size_t j = s; !seen[j]; j = static_cast<std::size_t>(map_[j])) {
        seen[j] = true;
        ++len;
      }
      transpositions += len - 1;
    }
    return transpositions % 2 == 0 ? 1 : -1;
  }

  bool is_even() const { return sign() == 1; }

  Permutation inverse() const {
    std::vector<int> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[static_cast<std::size_t>(map_[i])] = static_cast<int>(i);
    return Permutation(std::move(inv));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

// compose(s, t) acts as "apply t, then s": apply(compose(s,t), m) == apply(s, apply(t, m)).
inline Permutation compose(const Permutation& s, const Permutation& t) {
  if (s.size() != t.size()) throw DimensionError("cannot compose permutations of different size");
  std::vector<int> out(static_cast<std::size_t>(s.size()));
  for (int i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = t(s(i));
  return Permutation(std::move(out));
}

inline MultiIndex apply_permutation(const Permutation& sigma, const MultiIndex& m) {
  if (sigma.size() != m.size()) {
    throw DimensionError("permutation acts on " + std::to_string(sigma.size()) +
                         " points but multi-index has " + std::to_string(m.size()) + " entries");
  }
  std::vector<int> out(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < m.size(); ++i) out[static_cast<std::size_t>(i)] = m[sigma(i)];
  return MultiIndex(std::move(out));
}

// Same action on real tuples (points r in tau(B^n)).
template <typename T>
std::vector<T> apply_permutation(const Permutation& sigma, const std::vector<T>& r) {
  if (static_cast<int>(r.size()) != sigma.size()) throw DimensionError("permutation/point size mismatch");
  std::vector<T> out(r.size());
  for (int i = 0; i < sigma.size(); ++i) out[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(sigma(i))];
  return out;
}

// All n! permutations in lexicographic order of their mappings.
inline std::vector<Permutation> all_permutations(int n) {
  validate_dimension(n);
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<Permutation> even_permutations(int n) {
  auto all = all_permutations(n);
  std::erase_if(all, [](const Permutation& p) { return !p.is_even(); });
  return all;
}

inline MultiIndex canonicalize(const MultiIndex& m) {
  auto e = m.exponents();
  std::sort(e.begin(), e.end(), std::greater<>{});
  return MultiIndex(std::move(e));
}

// Sign of the permutation that sorts m into weakly decreasing order, i.e. the
// parity of the inversion count. Only meaningful when entries are distinct.
inline int rearrangement_sign(const MultiIndex& m) {
  int inversions = 0;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = i + 1; j < m.size(); ++j) {
      if (m[i] < m[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

enum class OrbitClass { I0, Ic };

inline const char* to_string(OrbitClass c) { return c == OrbitClass::I0 ? "I0" : "Ic"; }

// The S_n orbit I_iota of a canonical index, with its even/odd split.
// For n = 1 there is no odd permutation, so every orbit is treated as I0.
struct Orbit {
  MultiIndex canonical;
  OrbitClass cls = OrbitClass::I0;
  std::vector<MultiIndex> elements;        // sorted, duplicate-free
  std::vector<MultiIndex> plus_elements;   // images under even permutations
  std::vector<MultiIndex> minus_elements;  // images under odd permutations

  int degree() const { return canonical.degree(); }
  std::size_t size() const { return elements.size(); }
  bool is_split() const { return cls == OrbitClass::Ic; }
};

inline OrbitClass classify_index(const MultiIndex& canonical) {
  if (canonical.size() >= 2 && canonical.is_strictly_decreasing()) return OrbitClass::Ic;
  return OrbitClass::I0;
}

namespace detail {
inline void sort_desc(std::vector<MultiIndex>& v) { std::sort(v.begin(), v.end(), std::greater<>{}); }
}  // namespace detail

// Walks distinct rearrangements of the multiset directly (no n! fan-out for
// orbits with repeated entries).
inline Orbit orbit_of(const MultiIndex& m) {
  validate_dimension(m.size());
  Orbit o;
  o.canonical = canonicalize(m);
  o.cls = classify_index(o.canonical);

  auto e = o.canonical.exponents();
  std::sort(e.begin(), e.end());
  do {
    o.elements.emplace_back(e);
  } while (std::next_permutation(e.begin(), e.end()));
  detail::sort_desc(o.elements);

  if (o.cls == OrbitClass::Ic) {
    for (const auto& x : o.elements) {
      (rearrangement_sign(x) > 0 ? o.plus_elements : o.minus_elements).push_back(x);
    }
  } else {
    o.plus_elements = o.elements;
    o.minus_elements = o.elements;
  }
  return o;
}

// n! / prod(multiplicity!)
inline long long orbit_size(const MultiIndex& m) {
  validate_dimension(m.size());
  auto e = canonicalize(m).exponents();
  long long result = 1;
  int placed = 0;
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    // multiply by binom(placed + run, run)
    const int run = static_cast<int>(j - i);
    for (int k = 1; k <= run; ++k) {
      result = result * (placed + k) / k;
    }
    placed += run;
    i = j;
  }
  return result;
}

namespace detail {
inline void partitions_desc(int remaining, int max_part, int slots, std::vector<int>& cur,
                            std::vector<MultiIndex>& out) {
  if (slots == 0) {
    if (remaining == 0) out.emplace_back(cur);
    return;
  }
  const int hi = std::min(remaining, max_part);
  for (int v = hi; v >= 0; --v) {
    if (static_cast<long long>(v) * slots < remaining) break;
    cur.push_back(v);
    partitions_desc(remaining - v, v, slots - 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace detail

// Canonical representatives iota with |iota| == degree, lexicographically descending.
inline std::vector<MultiIndex> canonical_of_degree(int n, int degree) {
  validate_dimension(n);
  std::vector<MultiIndex> out;
  std::vector<int> cur;
  detail::partitions_desc(degree, degree, n, cur, out);
  return out;
}

// Every canonical iota with |iota| <= max_degree, ordered by (degree, lex descending).
inline std::vector<Orbit> enumerate_canonical(int n, int max_degree) {
  validate_dimension(n);
  if (max_degree < 0) throw std::invalid_argument("max_degree must be nonnegative");
  std::vector<Orbit> out;
  for (int d = 0; d <= max_degree; ++d) {
    for (auto& c : canonical_of_degree(n, d)) out.push_back(orbit_of(c));
  }
  return out;
}

// All m in Z_+^n with |m| <= max_degree, in (degree, lex descending) order.
inline std::vector<MultiIndex> all_indices_up_to(int n, int max_degree) {
  std::vector<MultiIndex> out;
  for (const auto& o : enumerate_canonical(n, max_degree)) {
    out.insert(out.end(), o.elements.begin(), o.elements.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a > b;
  });
  return out;
}

}  // namespace toeplitz
