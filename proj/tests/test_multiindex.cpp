#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "toeplitz/multiindex.hpp"

using namespace toeplitz;

namespace {

std::set<oracle::Tuple> as_set(const std::vector<MultiIndex>& v) {
  std::set<oracle::Tuple> s;
  for (const auto& m : v) s.insert(m.exponents());
  return s;
}

}  // namespace

TEST(MultiIndex, DegreeAndFactorial) {
  MultiIndex m{3, 0, 2};
  EXPECT_EQ(m.degree(), 5);
  EXPECT_NEAR(std::exp(m.log_factorial()), 12.0, 1e-12);
  EXPECT_THROW(MultiIndex({1, -1}), std::invalid_argument);
  EXPECT_THROW(MultiIndex(std::vector<int>{}), DimensionError);
}

TEST(Canonicalize, Examples) {
  EXPECT_EQ(canonicalize({0, 2, 1}), (MultiIndex{2, 1, 0}));
  EXPECT_EQ(canonicalize({0, 0, 0}), (MultiIndex{0, 0, 0}));
  EXPECT_EQ(canonicalize({1, 3, 1, 5}), (MultiIndex{5, 3, 1, 1}));
  const MultiIndex c = canonicalize({4, 7, 0, 7});
  EXPECT_EQ(canonicalize(c), c);
  EXPECT_TRUE(c.is_weakly_decreasing());
}

TEST(ApplyPermutation, Examples) {
  // cycle (1 2 3): 1 -> 2 -> 3 -> 1
  EXPECT_EQ(apply_permutation(Permutation::cycle(3, {0, 1, 2}), {2, 1, 0}), (MultiIndex{1, 0, 2}));
  EXPECT_EQ(apply_permutation(Permutation::identity(3), {4, 0, 0}), (MultiIndex{4, 0, 0}));
  EXPECT_EQ(apply_permutation(Permutation::swap(3, 0, 1), {7, 5, 2}), (MultiIndex{5, 7, 2}));
  EXPECT_THROW(apply_permutation(Permutation::identity(2), {1, 2, 3}), DimensionError);
}

TEST(ApplyPermutation, PreservesDegreeAndFactorial) {
  const MultiIndex m{5, 0, 2, 2};
  for (const auto& s : all_permutations(4)) {
    const auto sm = apply_permutation(s, m);
    EXPECT_EQ(sm.degree(), m.degree());
    EXPECT_DOUBLE_EQ(sm.log_factorial(), m.log_factorial());
  }
}

TEST(Permutation, SignAndComposition) {
  EXPECT_EQ(Permutation::identity(4).sign(), 1);
  EXPECT_EQ(Permutation::swap(4, 1, 3).sign(), -1);
  EXPECT_EQ(Permutation::cycle(3, {0, 1, 2}).sign(), 1);
  EXPECT_EQ(Permutation::cycle(4, {0, 1, 2, 3}).sign(), -1);
  EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);

  const MultiIndex m{3, 1, 4, 1, 5};
  std::mt19937 rng(7);
  auto perms = all_permutations(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& s = perms[rng() % perms.size()];
    const auto& t = perms[rng() % perms.size()];
    const auto st = compose(s, t);
    EXPECT_EQ(st.sign(), s.sign() * t.sign());
    EXPECT_EQ(apply_permutation(st, m), apply_permutation(s, apply_permutation(t, m)));
    EXPECT_EQ(compose(s, s.inverse()), Permutation::identity(5));
  }
  for (const auto& p : perms) EXPECT_EQ(p.sign(), oracle::inversion_sign(p.mapping()));
}

TEST(OrbitOf, TwoOneZero) {
  const auto o = orbit_of({2, 1, 0});
  EXPECT_EQ(o.cls, OrbitClass::Ic);
  EXPECT_EQ(o.size(), 6u);
  EXPECT_EQ(as_set(o.plus_elements), (std::set<oracle::Tuple>{{2, 1, 0}, {1, 0, 2}, {0, 2, 1}}));
  EXPECT_EQ(as_set(o.minus_elements), (std::set<oracle::Tuple>{{2, 0, 1}, {1, 2, 0}, {0, 1, 2}}));
}

TEST(OrbitOf, RepeatedEntries) {
  const auto o = orbit_of({0, 1, 1});
  EXPECT_EQ(o.canonical, (MultiIndex{1, 1, 0}));
  EXPECT_EQ(o.cls, OrbitClass::I0);
  EXPECT_EQ(as_set(o.elements), (std::set<oracle::Tuple>{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));
  EXPECT_EQ(o.plus_elements, o.elements);
  EXPECT_EQ(o.minus_elements, o.elements);

  const auto c = orbit_of({1, 1, 1});
  EXPECT_EQ(c.cls, OrbitClass::I0);
  EXPECT_EQ(c.size(), 1u);
}

TEST(OrbitOf, OneDimensionalIsUnsplit) {
  const auto o = orbit_of({4});
  EXPECT_EQ(o.cls, OrbitClass::I0);
  EXPECT_EQ(o.size(), 1u);
  EXPECT_EQ(o.plus_elements, o.minus_elements);
}

TEST(OrbitOf, DimensionCap) {
  EXPECT_THROW(orbit_of(MultiIndex(std::vector<int>(13, 0))), DimensionError);
  EXPECT_NO_THROW(orbit_of(MultiIndex(std::vector<int>(12, 1))));
  EXPECT_THROW(enumerate_canonical(0, 2), DimensionError);
  EXPECT_THROW(enumerate_canonical(2, -1), std::invalid_argument);
}

TEST(EnumerateCanonical, Examples) {
  auto reps = [](int n, int d) {
    std::vector<MultiIndex> v;
    for (const auto& o : enumerate_canonical(n, d)) v.push_back(o.canonical);
    return v;
  };
  EXPECT_EQ(reps(3, 2), (std::vector<MultiIndex>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}}));
  EXPECT_EQ(reps(1, 3), (std::vector<MultiIndex>{{0}, {1}, {2}, {3}}));
  EXPECT_EQ(reps(2, 2), (std::vector<MultiIndex>{{0, 0}, {1, 0}, {2, 0}, {1, 1}}));
  std::size_t total = 0;
  for (const auto& o : enumerate_canonical(2, 2)) total += o.size();
  EXPECT_EQ(total, oracle::all_tuples(2, 2).size());
  EXPECT_EQ(total, 6u);
}

TEST(OrbitSize, Examples) {
  EXPECT_EQ(orbit_size({2, 1, 0}), 6);
  EXPECT_EQ(orbit_size({4, 4, 1}), 3);
  EXPECT_EQ(orbit_size({5, 5, 5, 5}), 1);
  EXPECT_EQ(orbit_size({3, 3, 1, 1, 0}), 30);
}

// The orbits partition {m : |m| <= d}, checked by set comparison with brute force.
TEST(Properties, OrbitsPartitionIndexBox) {
  for (int n = 1; n <= 4; ++n) {
    for (int d = 0; d <= 10; ++d) {
      std::set<oracle::Tuple> seen;
      std::size_t count = 0;
      for (const auto& o : enumerate_canonical(n, d)) {
        for (const auto& m : o.elements) seen.insert(m.exponents());
        count += o.size();
      }
      const auto expect = oracle::all_tuples(n, d);
      ASSERT_EQ(count, expect.size()) << "overlap at n=" << n << " d=" << d;
      ASSERT_EQ(seen, expect) << "n=" << n << " d=" << d;
    }
  }
}

TEST(Properties, OrbitMatchesBruteForce) {
  for (int n = 1; n <= 5; ++n) {
    for (const auto& o : enumerate_canonical(n, 7)) {
      const auto b = oracle::brute_orbit(o.canonical.exponents());
      EXPECT_EQ(as_set(o.elements), b.all);
      EXPECT_EQ(static_cast<long long>(o.size()), orbit_size(o.canonical));
      EXPECT_EQ(o.size(), as_set(o.elements).size());
      if (o.cls == OrbitClass::Ic) {
        EXPECT_EQ(as_set(o.plus_elements), b.even);
        EXPECT_EQ(as_set(o.minus_elements), b.odd);
        EXPECT_EQ(o.plus_elements.size(), o.minus_elements.size());
      } else {
        EXPECT_EQ(o.plus_elements, o.elements);
        EXPECT_EQ(o.minus_elements, o.elements);
      }
      EXPECT_EQ(o.cls == OrbitClass::Ic, n >= 2 && o.canonical.is_strictly_decreasing());
    }
  }
}

TEST(Properties, OddPermutationSwapsHalves) {
  for (int n = 2; n <= 4; ++n) {
    for (const auto& o : enumerate_canonical(n, 8)) {
      if (o.cls != OrbitClass::Ic) continue;
      const auto plus = as_set(o.plus_elements);
      const auto minus = as_set(o.minus_elements);
      for (const auto& s : all_permutations(n)) {
        if (s.is_even()) continue;
        std::set<oracle::Tuple> img;
        for (const auto& m : o.plus_elements) img.insert(apply_permutation(s, m).exponents());
        EXPECT_EQ(img, minus);
      }
      for (const auto& m : o.plus_elements) EXPECT_FALSE(minus.count(m.exponents()));
      EXPECT_EQ(plus.size() + minus.size(), o.size());
    }
  }
}

TEST(Properties, CanonicalizeIsPermutationInvariant) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<int> e(static_cast<std::size_t>(n));
    for (auto& x : e) x = static_cast<int>(rng() % 6);
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    const MultiIndex m(e);
    EXPECT_EQ(canonicalize(apply_permutation(Permutation(p), m)), canonicalize(m));
  }
}

TEST(AllIndices, OrderedByDegree) {
  const auto v = all_indices_up_to(3, 4);
  EXPECT_EQ(v.size(), oracle::all_tuples(3, 4).size());
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(v[i - 1].degree(), v[i].degree());
}
