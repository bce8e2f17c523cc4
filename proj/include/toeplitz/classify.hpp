#pragma once

// Invariance classes of separately radial symbols, certified by sampling,
// and the symmetric/anti-symmetric split a = a^+ + a^- of alternating symbols.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "toeplitz/symbol.hpp"

namespace toeplitz {

// Radial < SymmetricSepRadial < AlternatingSepRadial < SepRadialOnly, and
// AntiSymmetricSepRadial < AlternatingSepRadial.
enum class SymbolClass { Radial, SymmetricSepRadial, AntiSymmetricSepRadial, AlternatingSepRadial, SepRadialOnly };

inline const char* to_string(SymbolClass c) {
  switch (c) {
    case SymbolClass::Radial: return "radial";
    case SymbolClass::SymmetricSepRadial: return "symmetric";
    case SymbolClass::AntiSymmetricSepRadial: return "antisymmetric";
    case SymbolClass::AlternatingSepRadial: return "alternating";
    case SymbolClass::SepRadialOnly: return "separately_radial";
  }
  return "?";
}

inline SymbolClass symbol_class_from_string(const std::string& s) {
  for (auto c : {SymbolClass::Radial, SymbolClass::SymmetricSepRadial, SymbolClass::AntiSymmetricSepRadial,
                 SymbolClass::AlternatingSepRadial, SymbolClass::SepRadialOnly}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown symbol class '" + s + "'");
}

// S_n-invariant symbols share one gamma per orbit.
inline bool is_symmetric_class(SymbolClass c) {
  return c == SymbolClass::Radial || c == SymbolClass::SymmetricSepRadial;
}

// A_n-invariant symbols: gamma is constant on each half I_iota^+, I_iota^-.
inline bool is_alternating_class(SymbolClass c) { return c != SymbolClass::SepRadialOnly; }

enum class Invariance { radial, symmetric, alternating, antisymmetric };

struct InvarianceWitness {
  std::vector<double> point;
  std::vector<int> permutation;  // empty for the radial test
  double residual = 0.0;
};

struct SamplingOptions {
  int samples = 256;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

namespace detail {

// Uniform point of tau(B^n) pushed forward from the simplex: u ~ Dirichlet(1,...,1), r = sqrt(u).
inline std::vector<double> sample_tau(std::mt19937_64& eng, int n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> u(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : u) {
    x = expo(eng);
    total += x;
  }
  total += expo(eng);
  for (auto& x : u) x = std::sqrt(x / total);
  return u;
}

// Group elements tested for each invariance. Full S_n up to n = 6; above
// that, generators: adjacent transpositions plus the n-cycle for S_n, the
// 3-cycles (1 2 k) for A_n.
inline std::vector<Permutation> test_permutations(int n, bool even_only) {
  if (n <= 6) return even_only ? even_permutations(n) : all_permutations(n);
  std::vector<Permutation> out;
  if (even_only) {
    for (int k = 2; k < n; ++k) out.push_back(Permutation::cycle(n, {0, 1, k}));
  } else {
    for (int i = 0; i + 1 < n; ++i) out.push_back(Permutation::swap(n, i, i + 1));
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = i;
    out.push_back(Permutation::cycle(n, c));
  }
  return out;
}

inline double scaled_tol(double tol, double a, double b) { return tol * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace detail

// First sampled point where the invariance fails, or nullopt if none is found.
// Tolerances scale with max(1, |a|).
inline std::optional<InvarianceWitness> find_invariance_violation(const SymbolExpr& a, Invariance kind,
                                                                  const SamplingOptions& opt = {}) {
  const int n = a.n();
  std::mt19937_64 eng(opt.seed);
  const auto perms = kind == Invariance::radial
                         ? std::vector<Permutation>{}
                         : detail::test_permutations(n, kind == Invariance::alternating);
  for (int s = 0; s < opt.samples; ++s) {
    const auto r = detail::sample_tau(eng, n);
    const double ar = a(r);
    if (kind == Invariance::radial) {
      auto q = detail::sample_tau(eng, n);
      double nr = 0.0, nq = 0.0;
      for (int k = 0; k < n; ++k) {
        nr += r[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)];
        nq += q[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(k)];
      }
      if (nq == 0.0) continue;
      const double scale = std::sqrt(nr / nq);
      for (auto& x : q) x *= scale;
      const double aq = a(q);
      if (std::abs(aq - ar) > detail::scaled_tol(opt.tol, ar, aq)) {
        return InvarianceWitness{r, {}, std::abs(aq - ar)};
      }
      continue;
    }
    for (const auto& sigma : perms) {
      const double as = a(apply_permutation(sigma, r));
      const double expect = (kind == Invariance::antisymmetric) ? sigma.sign() * ar : ar;
      if (std::abs(as - expect) > detail::scaled_tol(opt.tol, as, expect)) {
        return InvarianceWitness{r, sigma.mapping(), std::abs(as - expect)};
      }
    }
  }
  return std::nullopt;
}

// Most specific class the samples certify. A sampling certificate, not a proof.
inline SymbolClass classify_by_sampling(const SymbolExpr& a, const SamplingOptions& opt = {}) {
  if (opt.samples < 100) throw std::invalid_argument("classify_by_sampling: need at least 100 samples");
  auto holds = [&](Invariance k) { return !find_invariance_violation(a, k, opt).has_value(); };
  if (holds(Invariance::radial)) return SymbolClass::Radial;
  if (holds(Invariance::symmetric)) return SymbolClass::SymmetricSepRadial;
  if (holds(Invariance::antisymmetric)) return SymbolClass::AntiSymmetricSepRadial;
  if (holds(Invariance::alternating)) return SymbolClass::AlternatingSepRadial;
  return SymbolClass::SepRadialOnly;
}

struct PreconditionError : std::invalid_argument {
  PreconditionError(const std::string& msg, std::optional<InvarianceWitness> w)
      : std::invalid_argument(msg), witness(std::move(w)) {}
  std::optional<InvarianceWitness> witness;
};

struct SymmetrizedPair {
  SymbolExpr plus;   // (a + a_sigma) / 2, S_n-invariant
  SymbolExpr minus;  // (a - a_sigma) / 2, anti-symmetric
};

// Splits an alternating symbol with a fixed odd permutation (default: swap of r1, r2).
inline SymmetrizedPair symmetrize_pair(const SymbolExpr& a, const std::optional<Permutation>& odd = std::nullopt,
                                       const SamplingOptions& opt = {}) {
  const int n = a.n();
  if (n < 2) throw PreconditionError("symmetrize_pair: no odd permutation exists for n = 1", std::nullopt);
  const Permutation sigma = odd.value_or(Permutation::swap(n, 0, 1));
  if (sigma.size() != n) throw DimensionError("permutation size does not match symbol");
  if (sigma.is_even()) throw PreconditionError("symmetrize_pair: permutation must be odd", std::nullopt);
  if (auto w = find_invariance_violation(a, Invariance::alternating, opt)) {
    throw PreconditionError("symmetrize_pair: symbol is not alternating separately radial", std::move(w));
  }
  const auto a_sigma = permute_symbol(a, sigma);
  const auto half = sym::number(2.0);
  return {SymbolExpr(sym::div(sym::add(a.root(), a_sigma.root()), half), n),
          SymbolExpr(sym::div(sym::sub(a.root(), a_sigma.root()), half), n)};
}

}  // namespace toeplitz
