#pragma once

// Independent checks of the diagonalization: permutation representation
// matrices, commutator residuals, three-channel gamma agreement, and a suite
// of theorem-level properties over the built-in symbol library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "toeplitz/library.hpp"
#include "toeplitz/spectral.hpp"

namespace toeplitz {

struct CheckReport {
  std::string name;
  int n = 1;
  double alpha = 0.0;
  int max_degree = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double residual = 0.0;
  bool passed = true;
  std::string witness;  // offending index pair when failing
  std::string detail;
};

namespace detail {
inline CheckReport make_report(std::string name, const WeightParam& w, int max_degree, std::uint64_t seed,
                               double tol, double residual, std::string witness, std::string detail = {}) {
  CheckReport r;
  r.name = std::move(name);
  r.n = w.n;
  r.alpha = w.alpha;
  r.max_degree = max_degree;
  r.seed = seed;
  r.tol = tol;
  r.residual = residual;
  r.passed = residual <= tol;
  if (!r.passed) r.witness = std::move(witness);
  r.detail = std::move(detail);
  return r;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Permutation representation on a monomial basis
// ---------------------------------------------------------------------------

// Sparse 0/1 matrix with P[image[j], j] = 1, i.e. P e_m = e_{sigma(m)}.
struct PermutationMatrix {
  std::vector<std::size_t> image;

  std::size_t dim() const { return image.size(); }

  std::vector<std::vector<int>> dense() const {
    std::vector<std::vector<int>> d(dim(), std::vector<int>(dim(), 0));
    for (std::size_t j = 0; j < dim(); ++j) d[image[j]][j] = 1;
    return d;
  }

  friend PermutationMatrix operator*(const PermutationMatrix& p, const PermutationMatrix& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("permutation matrix size mismatch");
    PermutationMatrix out;
    out.image.resize(q.dim());
    for (std::size_t j = 0; j < q.dim(); ++j) out.image[j] = p.image[q.image[j]];
    return out;
  }

  bool is_identity() const {
    for (std::size_t j = 0; j < dim(); ++j) {
      if (image[j] != j) return false;
    }
    return true;
  }

  friend bool operator==(const PermutationMatrix&, const PermutationMatrix&) = default;
};

inline PermutationMatrix permutation_matrix(const Permutation& sigma, const std::vector<MultiIndex>& basis) {
  std::map<MultiIndex, std::size_t> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
  PermutationMatrix p;
  p.image.reserve(basis.size());
  for (const auto& m : basis) {
    auto it = pos.find(apply_permutation(sigma, m));
    if (it == pos.end()) {
      throw std::invalid_argument("basis is not closed under the permutation: " + m.to_string());
    }
    p.image.push_back(it->second);
  }
  return p;
}

// diag(gamma) over an ordered basis.
struct DiagonalOperator {
  std::vector<MultiIndex> basis;
  std::vector<double> gamma;
  std::vector<double> error_bound;

  std::size_t index_of(const MultiIndex& m) const {
    auto it = std::find(basis.begin(), basis.end(), m);
    if (it == basis.end()) throw std::out_of_range("index not in basis: " + m.to_string());
    return static_cast<std::size_t>(it - basis.begin());
  }
  double at(const MultiIndex& m) const { return gamma[index_of(m)]; }
};

inline DiagonalOperator diagonal_from_table(const SpectralTable& table) {
  DiagonalOperator d;
  d.basis = all_indices_up_to(table.weight.n, table.max_degree);
  for (const auto& m : d.basis) {
    const auto& e = table.gamma(m);
    d.gamma.push_back(e.value);
    d.error_bound.push_back(e.error_bound);
  }
  return d;
}

// gamma_a(m) computed independently at every basis element, no orbit sharing.
inline DiagonalOperator diagonal_by_quadrature(const SymbolExpr& a, const WeightParam& w, int max_degree, int order) {
  DiagonalOperator d;
  d.basis = all_indices_up_to(w.n, max_degree);
  const SpectralEvaluator eval(a, w, order);
  for (const auto& m : d.basis) {
    const auto e = eval.gamma(m);
    d.gamma.push_back(e.value);
    d.error_bound.push_back(e.error_bound);
  }
  return d;
}

enum class Group { Sn, An };

inline const char* to_string(Group g) { return g == Group::Sn ? "S_n" : "A_n"; }

// Every group element for n <= 5; generators above that.
inline std::vector<Permutation> group_elements(int n, Group g) {
  if (n <= 5) return g == Group::An ? even_permutations(n) : all_permutations(n);
  return detail::test_permutations(n, g == Group::An);
}

// max over sigma in the group of max |D P(sigma) - P(sigma) D|. The only
// nonzero entries sit at (sigma(m), m) with value gamma(sigma(m)) - gamma(m).
inline CheckReport intertwining_residual(const DiagonalOperator& d, int n, Group g, double tol,
                                         const WeightParam& w = {}, int max_degree = 0) {
  double worst = 0.0;
  std::string witness;
  for (const auto& sigma : group_elements(n, g)) {
    const auto p = permutation_matrix(sigma, d.basis);
    for (std::size_t j = 0; j < p.dim(); ++j) {
      const double r = std::abs(d.gamma[p.image[j]] - d.gamma[j]);
      if (r > worst) {
        worst = r;
        witness = d.basis[j].to_string() + " vs " + d.basis[p.image[j]].to_string();
      }
    }
  }
  WeightParam wr = w;
  wr.n = n;
  return detail::make_report(std::string("intertwining_") + (g == Group::Sn ? "Sn" : "An"), wr, max_degree, 0, tol,
                             worst, witness);
}

inline CheckReport intertwining_residual(const SpectralTable& table, Group g, int max_degree, double tol) {
  if (max_degree > table.max_degree) throw DegreeOverflowError("table does not cover the requested degree");
  auto d = diagonal_from_table(table);
  if (max_degree < table.max_degree) {
    DiagonalOperator cut;
    for (std::size_t i = 0; i < d.basis.size(); ++i) {
      if (d.basis[i].degree() <= max_degree) {
        cut.basis.push_back(d.basis[i]);
        cut.gamma.push_back(d.gamma[i]);
        cut.error_bound.push_back(d.error_bound[i]);
      }
    }
    d = std::move(cut);
  }
  return intertwining_residual(d, table.weight.n, g, tol, table.weight, max_degree);
}

// ---------------------------------------------------------------------------
// Cross validation of one gamma value
// ---------------------------------------------------------------------------

struct CrossValidationOptions {
  int order = 30;
  std::size_t mc_samples = 200000;
  double tol = 1e-9;
  unsigned threads = 1;
};

struct ChannelValues {
  std::optional<Estimate> closed;
  Estimate quadrature;
  Estimate monte_carlo;
};

inline ChannelValues gamma_channels(const SymbolExpr& a, const MultiIndex& m, const WeightParam& w,
                                    std::uint64_t seed, const CrossValidationOptions& opt = {}) {
  ChannelValues ch;
  if (auto mono = as_monomial(a)) {
    ch.closed = Estimate{mono->coefficient * gamma_monomial_closed(mono->beta, m, w), 0.0, Method::closed_form};
  }
  ch.quadrature = gamma_point(a, m, w, opt.order);
  const double scale = std::exp(log_spectral_prefactor(m, w) - w.n * std::log(2.0));
  std::vector<double> r(static_cast<std::size_t>(w.n));
  auto g = [&](std::span<const double> u) {
    double p = 1.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      r[k] = std::sqrt(u[k]);
      if (m[static_cast<int>(k)] != 0) p *= std::pow(u[k], m[static_cast<int>(k)]);
    }
    return a(r) * p;
  };
  if (opt.threads > 1) {
    // Each worker needs its own scratch point.
    auto g_mt = [&](std::span<const double> u) {
      std::vector<double> rr(u.size());
      double p = 1.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        rr[k] = std::sqrt(u[k]);
        if (m[static_cast<int>(k)] != 0) p *= std::pow(u[k], m[static_cast<int>(k)]);
      }
      return a(rr) * p;
    };
    ch.monte_carlo = mc_integrate(g_mt, w, opt.mc_samples, seed, opt.threads);
  } else {
    ch.monte_carlo = mc_integrate(g, w, opt.mc_samples, seed, 1);
  }
  ch.monte_carlo.value *= scale;
  ch.monte_carlo.error_bound *= scale;
  return ch;
}

// Residual is the largest pairwise disagreement beyond the combined error bounds.
inline CheckReport crossvalidate_gamma(const SymbolExpr& a, const MultiIndex& m, const WeightParam& w,
                                       std::uint64_t seed, const CrossValidationOptions& opt = {}) {
  const auto ch = gamma_channels(a, m, w, seed, opt);
  std::vector<Estimate> values;
  if (ch.closed) values.push_back(*ch.closed);
  values.push_back(ch.quadrature);
  values.push_back(ch.monte_carlo);
  double worst = 0.0;
  std::string witness;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double excess =
          std::abs(values[i].value - values[j].value) - (values[i].error_bound + values[j].error_bound);
      if (excess > worst) {
        worst = excess;
        witness = std::string(to_string(values[i].method)) + " vs " + to_string(values[j].method) + " at " +
                  m.to_string();
      }
    }
  }
  std::ostringstream det;
  det.precision(17);
  if (ch.closed) det << "closed=" << ch.closed->value << " ";
  det << "quadrature=" << ch.quadrature.value << " monte_carlo=" << ch.monte_carlo.value << " +- "
      << ch.monte_carlo.error_bound;
  return detail::make_report("crossvalidate " + a.to_string(), w, m.degree(), seed, opt.tol, worst, witness,
                             det.str());
}

// ---------------------------------------------------------------------------
// Theorem suite
// ---------------------------------------------------------------------------

// Faults perturb one computed value by 1e-2 so the matching check must fail.
inline const std::vector<std::string>& known_faults() {
  static const std::vector<std::string> f = {"normalization", "closed_form", "orbit",    "branch",
                                             "zero",          "sign",        "additivity", "radial"};
  return f;
}

struct SuiteOptions {
  int order = 0;  // 0 selects default_order(max_degree)
  std::string inject_fault;
  std::size_t mc_samples = 100000;
};

namespace detail {

inline constexpr double kFaultOffset = 1e-2;

inline double spread(const DiagonalOperator& d, const std::vector<MultiIndex>& set, std::string& witness) {
  if (set.size() < 2) return 0.0;
  double lo = d.at(set.front()), hi = lo;
  MultiIndex at_lo = set.front(), at_hi = set.front();
  for (const auto& m : set) {
    const double v = d.at(m);
    if (v < lo) { lo = v; at_lo = m; }
    if (v > hi) { hi = v; at_hi = m; }
  }
  witness = at_lo.to_string() + " vs " + at_hi.to_string();
  return hi - lo;
}

// Perturbs the first element of the first orbit with at least two elements
// (the first element of all if none exists).
inline void inject(DiagonalOperator& d, int n, int max_degree, bool split_half = false) {
  for (const auto& o : enumerate_canonical(n, max_degree)) {
    const auto& set = split_half && o.is_split() ? o.plus_elements : o.elements;
    if (set.size() >= 2) {
      d.gamma[d.index_of(set.front())] += kFaultOffset;
      return;
    }
  }
  if (!d.gamma.empty()) d.gamma.front() += kFaultOffset;
}

}  // namespace detail

inline std::vector<CheckReport> theorem_suite(int n, const WeightParam& w_in, int max_degree, std::uint64_t seed,
                                              double tol, const SuiteOptions& opt = {}) {
  WeightParam w = w_in;
  w.n = n;
  w.validate();
  if (max_degree < 0) throw std::invalid_argument("max_degree must be nonnegative");
  if (!opt.inject_fault.empty() &&
      std::find(known_faults().begin(), known_faults().end(), opt.inject_fault) == known_faults().end()) {
    throw std::invalid_argument("unknown fault '" + opt.inject_fault + "'");
  }
  const int order = opt.order > 0 ? opt.order : default_order(max_degree);
  const bool fault_on = !opt.inject_fault.empty();
  auto fault = [&](const char* name) { return fault_on && opt.inject_fault == name; };
  auto report = [&](std::string name, double residual, std::string witness, std::string det = {}) {
    return detail::make_report(std::move(name), w, max_degree, seed, tol, residual, std::move(witness),
                               std::move(det));
  };

  const auto orbits = enumerate_canonical(n, max_degree);
  const auto basis = all_indices_up_to(n, max_degree);
  std::vector<CheckReport> out;

  // gamma_1 = 1: closed form and quadrature.
  {
    const auto one = parse_symbol("1", n);
    const SpectralEvaluator eval(one, w, order);
    const auto zero = MultiIndex::zero(n);
    double worst = 0.0;
    std::string witness;
    bool first = true;
    for (const auto& m : basis) {
      const double closed = gamma_monomial_closed(zero, m, w);
      const double via_prefactor = spectral_prefactor(m, w) * dirichlet_closed(m, w.alpha) * std::ldexp(1.0, -n);
      double quad = eval.gamma(m).value;
      if (first && fault("normalization")) quad += detail::kFaultOffset;
      first = false;
      for (double v : {closed, via_prefactor, quad}) {
        if (std::abs(v - 1.0) > worst) {
          worst = std::abs(v - 1.0);
          witness = m.to_string();
        }
      }
    }
    out.push_back(report("normalization", worst, witness));
  }

  // a_0 = E_n = prod r_k^2 against its closed form (at n = 2, the printed two-variable formula too).
  {
    const auto a0 = parse_symbol("E" + std::to_string(n), n);
    const SpectralEvaluator eval(a0, w, order);
    const MultiIndex ones(std::vector<int>(static_cast<std::size_t>(n), 1));
    double worst = 0.0;
    std::string witness;
    bool first = true;
    for (const auto& m : basis) {
      double quad = eval.gamma(m).value;
      if (first && fault("closed_form")) quad += detail::kFaultOffset;
      first = false;
      std::vector<double> refs = {gamma_monomial_closed(ones, m, w)};
      if (n == 2) {
        const double k1 = m[0], k2 = m[1];
        refs.push_back((k1 + 1) * (k2 + 1) / ((k1 + k2 + w.alpha + 4) * (k1 + k2 + w.alpha + 3)));
      }
      for (double ref : refs) {
        const double rel = std::abs(quad - ref) / std::abs(ref);
        if (rel > worst) {
          worst = rel;
          witness = m.to_string();
        }
      }
    }
    out.push_back(report("closed_form", worst, witness, n == 2 ? "includes two-variable product formula" : ""));
  }

  // Symmetric symbols: gamma constant on each orbit, commutes with S_n.
  {
    double worst = 0.0, worst_comm = 0.0;
    std::string witness, witness_comm;
    bool injected = false;
    for (auto kind : {SymbolClass::Radial, SymbolClass::SymmetricSepRadial}) {
      for (const auto& s : library_with_class(n, kind)) {
        auto d = diagonal_by_quadrature(s.parse(n), w, max_degree, order);
        if (!injected && fault("orbit")) {
          detail::inject(d, n, max_degree);
          injected = true;
        }
        for (const auto& o : orbits) {
          std::string wit;
          const double sp = detail::spread(d, o.elements, wit);
          if (sp > worst) {
            worst = sp;
            witness = s.name + ": " + wit;
          }
        }
        auto c = intertwining_residual(d, n, Group::Sn, tol);
        if (c.residual > worst_comm) {
          worst_comm = c.residual;
          witness_comm = s.name + ": " + c.witness;
        }
      }
    }
    out.push_back(report("orbit_constancy", worst, witness));
    out.push_back(report("intertwining_Sn", worst_comm, witness_comm));
  }

  const auto alternating = library_with_class(n, SymbolClass::AlternatingSepRadial);
  const auto antisymmetric = library_with_class(n, SymbolClass::AntiSymmetricSepRadial);

  // Alternating symbols: constant on each half-orbit, commute with A_n.
  {
    double worst = 0.0, worst_comm = 0.0;
    std::string witness, witness_comm;
    bool injected = false;
    for (const auto& s : alternating) {
      if (s.name == "r1_sq") continue;  // alternating only because A_2 is trivial
      auto d = diagonal_by_quadrature(s.parse(n), w, max_degree, order);
      if (!injected && fault("branch")) {
        detail::inject(d, n, max_degree, true);
        injected = true;
      }
      for (const auto& o : orbits) {
        for (const auto* set : {&o.plus_elements, &o.minus_elements}) {
          std::string wit;
          const double sp = detail::spread(d, *set, wit);
          if (sp > worst) {
            worst = sp;
            witness = s.name + ": " + wit;
          }
        }
      }
      auto c = intertwining_residual(d, n, Group::An, tol);
      if (c.residual > worst_comm) {
        worst_comm = c.residual;
        witness_comm = s.name + ": " + c.witness;
      }
    }
    out.push_back(report("branch_constancy", worst, witness, alternating.empty() ? "no applicable symbols" : ""));
    out.push_back(report("intertwining_An", worst_comm, witness_comm));
  }

  // Anti-symmetric symbols: zero on I^0, gamma(sigma iota) = -gamma(iota) on I^c.
  {
    double worst_zero = 0.0, worst_sign = 0.0;
    std::string wz, ws;
    for (const auto& s : antisymmetric) {
      auto d = diagonal_by_quadrature(s.parse(n), w, max_degree, order);
      bool zero_injected = false, sign_injected = false;
      for (const auto& o : orbits) {
        if (o.cls == OrbitClass::I0) {
          if (fault("zero") && !zero_injected) {
            d.gamma[d.index_of(o.elements.front())] += detail::kFaultOffset;
            zero_injected = true;
          }
          for (const auto& m : o.elements) {
            if (std::abs(d.at(m)) > worst_zero) {
              worst_zero = std::abs(d.at(m));
              wz = s.name + ": " + m.to_string();
            }
          }
        } else {
          if (fault("sign") && !sign_injected) {
            d.gamma[d.index_of(o.plus_elements.front())] += detail::kFaultOffset;
            sign_injected = true;
          }
          for (const auto& p : o.plus_elements) {
            for (const auto& q : o.minus_elements) {
              const double r = std::abs(d.at(p) + d.at(q));
              if (r > worst_sign) {
                worst_sign = r;
                ws = s.name + ": " + p.to_string() + " vs " + q.to_string();
              }
            }
          }
        }
      }
    }
    const char* none = antisymmetric.empty() ? "no applicable symbols" : "";
    out.push_back(report("zero_on_I0", worst_zero, wz, none));
    out.push_back(report("sign_flip", worst_sign, ws, none));
  }

  // a = a^+ + a^- spectrally, and a^- vanishes on I^0.
  {
    double worst = 0.0;
    std::string witness;
    bool injected = false;
    for (const auto& s : alternating) {
      const auto a = s.parse(n);
      const auto pair = symmetrize_pair(a);
      const auto da = diagonal_by_quadrature(a, w, max_degree, order);
      auto dp = diagonal_by_quadrature(pair.plus, w, max_degree, order);
      const auto dm = diagonal_by_quadrature(pair.minus, w, max_degree, order);
      if (!injected && fault("additivity")) {
        dp.gamma.front() += detail::kFaultOffset;
        injected = true;
      }
      for (std::size_t i = 0; i < da.basis.size(); ++i) {
        double r = std::abs(da.gamma[i] - (dp.gamma[i] + dm.gamma[i]));
        if (classify_index(canonicalize(da.basis[i])) == OrbitClass::I0) r = std::max(r, std::abs(dm.gamma[i]));
        if (r > worst) {
          worst = r;
          witness = s.name + ": " + da.basis[i].to_string();
        }
      }
    }
    out.push_back(report("additivity", worst, witness, alternating.empty() ? "no applicable symbols" : ""));
  }

  // Radial symbols: gamma depends on |m| only and matches the one-dimensional reduction.
  {
    double worst = 0.0;
    std::string witness;
    bool injected = false;
    for (const auto& s : library_with_class(n, SymbolClass::Radial)) {
      const auto a = s.parse(n);
      auto d = diagonal_by_quadrature(a, w, max_degree, order);
      if (!injected && fault("radial")) {
        d.gamma.back() += detail::kFaultOffset;
        injected = true;
      }
      std::vector<double> point(static_cast<std::size_t>(n), 0.0);
      auto profile = [&](double rho) {
        point[0] = rho;
        return a(point);
      };
      for (std::size_t i = 0; i < d.basis.size(); ++i) {
        const auto ref = gamma_radial(profile, d.basis[i].degree(), w, order);
        const double r = std::abs(d.gamma[i] - ref.value);
        if (r > worst) {
          worst = r;
          witness = s.name + ": " + d.basis[i].to_string();
        }
      }
    }
    out.push_back(report("radial_collapse", worst, witness));
  }

  return out;
}

}  // namespace toeplitz
