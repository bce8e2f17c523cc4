#pragma once

// Spectral functions gamma_a(m) = <a e_m, e_m>_alpha of Toeplitz operators with
// separately radial symbols, and the diagonal form R T_a R^* they define on
// l^2(Z_+^n).

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "toeplitz/classify.hpp"
#include "toeplitz/quadrature.hpp"
#include "toeplitz/specfun.hpp"
#include "toeplitz/symbol.hpp"

namespace toeplitz {

inline int default_order(int max_degree) { return 12 + 2 * max_degree; }

struct ClassificationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegreeOverflowError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Evaluates a on the nodes of a tensor rule (and its companion) once, then
// returns gamma_a(m) for any m as a weighted moment.
class SpectralEvaluator {
 public:
  SpectralEvaluator(const SymbolExpr& a, const WeightParam& w, int order)
      : w_(w),
        hi_(SimplexRule::cached(w, order)),
        lo_(SimplexRule::cached(w, companion_order(order))) {
    w.validate();
    if (a.n() != w.n) throw DimensionError("symbol dimension does not match weight parameter");
    if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
    values_hi_ = sample(a, *hi_);
    values_lo_ = sample(a, *lo_);
  }

  const WeightParam& weight() const { return w_; }
  int order() const { return hi_->order(); }

  Estimate gamma(const MultiIndex& m) const {
    // Q(m) 2^-n: the 2^-n is the Jacobian of u = r^2.
    const double scale = std::exp(log_spectral_prefactor(m, w_) - w_.n * std::log(2.0));
    const double v = scale * moment(*hi_, values_hi_, m);
    const double v_lo = scale * moment(*lo_, values_lo_, m);
    return {v, std::abs(v - v_lo), Method::tensor_rule};
  }

 private:
  WeightParam w_;
  std::shared_ptr<const SimplexRule> hi_, lo_;
  std::vector<double> values_hi_, values_lo_;

  static std::vector<double> sample(const SymbolExpr& a, const SimplexRule& rule) {
    std::vector<double> out(rule.size());
    std::vector<double> r(static_cast<std::size_t>(rule.n()));
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto u = rule.point(i);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] = std::sqrt(u[k]);
      out[i] = a(r);
      if (std::isnan(out[i])) throw IntegrationError("symbol evaluated to NaN at a quadrature node");
    }
    return out;
  }

  static double moment(const SimplexRule& rule, const std::vector<double>& values, const MultiIndex& m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      if (values[i] == 0.0) continue;
      const auto u = rule.point(i);
      double p = rule.weight(i) * values[i];
      for (int k = 0; k < m.size(); ++k) {
        if (m[k] != 0) p *= std::pow(u[static_cast<std::size_t>(k)], m[k]);
      }
      sum += p;
    }
    return sum;
  }
};

inline Estimate gamma_point(const SymbolExpr& a, const MultiIndex& m, const WeightParam& w, int order) {
  return SpectralEvaluator(a, w, order).gamma(m);
}

// gamma of a(r) = r^{2 beta}:
// prod Gamma(m_k+beta_k+1)/Gamma(m_k+1) * Gamma(n+|m|+alpha+1)/Gamma(n+|m|+|beta|+alpha+1)
inline double gamma_monomial_closed(const MultiIndex& beta, const MultiIndex& m, const WeightParam& w) {
  w.validate();
  if (beta.size() != w.n || m.size() != w.n) throw DimensionError("beta, m and n must agree");
  double s = 0.0;
  for (int k = 0; k < w.n; ++k) s += log_gamma(m[k] + beta[k] + 1.0) - log_gamma(m[k] + 1.0);
  const double base = w.n + m.degree() + w.alpha + 1.0;
  return std::exp(s + log_gamma(base) - log_gamma(base + beta.degree()));
}

// gamma of a radial symbol a(r) = profile(|r|) at any m of the given degree:
// Gamma(n+d+alpha+1)/(Gamma(alpha+1) Gamma(d+n)) int_0^1 profile(sqrt s) s^{d+n-1} (1-s)^alpha ds.
inline Estimate gamma_radial(const std::function<double(double)>& profile, int degree, const WeightParam& w,
                             int order) {
  w.validate();
  if (degree < 0) throw std::invalid_argument("gamma_radial: degree must be nonnegative");
  if (order < 2) throw std::invalid_argument("gamma_radial: order must be >= 2");
  const double b = degree + w.n - 1.0;
  const double scale =
      std::exp(log_gamma(w.n + degree + w.alpha + 1.0) - log_gamma(w.alpha + 1.0) - log_gamma(degree + w.n));
  auto run = [&](int p) {
    const auto rule = gauss_jacobi(p, w.alpha, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * profile(std::sqrt(rule.nodes[i]));
    return scale * sum;
  };
  const double v = run(order);
  return {v, std::abs(v - run(companion_order(order))), Method::tensor_rule};
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

enum class Branch { whole, plus, minus };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::whole: return "whole";
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
  }
  return "?";
}

inline Branch branch_from_string(const std::string& s) {
  if (s == "whole") return Branch::whole;
  if (s == "plus") return Branch::plus;
  if (s == "minus") return Branch::minus;
  throw std::invalid_argument("unknown branch '" + s + "'");
}

struct TableKey {
  MultiIndex canonical;
  Branch branch = Branch::whole;
  friend auto operator<=>(const TableKey&, const TableKey&) = default;
  friend bool operator==(const TableKey&, const TableKey&) = default;
};

// Orbits are ordered by (degree, lex descending), matching enumerate_canonical.
struct TableKeyOrder {
  bool operator()(const TableKey& a, const TableKey& b) const {
    if (a.canonical.degree() != b.canonical.degree()) return a.canonical.degree() < b.canonical.degree();
    if (a.canonical != b.canonical) return a.canonical > b.canonical;
    return a.branch < b.branch;
  }
};

// Diagonal form of T_a: one gamma per orbit (S_n-invariant symbols) or per
// half-orbit on I^c (A_n-invariant symbols).
struct SpectralTable {
  WeightParam weight;
  SymbolClass symbol_class = SymbolClass::SymmetricSepRadial;
  int max_degree = 0;
  std::string symbol;
  std::map<TableKey, Estimate, TableKeyOrder> entries;
  std::size_t evaluations = 0;  // gamma_point calls spent building the table

  bool splits_orbits() const { return !is_symmetric_class(symbol_class); }

  TableKey key_for(const MultiIndex& m) const {
    if (m.size() != weight.n) throw DimensionError("multi-index dimension does not match table");
    if (m.degree() > max_degree) {
      throw DegreeOverflowError("index " + m.to_string() + " exceeds table degree " + std::to_string(max_degree));
    }
    TableKey key{canonicalize(m), Branch::whole};
    if (splits_orbits() && classify_index(key.canonical) == OrbitClass::Ic) {
      key.branch = rearrangement_sign(m) > 0 ? Branch::plus : Branch::minus;
    }
    return key;
  }

  const Estimate& gamma(const MultiIndex& m) const {
    auto it = entries.find(key_for(m));
    if (it == entries.end()) throw std::out_of_range("no table entry for " + m.to_string());
    return it->second;
  }

  friend bool operator==(const SpectralTable& a, const SpectralTable& b) {
    return a.weight.n == b.weight.n && a.weight.alpha == b.weight.alpha && a.symbol_class == b.symbol_class &&
           a.max_degree == b.max_degree && a.symbol == b.symbol && a.entries == b.entries;
  }
};

// Fixed odd permutation used to reach the minus half of a split orbit.
inline Permutation canonical_odd_permutation(int n) { return Permutation::swap(n, 0, 1); }

inline SpectralTable build_table(const SymbolExpr& a, const WeightParam& w, int max_degree, int order,
                                 SymbolClass cls) {
  if (max_degree < 0) throw std::invalid_argument("max_degree must be nonnegative");
  if (!is_alternating_class(cls)) {
    throw ClassificationError("symbol is only separately radial; its Toeplitz operator has no orbit block form");
  }
  SpectralTable t;
  t.weight = w;
  t.symbol_class = cls;
  t.max_degree = max_degree;
  t.symbol = a.to_string();

  const SpectralEvaluator eval(a, w, order);
  for (const auto& orbit : enumerate_canonical(w.n, max_degree)) {
    if (!t.splits_orbits() || orbit.cls == OrbitClass::I0) {
      t.entries.emplace(TableKey{orbit.canonical, Branch::whole}, eval.gamma(orbit.canonical));
      ++t.evaluations;
    } else {
      t.entries.emplace(TableKey{orbit.canonical, Branch::plus}, eval.gamma(orbit.canonical));
      const auto odd = apply_permutation(canonical_odd_permutation(w.n), orbit.canonical);
      t.entries.emplace(TableKey{orbit.canonical, Branch::minus}, eval.gamma(odd));
      t.evaluations += 2;
    }
  }
  return t;
}

inline SpectralTable build_table(const SymbolExpr& a, const WeightParam& w, int max_degree, int order) {
  return build_table(a, w, max_degree, order, classify_by_sampling(a));
}

// Truncated image R(f) = (<f, e_m>)_m.
using CoefficientSequence = std::map<MultiIndex, std::complex<double>>;

// (R T_a R^* c)_m = gamma_a(m) c_m
inline CoefficientSequence apply_multiplier(const SpectralTable& table, const CoefficientSequence& c) {
  CoefficientSequence out;
  for (const auto& [m, v] : c) out.emplace(m, table.gamma(m).value * v);
  return out;
}

struct Block {
  MultiIndex canonical;
  OrbitClass orbit_class = OrbitClass::I0;
  Branch branch = Branch::whole;
  std::vector<MultiIndex> indices;
  Estimate gamma;
  std::size_t multiplicity() const { return indices.size(); }
};

// l^2(Z_+^n) truncated to |m| <= max_degree as a direct sum of blocks on
// which R T_a R^* acts as a scalar.
inline std::vector<Block> block_structure(const SpectralTable& table) {
  std::vector<Block> out;
  for (const auto& orbit : enumerate_canonical(table.weight.n, table.max_degree)) {
    if (!table.splits_orbits() || orbit.cls == OrbitClass::I0) {
      out.push_back({orbit.canonical, orbit.cls, Branch::whole, orbit.elements,
                     table.entries.at({orbit.canonical, Branch::whole})});
    } else {
      out.push_back({orbit.canonical, orbit.cls, Branch::plus, orbit.plus_elements,
                     table.entries.at({orbit.canonical, Branch::plus})});
      out.push_back({orbit.canonical, orbit.cls, Branch::minus, orbit.minus_elements,
                     table.entries.at({orbit.canonical, Branch::minus})});
    }
  }
  return out;
}

}  // namespace toeplitz
