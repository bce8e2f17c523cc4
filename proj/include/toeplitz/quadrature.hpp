#pragma once

// Integration over tau(B^n) = { r in [0,1)^n : sum r_k^2 < 1 } against
// (1-|r|^2)^alpha prod r_k dr_k. The substitution u_k = r_k^2 maps this onto
// the standard simplex with weight (1 - sum u)^alpha and Jacobian 2^-n.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "toeplitz/specfun.hpp"

namespace toeplitz {

enum class Method { closed_form, tensor_rule, monte_carlo };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::tensor_rule: return "tensor_rule";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "?";
}

inline Method method_from_string(const std::string& s) {
  if (s == "closed_form") return Method::closed_form;
  if (s == "tensor_rule") return Method::tensor_rule;
  if (s == "monte_carlo") return Method::monte_carlo;
  throw std::invalid_argument("unknown method '" + s + "'");
}

// A value with a heuristic a-posteriori error bound (rule difference or 3 standard errors).
struct Estimate {
  double value = 0.0;
  double error_bound = 0.0;
  Method method = Method::closed_form;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// n-dimensional simplex with Jacobi weight (1 - sum u)^alpha.
using SimplexDomain = WeightParam;

// ---------------------------------------------------------------------------
// Gauss-Jacobi
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// P_n^{(a,b)}(x) and P_{n-1}^{(a,b)}(x) by the three-term recurrence.
inline std::pair<double, double> jacobi_pair(int n, double a, double b, double x) {
  double p_prev = 1.0;
  double p = 0.5 * (a - b + (a + b + 2.0) * x);
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double c = 2.0 * j + a + b;
    const double a1 = 2.0 * j * (j + a + b) * (c - 2.0);
    const double b1 = (c - 1.0) * (a * a - b * b + c * (c - 2.0) * x);
    const double c1 = 2.0 * (j - 1 + a) * (j - 1 + b) * c;
    const double next = (b1 * p - c1 * p_prev) / a1;
    p_prev = p;
    p = next;
  }
  return {p, p_prev};
}

}  // namespace detail

// n-point Gauss rule on [0,1] for the weight (1-t)^a t^b, a, b > -1.
// Nodes seeded by Golub-Welsch and polished with Newton on P_n^{(a,b)};
// weights from the derivative formula.
inline GaussRule gauss_jacobi(int npts, double a, double b) {
  if (npts < 1) throw std::invalid_argument("gauss_jacobi: need at least one point");
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");

  // Jacobi matrix for the monic Jacobi polynomials on [-1,1].
  const double ab = a + b;
  Eigen::VectorXd diag(npts);
  Eigen::VectorXd sub(std::max(npts - 1, 1));
  for (int k = 0; k < npts; ++k) {
    const double c = 2.0 * k + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (c * (c + 2.0));
  }
  for (int k = 1; k < npts; ++k) {
    const double c = 2.0 * k + ab;
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (c * c * (c + 1.0) * (c - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (npts == 1) {
    solver.computeFromTridiagonal(diag, Eigen::VectorXd(0), Eigen::EigenvaluesOnly);
  } else {
    solver.computeFromTridiagonal(diag, sub.head(npts - 1), Eigen::EigenvaluesOnly);
  }
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: eigen solve failed");

  const double log_const = log_gamma(npts + a + 1.0) + log_gamma(npts + b + 1.0) -
                           log_gamma(npts + 1.0) - log_gamma(npts + ab + 1.0);
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(npts));
  rule.weights.resize(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    double x = solver.eigenvalues()(i);
    double dp = 0.0;
    for (int it = 0; it < 8; ++it) {
      auto [p, p1] = detail::jacobi_pair(npts, a, b, x);
      // (2n+a+b)(1-x^2) P_n' = n(a-b-(2n+a+b)x) P_n + 2(n+a)(n+b) P_{n-1}
      const double c = 2.0 * npts + ab;
      dp = (npts * (a - b - c * x) * p + 2.0 * (npts + a) * (npts + b) * p1) / (c * (1.0 - x * x));
      const double step = p / dp;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    auto [p, p1] = detail::jacobi_pair(npts, a, b, x);
    const double c = 2.0 * npts + ab;
    dp = (npts * (a - b - c * x) * p + 2.0 * (npts + a) * (npts + b) * p1) / (c * (1.0 - x * x));
    // Weight on [-1,1] is 2^{a+b+1} C / ((1-x^2) P_n'(x)^2); the map t=(1+x)/2 divides by 2^{a+b+1}.
    const double w = std::exp(log_const) / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 + x);
    rule.weights[static_cast<std::size_t>(i)] = w;
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Tensor rule on the simplex
// ---------------------------------------------------------------------------

// Stick-breaking map t -> u: u_k = t_k prod_{j<k} (1 - t_j). Under it
// 1 - sum u = prod_j (1 - t_j) and du = prod_j (1 - t_j)^{n-j} dt, so coordinate
// j carries the Jacobi weight (1 - t_j)^{alpha + n - j}. A polynomial of
// total degree d in u has degree <= d in every t_j, so an order-p rule is
// exact for d <= 2p - 1.
class SimplexRule {
 public:
  SimplexRule(const SimplexDomain& d, int order) : n_(d.n), alpha_(d.alpha), order_(order) {
    d.validate();
    if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
    std::vector<GaussRule> axes;
    for (int j = 1; j <= n_; ++j) axes.push_back(gauss_jacobi(order, alpha_ + (n_ - j), 0.0));

    std::size_t total = 1;
    for (int j = 0; j < n_; ++j) total *= static_cast<std::size_t>(order);
    points_.resize(total * static_cast<std::size_t>(n_));
    weights_.resize(total);

    std::vector<int> idx(static_cast<std::size_t>(n_), 0);
    for (std::size_t p = 0; p < total; ++p) {
      double remaining = 1.0;
      double w = 1.0;
      for (int j = 0; j < n_; ++j) {
        const auto& ax = axes[static_cast<std::size_t>(j)];
        const double t = ax.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        points_[p * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = t * remaining;
        remaining *= (1.0 - t);
        w *= ax.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      }
      weights_[p] = w;
      for (int j = n_ - 1; j >= 0; --j) {
        if (++idx[static_cast<std::size_t>(j)] < order) break;
        idx[static_cast<std::size_t>(j)] = 0;
      }
    }
  }

  // Shared, immutable rules keyed by (n, alpha, order).
  static std::shared_ptr<const SimplexRule> cached(const SimplexDomain& d, int order) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, int>, std::shared_ptr<const SimplexRule>> cache;
    const auto key = std::make_tuple(d.n, d.alpha, order);
    {
      std::lock_guard lock(mu);
      if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const SimplexRule>(d, order);
    std::lock_guard lock(mu);
    if (cache.size() > 32) cache.clear();
    cache.emplace(key, rule);
    return rule;
  }

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  int order() const { return order_; }
  std::size_t size() const { return weights_.size(); }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

  template <typename G>
  double integrate(G&& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double v = g(point(i));
      if (std::isnan(v)) throw IntegrationError("integrand returned NaN");
      sum += weights_[i] * v;
    }
    return sum;
  }

 private:
  int n_;
  double alpha_;
  int order_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

// Order of the companion rule used for the error estimate.
inline int companion_order(int order) { return order > 5 ? order - 5 : std::max(1, order - 1); }

using SimplexFunction = std::function<double(std::span<const double>)>;

// I[g] = int_simplex g(u) (1 - sum u)^alpha du; error_bound = |I_p - I_{p-5}|.
inline Estimate integrate_simplex(const SimplexFunction& g, const SimplexDomain& d, int order) {
  if (order < 2) throw std::invalid_argument("integrate_simplex: order must be >= 2");
  const auto hi = SimplexRule::cached(d, order);
  const auto lo = SimplexRule::cached(d, companion_order(order));
  const double v = hi->integrate(g);
  const double v_lo = lo->integrate(g);
  return {v, std::abs(v - v_lo), Method::tensor_rule};
}

// int_{tau(B^n)} f(r) (1-|r|^2)^alpha prod r_k dr_k = 2^-n I[u -> f(sqrt u)].
inline Estimate integrate_tau(const SimplexFunction& f, const SimplexDomain& d, int order) {
  const double scale = std::ldexp(1.0, -d.n);
  std::vector<double> r(static_cast<std::size_t>(d.n));
  auto g = [&](std::span<const double> u) {
    for (std::size_t k = 0; k < u.size(); ++k) r[k] = std::sqrt(u[k]);
    return f(r);
  };
  auto e = integrate_simplex(g, d, order);
  e.value *= scale;
  e.error_bound *= scale;
  return e;
}

// prod Gamma(a_k+1) Gamma(alpha+1) / Gamma(sum a_k + n + alpha + 1)
inline double log_dirichlet_closed(std::span<const double> exponents, double alpha) {
  if (exponents.empty()) throw std::invalid_argument("dirichlet_closed: empty exponent tuple");
  if (!(alpha > -1.0)) throw std::invalid_argument("dirichlet_closed: alpha must exceed -1");
  double s = log_gamma(alpha + 1.0);
  double total = 0.0;
  for (double a : exponents) {
    if (!(a > -1.0)) throw std::invalid_argument("dirichlet_closed: exponents must exceed -1");
    s += log_gamma(a + 1.0);
    total += a;
  }
  return s - log_gamma(total + static_cast<double>(exponents.size()) + alpha + 1.0);
}

inline double dirichlet_closed(std::span<const double> exponents, double alpha) {
  return std::exp(log_dirichlet_closed(exponents, alpha));
}

inline double dirichlet_closed(const MultiIndex& m, double alpha) {
  std::vector<double> a(m.begin(), m.end());
  return dirichlet_closed(a, alpha);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::size_t kMcChunk = 4096;

struct ChunkMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

// Chan et al. pairwise merge of running moments.
inline ChunkMoments merge(const ChunkMoments& x, const ChunkMoments& y) {
  if (x.count == 0) return y;
  if (y.count == 0) return x;
  ChunkMoments out;
  out.count = x.count + y.count;
  const double delta = y.mean - x.mean;
  out.mean = x.mean + delta * static_cast<double>(y.count) / static_cast<double>(out.count);
  out.m2 = x.m2 + y.m2 +
           delta * delta * static_cast<double>(x.count) * static_cast<double>(y.count) /
               static_cast<double>(out.count);
  return out;
}

}  // namespace detail

// Samples u ~ Dirichlet(1,...,1, alpha+1) on the (n+1)-part simplex, whose
// density is proportional to (1 - sum u)^alpha. Samples are drawn in chunks,
// each with its own engine seeded from (seed, chunk), and moments are merged
// in chunk order, so the result does not depend on the thread count.
inline Estimate mc_integrate(const SimplexFunction& g, const SimplexDomain& d, std::size_t samples,
                             std::uint64_t seed, unsigned threads = 1) {
  d.validate();
  if (samples < 1000) throw std::invalid_argument("mc_integrate: need at least 1000 samples");
  const std::size_t chunks = (samples + detail::kMcChunk - 1) / detail::kMcChunk;
  std::vector<detail::ChunkMoments> results(chunks);

  auto run_chunk = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 eng(seq);
    std::exponential_distribution<double> expo(1.0);
    std::gamma_distribution<double> last(d.alpha + 1.0, 1.0);
    const std::size_t begin = c * detail::kMcChunk;
    const std::size_t end = std::min(samples, begin + detail::kMcChunk);
    std::vector<double> u(static_cast<std::size_t>(d.n));
    detail::ChunkMoments mom;
    for (std::size_t s = begin; s < end; ++s) {
      double total = 0.0;
      for (auto& x : u) {
        x = expo(eng);
        total += x;
      }
      total += last(eng);
      for (auto& x : u) x /= total;
      const double v = g(u);
      if (std::isnan(v)) throw IntegrationError("integrand returned NaN");
      ++mom.count;
      const double delta = v - mom.mean;
      mom.mean += delta / static_cast<double>(mom.count);
      mom.m2 += delta * (v - mom.mean);
    }
    results[c] = mom;
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = t; c < chunks; c += threads) run_chunk(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  detail::ChunkMoments total;
  for (const auto& r : results) total = detail::merge(total, r);
  const double volume = std::exp(log_gamma(d.alpha + 1.0) - log_gamma(d.n + d.alpha + 1.0));
  const double var = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  const double se = std::sqrt(var / static_cast<double>(total.count));
  return {volume * total.mean, 3.0 * volume * se, Method::monte_carlo};
}

}  // namespace toeplitz
