#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "toeplitz/library.hpp"
#include "toeplitz/spectral.hpp"

using namespace toeplitz;

namespace {

SpectralTable table_for(const std::string& text, int n, double alpha, int d, int order = 0) {
  const auto a = parse_symbol(text, n);
  return build_table(a, WeightParam(alpha, n), d, order ? order : default_order(d));
}

// Every alternating table entry compared on each element of its (half-)orbit.
double worst_branch_spread(const SymbolExpr& a, const WeightParam& w, int d, int order) {
  const SpectralEvaluator ev(a, w, order);
  double worst = 0.0;
  for (const auto& o : enumerate_canonical(w.n, d)) {
    for (const auto* half : {&o.plus_elements, &o.minus_elements}) {
      const double ref = ev.gamma(half->front()).value;
      for (const auto& m : *half) worst = std::max(worst, std::abs(ev.gamma(m).value - ref));
    }
  }
  return worst;
}

}  // namespace

TEST(GammaPoint, Examples) {
  const WeightParam w0(0.0, 2);
  EXPECT_NEAR(gamma_point(parse_symbol("r1^2*r2^2", 2), {0, 0}, w0, 12).value, 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(gamma_point(parse_symbol("r1^2*r2^2", 2), {1, 1}, w0, 12).value, 4.0 / 30.0, 1e-15);
  EXPECT_NEAR(gamma_point(parse_symbol("S", 2), {0, 0}, w0, 12).value, 2.0 / 3.0, 1e-14);
  for (const auto& m : all_indices_up_to(3, 5)) {
    EXPECT_NEAR(gamma_point(parse_symbol("1", 3), m, WeightParam(1.5, 3), 12).value, 1.0, 1e-13);
  }
  EXPECT_THROW(gamma_point(parse_symbol("S", 2), {0, 0, 0}, w0, 12), DimensionError);
  EXPECT_THROW(gamma_point(parse_symbol("S", 3), {0, 0, 0}, w0, 12), DimensionError);
}

TEST(GammaPoint, ErrorBoundIsReported) {
  const auto e = gamma_point(parse_symbol("exp(-S)", 2), {3, 1}, WeightParam(0.0, 2), 24);
  EXPECT_EQ(e.method, Method::tensor_rule);
  EXPECT_GE(e.error_bound, 0.0);
  EXPECT_LT(e.error_bound, 1e-10);
}

TEST(GammaMonomialClosed, Examples) {
  const WeightParam w(0.0, 2);
  EXPECT_NEAR(gamma_monomial_closed({1, 0}, {1, 0}, w), 0.5, 1e-15);
  EXPECT_NEAR(gamma_monomial_closed({1, 0}, {0, 1}, w), 0.25, 1e-15);
  EXPECT_NEAR(gamma_monomial_closed({0, 0}, {5, 2}, WeightParam(2.5, 2)), 1.0, 1e-14);
  for (double alpha : {0.0, 1.5}) {
    for (const auto& m : all_indices_up_to(2, 8)) {
      EXPECT_NEAR(gamma_monomial_closed({1, 1}, m, WeightParam(alpha, 2)), oracle::product_closed(m[0], m[1], alpha),
                  1e-14);
    }
  }
}

// Quadrature agrees with the closed monomial formula for every beta, m with small degrees.
TEST(Properties, QuadratureMatchesMonomialClosedForm) {
  for (int n = 1; n <= 3; ++n) {
    const WeightParam w(0.75, n);
    for (const auto& beta : all_indices_up_to(n, 3)) {
      std::string text = "1";
      for (int k = 0; k < n; ++k) {
        if (beta[k]) text += "*r" + std::to_string(k + 1) + "^" + std::to_string(2 * beta[k]);
      }
      const SpectralEvaluator ev(parse_symbol(text, n), w, 12);
      for (const auto& m : all_indices_up_to(n, 6)) {
        ASSERT_NEAR(ev.gamma(m).value, gamma_monomial_closed(beta, m, w), 1e-12) << text << " " << m;
      }
    }
  }
}

TEST(GammaRadial, Examples) {
  const auto sq = [](double rho) { return rho * rho; };
  EXPECT_NEAR(gamma_radial([](double) { return 1.0; }, 4, WeightParam(1.0, 3), 10).value, 1.0, 1e-14);
  EXPECT_NEAR(gamma_radial(sq, 0, WeightParam(0.0, 2), 10).value, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(gamma_radial(sq, 1, WeightParam(0.0, 1), 10).value, 2.0 / 3.0, 1e-14);
  for (int n = 2; n <= 3; ++n) {
    for (int d = 0; d <= 8; ++d) {
      EXPECT_NEAR(gamma_radial(sq, d, WeightParam(0.5, n), 10).value, oracle::radial_rho_sq(d, n, 0.5), 1e-14);
    }
  }
  EXPECT_THROW(gamma_radial(sq, -1, WeightParam(0.0, 2), 10), std::invalid_argument);
}

TEST(Properties, RadialCollapse) {
  for (int n = 2; n <= 3; ++n) {
    const WeightParam w(1.0, n);
    const SpectralEvaluator ev(parse_symbol("exp(-S)", n), w, 24);
    for (const auto& m : all_indices_up_to(n, 6)) {
      const double one_d = gamma_radial([](double rho) { return std::exp(-rho * rho); }, m.degree(), w, 24).value;
      EXPECT_NEAR(ev.gamma(m).value, one_d, 1e-12) << m;
    }
  }
}

TEST(BuildTable, SymmetricProductEntries) {
  const auto t = table_for("r1^2*r2^2", 2, 0.0, 4);
  EXPECT_EQ(t.symbol_class, SymbolClass::SymmetricSepRadial);
  EXPECT_FALSE(t.splits_orbits());
  EXPECT_EQ(t.entries.size(), enumerate_canonical(2, 4).size());
  EXPECT_EQ(t.evaluations, t.entries.size());
  for (const auto& m : all_indices_up_to(2, 4)) {
    EXPECT_NEAR(t.gamma(m).value, oracle::product_closed(m[0], m[1], 0.0), 1e-13) << m;
  }
  EXPECT_THROW(t.gamma({3, 2}), DegreeOverflowError);
}

TEST(BuildTable, AntiSymmetricSplitsIc) {
  const auto t = table_for("sin(V)", 3, 0.0, 4);
  EXPECT_EQ(t.symbol_class, SymbolClass::AntiSymmetricSepRadial);
  EXPECT_TRUE(t.splits_orbits());
  EXPECT_NEAR(t.gamma({1, 1, 0}).value, 0.0, 1e-15);
  const double p = t.gamma({2, 1, 0}).value;
  EXPECT_GT(std::abs(p), 1e-8);
  EXPECT_NEAR(t.gamma({0, 2, 1}).value, p, 1e-15);
  EXPECT_NEAR(t.gamma({1, 2, 0}).value, -p, 1e-12);
  // One evaluation per I0 orbit, two per Ic orbit: never the orbit size.
  std::size_t expect = 0, orbit_total = 0;
  for (const auto& o : enumerate_canonical(3, 4)) {
    expect += o.cls == OrbitClass::Ic ? 2 : 1;
    orbit_total += o.size();
  }
  EXPECT_EQ(t.evaluations, expect);
  EXPECT_LT(t.evaluations, orbit_total);
}

TEST(BuildTable, RejectsSeparatelyRadialOnly) {
  EXPECT_THROW(table_for("r1^2", 3, 0.0, 4), ClassificationError);
  EXPECT_THROW(table_for("S", 2, 0.0, -1), std::invalid_argument);
}

TEST(BuildTable, OneDimensional) {
  const auto t = table_for("r1^2", 1, 0.0, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(t.gamma({k}).value, (k + 1.0) / (k + 2.0), 1e-14);
}

TEST(ApplyMultiplier, Examples) {
  const auto t = table_for("r1^2*r2^2", 2, 0.0, 3);
  CoefficientSequence c{{{0, 0}, {1.0, 0.0}}};
  const auto out = apply_multiplier(t, c);
  EXPECT_NEAR(out.at({0, 0}).real(), 1.0 / 12.0, 1e-15);

  const auto id = table_for("1", 2, 0.0, 3);
  CoefficientSequence d{{{1, 2}, {2.0, -1.0}}, {{0, 1}, {0.0, 3.0}}};
  const auto same = apply_multiplier(id, d);
  for (const auto& [m, v] : d) EXPECT_NEAR(std::abs(same.at(m) - v), 0.0, 1e-13);

  EXPECT_THROW(apply_multiplier(t, CoefficientSequence{{{4, 0}, {1.0, 0.0}}}), DegreeOverflowError);
}

TEST(Properties, MultiplierIsLinear) {
  const auto t = table_for("E2 + sin(V)", 3, 0.5, 4);
  std::mt19937_64 eng(8);
  std::normal_distribution<double> g;
  CoefficientSequence f, h, mix;
  const std::complex<double> lam(0.3, -1.2);
  for (const auto& m : all_indices_up_to(3, 4)) {
    f[m] = {g(eng), g(eng)};
    h[m] = {g(eng), g(eng)};
    mix[m] = f[m] + lam * h[m];
  }
  const auto tf = apply_multiplier(t, f), th = apply_multiplier(t, h), tm = apply_multiplier(t, mix);
  for (const auto& [m, v] : tm) EXPECT_LT(std::abs(v - (tf.at(m) + lam * th.at(m))), 1e-14);
}

TEST(BlockStructure, Sizes) {
  const auto t = table_for("S", 3, 0.0, 3);
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& b : block_structure(t)) {
    sizes.push_back(b.multiplicity());
    total += b.multiplicity();
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 3, 3, 3, 3, 6, 1}));
  EXPECT_EQ(total, oracle::all_tuples(3, 3).size());

  const auto alt = table_for("E2 + sin(V)", 3, 0.0, 3);
  std::size_t split = 0, alt_total = 0;
  for (const auto& b : block_structure(alt)) {
    alt_total += b.multiplicity();
    if (b.canonical == MultiIndex{2, 1, 0}) {
      EXPECT_EQ(b.multiplicity(), 3u);
      ++split;
    }
  }
  EXPECT_EQ(split, 2u);
  EXPECT_EQ(alt_total, total);

  for (const auto& b : block_structure(table_for("r1^2", 1, 0.0, 5))) EXPECT_EQ(b.multiplicity(), 1u);
}

TEST(Properties, OrbitConstancyForSymmetricSymbols) {
  for (const auto& s : library_with_class(3, SymbolClass::SymmetricSepRadial)) {
    const SpectralEvaluator ev(s.parse(3), WeightParam(1.0, 3), 20);
    for (const auto& o : enumerate_canonical(3, 6)) {
      const double ref = ev.gamma(o.canonical).value;
      for (const auto& m : o.elements) EXPECT_NEAR(ev.gamma(m).value, ref, 1e-12) << s.name << " " << m;
    }
  }
}

TEST(Properties, BranchConstancyForAlternatingSymbols) {
  for (auto cls : {SymbolClass::AlternatingSepRadial, SymbolClass::AntiSymmetricSepRadial}) {
    for (const auto& s : library_with_class(3, cls)) {
      EXPECT_LE(worst_branch_spread(s.parse(3), WeightParam(0.0, 3), 6, 20), 1e-12) << s.name;
    }
  }
}

TEST(Properties, AntiSymmetricZeroOnI0AndOddOnIc) {
  for (const auto& s : library_with_class(3, SymbolClass::AntiSymmetricSepRadial)) {
    const auto t = build_table(s.parse(3), WeightParam(0.5, 3), 6, 20);
    for (const auto& [key, e] : t.entries) {
      if (key.branch == Branch::whole) {
        EXPECT_NEAR(e.value, 0.0, 1e-12) << s.name << " " << key.canonical;
      } else if (key.branch == Branch::plus) {
        EXPECT_NEAR(e.value + t.entries.at({key.canonical, Branch::minus}).value, 0.0, 1e-12) << s.name;
      }
    }
  }
}

TEST(Properties, LinearityInSymbol) {
  const WeightParam w(0.5, 3);
  const auto a = parse_symbol("E2 + sin(V)", 3);
  const auto b = parse_symbol("exp(-S)", 3);
  const auto sum = parse_symbol("E2 + sin(V) + exp(-S)", 3);
  const auto scaled = parse_symbol("-2.5*(E2 + sin(V))", 3);
  const SpectralEvaluator ea(a, w, 16), eb(b, w, 16), es(sum, w, 16), ek(scaled, w, 16);
  for (const auto& m : all_indices_up_to(3, 5)) {
    EXPECT_NEAR(es.gamma(m).value, ea.gamma(m).value + eb.gamma(m).value, 1e-13);
    EXPECT_NEAR(ek.gamma(m).value, -2.5 * ea.gamma(m).value, 1e-13);
  }
}

// |gamma_a(m)| <= sup |a|: each gamma is an average of a against a probability density.
TEST(Properties, Boundedness) {
  struct Case {
    const char* text;
    double sup;
  };
  for (const auto& c : {Case{"S", 1.0}, Case{"sin(V)", 1.0}, Case{"cos(3*E1*E2)", 1.0}, Case{"exp(-S)", 1.0},
                        Case{"E2 + 0.5*S", 1.0}}) {
    const SpectralEvaluator ev(parse_symbol(c.text, 3), WeightParam(0.0, 3), 20);
    for (const auto& m : all_indices_up_to(3, 8)) EXPECT_LE(std::abs(ev.gamma(m).value), c.sup + 1e-12) << c.text;
  }
}

TEST(Properties, DecompositionAdditivity) {
  const WeightParam w(1.0, 3);
  for (const auto& s : library_with_class(3, SymbolClass::AlternatingSepRadial)) {
    const auto a = s.parse(3);
    const auto p = symmetrize_pair(a);
    const SpectralEvaluator ea(a, w, 16), ep(p.plus, w, 16), em(p.minus, w, 16);
    for (const auto& o : enumerate_canonical(3, 6)) {
      for (const auto& m : o.elements) {
        EXPECT_NEAR(ea.gamma(m).value, ep.gamma(m).value + em.gamma(m).value, 1e-12) << s.name;
        if (o.cls == OrbitClass::I0) {
          EXPECT_NEAR(em.gamma(m).value, 0.0, 1e-12) << s.name;
        }
      }
    }
  }
}

TEST(Properties, StrictInequalityForProduct) {
  const WeightParam w(0.0, 2);
  for (int k3 = 0; 2 * k3 <= 12; ++k3) {
    const double diag = gamma_monomial_closed({1, 1}, {k3, k3}, w);
    for (int k1 = 0; k1 <= 2 * k3; ++k1) {
      if (k1 == k3) continue;
      EXPECT_LT(gamma_monomial_closed({1, 1}, {k1, 2 * k3 - k1}, w), diag);
    }
  }
}

TEST(Properties, SingularWeightStillNormalized) {
  const auto t = table_for("1", 2, -0.5, 6);
  for (const auto& [key, e] : t.entries) EXPECT_NEAR(e.value, 1.0, 1e-12) << key.canonical;
}

TEST(Branch, StringRoundTrip) {
  for (auto b : {Branch::whole, Branch::plus, Branch::minus}) EXPECT_EQ(branch_from_string(to_string(b)), b);
  EXPECT_THROW(branch_from_string("both"), std::invalid_argument);
}
