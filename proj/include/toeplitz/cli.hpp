#pragma once

// Command implementations behind the `toeplitz` executable. Each command
// writes to the given stream and returns the process exit status:
//   0 success, 1 failed verification, 2 parse / input error,
//   3 classification failure or degree overflow.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "toeplitz/table_io.hpp"

namespace toeplitz::cli {

enum class Format { csv, json };

struct RunConfig {
  int n = 2;
  double alpha = 0.0;
  int max_degree = 8;
  int order = 0;  // 0: default_order(max_degree)
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  Format format = Format::csv;
  std::string symbol = "1";
  bool alternating_group = false;
  std::string inject_fault;

  WeightParam weight() const { return WeightParam(alpha, n); }
  int quadrature_order() const { return order > 0 ? order : default_order(max_degree); }

  void validate() const {
    weight();
    if (max_degree < 0 || max_degree > 200) throw std::invalid_argument("--max-degree must lie in [0, 200]");
    if (order != 0 && (order < 2 || order > 200)) throw std::invalid_argument("--order must lie in [2, 200]");
    if (mc_samples < 1000) throw std::invalid_argument("--mc-samples must be at least 1000");
    if (!(tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  }
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitClass = 3;

namespace detail {

struct Failure {
  int code;
  std::string message;
};

inline SymbolExpr parse_or_fail(const RunConfig& cfg) {
  try {
    return parse_symbol(cfg.symbol, cfg.n);
  } catch (const ParseError& e) {
    throw Failure{kExitParse, std::string("symbol parse error: ") + e.what()};
  }
}

inline SymbolClass classify_or_fail(const SymbolExpr& a, const RunConfig& cfg) {
  const auto cls = classify_by_sampling(a, {256, cfg.seed, cfg.tol});
  if (!is_alternating_class(cls)) {
    throw Failure{kExitClass, "symbol '" + cfg.symbol + "' is not alternating separately radial (class " +
                                  to_string(cls) + ")"};
  }
  return cls;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DegreeOverflowError& e) {
    err << "error: " << e.what() << '\n';
    return kExitClass;
  } catch (const SymbolDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
}

}  // namespace detail

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const auto a = detail::parse_or_fail(cfg);
    const auto cls = detail::classify_or_fail(a, cfg);
    const auto table = build_table(a, cfg.weight(), cfg.max_degree, cfg.quadrature_order(), cls);
    if (cfg.format == Format::csv) {
      write_table_csv(out, table);
    } else {
      write_table_json(out, table);
    }
    return kExitOk;
  });
}

inline int cmd_orbits(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const auto orbits = enumerate_canonical(cfg.n, cfg.max_degree);
    if (cfg.format == Format::csv) {
      write_orbits_csv(out, orbits, cfg.n, cfg.alternating_group);
    } else {
      out << orbits_to_json(orbits, cfg.n, cfg.alternating_group).dump(2) << '\n';
    }
    return kExitOk;
  });
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    SuiteOptions opt;
    opt.order = cfg.order;
    opt.inject_fault = cfg.inject_fault;
    opt.mc_samples = cfg.mc_samples;
    const auto reports = theorem_suite(cfg.n, cfg.weight(), cfg.max_degree, cfg.seed, cfg.tol, opt);
    if (cfg.format == Format::csv) {
      write_reports_csv(out, reports);
    } else {
      out << reports_to_json(reports).dump(2) << '\n';
    }
    const bool ok = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
    for (const auto& r : reports) {
      if (!r.passed) err << "FAILED " << r.name << ": residual " << r.residual << " at " << r.witness << '\n';
    }
    return ok ? kExitOk : kExitCheckFailed;
  });
}

// Spectral tables of a^+ and a^- side by side with gamma_a and the residual
// gamma_a - (gamma_{a^+} + gamma_{a^-}).
inline int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const auto a = detail::parse_or_fail(cfg);
    detail::classify_or_fail(a, cfg);
    SymmetrizedPair pair = [&] {
      try {
        return symmetrize_pair(a, std::nullopt, {256, cfg.seed, cfg.tol});
      } catch (const PreconditionError& e) {
        throw detail::Failure{kExitClass, e.what()};
      }
    }();
    const auto w = cfg.weight();
    const int order = cfg.quadrature_order();
    // One key layout for all three tables; the a^+ table simply has equal halves.
    const auto split = SymbolClass::AlternatingSepRadial;
    const auto ta = build_table(a, w, cfg.max_degree, order, split);
    auto tp = build_table(pair.plus, w, cfg.max_degree, order, split);
    auto tm = build_table(pair.minus, w, cfg.max_degree, order, split);
    tp.symbol_class = classify_by_sampling(pair.plus, {256, cfg.seed, cfg.tol});
    tm.symbol_class = classify_by_sampling(pair.minus, {256, cfg.seed, cfg.tol});

    double worst = 0.0;
    if (cfg.format == Format::csv) {
      auto h = index_header(cfg.n);
      h.insert(h.end(), {"degree", "orbit_size", "class", "branch", "gamma", "gamma_plus", "gamma_minus",
                         "additivity_residual"});
      csv::write_row(out, h);
    }
    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& [key, est] : ta.entries) {
      const double gp = tp.entries.at(key).value;
      const double gm = tm.entries.at(key).value;
      const double res = est.value - (gp + gm);
      worst = std::max(worst, std::abs(res));
      if (cfg.format == Format::csv) {
        std::vector<std::string> row;
        for (int e : key.canonical) row.push_back(std::to_string(e));
        row.push_back(std::to_string(key.canonical.degree()));
        row.push_back(std::to_string(orbit_size(key.canonical)));
        row.push_back(to_string(classify_index(key.canonical)));
        row.push_back(to_string(key.branch));
        row.push_back(format_double(est.value));
        row.push_back(format_double(gp));
        row.push_back(format_double(gm));
        row.push_back(format_double(res));
        csv::write_row(out, row);
      } else {
        residuals.push_back({{"iota", key.canonical.exponents()}, {"branch", to_string(key.branch)},
                             {"additivity_residual", res}});
      }
    }
    if (cfg.format == Format::json) {
      nlohmann::json j = {{"symbol", ta.symbol},
                          {"plus_symbol", pair.plus.to_string()},
                          {"minus_symbol", pair.minus.to_string()},
                          {"table", table_to_json(ta)},
                          {"plus_table", table_to_json(tp)},
                          {"minus_table", table_to_json(tm)},
                          {"additivity_residual", residuals},
                          {"max_additivity_residual", worst}};
      out << j.dump(2) << '\n';
    }
    return kExitOk;
  });
}

inline int cmd_apply(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const auto coeffs = read_coefficients_json(in);
    for (const auto& [m, v] : coeffs) {
      if (m.size() != cfg.n) throw FormatError("coefficient index " + m.to_string() + " has wrong dimension");
      if (m.degree() > cfg.max_degree) {
        throw DegreeOverflowError("coefficient index " + m.to_string() + " exceeds --max-degree " +
                                  std::to_string(cfg.max_degree));
      }
    }
    const auto a = detail::parse_or_fail(cfg);
    const auto cls = detail::classify_or_fail(a, cfg);
    const auto table = build_table(a, cfg.weight(), cfg.max_degree, cfg.quadrature_order(), cls);
    CoefficientList result;
    result.reserve(coeffs.size());
    for (const auto& [m, v] : coeffs) result.emplace_back(m, table.gamma(m).value * v);
    write_coefficients_json(out, result);
    return kExitOk;
  });
}

}  // namespace toeplitz::cli
