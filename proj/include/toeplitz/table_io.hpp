#pragma once

// CSV / JSON serialization of spectral tables, orbit listings and check
// reports. Floats are written with 17 significant digits so that reading an
// emitted table back reproduces it bit for bit.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "toeplitz/spectral.hpp"
#include "toeplitz/verify.hpp"

namespace toeplitz {

struct FormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace csv {

inline std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << quote(fields[i]);
  }
  os << '\n';
}

// RFC 4180 style: quoted fields may contain commas and doubled quotes.
inline std::vector<std::vector<std::string>> read(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (quoted) throw FormatError("unterminated quoted CSV field");
    fields.push_back(std::move(cur));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace csv

inline std::vector<std::string> index_header(int n) {
  std::vector<std::string> h;
  for (int k = 1; k <= n; ++k) h.push_back("i" + std::to_string(k));
  return h;
}

inline std::vector<std::string> table_header(int n) {
  auto h = index_header(n);
  h.insert(h.end(), {"degree", "orbit_size", "class", "branch", "gamma", "error_bound", "method"});
  return h;
}

inline void write_table_csv(std::ostream& os, const SpectralTable& t) {
  csv::write_row(os, table_header(t.weight.n));
  for (const auto& [key, est] : t.entries) {
    std::vector<std::string> row;
    for (int e : key.canonical) row.push_back(std::to_string(e));
    row.push_back(std::to_string(key.canonical.degree()));
    row.push_back(std::to_string(orbit_size(key.canonical)));
    row.push_back(to_string(classify_index(key.canonical)));
    row.push_back(to_string(key.branch));
    row.push_back(format_double(est.value));
    row.push_back(format_double(est.error_bound));
    row.push_back(to_string(est.method));
    csv::write_row(os, row);
  }
}

namespace detail {
inline int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw FormatError("expected integer, got '" + s + "'");
  }
  if (used != s.size()) throw FormatError("expected integer, got '" + s + "'");
  return v;
}
inline double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError("expected number, got '" + s + "'");
  }
  if (used != s.size()) throw FormatError("expected number, got '" + s + "'");
  return v;
}
}  // namespace detail

// CSV carries only the rows; weight, class and symbol come from the caller.
// max_degree is taken from the rows.
inline SpectralTable read_table_csv(std::istream& is, const WeightParam& w, SymbolClass cls,
                                    const std::string& symbol = {}) {
  const auto rows = csv::read(is);
  if (rows.empty()) throw FormatError("empty table");
  const int n = static_cast<int>(rows.front().size()) - 7;
  if (n < 1 || rows.front() != table_header(n)) throw FormatError("unexpected table header");
  if (n != w.n) throw FormatError("table dimension does not match weight parameter");
  SpectralTable t;
  t.weight = w;
  t.symbol_class = cls;
  t.symbol = symbol;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != rows.front().size()) throw FormatError("ragged row " + std::to_string(r));
    std::vector<int> e;
    for (int k = 0; k < n; ++k) e.push_back(detail::to_int(f[static_cast<std::size_t>(k)]));
    TableKey key{MultiIndex(std::move(e)), branch_from_string(f[static_cast<std::size_t>(n) + 3])};
    t.max_degree = std::max(t.max_degree, key.canonical.degree());
    t.entries.emplace(key, Estimate{detail::to_double(f[static_cast<std::size_t>(n) + 4]),
                                    detail::to_double(f[static_cast<std::size_t>(n) + 5]),
                                    method_from_string(f[static_cast<std::size_t>(n) + 6])});
  }
  return t;
}

inline nlohmann::json table_to_json(const SpectralTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, est] : t.entries) {
    rows.push_back({{"iota", key.canonical.exponents()},
                    {"degree", key.canonical.degree()},
                    {"orbit_size", orbit_size(key.canonical)},
                    {"class", to_string(classify_index(key.canonical))},
                    {"branch", to_string(key.branch)},
                    {"gamma", est.value},
                    {"error_bound", est.error_bound},
                    {"method", to_string(est.method)}});
  }
  return {{"n", t.weight.n},
          {"alpha", t.weight.alpha},
          {"max_degree", t.max_degree},
          {"symbol", t.symbol},
          {"symbol_class", to_string(t.symbol_class)},
          {"rows", rows}};
}

inline SpectralTable table_from_json(const nlohmann::json& j) {
  try {
    SpectralTable t;
    t.weight = WeightParam(j.at("alpha").get<double>(), j.at("n").get<int>());
    t.max_degree = j.at("max_degree").get<int>();
    t.symbol = j.at("symbol").get<std::string>();
    t.symbol_class = symbol_class_from_string(j.at("symbol_class").get<std::string>());
    for (const auto& row : j.at("rows")) {
      TableKey key{MultiIndex(row.at("iota").get<std::vector<int>>()),
                   branch_from_string(row.at("branch").get<std::string>())};
      t.entries.emplace(key, Estimate{row.at("gamma").get<double>(), row.at("error_bound").get<double>(),
                                      method_from_string(row.at("method").get<std::string>())});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed table JSON: ") + e.what());
  }
}

inline void write_table_json(std::ostream& os, const SpectralTable& t) { os << table_to_json(t).dump(2) << '\n'; }

inline SpectralTable read_table_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  return table_from_json(j);
}

// ---------------------------------------------------------------------------
// Orbit listings
// ---------------------------------------------------------------------------

inline std::string join_indices(const std::vector<MultiIndex>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i].to_string();
  }
  return s;
}

// Inverse of join_indices: "(2,1,0) (1,0,2)" -> {(2,1,0), (1,0,2)}.
inline std::vector<MultiIndex> split_indices(const std::string& s) {
  std::vector<MultiIndex> out;
  std::size_t i = 0;
  while ((i = s.find('(', i)) != std::string::npos) {
    const auto j = s.find(')', i);
    if (j == std::string::npos) throw FormatError("unbalanced index list");
    std::vector<int> e;
    std::stringstream ss(s.substr(i + 1, j - i - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) e.push_back(detail::to_int(tok));
    out.emplace_back(std::move(e));
    i = j + 1;
  }
  return out;
}

inline void write_orbits_csv(std::ostream& os, const std::vector<Orbit>& orbits, int n, bool alternating) {
  auto h = index_header(n);
  h.insert(h.end(), {"degree", "orbit_size", "class"});
  if (alternating) {
    h.insert(h.end(), {"plus_elements", "minus_elements"});
  } else {
    h.push_back("elements");
  }
  csv::write_row(os, h);
  for (const auto& o : orbits) {
    std::vector<std::string> row;
    for (int e : o.canonical) row.push_back(std::to_string(e));
    row.push_back(std::to_string(o.degree()));
    row.push_back(std::to_string(o.size()));
    row.push_back(to_string(o.cls));
    if (alternating) {
      row.push_back(join_indices(o.plus_elements));
      row.push_back(join_indices(o.minus_elements));
    } else {
      row.push_back(join_indices(o.elements));
    }
    csv::write_row(os, row);
  }
}

inline nlohmann::json orbits_to_json(const std::vector<Orbit>& orbits, int n, bool alternating) {
  nlohmann::json rows = nlohmann::json::array();
  auto list = [](const std::vector<MultiIndex>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& m : v) a.push_back(m.exponents());
    return a;
  };
  for (const auto& o : orbits) {
    nlohmann::json row = {{"iota", o.canonical.exponents()},
                          {"degree", o.degree()},
                          {"orbit_size", o.size()},
                          {"class", to_string(o.cls)}};
    if (alternating) {
      row["plus_elements"] = list(o.plus_elements);
      row["minus_elements"] = list(o.minus_elements);
    } else {
      row["elements"] = list(o.elements);
    }
    rows.push_back(std::move(row));
  }
  return {{"n", n}, {"group", alternating ? "alternating" : "symmetric"}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Check reports
// ---------------------------------------------------------------------------

inline void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports) {
  csv::write_row(os, {"name", "n", "alpha", "max_degree", "seed", "tol", "residual", "passed", "witness", "detail"});
  for (const auto& r : reports) {
    csv::write_row(os, {r.name, std::to_string(r.n), format_double(r.alpha), std::to_string(r.max_degree),
                        std::to_string(r.seed), format_double(r.tol), format_double(r.residual),
                        r.passed ? "true" : "false", r.witness, r.detail});
  }
}

inline nlohmann::json reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : reports) {
    a.push_back({{"name", r.name},
                 {"n", r.n},
                 {"alpha", r.alpha},
                 {"max_degree", r.max_degree},
                 {"seed", r.seed},
                 {"tol", r.tol},
                 {"residual", r.residual},
                 {"passed", r.passed},
                 {"witness", r.witness},
                 {"detail", r.detail}});
  }
  return a;
}

// ---------------------------------------------------------------------------
// Coefficient sequences: [{"m": [..], "re": x, "im": y}, ...]
// ---------------------------------------------------------------------------

using CoefficientList = std::vector<std::pair<MultiIndex, std::complex<double>>>;

inline CoefficientList read_coefficients_json(std::istream& is) {
  try {
    nlohmann::json j;
    is >> j;
    if (!j.is_array()) throw FormatError("coefficient file must hold a JSON array");
    CoefficientList out;
    for (const auto& e : j) {
      out.emplace_back(MultiIndex(e.at("m").get<std::vector<int>>()),
                       std::complex<double>(e.at("re").get<double>(), e.value("im", 0.0)));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed coefficient JSON: ") + e.what());
  } catch (const DimensionError& e) {
    throw FormatError(std::string("malformed coefficient JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const FormatError*>(&e)) throw;
    throw FormatError(std::string("malformed coefficient JSON: ") + e.what());
  }
}

inline void write_coefficients_json(std::ostream& os, const CoefficientList& c) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [m, v] : c) a.push_back({{"m", m.exponents()}, {"re", v.real()}, {"im", v.imag()}});
  os << a.dump(2) << '\n';
}

}  // namespace toeplitz
