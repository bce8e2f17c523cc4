#pragma once

// Built-in symbols covering each step of the inclusion chain
//   radial < symmetric < alternating < separately radial,
// plus anti-symmetric ones.

#include <string>
#include <vector>

#include "toeplitz/classify.hpp"

namespace toeplitz {

struct LibrarySymbol {
  std::string name;
  std::string text;
  SymbolClass expected;

  SymbolExpr parse(int n) const { return parse_symbol(text, n); }
};

// Symbols that make sense in dimension n, with the class expected there.
inline std::vector<LibrarySymbol> symbol_library(int n) {
  validate_dimension(n);
  std::vector<LibrarySymbol> lib = {
      {"one", "1", SymbolClass::Radial},
      {"norm_sq", "S", SymbolClass::Radial},
      {"gaussian", "exp(-S)", SymbolClass::Radial},
  };
  if (n == 1) {
    lib.push_back({"product", "E1", SymbolClass::Radial});
    return lib;
  }
  // For n = 2, A_2 is trivial, so every separately radial symbol is alternating.
  const auto alternating_or_less = SymbolClass::AlternatingSepRadial;
  lib.insert(lib.end(), {
      {"product", "E" + std::to_string(n), SymbolClass::SymmetricSepRadial},
      {"e2_half_s", "E2 + 0.5*S", SymbolClass::SymmetricSepRadial},
      {"cos_e1e2", "cos(3*E1*E2)", SymbolClass::SymmetricSepRadial},
      {"vandermonde", "V", SymbolClass::AntiSymmetricSepRadial},
      {"sin_v", "sin(V)", SymbolClass::AntiSymmetricSepRadial},
      {"v_e1", "V*E1", SymbolClass::AntiSymmetricSepRadial},
      {"e2_sin_v", "E2 + sin(V)", alternating_or_less},
      {"exp_v", "exp(4*V)", alternating_or_less},
      {"s_v_e1", "S + 2*V*E1", alternating_or_less},
      {"r1_sq", "r1^2", n == 2 ? alternating_or_less : SymbolClass::SepRadialOnly},
  });
  return lib;
}

inline std::vector<LibrarySymbol> library_with_class(int n, SymbolClass c) {
  std::vector<LibrarySymbol> out;
  for (auto& s : symbol_library(n)) {
    if (s.expected == c) out.push_back(s);
  }
  return out;
}

}  // namespace toeplitz
