#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "toeplitz/cli.hpp"

namespace {

void add_common(CLI::App* sub, toeplitz::cli::RunConfig& cfg, std::string& output) {
  sub->add_option("--n", cfg.n, "Dimension of the ball");
  sub->add_option("--alpha", cfg.alpha, "Weight parameter alpha > -1");
  sub->add_option("--max-degree", cfg.max_degree, "Largest total degree |m| tabulated");
  sub->add_option("--order", cfg.order, "Gauss points per coordinate (default 12 + 2*max-degree)");
  sub->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples");
  sub->add_option("--seed", cfg.seed, "Random seed");
  sub->add_option("--tol", cfg.tol, "Check tolerance");
  sub->add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, toeplitz::cli::Format>{{"csv", toeplitz::cli::Format::csv},
                                                       {"json", toeplitz::cli::Format::json}},
          CLI::ignore_case));
  sub->add_option("--output", output, "Write to PATH instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace toeplitz::cli;
  CLI::App app{"Spectral functions of Toeplitz operators with separately radial symbols on weighted Bergman spaces"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string output;
  std::string input;
  std::string group = "symmetric";

  auto* spectrum = app.add_subcommand("spectrum", "Tabulate gamma per orbit (and per half-orbit)");
  auto* orbits = app.add_subcommand("orbits", "List canonical indices and their orbits");
  auto* verify = app.add_subcommand("verify", "Run the theorem check suite");
  auto* decompose = app.add_subcommand("decompose", "Split an alternating symbol into a^+ + a^-");
  auto* apply = app.add_subcommand("apply", "Multiply a coefficient sequence by gamma");

  for (auto* sub : {spectrum, orbits, verify, decompose, apply}) add_common(sub, cfg, output);
  for (auto* sub : {spectrum, decompose, apply}) sub->add_option("--symbol", cfg.symbol, "Symbol expression");
  orbits->add_option("--group", group, "symmetric | alternating")
      ->check(CLI::IsMember({"symmetric", "alternating"}));
  verify->add_option("--inject-fault", cfg.inject_fault, "Perturb one value to exercise a negative control");
  apply->add_option("--input", input, "Coefficient JSON (default stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }
  cfg.alternating_group = group == "alternating";

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) {
      std::cerr << "error: cannot open " << output << '\n';
      return kExitParse;
    }
  }
  std::ostream& out = output.empty() ? std::cout : file;

  if (spectrum->parsed()) return cmd_spectrum(cfg, out, std::cerr);
  if (orbits->parsed()) return cmd_orbits(cfg, out, std::cerr);
  if (verify->parsed()) return cmd_verify(cfg, out, std::cerr);
  if (decompose->parsed()) return cmd_decompose(cfg, out, std::cerr);
  if (input.empty()) return cmd_apply(cfg, std::cin, out, std::cerr);
  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << '\n';
    return kExitParse;
  }
  return cmd_apply(cfg, in, out, std::cerr);
}
