#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gapbound/pipeline.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gapbound::Error("cannot write " + path);
  out << text;
}

/// foo.json -> foo.<suffix>.csv
std::string sibling(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? path.substr(0, dot) : path) + "." + suffix + ".csv";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-gap laboratory: frame bounds, shell sums and gap radii for exponential systems"};
  std::optional<int> example;
  std::optional<std::string> config;
  std::optional<std::string> out;
  gapbound::Overrides ov;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<int> truncation;
  std::vector<double> sides;

  auto* ex = app.add_option("--example", example, "Example to reproduce (2..6)")->check(CLI::Range(2, 6));
  auto* cf = app.add_option("--config", config, "JSON config with domain, spectrum and tasks")->check(CLI::ExistingFile);
  ex->excludes(cf);
  app.add_option("--out", out, "Write the JSON report here (CSV files are written next to it)");
  app.add_option("--seed", seed, "Seed for random test vectors");
  app.add_option("--tolerance", tolerance, "Principal tolerance of the example");
  app.add_option("--truncation", truncation, "Truncation: lattice steps, J for example 4, L*r for example 6");
  app.add_option("--sides", sides, "Example 2: box sides")->expected(1, 8);
  app.add_option("--t", ov.t, "Example 3: scale factor");
  app.add_option("--k", ov.k, "Example 5: tooth count");
  app.add_option("--r", ov.r, "Example 6: disk radius");
  app.add_option("--digits", ov.digits, "Example 4: base-4 digits of the spectrum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every usage error exits 2
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (!example && !config) {
    std::cerr << "one of --example or --config is required\n";
    return 2;
  }
  ov.seed = seed;
  ov.tolerance = tolerance;
  ov.truncation = truncation;
  if (!sides.empty()) ov.sides = sides;

  const auto start = std::chrono::steady_clock::now();
  gapbound::Report rep;
  try {
    rep = example ? gapbound::run_example(*example, ov) : gapbound::run_config(*config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << gapbound::table(rep);
  std::printf("%s  (%.2f s)\n", rep.passed() ? "all checks passed" : "some checks FAILED", wall);

  if (out) {
    try {
      write_file(*out, rep.doc.dump(2) + "\n");
      if (!rep.shell_rows.empty()) write_file(sibling(*out, "shells"), gapbound::csv(rep.shell_rows, "k"));
      if (!rep.eps_rows.empty()) write_file(sibling(*out, "eps"), gapbound::csv(rep.eps_rows, "eps"));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return rep.passed() ? 0 : 1;
}
