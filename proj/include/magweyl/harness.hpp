#pragma once

#include "magweyl/io.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace magweyl {

/// Symbol description used by build-kernel and the suites.
/// type: "gaussian", "poly-gaussian", "zero" or "file".
struct SymbolSpec {
  std::string type = "gaussian";
  /// Widths; 0 selects L/k and pi/(h k) with k = sqrt(pi N / 2).
  double sx = 0.0;
  double sxi = 0.0;
  std::vector<double> center;
  std::vector<double> momentum;
  std::filesystem::path path;
};

struct RunConfig {
  std::string algebra = "heisenberg:3";
  std::string potential = "zero";
  int n = 12;
  double half_width = 6.0;
  /// Optional explicit grid dimension, checked against the algebra.
  std::optional<int> grid_dim;
  std::vector<std::string> suites;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
  std::map<std::string, double> tolerances;
  SymbolSpec symbol;
  /// Second factor for the moyal command.
  std::optional<SymbolSpec> symbol_b;
  /// Relative paths in the file resolve against this directory.
  std::filesystem::path base_dir;
};

/// Throws ConfigError on unknown keys, bad types or missing files.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Algebra, potential and grid of a config. Throws ConfigError when the grid
/// dimension disagrees with the algebra.
WeylContext make_context(const RunConfig& config);

SymbolField make_symbol(const SymbolSpec& spec, const PhaseSpaceGrid& grid, const std::filesystem::path& base_dir);

/// algebra, fourier, unitarity, gauge, abelian-baseline, moyal-crosscheck, derivative-check.
const std::vector<std::string>& known_suites();

/// Runs the named suites in order. Throws ConfigError on unknown names.
Report run_suites(const RunConfig& config, const std::vector<std::string>& suites);

}  // namespace magweyl
