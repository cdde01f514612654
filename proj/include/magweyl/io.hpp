#pragma once

#include "magweyl/lie_algebra.hpp"
#include "magweyl/magnetic.hpp"
#include "magweyl/phase_space.hpp"
#include "magweyl/weyl.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace magweyl {

/// Algebra from JSON text {"dim": d, "brackets": [{"i":1, "j":2, "coeffs":[...]}, ...]}
/// with 1-based indices. [e_j, e_i] = -[e_i, e_j] is filled in; giving both
/// orders with inconsistent values is a ConfigError.
NilpotentLieAlgebra algebra_from_json(std::string_view text);
std::string algebra_to_json(const NilpotentLieAlgebra& algebra);

/// Preset name ("heisenberg:3") or path to an algebra file.
NilpotentLieAlgebra load_algebra(const std::string& spec, const std::filesystem::path& base_dir = {});

/// Potential from JSON text {"components": [[{"exponents":[...], "coeff":c}, ...], ...]},
/// one monomial list per dual-basis component.
MagneticPotential potential_from_json(const NilpotentLieAlgebra& algebra, std::string_view text);
std::string potential_to_json(const MagneticPotential& potential);

/// Preset name ("landau:0.5") or path to a potential file.
MagneticPotential load_potential(const NilpotentLieAlgebra& algebra, const std::string& spec,
                                 const std::filesystem::path& base_dir = {});

/// Field dump: one JSON header line, then raw little-endian complex64 pairs.
struct Dump {
  std::string kind;  // "symbol", "kernel", "config"
  PhaseSpaceGrid grid;
  ComplexArray values;
};

void write_dump(const std::filesystem::path& path, const SymbolField& a);
void write_dump(const std::filesystem::path& path, const IntegralKernel& k);
void write_dump(const std::filesystem::path& path, const ConfigField& f);
/// Throws ConfigError on a malformed header or a size mismatch.
Dump read_dump(const std::filesystem::path& path);
/// Header line (without the newline) written for a dump.
std::string dump_header(std::string_view kind, const PhaseSpaceGrid& grid);

/// Lowercase hex SHA-256 of a file.
std::string sha256_file(const std::filesystem::path& path);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_seconds = 0.0;
};

struct Report {
  std::vector<Check> checks;
  bool pass() const;
};

/// Deterministic JSON (no timings).
std::string report_json(const Report& report);
/// check,value,tolerance,pass,wall_seconds
std::string report_csv(const Report& report);

}  // namespace magweyl
