#include "magweyl/io.hpp"

#include "magweyl/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace magweyl {

using nlohmann::json;

namespace {

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string(what) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": bad \"" + key + "\": " + e.what());
  }
}

std::filesystem::path resolve(const std::string& spec, const std::filesystem::path& base) {
  std::filesystem::path p(spec);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

bool looks_like_file(const std::string& spec) {
  return spec.find('/') != std::string::npos || spec.ends_with(".json");
}

std::vector<std::string> axis_names(std::string_view kind, int dim) {
  std::vector<std::string> names;
  auto add = [&](const char* prefix) {
    for (int i = 1; i <= dim; ++i) names.push_back(prefix + std::to_string(i));
  };
  if (kind == "kernel") {
    add("Y");
    add("Z");
  } else if (kind == "symbol") {
    add("X");
    add("xi");
  } else if (kind == "config") {
    add("X");
  } else if (kind == "momentum") {
    add("xi");
  }
  return names;
}

void write_values(const std::filesystem::path& path, std::string_view kind, const PhaseSpaceGrid& grid,
                  const ComplexArray& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  const std::string header = dump_header(kind, grid);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.put('\n');
  std::vector<unsigned char> buf;
  buf.reserve(values.size() * 8);
  auto push = [&](float f) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(f);
    for (int b = 0; b < 4; ++b) buf.push_back(static_cast<unsigned char>(u >> (8 * b)));
  };
  for (const Complex& v : values) {
    push(static_cast<float>(v.real()));
    push(static_cast<float>(v.imag()));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace

NilpotentLieAlgebra algebra_from_json(std::string_view text) {
  const json j = parse(text, "algebra");
  const int d = get<int>(j, "dim", "algebra");
  if (d < 1 || d > kMaxDim) throw ConfigError("algebra: dim out of range");
  std::vector<double> c(static_cast<std::size_t>(d) * d * d, 0.0);
  std::vector<bool> set(static_cast<std::size_t>(d) * d, false);
  const json brackets = j.contains("brackets") ? j.at("brackets") : json::array();
  if (!brackets.is_array()) throw ConfigError("algebra: \"brackets\" must be a list");
  for (const json& b : brackets) {
    const int i = get<int>(b, "i", "algebra bracket") - 1;
    const int k = get<int>(b, "j", "algebra bracket") - 1;
    const auto coeffs = get<std::vector<double>>(b, "coeffs", "algebra bracket");
    if (i < 0 || i >= d || k < 0 || k >= d) throw ConfigError("algebra: bracket index out of range");
    if (static_cast<int>(coeffs.size()) != d) throw ConfigError("algebra: coeffs must have dim entries");
    bool nonzero = false;
    for (double x : coeffs) nonzero = nonzero || x != 0.0;
    if (i == k) {
      if (nonzero) throw ConfigError("algebra: [e_i, e_i] must vanish");
      continue;
    }
    const std::size_t ij = static_cast<std::size_t>(i) * d + k, ji = static_cast<std::size_t>(k) * d + i;
    for (int m = 0; m < d; ++m) {
      if (set[ij] && c[ij * d + m] != coeffs[m]) {
        throw ConfigError("algebra: bracket (" + std::to_string(i + 1) + "," + std::to_string(k + 1) +
                          ") given twice with different values");
      }
      c[ij * d + m] = coeffs[m];
      c[ji * d + m] = -coeffs[m];
    }
    set[ij] = set[ji] = true;
  }
  return NilpotentLieAlgebra::create(d, c);
}

std::string algebra_to_json(const NilpotentLieAlgebra& algebra) {
  const int d = algebra.dim();
  json brackets = json::array();
  for (int i = 0; i < d; ++i) {
    for (int k = i + 1; k < d; ++k) {
      std::vector<double> coeffs(d);
      bool nonzero = false;
      for (int m = 0; m < d; ++m) {
        coeffs[m] = algebra.structure_constant(i, k, m);
        nonzero = nonzero || coeffs[m] != 0.0;
      }
      if (nonzero) brackets.push_back({{"i", i + 1}, {"j", k + 1}, {"coeffs", coeffs}});
    }
  }
  return json{{"dim", d}, {"brackets", brackets}}.dump();
}

NilpotentLieAlgebra load_algebra(const std::string& spec, const std::filesystem::path& base_dir) {
  if (looks_like_file(spec)) return algebra_from_json(read_text(resolve(spec, base_dir)));
  return algebra_preset(spec);
}

MagneticPotential potential_from_json(const NilpotentLieAlgebra& algebra, std::string_view text) {
  const json j = parse(text, "potential");
  const json comps = j.is_array() ? j : (j.is_object() && j.contains("components") ? j.at("components") : json());
  if (!comps.is_array()) throw ConfigError("potential: expected \"components\" list");
  const int d = algebra.dim();
  if (j.is_object() && j.contains("dim") && get<int>(j, "dim", "potential") != d) {
    throw ConfigError("potential: dim does not match the algebra");
  }
  if (static_cast<int>(comps.size()) != d) throw ConfigError("potential: need one component per dimension");
  std::vector<Polynomial> out;
  for (const json& comp : comps) {
    if (!comp.is_array()) throw ConfigError("potential: each component is a monomial list");
    std::vector<Polynomial::Term> terms;
    for (const json& m : comp) {
      const auto e = get<std::vector<int>>(m, "exponents", "potential monomial");
      if (static_cast<int>(e.size()) != d) throw ConfigError("potential: exponents must have dim entries");
      Polynomial::Term t;
      for (int i = 0; i < d; ++i) {
        if (e[i] < 0 || e[i] > kMaxPotentialDegree) throw DegreeTooHigh("potential: exponent out of range");
        t.exponents[i] = static_cast<std::uint8_t>(e[i]);
      }
      t.coeff = get<double>(m, "coeff", "potential monomial");
      terms.push_back(t);
    }
    out.emplace_back(d, std::move(terms));
  }
  return MagneticPotential(algebra, std::move(out));
}

std::string potential_to_json(const MagneticPotential& potential) {
  const int d = potential.algebra().dim();
  json comps = json::array();
  for (const auto& p : potential.components()) {
    json list = json::array();
    for (const auto& t : p.terms()) {
      std::vector<int> e(t.exponents.begin(), t.exponents.begin() + d);
      list.push_back({{"exponents", e}, {"coeff", t.coeff}});
    }
    comps.push_back(list);
  }
  return json{{"dim", d}, {"components", comps}}.dump();
}

MagneticPotential load_potential(const NilpotentLieAlgebra& algebra, const std::string& spec,
                                 const std::filesystem::path& base_dir) {
  if (looks_like_file(spec)) return potential_from_json(algebra, read_text(resolve(spec, base_dir)));
  return potential_preset(algebra, spec);
}

std::string dump_header(std::string_view kind, const PhaseSpaceGrid& grid) {
  json h;
  h["kind"] = kind;
  h["dim"] = grid.dim();
  h["N"] = grid.points();
  h["L"] = grid.half_width();
  h["axis_order"] = axis_names(kind, grid.dim());
  h["layout"] = "row-major";
  h["dtype"] = "complex64-le";
  return h.dump();
}

void write_dump(const std::filesystem::path& path, const SymbolField& a) {
  write_values(path, "symbol", a.grid, a.values);
}

void write_dump(const std::filesystem::path& path, const IntegralKernel& k) {
  write_values(path, "kernel", k.grid, k.values);
}

void write_dump(const std::filesystem::path& path, const ConfigField& f) {
  write_values(path, f.domain == Domain::position ? "config" : "momentum", f.grid, f.values);
}

Dump read_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dump: missing header");
  const json h = parse(line, "dump header");
  Dump d;
  d.kind = get<std::string>(h, "kind", "dump header");
  const int dim = get<int>(h, "dim", "dump header");
  const int n = get<int>(h, "N", "dump header");
  const double l = get<double>(h, "L", "dump header");
  try {
    d.grid = make_grid(dim, n, l);
  } catch (const BadGridSpec& e) {
    throw ConfigError(std::string("dump: ") + e.what());
  }
  std::size_t count = 0;
  if (d.kind == "symbol" || d.kind == "kernel") {
    count = d.grid.symbol_size();
  } else if (d.kind == "config" || d.kind == "momentum") {
    count = d.grid.config_size();
  } else {
    throw ConfigError("dump: unknown kind " + d.kind);
  }
  std::vector<unsigned char> buf(count * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size()) || in.peek() != std::char_traits<char>::eof()) {
    throw ConfigError("dump: payload size does not match the header");
  }
  auto pull = [&](std::size_t at) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(buf[at + b]) << (8 * b);
    return static_cast<double>(std::bit_cast<float>(u));
  };
  d.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) d.values[i] = Complex(pull(8 * i), pull(8 * i + 4));
  return d;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  std::vector<char> chunk(1 << 16);
  while (in) {
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), chunk.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

bool Report::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string report_json(const Report& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json e;
    e["check"] = c.name;
    e["value"] = c.value;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  json j;
  j["checks"] = checks;
  j["pass"] = report.pass();
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& report) {
  std::string out = "check,value,tolerance,pass,wall_seconds\n";
  char buf[256];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%s,%.3f\n", c.value, c.tolerance, c.pass ? "true" : "false",
                  c.wall_seconds);
    out += c.name + buf;
  }
  return out;
}

}  // namespace magweyl
