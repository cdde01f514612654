#include "magweyl/harness.hpp"

#include "magweyl/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace magweyl {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

LieVector random_vector(std::mt19937_64& rng, int d, double scale) {
  LieVector v(d);
  for (int i = 0; i < d; ++i) v[i] = uniform(rng, -scale, scale);
  return v;
}

double rel_l2(const ComplexArray& got, const ComplexArray& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::vector<double> vec_of(const json& j, const char* what) {
  try {
    return j.get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(what) + " must be a list of numbers");
  }
}

SymbolSpec parse_symbol(const json& j, const std::filesystem::path& base) {
  SymbolSpec s;
  if (j.is_string()) {
    s.type = j.get<std::string>();
  } else if (j.is_object()) {
    for (const auto& [key, v] : j.items()) {
      if (key == "type") {
        if (!v.is_string()) throw ConfigError("symbol.type must be a string");
        s.type = v.get<std::string>();
      } else if (key == "sx" || key == "sxi") {
        if (!v.is_number() || v.get<double>() <= 0.0) throw ConfigError("symbol." + key + " must be positive");
        (key == "sx" ? s.sx : s.sxi) = v.get<double>();
      } else if (key == "center") {
        s.center = vec_of(v, "symbol.center");
      } else if (key == "momentum") {
        s.momentum = vec_of(v, "symbol.momentum");
      } else if (key == "path") {
        if (!v.is_string()) throw ConfigError("symbol.path must be a string");
        s.path = v.get<std::string>();
        if (s.path.is_relative() && !base.empty()) s.path = base / s.path;
      } else {
        throw ConfigError("unknown symbol key: " + key);
      }
    }
  } else {
    throw ConfigError("symbol must be a string or an object");
  }
  if (s.type != "gaussian" && s.type != "poly-gaussian" && s.type != "zero" && s.type != "file") {
    throw ConfigError("unknown symbol type: " + s.type);
  }
  if (s.type == "file" && s.path.empty()) throw ConfigError("symbol of type file needs a path");
  return s;
}

using Clock = std::chrono::steady_clock;

class Suite {
 public:
  Suite(const RunConfig& config, Report& report) : config_(config), report_(report) {}

  // Records checks appended by body with the elapsed time of body.
  void timed(const std::function<void()>& body) {
    const std::size_t first = report_.checks.size();
    const auto t0 = Clock::now();
    body();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    for (std::size_t i = first; i < report_.checks.size(); ++i) report_.checks[i].wall_seconds = dt;
  }

  void add(const std::string& name, double value, double tolerance) {
    const auto it = config_.tolerances.find(name);
    if (it != config_.tolerances.end()) tolerance = it->second;
    report_.checks.push_back({name, value, tolerance, std::isfinite(value) && value <= tolerance, 0.0});
  }

 private:
  const RunConfig& config_;
  Report& report_;
};

std::mt19937_64 suite_rng(const RunConfig& config, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

void algebra_suite(const RunConfig& config, Suite& s) {
  const auto alg = load_algebra(config.algebra, config.base_dir);
  const int d = alg.dim();
  auto rng = suite_rng(config, 1);
  s.timed([&] {
    double assoc = 0.0, inv = 0.0;
    for (int t = 0; t < 100; ++t) {
      const LieVector x = random_vector(rng, d, 1.0), y = random_vector(rng, d, 1.0), z = random_vector(rng, d, 1.0);
      assoc = std::max(assoc, (alg.bch(alg.bch(x, y), z) - alg.bch(x, alg.bch(y, z))).cwiseAbs().maxCoeff());
      inv = std::max(inv, alg.bch(x, -x).cwiseAbs().maxCoeff());
      inv = std::max(inv, alg.bch(-x, x).cwiseAbs().maxCoeff());
      inv = std::max(inv, (alg.bch(x, alg.zero()) - x).cwiseAbs().maxCoeff());
    }
    s.add("algebra.bch-associativity", assoc, 1e-10);
    s.add("algebra.bch-inverse", inv, 1e-10);
  });
  s.timed([&] {
    double round = 0.0;
    for (int t = 0; t < 100; ++t) {
      const LieVector v = random_vector(rng, d, 1.0), y = random_vector(rng, d, 1.0);
      round = std::max(round, (alg.psi_inverse(v, alg.psi_map(v, y)) - y).cwiseAbs().maxCoeff());
    }
    s.add("algebra.psi-roundtrip", round, 1e-10);
    double det = 0.0;
    const double step = 1e-5;
    for (int t = 0; t < 20; ++t) {
      const LieVector v = random_vector(rng, d, 1.0), y = random_vector(rng, d, 1.0);
      Eigen::MatrixXd jac(d, d);
      for (int k = 0; k < d; ++k) {
        LieVector yp = y, ym = y;
        yp[k] += step;
        ym[k] -= step;
        jac.col(k) = (alg.psi_map(v, yp) - alg.psi_map(v, ym)) / (2.0 * step);
      }
      det = std::max(det, std::abs(jac.determinant() - 1.0));
    }
    s.add("algebra.psi-jacobian", det, 1e-6);
  });
  s.timed([&] {
    // top layer of the lower central series is central
    const auto& basis = alg.adapted_basis();
    const int top = alg.lcs_dims().back();
    double worst = 0.0;
    for (int c = d - top; c < d; ++c) {
      for (int i = 0; i < d; ++i) {
        worst = std::max(worst, alg.bracket(alg.basis_vector(i), basis.col(c)).cwiseAbs().maxCoeff());
      }
    }
    s.add("algebra.top-layer-central", worst, 1e-12);
  });
}

SymbolField random_smooth_symbol(const PhaseSpaceGrid& g, std::mt19937_64& rng) {
  const int d = g.dim();
  const double xmax = g.half_width(), kmax = kPi / g.spacing();
  struct Bump {
    LieVector x;
    LieVector k;
    double sx, sk;
    Complex amp;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < 3; ++b) {
    bumps.push_back({random_vector(rng, d, xmax / 3), random_vector(rng, d, kmax / 3), uniform(rng, 0.15, 0.3) * xmax,
                     uniform(rng, 0.15, 0.3) * kmax, Complex(uniform(rng, -1, 1), uniform(rng, -1, 1))});
  }
  return sample_symbol(g, [&](const LieVector& x, const LieCovector& xi) {
    Complex v = 0.0;
    for (const auto& b : bumps) {
      const double e = (x - b.x).squaredNorm() / (b.sx * b.sx) + (xi.coords() - b.k).squaredNorm() / (b.sk * b.sk);
      v += b.amp * std::exp(-0.5 * e);
    }
    return v;
  });
}

void fourier_suite(const RunConfig& config, Suite& s) {
  const auto ctx = make_context(config);
  auto rng = suite_rng(config, 2);
  s.timed([&] {
    double inv = 0.0, unit = 0.0;
    for (int t = 0; t < 5; ++t) {
      const auto a = random_smooth_symbol(ctx.grid(), rng);
      const auto fa = symplectic_fourier(a);
      inv = std::max(inv, rel_l2(symplectic_fourier(fa).values, a.values));
      unit = std::max(unit, std::abs(l2_norm(fa) / l2_norm(a) - 1.0));
    }
    s.add("fourier.involution", inv, 1e-10);
    s.add("fourier.unitarity", unit, 1e-10);
  });
}

// Box tail e^{-k^2/2} equals the band-limit tail at k = sqrt(pi N / 2).
double balance(const PhaseSpaceGrid& g) { return std::sqrt(kPi * g.points() / 2.0); }
double default_sx(const PhaseSpaceGrid& g) { return g.half_width() / balance(g); }
double default_sxi(const PhaseSpaceGrid& g) { return kPi / (g.spacing() * balance(g)); }

void unitarity_suite(const RunConfig& config, Suite& s) {
  const auto ctx = make_context(config);
  const double tol = ctx.algebra().is_abelian() ? 1e-6 : 1e-3;
  for (const char* type : {"gaussian", "poly-gaussian"}) {
    s.timed([&] {
      SymbolSpec spec = config.symbol.type == "gaussian" || config.symbol.type == "poly-gaussian" ? config.symbol
                                                                                                  : SymbolSpec{};
      spec.type = type;
      const auto a = make_symbol(spec, ctx.grid(), config.base_dir);
      const double ratio = l2_norm(kernel_from_symbol(ctx, a)) / l2_norm(a);
      s.add(std::string("unitarity.") + type, std::abs(ratio - 1.0), tol);
    });
  }
}

void gauge_suite(const RunConfig& config, Suite& s) {
  const auto ctx = make_context(config);
  const auto& alg = ctx.algebra();
  const auto a = make_symbol(SymbolSpec{}, ctx.grid(), {});
  const Polynomial psi = random_polynomial(alg.dim(), 3, config.seed ^ 0x9e3779b97f4a7c15ULL, 0.1);
  const auto shifted = ctx.potential().plus_gradient(psi);
  s.timed([&] {
    s.add("gauge.kernel-conjugation", gauge_covariance_check(ctx, shifted, a).max_relative_error, 1e-9);
  });
  bool plane = alg.dim() == 2 && alg.is_abelian();
  if (plane) {
    s.timed([&] {
      const auto landau = ctx.with_potential(potential_preset(alg, "landau:0.5"));
      const auto sym = potential_preset(alg, "symmetric:0.5");
      s.add("gauge.landau-symmetric", gauge_covariance_check(landau, sym, a).max_relative_error, 1e-9);
    });
  }
  s.timed([&] {
    SymbolSpec bs;
    bs.center = std::vector<double>(alg.dim(), 0.0);
    bs.center[0] = -ctx.grid().spacing();
    bs.type = "poly-gaussian";
    const auto b = make_symbol(bs, ctx.grid(), {});
    const auto c = moyal_product(ctx, a, b);
    const auto c1 = moyal_product(ctx.with_potential(shifted), a, b);
    s.add("gauge.moyal-invariance", rel_l2(c1.values, c.values), 1e-6);
  });
}

void abelian_baseline_suite(const RunConfig&, Suite& s) {
  s.timed([&] {
    const auto alg = algebra_preset("abelian:1");
    const WeylContext ctx(alg, MagneticPotential::zero(alg), make_grid(1, 64, 8.0));
    const auto a = sample_symbol(ctx.grid(), [](const LieVector& x, const LieCovector& xi) {
      return Complex(std::exp(-0.5 * (x.squaredNorm() + xi.coords().squaredNorm())), 0.0);
    });
    const auto k = kernel_from_symbol(ctx, a);
    const auto& g = ctx.grid();
    ComplexArray want(k.values.size());
    for (int i = 0; i < g.points(); ++i) {
      for (int j = 0; j < g.points(); ++j) {
        const double y = g.x(i), z = g.x(j);
        want[static_cast<std::size_t>(i) * g.points() + j] =
            std::exp(-(y + z) * (y + z) / 8.0 - (y - z) * (y - z) / 2.0) / std::sqrt(2.0 * kPi);
      }
    }
    s.add("abelian-baseline.classical-kernel", rel_l2(k.values, want), 1e-6);
  });
}

std::size_t centered_index(const PhaseSpaceGrid& g, const std::vector<int>& offsets) {
  std::size_t f = 0;
  for (int o : offsets) f = f * g.points() + static_cast<std::size_t>(g.points() / 2 + o);
  return f;
}

void moyal_crosscheck_suite(const RunConfig& config, Suite& s) {
  const auto ctx = make_context(config);
  if (ctx.algebra().nilpotency_index() > 1) {
    throw ConfigError("moyal-crosscheck needs an algebra of nilpotency index at most 1");
  }
  s.timed([&] {
    const auto& g = ctx.grid();
    const int d = g.dim();
    SymbolSpec as;
    as.sx = 0.28 * g.half_width();
    as.sxi = 0.22 * kPi / g.spacing();
    as.center = std::vector<double>(d, 0.0);
    as.center[0] = g.spacing();
    SymbolSpec bs = as;
    bs.type = "poly-gaussian";
    bs.center[0] = 0.0;
    const auto a = make_symbol(as, g, {});
    const auto b = make_symbol(bs, g, {});
    const auto c = moyal_product(ctx, a, b);
    const std::size_t m = g.config_size();
    double worst = 0.0;
    const int probes[5][2] = {{0, 0}, {1, 0}, {0, 1}, {-1, 1}, {1, -1}};
    for (const auto& p : probes) {
      std::vector<int> xo(d, 0), ko(d, 0);
      xo[0] = p[0];
      ko[d - 1] = p[1];
      const std::size_t ix = centered_index(g, xo), ik = centered_index(g, ko);
      const Complex kernel = c.values[ix * m + ik];
      const Complex direct = moyal_2step_point(ctx, a, b, g.config_point(ix), g.dual_point(ik));
      worst = std::max(worst, std::abs(direct - kernel) / std::abs(kernel));
    }
    s.add("moyal-crosscheck.two-step-vs-kernel", worst, 5e-2);
  });
  s.timed([&] {
    // e^{-|z|^2/2} # e^{-|z|^2/2} = 0.8 e^{-0.8 |z|^2} on R^1
    const auto alg = algebra_preset("abelian:1");
    const WeylContext flat(alg, MagneticPotential::zero(alg), make_grid(1, 64, 8.0));
    const auto& g = flat.grid();
    const auto a = sample_symbol(g, [](const LieVector& x, const LieCovector& xi) {
      return Complex(std::exp(-0.5 * (x.squaredNorm() + xi.coords().squaredNorm())), 0.0);
    });
    auto oracle = [](const LieVector& x, const LieCovector& xi) {
      return Complex(0.8 * std::exp(-0.8 * (x.squaredNorm() + xi.coords().squaredNorm())), 0.0);
    };
    double worst = 0.0;
    const int probes[5][2] = {{0, 0}, {3, 0}, {0, -4}, {5, 2}, {-2, 6}};
    for (const auto& p : probes) {
      const std::size_t ix = centered_index(g, {p[0]}), ik = centered_index(g, {p[1]});
      const auto x = g.config_point(ix);
      const auto xi = g.dual_point(ik);
      const Complex want = oracle(x, xi);
      worst = std::max(worst, std::abs(moyal_2step_point(flat, a, a, x, xi) - want) / std::abs(want));
    }
    s.add("moyal-crosscheck.abelian-oracle", worst, 2e-2);
    s.add("moyal-crosscheck.abelian-kernel-route", rel_l2(moyal_product(flat, a, a).values, sample_symbol(g, oracle).values),
          1e-4);
  });
}

void derivative_suite(const RunConfig& config, Suite& s) {
  const auto ctx = make_context(config);
  auto rng = suite_rng(config, 7);
  s.timed([&] {
    const auto& g = ctx.grid();
    const double sigma = 0.215 * g.half_width();
    const auto f = sample_config(g, [sigma](const LieVector& y) {
      return Complex(std::exp(-0.5 * y.squaredNorm() / (sigma * sigma)), 0.0);
    });
    LieVector p0 = random_vector(rng, g.dim(), 0.7);
    // steps 1e-3 and 5e-4: error_2tau is the error at 1e-3
    const auto r = magnetic_derivative_check(ctx, p0, f, 5e-4);
    s.add("derivative-check.error", r.error_2tau, 1e-4);
    s.add("derivative-check.richardson", r.error_richardson, 1e-4);
    s.add("derivative-check.order", std::abs(r.ratio / 4.0 - 1.0), 0.2);
  });
}

using SuiteFn = void (*)(const RunConfig&, Suite&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"algebra", algebra_suite},
      {"fourier", fourier_suite},
      {"unitarity", unitarity_suite},
      {"gauge", gauge_suite},
      {"abelian-baseline", abelian_baseline_suite},
      {"moyal-crosscheck", moyal_crosscheck_suite},
      {"derivative-check", derivative_suite},
  };
  return table;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "algebra") {
        c.algebra = v.get<std::string>();
      } else if (key == "potential") {
        c.potential = v.get<std::string>();
      } else if (key == "grid") {
        if (!v.is_object()) throw ConfigError("grid must be an object");
        for (const auto& [gk, gv] : v.items()) {
          if (gk == "N") {
            c.n = gv.get<int>();
          } else if (gk == "L") {
            c.half_width = gv.get<double>();
          } else if (gk == "dim") {
            c.grid_dim = gv.get<int>();
          } else {
            throw ConfigError("unknown grid key: " + gk);
          }
        }
      } else if (key == "suites") {
        c.suites = v.get<std::vector<std::string>>();
      } else if (key == "seed") {
        if (!v.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
      } else if (key == "out") {
        c.out_dir = v.get<std::string>();
        if (c.out_dir.is_relative() && !base_dir.empty()) c.out_dir = base_dir / c.out_dir;
      } else if (key == "tolerances") {
        c.tolerances = v.get<std::map<std::string, double>>();
      } else if (key == "symbol") {
        c.symbol = parse_symbol(v, base_dir);
      } else if (key == "symbol_b") {
        c.symbol_b = parse_symbol(v, base_dir);
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [name, tol] : c.tolerances) {
    bool known = false;
    for (const auto& s : known_suites()) known = known || name.starts_with(s + ".");
    if (!known) throw ConfigError("tolerance override for unknown check: " + name);
    if (!(tol >= 0.0)) throw ConfigError("tolerance must be non-negative: " + name);
  }
  if (c.n < 2 || c.n % 2 != 0) throw ConfigError("grid.N must be even and at least 2");
  if (!(c.half_width > 0.0) || !std::isfinite(c.half_width)) throw ConfigError("grid.L must be positive");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

WeylContext make_context(const RunConfig& config) {
  auto alg = load_algebra(config.algebra, config.base_dir);
  if (config.grid_dim && *config.grid_dim != alg.dim()) {
    throw ConfigError("grid.dim " + std::to_string(*config.grid_dim) + " does not match algebra dimension " +
                      std::to_string(alg.dim()));
  }
  auto pot = load_potential(alg, config.potential, config.base_dir);
  PhaseSpaceGrid grid;
  try {
    grid = make_grid(alg.dim(), config.n, config.half_width);
  } catch (const BadGridSpec& e) {
    throw ConfigError(e.what());
  }
  return WeylContext(std::move(alg), std::move(pot), grid);
}

SymbolField make_symbol(const SymbolSpec& spec, const PhaseSpaceGrid& grid, const std::filesystem::path&) {
  const int d = grid.dim();
  if (spec.type == "file") {
    Dump dump = read_dump(spec.path);
    if (dump.kind != "symbol") throw ConfigError("symbol file holds a " + dump.kind + " dump");
    if (!(dump.grid == grid)) throw ConfigError("symbol file grid does not match the config grid");
    return SymbolField{grid, std::move(dump.values)};
  }
  if (spec.type == "zero") return SymbolField{grid, ComplexArray(grid.symbol_size(), 0.0)};
  if (!spec.center.empty() && static_cast<int>(spec.center.size()) != d) {
    throw ConfigError("symbol.center has the wrong dimension");
  }
  if (!spec.momentum.empty() && static_cast<int>(spec.momentum.size()) != d) {
    throw ConfigError("symbol.momentum has the wrong dimension");
  }
  const double sx = spec.sx > 0.0 ? spec.sx : default_sx(grid);
  const double sxi = spec.sxi > 0.0 ? spec.sxi : default_sxi(grid);
  LieVector x0 = LieVector::Zero(d), k0 = LieVector::Zero(d);
  for (int i = 0; i < static_cast<int>(spec.center.size()); ++i) x0[i] = spec.center[i];
  for (int i = 0; i < static_cast<int>(spec.momentum.size()); ++i) k0[i] = spec.momentum[i];
  const bool poly = spec.type == "poly-gaussian";
  return sample_symbol(grid, [&](const LieVector& x, const LieCovector& xi) {
    const LieVector u = (x - x0) / sx;
    const LieVector v = (xi.coords() - k0) / sxi;
    const double g = std::exp(-0.5 * (u.squaredNorm() + v.squaredNorm()));
    if (!poly) return Complex(g, 0.0);
    return Complex(1.0 + u[d - 1], u[0] * v[0]) * g;
  });
}

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suite_table()) n.push_back(name);
    return n;
  }();
  return names;
}

Report run_suites(const RunConfig& config, const std::vector<std::string>& suites) {
  std::vector<SuiteFn> fns;
  for (const auto& name : suites) {
    SuiteFn fn = nullptr;
    for (const auto& [n, f] : suite_table()) {
      if (n == name) fn = f;
    }
    if (!fn) throw ConfigError("unknown suite: " + name);
    fns.push_back(fn);
  }
  Report report;
  Suite s(config, report);
  for (SuiteFn fn : fns) fn(config, s);
  return report;
}

}  // namespace magweyl
