// One line per acceptance criterion; exit status 0 iff all pass.

#include "magweyl/errors.hpp"
#include "magweyl/weyl.hpp"
#include "../test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace magweyl;
using magweyl::testing::random_vector;
using magweyl::testing::vec;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_l2(const ComplexArray& got, const ComplexArray& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return std::sqrt(num / den);
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(" exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d %s: %s; runtime %.1fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              dt, budget_s);
  std::fflush(stdout);
}

WeylContext context(const char* algebra, const char* potential, int n, double l) {
  const auto alg = algebra_preset(algebra);
  return WeylContext(alg, potential_preset(alg, potential), make_grid(alg.dim(), n, l));
}

SymbolField gaussian(const PhaseSpaceGrid& g, double sx, double sxi, double poly, double shift = 0.0) {
  return sample_symbol(g, [=](const LieVector& x, const LieCovector& xi) {
    LieVector s = x;
    s[0] -= shift;
    const LieVector u = s / sx;
    const LieVector v = xi.coords() / sxi;
    return Complex(1.0 + poly * u[g.dim() - 1], poly * u[0] * v[0]) *
           std::exp(-0.5 * (u.squaredNorm() + v.squaredNorm()));
  });
}

std::size_t centered(const PhaseSpaceGrid& g, std::initializer_list<int> offsets) {
  std::size_t f = 0;
  for (int o : offsets) f = f * g.points() + static_cast<std::size_t>(g.points() / 2 + o);
  return f;
}

// K1(Y,Z) vs e^{i psi(Y)} K(Y,Z) e^{-i psi(Z)} over entries above 1e-12 of the peak.
double conjugation_error(const IntegralKernel& k, const IntegralKernel& k1, const std::function<double(const LieVector&)>& psi) {
  const auto& g = k.grid;
  const std::size_t m = g.config_size();
  std::vector<Complex> u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = std::polar(1.0, psi(g.config_point(i)));
  double peak = 0.0;
  for (const auto& v : k.values) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Complex v = k.values[i * m + j], v1 = k1.values[i * m + j];
      const double mag = std::max(std::abs(v), std::abs(v1));
      if (mag < 1e-12 * peak) continue;
      worst = std::max(worst, std::abs(v1 - u[i] * v * std::conj(u[j])) / mag);
    }
  }
  return worst;
}

}  // namespace

int main() {
  const char* algebras[] = {"abelian:2", "heisenberg:3", "filiform3:4"};

  run(1, "BCH group axioms", 1.0, [&](Outcome& o) {
    std::mt19937_64 rng(101);
    for (const char* name : algebras) {
      const auto alg = algebra_preset(name);
      double assoc = 0.0, inv = 0.0;
      for (int t = 0; t < 100; ++t) {
        const LieVector x = random_vector(rng, alg.dim()), y = random_vector(rng, alg.dim()),
                        z = random_vector(rng, alg.dim());
        assoc = std::max(assoc, testing::max_abs(alg.bch(alg.bch(x, y), z) - alg.bch(x, alg.bch(y, z))));
        inv = std::max(inv, testing::max_abs(alg.bch(x, -x)));
        inv = std::max(inv, testing::max_abs(alg.bch(-x, x)));
      }
      o.check(assoc <= 1e-10 && inv <= 1e-10, std::string(name) + fmt(" assoc %.1e inv %.1e", assoc, inv));
    }
  });

  run(2, "Psi diffeomorphism", 5.0, [&](Outcome& o) {
    std::mt19937_64 rng(202);
    for (const char* name : algebras) {
      const auto alg = algebra_preset(name);
      const int d = alg.dim();
      double round = 0.0, det = 0.0;
      for (int t = 0; t < 100; ++t) {
        const LieVector v = random_vector(rng, d), y = random_vector(rng, d);
        round = std::max(round, testing::max_abs(alg.psi_inverse(v, alg.psi_map(v, y)) - y));
      }
      const double step = 1e-5;
      for (int t = 0; t < 20; ++t) {
        const LieVector v = random_vector(rng, d), y = random_vector(rng, d);
        Eigen::MatrixXd jac(d, d);
        for (int k = 0; k < d; ++k) {
          LieVector yp = y, ym = y;
          yp[k] += step;
          ym[k] -= step;
          jac.col(k) = (alg.psi_map(v, yp) - alg.psi_map(v, ym)) / (2 * step);
        }
        det = std::max(det, std::abs(jac.determinant() - 1.0));
      }
      o.check(round <= 1e-10 && det <= 1e-6, std::string(name) + fmt(" round trip %.1e |det-1| %.1e", round, det));
    }
  });

  run(3, "Symplectic Fourier involution", 10.0, [&](Outcome& o) {
    std::mt19937_64 rng(303);
    for (auto [d, n, l] : {std::tuple{1, 64, 8.0}, {3, 8, 4.0}}) {
      const auto g = make_grid(d, n, l);
      double worst = 0.0;
      for (int t = 0; t < 5; ++t) {
        const LieVector x0 = random_vector(rng, d, l / 4), k0 = random_vector(rng, d, 1.0);
        const Complex amp(std::cos(t), std::sin(t));
        const auto a = sample_symbol(g, [&](const LieVector& x, const LieCovector& xi) {
          const double e = (x - x0).squaredNorm() / (0.3 * l) + (xi.coords() - k0).squaredNorm() / 2.0;
          return amp * std::exp(-e) * Complex(1.0 + 0.2 * x[0], 0.1 * xi[d - 1]);
        });
        worst = std::max(worst, rel_l2(symplectic_fourier(symplectic_fourier(a)).values, a.values));
      }
      o.check(worst <= 1e-10, fmt("d=%g N=", d) + std::to_string(n) + fmt(" error %.1e", worst));
    }
  });

  run(4, "Abelian baseline kernel", 5.0, [&](Outcome& o) {
    const auto ctx = context("abelian:1", "zero", 64, 8.0);
    const auto& g = ctx.grid();
    const auto k = kernel_from_symbol(ctx, gaussian(g, 1.0, 1.0, 0.0));
    ComplexArray want(k.values.size());
    for (int i = 0; i < g.points(); ++i) {
      for (int j = 0; j < g.points(); ++j) {
        const double y = g.x(i), z = g.x(j);
        // (2 pi)^{-1} \int e^{i (y - z) xi} e^{-((y+z)/2)^2/2 - xi^2/2} dxi
        want[static_cast<std::size_t>(i) * g.points() + j] =
            std::exp(-(y + z) * (y + z) / 8 - (y - z) * (y - z) / 2) / std::sqrt(2 * kPi);
      }
    }
    const double err = rel_l2(k.values, want);
    o.check(err <= 1e-6, fmt("relative L2 error %.2e (tol 1e-6)", err));
  });

  run(5, "Kernel map unitarity", 300.0, [&](Outcome& o) {
    struct Case {
      const char* alg;
      const char* pot;
      int n;
      double l, sx, sxi, tol;
    };
    for (const Case& c : {Case{"abelian:1", "zero", 64, 8.0, 1.0, 1.0, 1e-6},
                          Case{"heisenberg:3", "heisenberg-linear:0.3", 12, 6.0, 1.4, 0.72, 1e-3}}) {
      const auto ctx = context(c.alg, c.pot, c.n, c.l);
      for (double poly : {0.0, 1.0}) {
        const auto a = gaussian(ctx.grid(), c.sx, c.sxi, poly);
        const double ratio = l2_norm(kernel_from_symbol(ctx, a)) / l2_norm(a);
        o.check(std::abs(ratio - 1.0) <= c.tol, std::string(c.alg) + (poly ? " poly-gaussian" : " gaussian") +
                                                    fmt(" ratio-1 %.1e (tol %.0e)", ratio - 1.0, c.tol));
      }
    }
  });

  run(6, "Gauge covariance", 120.0, [&](Outcome& o) {
    {
      const double b = 0.5;
      const auto landau = context("abelian:2", "landau:0.5", 16, 6.0);
      const auto sym = landau.with_potential(potential_preset(landau.algebra(), "symmetric:0.5"));
      const auto a = gaussian(landau.grid(), 1.2, 1.1, 1.0, 0.4);
      // A_symmetric - A_landau = d(-b x1 x2 / 2)
      const double err = conjugation_error(kernel_from_symbol(landau, a), kernel_from_symbol(sym, a),
                                           [b](const LieVector& y) { return -0.5 * b * y[0] * y[1]; });
      o.check(err <= 1e-9, fmt("landau vs symmetric %.1e", err));
    }
    {
      const auto heis = context("heisenberg:3", "heisenberg-linear:0.3", 12, 6.0);
      std::mt19937_64 rng(606);
      std::vector<Polynomial::Term> terms;
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
          for (int k = j; k < 3; ++k) {
            Polynomial::Term t;
            ++t.exponents[i];
            ++t.exponents[j];
            ++t.exponents[k];
            t.coeff = std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
            terms.push_back(t);
          }
        }
      }
      const Polynomial psi(3, terms);
      const auto shifted = heis.with_potential(heis.potential().plus_gradient(psi));
      const auto a = gaussian(heis.grid(), 1.4, 0.72, 1.0, 0.5);
      // cubic psi evaluated independently of the polynomial class
      auto psi_eval = [&terms](const LieVector& y) {
        double s = 0.0;
        for (const auto& t : terms) s += t.coeff * std::pow(y[0], t.exponents[0]) * std::pow(y[1], t.exponents[1]) *
                                        std::pow(y[2], t.exponents[2]);
        return s;
      };
      const double err = conjugation_error(kernel_from_symbol(heis, a), kernel_from_symbol(shifted, a), psi_eval);
      o.check(err <= 1e-9, fmt("heisenberg A vs A+d(cubic) %.1e", err));
    }
  });

  run(7, "Moyal cross-check", 600.0, [&](Outcome& o) {
    {
      const auto ctx = context("heisenberg:3", "heisenberg-linear:0.3", 12, 6.0);
      const auto& g = ctx.grid();
      const auto a = gaussian(g, 1.7, 0.7, 0.0, g.spacing());
      const auto b = gaussian(g, 1.7, 0.7, 1.0);
      const auto c = moyal_product(ctx, a, b);
      const std::size_t m = g.config_size();
      double worst = 0.0;
      for (auto [p, q] : {std::pair{0, 0}, {1, 0}, {0, 1}, {-1, 1}, {1, -1}}) {
        const std::size_t ix = centered(g, {p, 0, 0}), ik = centered(g, {0, 0, q});
        const Complex kernel = c.values[ix * m + ik];
        const Complex direct = moyal_2step_point(ctx, a, b, g.config_point(ix), g.dual_point(ik));
        worst = std::max(worst, std::abs(direct - kernel) / std::abs(kernel));
      }
      o.check(worst <= 5e-2, fmt("heisenberg two-step vs kernel route max %.2e (tol 5e-2)", worst));
    }
    {
      const auto ctx = context("abelian:1", "zero", 64, 8.0);
      const auto& g = ctx.grid();
      const auto a = gaussian(g, 1.0, 1.0, 0.0);
      double worst = 0.0;
      for (auto [p, q] : {std::pair{0, 0}, {3, 0}, {0, -4}, {5, 2}, {-2, 6}}) {
        const auto x = g.config_point(centered(g, {p}));
        const auto xi = g.dual_point(centered(g, {q}));
        // e^{-r^2/2} # e^{-r^2/2} = 0.8 e^{-0.8 r^2}
        const double want = 0.8 * std::exp(-0.8 * (x.squaredNorm() + xi.coords().squaredNorm()));
        worst = std::max(worst, std::abs(moyal_2step_point(ctx, a, a, x, xi) - want) / want);
      }
      o.check(worst <= 2e-2, fmt("abelian two-step vs Gaussian oracle max %.2e (tol 2e-2)", worst));
    }
  });

  run(8, "Magnetic vector field", 60.0, [&](Outcome& o) {
    const double bfield = 0.3;
    const auto ctx = context("heisenberg:3", "heisenberg-linear:0.3", 12, 6.0);
    const auto& g = ctx.grid();
    const double k = g.dual_spacing();
    // band-limited and periodic on the box, so the grid interpolant is f itself
    auto f1 = [k](double y) { return 2.0 + std::cos(k * y) + 0.5 * std::sin(2 * k * y); };
    auto df1 = [k](double y) { return -k * std::sin(k * y) + k * std::cos(2 * k * y); };
    const auto f = sample_config(g, [&](const LieVector& y) { return Complex(f1(y[0]) * f1(y[1]) * f1(y[2]), 0.0); });
    const LieVector p0 = vec({0.6, -0.4, 0.5});
    const LieCovector zero = LieCovector::zero(3);
    const std::size_t m = g.config_size();
    ComplexArray want(m);
    for (std::size_t i = 0; i < m; ++i) {
      const LieVector y = g.config_point(i);
      // d/dt (tP)*Y at 0 = P + [P,Y]/2, [e1,e2] = e3
      LieVector v = p0;
      v[2] += 0.5 * (p0[0] * y[1] - p0[1] * y[0]);
      const double grad[3] = {df1(y[0]) * f1(y[1]) * f1(y[2]), f1(y[0]) * df1(y[1]) * f1(y[2]),
                              f1(y[0]) * f1(y[1]) * df1(y[2])};
      // A_Y = (-b y2/2, b y1/2, 0)
      const double pairing = -0.5 * bfield * y[1] * v[0] + 0.5 * bfield * y[0] * v[1];
      const double fy = f1(y[0]) * f1(y[1]) * f1(y[2]);
      want[i] = Complex(-(grad[0] * v[0] + grad[1] * v[1] + grad[2] * v[2]), pairing * fy);
    }
    auto central = [&](double tau) {
      const auto gp = pi_action(ctx, tau * p0, zero, f);
      const auto gm = pi_action(ctx, -tau * p0, zero, f);
      ComplexArray d(m);
      for (std::size_t i = 0; i < m; ++i) d[i] = (gp.values[i] - gm.values[i]) / (2 * tau);
      return d;
    };
    const auto d1 = central(1e-3), dh = central(5e-4);
    const double e1 = rel_l2(d1, want), eh = rel_l2(dh, want);
    ComplexArray four(m);
    for (std::size_t i = 0; i < m; ++i) four[i] = (4.0 * dh[i] - d1[i]) / 3.0;
    const double e4 = rel_l2(four, want);
    const double ratio = e1 / eh;
    o.check(e1 <= 1e-4, fmt("error at tau=1e-3 %.2e (tol 1e-4)", e1));
    o.check(e4 <= 1e-4, fmt("4-point error %.2e", e4));
    o.check(std::abs(ratio / 4.0 - 1.0) <= 0.2, fmt("ratio on halving tau %.3f (4 +- 20%%)", ratio));
  });

  run(9, "Gauge invariance of the product", 600.0, [&](Outcome& o) {
    {
      const auto landau = context("abelian:2", "landau:0.5", 16, 6.0);
      const auto sym = landau.with_potential(potential_preset(landau.algebra(), "symmetric:0.5"));
      const auto a = gaussian(landau.grid(), 1.2, 1.1, 0.0, 0.4);
      const auto b = gaussian(landau.grid(), 1.0, 1.2, 1.0, -0.4);
      const double err = rel_l2(moyal_product(sym, a, b).values, moyal_product(landau, a, b).values);
      o.check(err <= 1e-6, fmt("landau vs symmetric %.1e", err));
    }
    {
      const auto heis = context("heisenberg:3", "heisenberg-linear:0.3", 12, 6.0);
      const auto shifted = heis.with_potential(heis.potential().plus_gradient(random_polynomial(3, 3, 909, 0.1)));
      const auto a = gaussian(heis.grid(), 1.4, 0.72, 0.0, 1.0);
      const auto b = gaussian(heis.grid(), 1.4, 0.72, 1.0);
      const double err = rel_l2(moyal_product(shifted, a, b).values, moyal_product(heis, a, b).values);
      o.check(err <= 1e-6, fmt("heisenberg A vs A+d(cubic) %.1e", err));
    }
  });

  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
