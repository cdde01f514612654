#include "magweyl/errors.hpp"
#include "magweyl/weyl.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace magweyl;
using magweyl::testing::vec;

namespace {

double rel_l2(const ComplexArray& got, const ComplexArray& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return std::sqrt(num / den);
}

// e^{-s(|x|^2 + |xi|^2)}
SymbolField radial(const PhaseSpaceGrid& g, double s) {
  return sample_symbol(g, [s](const LieVector& x, const LieCovector& xi) {
    return Complex(std::exp(-s * (x.squaredNorm() + xi.coords().squaredNorm())), 0.0);
  });
}

SymbolField bump(const PhaseSpaceGrid& g, double sx, double sxi, double shift, double tilt) {
  return sample_symbol(g, [=](const LieVector& x, const LieCovector& xi) {
    LieVector s = x;
    s[0] -= shift;
    return Complex(1.0, tilt * xi[0]) *
           std::exp(-0.5 * s.squaredNorm() / (sx * sx) - 0.5 * xi.coords().squaredNorm() / (sxi * sxi));
  });
}

// Classical oracle on R^d with unit Planck constant:
// e^{-a|z|^2} # e^{-b|z|^2} = (1 + ab)^{-d} e^{-(a+b)/(1+ab) |z|^2}.
Complex gaussian_moyal(double a, double b, int d, const LieVector& x, const LieCovector& xi) {
  const double r2 = x.squaredNorm() + xi.coords().squaredNorm();
  return Complex(std::pow(1.0 + a * b, -d) * std::exp(-(a + b) / (1.0 + a * b) * r2), 0.0);
}

WeylContext context(const char* algebra, const char* potential, int n, double l) {
  const auto alg = algebra_preset(algebra);
  return WeylContext(alg, potential_preset(alg, potential), make_grid(alg.dim(), n, l));
}

std::size_t flat(const PhaseSpaceGrid& g, std::initializer_list<int> offsets) {
  std::size_t f = 0;
  for (int o : offsets) f = f * g.points() + static_cast<std::size_t>(g.points() / 2 + o);
  return f;
}

}  // namespace

TEST_CASE("abelian moyal product of gaussians") {
  const auto ctx = context("abelian:1", "zero", 64, 8.0);
  const auto& g = ctx.grid();
  for (double s : {0.5, 1.0}) {
    const auto a = radial(g, s);
    const auto c = moyal_product(ctx, a, a);
    const auto want = sample_symbol(g, [s](const LieVector& x, const LieCovector& xi) {
      return gaussian_moyal(s, s, 1, x, xi);
    });
    CHECK(rel_l2(c.values, want.values) <= 1e-4);
  }

  const auto a = radial(g, 0.5);
  for (auto [jx, kxi] : {std::pair{0, 0}, {3, 0}, {0, -4}, {5, 2}, {-2, 6}}) {
    const std::size_t ix = flat(g, {jx}), ik = flat(g, {kxi});
    const auto x = g.config_point(ix);
    const auto xi = g.dual_point(ik);
    const Complex want = gaussian_moyal(0.5, 0.5, 1, x, xi);
    const Complex direct = moyal_2step_point(ctx, a, a, x, xi);
    CHECK(std::abs(direct - want) <= 2e-2 * std::abs(want));
  }
}

TEST_CASE("moyal product matches the operator product") {
  const auto ctx = context("abelian:1", "zero", 64, 8.0);
  const auto a = bump(ctx.grid(), 1.1, 0.9, 0.5, 0.3);
  const auto b = bump(ctx.grid(), 0.8, 1.2, -0.4, -0.2);
  const auto ab = compose_kernels(kernel_from_symbol(ctx, a), kernel_from_symbol(ctx, b));
  const auto c = moyal_product(ctx, a, b);
  CHECK(rel_l2(kernel_from_symbol(ctx, c).values, ab.values) <= 1e-6);

  const auto landau = context("abelian:2", "landau:0.4", 28, 7.5);
  const auto la = bump(landau.grid(), 1.2, 1.0, 0.5, 0.3);
  const auto lab = compose_kernels(kernel_from_symbol(landau, la), kernel_from_symbol(landau, la));
  const auto lc = moyal_product(landau, la, la);
  CHECK(rel_l2(kernel_from_symbol(landau, lc).values, lab.values) <= 1e-6);
}

TEST_CASE("two-step integral agrees with the kernel route in a constant field") {
  const auto ctx = context("abelian:2", "landau:0.4", 16, 6.0);
  const auto& g = ctx.grid();
  const auto a = bump(g, 1.2, 1.0, 0.5, 0.3);
  const auto b = bump(g, 1.0, 1.1, -0.5, 0.0);
  const auto c = moyal_product(ctx, a, b);
  const std::size_t m = g.config_size();
  for (auto [p, q] : {std::pair{0, 0}, {1, 0}, {0, 1}, {-1, 2}, {2, -1}}) {
    const std::size_t ix = flat(g, {p, q}), ik = flat(g, {q, 0});
    const Complex kernel = c.values[ix * m + ik];
    const Complex direct = moyal_2step_point(ctx, a, b, g.config_point(ix), g.dual_point(ik));
    CHECK(std::abs(direct - kernel) <= 2e-2 * std::abs(kernel));
  }
}

TEST_CASE("moyal product depends only on the field") {
  const auto landau = context("abelian:2", "landau:0.4", 16, 6.0);
  const auto sym = landau.with_potential(potential_preset(landau.algebra(), "symmetric:0.4"));
  const auto a = bump(landau.grid(), 1.2, 1.0, 0.5, 0.3);
  const auto b = bump(landau.grid(), 1.0, 1.1, -0.5, 0.0);
  CHECK(rel_l2(moyal_product(sym, a, b).values, moyal_product(landau, a, b).values) <= 1e-6);

  const auto heis = context("heisenberg:3", "heisenberg-linear:0.3", 8, 5.0);
  const auto shifted = heis.with_potential(heis.potential().plus_gradient(random_polynomial(3, 3, 7, 0.2)));
  const auto ha = bump(heis.grid(), 1.5, 0.8, 0.3, 0.2);
  const auto hb = bump(heis.grid(), 1.4, 0.9, -0.3, 0.0);
  CHECK(rel_l2(moyal_product(shifted, ha, hb).values, moyal_product(heis, ha, hb).values) <= 1e-6);
}

TEST_CASE("two-step integral needs index at most one") {
  const auto ctx = context("filiform3:4", "zero", 4, 2.0);
  const auto a = radial(ctx.grid(), 0.5);
  CHECK_THROWS_AS(moyal_2step_point(ctx, a, a, ctx.algebra().zero(), LieCovector::zero(4)), WrongClass);
}

TEST_CASE("real symbols give hermitian kernels on abelian algebras") {
  const auto ctx = context("abelian:2", "landau:0.4", 12, 5.0);
  const auto k = kernel_from_symbol(ctx, bump(ctx.grid(), 1.0, 1.0, 0.4, 0.0));
  CHECK(hermiticity_defect(k) <= 1e-12);
  const auto heis = context("heisenberg:3", "heisenberg-linear:0.3", 8, 5.0);
  const auto hk = kernel_from_symbol(heis, bump(heis.grid(), 1.2, 1.0, 0.4, 0.0));
  MESSAGE("heisenberg hermiticity defect " << hermiticity_defect(hk));
}
