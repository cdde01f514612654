#include "magweyl/weyl.hpp"

#include "magweyl/errors.hpp"
#include "magweyl/parallel.hpp"
#include "magweyl/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace magweyl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<LieVector> grid_points(const PhaseSpaceGrid& g) {
  std::vector<LieVector> pts;
  pts.reserve(g.config_size());
  for (std::size_t i = 0; i < g.config_size(); ++i) pts.push_back(g.config_point(i));
  return pts;
}

void check_kernel(const IntegralKernel& k) {
  if (k.values.size() != k.grid.symbol_size()) throw ShapeError("kernel size does not match grid");
}

// Doubles the resolution of every axis a of a rank-2d array with mask[a].
ComplexArray upsample_axes(ComplexArray values, const PhaseSpaceGrid& g, const std::vector<bool>& mask) {
  const int n = g.points();
  std::vector<int> shape(mask.size(), n);
  const Eigen::MatrixXcd up = half_step_upsampler(n);
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (!mask[a]) continue;
    values = apply_axis_matrix(values, shape, static_cast<int>(a), up);
    shape[a] = 2 * n;
  }
  return values;
}

// Axis pair (ya, za) of a row-major cube of side n holds samples at grid
// (Y_a, Z_a); rewrites it in place of (X_a, T_a) with Y = X + T/2, Z = X - T/2.
// Even T offsets read the grid directly. Odd ones sit between lattice points
// along the diagonal and are shifted by half a step in X.
ComplexArray checkerboard_to_grid(const ComplexArray& in, int rank, int n, int ya, int za) {
  std::vector<std::size_t> stride(rank);
  std::size_t s = 1;
  for (int a = rank - 1; a >= 0; --a) {
    stride[a] = s;
    s *= n;
  }
  std::vector<double> half(static_cast<std::size_t>(n) * n);
  for (int kx = 0; kx < n; ++kx) {
    for (int j = 0; j < n; ++j) half[static_cast<std::size_t>(kx) * n + j] = trig_weight(n, kx - j - 0.5);
  }
  ComplexArray out(in.size(), Complex(0.0));
  const std::size_t sy = stride[ya], sz = stride[za];
  for (std::size_t base = 0; base < in.size(); ++base) {
    if ((base / sy) % n != 0 || (base / sz) % n != 0) continue;
    for (int kx = 0; kx < n; ++kx) {
      for (int kt = 0; kt < n; ++kt) {
        const int t = kt - n / 2;
        Complex v = 0.0;
        if (t % 2 == 0) {
          const int iy = kx + t / 2, iz = kx - t / 2;
          if (iy >= 0 && iy < n && iz >= 0 && iz < n) v = in[base + iy * sy + iz * sz];
        } else {
          const double* w = half.data() + static_cast<std::size_t>(kx) * n;
          for (int j = 0; j < n; ++j) {
            // X index j + 1/2
            const int iy = j + (t + 1) / 2;
            const int iz = j + (1 - t) / 2;
            if (iy < 0 || iy >= n || iz < 0 || iz >= n) continue;
            v += w[j] * in[base + iy * sy + iz * sz];
          }
        }
        out[base + kx * sy + kt * sz] = v;
      }
    }
  }
  return out;
}

// Two-step inverse of Sigma on the grid. Central coordinates are resampled
// first, for every pair of linear grid coordinates; the remaining linear axes
// are then a checkerboard in (X, T).
ComplexArray lattice_inverse(const WeylContext& ctx, const ComplexArray& smooth) {
  const PhaseSpaceGrid& g = ctx.grid();
  const int d = g.dim();
  const int n = g.points();
  const int rank = 2 * d;
  std::vector<int> lin, cen;
  for (int a = 0; a < d; ++a) (ctx.linear_axes()[a] ? lin : cen).push_back(a);
  std::vector<std::size_t> stride(rank);
  std::size_t total = 1;
  for (int a = rank - 1; a >= 0; --a) {
    stride[a] = total;
    total *= n;
  }
  ComplexArray work = smooth;
  if (!cen.empty()) {
    const int c = static_cast<int>(cen.size());
    std::size_t sub = 1;
    for (int i = 0; i < 2 * c; ++i) sub *= n;
    // offsets of the central sub-cube, Y block then Z block
    std::vector<std::size_t> offset(sub, 0);
    for (std::size_t q = 0; q < sub; ++q) {
      std::size_t r = q;
      for (int i = 2 * c - 1; i >= 0; --i) {
        const int axis = i < c ? cen[i] : d + cen[i - c];
        offset[q] += (r % n) * stride[axis];
        r /= n;
      }
    }
    std::vector<std::size_t> bases;
    for (std::size_t b = 0; b < total; ++b) {
      bool zero = true;
      for (int a : cen) zero = zero && (b / stride[a]) % n == 0 && (b / stride[d + a]) % n == 0;
      if (zero) bases.push_back(b);
    }
    const NilpotentLieAlgebra& alg = ctx.algebra();
    ComplexArray out(total, Complex(0.0));
    parallel_for(bases.size(), [&](std::size_t begin, std::size_t end) {
      ComplexArray plane(sub);
      const GridSampler sampler(&plane, std::vector<bool>(2 * c, false), g);
      std::vector<double> scratch(sampler.scratch_size());
      std::array<double, 2 * kMaxDim> pos;
      for (std::size_t bi = begin; bi < end; ++bi) {
        const std::size_t base = bases[bi];
        LieVector y = LieVector::Zero(d), z = LieVector::Zero(d);
        for (int a : lin) {
          y[a] = g.x(static_cast<int>((base / stride[a]) % n));
          z[a] = g.x(static_cast<int>((base / stride[d + a]) % n));
        }
        const LieVector shift = 0.5 * alg.bracket(y, z);
        for (std::size_t q = 0; q < sub; ++q) plane[q] = work[base + offset[q]];
        for (std::size_t q = 0; q < sub; ++q) {
          // q enumerates the targets (X_c, T_c) in the same layout
          std::size_t r = q;
          std::array<int, 2 * kMaxDim> idx;
          for (int i = 2 * c - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(r % n);
            r /= n;
          }
          for (int i = 0; i < c; ++i) {
            const double x = g.x(idx[i]);
            const double t = g.x(idx[c + i]) + shift[cen[i]];
            pos[i] = x + 0.5 * t;
            pos[c + i] = x - 0.5 * t;
          }
          out[base + offset[q]] = sampler(pos.data(), scratch.data());
        }
      }
    });
    work = std::move(out);
  }
  for (int a : lin) work = checkerboard_to_grid(work, rank, n, a, d + a);
  return work;
}

}  // namespace

WeylContext::WeylContext(NilpotentLieAlgebra algebra, MagneticPotential potential, PhaseSpaceGrid grid,
                         WeylOptions options)
    : algebra_(std::move(algebra)), potential_(std::move(potential)), grid_(grid), options_(options) {
  const int d = algebra_.dim();
  if (potential_.dim() != d || grid_.dim() != d) throw ShapeError("context: dimensions disagree");
  if (potential_.algebra().structure_constants() != algebra_.structure_constants()) {
    throw ShapeError("context: potential defined on another algebra");
  }
  linear_axes_.assign(d, true);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        if (algebra_.structure_constant(i, j, k) != 0.0) linear_axes_[k] = false;
      }
    }
  }
  lattice_path_ = fast();
  for (int k = 0; k < d; ++k) {
    if (linear_axes_[k]) continue;
    for (int j = 0; j < d; ++j) {
      if (algebra_.bracket(algebra_.basis_vector(k), algebra_.basis_vector(j)).squaredNorm() != 0.0) {
        lattice_path_ = false;
      }
    }
  }
}

WeylContext WeylContext::with_potential(MagneticPotential potential) const {
  return WeylContext(algebra_, std::move(potential), grid_, options_);
}

bool WeylContext::fast() const { return algebra_.nilpotency_index() == 0 || (options_.use_twostep_fastpath && algebra_.nilpotency_index() == 1); }

LieVector WeylContext::midpoint(const LieVector& y, const LieVector& z) const {
  if (fast()) return 0.5 * (y + z);
  const LieVector w = algebra_.bch(z, -y);
  const QuadratureRule& rule = gauss_legendre_unit(nodes_for_degree(algebra_.nilpotency_index() + 1));
  LieVector m = algebra_.zero();
  for (int q = 0; q < rule.size(); ++q) m += rule.weights[q] * algebra_.bch(rule.nodes[q] * w, y);
  return m;
}

LieVector WeylContext::difference(const LieVector& y, const LieVector& z) const {
  switch (algebra_.nilpotency_index()) {
    case 0:
      return y - z;
    case 1:
      return y - z - 0.5 * algebra_.bracket(y, z);
    default:
      return algebra_.bch(y, -z);
  }
}

std::pair<LieVector, LieVector> WeylContext::sigma_inverse(const LieVector& x, const LieVector& t) const {
  if (algebra_.is_abelian()) return {x + 0.5 * t, x - 0.5 * t};
  if (fast()) {
    const LieVector c = 0.25 * algebra_.bracket(t, x);
    return {x + 0.5 * t + c, x - 0.5 * t - c};
  }
  const LieVector y = -algebra_.psi_inverse(t, -x);
  return {y, algebra_.bch(-t, y)};
}

double l2_norm(const IntegralKernel& k) {
  check_kernel(k);
  double s = 0.0;
  for (const auto& v : k.values) s += std::norm(v);
  return std::sqrt(s) * std::pow(k.grid.spacing(), k.grid.dim());
}

IntegralKernel adjoint(const IntegralKernel& k) {
  check_kernel(k);
  const std::size_t m = k.grid.config_size();
  IntegralKernel out{k.grid, ComplexArray(k.values.size())};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out.values[j * m + i] = std::conj(k.values[i * m + j]);
  }
  return out;
}

double hermiticity_defect(const IntegralKernel& k) {
  const IntegralKernel ks = adjoint(k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    num = std::max(num, std::abs(k.values[i] - ks.values[i]));
    den = std::max(den, std::abs(k.values[i]));
  }
  return den == 0.0 ? 0.0 : num / den;
}

ConfigField pi_action(const WeylContext& ctx, const LieVector& x, const LieCovector& xi, const ConfigField& f) {
  const PhaseSpaceGrid& g = ctx.grid();
  if (!(f.grid == g) || f.values.size() != g.config_size()) throw ShapeError("pi_action: field not on context grid");
  if (f.domain != Domain::position) throw ShapeError("pi_action needs a position field");
  const NilpotentLieAlgebra& alg = ctx.algebra();
  const MagneticPotential& pot = ctx.potential();
  const GridSampler sampler(&f.values, std::vector<bool>(g.dim(), false), g, GridSampler::Outside::periodic);
  ConfigField out{g, ComplexArray(g.config_size()), Domain::position};
  const LieVector minus_x = -x;
  parallel_for(g.config_size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(sampler.scratch_size());
    for (std::size_t i = begin; i < end; ++i) {
      const LieVector y = g.config_point(i);
      const LieVector shifted = alg.bch(minus_x, y);
      const Complex v = sampler(shifted.data(), scratch.data());
      out.values[i] = v == Complex(0.0) ? v : std::polar(1.0, pot.pi_phase(x, xi, y)) * v;
    }
  });
  return out;
}

IntegralKernel kernel_from_symbol(const WeylContext& ctx, const SymbolField& a) {
  const PhaseSpaceGrid& g = ctx.grid();
  if (!(a.grid == g) || a.values.size() != g.symbol_size()) throw ShapeError("kernel_from_symbol: symbol not on context grid");
  const int d = g.dim();
  std::vector<bool> fine(2 * d, false);
  for (int i = 0; i < d; ++i) fine[i] = ctx.linear_axes()[i];
  const ComplexArray b = upsample_axes(inverse_fourier_momentum(a).values, g, fine);
  const GridSampler sampler(&b, fine, g);

  const std::vector<LieVector> pts = grid_points(g);
  const std::size_t m = pts.size();
  const double scale = std::pow(kTwoPi, -0.5 * d);
  const MagneticPotential& pot = ctx.potential();
  IntegralKernel out{g, ComplexArray(g.symbol_size())};
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(sampler.scratch_size());
    std::array<double, 2 * kMaxDim> pos;
    for (std::size_t i = begin; i < end; ++i) {
      const LieVector& y = pts[i];
      for (std::size_t j = 0; j < m; ++j) {
        const LieVector& z = pts[j];
        const LieVector mid = ctx.midpoint(y, z);
        const LieVector t = ctx.difference(y, z);
        for (int c = 0; c < d; ++c) {
          pos[c] = mid[c];
          pos[d + c] = t[c];
        }
        Complex v = sampler(pos.data(), scratch.data());
        if (v != Complex(0.0) && !pot.is_zero()) v *= pot.alpha(y, z);
        out.values[i * m + j] = scale * v;
      }
    }
  });
  return out;
}

SymbolField symbol_from_kernel(const WeylContext& ctx, const IntegralKernel& k) {
  const PhaseSpaceGrid& g = ctx.grid();
  if (!(k.grid == g)) throw ShapeError("symbol_from_kernel: kernel not on context grid");
  check_kernel(k);
  const int d = g.dim();
  const std::vector<LieVector> pts = grid_points(g);
  const std::size_t m = pts.size();
  const MagneticPotential& pot = ctx.potential();

  // alpha^{-1} K is smooth and gauge independent, so interpolate that
  ComplexArray smooth = k.values;
  if (!pot.is_zero()) {
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          Complex& v = smooth[i * m + j];
          if (v != Complex(0.0)) v *= std::conj(pot.alpha(pts[i], pts[j]));
        }
      }
    });
  }
  const double scale = std::pow(kTwoPi, 0.5 * d);
  SymbolField b{g, ComplexArray()};
  if (ctx.lattice_path()) {
    b.values = lattice_inverse(ctx, smooth);
    for (auto& v : b.values) v *= scale;
    return fourier_momentum(b);
  }

  std::vector<bool> fine(2 * d, false);
  for (int i = 0; i < d; ++i) fine[i] = fine[d + i] = ctx.linear_axes()[i];
  smooth = upsample_axes(std::move(smooth), g, fine);
  const GridSampler sampler(&smooth, fine, g);
  b.values.resize(g.symbol_size());
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(sampler.scratch_size());
    std::array<double, 2 * kMaxDim> pos;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto [y, z] = ctx.sigma_inverse(pts[i], pts[j]);
        for (int c = 0; c < d; ++c) {
          pos[c] = y[c];
          pos[d + c] = z[c];
        }
        b.values[i * m + j] = scale * sampler(pos.data(), scratch.data());
      }
    }
  });
  return fourier_momentum(b);
}

ConfigField apply_operator(const IntegralKernel& k, const ConfigField& f) {
  check_kernel(k);
  if (!(k.grid == f.grid) || f.values.size() != f.grid.config_size() || f.domain != Domain::position) {
    throw ShapeError("apply_operator: shape mismatch");
  }
  const auto m = static_cast<Eigen::Index>(k.grid.config_size());
  Eigen::Map<const RowMatrix> km(k.values.data(), m, m);
  Eigen::Map<const Eigen::VectorXcd> fv(f.values.data(), m);
  ConfigField out{f.grid, ComplexArray(f.values.size()), Domain::position};
  Eigen::Map<Eigen::VectorXcd> ov(out.values.data(), m);
  ov.noalias() = km * fv;
  ov *= std::pow(k.grid.spacing(), k.grid.dim());
  return out;
}

IntegralKernel compose_kernels(const IntegralKernel& k1, const IntegralKernel& k2) {
  check_kernel(k1);
  check_kernel(k2);
  if (!(k1.grid == k2.grid)) throw ShapeError("compose_kernels: grids differ");
  const auto m = static_cast<Eigen::Index>(k1.grid.config_size());
  Eigen::Map<const RowMatrix> a(k1.values.data(), m, m), b(k2.values.data(), m, m);
  IntegralKernel out{k1.grid, ComplexArray(k1.values.size())};
  Eigen::Map<RowMatrix> c(out.values.data(), m, m);
  c.noalias() = a * b;
  c *= std::pow(k1.grid.spacing(), k1.grid.dim());
  return out;
}

SymbolField moyal_product(const WeylContext& ctx, const SymbolField& a, const SymbolField& b) {
  return symbol_from_kernel(ctx, compose_kernels(kernel_from_symbol(ctx, a), kernel_from_symbol(ctx, b)));
}

Complex moyal_2step_point(const WeylContext& ctx, const SymbolField& a, const SymbolField& b, const LieVector& x,
                          const LieCovector& xi) {
  const NilpotentLieAlgebra& alg = ctx.algebra();
  if (alg.nilpotency_index() > 1) throw WrongClass("moyal_2step_point needs an algebra of index <= 1");
  const PhaseSpaceGrid& g = ctx.grid();
  if (!(a.grid == g) || !(b.grid == g) || a.values.size() != g.symbol_size() || b.values.size() != g.symbol_size()) {
    throw ShapeError("moyal_2step_point: symbols not on context grid");
  }
  const int d = g.dim();
  const ComplexArray ba = inverse_fourier_momentum(a).values;
  const ComplexArray bb = inverse_fourier_momentum(b).values;
  const GridSampler sa(&ba, std::vector<bool>(2 * d, false), g);
  const GridSampler sb(&bb, std::vector<bool>(2 * d, false), g);
  const MagneticPotential& pot = ctx.potential();

  const std::vector<LieVector> pts = grid_points(g);
  const std::size_t m = pts.size();
  // one partial sum per z, added in index order afterwards
  ComplexArray rows(m);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(sa.scratch_size());
    std::array<double, 2 * kMaxDim> pos;
    for (std::size_t i = begin; i < end; ++i) {
      const LieVector& z = pts[i];
      Complex acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const LieVector& t = pts[j];
        const LieVector xt = x - t;
        const LieVector u = 2.0 * xt + alg.bracket(z, xt);
        for (int c = 0; c < d; ++c) {
          pos[c] = z[c];
          pos[d + c] = u[c];
        }
        const Complex va = sa(pos.data(), scratch.data());
        if (va == Complex(0.0)) continue;
        const LieVector zx = z - x;
        const LieVector w = 2.0 * zx + alg.bracket(t, zx);
        for (int c = 0; c < d; ++c) {
          pos[c] = t[c];
          pos[d + c] = w[c];
        }
        const Complex vb = sb(pos.data(), scratch.data());
        if (vb == Complex(0.0)) continue;
        const LieVector diff = z - t;
        const LieVector tt = 2.0 * diff + alg.bracket(x, diff);
        Complex term = va * vb * std::polar(1.0, -xi.pair(tt));
        if (!pot.is_zero()) term *= pot.triangle_phase(diff + x, x - diff, z + t - x);
        acc += term;
      }
      rows[i] = acc;
    }
  });
  Complex total = 0.0;
  for (const auto& r : rows) total += r;
  const double h = g.spacing();
  return total * std::pow(4.0 / kTwoPi * h * h, d);
}

DerivativeReport magnetic_derivative_check(const WeylContext& ctx, const LieVector& p0, const ConfigField& f,
                                           double tau) {
  const PhaseSpaceGrid& g = ctx.grid();
  const int d = g.dim();
  const LieCovector zero = LieCovector::zero(d);
  const ConfigField gp = pi_action(ctx, tau * p0, zero, f);
  const ConfigField gm = pi_action(ctx, -tau * p0, zero, f);
  const ConfigField gp2 = pi_action(ctx, 2.0 * tau * p0, zero, f);
  const ConfigField gm2 = pi_action(ctx, -2.0 * tau * p0, zero, f);

  std::vector<ConfigField> grad;
  for (int a = 0; a < d; ++a) grad.push_back(spectral_derivative(f, a));
  const NilpotentLieAlgebra& alg = ctx.algebra();
  const MagneticPotential& pot = ctx.potential();

  double e1 = 0.0, e2 = 0.0, er = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < g.config_size(); ++i) {
    const LieVector y = g.config_point(i);
    const LieVector flow = -alg.right_translation_differential(y, p0);
    Complex expected = Complex(0.0, pot.pairing(y, p0)) * f.values[i];
    for (int a = 0; a < d; ++a) expected += flow[a] * grad[a].values[i];
    const Complex d1 = (gp.values[i] - gm.values[i]) / (2.0 * tau);
    const Complex d2 = (gp2.values[i] - gm2.values[i]) / (4.0 * tau);
    const Complex rich = (4.0 * d1 - d2) / 3.0;
    e1 += std::norm(d1 - expected);
    e2 += std::norm(d2 - expected);
    er += std::norm(rich - expected);
    ref += std::norm(expected);
  }
  DerivativeReport r;
  r.tau = tau;
  r.reference_norm = std::sqrt(ref * std::pow(g.spacing(), d));
  const double denom = ref > 0.0 ? ref : 1.0;
  r.error_tau = std::sqrt(e1 / denom);
  r.error_2tau = std::sqrt(e2 / denom);
  r.error_richardson = std::sqrt(er / denom);
  r.ratio = r.error_tau > 0.0 ? r.error_2tau / r.error_tau : 0.0;
  return r;
}

GaugeReport gauge_covariance_check(const WeylContext& ctx, const MagneticPotential& a1, const SymbolField& a) {
  const Polynomial psi = gauge_function(a1, ctx.potential());
  const IntegralKernel k = kernel_from_symbol(ctx, a);
  const IntegralKernel k1 = kernel_from_symbol(ctx.with_potential(a1), a);
  const PhaseSpaceGrid& g = ctx.grid();
  const std::size_t m = g.config_size();
  std::vector<Complex> u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = std::polar(1.0, psi(g.config_point(i)));
  double peak = 0.0;
  for (const auto& v : k.values) peak = std::max(peak, std::abs(v));
  GaugeReport r;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Complex v = k.values[i * m + j];
      const Complex v1 = k1.values[i * m + j];
      const double mag = std::max(std::abs(v), std::abs(v1));
      if (mag < 1e-12 * peak || mag == 0.0) continue;
      const Complex want = u[i] * v * std::conj(u[j]);
      r.max_relative_error = std::max(r.max_relative_error, std::abs(v1 - want) / mag);
      ++r.entries_compared;
    }
  }
  return r;
}

}  // namespace magweyl
