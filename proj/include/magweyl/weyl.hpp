#pragma once

#include "magweyl/lie_algebra.hpp"
#include "magweyl/magnetic.hpp"
#include "magweyl/phase_space.hpp"

namespace magweyl {

struct WeylOptions {
  /// On algebras of index <= 1 use the closed forms m(Y,Z) = (Y+Z)/2 and
  /// Y = (T/2)*X, Z = (-T/2)*X instead of quadrature and Psi inversion.
  bool use_twostep_fastpath = true;
};

class WeylContext {
 public:
  /// Throws ShapeError when the potential or grid dimension differs from the algebra.
  WeylContext(NilpotentLieAlgebra algebra, MagneticPotential potential, PhaseSpaceGrid grid,
              WeylOptions options = {});

  const NilpotentLieAlgebra& algebra() const { return algebra_; }
  const MagneticPotential& potential() const { return potential_; }
  const PhaseSpaceGrid& grid() const { return grid_; }
  const WeylOptions& options() const { return options_; }

  /// Same algebra, grid and options with another potential.
  WeylContext with_potential(MagneticPotential potential) const;

  /// \int_0^1 (s(Z*(-Y)))*Y ds.
  LieVector midpoint(const LieVector& y, const LieVector& z) const;
  /// Y*(-Z).
  LieVector difference(const LieVector& y, const LieVector& z) const;
  /// Inverse of (Y,Z) -> (midpoint, difference).
  std::pair<LieVector, LieVector> sigma_inverse(const LieVector& x, const LieVector& t) const;

  /// Coordinates that never receive a bracket contribution.
  const std::vector<bool>& linear_axes() const { return linear_axes_; }

  /// True when symbol_from_kernel can work on the (X, T) lattice: fast path
  /// active and every bracket-valued coordinate central.
  bool lattice_path() const { return lattice_path_; }

 private:
  bool fast() const;
  NilpotentLieAlgebra algebra_;
  MagneticPotential potential_;
  PhaseSpaceGrid grid_;
  WeylOptions options_;
  std::vector<bool> linear_axes_;
  bool lattice_path_ = false;
};

/// Matrix over the g-grid squared, rows Y and columns Z, row-major.
struct IntegralKernel {
  PhaseSpaceGrid grid;
  ComplexArray values;
};

/// sqrt(h^{2d} sum |K|^2).
double l2_norm(const IntegralKernel& k);
IntegralKernel adjoint(const IntegralKernel& k);
/// max |K - K^*| / max |K|.
double hermiticity_defect(const IntegralKernel& k);

/// (pi(X, xi) f)(Y) = e^{i Phi(Y)} f((-X)*Y), with f evaluated off grid by
/// band-limited interpolation.
ConfigField pi_action(const WeylContext& ctx, const LieVector& x, const LieCovector& xi, const ConfigField& f);

/// K_a(Y,Z) = (2 pi)^{-d/2} alpha_A(Y,Z) b(m(Y,Z), Y*(-Z)), b = (1 (x) F^{-1}) a.
/// b vanishes outside the box.
IntegralKernel kernel_from_symbol(const WeylContext& ctx, const SymbolField& a);

/// Inverse of kernel_from_symbol: interpolates alpha^{-1} K at Sigma^{-1} of
/// the grid and transforms the difference block back to momenta.
SymbolField symbol_from_kernel(const WeylContext& ctx, const IntegralKernel& k);

/// (K f)(Y) = h^d sum_Z K(Y,Z) f(Z).
ConfigField apply_operator(const IntegralKernel& k, const ConfigField& f);
/// h^d K1 K2.
IntegralKernel compose_kernels(const IntegralKernel& k1, const IntegralKernel& k2);

/// Kernel route: symbol_from_kernel(compose_kernels(K_a, K_b)).
SymbolField moyal_product(const WeylContext& ctx, const SymbolField& a, const SymbolField& b);

/// Direct evaluation of (a # b)(X, xi) on algebras of index <= 1 as a Riemann
/// sum over the g-grid squared. Throws WrongClass otherwise.
Complex moyal_2step_point(const WeylContext& ctx, const SymbolField& a, const SymbolField& b, const LieVector& x,
                          const LieCovector& xi);

struct DerivativeReport {
  double tau = 0.0;
  /// relative L2 error of the central difference with step tau, and with 2 tau
  double error_tau = 0.0;
  double error_2tau = 0.0;
  /// error_2tau / error_tau, about 4 for a second order difference
  double ratio = 0.0;
  /// relative error of the 4-point Richardson combination
  double error_richardson = 0.0;
  double reference_norm = 0.0;
};

/// Compares d/dt pi(t P0, 0) f at t = 0 with lambda'(P0) f + i <A_Y, (R_Y)'_0 P0> f.
DerivativeReport magnetic_derivative_check(const WeylContext& ctx, const LieVector& p0, const ConfigField& f,
                                           double tau = 1e-3);

struct GaugeReport {
  double max_relative_error = 0.0;
  std::size_t entries_compared = 0;
};

/// Checks K_{A1,a}(Y,Z) = e^{i psi(Y)} K_{A,a}(Y,Z) e^{-i psi(Z)} with d psi = A1 - A,
/// over entries with |K| >= 1e-12 max |K|. Throws FieldsDiffer.
GaugeReport gauge_covariance_check(const WeylContext& ctx, const MagneticPotential& a1, const SymbolField& a);

}  // namespace magweyl
