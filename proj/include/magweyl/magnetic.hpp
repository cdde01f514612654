#pragma once

#include "magweyl/lie_algebra.hpp"
#include "magweyl/polynomial.hpp"

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace magweyl {

inline constexpr int kMaxPotentialDegree = 8;

/// Polynomial magnetic potential A: g -> g*, one polynomial per dual-basis component.
class MagneticPotential {
 public:
  /// Throws ShapeError when the component count or variable count differs
  /// from the algebra dimension, DegreeTooHigh above kMaxPotentialDegree.
  MagneticPotential(NilpotentLieAlgebra algebra, std::vector<Polynomial> components);

  static MagneticPotential zero(const NilpotentLieAlgebra& algebra);

  const NilpotentLieAlgebra& algebra() const { return algebra_; }
  const std::vector<Polynomial>& components() const { return components_; }
  int dim() const { return algebra_.dim(); }
  /// Max total degree of the components, 0 for A = 0.
  int degree() const { return degree_; }
  bool is_zero() const { return zero_; }

  LieCovector at(const LieVector& y) const;

  /// A'_X(X1) as a covector.
  LieCovector derivative(const LieVector& x, const LieVector& x1) const;

  /// B_X(X1, X2) = <A'_X(X1), X2> - <A'_X(X2), X1>.
  double field(const LieVector& x, const LieVector& x1, const LieVector& x2) const;

  /// <A_Y, (R_Y)'_0 X>.
  double pairing(const LieVector& y, const LieVector& x) const;

  /// theta_0(X, xi) evaluated at Y: <xi, Y> + <A_Y, (R_Y)'_0 X>.
  double theta0(const LieVector& x, const LieCovector& xi, const LieVector& y) const;

  /// \int_0^1 theta_0(X, xi)((-sX)*Y) ds, the phase of the representation.
  double pi_phase(const LieVector& x, const LieCovector& xi, const LieVector& y) const;

  /// Real exponent of alpha_A(Y, Z), i.e. minus the line integral of A along
  /// s -> (s(Z*(-Y)))*Y from Y to Z.
  double alpha_exponent(const LieVector& y, const LieVector& z) const;
  std::complex<double> alpha(const LieVector& y, const LieVector& z) const;

  /// alpha(Q,P) alpha(P,R) alpha(R,Q): exp(-i) times the line integral of A
  /// around the closed BCH triangle P -> R -> Q -> P.
  std::complex<double> triangle_phase(const LieVector& p, const LieVector& q, const LieVector& r) const;

  /// Gauss-Legendre node count that integrates every s-polynomial above exactly.
  int phase_nodes() const { return phase_nodes_; }

  /// A + d(psi).
  MagneticPotential plus_gradient(const Polynomial& psi) const;

  friend MagneticPotential operator-(const MagneticPotential& a, const MagneticPotential& b);

 private:
  NilpotentLieAlgebra algebra_;
  std::vector<Polynomial> components_;
  std::vector<Polynomial> jacobian_;  // jacobian_[k * dim + j] = d_j A_k
  int degree_ = 0;
  bool zero_ = true;
  int phase_nodes_ = 1;
};

/// psi with d(psi) = A - A1 and psi(0) = 0. Throws FieldsDiffer unless the two
/// fields agree (|B - B1| <= 1e-9 max(1, |B|)) at 50 seeded random probes.
Polynomial gauge_function(const MagneticPotential& a, const MagneticPotential& a1,
                          std::uint64_t probe_seed = 0x6d61677765796cULL);

/// "zero", "landau:<b>" and "symmetric:<b>" on R^2, "heisenberg-linear:<b>" on heisenberg:3.
/// Throws ConfigError on unknown names or dimension mismatch.
MagneticPotential potential_preset(const NilpotentLieAlgebra& algebra, std::string_view name);

}  // namespace magweyl
