#pragma once

#include "magweyl/lie_algebra.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace magweyl {

using Complex = std::complex<double>;
using ComplexArray = std::vector<Complex>;

/// Centered grid x_j = (j - N/2) h on each axis of g, h = 2L/N, locked to the
/// dual grid xi_k = (k - N/2) dxi with dxi h = 2 pi / N.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid() = default;

  int dim() const { return dim_; }
  int points() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return h_; }
  double dual_spacing() const { return dxi_; }

  double x(int j) const { return (j - n_ / 2) * h_; }
  double xi(int k) const { return (k - n_ / 2) * dxi_; }

  /// N^d and N^{2d}.
  std::size_t config_size() const { return config_size_; }
  std::size_t symbol_size() const { return config_size_ * config_size_; }

  /// Row-major decoding of a flat index over N^d, first axis slowest.
  LieVector config_point(std::size_t flat) const;
  LieCovector dual_point(std::size_t flat) const;

  friend bool operator==(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  friend PhaseSpaceGrid make_grid(int dim, int n, double half_width);
  int dim_ = 0;
  int n_ = 0;
  double half_width_ = 0.0;
  double h_ = 0.0;
  double dxi_ = 0.0;
  std::size_t config_size_ = 0;
};

/// Throws BadGridSpec unless 1 <= dim <= kMaxDim, N even and >= 2, L finite
/// and positive, and N^{2d} fits in memory addressing.
PhaseSpaceGrid make_grid(int dim, int n, double half_width);

enum class Domain { position, momentum };

/// Samples of a function on g (or on g* when domain is momentum).
struct ConfigField {
  PhaseSpaceGrid grid;
  ComplexArray values;
  Domain domain = Domain::position;
};

/// Samples of a(X, xi); axis order X_1..X_d, xi_1..xi_d, row-major.
struct SymbolField {
  PhaseSpaceGrid grid;
  ComplexArray values;
};

ConfigField sample_config(const PhaseSpaceGrid& grid, const std::function<Complex(const LieVector&)>& f);
SymbolField sample_symbol(const PhaseSpaceGrid& grid,
                          const std::function<Complex(const LieVector&, const LieCovector&)>& a);

/// Unitary F_g ((2 pi)^{-d/2} \int e^{-i<xi,X>} f dX) and its inverse.
ConfigField fourier_g(const ConfigField& f, bool forward);

/// (1 (x) F_g^{-1}) over the xi axes: returns b(X, T) with both blocks on the g-grid.
SymbolField inverse_fourier_momentum(const SymbolField& a);
/// (1 (x) F_g) over the trailing block, inverse of the above.
SymbolField fourier_momentum(const SymbolField& b);

/// F_Xi = swap o (F_g (x) F_g^{-1}). An involution.
SymbolField symplectic_fourier(const SymbolField& a);

/// Exchanges the X and xi axis blocks.
SymbolField swap_blocks(const SymbolField& a);

/// h^d sum |f|^2 (dxi^d for momentum fields).
double l2_norm(const ConfigField& f);
Complex inner(const ConfigField& f, const ConfigField& g);
/// Liouville measure dX dxi / (2 pi)^d, i.e. N^{-d} sum |a|^2.
double l2_norm(const SymbolField& a);
Complex inner(const SymbolField& a, const SymbolField& b);

// Lower level helpers.

/// In-place centered DFT on the axes in `axes` of a row-major array with
/// `rank` axes of length n. `spacing` is the input grid step on those axes.
void centered_dft(ComplexArray& values, int rank, int n, const std::vector<int>& axes, bool forward,
                  double spacing);

/// Weight of grid node j in the band-limited periodic interpolant at
/// fractional index position p (Nyquist mode split symmetrically), u = p - j.
double trig_weight(int n, double u);

/// Weights of all n nodes for a fractional index position p.
void trig_weights(int n, double p, double* out);

/// Band-limited evaluation of a row-major array whose axes are either the
/// g-grid (N nodes) or the half-step grid (2N nodes at (f - N) h / 2).
/// Nodes hit exactly are read directly, so cost is N^{#off-grid axes}.
class GridSampler {
 public:
  enum class Outside { zero, periodic };

  GridSampler(const ComplexArray* data, std::vector<bool> fine_axes, const PhaseSpaceGrid& grid,
              Outside outside = Outside::zero);

  int rank() const { return static_cast<int>(len_.size()); }
  /// Scratch size in doubles needed by operator().
  std::size_t scratch_size() const { return static_cast<std::size_t>(rank()) * 2 * n_; }

  /// Value at physical coordinates pos[0..rank). Outside the box the result is
  /// zero or the periodic continuation of the interpolant.
  Complex operator()(const double* pos, double* scratch) const;

 private:
  Complex contract(const Complex* base, int axis, const int* hit, const double* w) const;
  const ComplexArray* data_;
  std::vector<bool> fine_;
  std::vector<int> len_;
  std::vector<std::size_t> stride_;
  int n_;
  double h_;
  double half_width_;
  Outside outside_;
};

/// Band-limited interpolant of a position field at an arbitrary point, i.e.
/// the inverse DFT sum, which is periodic with period 2L.
Complex interpolate(const ConfigField& f, const LieVector& y);

/// Derivative along one axis of the band-limited interpolant, at the grid nodes.
ConfigField spectral_derivative(const ConfigField& f, int axis);

/// Applies a (rows x n) matrix along one axis. `shape` lists axis lengths.
ComplexArray apply_axis_matrix(const ComplexArray& values, const std::vector<int>& shape, int axis,
                               const Eigen::MatrixXcd& m);

/// (2n) x n matrix sampling the interpolant at the half-step grid
/// (f - n) h / 2, f = 0..2n-1.
Eigen::MatrixXcd half_step_upsampler(int n);

}  // namespace magweyl
