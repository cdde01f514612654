#include "magweyl/phase_space.hpp"

#include "magweyl/errors.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

namespace magweyl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  if (!(a == b)) throw ShapeError("fields live on different grids");
}

void check_symbol(const SymbolField& a) {
  if (a.values.size() != a.grid.symbol_size()) throw ShapeError("symbol field size does not match grid");
}

void check_config(const ConfigField& f) {
  if (f.values.size() != f.grid.config_size()) throw ShapeError("config field size does not match grid");
}

// Multiplies entry by (-1)^{sum of indices over the selected axes}.
void alternate_signs(ComplexArray& values, int rank, int n, const std::vector<int>& axes) {
  std::vector<std::size_t> stride(rank);
  std::size_t s = 1;
  for (int a = rank - 1; a >= 0; --a) {
    stride[a] = s;
    s *= n;
  }
  const std::size_t total = values.size();
  for (std::size_t i = 0; i < total; ++i) {
    int parity = 0;
    for (int a : axes) parity += static_cast<int>((i / stride[a]) % n);
    if (parity & 1) values[i] = -values[i];
  }
}

}  // namespace

LieVector PhaseSpaceGrid::config_point(std::size_t flat) const {
  LieVector v(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    v[a] = x(static_cast<int>(flat % n_));
    flat /= n_;
  }
  return v;
}

LieCovector PhaseSpaceGrid::dual_point(std::size_t flat) const {
  Coords v(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    v[a] = xi(static_cast<int>(flat % n_));
    flat /= n_;
  }
  return LieCovector(v);
}

PhaseSpaceGrid make_grid(int dim, int n, double half_width) {
  if (dim < 1 || dim > kMaxDim) throw BadGridSpec("grid dimension must be in 1..16");
  if (n < 2 || n % 2 != 0) throw BadGridSpec("points per axis must be even and >= 2, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw BadGridSpec("box half width must be positive");
  std::size_t size = 1;
  for (int a = 0; a < dim; ++a) {
    if (size > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(n) / 64) {
      throw BadGridSpec("grid too large");
    }
    size *= static_cast<std::size_t>(n);
  }
  if (size > (std::size_t{1} << 31)) throw BadGridSpec("grid too large");
  PhaseSpaceGrid g;
  g.dim_ = dim;
  g.n_ = n;
  g.half_width_ = half_width;
  g.h_ = 2.0 * half_width / n;
  g.dxi_ = kTwoPi / (n * g.h_);
  g.config_size_ = size;
  return g;
}

ConfigField sample_config(const PhaseSpaceGrid& grid, const std::function<Complex(const LieVector&)>& f) {
  ConfigField out{grid, ComplexArray(grid.config_size()), Domain::position};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = f(grid.config_point(i));
  return out;
}

SymbolField sample_symbol(const PhaseSpaceGrid& grid,
                          const std::function<Complex(const LieVector&, const LieCovector&)>& a) {
  SymbolField out{grid, ComplexArray(grid.symbol_size())};
  const std::size_t m = grid.config_size();
  std::vector<LieCovector> duals;
  duals.reserve(m);
  for (std::size_t k = 0; k < m; ++k) duals.push_back(grid.dual_point(k));
  for (std::size_t i = 0; i < m; ++i) {
    const LieVector x = grid.config_point(i);
    for (std::size_t k = 0; k < m; ++k) out.values[i * m + k] = a(x, duals[k]);
  }
  return out;
}

void centered_dft(ComplexArray& values, int rank, int n, const std::vector<int>& axes, bool forward,
                  double spacing) {
  if (axes.empty()) return;
  std::size_t expect = 1;
  for (int a = 0; a < rank; ++a) expect *= static_cast<std::size_t>(n);
  if (values.size() != expect) throw ShapeError("centered_dft: array size does not match shape");

  std::vector<int> stride(rank);
  int s = 1;
  for (int a = rank - 1; a >= 0; --a) {
    stride[a] = s;
    s *= n;
  }
  std::vector<bool> selected(rank, false);
  for (int a : axes) selected[a] = true;
  std::vector<fftw_iodim> dims, loops;
  for (int a = 0; a < rank; ++a) {
    fftw_iodim d{n, stride[a], stride[a]};
    (selected[a] ? dims : loops).push_back(d);
  }

  alternate_signs(values, rank, n, axes);
  auto* data = reinterpret_cast<fftw_complex*>(values.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(loops.size()),
                              loops.data(), data, data, forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw ShapeError("centered_dft: FFT planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  alternate_signs(values, rank, n, axes);

  const int m = static_cast<int>(axes.size());
  double scale = std::pow(spacing / std::sqrt(kTwoPi), m);
  // (-1)^{N/2} per transformed axis from the centring of both grids
  if ((n / 2) % 2 == 1 && m % 2 == 1) scale = -scale;
  for (auto& v : values) v *= scale;
}

ConfigField fourier_g(const ConfigField& f, bool forward) {
  check_config(f);
  const Domain want = forward ? Domain::position : Domain::momentum;
  if (f.domain != want) throw ShapeError("fourier_g: field is in the wrong domain");
  ConfigField out = f;
  std::vector<int> axes(f.grid.dim());
  for (int a = 0; a < f.grid.dim(); ++a) axes[a] = a;
  centered_dft(out.values, f.grid.dim(), f.grid.points(), axes, forward,
               forward ? f.grid.spacing() : f.grid.dual_spacing());
  out.domain = forward ? Domain::momentum : Domain::position;
  return out;
}

namespace {

std::vector<int> block_axes(int d, bool trailing) {
  std::vector<int> axes(d);
  for (int a = 0; a < d; ++a) axes[a] = trailing ? d + a : a;
  return axes;
}

}  // namespace

SymbolField inverse_fourier_momentum(const SymbolField& a) {
  check_symbol(a);
  SymbolField out = a;
  const int d = a.grid.dim();
  centered_dft(out.values, 2 * d, a.grid.points(), block_axes(d, true), false, a.grid.dual_spacing());
  return out;
}

SymbolField fourier_momentum(const SymbolField& b) {
  check_symbol(b);
  SymbolField out = b;
  const int d = b.grid.dim();
  centered_dft(out.values, 2 * d, b.grid.points(), block_axes(d, true), true, b.grid.spacing());
  return out;
}

SymbolField swap_blocks(const SymbolField& a) {
  check_symbol(a);
  const std::size_t m = a.grid.config_size();
  SymbolField out{a.grid, ComplexArray(a.values.size())};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) out.values[k * m + i] = a.values[i * m + k];
  }
  return out;
}

SymbolField symplectic_fourier(const SymbolField& a) {
  check_symbol(a);
  SymbolField t = a;
  const int d = a.grid.dim();
  const int n = a.grid.points();
  centered_dft(t.values, 2 * d, n, block_axes(d, false), true, a.grid.spacing());
  centered_dft(t.values, 2 * d, n, block_axes(d, true), false, a.grid.dual_spacing());
  return swap_blocks(t);
}

double l2_norm(const ConfigField& f) { return std::sqrt(inner(f, f).real()); }

Complex inner(const ConfigField& f, const ConfigField& g) {
  check_config(f);
  check_config(g);
  require_same_grid(f.grid, g.grid);
  if (f.domain != g.domain) throw ShapeError("inner: fields in different domains");
  Complex s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += std::conj(f.values[i]) * g.values[i];
  const double cell = f.domain == Domain::position ? f.grid.spacing() : f.grid.dual_spacing();
  return s * std::pow(cell, f.grid.dim());
}

double l2_norm(const SymbolField& a) { return std::sqrt(inner(a, a).real()); }

Complex inner(const SymbolField& a, const SymbolField& b) {
  check_symbol(a);
  check_symbol(b);
  require_same_grid(a.grid, b.grid);
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
  return s / static_cast<double>(a.grid.config_size());
}

double trig_weight(int n, double u) {
  // reduce to [-n/2, n/2)
  u = u - n * std::floor(u / n + 0.5);
  const double r = std::round(u);
  const double f = u - r;
  if (std::abs(u) < 1e-13) return 1.0;
  // sin(pi u) from the small remainder, so no cancellation near nodes
  const double s = (static_cast<long long>(r) & 1 ? -1.0 : 1.0) * std::sin(std::numbers::pi * f);
  const double t = std::numbers::pi * u / n;
  return s * std::cos(t) / (n * std::sin(t));
}

void trig_weights(int n, double p, double* out) {
  const double r = std::round(p);
  const double u = p - r;
  const int base = ((static_cast<int>(r) % n) + n) % n;
  if (std::abs(u) < 1e-13) {
    for (int j = 0; j < n; ++j) out[j] = j == base ? 1.0 : 0.0;
    return;
  }
  const double su = std::sin(std::numbers::pi * u) / n;
  for (int j = 0; j < n; ++j) {
    // k = (r - j) mod n in [-n/2, n/2)
    int k = base - j;
    if (k >= n / 2) k -= n;
    if (k < -n / 2) k += n;
    const double v = su / std::tan(std::numbers::pi * (k + u) / n);
    out[j] = (k & 1) ? -v : v;
  }
}

GridSampler::GridSampler(const ComplexArray* data, std::vector<bool> fine_axes, const PhaseSpaceGrid& grid,
                         Outside outside)
    : data_(data), fine_(std::move(fine_axes)), n_(grid.points()), h_(grid.spacing()),
      half_width_(grid.half_width()), outside_(outside) {
  const int rank = static_cast<int>(fine_.size());
  len_.resize(rank);
  stride_.resize(rank);
  std::size_t s = 1;
  for (int a = rank - 1; a >= 0; --a) {
    len_[a] = fine_[a] ? 2 * n_ : n_;
    stride_[a] = s;
    s *= static_cast<std::size_t>(len_[a]);
  }
  if (data_->size() != s) throw ShapeError("GridSampler: array size does not match axes");
}

Complex GridSampler::operator()(const double* pos, double* scratch) const {
  const int rank = this->rank();
  std::array<int, 4 * kMaxDim> hit;
  for (int a = 0; a < rank; ++a) {
    const double x = pos[a];
    if (outside_ == Outside::zero && std::abs(x) > half_width_ * (1.0 + 1e-12)) return 0.0;
    const double p = fine_[a] ? 2.0 * x / h_ + n_ : x / h_ + n_ / 2;
    const double r = std::round(p);
    if (std::abs(p - r) < 1e-12) {
      hit[a] = ((static_cast<int>(r) % len_[a]) + len_[a]) % len_[a];
    } else {
      hit[a] = -1;
      trig_weights(len_[a], p, scratch + static_cast<std::size_t>(a) * 2 * n_);
    }
  }
  return contract(data_->data(), 0, hit.data(), scratch);
}

Complex GridSampler::contract(const Complex* base, int axis, const int* hit, const double* w) const {
  if (axis == rank()) return *base;
  if (hit[axis] >= 0) return contract(base + hit[axis] * stride_[axis], axis + 1, hit, w);
  const double* wa = w + static_cast<std::size_t>(axis) * 2 * n_;
  Complex s = 0.0;
  if (axis + 1 == rank()) {
    for (int j = 0; j < len_[axis]; ++j) s += wa[j] * base[j * stride_[axis]];
    return s;
  }
  for (int j = 0; j < len_[axis]; ++j) s += wa[j] * contract(base + j * stride_[axis], axis + 1, hit, w);
  return s;
}

Complex interpolate(const ConfigField& f, const LieVector& y) {
  check_config(f);
  if (f.domain != Domain::position) throw ShapeError("interpolate needs a position field");
  const GridSampler sampler(&f.values, std::vector<bool>(f.grid.dim(), false), f.grid,
                            GridSampler::Outside::periodic);
  std::vector<double> scratch(sampler.scratch_size());
  return sampler(y.data(), scratch.data());
}

ConfigField spectral_derivative(const ConfigField& f, int axis) {
  check_config(f);
  if (f.domain != Domain::position) throw ShapeError("spectral_derivative needs a position field");
  const PhaseSpaceGrid& g = f.grid;
  if (axis < 0 || axis >= g.dim()) throw ShapeError("spectral_derivative: bad axis");
  ConfigField out = fourier_g(f, true);
  const int n = g.points();
  std::size_t stride = 1;
  for (int a = g.dim() - 1; a > axis; --a) stride *= n;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const int k = static_cast<int>((i / stride) % n);
    // the split Nyquist mode has zero derivative at the nodes
    out.values[i] *= k == 0 ? Complex(0.0) : Complex(0.0, g.xi(k));
  }
  return fourier_g(out, false);
}

ComplexArray apply_axis_matrix(const ComplexArray& values, const std::vector<int>& shape, int axis,
                               const Eigen::MatrixXcd& m) {
  const int rank = static_cast<int>(shape.size());
  if (axis < 0 || axis >= rank || m.cols() != shape[axis]) throw ShapeError("apply_axis_matrix: bad shape");
  std::size_t outer = 1, inner_len = 1;
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  for (int a = axis + 1; a < rank; ++a) inner_len *= shape[a];
  const std::size_t n = shape[axis];
  const std::size_t r = m.rows();
  if (values.size() != outer * n * inner_len) throw ShapeError("apply_axis_matrix: size mismatch");
  ComplexArray out(outer * r * inner_len, Complex(0.0));
  for (std::size_t o = 0; o < outer; ++o) {
    const Complex* src = values.data() + o * n * inner_len;
    Complex* dst = out.data() + o * r * inner_len;
    for (std::size_t i = 0; i < r; ++i) {
      Complex* drow = dst + i * inner_len;
      for (std::size_t j = 0; j < n; ++j) {
        const Complex c = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (c == Complex(0.0)) continue;
        const Complex* srow = src + j * inner_len;
        for (std::size_t t = 0; t < inner_len; ++t) drow[t] += c * srow[t];
      }
    }
  }
  return out;
}

Eigen::MatrixXcd half_step_upsampler(int n) {
  Eigen::MatrixXcd m(2 * n, n);
  std::vector<double> w(n);
  for (int f = 0; f < 2 * n; ++f) {
    // fine node (f - n) h / 2 sits at coarse index f / 2
    trig_weights(n, 0.5 * f, w.data());
    for (int j = 0; j < n; ++j) m(f, j) = w[j];
  }
  return m;
}

}  // namespace magweyl
