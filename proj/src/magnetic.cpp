#include "magweyl/magnetic.hpp"

#include "magweyl/errors.hpp"
#include "magweyl/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>

namespace magweyl {

MagneticPotential::MagneticPotential(NilpotentLieAlgebra algebra, std::vector<Polynomial> components)
    : algebra_(std::move(algebra)), components_(std::move(components)) {
  const int d = algebra_.dim();
  if (static_cast<int>(components_.size()) != d) throw ShapeError("potential: need one component per dimension");
  for (const auto& c : components_) {
    if (c.num_vars() != d) throw ShapeError("potential: component has wrong variable count");
    const int deg = c.degree();
    if (deg > kMaxPotentialDegree) throw DegreeTooHigh("potential degree " + std::to_string(deg) + " exceeds 8");
    degree_ = std::max(degree_, deg);
    if (!c.is_zero()) zero_ = false;
  }
  jacobian_.reserve(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) jacobian_.push_back(components_[k].derivative(j));
  }
  const int n = algebra_.nilpotency_index();
  phase_nodes_ = nodes_for_degree(std::max(1, n) * (degree_ + n));
}

MagneticPotential MagneticPotential::zero(const NilpotentLieAlgebra& algebra) {
  return MagneticPotential(algebra, std::vector<Polynomial>(algebra.dim(), Polynomial(algebra.dim())));
}

LieCovector MagneticPotential::at(const LieVector& y) const {
  const int d = dim();
  Coords out(d);
  for (int k = 0; k < d; ++k) out[k] = components_[k](y);
  return LieCovector(out);
}

LieCovector MagneticPotential::derivative(const LieVector& x, const LieVector& x1) const {
  const int d = dim();
  Coords out = Coords::Zero(d);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      if (x1[j] != 0.0) out[k] += x1[j] * jacobian_[static_cast<std::size_t>(k) * d + j](x);
    }
  }
  return LieCovector(out);
}

double MagneticPotential::field(const LieVector& x, const LieVector& x1, const LieVector& x2) const {
  return derivative(x, x1).pair(x2) - derivative(x, x2).pair(x1);
}

double MagneticPotential::pairing(const LieVector& y, const LieVector& x) const {
  if (zero_) return 0.0;
  return at(y).pair(algebra_.right_translation_differential(y, x));
}

double MagneticPotential::theta0(const LieVector& x, const LieCovector& xi, const LieVector& y) const {
  return xi.pair(y) + pairing(y, x);
}

double MagneticPotential::pi_phase(const LieVector& x, const LieCovector& xi, const LieVector& y) const {
  if (algebra_.is_abelian()) {
    // closed form of the xi part; the A part still needs quadrature
    double phase = xi.pair(y) - 0.5 * xi.pair(x);
    if (zero_) return phase;
    const QuadratureRule& rule = gauss_legendre_unit(phase_nodes_);
    for (int q = 0; q < rule.size(); ++q) phase += rule.weights[q] * pairing(y - rule.nodes[q] * x, x);
    return phase;
  }
  const QuadratureRule& rule = gauss_legendre_unit(phase_nodes_);
  double phase = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const LieVector w = algebra_.bch(-rule.nodes[q] * x, y);
    phase += rule.weights[q] * theta0(x, xi, w);
  }
  return phase;
}

double MagneticPotential::alpha_exponent(const LieVector& y, const LieVector& z) const {
  if (zero_) return 0.0;
  const QuadratureRule& rule = gauss_legendre_unit(phase_nodes_);
  double integral = 0.0;
  if (algebra_.is_abelian()) {
    const LieVector w = z - y;
    for (int q = 0; q < rule.size(); ++q) integral += rule.weights[q] * at(y + rule.nodes[q] * w).pair(w);
    return -integral;
  }
  const LieVector w = algebra_.bch(z, -y);
  for (int q = 0; q < rule.size(); ++q) {
    const LieVector g = algebra_.bch(rule.nodes[q] * w, y);
    integral += rule.weights[q] * at(g).pair(algebra_.right_translation_differential(g, w));
  }
  return -integral;
}

std::complex<double> MagneticPotential::alpha(const LieVector& y, const LieVector& z) const {
  return std::polar(1.0, alpha_exponent(y, z));
}

std::complex<double> MagneticPotential::triangle_phase(const LieVector& p, const LieVector& q,
                                                       const LieVector& r) const {
  return std::polar(1.0, alpha_exponent(q, p) + alpha_exponent(p, r) + alpha_exponent(r, q));
}

MagneticPotential MagneticPotential::plus_gradient(const Polynomial& psi) const {
  std::vector<Polynomial> out = components_;
  for (int k = 0; k < dim(); ++k) out[k] = out[k] + psi.derivative(k);
  return MagneticPotential(algebra_, std::move(out));
}

MagneticPotential operator-(const MagneticPotential& a, const MagneticPotential& b) {
  if (a.dim() != b.dim()) throw ShapeError("potential: dimension mismatch");
  std::vector<Polynomial> out;
  for (int k = 0; k < a.dim(); ++k) out.push_back(a.components_[k] - b.components_[k]);
  return MagneticPotential(a.algebra_, std::move(out));
}

Polynomial gauge_function(const MagneticPotential& a, const MagneticPotential& a1, std::uint64_t probe_seed) {
  const int d = a.dim();
  if (a1.dim() != d) throw ShapeError("gauge_function: dimension mismatch");
  std::mt19937_64 rng(probe_seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&] {
    LieVector v(d);
    for (int i = 0; i < d; ++i) v[i] = u(rng);
    return v;
  };
  for (int probe = 0; probe < 50; ++probe) {
    const LieVector x = draw(), x1 = draw(), x2 = draw();
    const double b = a.field(x, x1, x2);
    const double b1 = a1.field(x, x1, x2);
    if (std::abs(b - b1) > 1e-9 * std::max(1.0, std::abs(b))) {
      throw FieldsDiffer("gauge_function: potentials have different magnetic fields");
    }
  }
  // psi(X) = sum_k \int_0^1 C_k(tX) X_k dt, each monomial of degree p picks up 1/(p+1)
  Polynomial psi(d);
  for (int k = 0; k < d; ++k) {
    const Polynomial c = a.components()[k] - a1.components()[k];
    psi = psi + c.scaled_by_degree([](int p) { return 1.0 / (p + 1); }).times_variable(k);
  }
  return psi;
}

MagneticPotential potential_preset(const NilpotentLieAlgebra& algebra, std::string_view name) {
  const int d = algebra.dim();
  if (name == "zero") return MagneticPotential::zero(algebra);
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) throw ConfigError("unknown potential preset: " + std::string(name));
  const std::string_view kind = name.substr(0, colon);
  const std::string arg(name.substr(colon + 1));
  double b = 0.0;
  std::size_t used = 0;
  try {
    b = std::stod(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != arg.size() || !std::isfinite(b)) {
    throw ConfigError("bad potential preset argument: " + std::string(name));
  }
  auto x = [d](int i, double c) { return Polynomial::variable(d, i, c); };
  std::vector<Polynomial> comps(d, Polynomial(d));
  if (kind == "landau" || kind == "symmetric") {
    if (d != 2 || !algebra.is_abelian()) throw ConfigError(std::string(kind) + " preset needs abelian:2");
    if (kind == "landau") {
      comps[1] = x(0, b);
    } else {
      comps[0] = x(1, -0.5 * b);
      comps[1] = x(0, 0.5 * b);
    }
    return MagneticPotential(algebra, comps);
  }
  if (kind == "heisenberg-linear") {
    if (d != 3 || algebra.nilpotency_index() != 1) throw ConfigError("heisenberg-linear preset needs heisenberg:3");
    comps[0] = x(1, -0.5 * b);
    comps[1] = x(0, 0.5 * b);
    return MagneticPotential(algebra, comps);
  }
  throw ConfigError("unknown potential preset: " + std::string(name));
}

}  // namespace magweyl
