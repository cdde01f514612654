#pragma once

#include "magweyl/lie_algebra.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace magweyl {

using Exponents = std::array<std::uint8_t, kMaxDim>;

/// Real multivariate polynomial stored as a sorted list of monomials.
/// Coefficients are combined on construction and zero terms dropped, so two
/// equal polynomials have identical term lists.
class Polynomial {
 public:
  struct Term {
    Exponents exponents{};
    double coeff = 0.0;
  };

  Polynomial() = default;
  explicit Polynomial(int num_vars) : num_vars_(num_vars) {}
  Polynomial(int num_vars, std::vector<Term> terms);

  static Polynomial constant(int num_vars, double c);
  static Polynomial variable(int num_vars, int var, double c = 1.0);

  int num_vars() const { return num_vars_; }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const Coords& x) const;

  Polynomial derivative(int var) const;
  Polynomial times_variable(int var) const;
  Polynomial scaled_by_degree(double (*factor)(int degree)) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  int num_vars_ = 0;
  std::vector<Term> terms_;
};

/// Every monomial of total degree 1..degree with coefficients uniform in
/// [-scale, scale], drawn from a seeded mt19937_64 (raw bits, platform independent).
Polynomial random_polynomial(int num_vars, int degree, std::uint64_t seed, double scale = 1.0);

}  // namespace magweyl
