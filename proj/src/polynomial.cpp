#include "magweyl/polynomial.hpp"

#include "magweyl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace magweyl {

namespace {

int total_degree(const Exponents& e, int n) {
  int d = 0;
  for (int i = 0; i < n; ++i) d += e[i];
  return d;
}

}  // namespace

Polynomial::Polynomial(int num_vars, std::vector<Term> terms) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > kMaxDim) throw ShapeError("polynomial: bad variable count");
  for (const auto& t : terms) {
    for (int i = num_vars; i < kMaxDim; ++i) {
      if (t.exponents[i] != 0) throw ShapeError("polynomial: exponent on a nonexistent variable");
    }
    if (!std::isfinite(t.coeff)) throw ShapeError("polynomial: non-finite coefficient");
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exponents < b.exponents; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().exponents == t.exponents) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coeff == 0.0; });
}

Polynomial Polynomial::constant(int num_vars, double c) { return Polynomial(num_vars, {Term{Exponents{}, c}}); }

Polynomial Polynomial::variable(int num_vars, int var, double c) {
  Term t;
  t.exponents[var] = 1;
  t.coeff = c;
  return Polynomial(num_vars, {t});
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, total_degree(t.exponents, num_vars_));
  return d;
}

double Polynomial::operator()(const Coords& x) const {
  if (terms_.empty()) return 0.0;
  const int deg = degree();
  // powers[i * (deg + 1) + p] = x_i^p
  std::array<double, kMaxDim * 16> small{};
  std::vector<double> large;
  double* powers = small.data();
  const std::size_t need = static_cast<std::size_t>(num_vars_) * (deg + 1);
  if (need > small.size()) {
    large.resize(need);
    powers = large.data();
  }
  for (int i = 0; i < num_vars_; ++i) {
    double* row = powers + static_cast<std::size_t>(i) * (deg + 1);
    row[0] = 1.0;
    for (int p = 1; p <= deg; ++p) row[p] = row[p - 1] * x[i];
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < num_vars_; ++i) {
      if (t.exponents[i] != 0) v *= powers[static_cast<std::size_t>(i) * (deg + 1) + t.exponents[i]];
    }
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Term d = t;
    d.coeff *= t.exponents[var];
    d.exponents[var] -= 1;
    out.push_back(d);
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::times_variable(int var) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.exponents[var] += 1;
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::scaled_by_degree(double (*factor)(int degree)) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff *= factor(total_degree(t.exponents, num_vars_));
  return Polynomial(num_vars_, std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw ShapeError("polynomial: variable count mismatch");
  std::vector<Polynomial::Term> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(a.num_vars_, std::move(all));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<Polynomial::Term> out = p.terms_;
  for (auto& t : out) t.coeff *= s;
  return Polynomial(p.num_vars_, std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponents != b.terms_[i].exponents || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

Polynomial random_polynomial(int num_vars, int degree, std::uint64_t seed, double scale) {
  if (num_vars < 1 || num_vars > kMaxDim || degree < 0) throw ShapeError("random_polynomial: bad shape");
  std::mt19937_64 rng(seed);
  std::vector<Polynomial::Term> terms;
  Exponents e{};
  // odometer over exponent vectors with total degree <= degree
  for (;;) {
    const int d = total_degree(e, num_vars);
    if (d >= 1) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      terms.push_back({e, scale * (2.0 * u - 1.0)});
    }
    int i = num_vars - 1;
    while (i >= 0) {
      if (total_degree(e, num_vars) < degree) {
        ++e[i];
        break;
      }
      e[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return Polynomial(num_vars, std::move(terms));
}

}  // namespace magweyl
