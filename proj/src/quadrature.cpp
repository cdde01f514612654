#include "magweyl/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <array>
#include <mutex>
#include <stdexcept>

namespace magweyl {

namespace {

QuadratureRule build_rule(int n) {
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  if (table == nullptr) throw std::bad_alloc();
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(0.0, 1.0, i, &rule.nodes[i], &rule.weights[i], table);
  }
  gsl_integration_glfixed_table_free(table);
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre_unit(int n) {
  if (n < 1 || n > kMaxQuadratureNodes) {
    throw std::out_of_range("gauss_legendre_unit: node count out of range");
  }
  static std::array<QuadratureRule, kMaxQuadratureNodes + 1> rules;
  static std::array<std::once_flag, kMaxQuadratureNodes + 1> flags;
  std::call_once(flags[n], [n] { rules[n] = build_rule(n); });
  return rules[n];
}

}  // namespace magweyl
