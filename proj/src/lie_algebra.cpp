#include "magweyl/lie_algebra.hpp"

#include "magweyl/errors.hpp"
#include "magweyl/quadrature.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace magweyl {

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kPivotTol = 1e-10;
constexpr int kMaxWordLength = kMaxBchIndex + 1;

struct BracketTerm {
  int i, j, k;  // i < j
  double c;
};

// Coefficients of all right-nested words up to kMaxWordLength, indexed by
// [length][bits] where the first letter is the most significant bit.
struct WordTable {
  std::array<std::vector<double>, kMaxWordLength + 1> coeff;
  WordTable() {
    for (int len = 1; len <= kMaxWordLength; ++len) {
      coeff[len].resize(std::size_t{1} << len);
      std::array<int, kMaxWordLength> word{};
      for (unsigned bits = 0; bits < (1u << len); ++bits) {
        for (int p = 0; p < len; ++p) word[p] = (bits >> (len - 1 - p)) & 1u;
        coeff[len][bits] = dynkin_word_coefficient(std::span<const int>(word.data(), len));
      }
    }
  }
};

const WordTable& word_table() {
  static const WordTable table;
  return table;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Sum over segmentations of word[pos..] into blocks X^r Y^s (r+s >= 1).
double segmentations(std::span<const int> word, std::size_t pos, int blocks, double weight) {
  if (pos == word.size()) {
    const double sign = (blocks % 2 == 1) ? 1.0 : -1.0;
    return sign * weight / blocks;
  }
  std::size_t run_x = 0;
  while (pos + run_x < word.size() && word[pos + run_x] == 0) ++run_x;
  double total = 0.0;
  for (std::size_t r = 0; r <= run_x; ++r) {
    std::size_t run_y = 0;
    if (r == run_x) {
      while (pos + r + run_y < word.size() && word[pos + r + run_y] == 1) ++run_y;
    }
    for (std::size_t s = 0; s <= run_y; ++s) {
      if (r + s == 0) continue;
      total += segmentations(word, pos + r + s, blocks + 1,
                             weight / (factorial(static_cast<int>(r)) * factorial(static_cast<int>(s))));
    }
  }
  return total;
}

// Modified Gram-Schmidt insertion; returns true when v enlarged the span.
bool insert_into_span(std::vector<Eigen::VectorXd>& basis, Eigen::VectorXd v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) v -= q.dot(v) * q;
  }
  const double norm = v.norm();
  if (norm <= kPivotTol) return false;
  basis.push_back(v / norm);
  return true;
}

}  // namespace

double dynkin_word_coefficient(std::span<const int> word) {
  if (word.empty()) return 0.0;
  return segmentations(word, 0, 0, 1.0) / static_cast<double>(word.size());
}

struct NilpotentLieAlgebra::Impl {
  int dim = 0;
  std::vector<double> c;
  std::vector<BracketTerm> terms;
  int index = 0;
  std::vector<int> lcs_dims;
  Eigen::MatrixXd adapted;
  std::shared_ptr<const TopLayerQuotient> quotient;

  double at(int i, int j, int k) const { return c[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }

  LieVector bracket(const LieVector& x, const LieVector& y) const {
    LieVector out = LieVector::Zero(dim);
    for (const auto& t : terms) out[t.k] += t.c * (x[t.i] * y[t.j] - x[t.j] * y[t.i]);
    return out;
  }

  // Accumulates sum_w coeff(w) [w](x, y) over the subtree of right-nested
  // words obtained by prepending letters to the word (len, bits).
  // When `single_x` is set, only words with exactly one X contribute.
  void accumulate(const LieVector& x, const LieVector& y, const LieVector& value, int len, unsigned bits,
                  int x_count, int max_len, bool single_x, LieVector& out) const {
    const double coeff = word_table().coeff[len][bits];
    if (coeff != 0.0 && (!single_x || x_count == 1)) out += coeff * value;
    if (len == max_len) return;
    for (unsigned letter = 0; letter < 2; ++letter) {
      const int next_x = x_count + (letter == 0 ? 1 : 0);
      if (single_x && next_x > 1) continue;
      LieVector next = bracket(letter == 0 ? x : y, value);
      if (next.isZero(0.0)) continue;
      accumulate(x, y, next, len + 1, (letter << len) | bits, next_x, max_len, single_x, out);
    }
  }

  LieVector word_sum(const LieVector& x, const LieVector& y, bool single_x) const {
    if (index > kMaxBchIndex) {
      throw ClassTooLarge("BCH product supports nilpotency index <= " + std::to_string(kMaxBchIndex));
    }
    LieVector out = LieVector::Zero(dim);
    const int max_len = index + 1;
    accumulate(x, y, x, 1, 0u, 1, max_len, single_x, out);
    accumulate(x, y, y, 1, 1u, 0, max_len, single_x, out);
    return out;
  }
};

NilpotentLieAlgebra NilpotentLieAlgebra::create(int dim, std::span<const double> sc) {
  if (dim < 1 || dim > kMaxDim) {
    throw ShapeError("algebra dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }
  const std::size_t d = static_cast<std::size_t>(dim);
  if (sc.size() != d * d * d) throw ShapeError("structure constant tensor must have dim^3 entries");

  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->c.assign(sc.begin(), sc.end());
  for (double v : impl->c) {
    if (!std::isfinite(v)) throw ShapeError("structure constants must be finite");
  }

  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        if (std::abs(impl->at(i, j, k) + impl->at(j, i, k)) > kIdentityTol) {
          throw ShapeError("structure constants are not antisymmetric in (i, j)");
        }
      }
      if (i < j) {
        for (int k = 0; k < dim; ++k) {
          if (impl->at(i, j, k) != 0.0) impl->terms.push_back({i, j, k, impl->at(i, j, k)});
        }
      }
    }
  }

  // Jacobi: [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0.
  auto e = [dim](int i) {
    LieVector v = LieVector::Zero(dim);
    v[i] = 1.0;
    return v;
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      for (int k = j + 1; k < dim; ++k) {
        const LieVector jac = impl->bracket(e(i), impl->bracket(e(j), e(k))) +
                              impl->bracket(e(j), impl->bracket(e(k), e(i))) +
                              impl->bracket(e(k), impl->bracket(e(i), e(j)));
        if (jac.cwiseAbs().maxCoeff() > kIdentityTol) {
          throw JacobiViolation("Jacobi identity fails for basis triple (" + std::to_string(i + 1) + ", " +
                                std::to_string(j + 1) + ", " + std::to_string(k + 1) + ")");
        }
      }
    }
  }

  // Lower central series g_{k+1} = [g, g_k], each term an orthonormal basis.
  std::vector<std::vector<Eigen::VectorXd>> series;
  {
    std::vector<Eigen::VectorXd> g0;
    for (int i = 0; i < dim; ++i) insert_into_span(g0, Eigen::VectorXd::Unit(dim, i));
    series.push_back(std::move(g0));
  }
  while (true) {
    const auto& prev = series.back();
    std::vector<Eigen::VectorXd> next;
    for (int i = 0; i < dim; ++i) {
      for (const auto& v : prev) {
        LieVector lv = v;
        insert_into_span(next, impl->bracket(e(i), lv));
      }
    }
    if (next.empty()) break;
    if (next.size() == prev.size()) {
      throw NotNilpotent("lower central series stabilizes at dimension " + std::to_string(next.size()));
    }
    series.push_back(std::move(next));
  }
  impl->index = static_cast<int>(series.size()) - 1;
  for (const auto& g : series) impl->lcs_dims.push_back(static_cast<int>(g.size()));

  // Adapted basis, built from g_n upwards and laid out from g_0 downwards.
  std::vector<Eigen::VectorXd> span;
  std::vector<std::vector<Eigen::VectorXd>> blocks(series.size());
  for (int k = impl->index; k >= 0; --k) {
    for (const auto& v : series[k]) {
      if (insert_into_span(span, v)) blocks[k].push_back(span.back());
    }
  }
  impl->adapted.resize(dim, dim);
  int col = 0;
  for (const auto& block : blocks) {
    for (const auto& v : block) impl->adapted.col(col++) = v;
  }

  if (impl->index >= 1) {
    const Eigen::MatrixXd& p = impl->adapted;
    const int top = impl->lcs_dims.back();
    const int qd = dim - top;
    std::vector<double> qc(static_cast<std::size_t>(qd) * qd * qd, 0.0);
    for (int i = 0; i < qd; ++i) {
      for (int j = 0; j < qd; ++j) {
        const LieVector bi = p.col(i);
        const LieVector bj = p.col(j);
        const Eigen::VectorXd coords = p.transpose() * impl->bracket(bi, bj);
        for (int k = 0; k < qd; ++k) {
          const double v = coords[k];
          qc[(static_cast<std::size_t>(i) * qd + j) * qd + k] = std::abs(v) < 1e-14 ? 0.0 : v;
        }
      }
    }
    // Antisymmetrize exactly; round-off would otherwise trip validation.
    for (int i = 0; i < qd; ++i) {
      for (int j = 0; j < qd; ++j) {
        for (int k = 0; k < qd; ++k) {
          auto& a = qc[(static_cast<std::size_t>(i) * qd + j) * qd + k];
          auto& b = qc[(static_cast<std::size_t>(j) * qd + i) * qd + k];
          const double avg = 0.5 * (a - b);
          a = avg;
          b = -avg;
        }
      }
    }
    auto q = std::make_shared<TopLayerQuotient>();
    q->algebra = std::make_shared<const NilpotentLieAlgebra>(create(qd, qc));
    q->projection = p.transpose().topRows(qd);
    q->section = p.leftCols(qd);
    impl->quotient = std::move(q);
  }

  return NilpotentLieAlgebra(std::move(impl));
}

int NilpotentLieAlgebra::dim() const { return impl_->dim; }
int NilpotentLieAlgebra::nilpotency_index() const { return impl_->index; }
const std::vector<int>& NilpotentLieAlgebra::lcs_dims() const { return impl_->lcs_dims; }
const Eigen::MatrixXd& NilpotentLieAlgebra::adapted_basis() const { return impl_->adapted; }
double NilpotentLieAlgebra::structure_constant(int i, int j, int k) const { return impl_->at(i, j, k); }
std::vector<double> NilpotentLieAlgebra::structure_constants() const { return impl_->c; }

LieVector NilpotentLieAlgebra::basis_vector(int i) const {
  LieVector v = zero();
  v[i] = 1.0;
  return v;
}

LieVector NilpotentLieAlgebra::bracket(const LieVector& x, const LieVector& y) const {
  return impl_->bracket(x, y);
}

LieVector NilpotentLieAlgebra::bch(const LieVector& x, const LieVector& y) const {
  if (impl_->index == 0) return x + y;
  return impl_->word_sum(x, y, false);
}

LieVector NilpotentLieAlgebra::right_translation_differential(const LieVector& y, const LieVector& x) const {
  if (impl_->index == 0) return x;
  return impl_->word_sum(x, y, true);
}

Eigen::MatrixXd NilpotentLieAlgebra::right_translation_matrix(const LieVector& y) const {
  Eigen::MatrixXd m(dim(), dim());
  for (int i = 0; i < dim(); ++i) m.col(i) = right_translation_differential(y, basis_vector(i));
  return m;
}

LieVector NilpotentLieAlgebra::psi_map(const LieVector& v, const LieVector& y) const {
  if (impl_->index == 0) return y + 0.5 * v;
  // Y*(sV) has degree <= index + 1 in s.
  const QuadratureRule& rule = gauss_legendre_unit(nodes_for_degree(impl_->index + 1));
  LieVector out = zero();
  for (int q = 0; q < rule.size(); ++q) out += rule.weights[q] * bch(y, rule.nodes[q] * v);
  return out;
}

LieVector NilpotentLieAlgebra::psi_inverse(const LieVector& v, const LieVector& z) const {
  if (impl_->index == 0) return z - 0.5 * v;
  const TopLayerQuotient& q = *impl_->quotient;
  const LieVector qv = q.projection * v;
  const LieVector qz = q.projection * z;
  const LieVector lifted = q.section * q.algebra->psi_inverse(qv, qz);
  const LieVector delta = z - psi_map(v, lifted);
  return delta + lifted;
}

const TopLayerQuotient& NilpotentLieAlgebra::quotient_by_top_layer() const {
  if (!impl_->quotient) throw AbelianHasNoQuotient("abelian algebra has no top-layer quotient");
  return *impl_->quotient;
}

NilpotentLieAlgebra algebra_preset(std::string_view name) {
  const auto colon = name.find(':');
  const std::string_view kind = name.substr(0, colon);
  int n = 0;
  if (colon != std::string_view::npos) {
    const std::string_view arg = name.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw ConfigError("bad algebra preset argument: " + std::string(name));
    }
  }
  auto tensor = [](int d) { return std::vector<double>(static_cast<std::size_t>(d) * d * d, 0.0); };
  auto set = [](std::vector<double>& c, int d, int i, int j, int k, double v) {
    c[(static_cast<std::size_t>(i) * d + j) * d + k] = v;
    c[(static_cast<std::size_t>(j) * d + i) * d + k] = -v;
  };
  if (kind == "abelian" && n >= 1) {
    return NilpotentLieAlgebra::create(n, tensor(n));
  }
  if (kind == "heisenberg" && n >= 3 && n % 2 == 1) {
    auto c = tensor(n);
    const int k = (n - 1) / 2;
    for (int i = 0; i < k; ++i) set(c, n, i, k + i, n - 1, 1.0);
    return NilpotentLieAlgebra::create(n, c);
  }
  if (kind == "filiform3" && n == 4) {
    auto c = tensor(4);
    set(c, 4, 0, 1, 2, 1.0);
    set(c, 4, 0, 2, 3, 1.0);
    return NilpotentLieAlgebra::create(4, c);
  }
  throw ConfigError("unknown algebra preset: " + std::string(name));
}

}  // namespace magweyl
