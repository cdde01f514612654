#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace magweyl {

/// Largest Lie algebra dimension supported. Vectors live on the stack.
inline constexpr int kMaxDim = 16;

/// Largest nilpotency index accepted by the BCH product (abelian = 0).
inline constexpr int kMaxBchIndex = 6;

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// Element of the Lie algebra, coefficients in the user basis.
using LieVector = Coords;

/// Element of the dual space. Kept distinct from LieVector so that pairings are explicit.
class LieCovector {
 public:
  LieCovector() = default;
  explicit LieCovector(Coords coords) : coords_(std::move(coords)) {}
  static LieCovector zero(int dim) { return LieCovector(Coords::Zero(dim)); }

  int dim() const { return static_cast<int>(coords_.size()); }
  const Coords& coords() const { return coords_; }
  Coords& coords() { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  /// Canonical duality pairing <xi, X>.
  double pair(const LieVector& x) const { return coords_.dot(x); }

  friend LieCovector operator+(const LieCovector& a, const LieCovector& b) {
    return LieCovector(a.coords_ + b.coords_);
  }
  friend LieCovector operator-(const LieCovector& a, const LieCovector& b) {
    return LieCovector(a.coords_ - b.coords_);
  }
  friend LieCovector operator*(double s, const LieCovector& a) { return LieCovector(s * a.coords_); }

 private:
  Coords coords_;
};

class NilpotentLieAlgebra;

/// Result of quotient_by_top_layer(): the algebra g/g_n together with the
/// projection q: g -> g/g_n and the coordinate section iota: g/g_n -> g.
struct TopLayerQuotient {
  std::shared_ptr<const NilpotentLieAlgebra> algebra;
  Eigen::MatrixXd projection;  // (dim - top) x dim
  Eigen::MatrixXd section;     // dim x (dim - top)
};

/// Finite-dimensional real nilpotent Lie algebra given by structure constants
/// [e_i, e_j] = sum_k c[i][j][k] e_k.
///
/// The nilpotency index follows the convention g_0 = g, g_{k+1} = [g, g_k] and
/// index n means g_n != {0} = g_{n+1}. An abelian algebra has index 0 and the
/// Heisenberg algebra has index 1 (many texts call these class 1 and class 2).
///
/// Instances are immutable and cheap to copy.
class NilpotentLieAlgebra {
 public:
  /// Validates antisymmetry and the Jacobi identity (tolerance 1e-12), then
  /// computes the lower central series. `structure_constants` is the
  /// row-major flattening of c[i][j][k].
  ///
  /// Throws ShapeError, JacobiViolation or NotNilpotent.
  static NilpotentLieAlgebra create(int dim, std::span<const double> structure_constants);

  int dim() const;
  int nilpotency_index() const;
  /// Dimensions of g_0 ⊇ g_1 ⊇ ... ⊇ g_n (last entry nonzero).
  const std::vector<int>& lcs_dims() const;
  /// Columns are the adapted basis vectors in user coordinates: the trailing
  /// lcs_dims().back() columns span g_n, the trailing lcs_dims()[k] columns
  /// span g_k. The matrix is orthogonal.
  const Eigen::MatrixXd& adapted_basis() const;
  double structure_constant(int i, int j, int k) const;
  std::vector<double> structure_constants() const;

  LieVector zero() const { return LieVector::Zero(dim()); }
  LieVector basis_vector(int i) const;

  LieVector bracket(const LieVector& x, const LieVector& y) const;

  /// BCH product X*Y, exact for nilpotent algebras (truncated Dynkin series).
  /// Throws ClassTooLarge when nilpotency_index() > kMaxBchIndex.
  LieVector bch(const LieVector& x, const LieVector& y) const;

  /// (R_Y)'_0 X = d/dt|_{t=0} (tX)*Y.
  LieVector right_translation_differential(const LieVector& y, const LieVector& x) const;

  /// Matrix of (R_Y)'_0 in user coordinates.
  Eigen::MatrixXd right_translation_matrix(const LieVector& y) const;

  /// Psi_{g,V}(Y) = \int_0^1 Y*(sV) ds.
  LieVector psi_map(const LieVector& v, const LieVector& y) const;

  /// Inverse of Psi_{g,V}, by induction on the nilpotency index through g/g_n.
  LieVector psi_inverse(const LieVector& v, const LieVector& z) const;

  /// Throws AbelianHasNoQuotient when the algebra is abelian.
  const TopLayerQuotient& quotient_by_top_layer() const;

  bool is_abelian() const { return nilpotency_index() == 0; }

  struct Impl;

 private:
  explicit NilpotentLieAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Built-in algebras: "abelian:<d>", "heisenberg:<2k+1>", "filiform3:4".
NilpotentLieAlgebra algebra_preset(std::string_view name);

/// Coefficient of a right-nested commutator word in the Dynkin form of the BCH
/// series. Letters are 0 (= X) and 1 (= Y); the word x_1...x_m stands for
/// [x_1,[x_2,...,[x_{m-1},x_m]...]]. Exposed for testing.
double dynkin_word_coefficient(std::span<const int> word);

}  // namespace magweyl
