#pragma once

#include <memory>
#include <vector>

#include "qg/errors.hpp"
#include "qg/linalg.hpp"

namespace qg {

class QuantumSpace;
using SpacePtr = std::shared_ptr<const QuantumSpace>;

/// A finite dimensional C*-algebra M = ⊕_a M(n_a) carrying a faithful
/// positive functional psi(x) = Σ_a Tr(rho_a x_a). The densities must satisfy
/// the 1-form condition Tr(rho_a^{-1}) = 1 per block, which makes the
/// multiplication map a coisometry for the GNS inner product.
///
/// Coordinates everywhere are taken against the matrix units e_{ij}^a ordered
/// lexicographically by (a, i, j); that basis is orthonormal for the
/// unnormalized block trace, so trace-adjoints are plain conjugate transposes.
class QuantumSpace {
public:
  /// Builds a space. With no densities, installs the canonical tracial 1-form
  /// rho_a = n_a * I. With normalize set, each rho_a is rescaled by
  /// Tr(rho_a^{-1}); otherwise a 1-form violation is an error.
  static SpacePtr make(std::vector<int> blocks, std::vector<Matrix> rho = {},
                       bool normalize = false, double tol = kDefaultTol);

  const std::vector<int>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_size(int a) const { return blocks_[a]; }
  int dim() const { return dim_; }    // N = Σ n_a^2
  int hdim() const { return hdim_; }  // n = Σ n_a
  int offset(int a) const { return offsets_[a]; }      // coordinate offset
  int h_offset(int a) const { return h_offsets_[a]; }  // offset inside H
  int coord(int a, int i, int j) const { return offsets_[a] + i * blocks_[a] + j; }

  const Matrix& rho(int a) const { return rho_[a]; }
  /// rho_a^s for s in {1, -1, 1/2, -1/2, 1/4, -1/4} (precomputed).
  const Matrix& rho_power(int a, double s) const;

  bool tracial() const { return tracial_; }
  double psi_of_identity() const { return psi_identity_; }

  bool same_as(const QuantumSpace& other, double tol = kDefaultTol) const;

private:
  QuantumSpace() = default;

  std::vector<int> blocks_;
  std::vector<int> offsets_;
  std::vector<int> h_offsets_;
  std::vector<Matrix> rho_;
  // index by block, then by power slot (see rho_power)
  std::vector<std::vector<Matrix>> rho_powers_;
  int dim_ = 0;
  int hdim_ = 0;
  bool tracial_ = true;
  double psi_identity_ = 0.0;
};

/// Element of the algebra, stored per block. Immutable by convention once
/// constructed; all operations return fresh values.
class AlgebraElement {
public:
  AlgebraElement(SpacePtr space, std::vector<Matrix> blocks);

  static AlgebraElement zero(const SpacePtr& space);
  static AlgebraElement identity(const SpacePtr& space);
  static AlgebraElement basis(const SpacePtr& space, int a, int i, int j);
  static AlgebraElement from_vec(const SpacePtr& space, const Vector& coords);
  /// Reads the block diagonal of an hdim x hdim matrix.
  static AlgebraElement from_embedded(const SpacePtr& space, const Matrix& m);

  const SpacePtr& space() const { return space_; }
  const Matrix& block(int a) const { return blocks_[a]; }

  Vector to_vec() const;
  Matrix embedded() const;  // hdim x hdim block diagonal

  AlgebraElement adjoint() const;
  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;  // algebra product
  AlgebraElement scaled(Cplx c) const;

  double norm_op() const;  // C*-norm (largest singular value over blocks)
  double norm_l2() const;  // trace norm sqrt(Σ Tr(x* x))

  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_projection(double tol = kDefaultTol) const;
  /// Non-trivial projection: not 0 and not 1 (within tol), and a projection.
  bool is_nontrivial_projection(double tol = kDefaultTol) const;

private:
  SpacePtr space_;
  std::vector<Matrix> blocks_;
};

/// psi(x) = Σ_a Tr(rho_a x_a).
Cplx functional(const AlgebraElement& x);

/// Gram matrix of <x,y> = psi(x* y) in the canonical basis.
Matrix gram_gns(const QuantumSpace& space);
/// Gram matrix of <x,y>_KMS = Σ_a Tr(rho_a^{1/2} x_a* rho_a^{1/2} y_a).
Matrix gram_kms(const QuantumSpace& space);

/// Matrix of the multiplication map m : M ⊗ M -> M (N x N^2), product basis
/// of M ⊗ M ordered with the first leg slower.
Matrix mult_map(const QuantumSpace& space);
/// Matrix of m* : M -> M ⊗ M (N^2 x N), m*(e_ij^a) = Σ_k e_ik^a rho_a^{-1} ⊗ e_kj^a.
Matrix mult_adjoint(const QuantumSpace& space);

/// N x N matrix of x -> l x r in the canonical basis (l, r in M).
Matrix sandwich_matrix(const AlgebraElement& left, const AlgebraElement& right);
Matrix left_mult_matrix(const AlgebraElement& x);
Matrix right_mult_matrix(const AlgebraElement& x);

/// Matrix of the conjugation x -> rho^{s} x rho^{t} (block-wise powers).
Matrix rho_sandwich_matrix(const QuantumSpace& space, double s, double t);

}  // namespace qg
