#pragma once

#include <utility>
#include <vector>

#include "qg/operator_system.hpp"
#include "qg/space.hpp"

namespace qg {

/// A linear map M -> M stored as its N x N matrix in the canonical basis.
class SuperOperator {
public:
  SuperOperator(SpacePtr space, Matrix mat);

  static SuperOperator identity(const SpacePtr& space);
  /// K(x) = psi(x) 1, the adjacency map of the complete quantum graph.
  static SuperOperator complete(const SpacePtr& space);
  static SuperOperator zero(const SpacePtr& space);

  const SpacePtr& space() const { return space_; }
  const Matrix& mat() const { return mat_; }

  AlgebraElement apply(const AlgebraElement& x) const;
  SuperOperator compose(const SuperOperator& o) const;  // this ∘ o
  SuperOperator power(int k) const;                     // k-fold composition
  SuperOperator operator+(const SuperOperator& o) const;
  SuperOperator operator-(const SuperOperator& o) const;
  SuperOperator scaled(Cplx c) const;

private:
  SpacePtr space_;
  Matrix mat_;
};

/// Element of M ⊗ M^op represented faithfully on H ⊗ H with the second leg
/// transposed: x ⊗ y^op is stored as kron(x, y^T) over hdim^2 coordinates.
/// Positivity in M ⊗ M^op is then positive semidefiniteness of `mat`, and the
/// algebra product is the plain matrix product.
class ChoiMatrix {
public:
  ChoiMatrix(SpacePtr space, Matrix mat);

  const SpacePtr& space() const { return space_; }
  const Matrix& mat() const { return mat_; }
  int side() const { return static_cast<int>(mat_.rows()); }  // hdim^2

  /// Sub-block over C^{n_b} ⊗ C^{n_a} (the part of the first leg living in
  /// block b and the second in block a).
  Matrix block(int a, int b) const;

  /// Tensor flip Σ(x ⊗ y^op) = y ⊗ x^op in the stored representation.
  ChoiMatrix flip() const;

  double min_eigenvalue() const;        // of the Hermitian part
  double hermiticity_residual() const;  // ||C - C*||
  Matrix support() const;               // support projection of the PSD part

private:
  SpacePtr space_;
  Matrix mat_;
};

/// sigma_z(x) = rho^{iz} x rho^{-iz}, the modular group of psi.
SuperOperator modular_map(const SpacePtr& space, Cplx z);

/// A • B = m (A ⊗ B) m*, the quantum Schur product; on D_n this is the usual
/// entrywise product of matrices.
SuperOperator schur_product(const SuperOperator& a, const SuperOperator& b);

/// Choi(A) = (A ⊗ sigma_{-i/2}) m*(1), computed through the expansion
/// Σ_{a,i,j} A(rho^{-1/4} e_ij rho^{-1/4}) ⊗ (rho^{-1/4} e_ji rho^{-1/4})^op.
ChoiMatrix choi(const SuperOperator& a);

/// Inverse of `choi`: recovers the map from its Choi matrix.
SuperOperator superop_from_choi(const ChoiMatrix& c);

/// Ã(x) = rho^{1/4} A(rho^{-1/4} x rho^{-1/4}) rho^{1/4}; similar to A but
/// self-adjoint for the plain trace inner product whenever A is
/// KMS-symmetric.
SuperOperator kms_implementation(const SuperOperator& a);
/// Inverse transform of `kms_implementation`.
SuperOperator from_kms_implementation(const SpacePtr& space, const Matrix& tilde_mat);

SuperOperator adjoint_gns(const SuperOperator& a);
SuperOperator adjoint_kms(const SuperOperator& a);
/// A^T(x) = (A*_KMS(x*))*; its Choi matrix is the tensor flip of Choi(A).
SuperOperator transpose(const SuperOperator& a);

bool is_completely_positive(const SuperOperator& a, double tol = kDefaultTol);
bool is_star_preserving(const SuperOperator& a, double tol = kDefaultTol);
bool is_kms_symmetric(const SuperOperator& a, double tol = kDefaultTol);
bool is_gns_symmetric(const SuperOperator& a, double tol = kDefaultTol);

/// Spanning operators S_ab extracted from the eigendecomposition of the Choi
/// blocks of a completely positive map; they satisfy
///   A_ab(x) = Σ_i rho_b^{-1/4} S_ab^i rho_a^{1/4} x rho_a^{1/4} (S_ab^i)* rho_b^{-1/4}
/// and, equivalently, are Kraus operators of the KMS implementation.
OperatorSystem kraus_from_choi(const SuperOperator& a, double rank_rel = kRankRel);

/// The quantum adjacency map built from spanning operators via the block
/// formula above. Requires the stored bases to be orthonormal for the
/// weighted inner product (see OperatorSystem::from_spanning).
SuperOperator adjacency_from_bimodule(const OperatorSystem& s, double tol = 1e-8);

}  // namespace qg
