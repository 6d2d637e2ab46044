#pragma once

#include <vector>

#include "qg/space.hpp"

namespace qg {

/// Block subspaces S_ab ⊂ B(C^{n_a}, C^{n_b}) spanned by explicit operators;
/// the edge spaces of a quantum graph in the bimodule picture. ops[a][b][i]
/// is an n_b x n_a matrix mapping block a into block b.
class OperatorSystem {
public:
  OperatorSystem(SpacePtr space,
                 std::vector<std::vector<std::vector<Matrix>>> ops);

  /// Empty system (no spanning operators anywhere).
  static OperatorSystem empty(const SpacePtr& space);

  /// Orthonormalizes every block list under the weighted inner product
  /// <S,T>_ab = Tr(S* rho_b^{-1/2} T rho_a^{-1/2}) (on a tracial single block
  /// (M_n, nTr) this is (1/n) Tr(S* T)), dropping dependent directions.
  static OperatorSystem from_spanning(const SpacePtr& space,
                                      std::vector<std::vector<std::vector<Matrix>>> ops,
                                      double rank_rel = kRankRel);

  const SpacePtr& space() const { return space_; }
  const std::vector<Matrix>& block(int a, int b) const { return ops_[a][b]; }
  int block_dim(int a, int b) const { return static_cast<int>(ops_[a][b].size()); }
  int total_dim() const;

  /// <S,T>_ab as above.
  Cplx inner(int a, int b, const Matrix& s, const Matrix& t) const;
  /// Largest deviation of any block Gram matrix from the identity.
  double gram_residual() const;

  /// All spanning operators embedded as hdim x hdim matrices on H = ⊕ C^{n_a}.
  std::vector<Matrix> embedded() const;

  /// Orthogonal projection (under the plain Hilbert-Schmidt inner product)
  /// onto the span of block (a,b), as an (n_a n_b) x (n_a n_b) matrix over
  /// row-major vectorized operators. Used to compare spans.
  Matrix span_projection(int a, int b) const;

  /// True when S_ab* = S_ba as spans, block-wise, within tol.
  bool adjoint_closed(double tol = kDefaultTol) const;

private:
  SpacePtr space_;
  std::vector<std::vector<std::vector<Matrix>>> ops_;
};

}  // namespace qg
