#include "qg/operator_system.hpp"

#include <cmath>
#include <string>

#include "qg/errors.hpp"

namespace qg {

OperatorSystem::OperatorSystem(SpacePtr space,
                               std::vector<std::vector<std::vector<Matrix>>> ops)
    : space_(std::move(space)), ops_(std::move(ops)) {
  const int d = space_->block_count();
  if (static_cast<int>(ops_.size()) != d)
    throw QgError("operator system has wrong outer block count");
  for (int a = 0; a < d; ++a) {
    if (static_cast<int>(ops_[a].size()) != d)
      throw QgError("operator system has wrong inner block count");
    for (int b = 0; b < d; ++b)
      for (const Matrix& s : ops_[a][b])
        if (s.rows() != space_->block_size(b) || s.cols() != space_->block_size(a))
          throw QgError("operator in block (" + std::to_string(a) + "," +
                        std::to_string(b) + ") has wrong shape");
  }
}

OperatorSystem OperatorSystem::empty(const SpacePtr& space) {
  const int d = space->block_count();
  std::vector<std::vector<std::vector<Matrix>>> ops(
      d, std::vector<std::vector<Matrix>>(d));
  return OperatorSystem(space, std::move(ops));
}

OperatorSystem OperatorSystem::from_spanning(
    const SpacePtr& space, std::vector<std::vector<std::vector<Matrix>>> ops,
    double rank_rel) {
  OperatorSystem raw(space, std::move(ops));
  const int d = space->block_count();
  std::vector<std::vector<std::vector<Matrix>>> out(
      d, std::vector<std::vector<Matrix>>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      // Gram-Schmidt under the weighted inner product, dropping dependent
      // directions against the largest norm seen so far.
      double scale = 0.0;
      for (const Matrix& s : raw.ops_[a][b]) {
        Matrix r = s;
        for (const Matrix& q : out[a][b]) r -= raw.inner(a, b, q, r) * q;
        const double nrm = std::sqrt(std::abs(raw.inner(a, b, r, r).real()));
        scale = std::max(scale, std::sqrt(std::abs(raw.inner(a, b, s, s).real())));
        if (nrm > rank_rel * std::max(scale, 1.0)) out[a][b].push_back(r / nrm);
      }
    }
  return OperatorSystem(space, std::move(out));
}

int OperatorSystem::total_dim() const {
  int n = 0;
  for (const auto& row : ops_)
    for (const auto& blockList : row) n += static_cast<int>(blockList.size());
  return n;
}

Cplx OperatorSystem::inner(int a, int b, const Matrix& s, const Matrix& t) const {
  const Matrix& wb = space_->rho_power(b, -0.5);
  const Matrix& wa = space_->rho_power(a, -0.5);
  return (s.adjoint() * wb * t * wa).trace();
}

double OperatorSystem::gram_residual() const {
  double res = 0.0;
  const int d = space_->block_count();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int k = block_dim(a, b);
      if (k == 0) continue;
      Matrix g(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = inner(a, b, ops_[a][b][i], ops_[a][b][j]);
      res = std::max(res, op_norm(g - Matrix::Identity(k, k)));
    }
  return res;
}

std::vector<Matrix> OperatorSystem::embedded() const {
  std::vector<Matrix> out;
  const int d = space_->block_count();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (const Matrix& s : ops_[a][b]) {
        Matrix m = Matrix::Zero(space_->hdim(), space_->hdim());
        m.block(space_->h_offset(b), space_->h_offset(a), space_->block_size(b),
                space_->block_size(a)) = s;
        out.push_back(std::move(m));
      }
  return out;
}

Matrix OperatorSystem::span_projection(int a, int b) const {
  const int rows = space_->block_size(b) * space_->block_size(a);
  const auto& blockList = ops_[a][b];
  if (blockList.empty()) return Matrix::Zero(rows, rows);
  Matrix stack(rows, blockList.size());
  for (size_t i = 0; i < blockList.size(); ++i) stack.col(i) = vec(blockList[i]);
  Matrix q = column_span(stack);
  return q * q.adjoint();
}

bool OperatorSystem::adjoint_closed(double tol) const {
  const int d = space_->block_count();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (block_dim(a, b) != block_dim(b, a)) return false;
      // Compare span of adjoints of S_ab with span of S_ba.
      const int rows = space_->block_size(a) * space_->block_size(b);
      if (block_dim(a, b) == 0) continue;
      Matrix stack(rows, block_dim(a, b));
      for (int i = 0; i < block_dim(a, b); ++i)
        stack.col(i) = vec(Matrix(ops_[a][b][i].adjoint()));
      Matrix q = column_span(stack);
      Matrix proj_adj = q * q.adjoint();
      if (op_norm(proj_adj - span_projection(b, a)) > tol * 1.0) return false;
    }
  return true;
}

}  // namespace qg
