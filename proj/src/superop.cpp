#include "qg/superop.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "qg/errors.hpp"

namespace qg {

namespace {

void require_same_space(const SuperOperator& a, const SuperOperator& b) {
  if (a.space() != b.space() && !a.space()->same_as(*b.space()))
    throw SpaceMismatch("superoperators live on different quantum spaces");
}

}  // namespace

SuperOperator::SuperOperator(SpacePtr space, Matrix mat)
    : space_(std::move(space)), mat_(std::move(mat)) {
  if (mat_.rows() != space_->dim() || mat_.cols() != space_->dim())
    throw QgError("superoperator matrix has wrong shape");
}

SuperOperator SuperOperator::identity(const SpacePtr& space) {
  return SuperOperator(space, Matrix::Identity(space->dim(), space->dim()));
}

SuperOperator SuperOperator::zero(const SpacePtr& space) {
  return SuperOperator(space, Matrix::Zero(space->dim(), space->dim()));
}

SuperOperator SuperOperator::complete(const SpacePtr& space) {
  const int N = space->dim();
  Vector one = AlgebraElement::identity(space).to_vec();
  Eigen::RowVectorXcd psi_row(N);
  for (int a = 0; a < space->block_count(); ++a) {
    const int n = space->block_size(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        psi_row(space->coord(a, i, j)) = space->rho(a)(j, i);  // psi(e_ij) = rho_ji
  }
  return SuperOperator(space, one * psi_row);
}

AlgebraElement SuperOperator::apply(const AlgebraElement& x) const {
  return AlgebraElement::from_vec(space_, mat_ * x.to_vec());
}

SuperOperator SuperOperator::compose(const SuperOperator& o) const {
  require_same_space(*this, o);
  return SuperOperator(space_, mat_ * o.mat_);
}

SuperOperator SuperOperator::power(int k) const {
  if (k < 0) throw QgError("negative composition power");
  Matrix out = Matrix::Identity(space_->dim(), space_->dim());
  for (int i = 0; i < k; ++i) out = mat_ * out;
  return SuperOperator(space_, std::move(out));
}

SuperOperator SuperOperator::operator+(const SuperOperator& o) const {
  require_same_space(*this, o);
  return SuperOperator(space_, mat_ + o.mat_);
}

SuperOperator SuperOperator::operator-(const SuperOperator& o) const {
  require_same_space(*this, o);
  return SuperOperator(space_, mat_ - o.mat_);
}

SuperOperator SuperOperator::scaled(Cplx c) const { return SuperOperator(space_, c * mat_); }

ChoiMatrix::ChoiMatrix(SpacePtr space, Matrix mat)
    : space_(std::move(space)), mat_(std::move(mat)) {
  const int side = space_->hdim() * space_->hdim();
  if (mat_.rows() != side || mat_.cols() != side)
    throw QgError("Choi matrix has wrong shape");
}

Matrix ChoiMatrix::block(int a, int b) const {
  const int h = space_->hdim();
  const int na = space_->block_size(a);
  const int nb = space_->block_size(b);
  Matrix out(nb * na, nb * na);
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < na; ++c)
      for (int r2 = 0; r2 < nb; ++r2)
        for (int c2 = 0; c2 < na; ++c2)
          out(r * na + c, r2 * na + c2) =
              mat_((space_->h_offset(b) + r) * h + space_->h_offset(a) + c,
                   (space_->h_offset(b) + r2) * h + space_->h_offset(a) + c2);
  return out;
}

ChoiMatrix ChoiMatrix::flip() const {
  const int h = space_->hdim();
  Matrix out(h * h, h * h);
  // kron(x, y^T) -> kron(y, x^T) is W (.)^T W with W the leg swap.
  for (int p = 0; p < h; ++p)
    for (int q = 0; q < h; ++q)
      for (int r = 0; r < h; ++r)
        for (int s = 0; s < h; ++s) out(q * h + p, s * h + r) = mat_(r * h + s, p * h + q);
  return ChoiMatrix(space_, std::move(out));
}

double ChoiMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es((mat_ + Matrix(mat_.adjoint())) / 2.0);
  return es.eigenvalues()(0);
}

double ChoiMatrix::hermiticity_residual() const { return herm_residual(mat_); }

Matrix ChoiMatrix::support() const {
  return support_projection((mat_ + Matrix(mat_.adjoint())) / 2.0);
}

SuperOperator modular_map(const SpacePtr& space, Cplx z) {
  const int N = space->dim();
  Matrix m = Matrix::Zero(N, N);
  const Cplx iz = Cplx(0, 1) * z;
  for (int a = 0; a < space->block_count(); ++a) {
    const int n = space->block_size(a);
    Matrix plus = herm_complex_power(space->rho(a), iz);
    Matrix minus = herm_complex_power(space->rho(a), -iz);
    m.block(space->offset(a), space->offset(a), n * n, n * n) =
        kron(plus, minus.transpose());
  }
  return SuperOperator(space, std::move(m));
}

SuperOperator schur_product(const SuperOperator& a, const SuperOperator& b) {
  require_same_space(a, b);
  const SpacePtr& space = a.space();
  const int N = space->dim();
  Matrix out = Matrix::Zero(N, N);
  // (A • B)(e_ij^a) = Σ_k A(e_ik^a rho_a^{-1}) B(e_kj^a), which is
  // m (A ⊗ B) m* evaluated column by column.
  for (int blk = 0; blk < space->block_count(); ++blk) {
    const int n = space->block_size(blk);
    const Matrix& rinv = space->rho_power(blk, -1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        AlgebraElement acc = AlgebraElement::zero(space);
        for (int k = 0; k < n; ++k) {
          // e_ik rho^{-1}: row i holds row k of rho^{-1}.
          Matrix lm = Matrix::Zero(n, n);
          lm.row(i) = rinv.row(k);
          std::vector<Matrix> lb;
          for (int c = 0; c < space->block_count(); ++c)
            lb.push_back(c == blk ? lm
                                  : Matrix::Zero(space->block_size(c), space->block_size(c)));
          AlgebraElement left(space, std::move(lb));
          AlgebraElement right = AlgebraElement::basis(space, blk, k, j);
          acc = acc + a.apply(left) * b.apply(right);
        }
        out.col(space->coord(blk, i, j)) = acc.to_vec();
      }
  }
  return SuperOperator(space, std::move(out));
}

ChoiMatrix choi(const SuperOperator& a) {
  const SpacePtr& space = a.space();
  const int h = space->hdim();
  Matrix out = Matrix::Zero(h * h, h * h);
  for (int blk = 0; blk < space->block_count(); ++blk) {
    const int n = space->block_size(blk);
    const Matrix& rq = space->rho_power(blk, -0.25);
    const Matrix rq_conj = rq.conjugate();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Matrix e = Matrix::Zero(n, n);
        e(i, j) = 1.0;
        std::vector<Matrix> bl;
        for (int c = 0; c < space->block_count(); ++c)
          bl.push_back(c == blk ? Matrix(rq * e * rq)
                                : Matrix::Zero(space->block_size(c), space->block_size(c)));
        const Matrix first = a.apply(AlgebraElement(space, std::move(bl))).embedded();
        // (rho^{-1/4} e_ji rho^{-1/4})^T = conj(rho^{-1/4}) e_ij conj(rho^{-1/4})
        const Matrix second = rq_conj * e * rq_conj;
        for (int p = 0; p < h; ++p)
          for (int q = 0; q < h; ++q) {
            if (first(p, q) == Cplx(0.0, 0.0)) continue;
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s)
                out(p * h + space->h_offset(blk) + r, q * h + space->h_offset(blk) + s) +=
                    first(p, q) * second(r, s);
          }
      }
  }
  return ChoiMatrix(space, std::move(out));
}

SuperOperator superop_from_choi(const ChoiMatrix& c) {
  const SpacePtr& space = c.space();
  const int N = space->dim();
  Matrix out = Matrix::Zero(N, N);
  // Invert the expansion block pair by block pair: the (b,a) Choi block is
  // (I ⊗ conj(rho_a^{-1/4})) C_phi (I ⊗ conj(rho_a^{-1/4})) where C_phi is the
  // plain Choi block of phi(x) = A_ab(rho^{-1/4} x rho^{-1/4}).
  for (int a = 0; a < space->block_count(); ++a) {
    const int na = space->block_size(a);
    const Matrix rq = space->rho_power(a, 0.25);
    const Matrix rq_conj = rq.conjugate();
    for (int b = 0; b < space->block_count(); ++b) {
      const int nb = space->block_size(b);
      Matrix q = c.block(a, b);
      Matrix undress = kron(Matrix::Identity(nb, nb), rq_conj);
      Matrix cphi = undress * q * undress;
      // C_phi((p,q),(r,s)) = phi(e_qs)(p,r)
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
          for (int p = 0; p < nb; ++p)
            for (int r = 0; r < nb; ++r)
              out(space->coord(b, p, r), space->coord(a, i, j)) +=
                  cphi(p * na + i, r * na + j);
    }
  }
  // out holds phi; A = phi ∘ (x -> rho^{1/4} x rho^{1/4}).
  Matrix dress = rho_sandwich_matrix(*space, 0.25, 0.25);
  return SuperOperator(space, out * dress);
}

SuperOperator kms_implementation(const SuperOperator& a) {
  const SpacePtr& space = a.space();
  Matrix lam = rho_sandwich_matrix(*space, 0.25, 0.25);
  Matrix lam_inv = rho_sandwich_matrix(*space, -0.25, -0.25);
  return SuperOperator(space, lam * a.mat() * lam_inv);
}

SuperOperator from_kms_implementation(const SpacePtr& space, const Matrix& tilde_mat) {
  Matrix lam = rho_sandwich_matrix(*space, 0.25, 0.25);
  Matrix lam_inv = rho_sandwich_matrix(*space, -0.25, -0.25);
  return SuperOperator(space, lam_inv * tilde_mat * lam);
}

SuperOperator adjoint_gns(const SuperOperator& a) {
  const SpacePtr& space = a.space();
  Matrix g = gram_gns(*space);
  Eigen::LLT<Matrix> llt(g);
  return SuperOperator(space, llt.solve(a.mat().adjoint() * g));
}

SuperOperator adjoint_kms(const SuperOperator& a) {
  // Conjugate-transpose in the coordinates of the KMS implementation, where
  // the canonical basis is orthonormal.
  const SpacePtr& space = a.space();
  Matrix tilde = kms_implementation(a).mat();
  return from_kms_implementation(space, tilde.adjoint());
}

SuperOperator transpose(const SuperOperator& a) {
  // A^T(x) = (A*_KMS(x*))*; the star map is x -> x*, whose coordinate action
  // is P conj(.) with P the per-block index swap (i,j) -> (j,i).
  const SpacePtr& space = a.space();
  const int N = space->dim();
  Matrix p = Matrix::Zero(N, N);
  for (int blk = 0; blk < space->block_count(); ++blk) {
    const int n = space->block_size(blk);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(space->coord(blk, i, j), space->coord(blk, j, i)) = 1.0;
  }
  Matrix adj = adjoint_kms(a).mat();
  return SuperOperator(space, p * adj.conjugate() * p);
}

bool is_star_preserving(const SuperOperator& a, double tol) {
  ChoiMatrix c = choi(a);
  return c.hermiticity_residual() <= tol * std::max(1.0, op_norm(c.mat()));
}

bool is_completely_positive(const SuperOperator& a, double tol) {
  ChoiMatrix c = choi(a);
  const double scale = std::max(1.0, op_norm(c.mat()));
  if (c.hermiticity_residual() > tol * scale) return false;
  return c.min_eigenvalue() >= -tol * scale;
}

bool is_kms_symmetric(const SuperOperator& a, double tol) {
  Matrix tilde = kms_implementation(a).mat();
  return herm_residual(tilde) <= tol * std::max(1.0, op_norm(tilde));
}

bool is_gns_symmetric(const SuperOperator& a, double tol) {
  Matrix g = gram_gns(*a.space());
  Matrix ga = g * a.mat();
  return herm_residual(ga) <= tol * std::max(1.0, op_norm(ga));
}

OperatorSystem kraus_from_choi(const SuperOperator& a, double rank_rel) {
  if (!is_completely_positive(a))
    throw NotCompletelyPositive("Kraus extraction needs a completely positive map");
  const SpacePtr& space = a.space();
  ChoiMatrix c = choi(a);
  const int d = space->block_count();

  // Use a global eigenvalue scale so that empty blocks stay empty.
  double top = 0.0;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es((c.mat() + Matrix(c.mat().adjoint())) / 2.0);
    top = std::max(top, es.eigenvalues().cwiseAbs().maxCoeff());
  }

  std::vector<std::vector<std::vector<Matrix>>> ops(d, std::vector<std::vector<Matrix>>(d));
  for (int a_blk = 0; a_blk < d; ++a_blk) {
    const int na = space->block_size(a_blk);
    const Matrix& ra = space->rho_power(a_blk, 0.25);
    for (int b_blk = 0; b_blk < d; ++b_blk) {
      const int nb = space->block_size(b_blk);
      const Matrix& rb = space->rho_power(b_blk, 0.25);
      Matrix q = c.block(a_blk, b_blk);
      Matrix qh = (q + Matrix(q.adjoint())) / 2.0;
      Eigen::SelfAdjointEigenSolver<Matrix> es(qh);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam < rank_rel * std::max(top, 1e-300)) continue;
        Matrix v = unvec(es.eigenvectors().col(k), nb, na);
        ops[a_blk][b_blk].push_back(std::sqrt(lam) * rb * v * ra);
      }
    }
  }
  return OperatorSystem(space, std::move(ops));
}

SuperOperator adjacency_from_bimodule(const OperatorSystem& s, double tol) {
  const double gram_res = s.gram_residual();
  if (gram_res > tol)
    throw BasisNotOrthonormal("spanning operators are not orthonormal, Gram residual " +
                              std::to_string(gram_res));
  const SpacePtr& space = s.space();
  const int N = space->dim();
  const int d = space->block_count();
  Matrix out = Matrix::Zero(N, N);
  for (int a = 0; a < d; ++a) {
    const int na = space->block_size(a);
    const Matrix& ra = space->rho_power(a, 0.25);
    for (int b = 0; b < d; ++b) {
      const int nb = space->block_size(b);
      const Matrix& rb_inv = space->rho_power(b, -0.25);
      for (const Matrix& op : s.block(a, b)) {
        const Matrix lhs = rb_inv * op * ra;  // rho_b^{-1/4} S rho_a^{1/4}
        for (int i = 0; i < na; ++i)
          for (int j = 0; j < na; ++j) {
            // T e_ij T* = T.col(i) (T.col(j))*
            const Matrix img = lhs.col(i) * lhs.col(j).adjoint();
            // contribution of S e_ij S-side to block b coordinates
            for (int p = 0; p < nb; ++p)
              for (int r = 0; r < nb; ++r)
                out(space->coord(b, p, r), space->coord(a, i, j)) += img(p, r);
          }
      }
    }
  }
  return SuperOperator(space, std::move(out));
}

}  // namespace qg
