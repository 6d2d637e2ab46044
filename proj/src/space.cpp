#include "qg/space.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "qg/errors.hpp"

namespace qg {

namespace {

const std::vector<double> kPowerSlots = {1.0, -1.0, 0.5, -0.5, 0.25, -0.25};

int power_slot(double s) {
  for (size_t k = 0; k < kPowerSlots.size(); ++k)
    if (kPowerSlots[k] == s) return static_cast<int>(k);
  throw QgError("rho_power: unsupported exponent " + std::to_string(s));
}

}  // namespace

SpacePtr QuantumSpace::make(std::vector<int> blocks, std::vector<Matrix> rho,
                            bool normalize, double tol) {
  if (blocks.empty()) throw QgError("quantum space needs at least one block");
  for (int n : blocks)
    if (n < 1) throw QgError("block sizes must be >= 1");

  auto space = std::shared_ptr<QuantumSpace>(new QuantumSpace());
  space->blocks_ = blocks;
  const int d = static_cast<int>(blocks.size());

  if (rho.empty()) {
    rho.reserve(d);
    for (int a = 0; a < d; ++a)
      rho.push_back(static_cast<double>(blocks[a]) * Matrix::Identity(blocks[a], blocks[a]));
  }
  if (static_cast<int>(rho.size()) != d)
    throw QgError("density list length does not match block count");

  space->offsets_.resize(d);
  space->h_offsets_.resize(d);
  int off = 0, hoff = 0;
  for (int a = 0; a < d; ++a) {
    space->offsets_[a] = off;
    space->h_offsets_[a] = hoff;
    off += blocks[a] * blocks[a];
    hoff += blocks[a];
  }
  space->dim_ = off;
  space->hdim_ = hoff;

  space->rho_.resize(d);
  space->rho_powers_.resize(d);
  space->tracial_ = true;
  space->psi_identity_ = 0.0;
  for (int a = 0; a < d; ++a) {
    const int n = blocks[a];
    Matrix r = rho[a];
    if (r.rows() != n || r.cols() != n)
      throw QgError("density for block " + std::to_string(a) + " has wrong shape");
    if (herm_residual(r) > tol * std::max(1.0, op_norm(r)))
      throw NonPositiveDensity("density for block " + std::to_string(a) +
                               " is not Hermitian");
    r = (r + Matrix(r.adjoint())) / 2.0;

    Eigen::SelfAdjointEigenSolver<Matrix> es(r);
    const double lam_min = es.eigenvalues()(0);
    const double lam_max = es.eigenvalues()(n - 1);
    if (lam_max <= 0.0 || lam_min <= kPosDefRel * lam_max)
      throw NonPositiveDensity("density for block " + std::to_string(a) +
                               " is not positive definite");

    double trace_inv = 0.0;
    for (int i = 0; i < n; ++i) trace_inv += 1.0 / es.eigenvalues()(i);
    if (normalize) {
      r *= trace_inv;
    } else if (std::abs(trace_inv - 1.0) > tol) {
      throw OneFormViolation("block " + std::to_string(a) + ": Tr(rho^{-1}) = " +
                             std::to_string(trace_inv) + ", expected 1");
    }

    space->rho_[a] = r;
    space->rho_powers_[a].resize(kPowerSlots.size());
    for (size_t k = 0; k < kPowerSlots.size(); ++k)
      space->rho_powers_[a][k] = herm_power(r, kPowerSlots[k]);

    const double mean = r.trace().real() / n;
    if (op_norm(r - mean * Matrix::Identity(n, n)) > tol * std::max(1.0, op_norm(r)))
      space->tracial_ = false;
    space->psi_identity_ += r.trace().real();
  }
  return space;
}

const Matrix& QuantumSpace::rho_power(int a, double s) const {
  return rho_powers_[a][power_slot(s)];
}

bool QuantumSpace::same_as(const QuantumSpace& other, double tol) const {
  if (blocks_ != other.blocks_) return false;
  for (int a = 0; a < block_count(); ++a)
    if (op_norm(rho_[a] - other.rho_[a]) > tol * std::max(1.0, op_norm(rho_[a])))
      return false;
  return true;
}

AlgebraElement::AlgebraElement(SpacePtr space, std::vector<Matrix> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != space_->block_count())
    throw QgError("element has wrong number of blocks");
  for (int a = 0; a < space_->block_count(); ++a)
    if (blocks_[a].rows() != space_->block_size(a) ||
        blocks_[a].cols() != space_->block_size(a))
      throw QgError("element block " + std::to_string(a) + " has wrong shape");
}

AlgebraElement AlgebraElement::zero(const SpacePtr& space) {
  std::vector<Matrix> b;
  for (int a = 0; a < space->block_count(); ++a)
    b.push_back(Matrix::Zero(space->block_size(a), space->block_size(a)));
  return AlgebraElement(space, std::move(b));
}

AlgebraElement AlgebraElement::identity(const SpacePtr& space) {
  std::vector<Matrix> b;
  for (int a = 0; a < space->block_count(); ++a)
    b.push_back(Matrix::Identity(space->block_size(a), space->block_size(a)));
  return AlgebraElement(space, std::move(b));
}

AlgebraElement AlgebraElement::basis(const SpacePtr& space, int a, int i, int j) {
  AlgebraElement e = zero(space);
  e.blocks_[a](i, j) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::from_vec(const SpacePtr& space, const Vector& coords) {
  if (coords.size() != space->dim()) throw QgError("coordinate vector has wrong length");
  std::vector<Matrix> b;
  for (int a = 0; a < space->block_count(); ++a) {
    const int n = space->block_size(a);
    b.push_back(unvec(coords.segment(space->offset(a), n * n), n, n));
  }
  return AlgebraElement(space, std::move(b));
}

AlgebraElement AlgebraElement::from_embedded(const SpacePtr& space, const Matrix& m) {
  if (m.rows() != space->hdim() || m.cols() != space->hdim())
    throw QgError("embedded matrix has wrong shape");
  std::vector<Matrix> b;
  for (int a = 0; a < space->block_count(); ++a) {
    const int n = space->block_size(a);
    b.push_back(m.block(space->h_offset(a), space->h_offset(a), n, n));
  }
  return AlgebraElement(space, std::move(b));
}

Vector AlgebraElement::to_vec() const {
  Vector v(space_->dim());
  for (int a = 0; a < space_->block_count(); ++a) {
    const int n = space_->block_size(a);
    v.segment(space_->offset(a), n * n) = vec(blocks_[a]);
  }
  return v;
}

Matrix AlgebraElement::embedded() const {
  Matrix m = Matrix::Zero(space_->hdim(), space_->hdim());
  for (int a = 0; a < space_->block_count(); ++a) {
    const int n = space_->block_size(a);
    m.block(space_->h_offset(a), space_->h_offset(a), n, n) = blocks_[a];
  }
  return m;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> b;
  for (const auto& x : blocks_) b.push_back(x.adjoint());
  return AlgebraElement(space_, std::move(b));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  std::vector<Matrix> b;
  for (size_t a = 0; a < blocks_.size(); ++a) b.push_back(blocks_[a] + o.blocks_[a]);
  return AlgebraElement(space_, std::move(b));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  std::vector<Matrix> b;
  for (size_t a = 0; a < blocks_.size(); ++a) b.push_back(blocks_[a] - o.blocks_[a]);
  return AlgebraElement(space_, std::move(b));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  std::vector<Matrix> b;
  for (size_t a = 0; a < blocks_.size(); ++a) b.push_back(blocks_[a] * o.blocks_[a]);
  return AlgebraElement(space_, std::move(b));
}

AlgebraElement AlgebraElement::scaled(Cplx c) const {
  std::vector<Matrix> b;
  for (const auto& x : blocks_) b.push_back(c * x);
  return AlgebraElement(space_, std::move(b));
}

double AlgebraElement::norm_op() const {
  double n = 0.0;
  for (const auto& x : blocks_) n = std::max(n, op_norm(x));
  return n;
}

double AlgebraElement::norm_l2() const {
  double s = 0.0;
  for (const auto& x : blocks_) s += x.squaredNorm();
  return std::sqrt(s);
}

bool AlgebraElement::is_hermitian(double tol) const {
  for (const auto& x : blocks_)
    if (herm_residual(x) > tol * std::max(1.0, op_norm(x))) return false;
  return true;
}

bool AlgebraElement::is_projection(double tol) const {
  if (!is_hermitian(tol)) return false;
  for (const auto& x : blocks_)
    if (op_norm(x * x - x) > tol * std::max(1.0, op_norm(x))) return false;
  return true;
}

bool AlgebraElement::is_nontrivial_projection(double tol) const {
  if (!is_projection(tol)) return false;
  const double n = norm_op();
  if (n <= tol) return false;
  return (*this - identity(space_)).norm_op() > tol;
}

Cplx functional(const AlgebraElement& x) {
  Cplx s = 0.0;
  for (int a = 0; a < x.space()->block_count(); ++a)
    s += (x.space()->rho(a) * x.block(a)).trace();
  return s;
}

Matrix gram_gns(const QuantumSpace& space) {
  // <e_ij^a, e_kl^b> = delta_ab delta_ik (rho_a)_{lj}
  const int N = space.dim();
  Matrix g = Matrix::Zero(N, N);
  for (int a = 0; a < space.block_count(); ++a) {
    const int n = space.block_size(a);
    const Matrix& r = space.rho(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          g(space.coord(a, i, j), space.coord(a, i, l)) = r(l, j);
  }
  return g;
}

Matrix gram_kms(const QuantumSpace& space) {
  // <e_ij^a, e_kl^b>_KMS = delta_ab (rho^{1/2})_{ik} (rho^{1/2})_{lj}
  const int N = space.dim();
  Matrix g = Matrix::Zero(N, N);
  for (int a = 0; a < space.block_count(); ++a) {
    const int n = space.block_size(a);
    const Matrix& rh = space.rho_power(a, 0.5);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            g(space.coord(a, i, j), space.coord(a, k, l)) = rh(i, k) * rh(l, j);
  }
  return g;
}

Matrix mult_map(const QuantumSpace& space) {
  const int N = space.dim();
  Matrix m = Matrix::Zero(N, N * N);
  // m(e_ij^a ⊗ e_kl^b) = delta_ab delta_jk e_il^a
  for (int a = 0; a < space.block_count(); ++a) {
    const int n = space.block_size(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const int left = space.coord(a, i, j);
          const int right = space.coord(a, j, l);
          m(space.coord(a, i, l), left * N + right) += 1.0;
        }
  }
  return m;
}

Matrix mult_adjoint(const QuantumSpace& space) {
  const int N = space.dim();
  Matrix ms = Matrix::Zero(N * N, N);
  for (int a = 0; a < space.block_count(); ++a) {
    const int n = space.block_size(a);
    const Matrix& rinv = space.rho_power(a, -1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int col = space.coord(a, i, j);
        // m*(e_ij^a) = Σ_k (e_ik^a rho_a^{-1}) ⊗ e_kj^a; the left factor has
        // row i equal to row k of rho_a^{-1}.
        for (int k = 0; k < n; ++k)
          for (int q = 0; q < n; ++q) {
            const int left = space.coord(a, i, q);
            const int right = space.coord(a, k, j);
            ms(left * N + right, col) += rinv(k, q);
          }
      }
  }
  return ms;
}

Matrix sandwich_matrix(const AlgebraElement& left, const AlgebraElement& right) {
  const auto& space = *left.space();
  const int N = space.dim();
  Matrix m = Matrix::Zero(N, N);
  for (int a = 0; a < space.block_count(); ++a) {
    const int n = space.block_size(a);
    m.block(space.offset(a), space.offset(a), n * n, n * n) =
        kron(left.block(a), right.block(a).transpose());
  }
  return m;
}

Matrix left_mult_matrix(const AlgebraElement& x) {
  return sandwich_matrix(x, AlgebraElement::identity(x.space()));
}

Matrix right_mult_matrix(const AlgebraElement& x) {
  return sandwich_matrix(AlgebraElement::identity(x.space()), x);
}

Matrix rho_sandwich_matrix(const QuantumSpace& space, double s, double t) {
  const int N = space.dim();
  Matrix m = Matrix::Zero(N, N);
  for (int a = 0; a < space.block_count(); ++a) {
    const int n = space.block_size(a);
    m.block(space.offset(a), space.offset(a), n * n, n * n) =
        kron(space.rho_power(a, s), space.rho_power(a, t).transpose());
  }
  return m;
}

}  // namespace qg
