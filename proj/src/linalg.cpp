#include "qg/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace qg {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double herm_residual(const Matrix& m) { return op_norm(m - m.adjoint()); }

Vector vec(const Matrix& m) {
  Vector v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

Matrix unvec(const Vector& v, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

Matrix herm_power(const Matrix& m, double exponent) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector lam = es.eigenvalues();
  Vector powered(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    powered(i) = Cplx(std::pow(std::max(lam(i), 0.0), exponent), 0.0);
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix herm_complex_power(const Matrix& m, Cplx exponent) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector lam = es.eigenvalues();
  Vector powered(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    powered(i) = std::exp(exponent * std::log(Cplx(std::max(lam(i), 0.0), 0.0)));
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix column_span(const Matrix& m, double rank_rel) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sig = svd.singularValues();
  if (sig.size() == 0 || sig(0) <= 0.0) return Matrix(m.rows(), 0);
  int r = 0;
  while (r < sig.size() && sig(r) >= rank_rel * sig(0)) ++r;
  return svd.matrixU().leftCols(r);
}

int rank_of(const Matrix& m, double rank_rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sig = svd.singularValues();
  if (sig.size() == 0 || sig(0) <= 0.0) return 0;
  int r = 0;
  while (r < sig.size() && sig(r) >= rank_rel * sig(0)) ++r;
  return r;
}

Matrix null_space(const Matrix& m, double rank_rel) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  const double top = sig.size() > 0 ? sig(0) : 0.0;
  int r = 0;
  while (r < sig.size() && top > 0.0 && sig(r) >= rank_rel * top) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

Matrix support_projection(const Matrix& psd, double rank_rel) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  const RealVector& lam = es.eigenvalues();
  const double top = lam.size() > 0 ? lam(lam.size() - 1) : 0.0;
  Matrix proj = Matrix::Zero(psd.rows(), psd.cols());
  if (top <= 0.0) return proj;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) >= rank_rel * top) {
      proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
  }
  return proj;
}

std::vector<std::vector<int>> cluster_eigenvalues(const RealVector& sorted_ascending,
                                                  double gap_rel) {
  std::vector<std::vector<int>> clusters;
  const Eigen::Index n = sorted_ascending.size();
  if (n == 0) return clusters;
  const double diameter = sorted_ascending(n - 1) - sorted_ascending(0);
  const double gap = std::max(gap_rel * std::max(diameter, 1.0), 0.0);
  clusters.push_back({0});
  for (Eigen::Index i = 1; i < n; ++i) {
    if (sorted_ascending(i) - sorted_ascending(i - 1) > gap) clusters.push_back({});
    clusters.back().push_back(static_cast<int>(i));
  }
  return clusters;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace qg
