#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qg {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default absolute tolerance for identity checks on spectral norms.
inline constexpr double kDefaultTol = 1e-9;
// Relative eigenvalue cutoff for rank decisions (support projections, Kraus
// extraction, closure dimensions).
inline constexpr double kRankRel = 1e-9;
// A Hermitian matrix counts as positive definite when its smallest eigenvalue
// exceeds this fraction of the largest.
inline constexpr double kPosDefRel = 1e-10;
// Relative gap (against the spectral diameter) separating eigenvalue clusters.
inline constexpr double kClusterGapRel = 1e-7;
// Strict positivity threshold for Perron-Frobenius eigenvectors.
inline constexpr double kStrictPosRel = 1e-8;

// Kronecker product with row-major index pairing:
//   out((i*rowsB + k), (j*colsB + l)) = A(i,j) * B(k,l),
// so that vec(A X B) = kron(A, B^T) vec(X) for row-major vec.
Matrix kron(const Matrix& a, const Matrix& b);

// Largest singular value.
double op_norm(const Matrix& m);

double herm_residual(const Matrix& m);  // ||M - M*||

// Row-major vec / unvec of a single dense block.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

// Hermitian matrix function through eigendecomposition; f applied to the
// (clamped real) eigenvalues.
Matrix herm_power(const Matrix& m, double exponent);
Matrix herm_complex_power(const Matrix& m, Cplx exponent);  // m^{z}, m > 0

// Orthonormal basis of the column span, keeping singular directions with
// sigma >= rank_rel * sigma_max. Returns an empty (rows x 0) matrix for 0.
Matrix column_span(const Matrix& m, double rank_rel = kRankRel);

int rank_of(const Matrix& m, double rank_rel = kRankRel);

// Null space basis (orthonormal columns) via SVD with a relative threshold.
Matrix null_space(const Matrix& m, double rank_rel = kRankRel);

// Support projection of a Hermitian PSD matrix: orthogonal projection onto
// the span of eigenvectors with eigenvalue >= rank_rel * max eigenvalue.
Matrix support_projection(const Matrix& psd, double rank_rel = kRankRel);

// Eigenvalues of a Hermitian matrix grouped into clusters separated by gaps
// larger than gap_rel * spectral diameter. Returns, per cluster, the list of
// eigenvalue indices (ascending eigenvalue order as given).
std::vector<std::vector<int>> cluster_eigenvalues(const RealVector& sorted_ascending,
                                                  double gap_rel = kClusterGapRel);

// True when |residual| <= tol * max(1, scale).
inline bool within(double residual, double tol, double scale = 1.0) {
  return residual <= tol * std::max(1.0, scale);
}

// FNV-1a hash of a byte string, for input digests in reports.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace qg
