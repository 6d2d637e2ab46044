#include "qg/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qg/errors.hpp"

namespace qg {

namespace {

bool element_strictly_positive(const AlgebraElement& x) {
  const double nrm = x.norm_op();
  if (nrm <= 0.0) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      (x.embedded() + Matrix(x.embedded().adjoint())) / 2.0);
  return es.eigenvalues()(0) >= kStrictPosRel * nrm;
}

PerronData perron_hermitian(const SuperOperator& phi) {
  const SpacePtr& space = phi.space();
  const int N = space->dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es((phi.mat() + Matrix(phi.mat().adjoint())) / 2.0);
  const RealVector& lam = es.eigenvalues();

  PerronData out;
  out.r = lam(N - 1);  // for CP maps the spectral radius is the top eigenvalue
  const double diameter = lam(N - 1) - lam(0);
  const double gap = kClusterGapRel * std::max(diameter, 1.0);

  int first = N - 1;
  while (first > 0 && out.r - lam(first - 1) <= gap) --first;
  out.simple = (N - first) == 1;

  // Projection of 1 onto the top eigenspace: a positive eigenvector (the
  // Cesaro limit of (phi/r)^m applied to 1).
  Matrix proj = Matrix::Zero(N, N);
  for (int i = first; i < N; ++i)
    proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  Vector xv = proj * AlgebraElement::identity(space).to_vec();
  AlgebraElement x = AlgebraElement::from_vec(space, xv);
  x = (x + x.adjoint()).scaled(0.5);
  if (x.norm_l2() < 1e-10) {
    // Fall back to the top eigenvector itself.
    x = AlgebraElement::from_vec(space, es.eigenvectors().col(N - 1));
    AlgebraElement h = (x + x.adjoint()).scaled(0.5);
    if (h.norm_l2() < 1e-10) h = (x - x.adjoint()).scaled(Cplx(0, 0.5));
    x = h;
    Eigen::SelfAdjointEigenSolver<Matrix> ex(x.embedded());
    if (ex.eigenvalues()(x.space()->hdim() - 1) < -ex.eigenvalues()(0)) x = x.scaled(-1.0);
  }
  x = x.scaled(1.0 / x.norm_l2());
  out.eigenvector = x;
  out.strictly_positive = element_strictly_positive(x);
  out.residual = (phi.apply(x) - x.scaled(out.r)).norm_l2();
  return out;
}

PerronData perron_general(const SuperOperator& phi) {
  const SpacePtr& space = phi.space();
  const int N = space->dim();
  Eigen::ComplexEigenSolver<Matrix> es(phi.mat());
  const Vector& lam = es.eigenvalues();

  PerronData out;
  double radius = 0.0;
  for (int i = 0; i < N; ++i) radius = std::max(radius, std::abs(lam(i)));
  out.r = radius;

  double diameter = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) diameter = std::max(diameter, std::abs(lam(i) - lam(j)));
  const double gap = kClusterGapRel * std::max(diameter, 1.0);

  // Eigenvalues near the (real) value r.
  std::vector<int> cluster;
  for (int i = 0; i < N; ++i)
    if (std::abs(lam(i) - Cplx(radius, 0.0)) <= gap) cluster.push_back(i);
  out.simple = cluster.size() == 1;

  // A positive eigenvector exists in the span; try the Hermitian parts of the
  // cluster eigenvectors first, then Cesaro averaging of (phi/r)^m (1).
  auto try_accept = [&](AlgebraElement cand) -> bool {
    if (cand.norm_l2() < 1e-12) return false;
    cand = cand.scaled(1.0 / cand.norm_l2());
    Eigen::SelfAdjointEigenSolver<Matrix> ec(
        (cand.embedded() + Matrix(cand.embedded().adjoint())) / 2.0);
    double lo = ec.eigenvalues()(0), hi = ec.eigenvalues()(space->hdim() - 1);
    if (hi < -lo) {
      cand = cand.scaled(-1.0);
      const double t = lo;
      lo = -hi;
      hi = -t;
    }
    if (-std::min(lo, 0.0) > 1e-7 * std::max(hi, 1e-30)) return false;
    const double res = (phi.apply(cand) - cand.scaled(out.r)).norm_l2();
    if (res > 1e-6 * std::max(1.0, out.r)) return false;
    out.eigenvector = cand;
    out.strictly_positive = element_strictly_positive(cand);
    out.residual = res;
    return true;
  };

  for (int i : cluster) {
    AlgebraElement v = AlgebraElement::from_vec(space, es.eigenvectors().col(i));
    if (try_accept((v + v.adjoint()).scaled(0.5))) return out;
    if (try_accept((v - v.adjoint()).scaled(Cplx(0, 0.5)))) return out;
  }
  if (radius > 0.0) {
    Vector acc = Vector::Zero(N);
    Vector cur = AlgebraElement::identity(space).to_vec();
    for (int m = 0; m < 256; ++m) {
      cur = phi.mat() * cur / radius;
      acc += cur;
      if (cur.norm() > 1e12) break;
    }
    if (try_accept(AlgebraElement::from_vec(space, acc / 256.0))) return out;
  }
  // No certified positive eigenvector; report the best Hermitian candidate.
  if (!cluster.empty()) {
    AlgebraElement v =
        AlgebraElement::from_vec(space, es.eigenvectors().col(cluster.front()));
    AlgebraElement h = (v + v.adjoint()).scaled(0.5);
    if (h.norm_l2() < 1e-12) h = (v - v.adjoint()).scaled(Cplx(0, 0.5));
    if (h.norm_l2() > 0) h = h.scaled(1.0 / h.norm_l2());
    out.eigenvector = h;
    out.strictly_positive = false;
    out.residual = (phi.apply(h) - h.scaled(out.r)).norm_l2();
  }
  return out;
}

}  // namespace

PerronData perron_frobenius(const SuperOperator& phi, double tol) {
  if (!is_completely_positive(phi, tol))
    throw NotCompletelyPositive("Perron-Frobenius data needs a completely positive map");
  if (herm_residual(phi.mat()) <= tol * std::max(1.0, op_norm(phi.mat())))
    return perron_hermitian(phi);
  return perron_general(phi);
}

SpectralData spectrum(const QuantumGraph& g, double tol) {
  const SpacePtr& space = g.space();
  const Matrix& tilde = g.kms_matrix();

  SpectralData out;
  if (g.flags().undirected) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((tilde + Matrix(tilde.adjoint())) / 2.0);
    out.eigenvalues = Vector(es.eigenvalues().reverse().cast<Cplx>());
    out.real_spectrum = true;
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(tilde);
    out.eigenvalues = es.eigenvalues();
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](Cplx a, Cplx b) {
      if (a.real() != b.real()) return a.real() > b.real();
      return a.imag() > b.imag();
    });
    out.real_spectrum = false;
  }
  if (g.flags().real)
    out.perron = perron_frobenius(SuperOperator(space, tilde), tol);
  return out;
}

BipartiteResult is_bipartite(const QuantumGraph& g, double tol) {
  if (!g.flags().undirected)
    throw NotUndirected("bipartiteness needs an undirected graph");
  {
    ConnectivityReport rep = connected(g, Method::kAuto, false, tol);
    if (rep.overall != Verdict::kConnected)
      throw NotConnected("bipartiteness is defined for connected graphs");
  }
  const SpacePtr& space = g.space();
  const Matrix tilde = (g.kms_matrix() + Matrix(g.kms_matrix().adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(tilde);
  const RealVector& lam = es.eigenvalues();
  const int N = space->dim();

  BipartiteResult out;
  out.top_eigenvalue = lam(N - 1);
  out.bottom_eigenvalue = lam(0);
  const double top = lam(N - 1);
  if (top <= tol) return out;  // zero map: not bipartite by convention
  if (std::abs(lam(0) + top) > 1e-8 * top) return out;

  out.bipartite = true;

  // Self-adjoint eigenvector at -λ: among the bottom eigenvectors pick the
  // one with the largest Hermitian part (any choice yields a valid
  // bipartition).
  const double gap = kClusterGapRel * std::max(top - lam(0), 1.0);
  AlgebraElement best = AlgebraElement::zero(space);
  double best_norm = -1.0;
  for (int i = 0; i < N && lam(i) - lam(0) <= gap; ++i) {
    AlgebraElement v = AlgebraElement::from_vec(space, es.eigenvectors().col(i));
    AlgebraElement h = (v + v.adjoint()).scaled(0.5);
    if (h.norm_l2() < 1e-8) h = (v - v.adjoint()).scaled(Cplx(0, 0.5));
    if (h.norm_l2() > best_norm) {
      best_norm = h.norm_l2();
      best = h;
    }
  }

  // Jordan decomposition x = x1 - x2; p1 = support of x1.
  std::vector<Matrix> p1_blocks;
  for (int a = 0; a < space->block_count(); ++a) {
    Eigen::SelfAdjointEigenSolver<Matrix> eb(
        (best.block(a) + Matrix(best.block(a).adjoint())) / 2.0);
    Matrix p = Matrix::Zero(space->block_size(a), space->block_size(a));
    for (Eigen::Index i = 0; i < eb.eigenvalues().size(); ++i)
      if (eb.eigenvalues()(i) > kStrictPosRel * best.norm_op())
        p += eb.eigenvectors().col(i) * eb.eigenvectors().col(i).adjoint();
    p1_blocks.push_back(std::move(p));
  }
  AlgebraElement p1(space, std::move(p1_blocks));
  AlgebraElement p2 = AlgebraElement::identity(space) - p1;

  Matrix rp1 = right_mult_matrix(p1);
  Matrix rp2 = right_mult_matrix(p2);
  out.lemma_residual = op_norm(tilde * rp1 - rp2 * tilde);
  out.parts = {p1, p2};
  return out;
}

double operator_norm_gns(const QuantumGraph& g) {
  Matrix gram = gram_gns(*g.space());
  Eigen::LLT<Matrix> llt(gram);
  Matrix l = llt.matrixL();
  // Norm of L* A L^{-*} (change to an orthonormal GNS basis).
  Matrix transformed = l.adjoint() * g.adjacency().mat() *
                       l.adjoint().triangularView<Eigen::Upper>().solve(
                           Matrix::Identity(gram.rows(), gram.cols()));
  return op_norm(transformed);
}

std::optional<double> regularity(const QuantumGraph& g, double tol) {
  const SpacePtr& space = g.space();
  AlgebraElement one = AlgebraElement::identity(space);
  AlgebraElement a_one = g.adjacency().apply(one);
  const Cplx d_raw = Cplx(one.to_vec().adjoint() * a_one.to_vec()) /
                     (one.norm_l2() * one.norm_l2());
  const double d = d_raw.real();
  const double scale = std::max(1.0, op_norm(g.adjacency().mat()));
  if (std::abs(d_raw.imag()) > tol * scale) return std::nullopt;
  if (d < -tol * scale) return std::nullopt;
  if ((a_one - one.scaled(d)).norm_op() > tol * scale) return std::nullopt;
  AlgebraElement astar_one = adjoint_gns(g.adjacency()).apply(one);
  if ((astar_one - one.scaled(d)).norm_op() > tol * scale) return std::nullopt;
  return d;
}

}  // namespace qg
