#include "qg/graph.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qg/errors.hpp"

namespace qg {

QuantumGraph validate(const SuperOperator& a, double tol) {
  const SpacePtr& space = a.space();
  const double scale = std::max(1.0, op_norm(a.mat()));

  SuperOperator schur_square = schur_product(a, a);
  const double idem_res = op_norm(schur_square.mat() - a.mat());
  if (idem_res > tol * scale)
    throw NotSchurIdempotent(
        "map is not a quantum Schur idempotent, residual " + std::to_string(idem_res),
        idem_res);

  GraphFlags flags;
  flags.tol = tol;
  flags.idempotent_residual = idem_res;

  ChoiMatrix c = choi(a);
  const double choi_scale = std::max(1.0, op_norm(c.mat()));
  flags.real_residual = c.hermiticity_residual();
  flags.real = flags.real_residual <= tol * choi_scale &&
               c.min_eigenvalue() >= -tol * choi_scale;

  Matrix tilde = kms_implementation(a).mat();
  flags.undirected_residual = herm_residual(tilde);
  flags.undirected = flags.undirected_residual <= tol * scale;

  Matrix ga = gram_gns(*space) * a.mat();
  flags.gns_residual = herm_residual(ga);
  flags.gns_symmetric = flags.gns_residual <= tol * std::max(1.0, op_norm(ga));

  SuperOperator diag = schur_product(a, SuperOperator::identity(space));
  flags.reflexive_residual = op_norm(diag.mat() - Matrix::Identity(space->dim(), space->dim()));
  flags.reflexive = flags.reflexive_residual <= tol * scale;
  flags.irreflexive_residual = op_norm(diag.mat());
  flags.irreflexive = flags.irreflexive_residual <= tol * scale;

  flags.tracial = space->tracial();

  return QuantumGraph(a, flags, std::move(tilde));
}

QuantumGraph from_classical(const Eigen::MatrixXd& adj, double tol) {
  const int n = static_cast<int>(adj.rows());
  if (adj.cols() != n) throw QgError("classical adjacency matrix must be square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj(i, j) != 0.0 && adj(i, j) != 1.0)
        throw NonBinaryEntries("classical adjacency entries must be 0 or 1, found " +
                               std::to_string(adj(i, j)) + " at (" + std::to_string(i) +
                               "," + std::to_string(j) + ")");
  SpacePtr space = QuantumSpace::make(std::vector<int>(n, 1));
  return validate(SuperOperator(space, adj.cast<Cplx>()), tol);
}

QuantumGraph complete_graph(const SpacePtr& space, double tol) {
  return validate(SuperOperator::complete(space), tol);
}

QuantumGraph trivial_graph(const SpacePtr& space, double tol) {
  return validate(SuperOperator::identity(space), tol);
}

QuantumGraph graph_from_bimodule(const OperatorSystem& s, double tol) {
  return validate(adjacency_from_bimodule(s, tol), tol);
}

OperatorSystem random_qg_system(int n, int d, std::uint64_t seed) {
  if (n < 2) throw DimensionOutOfRange("random graph needs n >= 2");
  if (d < 0 || d > n * n - 1)
    throw DimensionOutOfRange("random graph needs 0 <= d <= n^2 - 1, got d = " +
                              std::to_string(d));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto sample_gue = [&]() {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
    return Matrix(((g + Matrix(g.adjoint())) / 2.0));
  };

  // Orthonormalize under <S,T> = (1/n) Tr(S* T), identity first (the identity
  // is already a unit vector for this inner product).
  std::vector<Matrix> basis;
  basis.push_back(Matrix::Identity(n, n));
  auto ip = [&](const Matrix& s, const Matrix& t) {
    return Cplx((s.adjoint() * t).trace()) / static_cast<double>(n);
  };
  while (static_cast<int>(basis.size()) < d + 1) {
    Matrix h = sample_gue();
    for (const Matrix& q : basis) h -= ip(q, h) * q;
    const double nrm = std::sqrt(std::abs(ip(h, h).real()));
    if (nrm < 1e-8) continue;  // dependent draw, resample
    basis.push_back(h / nrm);
  }

  SpacePtr space = QuantumSpace::make({n});
  std::vector<std::vector<std::vector<Matrix>>> ops(1, std::vector<std::vector<Matrix>>(1));
  ops[0][0] = std::move(basis);
  return OperatorSystem(space, std::move(ops));
}

QuantumGraph random_qg(int n, int d, std::uint64_t seed, double tol) {
  return graph_from_bimodule(random_qg_system(n, d, seed), tol);
}

}  // namespace qg
