#pragma once

#include <optional>
#include <utility>

#include "qg/connectivity.hpp"
#include "qg/graph.hpp"

namespace qg {

/// Eigenvalue data of the KMS implementation of the adjacency map, plus the
/// Perron-Frobenius pair at the spectral radius.
struct SpectralData {
  Vector eigenvalues;  // sorted by descending real part, then imaginary part
  bool real_spectrum = false;
  PerronData perron;
};

SpectralData spectrum(const QuantumGraph& g, double tol = kDefaultTol);

/// Perron-Frobenius data of a completely positive map: the spectral radius r
/// (always an eigenvalue, with a positive eigenvector), whether r is simple,
/// and whether the returned positive eigenvector is strictly positive
/// (invertible). For trace-symmetric maps, simple + strictly positive is
/// equivalent to irreducibility; for general CP maps it is only necessary.
PerronData perron_frobenius(const SuperOperator& phi, double tol = kDefaultTol);

struct BipartiteResult {
  bool bipartite = false;
  std::optional<std::pair<AlgebraElement, AlgebraElement>> parts;  // (p1, p2)
  double lemma_residual = 0.0;  // ||Ã R_{p1} - R_{1-p1} Ã||
  double top_eigenvalue = 0.0;
  double bottom_eigenvalue = 0.0;
};

/// Bipartiteness of a connected undirected graph: -λ is in the spectrum of Ã
/// exactly when a bipartition exists; on success the bipartition is extracted
/// from a self-adjoint eigenvector at -λ through its Jordan decomposition.
BipartiteResult is_bipartite(const QuantumGraph& g, double tol = kDefaultTol);

/// Operator norm of the adjacency map on the GNS inner-product space.
double operator_norm_gns(const QuantumGraph& g);

/// Returns d >= 0 with A(1) = d 1 and A*(1) = d 1 (GNS adjoint) when the
/// graph is regular; absent otherwise.
std::optional<double> regularity(const QuantumGraph& g, double tol = kDefaultTol);

}  // namespace qg
