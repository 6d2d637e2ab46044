#pragma once

#include <cstdint>
#include <optional>

#include "qg/superop.hpp"

namespace qg {

/// Structural flags of a quantum graph with the residual norms that backed
/// each decision. Flags are computed once at validation time.
struct GraphFlags {
  bool real = false;        // *-preserving (equivalently CP for idempotents)
  bool undirected = false;  // KMS-symmetric
  bool gns_symmetric = false;
  bool reflexive = false;   // A • id = id
  bool irreflexive = false; // A • id = 0
  bool tracial = false;

  double idempotent_residual = 0.0;
  double real_residual = 0.0;
  double undirected_residual = 0.0;
  double gns_residual = 0.0;
  double reflexive_residual = 0.0;
  double irreflexive_residual = 0.0;
  double tol = kDefaultTol;
};

/// A quantum graph: a quantum space together with a validated quantum
/// adjacency map (a quantum Schur idempotent, m (A ⊗ A) m* = A).
class QuantumGraph {
public:
  const SpacePtr& space() const { return adjacency_.space(); }
  const SuperOperator& adjacency() const { return adjacency_; }
  const GraphFlags& flags() const { return flags_; }
  /// Matrix of the KMS implementation of the adjacency map (cached).
  const Matrix& kms_matrix() const { return kms_mat_; }

  friend QuantumGraph validate(const SuperOperator& a, double tol);

private:
  QuantumGraph(SuperOperator a, GraphFlags flags, Matrix kms_mat)
      : adjacency_(std::move(a)), flags_(flags), kms_mat_(std::move(kms_mat)) {}

  SuperOperator adjacency_;
  GraphFlags flags_;
  Matrix kms_mat_;
};

/// Checks Schur idempotence and computes all flags; rejects non-idempotents
/// with the residual in the error.
QuantumGraph validate(const SuperOperator& a, double tol = kDefaultTol);

/// Classical graph import: the adjacency matrix of a simple (0/1) graph acts
/// on D_n with the counting measure.
QuantumGraph from_classical(const Eigen::MatrixXd& adj, double tol = kDefaultTol);

QuantumGraph complete_graph(const SpacePtr& space, double tol = kDefaultTol);
QuantumGraph trivial_graph(const SpacePtr& space, double tol = kDefaultTol);

/// Quantum adjacency map of the operator system, validated.
QuantumGraph graph_from_bimodule(const OperatorSystem& s, double tol = 1e-8);

/// Random quantum graph on (M_n, n Tr): spans the operator system by the
/// identity together with d independent GUE matrices, orthonormalized with
/// the identity first under (1/n) Tr(S* T).
QuantumGraph random_qg(int n, int d, std::uint64_t seed, double tol = 1e-8);

/// The spanning operator system used by random_qg (exposed so callers can
/// replay the sampling).
OperatorSystem random_qg_system(int n, int d, std::uint64_t seed);

}  // namespace qg
