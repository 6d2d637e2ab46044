#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qg/graph.hpp"

namespace qg {

enum class Method {
  kAuto,
  kIrreducibility,
  kLaplacian,
  kBurnside,
  kChoiSupport,
  kSpectral,
};

enum class Verdict { kConnected, kDisconnected, kInapplicable };

std::string to_string(Method m);
std::string to_string(Verdict v);

/// Residuals of the five equivalent reducibility conditions of a completely
/// positive map against a candidate projection p:
///   (1) Phi(p) <= C p, (2) Phi(pMp) ⊂ pMp, (3) Phi(xp) = Phi(xp)p,
///   (4) Phi(px) = p Phi(px), (5) Phi(p)(1-p) = 0,
/// plus, for trace-symmetric maps, commutation Phi R_p = R_p Phi.
struct ReducingResiduals {
  double bound = 0.0;      // most negative eigenvalue of C p - Phi(p), clipped at 0
  double corner = 0.0;     // ||Phi L_p R_p - L_p R_p Phi L_p R_p||
  double right = 0.0;      // ||Phi R_p - R_p Phi R_p||
  double left = 0.0;       // ||Phi L_p - L_p Phi L_p||
  double support = 0.0;    // ||Phi(p)(1-p)||
  double commute = 0.0;    // ||Phi R_p - R_p Phi||
  double max_condition() const;
  bool ok(double tol, double scale = 1.0) const;
};

/// Validates all five lemma conditions for a CP map given as a plain matrix
/// in the canonical basis (trace coordinates).
ReducingResiduals validate_reducing(const SpacePtr& space, const Matrix& phi,
                                    const AlgebraElement& p);

/// Reducibility test of a completely positive map. For KMS-symmetric maps the
/// witness is found through the kernel algebra of the KMS implementation; for
/// directed maps the verdict comes from the generated-algebra criterion and
/// the witness from an invariant-subspace search over the Kraus closure. A
/// returned witness p always satisfies Phi(p)(1-p) = 0 for the input map.
struct IrreducibilityResult {
  bool irreducible = false;
  std::optional<AlgebraElement> witness;  // reducing projection, if found
  ReducingResiduals residuals;            // for the witness
};
IrreducibilityResult is_irreducible(const SuperOperator& phi, double tol = kDefaultTol);

/// Orthonormal basis of {y in M : Ã(xy) = Ã(x)y for all x}, the kernel of the
/// gradient y -> [Ã, R_y]. Requires an undirected graph. The span contains 1
/// and is closed under products and adjoints.
std::vector<AlgebraElement> kernel_algebra(const QuantumGraph& g,
                                           double rank_rel = kRankRel);

/// dim ker Δ for Δ = ∇*∇ with ∇(y) = [Ã, R_y]; requires a GNS-symmetric
/// graph. Equals the kernel algebra dimension; 1 exactly when connected.
int laplacian_nullity(const QuantumGraph& g, double rank_rel = kRankRel);

struct BurnsideResult {
  bool generates = false;  // algebra generated by S (with the block units) is all of B(H)
  int closure_dim = 0;
  int full_dim = 0;  // hdim^2
};
BurnsideResult burnside_generates(const OperatorSystem& s, double rank_rel = kRankRel);

/// Support projections of the Choi matrices of the composition powers A^k,
/// k = 1..kmax (kmax defaults to hdim^2; the sequence is cut off early once
/// the running span stabilizes). The graph is disconnected exactly when the
/// supremum projection is not the identity.
struct ChoiSupportResult {
  std::vector<Matrix> supports;  // p_k, hdim^2-sided projections
  std::vector<int> ranks;
  Matrix sup;          // projection onto the joint range
  int sup_rank = 0;
  bool sup_is_identity = false;
};
ChoiSupportResult choi_support_sequence(const QuantumGraph& g, int kmax = 0,
                                        double rank_rel = kRankRel);

/// Graph homomorphism check: f maps the target algebra into the source
/// algebra; its KMS implementation must be a unital *-homomorphism and
/// A_target • (f* A_source f) = f* A_source f must hold, adjoints taken for
/// the KMS inner products. Throws when f-tilde is not a *-homomorphism.
struct HomomorphismCheck {
  bool holds = false;
  bool surjective = false;  // target projections all non-trivial (injective f)
  double identity_residual = 0.0;
  double hom_residual = 0.0;
};
HomomorphismCheck verify_homomorphism(const QuantumGraph& source,
                                      const QuantumGraph& target, const Matrix& f,
                                      double tol = kDefaultTol);

struct MethodResult {
  Method method = Method::kAuto;
  Verdict verdict = Verdict::kInapplicable;
  std::string detail;
  double runtime_ms = 0.0;
};

struct PerronData {
  double r = 0.0;
  std::optional<AlgebraElement> eigenvector;
  bool simple = false;
  bool strictly_positive = false;
  double residual = 0.0;  // ||Phi(x) - r x||
};

struct ConnectivityReport {
  Verdict overall = Verdict::kInapplicable;
  bool agreement = true;
  std::vector<MethodResult> methods;

  std::optional<AlgebraElement> reducing_projection;  // validated witness
  ReducingResiduals reducing_residuals;
  std::optional<int> kernel_dim;
  std::optional<int> nullity;
  std::optional<BurnsideResult> burnside;
  std::optional<ChoiSupportResult> choi_support;
  std::optional<PerronData> perron;
};

/// Decides connectivity (strong connectivity for directed graphs). With
/// cross_check set, every applicable method runs and any disagreement raises
/// MethodDisagreement — that error indicates a library bug, not bad input.
ConnectivityReport connected(const QuantumGraph& g, Method method = Method::kAuto,
                             bool cross_check = false, double tol = kDefaultTol);

/// Minimal central projections of the kernel algebra: pairwise orthogonal
/// projections summing to 1, each commuting with the KMS implementation.
std::vector<AlgebraElement> connected_components(const QuantumGraph& g,
                                                 double tol = kDefaultTol);

}  // namespace qg
