#include "qg/connectivity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "qg/errors.hpp"
#include "qg/spectral.hpp"

namespace qg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Matrix of y -> [T, R_y] as a map from M (N coords) into B(L^2 M) (N^2
// coords), exploiting the sparsity of right multiplications by matrix units.
Matrix gradient_matrix(const QuantumSpace& space, const Matrix& t) {
  const int N = space.dim();
  Matrix out = Matrix::Zero(N * N, N);
  for (int b = 0; b < space.block_count(); ++b) {
    const int n = space.block_size(b);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        Matrix comm = Matrix::Zero(N, N);
        // T R_{e_kl}: column (b,i,k) equals column (b,i,l) of T.
        for (int i = 0; i < n; ++i)
          comm.col(space.coord(b, i, k)) += t.col(space.coord(b, i, l));
        // R_{e_kl} T: row (b,i,l) equals row (b,i,k) of T.
        for (int i = 0; i < n; ++i)
          comm.row(space.coord(b, i, l)) -= t.row(space.coord(b, i, k));
        out.col(space.coord(b, k, l)) = vec(comm);
      }
  }
  return out;
}

// Orthogonal projection onto rho^{s} (range of q), block by block. Transfers
// reducing projections between a map and its KMS implementation.
AlgebraElement dress_projection(const SpacePtr& space, const AlgebraElement& q, double s) {
  std::vector<Matrix> blocks;
  for (int a = 0; a < space->block_count(); ++a) {
    const int n = space->block_size(a);
    Matrix range = column_span(q.block(a), 0.5);  // eigenvalues of q are 0/1
    if (range.cols() == 0) {
      blocks.push_back(Matrix::Zero(n, n));
      continue;
    }
    Matrix dressed = column_span(Matrix(space->rho_power(a, s) * range));
    blocks.push_back(dressed * dressed.adjoint());
  }
  return AlgebraElement(space, std::move(blocks));
}

// Spectral projection of a Hermitian element of M onto the eigenvalue
// clusters below the widest spectral gap (or a chosen split).
struct BlockEig {
  double lambda;
  int block;
  Vector vec;
};

std::vector<BlockEig> element_eigensystem(const AlgebraElement& h) {
  std::vector<BlockEig> eigs;
  const auto& space = *h.space();
  for (int a = 0; a < space.block_count(); ++a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        (h.block(a) + Matrix(h.block(a).adjoint())) / 2.0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      eigs.push_back({es.eigenvalues()(i), a, es.eigenvectors().col(i)});
  }
  std::sort(eigs.begin(), eigs.end(),
            [](const BlockEig& x, const BlockEig& y) { return x.lambda < y.lambda; });
  return eigs;
}

AlgebraElement spectral_projection(const SpacePtr& space, const std::vector<BlockEig>& eigs,
                                   int count_from_bottom) {
  std::vector<Matrix> blocks;
  for (int a = 0; a < space->block_count(); ++a)
    blocks.push_back(Matrix::Zero(space->block_size(a), space->block_size(a)));
  for (int i = 0; i < count_from_bottom; ++i)
    blocks[eigs[i].block] += eigs[i].vec * eigs[i].vec.adjoint();
  return AlgebraElement(space, std::move(blocks));
}

// Candidate reducing projections from a kernel-algebra element: symmetrize,
// strip the 1-component, take spectral projections at the cluster gaps.
std::vector<AlgebraElement> projection_candidates(const SpacePtr& space,
                                                  const AlgebraElement& y, double tol) {
  std::vector<AlgebraElement> out;
  AlgebraElement one = AlgebraElement::identity(space);
  const double n2 = one.norm_l2() * one.norm_l2();

  auto strip_one = [&](const AlgebraElement& x) {
    Cplx c = Cplx(one.to_vec().adjoint() * x.to_vec()) / n2;
    return x - one.scaled(c);
  };

  AlgebraElement y0 = strip_one(y);
  AlgebraElement herm = (y0 + y0.adjoint()).scaled(0.5);
  AlgebraElement anti = (y0 - y0.adjoint()).scaled(Cplx(0, 0.5));
  for (const AlgebraElement* h : {&herm, &anti}) {
    if (h->norm_l2() <= tol * std::max(1.0, y.norm_l2())) continue;
    auto eigs = element_eigensystem(*h);
    const int total = static_cast<int>(eigs.size());
    if (total < 2) continue;
    const double diameter = eigs.back().lambda - eigs.front().lambda;
    if (diameter <= 0.0) continue;
    // Splits ordered by gap size, widest first.
    std::vector<int> splits;
    for (int i = 1; i < total; ++i)
      if (eigs[i].lambda - eigs[i - 1].lambda > kClusterGapRel * diameter)
        splits.push_back(i);
    std::sort(splits.begin(), splits.end(), [&](int i, int j) {
      return eigs[i].lambda - eigs[i - 1].lambda > eigs[j].lambda - eigs[j - 1].lambda;
    });
    for (int s : splits) out.push_back(spectral_projection(space, eigs, s));
  }
  return out;
}

// Kernel columns sorted so that elements far from the span of 1 come first.
std::vector<AlgebraElement> kernel_elements_for_extraction(const SpacePtr& space,
                                                           const Matrix& null_basis) {
  std::vector<AlgebraElement> out;
  Vector one = AlgebraElement::identity(space).to_vec();
  const double n2 = one.squaredNorm();
  std::vector<std::pair<double, int>> order;
  for (int c = 0; c < null_basis.cols(); ++c) {
    const Cplx coeff = Cplx(one.adjoint() * null_basis.col(c)) / n2;
    order.push_back({(null_basis.col(c) - coeff * one).norm(), c});
  }
  std::sort(order.begin(), order.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  for (const auto& [score, c] : order)
    out.push_back(AlgebraElement::from_vec(space, null_basis.col(c)));
  return out;
}

struct KernelData {
  Matrix basis;  // N x k, orthonormal columns
  int dim = 0;
};

KernelData kernel_of_gradient(const QuantumSpace& space, const Matrix& tilde,
                              double rank_rel) {
  Matrix grad = gradient_matrix(space, tilde);
  Matrix null = null_space(grad, rank_rel);
  return {null, static_cast<int>(null.cols())};
}

// Finds a projection q in M with [tilde, R_q] = 0 from the kernel algebra of
// a trace-symmetric map; validated as a reducing projection of `tilde`.
std::optional<std::pair<AlgebraElement, ReducingResiduals>> reducing_from_kernel(
    const SpacePtr& space, const Matrix& tilde, const Matrix& null_basis, double tol) {
  const double scale = std::max(1.0, op_norm(tilde));
  for (const AlgebraElement& y : kernel_elements_for_extraction(space, null_basis)) {
    for (const AlgebraElement& p : projection_candidates(space, y, tol)) {
      if (!p.is_nontrivial_projection(1e-7)) continue;
      ReducingResiduals res = validate_reducing(space, tilde, p);
      if (res.ok(tol * 10.0, scale)) return std::make_pair(p, res);
    }
  }
  return std::nullopt;
}

// Closure of a list of embedded operators (plus the block units) under
// multiplication; returns the dimension and an orthonormal basis.
struct ClosureData {
  int dim = 0;
  std::vector<Matrix> basis;  // hdim x hdim, Frobenius-orthonormal
};

ClosureData algebra_closure(const SpacePtr& space, std::vector<Matrix> gens,
                            double rank_rel) {
  const int h = space->hdim();
  // Adjoin the units of the commutant blocks (unitalization).
  for (int a = 0; a < space->block_count(); ++a) {
    Matrix unit = Matrix::Zero(h, h);
    for (int i = 0; i < space->block_size(a); ++i)
      unit(space->h_offset(a) + i, space->h_offset(a) + i) = 1.0;
    gens.push_back(std::move(unit));
  }
  for (Matrix& g : gens) {
    const double nrm = g.norm();
    if (nrm > 0) g /= nrm;
  }

  auto orthonormalize = [&](const std::vector<Matrix>& mats) {
    Matrix stack(h * h, mats.size());
    for (size_t i = 0; i < mats.size(); ++i) stack.col(i) = vec(mats[i]);
    Matrix q = column_span(stack, rank_rel);
    std::vector<Matrix> basis;
    for (int c = 0; c < q.cols(); ++c) basis.push_back(unvec(q.col(c), h, h));
    return basis;
  };

  std::vector<Matrix> basis = orthonormalize(gens);
  while (true) {
    const int dim = static_cast<int>(basis.size());
    if (dim >= h * h) break;
    std::vector<Matrix> extended = basis;
    for (const Matrix& x : basis)
      for (const Matrix& y : basis) {
        Matrix prod = x * y;
        const double nrm = prod.norm();
        if (nrm > 1e-14) extended.push_back(prod / nrm);
      }
    std::vector<Matrix> next = orthonormalize(extended);
    if (static_cast<int>(next.size()) == dim) break;
    basis = std::move(next);
  }
  return {static_cast<int>(basis.size()), std::move(basis)};
}

// Invariant-subspace search for a proper closure: orbits of basis vectors and
// of eigenvectors of pseudo-random closure elements. Returns a projection in
// M when one is found.
std::optional<AlgebraElement> invariant_projection(const SpacePtr& space,
                                                   const ClosureData& closure) {
  const int h = space->hdim();
  std::vector<Vector> seeds;
  for (int i = 0; i < h; ++i) {
    Vector e = Vector::Zero(h);
    e(i) = 1.0;
    seeds.push_back(e);
  }
  std::mt19937_64 rng(0x51c3a9u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    Matrix combo = Matrix::Zero(h, h);
    for (const Matrix& w : closure.basis) combo += Cplx(gauss(rng), gauss(rng)) * w;
    Eigen::ComplexEigenSolver<Matrix> es(combo);
    for (int i = 0; i < h; ++i) seeds.push_back(es.eigenvectors().col(i));
  }

  for (const Vector& v : seeds) {
    if (v.norm() < 1e-12) continue;
    Matrix orbit(h, closure.basis.size());
    for (size_t i = 0; i < closure.basis.size(); ++i) orbit.col(i) = closure.basis[i] * v;
    Matrix q = column_span(orbit);
    if (q.cols() == 0 || q.cols() >= h) continue;
    Matrix proj = q * q.adjoint();
    AlgebraElement p = AlgebraElement::from_embedded(space, proj);
    // The projection must be block diagonal (an element of M), which holds
    // when the orbit is an invariant subspace of the closure.
    if (op_norm(p.embedded() - proj) > 1e-8) continue;
    if (!p.is_nontrivial_projection(1e-7)) continue;
    return p;
  }
  return std::nullopt;
}

Verdict verdict_of(bool connected_flag) {
  return connected_flag ? Verdict::kConnected : Verdict::kDisconnected;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kAuto: return "auto";
    case Method::kIrreducibility: return "irreducibility";
    case Method::kLaplacian: return "laplacian";
    case Method::kBurnside: return "burnside";
    case Method::kChoiSupport: return "choi-support";
    case Method::kSpectral: return "spectral";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kConnected: return "connected";
    case Verdict::kDisconnected: return "disconnected";
    case Verdict::kInapplicable: return "inapplicable";
  }
  return "?";
}

double ReducingResiduals::max_condition() const {
  return std::max({bound, corner, right, left, support});
}

bool ReducingResiduals::ok(double tol, double scale) const {
  return max_condition() <= tol * std::max(1.0, scale);
}

ReducingResiduals validate_reducing(const SpacePtr& space, const Matrix& phi,
                                    const AlgebraElement& p) {
  ReducingResiduals res;
  Matrix lp = left_mult_matrix(p);
  Matrix rp = right_mult_matrix(p);
  Matrix corner = lp * rp;

  AlgebraElement phi_p = AlgebraElement::from_vec(space, phi * p.to_vec());
  const double c = phi_p.norm_op();
  Matrix gap = c * p.embedded() - phi_p.embedded();
  Eigen::SelfAdjointEigenSolver<Matrix> es((gap + Matrix(gap.adjoint())) / 2.0);
  res.bound = std::max(0.0, -es.eigenvalues()(0));

  res.corner = op_norm(phi * corner - corner * phi * corner);
  res.right = op_norm(phi * rp - rp * phi * rp);
  res.left = op_norm(phi * lp - lp * phi * lp);

  AlgebraElement one_minus = AlgebraElement::identity(space) - p;
  res.support = (phi_p * one_minus).norm_op();
  res.commute = op_norm(phi * rp - rp * phi);
  return res;
}

IrreducibilityResult is_irreducible(const SuperOperator& phi, double tol) {
  if (!is_completely_positive(phi, tol))
    throw NotCompletelyPositive("irreducibility is defined for completely positive maps");
  const SpacePtr& space = phi.space();
  Matrix tilde = kms_implementation(phi).mat();

  IrreducibilityResult out;
  if (herm_residual(tilde) <= tol * std::max(1.0, op_norm(tilde))) {
    KernelData kd = kernel_of_gradient(*space, tilde, kRankRel);
    if (kd.dim <= 1) {
      out.irreducible = true;
      return out;
    }
    out.irreducible = false;
    if (auto found = reducing_from_kernel(space, tilde, kd.basis, tol)) {
      // Transfer the witness from the KMS implementation back to phi.
      AlgebraElement p = dress_projection(space, found->first, -0.25);
      out.witness = p;
      out.residuals = validate_reducing(space, phi.mat(), p);
    }
    return out;
  }

  // Directed case: the verdict comes from the generated algebra of the Kraus
  // closure; the projection search only certifies it.
  OperatorSystem kraus = kraus_from_choi(phi);
  ClosureData closure = algebra_closure(space, kraus.embedded(), kRankRel);
  out.irreducible = closure.dim == space->hdim() * space->hdim();
  if (!out.irreducible) {
    if (auto q = invariant_projection(space, closure)) {
      // q reduces the KMS implementation; dress it for phi itself.
      AlgebraElement p = dress_projection(space, *q, -0.25);
      ReducingResiduals res = validate_reducing(space, phi.mat(), p);
      if (res.ok(tol * 100.0, op_norm(phi.mat()))) {
        out.witness = p;
        out.residuals = res;
      }
    }
  }
  return out;
}

std::vector<AlgebraElement> kernel_algebra(const QuantumGraph& g, double rank_rel) {
  if (!g.flags().undirected)
    throw NotUndirected("kernel algebra needs an undirected (KMS-symmetric) graph");
  KernelData kd = kernel_of_gradient(*g.space(), g.kms_matrix(), rank_rel);
  std::vector<AlgebraElement> out;
  for (int c = 0; c < kd.basis.cols(); ++c)
    out.push_back(AlgebraElement::from_vec(g.space(), kd.basis.col(c)));
  return out;
}

int laplacian_nullity(const QuantumGraph& g, double rank_rel) {
  if (!g.flags().gns_symmetric)
    throw NotGnsSymmetric("the graph Laplacian needs a GNS-symmetric adjacency map");
  Matrix grad = gradient_matrix(*g.space(), g.kms_matrix());
  return g.space()->dim() - rank_of(grad, rank_rel);
}

BurnsideResult burnside_generates(const OperatorSystem& s, double rank_rel) {
  ClosureData closure = algebra_closure(s.space(), s.embedded(), rank_rel);
  BurnsideResult out;
  out.closure_dim = closure.dim;
  out.full_dim = s.space()->hdim() * s.space()->hdim();
  out.generates = closure.dim == out.full_dim;
  return out;
}

ChoiSupportResult choi_support_sequence(const QuantumGraph& g, int kmax, double rank_rel) {
  const SpacePtr& space = g.space();
  const int h = space->hdim();
  if (kmax <= 0) kmax = h * h;

  ChoiSupportResult out;
  // Seed the joint range with the support of Choi(id), the relation of the
  // commutant blocks; this is the same unitalization the generated-algebra
  // criterion performs, and is absorbed by p_1 for reflexive graphs.
  Matrix sum = choi(SuperOperator::identity(space)).support();
  Matrix power = Matrix::Identity(space->dim(), space->dim());
  int prev_rank = -1;
  for (int k = 1; k <= kmax; ++k) {
    power = g.adjacency().mat() * power;
    ChoiMatrix c = choi(SuperOperator(space, power));
    Matrix p = c.support();
    out.ranks.push_back(rank_of(p, 0.5));
    sum += p;
    Matrix sup = support_projection(sum, rank_rel);
    const int r = rank_of(sup, 0.5);
    out.supports.push_back(std::move(p));
    out.sup = std::move(sup);
    out.sup_rank = r;
    if (r == h * h || r == prev_rank) break;  // the running span has stabilized
    prev_rank = r;
  }
  out.sup_is_identity =
      op_norm(out.sup - Matrix::Identity(h * h, h * h)) <= 1e-8 * 1.0;
  return out;
}

HomomorphismCheck verify_homomorphism(const QuantumGraph& source,
                                      const QuantumGraph& target, const Matrix& f,
                                      double tol) {
  const SpacePtr& src = source.space();
  const SpacePtr& tgt = target.space();
  if (f.rows() != src->dim() || f.cols() != tgt->dim())
    throw QgError("homomorphism matrix must map target coordinates to source coordinates");

  Matrix lam_src = rho_sandwich_matrix(*src, 0.25, 0.25);
  Matrix lam_tgt_inv = rho_sandwich_matrix(*tgt, -0.25, -0.25);
  Matrix ftilde = lam_src * f * lam_tgt_inv;

  auto image = [&](int mu) {
    return AlgebraElement::from_vec(src, Vector(ftilde.col(mu)));
  };

  const double scale = std::max(1.0, op_norm(ftilde));
  double hom_res = 0.0;
  // Unitality.
  {
    Vector one_t = AlgebraElement::identity(tgt).to_vec();
    AlgebraElement img = AlgebraElement::from_vec(src, Vector(ftilde * one_t));
    hom_res = std::max(hom_res, (img - AlgebraElement::identity(src)).norm_op());
  }
  // Multiplicativity and *-preservation over the matrix-unit basis.
  for (int a = 0; a < tgt->block_count(); ++a) {
    const int na = tgt->block_size(a);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) {
        AlgebraElement gij = image(tgt->coord(a, i, j));
        AlgebraElement gji = image(tgt->coord(a, j, i));
        hom_res = std::max(hom_res, (gij.adjoint() - gji).norm_op());
        for (int b = 0; b < tgt->block_count(); ++b) {
          const int nb = tgt->block_size(b);
          for (int k = 0; k < nb; ++k)
            for (int l = 0; l < nb; ++l) {
              AlgebraElement prod = gij * image(tgt->coord(b, k, l));
              AlgebraElement expect =
                  (a == b && j == k) ? image(tgt->coord(a, i, l))
                                     : AlgebraElement::zero(src);
              hom_res = std::max(hom_res, (prod - expect).norm_op());
            }
        }
      }
  }
  if (hom_res > tol * 100.0 * scale)
    throw NotAHomomorphismOfAlgebras(
        "KMS implementation of f is not a unital *-homomorphism, residual " +
        std::to_string(hom_res));

  HomomorphismCheck out;
  out.hom_residual = hom_res;

  // KMS adjoint of f: M_source -> M_target.
  Matrix k_src = gram_kms(*src);
  Matrix k_tgt = gram_kms(*tgt);
  Matrix fstar = k_tgt.llt().solve(Matrix(f.adjoint()) * k_src);
  Matrix pulled = fstar * source.adjacency().mat() * f;
  SuperOperator b(tgt, pulled);
  Matrix schur = schur_product(target.adjacency(), b).mat();
  out.identity_residual = op_norm(schur - pulled);
  out.holds = out.identity_residual <= tol * 100.0 * std::max(1.0, op_norm(pulled));
  out.surjective = rank_of(f) == tgt->dim();
  return out;
}

ConnectivityReport connected(const QuantumGraph& g, Method method, bool cross_check,
                             double tol) {
  if (!g.flags().real)
    throw NotCompletelyPositive(
        "connectivity is defined for real (completely positive) quantum graphs");
  const SpacePtr& space = g.space();
  const bool undirected = g.flags().undirected;

  ConnectivityReport report;

  // Shared kernel computation for the irreducibility and Laplacian methods.
  std::optional<KernelData> kernel;
  auto ensure_kernel = [&]() -> const KernelData& {
    if (!kernel) kernel = kernel_of_gradient(*space, g.kms_matrix(), kRankRel);
    return *kernel;
  };

  auto run_method = [&](Method m) -> MethodResult {
    MethodResult res;
    res.method = m;
    auto t0 = Clock::now();
    switch (m) {
      case Method::kIrreducibility: {
        if (undirected) {
          const KernelData& kd = ensure_kernel();
          report.kernel_dim = kd.dim;
          res.verdict = verdict_of(kd.dim <= 1);
          res.detail = "kernel algebra dimension " + std::to_string(kd.dim);
          if (kd.dim > 1 && !report.reducing_projection) {
            if (auto found = reducing_from_kernel(space, g.kms_matrix(), kd.basis, tol)) {
              report.reducing_projection = found->first;
              report.reducing_residuals = found->second;
            }
          }
        } else {
          IrreducibilityResult ir = is_irreducible(g.adjacency(), tol);
          res.verdict = verdict_of(ir.irreducible);
          res.detail = "Kraus-closure irreducibility";
          if (ir.witness && !report.reducing_projection) {
            report.reducing_projection = ir.witness;
            report.reducing_residuals = ir.residuals;
          }
        }
        break;
      }
      case Method::kLaplacian: {
        if (!g.flags().gns_symmetric)
          throw NotGnsSymmetric("the graph Laplacian needs a GNS-symmetric adjacency map");
        const KernelData& kd = ensure_kernel();
        report.nullity = kd.dim;
        res.verdict = verdict_of(kd.dim == 1);
        res.detail = "Laplacian nullity " + std::to_string(kd.dim);
        break;
      }
      case Method::kBurnside: {
        BurnsideResult br = burnside_generates(kraus_from_choi(g.adjacency()));
        report.burnside = br;
        res.verdict = verdict_of(br.generates);
        res.detail = "closure dimension " + std::to_string(br.closure_dim) + " of " +
                     std::to_string(br.full_dim);
        break;
      }
      case Method::kChoiSupport: {
        ChoiSupportResult cs = choi_support_sequence(g);
        res.verdict = verdict_of(cs.sup_is_identity);
        res.detail = "sup rank " + std::to_string(cs.sup_rank) + " of " +
                     std::to_string(space->hdim() * space->hdim());
        report.choi_support = std::move(cs);
        break;
      }
      case Method::kSpectral: {
        if (!undirected) throw NotUndirected("the spectral criterion needs an undirected graph");
        PerronData pf = perron_frobenius(SuperOperator(space, g.kms_matrix()), tol);
        res.verdict = verdict_of(pf.simple && pf.strictly_positive);
        res.detail = "top eigenvalue " + std::to_string(pf.r) +
                     (pf.simple ? ", simple" : ", not simple") +
                     (pf.strictly_positive ? ", strictly positive eigenvector"
                                           : ", eigenvector not strictly positive");
        report.perron = std::move(pf);
        break;
      }
      case Method::kAuto:
        break;
    }
    res.runtime_ms = ms_since(t0);
    return res;
  };

  auto applicable = [&](Method m) {
    switch (m) {
      case Method::kIrreducibility:
      case Method::kBurnside:
      case Method::kChoiSupport: return true;
      case Method::kLaplacian: return g.flags().gns_symmetric;
      case Method::kSpectral: return undirected;
      case Method::kAuto: return false;
    }
    return false;
  };

  std::vector<Method> to_run;
  if (cross_check) {
    for (Method m : {Method::kIrreducibility, Method::kLaplacian, Method::kBurnside,
                     Method::kChoiSupport, Method::kSpectral})
      if (applicable(m)) to_run.push_back(m);
  } else if (method == Method::kAuto) {
    to_run.push_back(undirected ? Method::kIrreducibility : Method::kBurnside);
  } else {
    to_run.push_back(method);
  }

  for (Method m : to_run) report.methods.push_back(run_method(m));

  report.overall = report.methods.front().verdict;
  for (const MethodResult& mr : report.methods) {
    if (mr.verdict != report.overall) {
      report.agreement = false;
      const MethodResult& first = report.methods.front();
      throw MethodDisagreement("methods disagree: " + to_string(first.method) + " says " +
                               to_string(report.overall) + " (" + first.detail + ") but " +
                               to_string(mr.method) + " says " + to_string(mr.verdict) +
                               " (" + mr.detail + ")");
    }
  }
  return report;
}

std::vector<AlgebraElement> connected_components(const QuantumGraph& g, double tol) {
  if (!g.flags().undirected)
    throw NotUndirected("components need an undirected (KMS-symmetric) graph");
  const SpacePtr& space = g.space();
  const int N = space->dim();

  std::vector<AlgebraElement> kernel = kernel_algebra(g);
  const int k = static_cast<int>(kernel.size());
  if (k <= 1) return {AlgebraElement::identity(space)};

  // Center of the kernel algebra, solved inside the kernel's coefficient
  // space: z = Σ c_i y_i with [z, y_j] = 0 for every j.
  Matrix constraints(N * k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      AlgebraElement comm = kernel[i] * kernel[j] - kernel[j] * kernel[i];
      constraints.block(j * N, i, N, 1) = comm.to_vec();
    }
  }
  Matrix center_coeff = null_space(constraints, 1e-8);
  const int c = static_cast<int>(center_coeff.cols());

  std::vector<AlgebraElement> center;
  for (int i = 0; i < c; ++i) {
    AlgebraElement z = AlgebraElement::zero(space);
    for (int j = 0; j < k; ++j) z = z + kernel[j].scaled(center_coeff(j, i));
    center.push_back(z);
  }

  // Hermitian basis of the center (the center is *-closed).
  std::vector<AlgebraElement> herm;
  {
    Eigen::MatrixXd stack(2 * N, 2 * c);
    int col = 0;
    for (const AlgebraElement& z : center) {
      for (const AlgebraElement& h :
           {(z + z.adjoint()).scaled(0.5), (z - z.adjoint()).scaled(Cplx(0, 0.5))}) {
        Vector v = h.to_vec();
        stack.col(col).head(N) = v.real();
        stack.col(col).tail(N) = v.imag();
        ++col;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeThinU);
    const auto& sig = svd.singularValues();
    for (int i = 0; i < sig.size() && sig(i) >= 1e-8 * sig(0); ++i) {
      Vector v(N);
      v.real() = svd.matrixU().col(i).head(N);
      v.imag() = svd.matrixU().col(i).tail(N);
      herm.push_back(AlgebraElement::from_vec(space, v));
    }
  }

  // A generic Hermitian element of the center separates the minimal central
  // projections; retry with fresh weights if eigenvalues collide.
  std::mt19937_64 rng(0xc0b41u);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  const int want = static_cast<int>(herm.size());
  const double check_tol = std::max(100.0 * tol, 1e-8);
  for (int attempt = 0; attempt < 16; ++attempt) {
    AlgebraElement z = AlgebraElement::zero(space);
    for (int j = 0; j < want; ++j)
      z = z + herm[j].scaled(unif(rng) * std::sqrt(2.0 * j + 3.0));
    z = (z + z.adjoint()).scaled(0.5);
    auto eigs = element_eigensystem(z);
    const double diameter = eigs.back().lambda - eigs.front().lambda;
    // Group eigenvalues into clusters.
    std::vector<int> splits = {0};
    for (size_t i = 1; i < eigs.size(); ++i)
      if (eigs[i].lambda - eigs[i - 1].lambda >
          std::max(kClusterGapRel * std::max(diameter, 1.0), 1e-10))
        splits.push_back(static_cast<int>(i));
    splits.push_back(static_cast<int>(eigs.size()));
    if (static_cast<int>(splits.size()) - 1 != want) continue;

    std::vector<AlgebraElement> comps;
    bool good = true;
    for (size_t s = 0; s + 1 < splits.size(); ++s) {
      AlgebraElement prev = spectral_projection(space, eigs, splits[s]);
      AlgebraElement next = spectral_projection(space, eigs, splits[s + 1]);
      AlgebraElement q = next - prev;
      if (!q.is_projection(check_tol)) {
        good = false;
        break;
      }
      // Each component must commute with the KMS implementation.
      Matrix rq = right_mult_matrix(q);
      Matrix lq = left_mult_matrix(q);
      const double scale = std::max(1.0, op_norm(g.kms_matrix()));
      if (op_norm(g.kms_matrix() * rq - rq * g.kms_matrix()) > check_tol * scale ||
          op_norm(g.kms_matrix() * lq - lq * g.kms_matrix()) > check_tol * scale) {
        good = false;
        break;
      }
      comps.push_back(q);
    }
    if (!good) continue;

    std::sort(comps.begin(), comps.end(), [](const AlgebraElement& x, const AlgebraElement& y) {
      const double tx = x.embedded().trace().real();
      const double ty = y.embedded().trace().real();
      if (std::abs(tx - ty) > 1e-9) return tx > ty;
      Vector vx = x.to_vec(), vy = y.to_vec();
      for (int i = 0; i < vx.size(); ++i)
        if (std::abs(vx(i).real() - vy(i).real()) > 1e-9) return vx(i).real() > vy(i).real();
      return false;
    });
    return comps;
  }
  throw QgError("failed to split the kernel center into minimal projections");
}

}  // namespace qg
