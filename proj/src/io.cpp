#include "qg/io.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

namespace {

Cplx complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex numbers are two-element arrays [re, im]");
  return Cplx(j[0].get<double>(), j[1].get<double>());
}

Json complex_json(Cplx z) { return Json::array({z.real(), z.imag()}); }

Matrix matrix_from_json_at(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ParseError(where + ": row " + std::to_string(r) + " has wrong length");
    for (int c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], where + "[" + std::to_string(r) + "][" +
                                               std::to_string(c) + "]");
  }
  return m;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

}  // namespace

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) { return matrix_from_json_at(j, "matrix"); }

Json element_json(const AlgebraElement& x) {
  Json blocks = Json::array();
  for (int a = 0; a < x.space()->block_count(); ++a) blocks.push_back(matrix_json(x.block(a)));
  return blocks;
}

AlgebraElement element_from_json(const SpacePtr& space, const Json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != space->block_count())
    throw ParseError("element: expected one matrix per block");
  std::vector<Matrix> blocks;
  for (int a = 0; a < space->block_count(); ++a)
    blocks.push_back(matrix_from_json_at(j[a], "element block " + std::to_string(a)));
  return AlgebraElement(space, std::move(blocks));
}

GraphFile parse_graph_file(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw ParseError("top level must be an object");

  GraphFile f;
  if (j.contains("version")) {
    if (!j["version"].is_number_integer()) throw ParseError("version: expected an integer");
    f.version = j["version"].get<int>();
    if (f.version != 1) throw ParseError("unsupported version " + std::to_string(f.version));
  }
  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
    throw ParseError("blocks: expected a non-empty array of positive integers");
  for (const auto& b : j["blocks"]) {
    if (!b.is_number_integer() || b.get<int>() < 1)
      throw ParseError("blocks: entries must be positive integers");
    f.blocks.push_back(b.get<int>());
  }
  if (j.contains("rho")) {
    if (!j["rho"].is_array() || j["rho"].size() != f.blocks.size())
      throw ParseError("rho: expected one density matrix per block");
    std::vector<Matrix> rho;
    for (size_t a = 0; a < f.blocks.size(); ++a)
      rho.push_back(matrix_from_json_at(j["rho"][a], "rho[" + std::to_string(a) + "]"));
    f.rho = std::move(rho);
  }
  if (j.contains("normalize")) {
    if (!j["normalize"].is_boolean()) throw ParseError("normalize: expected a boolean");
    f.normalize = j["normalize"].get<bool>();
  }
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw ParseError("tolerance: expected a number");
    f.tolerance = j["tolerance"].get<double>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw ParseError("seed: expected an integer");
    f.seed = j["seed"].get<std::uint64_t>();
  }

  int sources = 0;
  if (j.contains("adjacency")) {
    f.adjacency = matrix_from_json_at(j["adjacency"], "adjacency");
    ++sources;
  }
  if (j.contains("classical")) {
    const Json& cj = j["classical"];
    if (!cj.is_array() || cj.empty()) throw ParseError("classical: expected a 0/1 matrix");
    const int n = static_cast<int>(cj.size());
    Eigen::MatrixXd adj(n, n);
    for (int r = 0; r < n; ++r) {
      if (!cj[r].is_array() || static_cast<int>(cj[r].size()) != n)
        throw ParseError("classical: row " + std::to_string(r) + " has wrong length");
      for (int c = 0; c < n; ++c) {
        if (!cj[r][c].is_number())
          throw ParseError("classical[" + std::to_string(r) + "][" + std::to_string(c) +
                           "]: expected a number");
        adj(r, c) = cj[r][c].get<double>();
      }
    }
    f.classical = adj;
    ++sources;
  }
  if (j.contains("kraus")) {
    const Json& kj = j["kraus"];
    if (!kj.is_array()) throw ParseError("kraus: expected an array of block entries");
    std::vector<GraphFile::KrausBlock> blocks;
    for (size_t i = 0; i < kj.size(); ++i) {
      const Json& e = kj[i];
      const std::string where = "kraus[" + std::to_string(i) + "]";
      if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("ops"))
        throw ParseError(where + ": expected {from, to, ops}");
      GraphFile::KrausBlock kb;
      kb.from = e["from"].get<int>();
      kb.to = e["to"].get<int>();
      if (kb.from < 0 || kb.from >= static_cast<int>(f.blocks.size()) || kb.to < 0 ||
          kb.to >= static_cast<int>(f.blocks.size()))
        throw ParseError(where + ": block index out of range");
      for (size_t o = 0; o < e["ops"].size(); ++o)
        kb.ops.push_back(
            matrix_from_json_at(e["ops"][o], where + ".ops[" + std::to_string(o) + "]"));
      blocks.push_back(std::move(kb));
    }
    f.kraus = std::move(blocks);
    ++sources;
  }
  if (sources != 1)
    throw ParseError("exactly one of adjacency, kraus or classical must be present");
  return f;
}

GraphFile load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_file(ss.str());
}

QuantumGraph build_graph(const GraphFile& file) {
  const double tol = file.tolerance.value_or(kDefaultTol);
  if (file.classical) {
    if (static_cast<int>(file.blocks.size()) != file.classical->rows() ||
        !std::all_of(file.blocks.begin(), file.blocks.end(), [](int b) { return b == 1; }))
      throw ParseError("classical graphs need blocks = [1, 1, ..., 1] of matching length");
    return from_classical(*file.classical, tol);
  }
  std::vector<Matrix> rho = file.rho.value_or(std::vector<Matrix>{});
  SpacePtr space = QuantumSpace::make(file.blocks, rho, file.normalize, tol);
  if (file.adjacency) {
    if (file.adjacency->rows() != space->dim() || file.adjacency->cols() != space->dim())
      throw ParseError("adjacency: expected a " + std::to_string(space->dim()) + " x " +
                       std::to_string(space->dim()) + " matrix");
    return validate(SuperOperator(space, *file.adjacency), tol);
  }
  // Kraus form: spanning operators per block pair, orthonormalized here.
  const int d = space->block_count();
  std::vector<std::vector<std::vector<Matrix>>> ops(d, std::vector<std::vector<Matrix>>(d));
  for (const auto& kb : *file.kraus) {
    for (const Matrix& op : kb.ops) {
      if (op.rows() != space->block_size(kb.to) || op.cols() != space->block_size(kb.from))
        throw ParseError("kraus operator for blocks (" + std::to_string(kb.from) + " -> " +
                         std::to_string(kb.to) + ") has wrong shape");
      ops[kb.from][kb.to].push_back(op);
    }
  }
  OperatorSystem s = OperatorSystem::from_spanning(space, std::move(ops));
  return graph_from_bimodule(s, std::max(tol, 1e-8));
}

std::string write_graph_file(const GraphFile& file) {
  Json j;
  j["version"] = file.version;
  j["blocks"] = file.blocks;
  if (file.rho) {
    Json rho = Json::array();
    for (const Matrix& r : *file.rho) rho.push_back(matrix_json(r));
    j["rho"] = std::move(rho);
  }
  if (file.normalize) j["normalize"] = true;
  if (file.tolerance) j["tolerance"] = *file.tolerance;
  if (file.seed) j["seed"] = *file.seed;
  if (file.adjacency) j["adjacency"] = matrix_json(*file.adjacency);
  if (file.classical) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < file.classical->rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < file.classical->cols(); ++c)
        row.push_back(static_cast<int>((*file.classical)(r, c)));
      rows.push_back(std::move(row));
    }
    j["classical"] = std::move(rows);
  }
  if (file.kraus) {
    Json arr = Json::array();
    for (const auto& kb : *file.kraus) {
      Json e;
      e["from"] = kb.from;
      e["to"] = kb.to;
      Json ops = Json::array();
      for (const Matrix& op : kb.ops) ops.push_back(matrix_json(op));
      e["ops"] = std::move(ops);
      arr.push_back(std::move(e));
    }
    j["kraus"] = std::move(arr);
  }
  return j.dump(2) + "\n";
}

GraphFile graph_file_of(const QuantumGraph& g, std::optional<std::uint64_t> seed) {
  GraphFile f;
  f.blocks = g.space()->blocks();
  if (!g.space()->tracial() ||
      std::any_of(f.blocks.begin(), f.blocks.end(), [](int b) { return b > 1; })) {
    std::vector<Matrix> rho;
    for (int a = 0; a < g.space()->block_count(); ++a) rho.push_back(g.space()->rho(a));
    f.rho = std::move(rho);
  }
  f.adjacency = g.adjacency().mat();
  f.seed = seed;
  return f;
}

Json flags_json(const QuantumGraph& g) {
  const GraphFlags& fl = g.flags();
  Json j;
  j["real"] = fl.real;
  j["undirected"] = fl.undirected;
  j["gns_symmetric"] = fl.gns_symmetric;
  j["reflexive"] = fl.reflexive;
  j["irreflexive"] = fl.irreflexive;
  j["tracial"] = fl.tracial;
  Json res;
  res["schur_idempotent"] = fl.idempotent_residual;
  res["real"] = fl.real_residual;
  res["undirected"] = fl.undirected_residual;
  res["gns_symmetric"] = fl.gns_residual;
  res["reflexive"] = fl.reflexive_residual;
  res["irreflexive"] = fl.irreflexive_residual;
  j["residuals"] = std::move(res);
  j["tolerance"] = fl.tol;
  return j;
}

Json report_header(const std::string& command, const std::string& input_name,
                   const std::string& input_bytes) {
  Json j;
  j["version"] = 1;
  j["command"] = command;
  Json input;
  input["name"] = input_name;
  input["digest"] = hex64(fnv1a(input_bytes));
  j["input"] = std::move(input);
  return j;
}

Json connectivity_json(const ConnectivityReport& rep) {
  Json j;
  j["verdict"] = to_string(rep.overall);
  j["agreement"] = rep.agreement;
  Json methods = Json::array();
  for (const MethodResult& m : rep.methods) {
    Json mj;
    mj["name"] = to_string(m.method);
    mj["verdict"] = to_string(m.verdict);
    mj["detail"] = m.detail;
    mj["runtime_ms"] = m.runtime_ms;
    methods.push_back(std::move(mj));
  }
  j["methods"] = std::move(methods);

  Json certs;
  if (rep.reducing_projection) {
    Json c;
    c["projection"] = element_json(*rep.reducing_projection);
    c["residuals"] = Json{{"bound", rep.reducing_residuals.bound},
                          {"corner", rep.reducing_residuals.corner},
                          {"right", rep.reducing_residuals.right},
                          {"left", rep.reducing_residuals.left},
                          {"support", rep.reducing_residuals.support},
                          {"commute", rep.reducing_residuals.commute}};
    certs["reducing_projection"] = std::move(c);
  }
  if (rep.kernel_dim) certs["kernel_dim"] = *rep.kernel_dim;
  if (rep.nullity) certs["laplacian_nullity"] = *rep.nullity;
  if (rep.burnside) {
    certs["burnside"] = Json{{"closure_dim", rep.burnside->closure_dim},
                             {"full_dim", rep.burnside->full_dim}};
  }
  if (rep.choi_support) {
    certs["choi_support"] =
        Json{{"ranks", rep.choi_support->ranks},
             {"sup_rank", rep.choi_support->sup_rank},
             {"sup_is_identity", rep.choi_support->sup_is_identity}};
  }
  if (rep.perron && rep.perron->eigenvector) {
    certs["perron"] = Json{{"r", rep.perron->r},
                           {"eigenvector", element_json(*rep.perron->eigenvector)},
                           {"simple", rep.perron->simple},
                           {"strictly_positive", rep.perron->strictly_positive},
                           {"residual", rep.perron->residual}};
  }
  j["certificates"] = std::move(certs);
  return j;
}

Json bipartite_json(const BipartiteResult& res) {
  Json j;
  j["bipartite"] = res.bipartite;
  j["top_eigenvalue"] = res.top_eigenvalue;
  j["bottom_eigenvalue"] = res.bottom_eigenvalue;
  if (res.parts) {
    Json c;
    c["p1"] = element_json(res.parts->first);
    c["p2"] = element_json(res.parts->second);
    c["lemma_residual"] = res.lemma_residual;
    j["certificates"] = Json{{"bipartition", std::move(c)}};
  }
  return j;
}

Json spectrum_json(const SpectralData& data) {
  Json j;
  Json eigs = Json::array();
  for (Eigen::Index i = 0; i < data.eigenvalues.size(); ++i)
    eigs.push_back(Json::array({data.eigenvalues(i).real(), data.eigenvalues(i).imag()}));
  j["eigenvalues"] = std::move(eigs);
  j["real_spectrum"] = data.real_spectrum;
  if (data.perron.eigenvector) {
    j["certificates"] =
        Json{{"perron", Json{{"r", data.perron.r},
                             {"eigenvector", element_json(*data.perron.eigenvector)},
                             {"simple", data.perron.simple},
                             {"strictly_positive", data.perron.strictly_positive},
                             {"residual", data.perron.residual}}}};
  }
  return j;
}

Json components_json(const std::vector<AlgebraElement>& comps) {
  Json j;
  j["count"] = comps.size();
  Json arr = Json::array();
  for (const AlgebraElement& p : comps) arr.push_back(element_json(p));
  j["certificates"] = Json{{"components", std::move(arr)}};
  return j;
}

std::vector<CertificateCheck> revalidate_report(const QuantumGraph& g, const Json& report,
                                                double tol) {
  std::vector<CertificateCheck> out;
  if (!report.contains("certificates")) return out;
  const Json& certs = report["certificates"];
  const SpacePtr& space = g.space();
  const Matrix& tilde = g.kms_matrix();
  const double scale = std::max(1.0, op_norm(tilde));

  if (certs.contains("reducing_projection")) {
    AlgebraElement p = element_from_json(space, certs["reducing_projection"]["projection"]);
    CertificateCheck c;
    c.name = "reducing_projection";
    ReducingResiduals res = validate_reducing(space, tilde, p);
    const bool proj_ok = p.is_nontrivial_projection(1e-6);
    c.residual = std::max(res.max_condition(), res.commute);
    c.ok = proj_ok && c.residual <= tol * scale;
    out.push_back(c);
  }
  if (certs.contains("bipartition")) {
    AlgebraElement p1 = element_from_json(space, certs["bipartition"]["p1"]);
    AlgebraElement p2 = element_from_json(space, certs["bipartition"]["p2"]);
    CertificateCheck c;
    c.name = "bipartition";
    const bool proj_ok = p1.is_nontrivial_projection(1e-6) &&
                         p2.is_nontrivial_projection(1e-6) &&
                         (p1 + p2 - AlgebraElement::identity(space)).norm_op() <= tol;
    Matrix rp1 = right_mult_matrix(p1);
    Matrix rp2 = right_mult_matrix(p2);
    c.residual = op_norm(tilde * rp1 - rp2 * tilde);
    c.ok = proj_ok && c.residual <= tol * scale;
    out.push_back(c);
  }
  if (certs.contains("components")) {
    CertificateCheck c;
    c.name = "components";
    std::vector<AlgebraElement> comps;
    for (const Json& pj : certs["components"])
      comps.push_back(element_from_json(space, pj));
    bool ok = !comps.empty();
    double residual = 0.0;
    AlgebraElement sum = AlgebraElement::zero(space);
    for (size_t i = 0; i < comps.size(); ++i) {
      ok = ok && comps[i].is_projection(1e-6);
      sum = sum + comps[i];
      for (size_t j = i + 1; j < comps.size(); ++j)
        residual = std::max(residual, (comps[i] * comps[j]).norm_op());
      Matrix rq = right_mult_matrix(comps[i]);
      residual = std::max(residual, op_norm(tilde * rq - rq * tilde) / scale);
    }
    residual = std::max(residual, (sum - AlgebraElement::identity(space)).norm_op());
    c.residual = residual;
    c.ok = ok && residual <= tol;
    out.push_back(c);
  }
  if (certs.contains("perron")) {
    CertificateCheck c;
    c.name = "perron";
    const double r = certs["perron"]["r"].get<double>();
    AlgebraElement x = element_from_json(space, certs["perron"]["eigenvector"]);
    c.residual = (AlgebraElement::from_vec(space, Vector(tilde * x.to_vec())) - x.scaled(r))
                     .norm_l2();
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        (x.embedded() + Matrix(x.embedded().adjoint())) / 2.0);
    const bool positive = es.eigenvalues()(0) >= -1e-7 * std::max(1.0, x.norm_op());
    c.ok = positive && c.residual <= tol * scale;
    out.push_back(c);
  }
  return out;
}

}  // namespace qg
