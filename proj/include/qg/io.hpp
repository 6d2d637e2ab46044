#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qg/connectivity.hpp"
#include "qg/graph.hpp"
#include "qg/spectral.hpp"

namespace qg {

using Json = nlohmann::ordered_json;

/// Parsed description of a quantum graph. Exactly one of adjacency, kraus or
/// classical must be present. Complex entries are stored as [re, im] pairs,
/// matrices row-major.
struct GraphFile {
  int version = 1;
  std::vector<int> blocks;
  std::optional<std::vector<Matrix>> rho;
  bool normalize = false;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;  // replay metadata, not used for building

  std::optional<Matrix> adjacency;   // N x N superoperator matrix
  std::optional<Eigen::MatrixXd> classical;  // n x n 0/1 matrix
  struct KrausBlock {
    int from = 0;
    int to = 0;
    std::vector<Matrix> ops;
  };
  std::optional<std::vector<KrausBlock>> kraus;
};

GraphFile parse_graph_file(const std::string& text);
GraphFile load_graph_file(const std::string& path);

/// Builds and validates the graph described by the file.
QuantumGraph build_graph(const GraphFile& file);

std::string write_graph_file(const GraphFile& file);
/// The replayable file for a random graph: blocks, adjacency and seed.
GraphFile graph_file_of(const QuantumGraph& g, std::optional<std::uint64_t> seed = {});

// --- Report construction -------------------------------------------------

Json flags_json(const QuantumGraph& g);
Json matrix_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json element_json(const AlgebraElement& x);
AlgebraElement element_from_json(const SpacePtr& space, const Json& j);

Json report_header(const std::string& command, const std::string& input_name,
                   const std::string& input_bytes);
Json connectivity_json(const ConnectivityReport& rep);
Json bipartite_json(const BipartiteResult& res);
Json spectrum_json(const SpectralData& data);
Json components_json(const std::vector<AlgebraElement>& comps);

// --- Certificate re-validation -------------------------------------------

struct CertificateCheck {
  std::string name;
  bool ok = false;
  double residual = 0.0;
};

/// Re-ingests every certificate found in a report produced by the functions
/// above and checks its defining identities against the graph.
std::vector<CertificateCheck> revalidate_report(const QuantumGraph& g, const Json& report,
                                                double tol = 1e-8);

}  // namespace qg
