// Command line front end: reads quantum graph files, runs validations and
// connectivity checks, and emits machine readable certificate reports.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qg/errors.hpp"
#include "qg/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDisconnected = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDisagreement = 3;

struct Output {
  std::string path;  // empty = stdout
  void emit(const qg::Json& j) const {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw qg::QgError("cannot write " + path);
      out << text;
    }
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qg::ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

qg::Method method_from_name(const std::string& name) {
  if (name == "auto") return qg::Method::kAuto;
  if (name == "irreducibility") return qg::Method::kIrreducibility;
  if (name == "laplacian") return qg::Method::kLaplacian;
  if (name == "burnside") return qg::Method::kBurnside;
  if (name == "choi-support") return qg::Method::kChoiSupport;
  if (name == "spectral") return qg::Method::kSpectral;
  throw qg::QgError("unknown method " + name);
}

double wall_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum graph connectivity toolkit"};
  app.require_subcommand(1);

  std::string path, out_path, method_name = "auto";
  double tol = qg::kDefaultTol;
  bool cross_check = false;
  std::uint64_t seed = 0;
  int rand_n = 3, rand_d = 2;

  auto* validate_cmd = app.add_subcommand("validate", "check the quantum graph axioms");
  validate_cmd->add_option("path", path)->required();
  validate_cmd->add_option("--tol", tol);
  validate_cmd->add_option("--out", out_path);

  auto* conn_cmd = app.add_subcommand("connectivity", "decide connectivity with certificates");
  conn_cmd->add_option("path", path)->required();
  conn_cmd->add_option("--method", method_name)
      ->check(CLI::IsMember({"auto", "irreducibility", "laplacian", "burnside",
                             "choi-support", "spectral"}));
  conn_cmd->add_flag("--cross-check", cross_check);
  conn_cmd->add_option("--tol", tol);
  conn_cmd->add_option("--out", out_path);

  auto* bip_cmd = app.add_subcommand("bipartite", "bipartiteness of a connected graph");
  bip_cmd->add_option("path", path)->required();
  bip_cmd->add_option("--tol", tol);
  bip_cmd->add_option("--out", out_path);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and Perron-Frobenius data");
  spectrum_cmd->add_option("path", path)->required();
  spectrum_cmd->add_option("--tol", tol);
  spectrum_cmd->add_option("--out", out_path);

  auto* comp_cmd = app.add_subcommand("components", "connected component projections");
  comp_cmd->add_option("path", path)->required();
  comp_cmd->add_option("--tol", tol);
  comp_cmd->add_option("--out", out_path);

  auto* rand_cmd = app.add_subcommand("random", "sample a random quantum graph file");
  rand_cmd->add_option("n", rand_n)->required();
  rand_cmd->add_option("d", rand_d)->required();
  rand_cmd->add_option("--seed", seed);
  rand_cmd->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);
  Output out{out_path};
  const auto t0 = std::chrono::steady_clock::now();

  try {
    if (rand_cmd->parsed()) {
      qg::QuantumGraph g = qg::random_qg(rand_n, rand_d, seed);
      qg::GraphFile f = qg::graph_file_of(g, seed);
      const std::string text = qg::write_graph_file(f);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw qg::QgError("cannot write " + out_path);
        os << text;
      }
      return kExitOk;
    }

    const std::string bytes = slurp(path);
    qg::GraphFile file = qg::parse_graph_file(bytes);
    if (tol == qg::kDefaultTol && file.tolerance) tol = *file.tolerance;

    if (validate_cmd->parsed()) {
      qg::QuantumGraph g = qg::build_graph(file);
      qg::Json j = qg::report_header("validate", path, bytes);
      j["graph"] = qg::flags_json(g);
      j["timings_ms"] = qg::Json{{"total", wall_ms(t0)}};
      out.emit(j);
      return kExitOk;
    }

    qg::QuantumGraph g = qg::build_graph(file);

    if (conn_cmd->parsed()) {
      qg::ConnectivityReport rep =
          qg::connected(g, method_from_name(method_name), cross_check, tol);
      qg::Json j = qg::report_header("connectivity", path, bytes);
      j["graph"] = qg::flags_json(g);
      j.update(qg::connectivity_json(rep));
      j["timings_ms"] = qg::Json{{"total", wall_ms(t0)}};
      out.emit(j);
      return rep.overall == qg::Verdict::kConnected ? kExitOk : kExitDisconnected;
    }
    if (bip_cmd->parsed()) {
      qg::BipartiteResult res = qg::is_bipartite(g, tol);
      qg::Json j = qg::report_header("bipartite", path, bytes);
      j["graph"] = qg::flags_json(g);
      j.update(qg::bipartite_json(res));
      j["timings_ms"] = qg::Json{{"total", wall_ms(t0)}};
      out.emit(j);
      return kExitOk;
    }
    if (spectrum_cmd->parsed()) {
      qg::SpectralData data = qg::spectrum(g, tol);
      qg::Json j = qg::report_header("spectrum", path, bytes);
      j["graph"] = qg::flags_json(g);
      j.update(qg::spectrum_json(data));
      j["timings_ms"] = qg::Json{{"total", wall_ms(t0)}};
      out.emit(j);
      return kExitOk;
    }
    if (comp_cmd->parsed()) {
      std::vector<qg::AlgebraElement> comps = qg::connected_components(g, tol);
      qg::Json j = qg::report_header("components", path, bytes);
      j["graph"] = qg::flags_json(g);
      j.update(qg::components_json(comps));
      j["timings_ms"] = qg::Json{{"total", wall_ms(t0)}};
      out.emit(j);
      return kExitOk;
    }
  } catch (const qg::MethodDisagreement& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDisagreement;
  } catch (const qg::QgError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
