#include "cryptoherm/io.hpp"

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>

namespace cryptoherm::io {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const std::string& key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(context + "." + key + ": missing required field");
  }
  return j.at(key);
}

int require_int(const json& j, const std::string& key, const std::string& context) {
  const auto& v = require_field(j, key, context);
  if (!v.is_number_integer()) {
    throw ParseError(context + "." + key + ": expected an integer");
  }
  return v.get<int>();
}

std::string require_string(const json& j, const std::string& key, const std::string& context) {
  const auto& v = require_field(j, key, context);
  if (!v.is_string()) {
    throw ParseError(context + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

void check_header(const json& j, const std::string& kind, const std::string& context) {
  const auto version = require_string(j, "schema_version", context);
  if (version != kSchemaVersion) {
    throw ParseError(context + ".schema_version: unsupported version \"" + version + "\"");
  }
  const auto k = require_string(j, "kind", context);
  if (k != kind) {
    throw ParseError(context + ".kind: expected \"" + kind + "\", got \"" + k + "\"");
  }
}

json entries_to_json(const Complex* data, Eigen::Index rows, Eigen::Index cols) {
  // row-major on disk
  json entries = json::array();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Complex& z = data[c * rows + r];  // column-major storage
      entries.push_back(json::array({z.real(), z.imag()}));
    }
  }
  return entries;
}

std::vector<Complex> entries_from_json(const json& j, size_t expected,
                                       const std::string& context) {
  const auto& arr = require_field(j, "entries", context);
  if (!arr.is_array() || arr.size() != expected) {
    throw ParseError(context + ".entries: expected an array of length " +
                     std::to_string(expected) + ", got " +
                     (arr.is_array() ? std::to_string(arr.size()) : std::string("non-array")));
  }
  std::vector<Complex> out;
  out.reserve(expected);
  for (size_t i = 0; i < arr.size(); ++i) {
    const auto& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ParseError(context + ".entries[" + std::to_string(i) +
                       "]: expected a [re, im] pair of numbers");
    }
    const Complex z(pair[0].get<double>(), pair[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ParseError(context + ".entries[" + std::to_string(i) + "]: non-finite value");
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m, const std::string& name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError("matrix_to_json: only nonempty square matrices are serialized");
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "matrix";
  j["dim"] = m.rows();
  j["entries"] = entries_to_json(m.data(), m.rows(), m.cols());
  if (!name.empty()) j["name"] = name;
  return j;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& context) {
  check_header(j, "matrix", context);
  const int dim = require_int(j, "dim", context);
  if (dim < 1) throw ParseError(context + ".dim: must be a positive integer");
  const auto entries =
      entries_from_json(j, static_cast<size_t>(dim) * static_cast<size_t>(dim), context);
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      m(r, c) = entries[static_cast<size_t>(r) * static_cast<size_t>(dim) +
                        static_cast<size_t>(c)];
  return m;
}

json vector_to_json(const ComplexVector& v, const std::string& name) {
  if (v.size() == 0) throw ShapeError("vector_to_json: empty vector");
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "vector";
  j["dim"] = v.size();
  json entries = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    entries.push_back(json::array({v(i).real(), v(i).imag()}));
  }
  j["entries"] = entries;
  if (!name.empty()) j["name"] = name;
  return j;
}

ComplexVector vector_from_json(const json& j, const std::string& context) {
  check_header(j, "vector", context);
  const int dim = require_int(j, "dim", context);
  if (dim < 1) throw ParseError(context + ".dim: must be a positive integer");
  const auto entries = entries_from_json(j, static_cast<size_t>(dim), context);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = entries[static_cast<size_t>(i)];
  return v;
}

json chain_to_json(const chain::SpaceChain& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "chain";
  j["dim"] = c.dim();
  j["k"] = c.K();
  j["mode"] = chain::to_string(c.mode());
  json z = json::array();
  for (int m = 1; m <= c.K() - 1; ++m) {
    z.push_back(matrix_to_json(c.z(m), "Z" + std::to_string(m)));
  }
  j["z"] = z;
  return j;
}

ChainFile chain_from_json(const json& j) {
  const std::string context = "chain";
  check_header(j, "chain", context);
  const int dim = require_int(j, "dim", context);
  const int k = require_int(j, "k", context);
  if (k < 2) throw ParseError("chain.k: must be >= 2");
  ChainFile file;
  file.mode = chain::mode_from_string(require_string(j, "mode", context));
  const auto& z = require_field(j, "z", context);
  if (!z.is_array() || z.size() != static_cast<size_t>(k - 1)) {
    throw ParseError("chain.z: expected an array of k-1 = " + std::to_string(k - 1) +
                     " matrices");
  }
  for (size_t i = 0; i < z.size(); ++i) {
    auto m = matrix_from_json(z[i], "chain.z[" + std::to_string(i) + "]");
    if (m.rows() != dim) {
      throw ParseError("chain.z[" + std::to_string(i) + "].dim: expected " +
                       std::to_string(dim));
    }
    file.z.push_back(std::move(m));
  }
  return file;
}

json dyson_to_json(const dyson::DysonChain& d) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "dyson";
  j["dim"] = d.dim;
  j["k"] = d.K;
  json omega = json::array();
  for (int m = 1; m <= d.K - 1; ++m) {
    omega.push_back(matrix_to_json(d.omega(m), "Omega" + std::to_string(m)));
  }
  j["omega"] = omega;
  return j;
}

std::vector<ComplexMatrix> dyson_factors_from_json(const json& j) {
  const std::string context = "dyson";
  check_header(j, "dyson", context);
  const int dim = require_int(j, "dim", context);
  const int k = require_int(j, "k", context);
  if (k < 2) throw ParseError("dyson.k: must be >= 2");
  const auto& omega = require_field(j, "omega", context);
  if (!omega.is_array() || omega.size() != static_cast<size_t>(k - 1)) {
    throw ParseError("dyson.omega: expected an array of k-1 = " + std::to_string(k - 1) +
                     " matrices");
  }
  std::vector<ComplexMatrix> out;
  for (size_t i = 0; i < omega.size(); ++i) {
    auto m = matrix_from_json(omega[i], "dyson.omega[" + std::to_string(i) + "]");
    if (m.rows() != dim) {
      throw ParseError("dyson.omega[" + std::to_string(i) + "].dim: expected " +
                       std::to_string(dim));
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string dump_canonical(const json& j) {
  return j.dump(2) + "\n";
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path.string());
  out << dump_canonical(j);
  if (!out) throw ParseError("write failed: " + path.string());
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << h;
  return os.str();
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest(buf.str());
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json make_report(const std::string& command,
                 const std::map<std::string, std::string>& input_digests,
                 double tolerance, bool pass, json results) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "report";
  j["command"] = command;
  j["inputs"] = input_digests;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  j["results"] = std::move(results);
  j["timestamp"] = utc_timestamp();
  return j;
}

json hermiticity_report_to_json(const ledger::HermiticityReport& report) {
  json t1 = json::array();
  for (const auto& c : report.table1) {
    t1.push_back({{"j", c.j}, {"tier", c.name}, {"residual", c.residual}});
  }
  json t2 = json::array();
  for (const auto& c : report.table2) {
    t2.push_back({{"j", c.j}, {"k", c.k}, {"residual", c.residual}});
  }
  json pos = json::object();
  for (const auto& [j, p] : report.positivity) {
    pos[std::to_string(j)] = chain::to_string(p);
  }
  json obs = json::array();
  for (const auto& e : report.observability) {
    obs.push_back({{"name", e.name}, {"residual", e.residual}, {"pass", e.pass}});
  }
  return json{{"table1", t1},
              {"table2", t2},
              {"positivity", pos},
              {"observability", obs},
              {"tolerance_used", report.tolerance_used},
              {"pass", report.pass},
              {"max_residual", report.max_residual},
              {"worst_cell", report.worst_cell}};
}

json spectral_comparison_to_json(const matcore::SpectralComparison& cmp) {
  json pairs = json::array();
  for (const auto& p : cmp.pairs) {
    pairs.push_back({{"lambda_a", {p.lambda_a.real(), p.lambda_a.imag()}},
                     {"lambda_b", {p.lambda_b.real(), p.lambda_b.imag()}},
                     {"abs_dev", p.abs_dev},
                     {"rel_dev", p.rel_dev}});
  }
  return json{{"count", cmp.count},           {"pairs", pairs},
              {"scale", cmp.scale},           {"max_abs_dev", cmp.max_abs_dev},
              {"max_rel_dev", cmp.max_rel_dev}, {"max_scaled_dev", cmp.max_scaled_dev},
              {"matching", cmp.matching}};
}

json trajectory_to_json(const dynamics::StateTrajectory& traj, bool include_states) {
  json norms = json::object();
  for (const auto& [j, values] : traj.norms_per_space) {
    norms[std::to_string(j)] = values;
  }
  json out{{"times", traj.times}, {"norms_per_space", norms}};
  if (include_states) {
    json states = json::array();
    for (const auto& psi : traj.states) {
      json entries = json::array();
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        entries.push_back(json::array({psi(i).real(), psi(i).imag()}));
      }
      states.push_back(entries);
    }
    out["states"] = states;
  }
  return out;
}

json bg_comparison_to_json(const models::BgComparison& cmp) {
  auto grid = [](const models::GridComparison& g) {
    return json{{"n_grid", g.n_grid},
                {"bg_retained", g.bg_retained},
                {"max_im_retained", g.max_im_retained},
                {"filter_ok", g.filter_ok},
                {"comparison", spectral_comparison_to_json(g.comparison)}};
  };
  return json{{"params",
               {{"g", cmp.params.g},
                {"j", cmp.params.j_param},
                {"eta", cmp.params.eta},
                {"box", cmp.params.box_halfwidth},
                {"n_grid", cmp.params.n_grid},
                {"reality_filter", cmp.params.reality_filter}}},
              {"n_levels", cmp.n_levels},
              {"coarse", grid(cmp.coarse)},
              {"fine", grid(cmp.fine)},
              {"refinement_improved", cmp.refinement_improved},
              {"ground_level_improved", cmp.ground_level_improved},
              {"status", cmp.status}};
}

}  // namespace cryptoherm::io
