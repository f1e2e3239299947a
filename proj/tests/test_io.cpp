#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cryptoherm/dyson.hpp"
#include "cryptoherm/io.hpp"
#include "support.hpp"

using namespace cryptoherm;
using nlohmann::json;
using test_support::random_matrix;
using test_support::random_vector;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "cryptoherm_io_test";
  fs::create_directories(dir);
  return dir;
}

/// Structural validation against the subset of JSON Schema the published
/// report schema uses: type / required / properties / enum /
/// additionalProperties-as-schema.
bool matches_schema(const json& value, const json& schema) {
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    if (t == "object" && !value.is_object()) return false;
    if (t == "string" && !value.is_string()) return false;
    if (t == "number" && !value.is_number()) return false;
    if (t == "boolean" && !value.is_boolean()) return false;
    if (t == "array" && !value.is_array()) return false;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& allowed : schema["enum"]) {
      if (value == allowed) hit = true;
    }
    if (!hit) return false;
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!value.contains(key.get<std::string>())) return false;
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (value.contains(key) && !matches_schema(value.at(key), sub)) return false;
    }
  }
  if (schema.contains("additionalProperties") && schema["additionalProperties"].is_object() &&
      value.is_object()) {
    const auto& props = schema.contains("properties") ? schema["properties"] : json::object();
    for (const auto& [key, sub] : value.items()) {
      if (!props.contains(key) && !matches_schema(sub, schema["additionalProperties"])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("matrix files round-trip bitwise") {
  Rng rng(501);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform01() * 9);
    const ComplexMatrix m = random_matrix(rng, n);
    const ComplexMatrix back = io::matrix_from_json(io::matrix_to_json(m, "test"));
    CHECK((back.array() == m.array()).all());
  }
  // awkward doubles survive the canonical dump too
  ComplexMatrix tricky(2, 2);
  tricky << Complex(0.1, -0.0), Complex(1e-308, 1e308), Complex(-2.5e-17, 1.0 / 3.0),
      Complex(0, 0);
  const auto j = json::parse(io::dump_canonical(io::matrix_to_json(tricky)));
  const ComplexMatrix back = io::matrix_from_json(j);
  CHECK((back.array() == tricky.array()).all());
}

TEST_CASE("vector files round-trip bitwise") {
  Rng rng(511);
  const ComplexVector v = random_vector(rng, 7);
  const ComplexVector back = io::vector_from_json(io::vector_to_json(v, "psi0"));
  CHECK((back.array() == v.array()).all());
}

TEST_CASE("chain and dyson documents round-trip through files") {
  const auto gen = dyson::generate_chain(4, 3, 601);
  const fs::path dir = temp_dir();

  io::write_json_file(dir / "chain.json", io::chain_to_json(gen.chain));
  const auto chain_file = io::chain_from_json(io::read_json_file(dir / "chain.json"));
  CHECK(chain_file.mode == chain::Mode::strict_pd);
  REQUIRE(chain_file.z.size() == 2);
  for (int j = 1; j <= 2; ++j) {
    CHECK((chain_file.z[static_cast<size_t>(j - 1)].array() == gen.chain.z(j).array()).all());
  }
  // the loaded chain reconstructs identically under the validating factory
  const auto rebuilt = chain::SpaceChain::make(chain_file.z, chain_file.mode);
  CHECK((rebuilt.theta().array() == gen.chain.theta().array()).all());

  io::write_json_file(dir / "dyson.json", io::dyson_to_json(gen.dyson));
  const auto factors = io::dyson_factors_from_json(io::read_json_file(dir / "dyson.json"));
  REQUIRE(factors.size() == 2);
  for (int j = 1; j <= 2; ++j) {
    CHECK((factors[static_cast<size_t>(j - 1)].array() == gen.dyson.omega(j).array()).all());
  }
}

TEST_CASE("canonical dumps are byte-stable") {
  const auto gen = dyson::generate_chain(3, 3, 602);
  const std::string a = io::dump_canonical(io::chain_to_json(gen.chain));
  const std::string b = io::dump_canonical(io::chain_to_json(gen.chain));
  CHECK(a == b);
  CHECK(a.back() == '\n');
}

TEST_CASE("parse errors name the offending field") {
  json j = io::matrix_to_json(ComplexMatrix::Identity(2, 2));

  json no_entries = j;
  no_entries.erase("entries");
  CHECK_THROWS_WITH_AS(io::matrix_from_json(no_entries),
                       doctest::Contains("matrix.entries"), ParseError);

  json short_entries = j;
  short_entries["entries"].erase(3);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(short_entries),
                       doctest::Contains("matrix.entries"), ParseError);

  json bad_pair = j;
  bad_pair["entries"][1] = json::array({1.0});
  CHECK_THROWS_WITH_AS(io::matrix_from_json(bad_pair),
                       doctest::Contains("entries[1]"), ParseError);

  json bad_kind = j;
  bad_kind["kind"] = "vector";
  CHECK_THROWS_WITH_AS(io::matrix_from_json(bad_kind), doctest::Contains("kind"),
                       ParseError);

  json bad_version = j;
  bad_version["schema_version"] = "99";
  CHECK_THROWS_WITH_AS(io::matrix_from_json(bad_version),
                       doctest::Contains("schema_version"), ParseError);

  json bad_dim = j;
  bad_dim["dim"] = "two";
  CHECK_THROWS_WITH_AS(io::matrix_from_json(bad_dim), doctest::Contains("matrix.dim"),
                       ParseError);

  CHECK_THROWS_AS(io::read_json_file("/nonexistent/path.json"), ParseError);

  const fs::path dir = temp_dir();
  std::ofstream(dir / "garbage.json") << "{ not json";
  CHECK_THROWS_AS(io::read_json_file(dir / "garbage.json"), ParseError);
}

TEST_CASE("digests are stable and content-sensitive") {
  CHECK(io::digest("") == "fnv1a:cbf29ce484222325");
  CHECK(io::digest("a") != io::digest("b"));
  const fs::path dir = temp_dir();
  std::ofstream(dir / "digest.bin", std::ios::binary) << "payload";
  CHECK(io::file_digest(dir / "digest.bin") == io::digest("payload"));
}

TEST_CASE("reports match the published schema") {
  const auto gen = dyson::generate_chain(3, 3, 603);
  const auto report = ledger::full_report(gen.model);
  const json doc = io::make_report("verify", {{"chain.json", io::digest("x")}},
                                   report.tolerance_used, report.pass,
                                   io::hermiticity_report_to_json(report));

  const fs::path schema_path =
      fs::path(TEST_SOURCE_DIR).parent_path() / "schemas" / "report.schema.json";
  const json schema = io::read_json_file(schema_path);
  CHECK(matches_schema(doc, schema));

  // pass is a pure function of results and tolerance
  CHECK(doc["pass"] == report.pass);
  CHECK(doc["results"]["max_residual"].get<double>() <= report.tolerance_used);

  json broken = doc;
  broken["command"] = "meditate";
  CHECK_FALSE(matches_schema(broken, schema));
  json missing = doc;
  missing.erase("tolerance");
  CHECK_FALSE(matches_schema(missing, schema));
}

TEST_CASE("trajectory and comparison serializations carry the plot columns") {
  const auto gen = dyson::generate_chain(3, 3, 604);
  Rng rng(521);
  const auto traj =
      dynamics::evolve(gen.model, random_vector(rng, 3), {0.0, 0.5, 1.0});
  const json jt = io::trajectory_to_json(traj, false);
  CHECK(jt["times"].size() == 3);
  CHECK(jt["norms_per_space"].size() == 3);
  CHECK_FALSE(jt.contains("states"));
  const json with_states = io::trajectory_to_json(traj, true);
  CHECK(with_states["states"].size() == 3);

  const auto hr = dyson::hermitize(gen.model, gen.dyson);
  const json sc = io::spectral_comparison_to_json(hr.spectra);
  CHECK(sc["count"] == 3);
  CHECK(sc["pairs"].size() == 3);
}
