#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cryptoherm/chain.hpp"
#include "cryptoherm/dynamics.hpp"
#include "cryptoherm/dyson.hpp"
#include "cryptoherm/ledger.hpp"
#include "cryptoherm/matcore.hpp"
#include "cryptoherm/models.hpp"

namespace cryptoherm::io {

/// Version string written into every emitted document.
inline constexpr const char* kSchemaVersion = "1";

// Matrices and vectors are stored as row-major arrays of [re, im] pairs;
// square matrices carry a single "dim". Writing is canonical (sorted keys,
// two-space indent, trailing newline, shortest round-trip doubles), so equal
// values produce byte-identical files.

nlohmann::json matrix_to_json(const ComplexMatrix& m, const std::string& name = "");
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& context = "matrix");

nlohmann::json vector_to_json(const ComplexVector& v, const std::string& name = "");
ComplexVector vector_from_json(const nlohmann::json& j, const std::string& context = "vector");

nlohmann::json chain_to_json(const chain::SpaceChain& c);

/// Raw parse of a chain document: operators plus mode, no validation beyond
/// shape. Feed to SpaceChain::make or ::unchecked depending on intent.
struct ChainFile {
  std::vector<ComplexMatrix> z;
  chain::Mode mode = chain::Mode::strict_pd;
};
ChainFile chain_from_json(const nlohmann::json& j);

nlohmann::json dyson_to_json(const dyson::DysonChain& d);
std::vector<ComplexMatrix> dyson_factors_from_json(const nlohmann::json& j);

std::string dump_canonical(const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// FNV-1a 64-bit content digest, "fnv1a:..." hex; used for report input pins.
std::string digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

// --- run reports ----------------------------------------------------------
// The shape is published in schemas/report.schema.json; `pass` is a pure
// function of results and tolerance, computed by the caller.

nlohmann::json make_report(const std::string& command,
                           const std::map<std::string, std::string>& input_digests,
                           double tolerance, bool pass, nlohmann::json results);

nlohmann::json hermiticity_report_to_json(const ledger::HermiticityReport& report);
nlohmann::json spectral_comparison_to_json(const matcore::SpectralComparison& cmp);
nlohmann::json trajectory_to_json(const dynamics::StateTrajectory& traj,
                                  bool include_states);
nlohmann::json bg_comparison_to_json(const models::BgComparison& cmp);

}  // namespace cryptoherm::io
