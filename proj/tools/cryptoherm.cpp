// Command-line front end: deterministic generation of valid chains, full
// (pseudo-)Hermiticity verification, Hermitization, time evolution, the
// Buslaev–Grecchi comparison, and the inverse metric problem.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage/format error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cryptoherm/dynamics.hpp"
#include "cryptoherm/dyson.hpp"
#include "cryptoherm/io.hpp"
#include "cryptoherm/ledger.hpp"
#include "cryptoherm/models.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cryptoherm;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct ToleranceFlag {
  std::optional<double> cli;

  double resolve(Eigen::Index dim) const {
    if (cli) return *cli;
    if (const char* env = std::getenv("CRYPTOHERM_TOL")) {
      try {
        return std::stod(env);
      } catch (const std::exception&) {
        throw InvalidParameterError("CRYPTOHERM_TOL is not a number: " + std::string(env));
      }
    }
    return ledger::default_tolerance(dim);
  }
};

chain::Mode parse_mode(const std::string& s) {
  if (s == "strict-pd") return chain::Mode::strict_pd;
  if (s == "krein") return chain::Mode::krein_diagnostic;
  throw InvalidParameterError("--mode: expected strict-pd or krein, got " + s);
}

std::vector<double> parse_weights(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidParameterError("--weights: not a number: " + item);
    }
  }
  if (out.empty()) throw InvalidParameterError("--weights: empty list");
  return out;
}

std::vector<double> time_grid(double t_max, int steps) {
  std::vector<double> t;
  t.reserve(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) t.push_back(t_max * i / steps);
  return t;
}

ledger::QuantumModel load_model(const fs::path& chain_path, const fs::path& h_path) {
  const auto chain_file = io::chain_from_json(io::read_json_file(chain_path));
  auto c = chain::SpaceChain::unchecked(chain_file.z, chain_file.mode);
  auto h = io::matrix_from_json(io::read_json_file(h_path), "hamiltonian");
  if (h.rows() != c.dim()) {
    throw ParseError("hamiltonian.dim: expected " + std::to_string(c.dim()) + ", got " +
                     std::to_string(h.rows()));
  }
  return ledger::QuantumModel{std::move(c), std::move(h), {}};
}

void emit_report(const json& report, const std::optional<fs::path>& out,
                 const std::string& text, const std::string& format) {
  if (format == "text") {
    std::cout << text;
  } else {
    std::cout << io::dump_canonical(report);
  }
  if (out) io::write_json_file(*out, report);
}

std::string verify_text(const ledger::HermiticityReport& r) {
  std::ostringstream os;
  os << "tolerance " << matcore::fmt_sci(r.tolerance_used) << "\n";
  os << "table1 (self-adjointness of descending products in R_j)\n";
  for (const auto& c : r.table1) {
    os << "  j=" << c.j << " " << c.name << "  " << matcore::fmt_sci(c.residual)
       << (c.residual <= r.tolerance_used ? "" : "  FAIL") << "\n";
  }
  os << "table2 (pseudo-Hermiticity of Z_k in R_j)\n";
  for (const auto& c : r.table2) {
    os << "  j=" << c.j << " k=" << c.k << "  " << matcore::fmt_sci(c.residual)
       << (c.residual <= r.tolerance_used ? "" : "  FAIL") << "\n";
  }
  os << "positivity\n";
  for (const auto& [j, p] : r.positivity) {
    os << "  Theta_(K-1," << j << "): " << chain::to_string(p) << "\n";
  }
  os << "observability\n";
  for (const auto& e : r.observability) {
    os << "  " << e.name << "  " << matcore::fmt_sci(e.residual)
       << (e.pass ? "  pass" : "  fail") << "\n";
  }
  os << "worst cell: " << r.worst_cell << " (" << matcore::fmt_sci(r.max_residual) << ")\n";
  os << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string bg_text(const models::BgComparison& c) {
  std::ostringstream os;
  os << "status: " << c.status << "\n";
  auto grid = [&](const models::GridComparison& g, const char* label) {
    os << label << " N=" << g.n_grid << " retained=" << g.bg_retained
       << " max|Im|=" << matcore::fmt_sci(g.max_im_retained) << "\n";
    for (const auto& p : g.comparison.pairs) {
      os << "  lambda_bg=" << p.lambda_a.real() << "  lambda_q=" << p.lambda_b.real()
         << "  abs_dev=" << matcore::fmt_sci(p.abs_dev)
         << "  rel_dev=" << matcore::fmt_sci(p.rel_dev) << "\n";
    }
  };
  if (c.coarse.filter_ok) grid(c.coarse, "coarse");
  if (c.fine.filter_ok) grid(c.fine, "fine");
  os << "refinement_improved=" << (c.refinement_improved ? "yes" : "no")
     << " ground_level_improved=" << (c.ground_level_improved ? "yes" : "no") << "\n";
  return os.str();
}

// --- subcommands -----------------------------------------------------------

int cmd_generate(Eigen::Index dim, int k, std::uint64_t seed, double cond_cap,
                 const std::string& mode_str, const ToleranceFlag& tol_flag,
                 const fs::path& out_dir) {
  const chain::Mode mode = parse_mode(mode_str);
  auto triple = dyson::generate_chain(dim, k, seed, cond_cap);
  if (mode == chain::Mode::krein_diagnostic) {
    // regenerate the chain object under the requested mode tag
    auto [c, d] = dyson::chain_from_dyson(triple.dyson.omegas, mode);
    triple.chain = c;
    triple.model.chain = std::move(c);
  }
  fs::create_directories(out_dir);
  io::write_json_file(out_dir / "chain.json", io::chain_to_json(triple.chain));
  io::write_json_file(out_dir / "dyson.json", io::dyson_to_json(triple.dyson));
  io::write_json_file(out_dir / "hamiltonian.json", io::matrix_to_json(triple.model.h));

  const double tol = tol_flag.resolve(dim);
  const auto report = ledger::full_report(triple.model, tol);
  std::map<std::string, std::string> inputs;
  for (const char* name : {"chain.json", "dyson.json", "hamiltonian.json"}) {
    inputs[name] = io::file_digest(out_dir / name);
  }
  json results = io::hermiticity_report_to_json(report);
  results["dim"] = dim;
  results["k"] = k;
  results["seed"] = seed;
  results["conditioning_cap"] = cond_cap;
  results["theta_condition"] = triple.chain.theta_condition(0);
  io::write_json_file(out_dir / "report.json",
                      io::make_report("generate", inputs, tol, report.pass, results));
  std::cout << "wrote chain.json dyson.json hamiltonian.json report.json to "
            << out_dir.string() << "\n";
  return report.pass ? kExitPass : kExitVerificationFailure;
}

int cmd_verify(const fs::path& chain_path, const fs::path& h_path,
               const ToleranceFlag& tol_flag, const std::optional<fs::path>& out,
               const std::string& format) {
  const auto model = load_model(chain_path, h_path);
  const double tol = tol_flag.resolve(model.chain.dim());
  const auto report = ledger::full_report(model, tol);
  const json doc = io::make_report("verify",
                                   {{chain_path.filename().string(), io::file_digest(chain_path)},
                                    {h_path.filename().string(), io::file_digest(h_path)}},
                                   tol, report.pass, io::hermiticity_report_to_json(report));
  emit_report(doc, out, verify_text(report), format);
  return report.pass ? kExitPass : kExitVerificationFailure;
}

int cmd_hermitize(const fs::path& chain_path, const fs::path& dyson_path,
                  const fs::path& h_path, const ToleranceFlag& tol_flag,
                  const fs::path& out_dir) {
  const auto model = load_model(chain_path, h_path);
  const auto factors = io::dyson_factors_from_json(io::read_json_file(dyson_path));
  const auto d = dyson::dyson_from_factors(factors);
  const double tol = tol_flag.resolve(model.chain.dim());
  const auto result = dyson::hermitize(model, d, tol);

  fs::create_directories(out_dir);
  io::write_json_file(out_dir / "h.json", io::matrix_to_json(result.h));
  io::write_json_file(out_dir / "comparison.json",
                      io::spectral_comparison_to_json(result.spectra));
  const bool pass = result.hermiticity_residual <= tol && result.spectra.max_scaled_dev <= 1e-8;
  json results{{"hermiticity_residual", result.hermiticity_residual},
               {"spectral_comparison", io::spectral_comparison_to_json(result.spectra)}};
  io::write_json_file(
      out_dir / "report.json",
      io::make_report("hermitize",
                      {{chain_path.filename().string(), io::file_digest(chain_path)},
                       {dyson_path.filename().string(), io::file_digest(dyson_path)},
                       {h_path.filename().string(), io::file_digest(h_path)}},
                      tol, pass, results));
  std::cout << "hermiticity residual " << matcore::fmt_sci(result.hermiticity_residual)
            << ", spectral deviation " << matcore::fmt_sci(result.spectra.max_scaled_dev)
            << "\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

int cmd_evolve(const fs::path& chain_path, const fs::path& h_path, const fs::path& psi_path,
               double t_max, int steps, bool include_states,
               const ToleranceFlag& tol_flag, const fs::path& out_path,
               const std::string& format) {
  auto loaded = load_model(chain_path, h_path);
  const double tol = tol_flag.resolve(loaded.chain.dim());
  // evolution presumes a verified model
  const auto model = ledger::verified_model(loaded.chain, loaded.h, {}, tol);
  const auto psi0 = io::vector_from_json(io::read_json_file(psi_path), "psi0");
  const auto traj = dynamics::evolve(model, psi0, time_grid(t_max, steps));

  const auto& physical = traj.norms_per_space.at(0);
  double lo = physical.front(), hi = physical.front();
  for (const double x : physical) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double drift = (hi - lo) / std::max(std::abs(physical.front()), 1e-300);
  const bool pass = drift <= 1e-9;

  json results = io::trajectory_to_json(traj, include_states);
  results["physical_norm_drift"] = drift;
  const json doc = io::make_report(
      "evolve",
      {{chain_path.filename().string(), io::file_digest(chain_path)},
       {h_path.filename().string(), io::file_digest(h_path)},
       {psi_path.filename().string(), io::file_digest(psi_path)}},
      tol, pass, results);
  io::write_json_file(out_path, doc);
  if (format == "text") {
    std::ostringstream os;
    os << "t";
    for (const auto& [j, _] : traj.norms_per_space) os << "\tnorm2[" << j << "]";
    os << "\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
      os << traj.times[i];
      for (const auto& [_, norms] : traj.norms_per_space) os << "\t" << norms[i];
      os << "\n";
    }
    std::cout << os.str();
  }
  std::cout << "physical norm drift " << matcore::fmt_sci(drift) << " over t in [0, " << t_max
            << "]\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

int cmd_density(const fs::path& chain_path, const fs::path& h_path,
                const std::vector<fs::path>& state_paths, const std::string& weights_csv,
                double t_max, int steps, const ToleranceFlag& tol_flag,
                const fs::path& out_path) {
  auto loaded = load_model(chain_path, h_path);
  const double tol = tol_flag.resolve(loaded.chain.dim());
  const auto model = ledger::verified_model(loaded.chain, loaded.h, {}, tol);
  std::vector<ComplexVector> states;
  std::map<std::string, std::string> inputs{
      {chain_path.filename().string(), io::file_digest(chain_path)},
      {h_path.filename().string(), io::file_digest(h_path)}};
  for (const auto& p : state_paths) {
    states.push_back(io::vector_from_json(io::read_json_file(p), "state"));
    inputs[p.filename().string()] = io::file_digest(p);
  }
  const auto weights = parse_weights(weights_csv);
  const auto rho_t = dynamics::evolve_density(model, states, weights, time_grid(t_max, steps));

  double max_trace_dev = 0.0;
  json traces = json::array();
  for (const auto& d : rho_t) {
    const Complex tr = d.rho.trace();
    traces.push_back({tr.real(), tr.imag()});
    max_trace_dev = std::max(max_trace_dev, std::abs(tr - Complex(1, 0)));
  }
  const bool pass = max_trace_dev <= 1e-9;
  const json doc = io::make_report("density", inputs, tol, pass,
                                   json{{"traces", traces},
                                        {"max_trace_deviation", max_trace_dev},
                                        {"times", time_grid(t_max, steps)},
                                        {"weights", weights}});
  io::write_json_file(out_path, doc);
  std::cout << "max trace deviation " << matcore::fmt_sci(max_trace_dev) << "\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

int cmd_bg(const models::BGParams& params, int levels, bool self_compare,
           const std::optional<fs::path>& out, const std::string& format) {
  if (self_compare) {
    const auto q = models::q_lowest_eigenvalues(params, levels);
    const std::vector<Complex> qc(q.begin(), q.end());
    const auto cmp = matcore::compare_spectra(qc, qc);
    const json doc = io::make_report("bg", {}, 0.0, cmp.max_abs_dev == 0.0,
                                     json{{"self_comparison", true},
                                          {"comparison", io::spectral_comparison_to_json(cmp)}});
    emit_report(doc, out, "self-comparison max deviation 0\n", format);
    return cmp.max_abs_dev == 0.0 ? kExitPass : kExitVerificationFailure;
  }
  const auto cmp = models::compare_bg_spectra(params, levels);
  const bool pass = cmp.status == "ok";
  const json doc =
      io::make_report("bg", {}, params.reality_filter, pass, io::bg_comparison_to_json(cmp));
  emit_report(doc, out, bg_text(cmp), format);
  return pass ? kExitPass : kExitVerificationFailure;
}

int cmd_metric_solve(const fs::path& h_path, const ToleranceFlag& tol_flag,
                     Eigen::Index dim_cap, const std::optional<fs::path>& out,
                     const std::string& format) {
  const auto h = io::matrix_from_json(io::read_json_file(h_path), "hamiltonian");
  const double tol = tol_flag.resolve(h.rows());
  const auto result = dyson::metric_from_hamiltonian(h, tol, dim_cap);

  json candidates = json::array();
  for (const auto& theta : result.pd_candidates) {
    candidates.push_back(io::matrix_to_json(theta));
  }
  json results{{"solution_space_dimension", result.hermitian_basis.size()},
               {"pd_found", !result.pd_candidates.empty()},
               {"pd_candidates", candidates}};
  // an empty PD set is a legitimate query answer, not a failure
  const json doc = io::make_report(
      "metric-solve", {{h_path.filename().string(), io::file_digest(h_path)}}, tol, true,
      results);
  std::ostringstream os;
  os << "solution space dimension " << result.hermitian_basis.size() << ", PD candidates "
     << result.pd_candidates.size() << "\n";
  emit_report(doc, out, os.str(), format);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chains of inner-product spaces for crypto-Hermitian Hamiltonians"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  ToleranceFlag tol;
  auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol.cli,
                    "verification tolerance (default 1e-10*dim; env CRYPTOHERM_TOL overrides)");
  };
  std::string format = "json";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  // generate
  auto* gen = app.add_subcommand("generate", "draw a valid chain, Dyson factors and Hamiltonian");
  Eigen::Index g_dim = 0;
  int g_k = 0;
  std::uint64_t g_seed = 0;
  double g_cap = 1.5;
  std::string g_mode = "strict-pd";
  std::string g_out;
  gen->add_option("--dim", g_dim, "matrix dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", g_k, "number of inner-product spaces, K >= 2")
      ->required()
      ->check(CLI::Range(2, 1000));
  gen->add_option("--seed", g_seed, "RNG seed (mandatory: no entropy defaults)")->required();
  gen->add_option("--cond-cap", g_cap, "singular-value clamp per Dyson factor");
  gen->add_option("--mode", g_mode, "chain mode")->check(CLI::IsMember({"strict-pd", "krein"}));
  gen->add_option("--out", g_out, "output directory")->required();
  add_tol(gen);

  // verify
  auto* ver = app.add_subcommand("verify", "full Table-1/Table-2/observability report");
  std::string v_chain, v_h, v_out;
  ver->add_option("--chain", v_chain, "chain JSON file")->required();
  ver->add_option("--hamiltonian", v_h, "Hamiltonian matrix JSON file")->required();
  ver->add_option("--out", v_out, "write the report JSON here as well");
  add_tol(ver);
  add_format(ver);

  // hermitize
  auto* her = app.add_subcommand("hermitize", "map H to its Hermitian partner via the composed Dyson map");
  std::string h_chain, h_dyson, h_h, h_out;
  her->add_option("--chain", h_chain, "chain JSON file")->required();
  her->add_option("--dyson", h_dyson, "Dyson factor JSON file")->required();
  her->add_option("--hamiltonian", h_h, "Hamiltonian JSON file")->required();
  her->add_option("--out", h_out, "output directory")->required();
  add_tol(her);

  // evolve
  auto* evo = app.add_subcommand("evolve", "Schrödinger evolution with per-space norm columns");
  std::string e_chain, e_h, e_psi, e_out;
  double e_tmax = 10.0;
  int e_steps = 0;
  bool e_states = false;
  evo->add_option("--chain", e_chain)->required();
  evo->add_option("--hamiltonian", e_h)->required();
  evo->add_option("--psi0", e_psi, "initial state vector JSON file")->required();
  evo->add_option("--t-max", e_tmax, "final time")->check(CLI::PositiveNumber);
  evo->add_option("--steps", e_steps, "number of grid intervals")
      ->required()
      ->check(CLI::Range(1, 1000000));
  evo->add_flag("--include-states", e_states, "embed state vectors in the output");
  evo->add_option("--out", e_out, "trajectory report file")->required();
  add_tol(evo);
  add_format(evo);

  // density
  auto* den = app.add_subcommand("density", "statistical-mixture evolution");
  std::string d_chain, d_h, d_weights, d_out;
  std::vector<std::string> d_states;
  double d_tmax = 10.0;
  int d_steps = 10;
  den->add_option("--chain", d_chain)->required();
  den->add_option("--hamiltonian", d_h)->required();
  den->add_option("--state", d_states, "constituent state file (repeatable)")->required();
  den->add_option("--weights", d_weights, "comma-separated probabilities, sum 1")->required();
  den->add_option("--t-max", d_tmax)->check(CLI::PositiveNumber);
  den->add_option("--steps", d_steps)->check(CLI::Range(1, 1000000));
  den->add_option("--out", d_out, "density report file")->required();
  add_tol(den);

  // bg
  auto* bg = app.add_subcommand("bg", "Buslaev-Grecchi isospectral pair comparison");
  models::BGParams bgp;
  int bg_levels = 3;
  bool bg_self = false;
  std::string bg_out;
  bg->add_option("--g", bgp.g, "coupling");
  bg->add_option("--j", bgp.j_param, "angular parameter");
  bg->add_option("--eta", bgp.eta, "contour shift");
  bg->add_option("--box", bgp.box_halfwidth, "half-width of the Dirichlet box");
  bg->add_option("--n-grid", bgp.n_grid, "interior grid points (>= 16)");
  bg->add_option("--levels", bg_levels, "levels to compare (<= 8)");
  bg->add_option("--reality-filter", bgp.reality_filter, "|Im| threshold, relative");
  bg->add_flag("--self", bg_self, "compare the self-adjoint partner with itself");
  bg->add_option("--out", bg_out, "comparison report file");
  add_format(bg);

  // metric-solve
  auto* met = app.add_subcommand("metric-solve", "solve H†Θ = ΘH for positive-definite Θ");
  std::string m_h, m_out;
  Eigen::Index m_cap = 12;
  met->add_option("--hamiltonian", m_h)->required();
  met->add_option("--dim-cap", m_cap, "dimension cap");
  met->add_option("--out", m_out, "report file");
  add_tol(met);
  add_format(met);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(g_dim, g_k, g_seed, g_cap, g_mode, tol, g_out);
    if (*ver) {
      return cmd_verify(v_chain, v_h, tol,
                        v_out.empty() ? std::nullopt : std::optional<fs::path>(v_out), format);
    }
    if (*her) return cmd_hermitize(h_chain, h_dyson, h_h, tol, h_out);
    if (*evo) return cmd_evolve(e_chain, e_h, e_psi, e_tmax, e_steps, e_states, tol, e_out, format);
    if (*den) return cmd_density(d_chain, d_h, {d_states.begin(), d_states.end()}, d_weights,
                                 d_tmax, d_steps, tol, d_out);
    if (*bg) {
      return cmd_bg(bgp, bg_levels, bg_self,
                    bg_out.empty() ? std::nullopt : std::optional<fs::path>(bg_out), format);
    }
    if (*met) {
      return cmd_metric_solve(m_h, tol, m_cap,
                              m_out.empty() ? std::nullopt : std::optional<fs::path>(m_out),
                              format);
    }
  } catch (const ConsistencyError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerificationFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
