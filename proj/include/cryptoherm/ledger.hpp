#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cryptoherm/chain.hpp"
#include "cryptoherm/matcore.hpp"

namespace cryptoherm::ledger {

/// A space chain bundled with a Hamiltonian H = Z_0 and optional extra
/// observable candidates. Plain aggregate: verification routines report on
/// any model; use `verified_model` when the quasi-Hermiticity of H against
/// the full metric must be certified up front.
struct QuantumModel {
  chain::SpaceChain chain;
  ComplexMatrix h;
  std::vector<std::pair<std::string, ComplexMatrix>> extra_observables;
};

/// Builds a model and throws ConsistencyError unless H†Θ = ΘH holds within
/// tol (tol < 0 selects 1e-10·dim).
QuantumModel verified_model(chain::SpaceChain chain, ComplexMatrix h,
                            std::vector<std::pair<std::string, ComplexMatrix>> extra = {},
                            double tol = -1.0);

double default_tolerance(Eigen::Index dim);

/// One cell of the auxiliary-Hermiticity table: the tier-`tier` descending
/// product at row j, checked self-adjoint in R_j. Tier 0 is Z_j itself,
/// tiers 1..3 are named Y, X, W; deeper tiers are named by index.
struct Table1Cell {
  int j = 0;
  int tier = 0;
  std::string name;
  double residual = 0.0;
};

/// One cell of the pseudo-Hermiticity table: Z_k^{‡(j)}·(Z_j…Z_{k+1}) =
/// (Z_j…Z_{k+1})·Z_k for k < j; k = 0 involves the Hamiltonian.
struct Table2Cell {
  int j = 0;
  int k = 0;
  double residual = 0.0;
};

struct ObservabilityEntry {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

/// Residuals for every auxiliary (pseudo-)Hermiticity relation plus
/// positivity certificates and observability verdicts. All residuals are
/// relative (Frobenius-normalized by operand norms); `pass` is true iff all
/// asserted residuals are <= tolerance_used.
struct HermiticityReport {
  std::vector<Table1Cell> table1;
  std::vector<Table2Cell> table2;
  std::map<int, chain::Positivity> positivity;
  std::vector<ObservabilityEntry> observability;
  double tolerance_used = 0.0;
  bool pass = false;
  double max_residual = 0.0;
  std::string worst_cell;
};

std::string tier_name(int tier);

/// The tier-fold left-descending product Z_j·Z_{j-1}·…·Z_{j-tier}, with
/// Z_0 = H by convention. Requires tier >= 1 and j - tier >= 0.
ComplexMatrix product_tier(const chain::SpaceChain& chain, const ComplexMatrix& h,
                           int j, int tier);

std::vector<Table1Cell> verify_table1(const QuantumModel& model, double tol = -1.0);
std::vector<Table2Cell> verify_table2(const QuantumModel& model, double tol = -1.0);

/// Crypto-Hermiticity of lambda against the full physical metric:
/// residual = ‖Λ†Θ − ΘΛ‖_F / (‖Λ‖_F ‖Θ‖_F); verdict pass iff <= tol.
std::pair<double, bool> observability_check(const QuantumModel& model,
                                            const ComplexMatrix& lambda,
                                            double tol = -1.0);

/// Verdicts for H, Θ, the descending tail products Z_m…Z_1 (observable by
/// exact algebra), the generically excluded candidates Z_2, Z_3, Z_3Z_2,
/// and any extra observables carried by the model.
std::vector<ObservabilityEntry> classify_canonical_observables(const QuantumModel& model,
                                                               double tol = -1.0);

/// Full report: both tables, positivity per space, canonical observability.
HermiticityReport full_report(const QuantumModel& model, double tol = -1.0);

}  // namespace cryptoherm::ledger
