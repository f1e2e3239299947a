#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cryptoherm/chain.hpp"
#include "cryptoherm/ledger.hpp"
#include "cryptoherm/matcore.hpp"

namespace cryptoherm::dyson {

/// The factor multiplet Ω_1 … Ω_{K-1} together with the composed map
/// Ω_{K-1}·…·Ω_2·Ω_1. Every factor is invertible under the condition cap.
struct DysonChain {
  int K = 2;
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> omegas;  ///< omegas[j-1] holds Ω_j
  ComplexMatrix composed;             ///< Ω_{K-1}·…·Ω_1, cached

  const ComplexMatrix& omega(int j) const;
};

/// Validates factors (square, same dim, invertible under the cap) and caches
/// the composed product.
DysonChain dyson_from_factors(std::vector<ComplexMatrix> omegas,
                              double condition_cap = matcore::kDefaultConditionCap);

/// The composed map of the chain; Θ = compose(d)† · compose(d) for chains
/// generated from d.
const ComplexMatrix& compose(const DysonChain& d);

/// Builds the Z multiplet top-down from Dyson factors: Z_{K-1} = Ω_{K-1}†Ω_{K-1},
/// then Z_j = Ω_j^{‡(j)}·Ω_j descending, where ‡(j) uses the partial metric
/// already assembled from Z_{K-1}…Z_{j+1}. The construction makes every
/// partial metric Hermitian positive definite, so the result passes the
/// validating chain constructor in strict_pd mode.
std::pair<chain::SpaceChain, DysonChain> chain_from_dyson(
    std::vector<ComplexMatrix> omegas, chain::Mode mode = chain::Mode::strict_pd,
    double condition_cap = matcore::kDefaultConditionCap);

struct HermitizationResult {
  ComplexMatrix h;                      ///< Ω H Ω⁻¹, Hermitian within tolerance
  matcore::SpectralComparison spectra;  ///< spectrum of H vs spectrum of h
  double hermiticity_residual = 0.0;    ///< ‖h − h†‖_F / ‖h‖_F
};

/// Hermitizes the model Hamiltonian through the composed Dyson map.
/// Requires that the Dyson chain generates the model's space chain and that
/// the model satisfies quasi-Hermiticity; throws ConsistencyError otherwise,
/// or when the result fails to be Hermitian within tolerance (which signals
/// an invalid input model).
HermitizationResult hermitize(const ledger::QuantumModel& model, const DysonChain& d,
                              double tol = -1.0);

/// The opposite flowchart: H = Ω⁻¹ 𝔥 Ω over the chain generated from d.
/// 𝔥 must be Hermitian within tolerance; the resulting model satisfies
/// quasi-Hermiticity by construction.
ledger::QuantumModel make_crypto_hermitian(const ComplexMatrix& hermitian_h,
                                           const DysonChain& d,
                                           chain::Mode mode = chain::Mode::strict_pd);

struct GeneratedTriple {
  chain::SpaceChain chain;
  DysonChain dyson;
  ledger::QuantumModel model;
};

/// Test-fixture generator. Draws each Ω_j from a complex Gaussian ensemble
/// (entries CN(0,1)/√dim) with singular values clamped into
/// [1/conditioning_cap, conditioning_cap], draws a Gaussian Hermitian 𝔥
/// normalized to ‖𝔥‖_F = √dim, and emits the valid triple with
/// H = Ω⁻¹ 𝔥 Ω. Deterministic per seed.
///
/// The default cap keeps the worst-case condition of the composed metric at
/// K = 6, dim = 16 low enough that every chain-algebra residual sits two
/// orders of magnitude under its verification tolerance; larger caps trade
/// that margin away (conditioning compounds through the partial metrics).
GeneratedTriple generate_chain(Eigen::Index dim, int K, std::uint64_t seed,
                               double conditioning_cap = 1.5);

/// Single-step baseline refactorization Ω_1 = √Θ of a strict_pd chain's
/// full metric: returns the equivalent K=2 Dyson chain with Ω_1†Ω_1 = Θ.
DysonChain sqrt_refactorize(const chain::SpaceChain& c);

/// Solution of the inverse problem H → Θ at small dimension.
struct MetricSolveResult {
  /// Orthonormal (Frobenius, real-linear) Hermitian basis of the solution
  /// space of H†Θ = ΘH. The physical metric is non-unique; this is the
  /// whole menu.
  std::vector<ComplexMatrix> hermitian_basis;
  /// Positive-definite representatives, trace-normalized to dim; the first
  /// one (when the spectrum is real) is the biorthogonal construction from
  /// left eigenvectors. Empty when no PD metric exists.
  std::vector<ComplexMatrix> pd_candidates;
};

/// Solves H†Θ − ΘH = 0 over Hermitian Θ by vectorization (null space of the
/// n²×n² system), then scans for positive-definite representatives: the
/// canonical biorthogonal metric plus sign/pair/centroid combinations of the
/// basis. Rejects defective H (eigenvector condition beyond 1e8) with a
/// SolverError rather than approximating.
MetricSolveResult metric_from_hamiltonian(const ComplexMatrix& h, double tol = 1e-10,
                                          Eigen::Index dim_cap = 12);

}  // namespace cryptoherm::dyson
