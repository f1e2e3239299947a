#pragma once

#include <map>
#include <vector>

#include "cryptoherm/ledger.hpp"
#include "cryptoherm/matcore.hpp"

namespace cryptoherm::dynamics {

/// ψ(t) = exp(−iHt)·ψ₀ sampled on a time grid (ħ = 1, dimensionless time).
/// One exponential per grid time, no stepping. norms_per_space[j][i] holds
/// the squared norm ⟨_[j]ψ(t_i)|ψ(t_i)⟩ (real part); j = 0 is the physical
/// one and stays constant for verified models, while intermediate norms vary.
struct StateTrajectory {
  std::vector<double> times;
  std::vector<ComplexVector> states;
  std::map<int, std::vector<double>> norms_per_space;
};

StateTrajectory evolve(const ledger::QuantumModel& model, const ComplexVector& psi0,
                       const std::vector<double>& t_grid);

/// π = |ψ⟩⟨_[0]ψ| / ⟨_[0]ψ|ψ⟩: idempotent, physical trace one.
ComplexMatrix projector(const ledger::QuantumModel& model, const ComplexVector& psi);

/// ρ = Σ_k p_k |ψ^(k)⟩⟨_[0]ψ^(k)| / ⟨_[0]ψ^(k)|ψ^(k)⟩ with Σ_k p_k = 1.
/// Generally non-Hermitian in the computational space; tr ρ = 1.
struct DensityMatrix {
  ComplexMatrix rho;
  std::vector<double> weights;
  std::vector<ComplexVector> constituents;
};

DensityMatrix build_density(const ledger::QuantumModel& model,
                            const std::vector<ComplexVector>& states,
                            const std::vector<double>& weights);

/// Evolves every constituent state and reassembles ρ at each grid time.
std::vector<DensityMatrix> evolve_density(const ledger::QuantumModel& model,
                                          const std::vector<ComplexVector>& states,
                                          const std::vector<double>& weights,
                                          const std::vector<double>& t_grid);

}  // namespace cryptoherm::dynamics
