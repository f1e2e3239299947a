#include "cryptoherm/dynamics.hpp"

#include <cmath>

namespace cryptoherm::dynamics {

namespace {

void require_state(const ledger::QuantumModel& model, const ComplexVector& psi,
                   const char* op) {
  if (psi.size() != model.chain.dim()) {
    throw ShapeError(std::string(op) + ": state length " + std::to_string(psi.size()) +
                     ", model dimension " + std::to_string(model.chain.dim()));
  }
  if (psi.norm() == 0.0) {
    throw ZeroNormError(std::string(op) + ": state vector is zero");
  }
}

void require_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) {
    throw InvalidParameterError("evolve: empty time grid");
  }
  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw InvalidParameterError("evolve: time grid must be strictly increasing");
    }
  }
}

Complex physical_overlap(const ledger::QuantumModel& model, const ComplexVector& psi) {
  const Complex denom = model.chain.inner_product(psi, psi, 0);
  const double floor =
      1e-13 * psi.squaredNorm() * std::max(model.chain.theta().norm(), 1e-300);
  if (std::abs(denom) <= floor) {
    throw ZeroNormError("projector: state has zero physical norm (possible only with "
                        "an indefinite metric)");
  }
  return denom;
}

}  // namespace

StateTrajectory evolve(const ledger::QuantumModel& model, const ComplexVector& psi0,
                       const std::vector<double>& t_grid) {
  require_state(model, psi0, "evolve");
  require_grid(t_grid);
  const auto& c = model.chain;
  StateTrajectory traj;
  traj.times = t_grid;
  traj.states.reserve(t_grid.size());
  for (int j = 0; j <= c.K() - 1; ++j) traj.norms_per_space[j] = {};

  const Complex minus_i(0.0, -1.0);
  for (const double t : t_grid) {
    const ComplexMatrix u = matcore::expm(minus_i * t * model.h);
    ComplexVector psi = u * psi0;
    for (int j = 0; j <= c.K() - 1; ++j) {
      traj.norms_per_space[j].push_back(c.inner_product(psi, psi, j).real());
    }
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

ComplexMatrix projector(const ledger::QuantumModel& model, const ComplexVector& psi) {
  require_state(model, psi, "projector");
  const Complex denom = physical_overlap(model, psi);
  return (psi * model.chain.bra(psi, 0)) / denom;
}

DensityMatrix build_density(const ledger::QuantumModel& model,
                            const std::vector<ComplexVector>& states,
                            const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw InvalidParameterError("build_density: need equally many states and weights");
  }
  double sum = 0.0;
  for (const double p : weights) {
    if (!(p > 0.0)) throw InvalidParameterError("build_density: weights must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidParameterError("build_density: weights sum to " + std::to_string(sum) +
                                ", expected 1 within 1e-12");
  }
  const auto n = model.chain.dim();
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (size_t k = 0; k < states.size(); ++k) {
    require_state(model, states[k], "build_density");
    const Complex denom = physical_overlap(model, states[k]);
    rho += (weights[k] / denom) * (states[k] * model.chain.bra(states[k], 0));
  }
  return {std::move(rho), weights, states};
}

std::vector<DensityMatrix> evolve_density(const ledger::QuantumModel& model,
                                          const std::vector<ComplexVector>& states,
                                          const std::vector<double>& weights,
                                          const std::vector<double>& t_grid) {
  require_grid(t_grid);
  // share one exponential per grid time across constituents
  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  const Complex minus_i(0.0, -1.0);
  for (const double t : t_grid) {
    const ComplexMatrix u = matcore::expm(minus_i * t * model.h);
    std::vector<ComplexVector> evolved;
    evolved.reserve(states.size());
    for (const auto& psi : states) evolved.push_back(u * psi);
    out.push_back(build_density(model, evolved, weights));
  }
  return out;
}

}  // namespace cryptoherm::dynamics
