#include "cryptoherm/ledger.hpp"

#include <algorithm>
#include <cmath>

namespace cryptoherm::ledger {

namespace {

void require_model_shapes(const QuantumModel& model) {
  const auto dim = model.chain.dim();
  if (model.h.rows() != dim || model.h.cols() != dim) {
    throw ShapeError("model: H is " + std::to_string(model.h.rows()) + "x" +
                     std::to_string(model.h.cols()) + ", chain dimension is " +
                     std::to_string(dim));
  }
}

double resolve_tol(const QuantumModel& model, double tol) {
  return tol < 0.0 ? default_tolerance(model.chain.dim()) : tol;
}

/// ‖a − b‖_F / max(‖a‖_F, ‖b‖_F)
double residual_of(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matcore::rel_diff(a, b);
}

}  // namespace

double default_tolerance(Eigen::Index dim) {
  return 1e-10 * static_cast<double>(dim);
}

QuantumModel verified_model(chain::SpaceChain chain, ComplexMatrix h,
                            std::vector<std::pair<std::string, ComplexMatrix>> extra,
                            double tol) {
  QuantumModel model{std::move(chain), std::move(h), std::move(extra)};
  require_model_shapes(model);
  const double t = resolve_tol(model, tol);
  const auto [res, ok] = observability_check(model, model.h, t);
  if (!ok) {
    throw ConsistencyError("model: Hamiltonian fails quasi-Hermiticity against Theta, residual " +
                           std::to_string(res) + " > tol " + std::to_string(t));
  }
  return model;
}

std::string tier_name(int tier) {
  switch (tier) {
    case 0: return "Z";
    case 1: return "Y";
    case 2: return "X";
    case 3: return "W";
    default: return "tier" + std::to_string(tier);
  }
}

ComplexMatrix product_tier(const chain::SpaceChain& chain, const ComplexMatrix& h,
                           int j, int tier) {
  if (tier < 1) {
    throw InvalidParameterError("product_tier: tier must be >= 1, got " +
                                std::to_string(tier));
  }
  if (j > chain.K() - 1 || j - tier < 0) {
    throw InvalidParameterError("product_tier: (j=" + std::to_string(j) +
                                ", tier=" + std::to_string(tier) +
                                ") out of range for K=" + std::to_string(chain.K()));
  }
  if (h.rows() != chain.dim() || h.cols() != chain.dim()) {
    throw ShapeError("product_tier: H dimension mismatch");
  }
  ComplexMatrix p = j == 0 ? h : chain.z(j);
  for (int m = j - 1; m >= j - tier; --m) {
    p = p * (m == 0 ? h : chain.z(m));
  }
  return p;
}

std::vector<Table1Cell> verify_table1(const QuantumModel& model, double tol) {
  (void)resolve_tol(model, tol);
  require_model_shapes(model);
  const auto& chain = model.chain;
  std::vector<Table1Cell> cells;
  for (int j = 1; j <= chain.K() - 1; ++j) {
    for (int tier = 0; tier <= j; ++tier) {
      const ComplexMatrix t =
          tier == 0 ? chain.z(j) : product_tier(chain, model.h, j, tier);
      // T = T^{‡(j)} in multiplicative form: T†Θ_(K-1,j) = Θ_(K-1,j)T
      const auto& theta = chain.partial_metric(j).theta;
      const double den = std::max(t.norm() * theta.norm(), 1e-300);
      const double res = (t.adjoint() * theta - theta * t).norm() / den;
      cells.push_back({j, tier, tier_name(tier), res});
    }
  }
  return cells;
}

std::vector<Table2Cell> verify_table2(const QuantumModel& model, double tol) {
  (void)resolve_tol(model, tol);
  require_model_shapes(model);
  const auto& chain = model.chain;
  std::vector<Table2Cell> cells;
  for (int j = 1; j <= chain.K() - 1; ++j) {
    for (int k = 0; k < j; ++k) {
      // descending product P = Z_j·…·Z_{k+1}
      ComplexMatrix p = chain.z(j);
      for (int m = j - 1; m >= k + 1; --m) p = p * chain.z(m);
      const ComplexMatrix& zk = k == 0 ? model.h : chain.z(k);
      const ComplexMatrix lhs = chain.conjugate(zk, j) * p;
      const ComplexMatrix rhs = p * zk;
      cells.push_back({j, k, residual_of(lhs, rhs)});
    }
  }
  return cells;
}

std::pair<double, bool> observability_check(const QuantumModel& model,
                                            const ComplexMatrix& lambda, double tol) {
  require_model_shapes(model);
  const double t = resolve_tol(model, tol);
  const auto dim = model.chain.dim();
  if (lambda.rows() != dim || lambda.cols() != dim) {
    throw ShapeError("observability_check: operator dimension mismatch");
  }
  const auto& theta = model.chain.theta();
  const double den = std::max(lambda.norm() * theta.norm(), 1e-300);
  const double res = (lambda.adjoint() * theta - theta * lambda).norm() / den;
  return {res, res <= t};
}

std::vector<ObservabilityEntry> classify_canonical_observables(const QuantumModel& model,
                                                               double tol) {
  require_model_shapes(model);
  const double t = resolve_tol(model, tol);
  const auto& chain = model.chain;
  std::vector<ObservabilityEntry> entries;
  auto add = [&](const std::string& name, const ComplexMatrix& op) {
    const auto [res, ok] = observability_check(model, op, t);
    entries.push_back({name, res, ok});
  };

  add("H", model.h);
  // descending tail products Z_m…Z_1: observable by exact algebra
  if (chain.K() >= 2) {
    ComplexMatrix tail = chain.z(1);
    add("Z1", tail);
    for (int m = 2; m <= chain.K() - 1; ++m) {
      tail = chain.z(m) * tail;
      std::string name = "Z" + std::to_string(m);
      for (int i = m - 1; i >= 1; --i) name += "*Z" + std::to_string(i);
      add(name, tail);
    }
  }
  add("Theta", chain.theta());
  // generically excluded candidates
  if (chain.K() >= 3) add("Z2", chain.z(2));
  if (chain.K() >= 4) {
    add("Z3", chain.z(3));
    add("Z3*Z2", chain.z(3) * chain.z(2));
  }
  for (const auto& [name, op] : model.extra_observables) add(name, op);
  return entries;
}

HermiticityReport full_report(const QuantumModel& model, double tol) {
  const double t = resolve_tol(model, tol);
  HermiticityReport report;
  report.tolerance_used = t;
  report.table1 = verify_table1(model, t);
  report.table2 = verify_table2(model, t);
  for (int j = 0; j <= model.chain.K() - 1; ++j) {
    report.positivity[j] = model.chain.positivity(j);
  }
  report.observability = classify_canonical_observables(model, t);

  bool pass = true;
  auto consider = [&](double res, const std::string& cell) {
    if (res > report.max_residual) {
      report.max_residual = res;
      report.worst_cell = cell;
    }
    if (res > t) pass = false;
  };
  for (const auto& c : report.table1) {
    consider(c.residual, "table1(j=" + std::to_string(c.j) + "," + c.name + ")");
  }
  for (const auto& c : report.table2) {
    consider(c.residual, "table2(j=" + std::to_string(c.j) + ",k=" + std::to_string(c.k) + ")");
  }
  // Observability of the canonical excluded candidates is reported, never
  // asserted; the Hamiltonian row is the physically decisive one.
  for (const auto& e : report.observability) {
    if (e.name == "H" && !e.pass) pass = false;
  }
  if (model.chain.mode() == chain::Mode::strict_pd) {
    for (const auto& [j, p] : report.positivity) {
      if (p != chain::Positivity::pd) pass = false;
    }
  }
  report.pass = pass;
  return report;
}

}  // namespace cryptoherm::ledger
