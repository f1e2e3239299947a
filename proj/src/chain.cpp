#include "cryptoherm/chain.hpp"

#include <cmath>
#include <utility>

namespace cryptoherm::chain {

std::string to_string(Mode mode) {
  return mode == Mode::strict_pd ? "strict_pd" : "krein_diagnostic";
}

std::string to_string(Positivity p) {
  switch (p) {
    case Positivity::pd: return "pd";
    case Positivity::indefinite: return "indefinite";
    default: return "skipped";
  }
}

Mode mode_from_string(const std::string& s) {
  if (s == "strict_pd") return Mode::strict_pd;
  if (s == "krein_diagnostic") return Mode::krein_diagnostic;
  throw ParseError("mode: expected \"strict_pd\" or \"krein_diagnostic\", got \"" + s + "\"");
}

SpaceChain SpaceChain::build(std::vector<ComplexMatrix> z_list, Mode mode,
                             double rel_tol, double condition_cap, bool validate) {
  if (z_list.empty()) {
    throw ShapeError("chain: need at least one Z operator (K >= 2)");
  }
  const Eigen::Index dim = z_list.front().rows();
  for (size_t i = 0; i < z_list.size(); ++i) {
    const auto& z = z_list[i];
    if (z.rows() != z.cols() || z.rows() != dim || dim == 0) {
      throw ShapeError("chain: Z_" + std::to_string(i + 1) + " is " +
                       std::to_string(z.rows()) + "x" + std::to_string(z.cols()) +
                       ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!matcore::all_finite(z)) {
      throw RangeError("chain: Z_" + std::to_string(i + 1) + " has non-finite entries");
    }
    const double cond = matcore::condition_estimate(z);
    if (!(cond < condition_cap)) {
      throw ConditioningError("chain: Z_" + std::to_string(i + 1) +
                                  " condition estimate " + matcore::fmt_sci(cond) +
                                  " exceeds cap",
                              cond);
    }
  }

  SpaceChain c;
  c.z_ = std::move(z_list);
  c.dim_ = dim;
  c.mode_ = mode;
  c.rel_tol_ = rel_tol < 0.0 ? default_rel_tol(dim) : rel_tol;
  c.condition_cap_ = condition_cap;

  const int K = c.K();
  c.metrics_.resize(static_cast<size_t>(K));
  c.metrics_[static_cast<size_t>(K - 1)] = {K - 1, ComplexMatrix::Identity(dim, dim)};
  for (int j = K - 2; j >= 0; --j) {
    c.metrics_[static_cast<size_t>(j)] = {
        j, c.metrics_[static_cast<size_t>(j + 1)].theta * c.z_[static_cast<size_t>(j)]};
  }

  c.lu_.reserve(static_cast<size_t>(K));
  c.theta_cond_.resize(static_cast<size_t>(K));
  c.positivity_.resize(static_cast<size_t>(K));
  for (int j = 0; j < K; ++j) {
    const auto& theta = c.metrics_[static_cast<size_t>(j)].theta;
    const double cond = matcore::condition_estimate(theta);
    c.theta_cond_[static_cast<size_t>(j)] = cond;
    if (!(cond < condition_cap)) {
      throw ConditioningError("chain: partial metric Theta_(K-1," + std::to_string(j) +
                                  ") condition estimate " + matcore::fmt_sci(cond) +
                                  " exceeds cap",
                              cond);
    }
    c.lu_.emplace_back(theta);
    c.positivity_[static_cast<size_t>(j)] =
        matcore::is_positive_definite(theta) ? Positivity::pd : Positivity::indefinite;
  }

  c.tri_residual_.resize(static_cast<size_t>(K - 1));
  for (int j = 1; j < K; ++j) {
    const auto& z = c.z_[static_cast<size_t>(j - 1)];
    const auto& theta = c.metrics_[static_cast<size_t>(j)].theta;
    const double den = std::max(z.norm() * theta.norm(), 1e-300);
    c.tri_residual_[static_cast<size_t>(j - 1)] =
        (z.adjoint() * theta - theta * z).norm() / den;
  }

  if (validate) {
    for (int j = 1; j < K; ++j) {
      const double r = c.tri_residual_[static_cast<size_t>(j - 1)];
      if (!(r <= c.rel_tol_)) {
        throw SymmetryError("chain: Z_" + std::to_string(j) +
                            " is not self-adjoint in R_" + std::to_string(j) +
                            " (residual " + std::to_string(r) + " > tol " +
                            std::to_string(c.rel_tol_) + ")");
      }
    }
    if (mode == Mode::strict_pd) {
      for (int j = 0; j < K; ++j) {
        if (c.positivity_[static_cast<size_t>(j)] != Positivity::pd) {
          throw NotPositiveDefiniteError("chain: partial metric Theta_(K-1," +
                                         std::to_string(j) +
                                         ") is not positive definite (strict_pd mode)");
        }
      }
    }
  }
  return c;
}

SpaceChain SpaceChain::make(std::vector<ComplexMatrix> z_list, Mode mode,
                            double rel_tol, double condition_cap) {
  return build(std::move(z_list), mode, rel_tol, condition_cap, true);
}

SpaceChain SpaceChain::unchecked(std::vector<ComplexMatrix> z_list, Mode mode,
                                 double condition_cap) {
  return build(std::move(z_list), mode, -1.0, condition_cap, false);
}

void SpaceChain::require_space_index(int j, int lo) const {
  if (j < lo || j > K() - 1) {
    throw InvalidParameterError("chain: space index " + std::to_string(j) +
                                " out of range [" + std::to_string(lo) + ", " +
                                std::to_string(K() - 1) + "]");
  }
}

const ComplexMatrix& SpaceChain::z(int j) const {
  require_space_index(j, 1);
  return z_[static_cast<size_t>(j - 1)];
}

const PartialMetric& SpaceChain::partial_metric(int j) const {
  require_space_index(j, 0);
  return metrics_[static_cast<size_t>(j)];
}

ComplexMatrix SpaceChain::conjugate(const ComplexMatrix& lambda, int j) const {
  require_space_index(j, 0);
  if (lambda.rows() != dim_ || lambda.cols() != dim_) {
    throw ShapeError("conjugate: operator is " + std::to_string(lambda.rows()) + "x" +
                     std::to_string(lambda.cols()) + ", chain dimension is " +
                     std::to_string(dim_));
  }
  const auto& theta = metrics_[static_cast<size_t>(j)].theta;
  return lu_[static_cast<size_t>(j)].solve(lambda.adjoint() * theta);
}

ComplexRowVector SpaceChain::bra(const ComplexVector& psi, int j) const {
  require_space_index(j, 0);
  if (psi.size() != dim_) {
    throw ShapeError("bra: vector length " + std::to_string(psi.size()) +
                     ", chain dimension " + std::to_string(dim_));
  }
  return psi.adjoint() * metrics_[static_cast<size_t>(j)].theta;
}

Complex SpaceChain::inner_product_recursive(const ComplexVector& psi_a,
                                            const ComplexVector& psi_b, int j) const {
  require_space_index(j, 0);
  if (psi_a.size() != dim_ || psi_b.size() != dim_) {
    throw ShapeError("inner_product: vector length mismatch with chain dimension " +
                     std::to_string(dim_));
  }
  // ⟨_[j]a|b⟩ = ⟨_[j+1]a|Z_{j+1}b⟩, grounded at the Euclidean j = K−1 case.
  ComplexVector w = psi_b;
  for (int m = j + 1; m <= K() - 1; ++m) {
    w = z_[static_cast<size_t>(m - 1)] * w;
  }
  return psi_a.dot(w);
}

Complex SpaceChain::inner_product(const ComplexVector& psi_a,
                                  const ComplexVector& psi_b, int j) const {
  const Complex direct = (bra(psi_a, j) * psi_b)(0);
  const Complex recursive = inner_product_recursive(psi_a, psi_b, j);
  // Round-off in either route scales with the product of the factor norms,
  // not with ‖Θ‖ (the product may cancel), so that is the comparison scale.
  double factor_norms = 1.0;
  for (int m = j + 1; m <= K() - 1; ++m) factor_norms *= z_[static_cast<size_t>(m - 1)].norm();
  const double scale = psi_a.norm() * psi_b.norm() * factor_norms + std::abs(direct);
  if (std::abs(direct - recursive) > 1e-12 * std::max(scale, 1e-300)) {
    throw ConsistencyError("inner_product: bra-map and recursive evaluations disagree at j=" +
                           std::to_string(j));
  }
  return direct;
}

double SpaceChain::self_adjointness_residual(int j) const {
  require_space_index(j, 1);
  return tri_residual_[static_cast<size_t>(j - 1)];
}

Positivity SpaceChain::positivity(int j) const {
  require_space_index(j, 0);
  return positivity_[static_cast<size_t>(j)];
}

double SpaceChain::theta_condition(int j) const {
  require_space_index(j, 0);
  return theta_cond_[static_cast<size_t>(j)];
}

}  // namespace cryptoherm::chain
