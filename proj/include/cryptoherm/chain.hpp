#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cryptoherm/matcore.hpp"

namespace cryptoherm::chain {

/// strict_pd demands Hermitian positive-definite partial metrics (Hilbert
/// spaces all the way down); krein_diagnostic admits indefinite intermediate
/// metrics and reports their positivity status instead of asserting it.
enum class Mode { strict_pd, krein_diagnostic };

enum class Positivity { pd, indefinite, skipped };

std::string to_string(Mode mode);
std::string to_string(Positivity p);
Mode mode_from_string(const std::string& s);

/// Θ_(K-1,j) = Z_{K-1}·Z_{K-2}·…·Z_{j+1}; the empty product (j = K−1) is
/// the identity, and j = 0 is the full physical metric Θ.
struct PartialMetric {
  int j = 0;
  ComplexMatrix theta;
};

/// An ordered multiplet of K inner-product spaces R_0 … R_{K-1} sharing one
/// ket space, represented by the operator multiplet Z_1 … Z_{K-1}. R_{K-1}
/// is the computational space (ordinary conjugate transpose), R_0 the
/// physical one. Immutable after construction; partial metrics, their LU
/// factorizations, self-adjointness residuals and positivity certificates
/// are cached eagerly, so instances are safe to share between threads.
class SpaceChain {
public:
  /// Validating constructor. Requires every Z_j invertible under the cap and
  /// self-adjoint in its own space R_j (residual <= rel_tol); in strict_pd
  /// mode additionally requires every partial metric positive definite.
  /// rel_tol < 0 selects the default 1e-10·dim.
  static SpaceChain make(std::vector<ComplexMatrix> z_list, Mode mode,
                         double rel_tol = -1.0,
                         double condition_cap = matcore::kDefaultConditionCap);

  /// Diagnostic constructor: same shape/invertibility requirements, but no
  /// self-adjointness or positivity gating. Lets verification tooling load
  /// and report on chains that would fail `make`.
  static SpaceChain unchecked(std::vector<ComplexMatrix> z_list, Mode mode,
                              double condition_cap = matcore::kDefaultConditionCap);

  int K() const { return static_cast<int>(z_.size()) + 1; }
  Eigen::Index dim() const { return dim_; }
  Mode mode() const { return mode_; }
  double condition_cap() const { return condition_cap_; }
  double rel_tol() const { return rel_tol_; }

  /// Z_j for 1 <= j <= K−1.
  const ComplexMatrix& z(int j) const;

  /// Θ_(K-1,j) for 0 <= j <= K−1 (cached).
  const PartialMetric& partial_metric(int j) const;

  /// The full physical metric Θ = Θ_(K-1,0).
  const ComplexMatrix& theta() const { return partial_metric(0).theta; }

  /// Λ^{‡(j)} = Θ_(K-1,j)⁻¹ · Λ† · Θ_(K-1,j); at j = K−1 this is dagger.
  ComplexMatrix conjugate(const ComplexMatrix& lambda, int j) const;

  /// ⟨_[j]ψ| as a row vector: dagger(psi) · Θ_(K-1,j).
  ComplexRowVector bra(const ComplexVector& psi, int j) const;

  /// ⟨_[j]ψ_a|ψ_b⟩, linear in the ket argument. Evaluated through the bra
  /// map and cross-checked against the recursive route; the two must agree
  /// within 1e-12 (scaled) or a ConsistencyError is thrown.
  Complex inner_product(const ComplexVector& psi_a, const ComplexVector& psi_b,
                        int j) const;

  /// The recursive evaluation ⟨_[j]ψ_a|ψ_b⟩ = ⟨_[j+1]ψ_a|Z_{j+1}|ψ_b⟩,
  /// grounded in the plain Euclidean product at j = K−1.
  Complex inner_product_recursive(const ComplexVector& psi_a,
                                  const ComplexVector& psi_b, int j) const;

  /// Residual of Z_j = Z_j^{‡(j)} in multiplicative form,
  /// ‖Z_j†Θ − ΘZ_j‖_F / (‖Z_j‖_F ‖Θ‖_F) with Θ = Θ_(K-1,j); 1 <= j <= K−1.
  double self_adjointness_residual(int j) const;

  /// Positivity certificate of Θ_(K-1,j), 0 <= j <= K−1.
  Positivity positivity(int j) const;

  /// Condition estimate of Θ_(K-1,j).
  double theta_condition(int j) const;

  static double default_rel_tol(Eigen::Index dim) { return 1e-10 * static_cast<double>(dim); }

private:
  SpaceChain() = default;
  static SpaceChain build(std::vector<ComplexMatrix> z_list, Mode mode,
                          double rel_tol, double condition_cap, bool validate);
  void require_space_index(int j, int lo) const;

  std::vector<ComplexMatrix> z_;  // z_[j-1] holds Z_j
  Eigen::Index dim_ = 0;
  Mode mode_ = Mode::strict_pd;
  double rel_tol_ = 0.0;
  double condition_cap_ = 0.0;
  std::vector<PartialMetric> metrics_;                    // index j = 0..K-1
  std::vector<Eigen::PartialPivLU<ComplexMatrix>> lu_;    // LU of metrics_[j]
  std::vector<double> theta_cond_;                        // index j
  std::vector<double> tri_residual_;                      // index j-1, j = 1..K-1
  std::vector<Positivity> positivity_;                    // index j
};

}  // namespace cryptoherm::chain
