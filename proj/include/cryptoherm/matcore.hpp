#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "cryptoherm/errors.hpp"

namespace cryptoherm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVector = Eigen::RowVectorXcd;

/// Dense complex kernels the rest of the library builds on. Everything here
/// is a pure function of its inputs; double precision throughout, tolerances
/// scale with dimension and Frobenius norm.
namespace matcore {

/// Cap on condition estimates for every inversion in the library.
inline constexpr double kDefaultConditionCap = 1e12;

bool all_finite(const ComplexMatrix& a);

/// Short scientific rendering for diagnostics, e.g. "3.21e+05".
std::string fmt_sci(double x);

/// ‖a − b‖_F / max(‖a‖_F, ‖b‖_F); 0 for two zero matrices.
double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// ‖a − a†‖_F <= rel_tol · ‖a‖_F
bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-10);

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose (the Hermitian adjoint of the computational space).
ComplexMatrix dagger(const ComplexMatrix& a);

/// 2-norm condition estimate sigma_max / sigma_min, via singular values.
double condition_estimate(const ComplexMatrix& a);

/// Inverse of a square matrix; refuses inputs whose condition estimate
/// exceeds the cap (throws ConditioningError carrying the estimate).
ComplexMatrix inverse(const ComplexMatrix& a,
                      double condition_cap = kDefaultConditionCap);

/// Lower-triangular L with L·L† = a. Success certifies positive
/// definiteness. Input must be Hermitian within 1e-10·‖a‖_F.
ComplexMatrix cholesky_pd(const ComplexMatrix& a);

/// True iff a is Hermitian (within the gate) and positive definite.
bool is_positive_definite(const ComplexMatrix& a);

/// Unique Hermitian positive-definite S with S² = a, by eigendecomposition.
ComplexMatrix principal_sqrt_pd(const ComplexMatrix& a);

struct EigenDecomposition {
  /// Sorted lexicographically by (real, imaginary), ascending.
  ComplexVector eigenvalues;
  /// Unit-norm right eigenvectors as columns, matching eigenvalue order.
  ComplexMatrix right_eigenvectors;
  /// max_k ‖A v_k − λ_k v_k‖₂ / (‖A‖_F ‖v_k‖₂); reported, not hidden.
  double residual = 0.0;
};

/// Full complex spectrum of a general square matrix (LAPACK zgeev).
EigenDecomposition eig_general(const ComplexMatrix& a);

/// Eigenvalues only, sorted by (real, imaginary); cheaper at large dim.
std::vector<Complex> eigvals_general(const ComplexMatrix& a);

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
std::vector<double> eigvals_symmetric_tridiagonal(const Eigen::VectorXd& diag,
                                                  const Eigen::VectorXd& subdiag);

/// Matrix exponential by scaling-and-squaring with a Padé approximant,
/// order and scaling chosen from the 1-norm. Throws RangeError when the
/// input carries non-finite entries or the result overflows.
ComplexMatrix expm(const ComplexMatrix& a);

// --- spectral comparison -------------------------------------------------

struct SpectralPair {
  Complex lambda_a;
  Complex lambda_b;
  double abs_dev = 0.0;  ///< |λ_a − λ_b|
  double rel_dev = 0.0;  ///< abs_dev / max(|λ_a|, |λ_b|)
};

/// Matched, sorted eigenvalue lists of two operators with per-pair
/// deviations. Pairs are matched by minimal-total-|λ_a−λ_b| assignment
/// (robust for near-degenerate complex pairs) and listed in (Re, Im)
/// order of the first spectrum.
struct SpectralComparison {
  int count = 0;
  std::vector<SpectralPair> pairs;
  double scale = 0.0;  ///< max |λ| over both input spectra
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  /// max_abs_dev / scale; the deviation measure used for isospectrality
  /// checks (robust when a spectrum contains near-zero eigenvalues).
  double max_scaled_dev = 0.0;
  std::string matching = "min-weight-assignment";
};

SpectralComparison compare_spectra(const std::vector<Complex>& a,
                                   const std::vector<Complex>& b);

/// Minimal-total-cost assignment of a square cost matrix (O(n³) Hungarian
/// potentials method); returns row→column.
std::vector<int> min_weight_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace matcore
}  // namespace cryptoherm
