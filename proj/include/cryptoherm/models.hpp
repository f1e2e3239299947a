#pragma once

#include <string>
#include <vector>

#include "cryptoherm/matcore.hpp"

namespace cryptoherm::models {

/// Finite-difference realization of the complex-shifted wrong-sign quartic
/// oscillator and its real double-well self-adjoint partner, on a Dirichlet
/// box [−L, L] with N interior grid points.
struct BGParams {
  double g = 0.05;        ///< coupling, > 0
  double j_param = 1.0;   ///< the angular parameter j; j = ±1 kills the centrifugal term
  double eta = 1.0;       ///< contour shift η > 0 in r(x) = x − iη
  double box_halfwidth = 8.0;  ///< L
  int n_grid = 800;            ///< interior points, >= 16
  double reality_filter = 1e-2;  ///< retain eigenvalues with |Im λ| < filter·(1+|Re λ|)
};

void validate(const BGParams& p);

/// −d²/dx² + (j²−1)/(4r²) + r²/4 − g²r⁴/4 with r = x − iη, evaluated on the
/// real-line grid: tridiagonal kinetic part plus a complex diagonal.
ComplexMatrix discretize_bg(const BGParams& p);

/// The self-adjoint partner −d²/dx² − (gx−1/2)j + (gx−1)²x² (η-free);
/// exactly symmetric by construction.
Eigen::MatrixXd discretize_q(const BGParams& p);

/// Kinetic term alone (particle in a box); continuum levels (kπ/2L)².
Eigen::MatrixXd discretize_kinetic(double box_halfwidth, int n_grid);

/// Lowest n eigenvalues of the partner operator (symmetric tridiagonal path).
std::vector<double> q_lowest_eigenvalues(const BGParams& p, int n);

struct FilteredSpectrum {
  std::vector<Complex> retained;  ///< passing the reality filter, sorted by Re
  int total_eigenvalues = 0;
  double max_im_over_lowest = 0.0;  ///< max |Im λ| among the lowest `n` retained
};

/// Reality-filtered spectrum of the discretized complex operator; the lowest
/// n retained eigenvalues are the candidates for the real physical levels.
FilteredSpectrum bg_filtered_eigenvalues(const BGParams& p, int n);

struct GridComparison {
  int n_grid = 0;
  int bg_retained = 0;
  double max_im_retained = 0.0;
  bool filter_ok = false;  ///< enough near-real eigenvalues were found
  matcore::SpectralComparison comparison;
};

/// Two-grid comparison (N and 2N) of the lowest levels of both operators,
/// matched by minimal-weight assignment. A failing reality filter is a
/// reported model-diagnostic outcome, not an error.
struct BgComparison {
  BGParams params;
  int n_levels = 0;
  GridComparison coarse;
  GridComparison fine;
  bool refinement_improved = false;     ///< max matched deviation shrank at 2N
  bool ground_level_improved = false;   ///< lowest-level deviation shrank at 2N
  std::string status;                   ///< "ok" or "reality_filter_failure"
};

BgComparison compare_bg_spectra(const BGParams& p, int n_levels);

}  // namespace cryptoherm::models
