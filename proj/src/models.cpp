#include "cryptoherm/models.hpp"

#include <algorithm>
#include <cmath>

namespace cryptoherm::models {

namespace {

double grid_spacing(double box_halfwidth, int n_grid) {
  return 2.0 * box_halfwidth / (n_grid + 1);
}

double grid_point(double box_halfwidth, int n_grid, int i) {
  return -box_halfwidth + (i + 1) * grid_spacing(box_halfwidth, n_grid);
}

Complex bg_potential(const BGParams& p, double x) {
  const Complex r(x, -p.eta);
  const Complex r2 = r * r;
  const Complex centrifugal = (p.j_param * p.j_param - 1.0) / (4.0 * r2);
  return centrifugal + r2 / 4.0 - p.g * p.g * r2 * r2 / 4.0;
}

double q_potential(const BGParams& p, double x) {
  const double gx1 = p.g * x - 1.0;
  return -(p.g * x - 0.5) * p.j_param + gx1 * gx1 * x * x;
}

}  // namespace

void validate(const BGParams& p) {
  if (!(p.g > 0.0)) throw InvalidParameterError("bg: coupling g must be positive");
  if (!(p.eta > 0.0)) throw InvalidParameterError("bg: contour shift eta must be positive");
  if (!(p.box_halfwidth > 0.0)) throw InvalidParameterError("bg: box half-width must be positive");
  if (p.n_grid < 16) {
    throw InvalidParameterError("bg: n_grid must be >= 16, got " + std::to_string(p.n_grid));
  }
  if (!(p.reality_filter > 0.0)) {
    throw InvalidParameterError("bg: reality filter threshold must be positive");
  }
}

ComplexMatrix discretize_bg(const BGParams& p) {
  validate(p);
  const int n = p.n_grid;
  const double h = grid_spacing(p.box_halfwidth, n);
  const double inv_h2 = 1.0 / (h * h);
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0 * inv_h2 + bg_potential(p, grid_point(p.box_halfwidth, n, i));
    if (i + 1 < n) {
      a(i, i + 1) = -inv_h2;
      a(i + 1, i) = -inv_h2;
    }
  }
  return a;
}

Eigen::MatrixXd discretize_q(const BGParams& p) {
  validate(p);
  const int n = p.n_grid;
  const double h = grid_spacing(p.box_halfwidth, n);
  const double inv_h2 = 1.0 / (h * h);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0 * inv_h2 + q_potential(p, grid_point(p.box_halfwidth, n, i));
    if (i + 1 < n) {
      a(i, i + 1) = -inv_h2;
      a(i + 1, i) = -inv_h2;
    }
  }
  return a;
}

Eigen::MatrixXd discretize_kinetic(double box_halfwidth, int n_grid) {
  if (!(box_halfwidth > 0.0) || n_grid < 16) {
    throw InvalidParameterError("kinetic: need positive box and n_grid >= 16");
  }
  const double inv_h2 = 1.0 / (grid_spacing(box_halfwidth, n_grid) *
                               grid_spacing(box_halfwidth, n_grid));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_grid, n_grid);
  for (int i = 0; i < n_grid; ++i) {
    a(i, i) = 2.0 * inv_h2;
    if (i + 1 < n_grid) {
      a(i, i + 1) = -inv_h2;
      a(i + 1, i) = -inv_h2;
    }
  }
  return a;
}

std::vector<double> q_lowest_eigenvalues(const BGParams& p, int n) {
  validate(p);
  if (n < 1 || n > p.n_grid) {
    throw InvalidParameterError("q_lowest_eigenvalues: level count out of range");
  }
  const double h = grid_spacing(p.box_halfwidth, p.n_grid);
  const double inv_h2 = 1.0 / (h * h);
  Eigen::VectorXd diag(p.n_grid), sub(p.n_grid - 1);
  for (int i = 0; i < p.n_grid; ++i) {
    diag(i) = 2.0 * inv_h2 + q_potential(p, grid_point(p.box_halfwidth, p.n_grid, i));
  }
  sub.setConstant(-inv_h2);
  auto all = matcore::eigvals_symmetric_tridiagonal(diag, sub);
  all.resize(static_cast<size_t>(n));
  return all;
}

FilteredSpectrum bg_filtered_eigenvalues(const BGParams& p, int n) {
  validate(p);
  if (n < 1) throw InvalidParameterError("bg_filtered_eigenvalues: level count must be >= 1");
  const auto eigs = matcore::eigvals_general(discretize_bg(p));
  FilteredSpectrum out;
  out.total_eigenvalues = static_cast<int>(eigs.size());
  for (const auto& z : eigs) {
    if (std::abs(z.imag()) < p.reality_filter * (1.0 + std::abs(z.real()))) {
      out.retained.push_back(z);  // already sorted by (Re, Im)
    }
  }
  const size_t lowest = std::min(out.retained.size(), static_cast<size_t>(n));
  for (size_t i = 0; i < lowest; ++i) {
    out.max_im_over_lowest = std::max(out.max_im_over_lowest,
                                      std::abs(out.retained[i].imag()));
  }
  return out;
}

namespace {

GridComparison compare_at_grid(BGParams p, int n_grid, int n_levels) {
  p.n_grid = n_grid;
  GridComparison gc;
  gc.n_grid = n_grid;
  const auto bg = bg_filtered_eigenvalues(p, n_levels);
  gc.bg_retained = static_cast<int>(bg.retained.size());
  gc.max_im_retained = bg.max_im_over_lowest;
  gc.filter_ok = bg.retained.size() >= static_cast<size_t>(n_levels);
  if (!gc.filter_ok) return gc;

  std::vector<Complex> bg_lowest(bg.retained.begin(), bg.retained.begin() + n_levels);
  const auto q = q_lowest_eigenvalues(p, n_levels);
  std::vector<Complex> q_lowest(q.begin(), q.end());
  gc.comparison = matcore::compare_spectra(bg_lowest, q_lowest);
  return gc;
}

}  // namespace

BgComparison compare_bg_spectra(const BGParams& p, int n_levels) {
  validate(p);
  if (n_levels < 1 || n_levels > 8) {
    throw InvalidParameterError("compare_bg_spectra: n_levels must be in [1, 8] (desk scale)");
  }
  BgComparison out;
  out.params = p;
  out.n_levels = n_levels;
  out.coarse = compare_at_grid(p, p.n_grid, n_levels);
  out.fine = compare_at_grid(p, 2 * p.n_grid, n_levels);
  if (!out.coarse.filter_ok || !out.fine.filter_ok) {
    out.status = "reality_filter_failure";
    return out;
  }
  out.status = "ok";
  out.refinement_improved =
      out.fine.comparison.max_abs_dev < out.coarse.comparison.max_abs_dev;
  if (!out.coarse.comparison.pairs.empty() && !out.fine.comparison.pairs.empty()) {
    out.ground_level_improved =
        out.fine.comparison.pairs.front().abs_dev < out.coarse.comparison.pairs.front().abs_dev;
  }
  return out;
}

}  // namespace cryptoherm::models
