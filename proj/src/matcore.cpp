#include "cryptoherm/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace cryptoherm::matcore {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ShapeError(std::string(op) + ": expected nonempty square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// Lexicographic (Re, Im) permutation of an eigenvalue list.
std::vector<int> sort_permutation(const ComplexVector& w) {
  std::vector<int> idx(static_cast<size_t>(w.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&w](int i, int j) {
    if (w[i].real() != w[j].real()) return w[i].real() < w[j].real();
    return w[i].imag() < w[j].imag();
  });
  return idx;
}

struct ZgeevOut {
  ComplexVector w;
  ComplexMatrix vr;  // empty when vectors were not requested
};

ZgeevOut zgeev(const ComplexMatrix& a, bool vectors) {
  require_square(a, "eig_general");
  if (!all_finite(a)) throw SolverError("eig_general: non-finite entries in input");
  const auto n = static_cast<lapack_int>(a.rows());
  ComplexMatrix work = a;  // zgeev overwrites its input
  ComplexVector w(n);
  ComplexMatrix vr;
  if (vectors) vr.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, work.data(), n, w.data(),
      nullptr, 1, vectors ? vr.data() : nullptr, vectors ? n : 1);
  if (info < 0) {
    throw SolverError("eig_general: invalid argument " + std::to_string(-info) +
                      " passed to zgeev");
  }
  if (info > 0) {
    throw SolverError("eig_general: QR iteration failed to converge; eigenvalues " +
                      std::to_string(info) + ".." + std::to_string(n) +
                      " are converged, the rest are not");
  }
  return {std::move(w), std::move(vr)};
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("rel_diff: shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  }
  const double den = std::max(a.norm(), b.norm());
  if (den == 0.0) return 0.0;
  return (a - b).norm() / den;
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= rel_tol * std::max(a.norm(), 1e-300);
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("mat_mul: inner dimensions disagree, " + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()));
  }
  return a * b;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  return a.adjoint();
}

double condition_estimate(const ComplexMatrix& a) {
  require_square(a, "condition_estimate");
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

ComplexMatrix inverse(const ComplexMatrix& a, double condition_cap) {
  require_square(a, "inverse");
  const double cond = condition_estimate(a);
  if (!(cond < condition_cap)) {
    throw ConditioningError("inverse: condition estimate " + fmt_sci(cond) +
                                " exceeds cap " + fmt_sci(condition_cap),
                            cond);
  }
  return Eigen::PartialPivLU<ComplexMatrix>(a).inverse();
}

ComplexMatrix cholesky_pd(const ComplexMatrix& a) {
  require_square(a, "cholesky_pd");
  if (!is_hermitian(a)) {
    throw SymmetryError("cholesky_pd: input not Hermitian within 1e-10 relative");
  }
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("cholesky_pd: nonpositive pivot, input is not positive definite");
  }
  return llt.matrixL();
}

bool is_positive_definite(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if (!is_hermitian(a)) return false;
  Eigen::LLT<ComplexMatrix> llt(a);
  return llt.info() == Eigen::Success;
}

ComplexMatrix principal_sqrt_pd(const ComplexMatrix& a) {
  require_square(a, "principal_sqrt_pd");
  if (!is_hermitian(a)) {
    throw SymmetryError("principal_sqrt_pd: input not Hermitian within 1e-10 relative");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  if (es.info() != Eigen::Success) {
    throw SolverError("principal_sqrt_pd: eigendecomposition failed to converge");
  }
  const auto& lam = es.eigenvalues();
  if (lam(0) <= 0.0) {
    throw NotPositiveDefiniteError("principal_sqrt_pd: smallest eigenvalue " +
                                   std::to_string(lam(0)) + " is not positive");
  }
  const ComplexMatrix s =
      es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  // the principal square root of a Hermitian PD matrix is Hermitian
  return (s + s.adjoint()) / 2.0;
}

EigenDecomposition eig_general(const ComplexMatrix& a) {
  auto out = zgeev(a, true);
  const auto idx = sort_permutation(out.w);
  EigenDecomposition dec;
  const auto n = a.rows();
  dec.eigenvalues.resize(n);
  dec.right_eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    dec.eigenvalues(k) = out.w(idx[static_cast<size_t>(k)]);
    dec.right_eigenvectors.col(k) = out.vr.col(idx[static_cast<size_t>(k)]);
  }
  const double a_norm = a.norm();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto v = dec.right_eigenvectors.col(k);
    const double den = std::max(a_norm * v.norm(), 1e-300);
    worst = std::max(worst, (a * v - dec.eigenvalues(k) * v).norm() / den);
  }
  dec.residual = worst;
  return dec;
}

std::vector<Complex> eigvals_general(const ComplexMatrix& a) {
  auto out = zgeev(a, false);
  std::vector<Complex> w(out.w.data(), out.w.data() + out.w.size());
  std::sort(w.begin(), w.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return w;
}

std::vector<double> eigvals_symmetric_tridiagonal(const Eigen::VectorXd& diag,
                                                  const Eigen::VectorXd& subdiag) {
  if (subdiag.size() != diag.size() - 1) {
    throw ShapeError("eigvals_symmetric_tridiagonal: subdiagonal length must be n-1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SolverError("eigvals_symmetric_tridiagonal: QL iteration failed");
  }
  const auto& lam = es.eigenvalues();
  return std::vector<double>(lam.data(), lam.data() + lam.size());
}

ComplexMatrix expm(const ComplexMatrix& a) {
  require_square(a, "expm");
  if (!all_finite(a)) throw RangeError("expm: non-finite entries in input");
  const ComplexMatrix r = a.exp();
  if (!all_finite(r)) {
    throw RangeError("expm: overflow, input 1-norm " +
                     std::to_string(a.cwiseAbs().colwise().sum().maxCoeff()));
  }
  return r;
}

std::vector<int> min_weight_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n) {
      throw ShapeError("min_weight_assignment: cost matrix must be square");
    }
  }
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // Hungarian method with potentials; 1-based helpers, p[j] = row matched to column j.
  std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      const int i0 = p[static_cast<size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                           u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[static_cast<size_t>(j)] > 0) row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

SpectralComparison compare_spectra(const std::vector<Complex>& a,
                                   const std::vector<Complex>& b) {
  if (a.size() != b.size()) {
    throw ShapeError("compare_spectra: spectra have different sizes, " +
                     std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  SpectralComparison cmp;
  cmp.count = static_cast<int>(a.size());
  if (a.empty()) return cmp;
  for (const auto& z : a) cmp.scale = std::max(cmp.scale, std::abs(z));
  for (const auto& z : b) cmp.scale = std::max(cmp.scale, std::abs(z));

  std::vector<std::vector<double>> cost(a.size(), std::vector<double>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
  const auto match = min_weight_assignment(cost);

  std::vector<int> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&a](int i, int j) {
    const auto &x = a[static_cast<size_t>(i)], &y = a[static_cast<size_t>(j)];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  for (int i : order) {
    SpectralPair pair;
    pair.lambda_a = a[static_cast<size_t>(i)];
    pair.lambda_b = b[static_cast<size_t>(match[static_cast<size_t>(i)])];
    pair.abs_dev = std::abs(pair.lambda_a - pair.lambda_b);
    const double den = std::max(std::abs(pair.lambda_a), std::abs(pair.lambda_b));
    pair.rel_dev = den > 0.0 ? pair.abs_dev / den : 0.0;
    cmp.max_abs_dev = std::max(cmp.max_abs_dev, pair.abs_dev);
    cmp.max_rel_dev = std::max(cmp.max_rel_dev, pair.rel_dev);
    cmp.pairs.push_back(pair);
  }
  cmp.max_scaled_dev = cmp.scale > 0.0 ? cmp.max_abs_dev / cmp.scale : cmp.max_abs_dev;
  return cmp;
}

}  // namespace cryptoherm::matcore
