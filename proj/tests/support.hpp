#pragma once

// Shared fixtures for the unit suites: deterministic random draws (seeded
// mt19937_64 through the library Rng so runs are reproducible) and the small
// frozen chains used across modules.

#include <vector>

#include "cryptoherm/matcore.hpp"
#include "cryptoherm/rng.hpp"

namespace test_support {

using cryptoherm::Complex;
using cryptoherm::ComplexMatrix;
using cryptoherm::ComplexVector;
using cryptoherm::Rng;

inline ComplexMatrix random_matrix(Rng& rng, Eigen::Index n) {
  ComplexMatrix a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = rng.complex_normal();
  return a;
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  const ComplexMatrix a = random_matrix(rng, n);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_hermitian_pd(Rng& rng, Eigen::Index n) {
  const ComplexMatrix a = random_matrix(rng, n);
  return a * a.adjoint() + 0.5 * ComplexMatrix::Identity(n, n);
}

inline ComplexVector random_vector(Rng& rng, Eigen::Index n) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

/// Entrywise triple-loop product, independent of the library mat_mul path.
inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c = ComplexMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

/// The frozen K=3 fixture: Z2 = diag(1,2), Z1 = [[2,1],[0.5,1]];
/// Z1†Z2 = Z2Z1 = [[2,1],[1,2]], so the chain is valid with Θ = [[2,1],[1,2]].
inline std::vector<ComplexMatrix> k3_fixture() {
  ComplexMatrix z1(2, 2), z2(2, 2);
  z1 << 2.0, 1.0, 0.5, 1.0;
  z2 << 1.0, 0.0, 0.0, 2.0;
  return {z1, z2};
}

}  // namespace test_support
