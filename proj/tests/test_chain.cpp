#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cryptoherm/chain.hpp"
#include "cryptoherm/dyson.hpp"
#include "support.hpp"

using namespace cryptoherm;
using chain::Mode;
using chain::SpaceChain;
using test_support::k3_fixture;
using test_support::random_matrix;
using test_support::random_vector;

namespace {

std::vector<ComplexMatrix> identity_chain(Eigen::Index dim, int k) {
  return std::vector<ComplexMatrix>(static_cast<size_t>(k - 1),
                                    ComplexMatrix::Identity(dim, dim));
}

}  // namespace

TEST_CASE("new_chain: K=2 identity, frozen K=3 fixture, self-adjointness violation") {
  const auto c2 = SpaceChain::make(identity_chain(2, 2), Mode::strict_pd);
  CHECK(c2.K() == 2);
  CHECK(matcore::rel_diff(c2.theta(), ComplexMatrix::Identity(2, 2)) == 0.0);

  const auto c3 = SpaceChain::make(k3_fixture(), Mode::strict_pd);
  CHECK(c3.K() == 3);
  // Z1†Z2 − Z2Z1 = 0 by hand, so the fixture is exactly valid
  const auto z = k3_fixture();
  CHECK((z[0].adjoint() * z[1] - z[1] * z[0]).norm() == 0.0);
  CHECK(c3.self_adjointness_residual(1) < 1e-15);
  CHECK(c3.self_adjointness_residual(2) < 1e-15);

  // breaking Z1 violates self-adjointness in R_1
  ComplexMatrix bad_z1(2, 2);
  bad_z1 << 1, 1, 2, 1;
  ComplexMatrix z2(2, 2);
  z2 << 1, 0, 0, 2;
  CHECK((bad_z1.adjoint() * z2 - z2 * bad_z1).norm() > 0.5);
  CHECK_THROWS_AS(SpaceChain::make({bad_z1, z2}, Mode::strict_pd), SymmetryError);
  // the diagnostic constructor loads it anyway and reports the residual
  const auto diag = SpaceChain::unchecked({bad_z1, z2}, Mode::strict_pd);
  CHECK(diag.self_adjointness_residual(1) > 1e-2);
}

TEST_CASE("new_chain: shape and conditioning failures") {
  CHECK_THROWS_AS(SpaceChain::make({}, Mode::strict_pd), ShapeError);
  CHECK_THROWS_AS(
      SpaceChain::make({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)},
                       Mode::strict_pd),
      ShapeError);
  CHECK_THROWS_AS(SpaceChain::make({ComplexMatrix::Zero(2, 2)}, Mode::strict_pd),
                  ConditioningError);
}

TEST_CASE("krein_diagnostic admits an indefinite intermediate metric") {
  // Z1 = diag(1,-1) is Hermitian (self-adjoint in R_1 for K=2) but indefinite.
  ComplexMatrix z1(2, 2);
  z1 << 1, 0, 0, -1;
  CHECK_THROWS_AS(SpaceChain::make({z1}, Mode::strict_pd), NotPositiveDefiniteError);
  const auto c = SpaceChain::make({z1}, Mode::krein_diagnostic);
  CHECK(c.positivity(0) == chain::Positivity::indefinite);
  CHECK(c.positivity(1) == chain::Positivity::pd);  // identity
}

TEST_CASE("partial_metric: empty product, frozen Theta2, identity K=4") {
  const auto c3 = SpaceChain::make(k3_fixture(), Mode::strict_pd);
  CHECK(matcore::rel_diff(c3.partial_metric(2).theta, ComplexMatrix::Identity(2, 2)) == 0.0);

  ComplexMatrix theta2(2, 2);
  theta2 << 2, 1, 1, 2;
  CHECK(matcore::rel_diff(c3.partial_metric(0).theta, theta2) == 0.0);
  CHECK(matcore::rel_diff(c3.theta(), theta2) == 0.0);

  const auto c4 = SpaceChain::make(identity_chain(3, 4), Mode::strict_pd);
  CHECK(matcore::rel_diff(c4.partial_metric(1).theta, ComplexMatrix::Identity(3, 3)) == 0.0);

  CHECK_THROWS_AS(c3.partial_metric(3), InvalidParameterError);
  CHECK_THROWS_AS(c3.partial_metric(-1), InvalidParameterError);
}

TEST_CASE("conjugate: dagger reduction and self-adjointness of Z1 in R_1") {
  const auto cid = SpaceChain::make(identity_chain(2, 4), Mode::strict_pd);
  ComplexMatrix n(2, 2);
  n << 0, 1, 0, 0;
  ComplexMatrix nt(2, 2);
  nt << 0, 0, 1, 0;
  for (int j = 0; j <= 3; ++j) {
    CHECK((cid.conjugate(n, j) - nt).norm() == 0.0);
  }

  Rng rng(101);
  const auto c3 = SpaceChain::make(k3_fixture(), Mode::strict_pd);
  const ComplexMatrix lam = random_matrix(rng, 2);
  CHECK((c3.conjugate(lam, 2) - lam.adjoint()).norm() == 0.0);  // j = K−1 is dagger

  // Z1 is its own conjugate in R_1: evaluate Z2⁻¹ Z1† Z2 directly
  const auto z = k3_fixture();
  const ComplexMatrix direct = matcore::inverse(z[1]) * z[0].adjoint() * z[1];
  CHECK((c3.conjugate(z[0], 1) - z[0]).norm() < 1e-12);
  CHECK((direct - z[0]).norm() < 1e-12);

  CHECK_THROWS_AS(c3.conjugate(ComplexMatrix::Identity(3, 3), 1), ShapeError);
}

TEST_CASE("bra: conjugate-transpose reductions and the frozen row") {
  const auto c3 = SpaceChain::make(k3_fixture(), Mode::strict_pd);
  ComplexVector psi(2);
  psi << 1, 0;
  // j = K−1: ordinary conjugate transpose
  CHECK((c3.bra(psi, 2) - psi.adjoint()).norm() == 0.0);
  // frozen: (1,0)·Θ2 = (2,1)
  const auto row = c3.bra(psi, 0);
  CHECK(row(0) == Complex(2, 0));
  CHECK(row(1) == Complex(1, 0));

  const auto cid = SpaceChain::make(identity_chain(3, 5), Mode::strict_pd);
  Rng rng(111);
  const ComplexVector v = random_vector(rng, 3);
  for (int j = 0; j <= 4; ++j) CHECK((cid.bra(v, j) - v.adjoint()).norm() == 0.0);

  CHECK_THROWS_AS(c3.bra(ComplexVector::Ones(3), 0), ShapeError);
}

TEST_CASE("inner_product: Euclidean reduction, frozen value, strict_pd positivity") {
  const auto c3 = SpaceChain::make(k3_fixture(), Mode::strict_pd);
  Rng rng(121);
  const ComplexVector a = random_vector(rng, 2);
  const ComplexVector b = random_vector(rng, 2);
  CHECK(std::abs(c3.inner_product(a, b, 2) - a.dot(b)) < 1e-15);

  ComplexVector e0(2);
  e0 << 1, 0;
  CHECK(std::abs(c3.inner_product(e0, e0, 0) - Complex(2, 0)) < 1e-15);

  const auto gen = dyson::generate_chain(5, 4, 1234).chain;
  for (int j = 0; j <= gen.K() - 1; ++j) {
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexVector psi = random_vector(rng, 5);
      CHECK(gen.inner_product(psi, psi, j).real() > 0.0);
    }
  }
}

TEST_CASE("inner_product recursive route agrees with the bra route") {
  Rng rng(131);
  for (const int k : {2, 3, 5}) {
    const auto gen = dyson::generate_chain(6, k, 4321 + static_cast<std::uint64_t>(k)).chain;
    const ComplexVector a = random_vector(rng, 6);
    const ComplexVector b = random_vector(rng, 6);
    for (int j = 0; j <= gen.K() - 1; ++j) {
      double factor_norms = 1.0;
      for (int m = j + 1; m <= gen.K() - 1; ++m) factor_norms *= gen.z(m).norm();
      const Complex direct = gen.inner_product(a, b, j);
      const Complex rec = gen.inner_product_recursive(a, b, j);
      CHECK(std::abs(direct - rec) <=
            1e-12 * (std::abs(direct) + a.norm() * b.norm() * factor_norms));
    }
  }
}

TEST_CASE("conjugation is an involution and an antihomomorphism on valid chains") {
  Rng rng(141);
  for (const auto& [dim, k] : std::vector<std::pair<int, int>>{{2, 2}, {5, 3}, {16, 6}}) {
    const auto c = dyson::generate_chain(dim, k, 777 + static_cast<std::uint64_t>(dim)).chain;
    const ComplexMatrix lam = random_matrix(rng, dim);
    const ComplexMatrix mu = random_matrix(rng, dim);
    for (int j = 0; j <= c.K() - 1; ++j) {
      const double tol = 1e-11 * dim;
      CHECK(matcore::rel_diff(c.conjugate(c.conjugate(lam, j), j), lam) < tol);
      CHECK(matcore::rel_diff(c.conjugate(lam * mu, j),
                              c.conjugate(mu, j) * c.conjugate(lam, j)) < tol);
    }
  }
}

TEST_CASE("adjoint compatibility of conjugate with the inner product") {
  Rng rng(151);
  const auto c = dyson::generate_chain(7, 4, 999).chain;
  const ComplexMatrix lam = random_matrix(rng, 7);
  const ComplexVector a = random_vector(rng, 7);
  const ComplexVector b = random_vector(rng, 7);
  for (int j = 0; j <= c.K() - 1; ++j) {
    const Complex lhs = c.inner_product(a, lam * b, j);
    const Complex rhs = c.inner_product(c.conjugate(lam, j) * a, b, j);
    const double scale = a.norm() * b.norm() * lam.norm() *
                         c.partial_metric(j).theta.norm();
    CHECK(std::abs(lhs - rhs) < 1e-11 * scale);
  }
}

TEST_CASE("pull-down identity relates neighboring conjugations") {
  Rng rng(161);
  const auto c = dyson::generate_chain(6, 5, 2024).chain;
  const ComplexMatrix lam = random_matrix(rng, 6);
  for (int j = 0; j <= c.K() - 2; ++j) {
    const ComplexMatrix lhs = c.conjugate(lam, j);
    const ComplexMatrix rhs =
        matcore::inverse(c.z(j + 1)) * c.conjugate(lam, j + 1) * c.z(j + 1);
    CHECK(matcore::rel_diff(lhs, rhs) < 1e-11 * c.dim());
  }
}

TEST_CASE("Hermiticity relegation: conjugate(Z_j, j+1)·Z_{j+1} = Z_{j+1}·Z_j") {
  const auto triple = dyson::generate_chain(6, 5, 31415);
  const auto& c = triple.chain;
  for (int j = 0; j <= c.K() - 2; ++j) {
    const ComplexMatrix& zj = j == 0 ? triple.model.h : c.z(j);
    const ComplexMatrix lhs = c.conjugate(zj, j + 1) * c.z(j + 1);
    const ComplexMatrix rhs = c.z(j + 1) * zj;
    CHECK(matcore::rel_diff(lhs, rhs) < 1e-10 * c.dim());
  }
}

TEST_CASE("inner products are sesquilinear with conjugate symmetry at every j") {
  Rng rng(171);
  const auto c = dyson::generate_chain(5, 4, 555).chain;
  const ComplexVector a = random_vector(rng, 5);
  const ComplexVector b = random_vector(rng, 5);
  const ComplexVector d = random_vector(rng, 5);
  const Complex alpha(0.3, -1.2), beta(-0.7, 0.4);
  for (int j = 0; j <= c.K() - 1; ++j) {
    const double scale =
        (a.norm() + b.norm() + d.norm()) * c.partial_metric(j).theta.norm() * 10.0;
    // linear in the second (ket) argument
    CHECK(std::abs(c.inner_product(a, alpha * b + beta * d, j) -
                   (alpha * c.inner_product(a, b, j) + beta * c.inner_product(a, d, j))) <
          1e-12 * scale);
    // antilinear in the first
    CHECK(std::abs(c.inner_product(alpha * a, b, j) -
                   std::conj(alpha) * c.inner_product(a, b, j)) < 1e-12 * scale);
    // conjugate symmetry (the partial metrics of a valid chain are Hermitian)
    CHECK(std::abs(c.inner_product(a, b, j) - std::conj(c.inner_product(b, a, j))) <
          1e-11 * scale);
  }
}
