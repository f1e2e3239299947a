#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cryptoherm/dyson.hpp"
#include "cryptoherm/ledger.hpp"
#include "support.hpp"

using namespace cryptoherm;
using chain::Mode;
using chain::SpaceChain;
using ledger::QuantumModel;
using test_support::k3_fixture;
using test_support::naive_product;
using test_support::random_hermitian;
using test_support::random_matrix;

namespace {

QuantumModel identity_model(Eigen::Index dim, int k, const ComplexMatrix& h) {
  auto c = SpaceChain::make(
      std::vector<ComplexMatrix>(static_cast<size_t>(k - 1),
                                 ComplexMatrix::Identity(dim, dim)),
      Mode::strict_pd);
  return ledger::verified_model(std::move(c), h);
}

/// K=4 model in which every operator shares one unitary eigenbasis, so all
/// Z_j commute pairwise and with H.
QuantumModel commuting_model(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix g = random_matrix(rng, dim);
  const Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix u = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  auto diag_pd = [&]() {
    Eigen::VectorXd d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) d(i) = 0.5 + 2.0 * rng.uniform01();
    return ComplexMatrix(u * d.cast<Complex>().asDiagonal() * u.adjoint());
  };
  std::vector<ComplexMatrix> z{diag_pd(), diag_pd(), diag_pd()};
  Eigen::VectorXd dh(dim);
  for (Eigen::Index i = 0; i < dim; ++i) dh(i) = 2.0 * rng.uniform01() - 1.0;
  const ComplexMatrix h = u * dh.cast<Complex>().asDiagonal() * u.adjoint();
  return ledger::verified_model(SpaceChain::make(std::move(z), Mode::strict_pd), h);
}

double max_table2_residual(const std::vector<ledger::Table2Cell>& cells) {
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, c.residual);
  return m;
}

}  // namespace

TEST_CASE("product_tier: definitions and the naive-product oracle") {
  Rng rng(201);
  const ComplexMatrix h = random_hermitian(rng, 2);
  const auto model = identity_model(2, 3, h);

  // Y1 = Z1·Z0 = Z1·H = H on the identity chain
  CHECK(matcore::rel_diff(ledger::product_tier(model.chain, model.h, 1, 1), h) == 0.0);

  const auto all_eye = identity_model(3, 5, ComplexMatrix::Identity(3, 3));
  for (int j = 1; j <= 4; ++j) {
    for (int tier = 1; tier <= j; ++tier) {
      CHECK(matcore::rel_diff(ledger::product_tier(all_eye.chain, all_eye.h, j, tier),
                              ComplexMatrix::Identity(3, 3)) == 0.0);
    }
  }

  const auto c3 = SpaceChain::make(k3_fixture(), Mode::strict_pd);
  const ComplexMatrix hh = random_matrix(rng, 2);
  // tier 2 at j = 2 is Z2·Z1·H; oracle is the naive associative product
  const ComplexMatrix expect = naive_product(naive_product(c3.z(2), c3.z(1)), hh);
  CHECK(matcore::rel_diff(ledger::product_tier(c3, hh, 2, 2), expect) < 1e-14);

  CHECK_THROWS_AS(ledger::product_tier(c3, hh, 2, 0), InvalidParameterError);
  CHECK_THROWS_AS(ledger::product_tier(c3, hh, 2, 3), InvalidParameterError);
  CHECK_THROWS_AS(ledger::product_tier(c3, hh, 3, 1), InvalidParameterError);
}

TEST_CASE("verify_table1: identity chain zeros, generated chain small, perturbation bites") {
  Rng rng(211);
  const auto model = identity_model(4, 4, random_hermitian(rng, 4));
  for (const auto& cell : ledger::verify_table1(model)) {
    CHECK(cell.residual < 1e-15);
  }

  const auto gen = dyson::generate_chain(6, 4, 42);
  for (const auto& cell : ledger::verify_table1(gen.model)) {
    CHECK(cell.residual < 1e-10 * 6);
  }

  // perturb Z1 of a valid K=3 chain by 1e-3·(non-self-adjoint): Y1 must flag it
  const auto g3 = dyson::generate_chain(4, 3, 43);
  auto z = std::vector<ComplexMatrix>{g3.chain.z(1), g3.chain.z(2)};
  ComplexMatrix noise = random_matrix(rng, 4);
  noise = (noise - noise.adjoint());  // skew part, certainly not self-adjoint
  z[0] += 1e-3 * noise * (z[0].norm() / noise.norm());
  const QuantumModel perturbed{SpaceChain::unchecked(std::move(z), Mode::strict_pd),
                               g3.model.h,
                               {}};
  double y1 = 0.0;
  for (const auto& cell : ledger::verify_table1(perturbed)) {
    if (cell.j == 1 && cell.tier == 1) y1 = cell.residual;
  }
  CHECK(y1 > 1e-4);
}

TEST_CASE("verify_table2: tier names, zeros, generated chains, explicit oracles") {
  CHECK(ledger::tier_name(0) == "Z");
  CHECK(ledger::tier_name(3) == "W");
  CHECK(ledger::tier_name(4) == "tier4");

  Rng rng(221);
  const auto model = identity_model(3, 4, random_hermitian(rng, 3));
  for (const auto& cell : ledger::verify_table2(model)) {
    CHECK(cell.residual < 1e-15);
  }

  // K=3: cell (2,0) against the explicit evaluation with Θ2 = Z2·Z1
  const auto g3 = dyson::generate_chain(5, 3, 44);
  const ComplexMatrix theta2 = naive_product(g3.chain.z(2), g3.chain.z(1));
  const double oracle =
      matcore::rel_diff(g3.model.h.adjoint() * theta2, theta2 * g3.model.h);
  CHECK(oracle < 1e-10);
  for (const auto& cell : ledger::verify_table2(g3.model)) {
    if (cell.j == 2 && cell.k == 0) {
      CHECK(cell.residual == doctest::Approx(oracle).epsilon(1e-6));
    }
    CHECK(cell.residual < 1e-10 * 5);
  }

  // K=4: cell (3,0) against Θ3 = Z3·Z2·Z1
  const auto g4 = dyson::generate_chain(4, 4, 45);
  const ComplexMatrix theta3 =
      naive_product(naive_product(g4.chain.z(3), g4.chain.z(2)), g4.chain.z(1));
  CHECK(matcore::rel_diff(g4.model.h.adjoint() * theta3, theta3 * g4.model.h) < 1e-10);
  for (const auto& cell : ledger::verify_table2(g4.model)) {
    CHECK(cell.residual < 1e-10 * 4);
  }
}

TEST_CASE("observability: H and Z1 pass; Z2 alone fails generically") {
  const auto gen = dyson::generate_chain(4, 4, 46);
  CHECK(ledger::observability_check(gen.model, gen.model.h).second);
  CHECK(ledger::observability_check(gen.model, gen.chain.z(1)).second);

  int z2_failures = 0;
  const int draws = 60;
  for (int s = 0; s < draws; ++s) {
    const auto t = dyson::generate_chain(4, 4, 1000 + static_cast<std::uint64_t>(s));
    const auto [res, ok] = ledger::observability_check(t.model, t.chain.z(2), 1e-6);
    if (!ok && res > 1e-6) ++z2_failures;
  }
  CHECK(z2_failures >= (draws * 95) / 100);
}

TEST_CASE("classify_canonical_observables: tails pass, excluded candidates fail, commuting passes") {
  const auto gen = dyson::generate_chain(5, 4, 47);
  const auto entries = ledger::classify_canonical_observables(gen.model);
  double tail_max = 0.0;
  bool z3z2_pass = true, z2_pass = true;
  for (const auto& e : entries) {
    if (e.name == "H" || e.name == "Z1" || e.name == "Z2*Z1" || e.name == "Z3*Z2*Z1" ||
        e.name == "Theta") {
      CHECK(e.pass);
      if (e.name != "H" && e.name != "Theta") tail_max = std::max(tail_max, e.residual);
    }
    if (e.name == "Z3*Z2") z3z2_pass = e.pass;
    if (e.name == "Z2") z2_pass = e.pass;
  }
  CHECK(tail_max < 1e-11 * 5);
  CHECK_FALSE(z3z2_pass);
  CHECK_FALSE(z2_pass);

  // degenerate chain: everything passes
  Rng rng(231);
  const auto eye = identity_model(3, 4, random_hermitian(rng, 3));
  for (const auto& e : ledger::classify_canonical_observables(eye)) CHECK(e.pass);

  // commutativity restores the observability of the second charge
  const auto comm = commuting_model(4, 48);
  for (const auto& e : ledger::classify_canonical_observables(comm)) {
    if (e.name == "Z2") CHECK(e.pass);
  }
}

TEST_CASE("tail products are observable by exact algebra at every length") {
  for (const int k : {2, 3, 4, 6}) {
    const auto gen = dyson::generate_chain(4, k, 100 + static_cast<std::uint64_t>(k));
    ComplexMatrix tail = gen.chain.z(1);
    for (int m = 1; m <= k - 1; ++m) {
      if (m > 1) tail = gen.chain.z(m) * tail;
      const auto [res, ok] = ledger::observability_check(gen.model, tail, 1e-11 * 4);
      CHECK(ok);
    }
  }
}

TEST_CASE("monotone sensitivity: a single perturbed Z_j raises some table-2 residual") {
  const auto gen = dyson::generate_chain(4, 4, 49);
  const double base = max_table2_residual(ledger::verify_table2(gen.model));
  Rng rng(241);
  for (const double eps : {1e-3, 1e-6}) {
    for (int j = 1; j <= 3; ++j) {
      std::vector<ComplexMatrix> z{gen.chain.z(1), gen.chain.z(2), gen.chain.z(3)};
      ComplexMatrix noise = random_matrix(rng, 4);
      z[static_cast<size_t>(j - 1)] +=
          eps * (z[static_cast<size_t>(j - 1)].norm() / noise.norm()) * noise;
      const QuantumModel m{SpaceChain::unchecked(std::move(z), Mode::strict_pd),
                           gen.model.h,
                           {}};
      const double worst = max_table2_residual(ledger::verify_table2(m));
      CHECK(worst > eps / 100.0);
      CHECK(worst > 10.0 * base);
    }
  }
}

TEST_CASE("full_report: pass flag, worst cell, bitwise determinism") {
  const auto gen = dyson::generate_chain(4, 4, 50);
  const auto r1 = ledger::full_report(gen.model);
  CHECK(r1.pass);
  CHECK(r1.tolerance_used == ledger::default_tolerance(4));
  CHECK(r1.max_residual <= r1.tolerance_used);
  CHECK_FALSE(r1.worst_cell.empty());
  for (const auto& [j, p] : r1.positivity) CHECK(p == chain::Positivity::pd);

  const auto r2 = ledger::full_report(gen.model);
  CHECK(r1.max_residual == r2.max_residual);
  CHECK(r1.worst_cell == r2.worst_cell);
  REQUIRE(r1.table1.size() == r2.table1.size());
  for (size_t i = 0; i < r1.table1.size(); ++i) {
    CHECK(r1.table1[i].residual == r2.table1[i].residual);
  }
  REQUIRE(r1.table2.size() == r2.table2.size());
  for (size_t i = 0; i < r1.table2.size(); ++i) {
    CHECK(r1.table2[i].residual == r2.table2[i].residual);
  }

  // a corrupted chain produces a failing report, not an exception
  std::vector<ComplexMatrix> z{gen.chain.z(1), gen.chain.z(2), gen.chain.z(3)};
  z[0](0, 1) += Complex(1e-2, 0);
  const QuantumModel bad{SpaceChain::unchecked(std::move(z), Mode::strict_pd),
                         gen.model.h,
                         {}};
  const auto rb = ledger::full_report(bad);
  CHECK_FALSE(rb.pass);
  CHECK(rb.max_residual > rb.tolerance_used);
}
