#include "cryptoherm/dyson.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "cryptoherm/rng.hpp"

namespace cryptoherm::dyson {

namespace {

constexpr double kDefectivityCap = 1e8;

void require_factors(const std::vector<ComplexMatrix>& omegas, double condition_cap) {
  if (omegas.empty()) {
    throw ShapeError("dyson: need at least one factor (K >= 2)");
  }
  const Eigen::Index dim = omegas.front().rows();
  for (size_t i = 0; i < omegas.size(); ++i) {
    const auto& w = omegas[i];
    if (w.rows() != w.cols() || w.rows() != dim || dim == 0) {
      throw ShapeError("dyson: Omega_" + std::to_string(i + 1) + " is " +
                       std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                       ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!matcore::all_finite(w)) {
      throw RangeError("dyson: Omega_" + std::to_string(i + 1) + " has non-finite entries");
    }
    const double cond = matcore::condition_estimate(w);
    if (!(cond < condition_cap)) {
      throw ConditioningError("dyson: Omega_" + std::to_string(i + 1) +
                                  " condition estimate " + matcore::fmt_sci(cond) +
                                  " exceeds cap",
                              cond);
    }
  }
}

ComplexMatrix compose_factors(const std::vector<ComplexMatrix>& omegas) {
  // left-to-right as written: Ω_{K-1}·…·Ω_2·Ω_1
  ComplexMatrix c = omegas.back();
  for (auto it = omegas.rbegin() + 1; it != omegas.rend(); ++it) c = c * (*it);
  return c;
}

}  // namespace

const ComplexMatrix& DysonChain::omega(int j) const {
  if (j < 1 || j > K - 1) {
    throw InvalidParameterError("dyson: factor index " + std::to_string(j) +
                                " out of range [1, " + std::to_string(K - 1) + "]");
  }
  return omegas[static_cast<size_t>(j - 1)];
}

DysonChain dyson_from_factors(std::vector<ComplexMatrix> omegas, double condition_cap) {
  require_factors(omegas, condition_cap);
  DysonChain d;
  d.K = static_cast<int>(omegas.size()) + 1;
  d.dim = omegas.front().rows();
  d.composed = compose_factors(omegas);
  d.omegas = std::move(omegas);
  return d;
}

const ComplexMatrix& compose(const DysonChain& d) {
  return d.composed;
}

std::pair<chain::SpaceChain, DysonChain> chain_from_dyson(
    std::vector<ComplexMatrix> omegas, chain::Mode mode, double condition_cap) {
  DysonChain d = dyson_from_factors(std::move(omegas), condition_cap);
  const int K = d.K;
  const Eigen::Index n = d.dim;

  // Top-down: ‡(j) depends only on Z_{j+1}…Z_{K-1}, which are already built.
  std::vector<ComplexMatrix> z(static_cast<size_t>(K - 1));
  ComplexMatrix theta = ComplexMatrix::Identity(n, n);  // Θ_(K-1,j) running
  for (int j = K - 1; j >= 1; --j) {
    const auto& w = d.omega(j);
    if (j == K - 1) {
      z[static_cast<size_t>(j - 1)] = w.adjoint() * w;
    } else {
      // Z_j = Ω_j^{‡(j)}·Ω_j = Θ⁻¹·Ω_j†·Θ·Ω_j
      Eigen::PartialPivLU<ComplexMatrix> lu(theta);
      z[static_cast<size_t>(j - 1)] = lu.solve(w.adjoint() * theta * w);
    }
    theta = theta * z[static_cast<size_t>(j - 1)];
  }

  auto c = chain::SpaceChain::make(std::move(z), mode, -1.0, condition_cap);
  return {std::move(c), std::move(d)};
}

HermitizationResult hermitize(const ledger::QuantumModel& model, const DysonChain& d,
                              double tol) {
  const auto dim = model.chain.dim();
  if (d.dim != dim) {
    throw ShapeError("hermitize: dyson dimension " + std::to_string(d.dim) +
                     " differs from model dimension " + std::to_string(dim));
  }
  const double t = tol < 0.0 ? ledger::default_tolerance(dim) : tol;

  // The Dyson chain must generate the model's metric: Θ = Ω†Ω.
  const double theta_res =
      matcore::rel_diff(d.composed.adjoint() * d.composed, model.chain.theta());
  if (theta_res > std::max(1e-8, 100.0 * t)) {
    throw ConsistencyError("hermitize: Dyson factors do not generate the model chain "
                           "(Theta mismatch " +
                           std::to_string(theta_res) + ")");
  }
  const auto [h_res, h_ok] = ledger::observability_check(model, model.h, t);
  if (!h_ok) {
    throw ConsistencyError("hermitize: model Hamiltonian fails quasi-Hermiticity, residual " +
                           std::to_string(h_res));
  }

  const ComplexMatrix omega_inv = matcore::inverse(d.composed);
  const ComplexMatrix h = d.composed * model.h * omega_inv;
  HermitizationResult out;
  out.hermiticity_residual = (h - h.adjoint()).norm() / std::max(h.norm(), 1e-300);
  if (out.hermiticity_residual > t) {
    throw ConsistencyError("hermitize: result is not Hermitian within tolerance (residual " +
                           std::to_string(out.hermiticity_residual) +
                           "); the input model is invalid");
  }
  out.h = h;

  const auto ev_h = matcore::eig_general(model.h).eigenvalues;
  const auto ev_out = matcore::eig_general(h).eigenvalues;
  out.spectra = matcore::compare_spectra(
      std::vector<Complex>(ev_h.data(), ev_h.data() + ev_h.size()),
      std::vector<Complex>(ev_out.data(), ev_out.data() + ev_out.size()));
  return out;
}

ledger::QuantumModel make_crypto_hermitian(const ComplexMatrix& hermitian_h,
                                           const DysonChain& d, chain::Mode mode) {
  if (hermitian_h.rows() != d.dim || hermitian_h.cols() != d.dim) {
    throw ShapeError("make_crypto_hermitian: Hamiltonian dimension mismatch");
  }
  if (!matcore::is_hermitian(hermitian_h)) {
    throw SymmetryError("make_crypto_hermitian: input Hamiltonian is not Hermitian "
                        "within 1e-10 relative");
  }
  auto [c, d2] = chain_from_dyson(d.omegas, mode);
  const ComplexMatrix omega_inv = matcore::inverse(d2.composed);
  ComplexMatrix h_math = omega_inv * hermitian_h * d2.composed;
  return ledger::verified_model(std::move(c), std::move(h_math));
}

GeneratedTriple generate_chain(Eigen::Index dim, int K, std::uint64_t seed,
                               double conditioning_cap) {
  if (dim < 1) throw InvalidParameterError("generate_chain: dim must be >= 1");
  if (K < 2) throw InvalidParameterError("generate_chain: K must be >= 2");
  if (!(conditioning_cap > 1.0)) {
    throw InvalidParameterError("generate_chain: conditioning_cap must exceed 1");
  }
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

  std::vector<ComplexMatrix> omegas;
  omegas.reserve(static_cast<size_t>(K - 1));
  for (int j = 1; j <= K - 1; ++j) {
    ComplexMatrix g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = rng.complex_normal() * scale;
    Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s(i) = std::clamp(s(i), 1.0 / conditioning_cap, conditioning_cap);
    }
    omegas.push_back(svd.matrixU() * s.asDiagonal() *
                     svd.matrixV().adjoint());
  }

  auto [c, d] = chain_from_dyson(std::move(omegas), chain::Mode::strict_pd);

  ComplexMatrix a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index cl = 0; cl < dim; ++cl) a(r, cl) = rng.complex_normal();
  ComplexMatrix h_phys = (a + a.adjoint()) / 2.0;
  h_phys *= std::sqrt(static_cast<double>(dim)) / std::max(h_phys.norm(), 1e-300);

  const ComplexMatrix omega_inv = matcore::inverse(d.composed);
  ComplexMatrix h_math = omega_inv * h_phys * d.composed;
  auto model = ledger::verified_model(c, std::move(h_math));
  return {std::move(c), std::move(d), std::move(model)};
}

DysonChain sqrt_refactorize(const chain::SpaceChain& c) {
  if (c.mode() != chain::Mode::strict_pd) {
    throw InvalidParameterError("sqrt_refactorize: requires a strict_pd chain");
  }
  ComplexMatrix omega1 = matcore::principal_sqrt_pd(c.theta());
  DysonChain d;
  d.K = 2;
  d.dim = c.dim();
  d.composed = omega1;
  d.omegas.push_back(std::move(omega1));
  return d;
}

MetricSolveResult metric_from_hamiltonian(const ComplexMatrix& h, double tol,
                                          Eigen::Index dim_cap) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw ShapeError("metric_from_hamiltonian: expected nonempty square matrix");
  }
  const Eigen::Index n = h.rows();
  if (n > dim_cap) {
    throw InvalidParameterError("metric_from_hamiltonian: dimension " + std::to_string(n) +
                                " exceeds cap " + std::to_string(dim_cap));
  }
  if (!matcore::all_finite(h)) {
    throw RangeError("metric_from_hamiltonian: non-finite entries");
  }
  if (tol <= 0.0) tol = 1e-10;

  const auto eig = matcore::eig_general(h);
  const double vec_cond = matcore::condition_estimate(eig.right_eigenvectors);
  if (!(vec_cond < kDefectivityCap)) {
    throw SolverError("metric_from_hamiltonian: H is defective within tolerance "
                      "(eigenvector condition " +
                      matcore::fmt_sci(vec_cond) + "); no unique diagonalization");
  }

  MetricSolveResult out;

  // Null space of (I ⊗ H†) − (Hᵀ ⊗ I) over vec(Θ), column-stacked.
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  ComplexMatrix m = Eigen::kroneckerProduct(eye, h.adjoint()).eval() -
                    Eigen::kroneckerProduct(h.transpose(), eye).eval();
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sing = svd.singularValues();
  const double smax = sing.size() > 0 ? sing(0) : 0.0;
  const double cutoff = std::max(1e-10 * smax, 1e-14 * std::max(1.0, h.norm()));

  std::vector<ComplexMatrix> raw;
  for (Eigen::Index i = 0; i < sing.size(); ++i) {
    if (sing(i) > cutoff) continue;
    const Eigen::Map<const ComplexMatrix> theta(svd.matrixV().col(i).data(), n, n);
    raw.emplace_back((theta + theta.adjoint()) / 2.0);
    raw.emplace_back((ComplexMatrix(theta) - theta.adjoint()) / Complex(0.0, 2.0));
  }

  // Real-linear Gram–Schmidt in the Frobenius inner product Re tr(A†B).
  for (auto& cand : raw) {
    ComplexMatrix v = cand;
    const double norm0 = v.norm();
    if (norm0 < 1e-12) continue;
    for (const auto& b : out.hermitian_basis) {
      const double proj = (b.adjoint() * v).trace().real();
      v -= proj * b;
    }
    if (v.norm() > 1e-8 * norm0) {
      v /= v.norm();
      out.hermitian_basis.push_back((v + v.adjoint()) / 2.0);
    }
  }

  auto sylvester_residual = [&](const ComplexMatrix& theta) {
    const double den = std::max(h.norm() * theta.norm(), 1e-300);
    return (h.adjoint() * theta - theta * h).norm() / den;
  };
  auto push_candidate = [&](ComplexMatrix theta) {
    theta = (theta + theta.adjoint()) / 2.0;
    const double tr = theta.trace().real();
    if (tr < 0.0) theta = -theta;
    if (std::abs(theta.trace().real()) < 1e-12 * std::max(theta.norm(), 1e-300)) return;
    theta *= static_cast<double>(n) / theta.trace().real();
    if (!matcore::is_positive_definite(theta)) return;
    // a metric must carry a bounded inverse; drop near-singular cone boundary hits
    if (!(matcore::condition_estimate(theta) < matcore::kDefaultConditionCap)) return;
    if (sylvester_residual(theta) > tol) return;
    for (const auto& seen : out.pd_candidates) {
      if (matcore::rel_diff(seen, theta) < 1e-6) return;
    }
    out.pd_candidates.push_back(std::move(theta));
  };

  // Canonical biorthogonal metric Θ = Σ_k |χ_k⟩⟨χ_k| from left eigenvectors,
  // available whenever the spectrum is real.
  double im_max = 0.0, abs_max = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    im_max = std::max(im_max, std::abs(eig.eigenvalues(i).imag()));
    abs_max = std::max(abs_max, std::abs(eig.eigenvalues(i)));
  }
  if (im_max <= 1e-8 * std::max(1.0, abs_max)) {
    const ComplexMatrix w = matcore::inverse(eig.right_eigenvectors);
    push_candidate(w.adjoint() * w);
  }

  // Deterministic scan of the basis: vertices, pair midpoints, centroid.
  const auto& basis = out.hermitian_basis;
  for (const auto& b : basis) {
    push_candidate(b);
    push_candidate(-b);
  }
  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = i + 1; j < basis.size(); ++j) {
      push_candidate(basis[i] + basis[j]);
      push_candidate(basis[i] - basis[j]);
      push_candidate(basis[j] - basis[i]);
      push_candidate(-basis[i] - basis[j]);
    }
  }
  if (basis.size() > 1) {
    ComplexMatrix centroid = ComplexMatrix::Zero(n, n);
    for (const auto& b : basis) centroid += b;
    push_candidate(centroid);
    push_candidate(-centroid);
  }
  return out;
}

}  // namespace cryptoherm::dyson
