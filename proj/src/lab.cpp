#include "rank2lu/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/QR>

namespace rank2lu {

namespace {

constexpr int kMaxGenerationAttempts = 200;

Rng make_rng(Seed seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.value),
                    static_cast<std::uint32_t>(seed.value >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Complex random_phase(Rng& rng) {
  return std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

// Random weights w_k > 0 with sum 1 and max <= 1/2 - margin; sorted descending.
std::vector<double> random_feasible_weights(int m, Rng& rng) {
  if (m == 2) return {0.5, 0.5};
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> w(static_cast<std::size_t>(m));
    double total = 0.0;
    for (auto& x : w) {
      x = uniform(rng, 0.15, 1.0);
      total += x;
    }
    for (auto& x : w) x /= total;
    std::sort(w.begin(), w.end(), std::greater<>());
    if (w.front() <= 0.45) return w;
  }
  throw Error(ErrorCode::GenerationFailure, "could not draw feasible singular values");
}

// Unimodular mu_k with sum_k w_k mu_k = 0. Empty result if the draw was infeasible.
std::vector<Complex> solve_balanced_phases(const std::vector<double>& w, Rng& rng) {
  const std::size_t k = w.size();
  std::vector<Complex> mu(k);
  // Solve for the two heaviest weights, draw the rest.
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return w[x] > w[y]; });
  const std::size_t ia = order[0];
  const std::size_t ib = order[1];
  Complex rest(0.0);
  for (std::size_t j = 2; j < k; ++j) {
    mu[order[j]] = random_phase(rng);
    rest += w[order[j]] * mu[order[j]];
  }
  const Complex c = -rest;
  const double r = std::abs(c);
  const double wa = w[ia];
  const double wb = w[ib];
  if (r < 1e-14) {
    if (std::abs(wa - wb) > 1e-12) return {};
    mu[ia] = random_phase(rng);
    mu[ib] = -mu[ia];
    return mu;
  }
  if (r < std::abs(wa - wb) || r > wa + wb) return {};
  const double cos_phi = std::clamp((r * r + wa * wa - wb * wb) / (2.0 * r * wa), -1.0, 1.0);
  const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  mu[ia] = std::polar(1.0, std::arg(c) + sign * std::acos(cos_phi));
  mu[ib] = (c - wa * mu[ia]) / wb;
  mu[ib] /= std::abs(mu[ib]);
  return mu;
}

ComplexMatrix random_gamma(const RealVector& delta, const std::vector<SingularBlock>& blocks,
                           Rng& rng) {
  const int m = static_cast<int>(delta.size());
  std::vector<double> weights;
  std::vector<int> index;
  for (const auto& blk : blocks) {
    if (blk.zero) continue;
    for (int j = 0; j < blk.size; ++j) {
      weights.push_back(delta(blk.start + j) * delta(blk.start + j));
      index.push_back(blk.start + j);
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double largest = weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
  if (weights.size() < 2 || largest > 0.5 * total + 1e-12) {
    throw Error(ErrorCode::OrthogonalityUnsatisfiable,
                "no unitary Gamma gives Tr(Gamma Delta^2) = 0 for these singular values");
  }
  std::vector<Complex> mu;
  for (int attempt = 0; attempt < 10000 && mu.empty(); ++attempt) {
    mu = solve_balanced_phases(weights, rng);
  }
  if (mu.empty()) {
    throw Error(ErrorCode::GenerationFailure, "could not balance Gamma eigenvalue phases");
  }
  ComplexVector diag = ComplexVector::Ones(m);
  for (std::size_t k = 0; k < index.size(); ++k) diag(index[k]) = mu[k];

  ComplexMatrix gamma = ComplexMatrix::Identity(m, m);
  for (const auto& blk : blocks) {
    if (blk.zero) continue;
    const ComplexMatrix w = haar_unitary(blk.size, rng);
    gamma.block(blk.start, blk.start, blk.size, blk.size) =
        w * diag.segment(blk.start, blk.size).asDiagonal() * w.adjoint();
  }
  return gamma;
}

ComplexMatrix delta_hat(const RealVector& delta, int n) {
  ComplexMatrix out = ComplexMatrix::Zero(delta.size(), n);
  for (Eigen::Index k = 0; k < delta.size(); ++k) out(k, k) = delta(k);
  return out;
}

ComplexMatrix hermitian_from_params(const double* x, int d) {
  ComplexMatrix h(d, d);
  int p = 0;
  for (int i = 0; i < d; ++i) h(i, i) = x[p++];
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = Complex(x[p], x[p + 1]);
      h(j, i) = std::conj(h(i, j));
      p += 2;
    }
  }
  return h;
}

// Squared residual ||rho2 - K rho1 K^dag||_F^2 evaluated through the
// eigen-decompositions of both density matrices.
class OracleObjective {
 public:
  OracleObjective(const DensityMatrix& rho1, const DensityMatrix& rho2)
      : m_(rho1.shape().m), n_(rho1.shape().n) {
    load(rho1, weights1_, vectors1_, norm1_);
    load(rho2, weights2_, vectors2_, norm2_);
  }

  int dim() const { return m_ * m_ + n_ * n_; }

  double value(const ComplexMatrix& u1, const ComplexMatrix& u2) const {
    double overlap = 0.0;
    for (std::size_t i = 0; i < vectors1_.size(); ++i) {
      const ComplexMatrix y = u1 * vectors1_[i] * u2.transpose();
      for (std::size_t j = 0; j < vectors2_.size(); ++j) {
        const Complex inner = (vectors2_[j].conjugate().cwiseProduct(y)).sum();
        overlap += weights1_[i] * weights2_[j] * std::norm(inner);
      }
    }
    return std::max(0.0, norm1_ + norm2_ - 2.0 * overlap);
  }

  double value(const Eigen::VectorXd& x) const {
    return value(expi_hermitian(hermitian_from_params(x.data(), m_)),
                 expi_hermitian(hermitian_from_params(x.data() + m_ * m_, n_)));
  }

  // Central differences; the unperturbed factor is reused across coordinates.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, double h) const {
    Eigen::VectorXd g(x.size());
    const ComplexMatrix u1 = expi_hermitian(hermitian_from_params(x.data(), m_));
    const ComplexMatrix u2 = expi_hermitian(hermitian_from_params(x.data() + m_ * m_, n_));
    Eigen::VectorXd probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const bool first = k < m_ * m_;
      probe(k) = x(k) + h;
      const double up = first ? value(expi_hermitian(hermitian_from_params(probe.data(), m_)), u2)
                              : value(u1, expi_hermitian(hermitian_from_params(
                                              probe.data() + m_ * m_, n_)));
      probe(k) = x(k) - h;
      const double down =
          first ? value(expi_hermitian(hermitian_from_params(probe.data(), m_)), u2)
                : value(u1, expi_hermitian(hermitian_from_params(probe.data() + m_ * m_, n_)));
      probe(k) = x(k);
      g(k) = (up - down) / (2.0 * h);
    }
    return g;
  }

  std::pair<ComplexMatrix, ComplexMatrix> unitaries(const Eigen::VectorXd& x) const {
    return {expi_hermitian(hermitian_from_params(x.data(), m_)),
            expi_hermitian(hermitian_from_params(x.data() + m_ * m_, n_))};
  }

 private:
  void load(const DensityMatrix& rho, std::vector<double>& weights,
            std::vector<ComplexMatrix>& vectors, double& norm) {
    const HermitianEig eig = hermitian_eig(rho.rho());
    norm = rho.rho().squaredNorm();
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
      if (eig.eigenvalues(k) <= 1e-14) continue;
      weights.push_back(eig.eigenvalues(k));
      vectors.push_back(vec_to_matrix(eig.eigenvectors.col(k), rho.shape()));
    }
  }

  int m_;
  int n_;
  std::vector<double> weights1_;
  std::vector<double> weights2_;
  std::vector<ComplexMatrix> vectors1_;
  std::vector<ComplexMatrix> vectors2_;
  double norm1_ = 0.0;
  double norm2_ = 0.0;
};

// Steepest descent with Armijo backtracking and step expansion after success.
Eigen::VectorXd descend(const OracleObjective& f, Eigen::VectorXd x, const OracleConfig& cfg) {
  constexpr double kFdStep = 1e-6;
  constexpr double kMinStep = 1e-12;
  double fx = f.value(x);
  double step = cfg.step_init;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (fx <= 1e-24) break;
    const Eigen::VectorXd g = f.gradient(x, kFdStep);
    const double gnorm = g.norm();
    if (gnorm == 0.0) break;
    bool accepted = false;
    while (step * gnorm >= kMinStep) {
      const Eigen::VectorXd trial = x - step * g;
      const double ft = f.value(trial);
      if (ft <= fx - 1e-4 * step * gnorm * gnorm) {
        x = trial;
        fx = ft;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

void OracleConfig::validate() const {
  if (restarts < 1 || max_iters < 1 || !(step_init > 0.0) ||
      !(accept_threshold < reject_threshold)) {
    throw Error(ErrorCode::InvalidArgument, "invalid oracle configuration");
  }
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "haar_unitary: dimension must be >= 1");
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix haar_unitary(int d, Seed seed) {
  Rng rng = make_rng(seed);
  return haar_unitary(d, rng);
}

RankTwoState random_class_state(BipartiteShape shape, double lambda, const ClassStateSpec& spec,
                                Seed seed, const ToleranceConfig& cfg) {
  shape = BipartiteShape::make(shape.m, shape.n);
  const int m = shape.m;
  const int n = shape.n;
  Rng rng = make_rng(seed);

  RealVector delta(m);
  if (spec.delta) {
    if (static_cast<int>(spec.delta->size()) != m) {
      throw Error(ErrorCode::InvalidArgument, "delta must have m entries");
    }
    std::vector<double> d = *spec.delta;
    for (double x : d) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorCode::InvalidArgument, "delta entries must be nonnegative");
      }
    }
    std::sort(d.begin(), d.end(), std::greater<>());
    for (int k = 0; k < m; ++k) delta(k) = d[static_cast<std::size_t>(k)];
    if (delta.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "delta is zero");
    delta /= delta.norm();
  } else {
    const auto w = random_feasible_weights(m, rng);
    for (int k = 0; k < m; ++k) delta(k) = std::sqrt(w[static_cast<std::size_t>(k)]);
  }
  const auto blocks = singular_blocks(delta, cfg);

  ComplexMatrix gamma;
  if (spec.gamma) {
    gamma = *spec.gamma;
    if (gamma.rows() != m || gamma.cols() != m) {
      throw Error(ErrorCode::InvalidArgument, "gamma must be m x m");
    }
    if (!is_unitary(gamma, cfg.tol_eq)) {
      throw Error(ErrorCode::InvalidArgument, "gamma must be unitary");
    }
    const ComplexMatrix d = delta.cast<Complex>().asDiagonal();
    if ((gamma * d - d * gamma).norm() > cfg.tol_eq) {
      throw Error(ErrorCode::InvalidArgument, "gamma must commute with diag(delta)");
    }
    if (std::abs((gamma * d * d).trace()) > cfg.tol_eq) {
      throw Error(ErrorCode::OrthogonalityUnsatisfiable,
                  "requested Gamma violates Tr(Gamma Delta^2) = 0");
    }
  } else {
    gamma = random_gamma(delta, blocks, rng);
  }

  const ComplexMatrix u = haar_unitary(m, rng);
  const ComplexMatrix v = haar_unitary(n, rng);
  const ComplexMatrix dh = delta_hat(delta, n);
  return RankTwoState::make(shape, lambda, u * dh * v.adjoint(), u * gamma * dh * v.adjoint(),
                            cfg);
}

std::pair<RankTwoState, LUWitness> equivalent_pair(const RankTwoState& base,
                                                   const ComplexMatrix& u1,
                                                   const ComplexMatrix& u2,
                                                   const ToleranceConfig& cfg) {
  const DensityMatrix image = apply_local_unitary(assemble(base), u1, u2, cfg);
  RankTwoState state = decompose(image, cfg);
  LUWitness w{u1, u2, 0.0};
  w.residual = verify_lu_witness(base, state, w, cfg);
  return {std::move(state), std::move(w)};
}

std::pair<RankTwoState, LUWitness> equivalent_pair(const RankTwoState& base, Seed seed,
                                                   const ToleranceConfig& cfg) {
  Rng rng = make_rng(seed);
  const ComplexMatrix u1 = haar_unitary(base.shape().m, rng);
  const ComplexMatrix u2 = haar_unitary(base.shape().n, rng);
  return equivalent_pair(base, u1, u2, cfg);
}

std::pair<RankTwoState, RankTwoState> inequivalent_pair(BipartiteShape shape, double lambda,
                                                        Seed seed, const ToleranceConfig& cfg) {
  shape = BipartiteShape::make(shape.m, shape.n);
  if (shape.m < 3) {
    throw Error(ErrorCode::GenerationFailure,
                "inequivalent_pair: for m = 2 every in-class state with a given lambda has "
                "Gamma spectrum {mu, -mu}, so no inequivalent pair shares delta and lambda");
  }
  // Certification margin: spectra must stay apart at a much coarser tolerance.
  ToleranceConfig coarse = cfg;
  coarse.tol_eq = 1e-2;
  Rng rng = make_rng(seed);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    const auto w = random_feasible_weights(shape.m, rng);
    ClassStateSpec spec;
    spec.delta = std::vector<double>(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) (*spec.delta)[k] = std::sqrt(w[k]);
    const Seed s1{rng()};
    const Seed s2{rng()};
    RankTwoState first = random_class_state(shape, lambda, spec, s1, cfg);
    RankTwoState second = random_class_state(shape, lambda, spec, s2, cfg);
    const CanonicalForm c1 = canonicalize(first, cfg);
    const CanonicalForm c2 = canonicalize(second, cfg);
    if (compare_canonical(c1, c2, coarse).equivalent) continue;
    if (compare_canonical(c1, c2, cfg).equivalent) continue;
    if (compare_fingerprints(fingerprint(first, cfg), fingerprint(second, cfg), cfg).equal) {
      continue;
    }
    return {std::move(first), std::move(second)};
  }
  throw Error(ErrorCode::GenerationFailure, "inequivalent_pair: retries exhausted");
}

std::pair<RankTwoState, SloccWitness> slocc_pair(const RankTwoState& base, Seed seed,
                                                 double max_condition,
                                                 const ToleranceConfig& cfg) {
  const int m = base.shape().m;
  if (m != base.shape().n) throw Error(ErrorCode::ShapeMismatch, "slocc_pair requires m = n");
  if (rank_tol(base.b(), cfg) < static_cast<std::size_t>(m)) {
    throw Error(ErrorCode::SingularB, "B singular");
  }
  if (!(max_condition >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_condition must be >= 1");
  }
  Rng rng = make_rng(seed);
  const double spread = std::min(max_condition, 10.0);
  auto random_positive = [&](int d) {
    RealVector s(d);
    for (int k = 0; k < d; ++k) s(k) = std::exp(uniform(rng, 0.0, std::log(spread)));
    const ComplexMatrix w = haar_unitary(d, rng);
    return ComplexMatrix(w * s.cast<Complex>().asDiagonal() * w.adjoint());
  };
  auto condition = [](const ComplexMatrix& x) {
    const RealVector s = svd(x).sigma;
    return s(0) / s(s.size() - 1);
  };

  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    // Right factor T, then a Gram matrix G = P^dag P orthogonal (real trace
    // inner product) to both Hermitian parts of F = A T T^dag B^dag, which
    // makes Tr(P A T (P B T)^dag) = Tr(G F) vanish, and to
    // E = A T T^dag A^dag - B T T^dag B^dag, which gives P A T and P B T equal
    // norms. One common rescaling of P then normalizes both.
    const ComplexMatrix t = random_positive(m) * haar_unitary(m, rng);
    const ComplexMatrix tt = t * t.adjoint();
    const ComplexMatrix f = base.a() * tt * base.b().adjoint();
    const ComplexMatrix fh = 0.5 * (f + f.adjoint());
    const ComplexMatrix fa = (f - f.adjoint()) / Complex(0.0, 2.0);
    const ComplexMatrix e =
        base.a() * tt * base.a().adjoint() - base.b() * tt * base.b().adjoint();
    auto inner = [](const ComplexMatrix& x, const ComplexMatrix& y) {
      return (x * y).trace().real();
    };
    std::vector<ComplexMatrix> basis;
    for (const ComplexMatrix* c : {&fh, &fa, &e}) {
      ComplexMatrix e = *c;
      for (const auto& b : basis) e -= inner(e, b) * b;
      const double nrm = std::sqrt(std::max(0.0, inner(e, e)));
      if (nrm > 1e-12) basis.push_back(e / nrm);
    }
    ComplexMatrix g = random_positive(m);
    for (const auto& b : basis) g -= inner(g, b) * b;
    g = 0.5 * (g + g.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(g);
    if (eig.eigenvalues().minCoeff() <= 0.0) continue;
    const ComplexMatrix root = eig.eigenvectors() *
                               eig.eigenvalues().cwiseSqrt().cast<Complex>().asDiagonal() *
                               eig.eigenvectors().adjoint();
    ComplexMatrix p = haar_unitary(m, rng) * root;
    if (condition(p) > max_condition || condition(t) > max_condition) continue;
    p /= (p * base.a() * t).norm();

    const ComplexMatrix a = p * base.a() * t;
    const ComplexMatrix b = p * base.b() * t;
    RankTwoState image = RankTwoState::make(base.shape(), base.lambda1(), a, b, cfg);
    SloccWitness w{p, t.transpose(), 0.0};
    w.residual = verify_slocc_witness(base, image, w.p, w.q);
    return {std::move(image), std::move(w)};
  }
  throw Error(ErrorCode::GenerationFailure, "slocc_pair: retries exhausted");
}

ComplexMatrix family_a(double theta) {
  ComplexMatrix a(2, 2);
  a << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return a / std::sqrt(2.0);
}

ComplexMatrix family_b(double gamma_angle) {
  ComplexMatrix b(2, 2);
  b << std::cos(gamma_angle), std::sin(gamma_angle), std::sin(gamma_angle),
      -std::cos(gamma_angle);
  return b / std::sqrt(2.0);
}

RankTwoState two_qubit_family(double theta, double gamma_angle, double lambda) {
  return RankTwoState::make(BipartiteShape::make(2, 2), lambda, family_a(theta),
                            family_b(gamma_angle));
}

double concurrence_2x2(const ComplexMatrix& m, const ToleranceConfig& cfg) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw Error(ErrorCode::ShapeMismatch, "concurrence_2x2 expects a 2 x 2 matrix");
  }
  if (std::abs(m.squaredNorm() - 1.0) > cfg.tol_eq) {
    throw Error(ErrorCode::NotNormalized, "coefficient matrix is not normalized");
  }
  return 2.0 * std::abs(m.determinant());
}

OracleResult oracle_search(const DensityMatrix& rho1, const DensityMatrix& rho2,
                           const OracleConfig& cfg, Seed seed) {
  cfg.validate();
  if (!(rho1.shape() == rho2.shape())) {
    throw Error(ErrorCode::ShapeMismatch, "oracle_search: shapes differ");
  }
  const OracleObjective objective(rho1, rho2);

  OracleResult best;
  best.best_residual = std::numeric_limits<double>::infinity();
  // Restarts are independent: restart r uses its own stream (seed, r), so any
  // schedule reproduces the same per-restart results. Stops after the first
  // accepting restart; the reduction keeps the lowest index on ties.
  for (int r = 0; r < cfg.restarts; ++r) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(objective.dim());
    if (r > 0) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index k = 0; k < x0.size(); ++k) x0(k) = normal(rng);
    }
    const Eigen::VectorXd x = descend(objective, x0, cfg);
    auto [u1, u2] = objective.unitaries(x);
    const ComplexMatrix k = kron(u1, u2);
    const double residual = frobenius_distance(rho2.rho(), k * rho1.rho() * k.adjoint());
    best.restarts_run = r + 1;
    if (residual < best.best_residual) {
      best.best_residual = residual;
      best.best_witness = LUWitness{std::move(u1), std::move(u2), residual};
      best.best_restart = r;
    }
    if (best.best_residual <= cfg.accept_threshold) break;
  }
  best.verdict = best.best_residual <= cfg.accept_threshold ? OracleVerdict::Equivalent
                                                            : OracleVerdict::NoWitnessFound;
  return best;
}

OracleResult oracle_search(const RankTwoState& s1, const RankTwoState& s2,
                           const OracleConfig& cfg, Seed seed) {
  return oracle_search(assemble(s1), assemble(s2), cfg, seed);
}

}  // namespace rank2lu
