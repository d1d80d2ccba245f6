#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "rank2lu/engine.hpp"

namespace rank2lu {

struct Seed {
  std::uint64_t value = 0;
};

using Rng = std::mt19937_64;

struct OracleConfig {
  int restarts = 50;
  int max_iters = 2000;
  double step_init = 0.1;
  double accept_threshold = 1e-6;
  double reject_threshold = 1e-3;

  void validate() const;
};

enum class OracleVerdict { Equivalent, NoWitnessFound };

struct OracleResult {
  double best_residual = 0.0;
  LUWitness best_witness;
  OracleVerdict verdict = OracleVerdict::NoWitnessFound;
  int best_restart = 0;
  int restarts_run = 0;
};

ComplexMatrix haar_unitary(int d, Seed seed);
ComplexMatrix haar_unitary(int d, Rng& rng);

/// Requested canonical data for random_class_state; nullopt means "random".
/// `gamma` is the full m x m unitary, block diagonal over the delta blocks.
struct ClassStateSpec {
  std::optional<std::vector<double>> delta;
  std::optional<ComplexMatrix> gamma;
};

/// A = U Delta_hat V^dag, B = U Gamma Delta_hat V^dag with Haar U, V. Random
/// Gamma is drawn with block eigenvalue phases solved so that
/// Tr(Gamma Delta^2) = 0, which eigenvector orthogonality requires.
RankTwoState random_class_state(BipartiteShape shape, double lambda, const ClassStateSpec& spec,
                                Seed seed, const ToleranceConfig& cfg = {});

/// Haar (U1, U2) image of `base`, re-decomposed, with the generating witness.
std::pair<RankTwoState, LUWitness> equivalent_pair(const RankTwoState& base, Seed seed,
                                                   const ToleranceConfig& cfg = {});
std::pair<RankTwoState, LUWitness> equivalent_pair(const RankTwoState& base,
                                                   const ComplexMatrix& u1,
                                                   const ComplexMatrix& u2,
                                                   const ToleranceConfig& cfg = {});

/// Two in-class states sharing delta and lambda whose Gamma block spectra no
/// global phase aligns; certified with compare_canonical before returning.
/// Needs m >= 3: for m = 2 every admissible Gamma spectrum is {mu, -mu}.
std::pair<RankTwoState, RankTwoState> inequivalent_pair(BipartiteShape shape, double lambda,
                                                        Seed seed,
                                                        const ToleranceConfig& cfg = {});

/// Image of `base` (m = n, B invertible) under random invertible local
/// operators with condition number <= max_condition. The operators are tuned
/// so the transformed eigenvectors stay orthonormal, which makes the image
/// exactly (P (x) Q) rho (P (x) Q)^dag.
std::pair<RankTwoState, SloccWitness> slocc_pair(const RankTwoState& base, Seed seed,
                                                 double max_condition = 100.0,
                                                 const ToleranceConfig& cfg = {});

/// The two-qubit family A(theta) = R(theta)/sqrt2, B(gamma) = reflection/sqrt2.
ComplexMatrix family_a(double theta);
ComplexMatrix family_b(double gamma_angle);
RankTwoState two_qubit_family(double theta, double gamma_angle, double lambda);

/// 2 |det M| for a normalized 2 x 2 coefficient matrix.
double concurrence_2x2(const ComplexMatrix& m, const ToleranceConfig& cfg = {});

/// Brute-force minimization of ||rho2 - (e^{iH1} (x) e^{iH2}) rho1 (...)^dag||_F
/// with finite-difference descent and random restarts.
OracleResult oracle_search(const DensityMatrix& rho1, const DensityMatrix& rho2,
                           const OracleConfig& cfg, Seed seed);
OracleResult oracle_search(const RankTwoState& s1, const RankTwoState& s2,
                           const OracleConfig& cfg, Seed seed);

}  // namespace rank2lu
