#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rank2lu/states.hpp"

namespace rank2lu {

/// Complete local-unitary invariant set of an in-class rank-two state.
struct Fingerprint {
  double purity = 0.0;                      // Tr rho^2 = lambda1^2 + lambda2^2
  std::vector<Complex> trace_powers;        // Tr((A B^dag)^k), k = 1..m
  std::size_t rank_a = 0;
  std::size_t rank_b = 0;
  std::vector<std::size_t> rank_ba_powers;  // r((B^dag A)^k), k = 1..m
};

struct FingerprintComparison {
  bool equal = false;
  // "(i)", "(ii)" or "(iii)" naming the first failing condition; empty on success.
  std::string diagnosis;
  std::optional<double> chi;
};

Fingerprint fingerprint(const RankTwoState& state, const ToleranceConfig& cfg = {});

/// Finds chi with |exp(i k chi) z'_k - z_k| <= tol_eq for every k = 1..len.
///
/// Eigenvector phases are not physical: A -> e^{i phi} A and B -> e^{i psi} B
/// sends z_k to e^{i k (phi - psi)} z_k. Candidates come from the first
/// index with |z_k| > tol_eq; chi is returned in [0, 2 pi).
std::optional<double> align_phase(const std::vector<Complex>& z,
                                  const std::vector<Complex>& z_prime,
                                  const ToleranceConfig& cfg = {});

FingerprintComparison compare_fingerprints(const Fingerprint& f1, const Fingerprint& f2,
                                           const ToleranceConfig& cfg = {});

}  // namespace rank2lu
