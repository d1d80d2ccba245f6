#pragma once

#include <string>
#include <vector>

#include "rank2lu/states.hpp"

namespace rank2lu {

/// A maximal run of equal singular values, [start, start + size).
struct SingularBlock {
  int start = 0;
  int size = 0;
  double value = 0.0;
  bool zero = false;
};

/// (Delta, Gamma Delta) together with the frame it was computed in:
///   A = u [diag(delta) | 0] v^dag,   B = u gamma [diag(delta) | 0] v^dag.
/// gamma is unitary, block diagonal over `blocks` and the identity on the
/// zero block.
struct CanonicalForm {
  RealVector delta;
  ComplexMatrix gamma;
  ComplexMatrix u;
  ComplexMatrix v;
  std::vector<SingularBlock> blocks;

  /// The m x n rectangular embedding [diag(delta) | 0].
  ComplexMatrix delta_hat(int n) const;
};

struct LUWitness {
  ComplexMatrix u1;
  ComplexMatrix u2;
  double residual = 0.0;
};

/// Per non-zero block, perms[i][k] is the index (in the spectral order of
/// c2's block i) of the eigenvalue matched to eigenvalue k of c1's block i.
/// Zero blocks carry an empty permutation.
struct BlockMatching {
  double chi = 0.0;
  std::vector<std::vector<int>> perms;
};

struct CanonicalComparison {
  bool equivalent = false;
  std::string diagnosis;
  BlockMatching matching;
};

/// Groups descending singular values into maximal runs whose consecutive gaps
/// are <= tol_degenerate * delta(0); values <= tol_rank * delta(0) form the
/// zero block.
std::vector<SingularBlock> singular_blocks(const RealVector& delta, const ToleranceConfig& cfg);

/// Unitary diagonalization of a (numerically) normal matrix via complex Schur.
struct BlockSpectrum {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;
};
BlockSpectrum normal_spectrum(const ComplexMatrix& block);

/// Eigenvalues of each block of gamma sorted by argument in (-pi, pi]; zero
/// blocks yield an empty list.
std::vector<std::vector<Complex>> gamma_spectra(const CanonicalForm& form);

CanonicalForm canonicalize(const RankTwoState& state, const ToleranceConfig& cfg = {});

CanonicalComparison compare_canonical(const CanonicalForm& c1, const CanonicalForm& c2,
                                      const ToleranceConfig& cfg = {});

/// Builds (u1, u2) with assemble(s2) = (u1 (x) u2) assemble(s1) (u1 (x) u2)^dag
/// from two matching canonical forms, retrying permutations inside
/// eigenvalue clusters until the density-matrix residual is <= 1e-8.
LUWitness build_witness(const RankTwoState& s1, const CanonicalForm& c1,
                        const RankTwoState& s2, const CanonicalForm& c2,
                        const BlockMatching& matching, const ToleranceConfig& cfg = {});

/// The state with coefficient matrices (Delta_hat, Gamma Delta_hat).
RankTwoState standard_form(const RankTwoState& state, const ToleranceConfig& cfg = {});

inline constexpr double kWitnessThreshold = 1e-8;

}  // namespace rank2lu
