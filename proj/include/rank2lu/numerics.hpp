#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rank2lu/error.hpp"

namespace rank2lu {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every decision in the library.
///
/// `tol_rank` is relative to the largest singular value, `tol_eq` is an
/// absolute threshold on scalar and matrix comparisons and `tol_degenerate`
/// is the (relative) gap below which eigenvalues or singular values are
/// treated as equal.
struct ToleranceConfig {
  double tol_rank = 1e-8;
  double tol_eq = 1e-8;
  double tol_degenerate = 1e-7;

  /// Throws InvalidTolerance unless every threshold lies in (0, 1).
  void validate() const;

  /// All thresholds derived from one scale: tol_rank = tol_eq = tol,
  /// tol_degenerate = 10 * tol (the default ratio).
  static ToleranceConfig from_scale(double tol);
};

struct HermitianEig {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // orthonormal columns, phase-normalized
};

struct Svd {
  ComplexMatrix u;  // m x m
  RealVector sigma; // descending, length min(m, n)
  ComplexMatrix v;  // n x n
};

struct Polar {
  ComplexMatrix unitary;
  ComplexMatrix positive;
};

void require_finite(const ComplexMatrix& m, const char* what);
void require_square(const ComplexMatrix& m, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

HermitianEig hermitian_eig(const ComplexMatrix& m, const ToleranceConfig& cfg = {});
Svd svd(const ComplexMatrix& m);
Polar polar(const ComplexMatrix& x, const ToleranceConfig& cfg = {});

std::size_t rank_tol(const ComplexMatrix& m, const ToleranceConfig& cfg = {});
Complex trace_power(const ComplexMatrix& m, int alpha);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// exp(i H) for Hermitian H, through its eigendecomposition.
ComplexMatrix expi_hermitian(const ComplexMatrix& h);

double unitarity_defect(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tol);

// Multiplies v by a phase so that its largest-magnitude component is real
// positive. Near-ties (within a relative 1e-9) go to the lowest index.
void normalize_phase(Eigen::Ref<ComplexVector> v);

}  // namespace rank2lu
