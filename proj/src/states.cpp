#include "rank2lu/states.hpp"

#include <cmath>
#include <string>

namespace rank2lu {

namespace {

std::string shape_str(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

BipartiteShape BipartiteShape::make(int m, int n) {
  if (m < 1 || n < m || m * n < 2) {
    throw Error(ErrorCode::InvalidShape, "invalid bipartite shape (" + std::to_string(m) +
                                             ", " + std::to_string(n) +
                                             "): need 1 <= m <= n and m*n >= 2");
  }
  return BipartiteShape{m, n};
}

DensityMatrix DensityMatrix::make(BipartiteShape shape, ComplexMatrix rho,
                                  const ToleranceConfig& cfg) {
  shape = BipartiteShape::make(shape.m, shape.n);
  if (rho.rows() != shape.dim() || rho.cols() != shape.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "density matrix is " + shape_str(rho) +
                                              ", expected " + std::to_string(shape.dim()) +
                                              "x" + std::to_string(shape.dim()));
  }
  require_finite(rho, "density matrix");
  if ((rho - rho.adjoint()).norm() > cfg.tol_eq) {
    throw Error(ErrorCode::InvalidDensityMatrix, "density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > cfg.tol_eq) {
    throw Error(ErrorCode::InvalidDensityMatrix, "density matrix trace differs from 1");
  }
  const HermitianEig eig = hermitian_eig(rho, cfg);
  if (eig.eigenvalues.minCoeff() < -cfg.tol_eq) {
    throw Error(ErrorCode::InvalidDensityMatrix,
                "density matrix has a negative eigenvalue");
  }
  return DensityMatrix(shape, std::move(rho));
}

RankTwoState RankTwoState::make(BipartiteShape shape, double lambda, ComplexMatrix a,
                                ComplexMatrix b, const ToleranceConfig& cfg) {
  shape = BipartiteShape::make(shape.m, shape.n);
  if (a.rows() != shape.m || a.cols() != shape.n || b.rows() != shape.m ||
      b.cols() != shape.n) {
    throw Error(ErrorCode::ShapeMismatch, "coefficient matrices are " + shape_str(a) +
                                              " and " + shape_str(b) + ", expected " +
                                              std::to_string(shape.m) + "x" +
                                              std::to_string(shape.n));
  }
  require_finite(a, "A");
  require_finite(b, "B");
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::InvalidState,
                "lambda must lie in (0, 1), got " + std::to_string(lambda));
  }
  if (std::abs(a.squaredNorm() - 1.0) > cfg.tol_eq) {
    throw Error(ErrorCode::InvalidState, "Tr(A A^dag) differs from 1");
  }
  if (std::abs(b.squaredNorm() - 1.0) > cfg.tol_eq) {
    throw Error(ErrorCode::InvalidState, "Tr(B B^dag) differs from 1");
  }
  if (std::abs((a * b.adjoint()).trace()) > cfg.tol_eq) {
    throw Error(ErrorCode::InvalidState, "eigenvectors are not orthogonal: Tr(A B^dag) != 0");
  }
  if (lambda < 0.5) return RankTwoState(shape, 1.0 - lambda, std::move(b), std::move(a));
  return RankTwoState(shape, lambda, std::move(a), std::move(b));
}

ComplexMatrix vec_to_matrix(const ComplexVector& v, BipartiteShape shape) {
  if (v.size() != shape.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "vector of length " + std::to_string(v.size()) +
                                              " cannot be reshaped to " +
                                              std::to_string(shape.m) + "x" +
                                              std::to_string(shape.n));
  }
  ComplexMatrix out(shape.m, shape.n);
  for (int i = 0; i < shape.m; ++i) {
    for (int j = 0; j < shape.n; ++j) out(i, j) = v(i * shape.n + j);
  }
  return out;
}

ComplexVector matrix_to_vec(const ComplexMatrix& m) {
  ComplexVector out(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
  }
  return out;
}

RankTwoState decompose(const DensityMatrix& rho, const ToleranceConfig& cfg) {
  const HermitianEig eig = hermitian_eig(rho.rho(), cfg);
  const auto support = (eig.eigenvalues.array() > cfg.tol_eq).count();
  if (support != 2) {
    throw Error(ErrorCode::RankNotTwo,
                "rank not two: density matrix has " + std::to_string(support) +
                    " eigenvalues above tolerance");
  }
  const double l1 = eig.eigenvalues(0);
  const double l2 = eig.eigenvalues(1);
  if (std::abs(l1 - l2) < cfg.tol_degenerate) {
    throw Error(ErrorCode::DegenerateSpectrum,
                "degenerate spectrum: the two nonzero eigenvalues coincide");
  }
  // hermitian_eig already puts the largest-magnitude component real positive.
  ComplexVector v1 = eig.eigenvectors.col(0);
  ComplexVector v2 = eig.eigenvectors.col(1);
  return RankTwoState::make(rho.shape(), l1 / (l1 + l2), vec_to_matrix(v1, rho.shape()),
                            vec_to_matrix(v2, rho.shape()), cfg);
}

DensityMatrix assemble(const RankTwoState& state) {
  const ComplexVector v1 = matrix_to_vec(state.a());
  const ComplexVector v2 = matrix_to_vec(state.b());
  ComplexMatrix rho = state.lambda1() * v1 * v1.adjoint() + state.lambda2() * v2 * v2.adjoint();
  return DensityMatrix::make(state.shape(), std::move(rho));
}

ClassCheck check_class_condition(const ComplexMatrix& a, const ComplexMatrix& b,
                                 const ToleranceConfig& cfg) {
  require_same_shape(a, b, "check_class_condition");
  ClassCheck out;
  out.right_residual = (a.adjoint() * a - b.adjoint() * b).norm();
  out.left_residual = (a * a.adjoint() - b * b.adjoint()).norm();
  out.holds = out.right_residual <= cfg.tol_eq && out.left_residual <= cfg.tol_eq;
  return out;
}

ClassCheck check_class_condition(const RankTwoState& state, const ToleranceConfig& cfg) {
  return check_class_condition(state.a(), state.b(), cfg);
}

WMatrix build_w_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "build_w_matrix");
  const auto m = a.rows();
  const auto n = a.cols();
  WMatrix out{ComplexMatrix::Zero(m + n, m + n), static_cast<int>(m), static_cast<int>(n)};
  out.w.topRightCorner(m, n) = a;
  out.w.bottomLeftCorner(n, m) = b.adjoint();
  return out;
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u1,
                                  const ComplexMatrix& u2, const ToleranceConfig& cfg) {
  const auto& shape = rho.shape();
  if (u1.rows() != shape.m || u2.rows() != shape.n) {
    throw Error(ErrorCode::ShapeMismatch, "local unitaries do not match the bipartite shape");
  }
  if (!is_unitary(u1, cfg.tol_eq) || !is_unitary(u2, cfg.tol_eq)) {
    throw Error(ErrorCode::NotUnitary, "local operator is not unitary");
  }
  const ComplexMatrix k = kron(u1, u2);
  ComplexMatrix out = k * rho.rho() * k.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix::make(shape, std::move(out), cfg);
}

}  // namespace rank2lu
