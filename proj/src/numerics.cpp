#include "rank2lu/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rank2lu {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::RankNotTwo: return "RankNotTwo";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::ClassConditionViolated: return "ClassConditionViolated";
    case ErrorCode::BlockExtractionFailure: return "BlockExtractionFailure";
    case ErrorCode::WitnessVerificationFailure: return "WitnessVerificationFailure";
    case ErrorCode::SingularB: return "SingularB";
    case ErrorCode::OrthogonalityUnsatisfiable: return "OrthogonalityUnsatisfiable";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void ToleranceConfig::validate() const {
  for (double t : {tol_rank, tol_eq, tol_degenerate}) {
    if (!(t > 0.0 && t < 1.0)) {
      throw Error(ErrorCode::InvalidTolerance,
                  "tolerances must lie in (0, 1), got " + std::to_string(t));
    }
  }
}

ToleranceConfig ToleranceConfig::from_scale(double tol) {
  ToleranceConfig cfg{tol, tol, 10.0 * tol};
  cfg.validate();
  return cfg;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entries");
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": expected a square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + " differ");
  }
}

void normalize_phase(Eigen::Ref<ComplexVector> v) {
  if (v.size() == 0) return;
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) >= largest * (1.0 - 1e-9)) {
      pivot = k;
      break;
    }
  }
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

namespace {

// Stable descending order of `values`.
std::vector<Eigen::Index> descending_order(const RealVector& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
  return order;
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m, const ToleranceConfig& cfg) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > cfg.tol_eq * (1.0 + scale)) {
    throw Error(ErrorCode::NotHermitian, "hermitian_eig: matrix is not Hermitian");
  }
  // Symmetrize so that the solver only sees the Hermitian part.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "hermitian_eig: solver did not converge");
  }
  // Eigen returns ascending order; reverse first so ties keep a fixed order.
  const RealVector ascending = solver.eigenvalues();
  const Eigen::Index d = ascending.size();
  RealVector reversed = ascending.reverse();
  const auto order = descending_order(reversed);

  HermitianEig out{RealVector(d), ComplexMatrix(d, d)};
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index src = d - 1 - order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = ascending(src);
    out.eigenvectors.col(k) = solver.eigenvectors().col(src);
    normalize_phase(out.eigenvectors.col(k));
  }
  return out;
}

Svd svd(const ComplexMatrix& m) {
  require_finite(m, "svd");
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector raw = solver.singularValues();
  const auto order = descending_order(raw);

  Svd out{solver.matrixU(), RealVector(raw.size()), solver.matrixV()};
  for (Eigen::Index k = 0; k < raw.size(); ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.sigma(k) = raw(src);
    out.u.col(k) = solver.matrixU().col(src);
    out.v.col(k) = solver.matrixV().col(src);
  }
  return out;
}

Polar polar(const ComplexMatrix& x, const ToleranceConfig& cfg) {
  require_square(x, "polar");
  const Svd d = svd(x);
  if (d.sigma.size() == 0 || d.sigma(d.sigma.size() - 1) <= cfg.tol_rank * d.sigma(0)) {
    throw Error(ErrorCode::SingularInput, "polar: matrix is singular to tolerance");
  }
  // X = U S V^dag = (U V^dag)(V S V^dag)
  Polar out;
  out.unitary = d.u * d.v.adjoint();
  out.positive = d.v * d.sigma.cast<Complex>().asDiagonal() * d.v.adjoint();
  out.positive = 0.5 * (out.positive + out.positive.adjoint()).eval();
  return out;
}

std::size_t rank_tol(const ComplexMatrix& m, const ToleranceConfig& cfg) {
  if (m.size() == 0) return 0;
  const RealVector sigma = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  const double largest = sigma.maxCoeff();
  if (largest == 0.0) return 0;
  return static_cast<std::size_t>((sigma.array() > cfg.tol_rank * largest).count());
}

Complex trace_power(const ComplexMatrix& m, int alpha) {
  require_square(m, "trace_power");
  if (alpha < 1) {
    throw Error(ErrorCode::InvalidArgument, "trace_power: alpha must be >= 1");
  }
  ComplexMatrix power = m;
  for (int k = 1; k < alpha; ++k) power = (power * m).eval();
  return power.trace();
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return (a - b).norm();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "expi_hermitian: solver did not converge");
  }
  const ComplexVector phases =
      (solver.eigenvalues().cast<Complex>() * Complex(0.0, 1.0)).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) { return unitarity_defect(u) <= tol; }

}  // namespace rank2lu
