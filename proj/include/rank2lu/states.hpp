#pragma once

#include "rank2lu/numerics.hpp"

namespace rank2lu {

/// Dimensions (m, n) of H1 (x) H2 with 1 <= m <= n and m * n >= 2.
struct BipartiteShape {
  int m = 0;
  int n = 0;

  static BipartiteShape make(int m, int n);
  int dim() const { return m * n; }
  friend bool operator==(const BipartiteShape&, const BipartiteShape&) = default;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positive semidefiniteness.
  static DensityMatrix make(BipartiteShape shape, ComplexMatrix rho,
                            const ToleranceConfig& cfg = {});

  const BipartiteShape& shape() const { return shape_; }
  const ComplexMatrix& rho() const { return rho_; }

 private:
  DensityMatrix(BipartiteShape shape, ComplexMatrix rho)
      : shape_(shape), rho_(std::move(rho)) {}

  BipartiteShape shape_;
  ComplexMatrix rho_;
};

/// rho = lambda1 |v1><v1| + lambda2 |v2><v2|, where v1 and v2 are the
/// row-major vectorizations of the m x n coefficient matrices A and B.
///
/// The larger weight is always stored first: make() swaps (lambda, A, B)
/// into (1 - lambda, B, A) when lambda < 1/2.
class RankTwoState {
 public:
  static RankTwoState make(BipartiteShape shape, double lambda, ComplexMatrix a,
                           ComplexMatrix b, const ToleranceConfig& cfg = {});

  const BipartiteShape& shape() const { return shape_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return 1.0 - lambda1_; }
  const ComplexMatrix& a() const { return a_; }
  const ComplexMatrix& b() const { return b_; }

  bool degenerate(const ToleranceConfig& cfg) const {
    return std::abs(lambda1() - lambda2()) < cfg.tol_degenerate;
  }

 private:
  RankTwoState(BipartiteShape shape, double lambda1, ComplexMatrix a, ComplexMatrix b)
      : shape_(shape), lambda1_(lambda1), a_(std::move(a)), b_(std::move(b)) {}

  BipartiteShape shape_;
  double lambda1_;
  ComplexMatrix a_;
  ComplexMatrix b_;
};

/// Block matrix [[0, A], [B^dag, 0]] of size (m + n).
struct WMatrix {
  ComplexMatrix w;
  int m = 0;
  int n = 0;

  bool is_normal(double tol) const { return normality_defect() <= tol; }
  double normality_defect() const { return (w.adjoint() * w - w * w.adjoint()).norm(); }
};

struct ClassCheck {
  bool holds = false;
  double right_residual = 0.0;  // ||A^dag A - B^dag B||_F
  double left_residual = 0.0;   // ||A A^dag - B B^dag||_F
};

ComplexMatrix vec_to_matrix(const ComplexVector& v, BipartiteShape shape);
ComplexVector matrix_to_vec(const ComplexMatrix& m);

/// Spectral decomposition of a rank-two density matrix into (lambda, A, B).
/// Each coefficient matrix is gauge-fixed: its largest-magnitude entry is
/// real positive.
RankTwoState decompose(const DensityMatrix& rho, const ToleranceConfig& cfg = {});
DensityMatrix assemble(const RankTwoState& state);

ClassCheck check_class_condition(const RankTwoState& state, const ToleranceConfig& cfg = {});
ClassCheck check_class_condition(const ComplexMatrix& a, const ComplexMatrix& b,
                                 const ToleranceConfig& cfg = {});

WMatrix build_w_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

/// (U1 (x) U2) rho (U1 (x) U2)^dag.  On coefficient matrices this is A -> U1 A U2^T.
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u1,
                                  const ComplexMatrix& u2, const ToleranceConfig& cfg = {});

}  // namespace rank2lu
