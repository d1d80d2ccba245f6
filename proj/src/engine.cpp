#include "rank2lu/engine.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rank2lu {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Equivalent: return "Equivalent";
    case Decision::NotEquivalent: return "NotEquivalent";
    case Decision::Undecided: return "Undecided";
  }
  return "Undecided";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Theorem: return "theorem";
    case Method::Canonical: return "canonical";
    case Method::Oracle: return "oracle";
    case Method::Slocc: return "slocc";
  }
  return "theorem";
}

namespace {

constexpr char kDegenerateDiagnosis[] = "degenerate spectrum; try --method oracle";

void require_same_shape(const RankTwoState& s1, const RankTwoState& s2) {
  if (!(s1.shape() == s2.shape())) {
    throw Error(ErrorCode::ShapeMismatch, "states have different bipartite shapes");
  }
}

void require_class(const RankTwoState& s, int index, const ToleranceConfig& cfg) {
  const ClassCheck check = check_class_condition(s, cfg);
  if (check.holds) return;
  std::ostringstream msg;
  msg << "class condition violated by state " << index << ": ";
  if (check.right_residual > cfg.tol_eq) {
    msg << "A^dag A != B^dag B (residual " << check.right_residual << ")";
  } else {
    msg << "A A^dag != B B^dag (residual " << check.left_residual << ")";
  }
  throw Error(ErrorCode::ClassConditionViolated, msg.str());
}

std::string describe_fingerprint_failure(const FingerprintComparison& cmp, const Fingerprint& f1,
                                         const Fingerprint& f2) {
  std::ostringstream msg;
  msg.precision(12);
  if (cmp.diagnosis == "(i)") {
    msg << "(i) purities differ: " << f1.purity << " vs " << f2.purity;
  } else if (cmp.diagnosis == "(ii)") {
    msg << "(ii) trace powers of A B^dag differ for every eigenvector phase";
  } else {
    msg << "(iii) rank profiles differ";
  }
  return msg.str();
}

// Canonical comparison followed by witness construction.
Verdict canonical_stage(const RankTwoState& s1, const RankTwoState& s2, Method method,
                        const ToleranceConfig& cfg, const std::string& prefix) {
  Verdict v;
  v.method = method;
  const CanonicalForm c1 = canonicalize(s1, cfg);
  const CanonicalForm c2 = canonicalize(s2, cfg);
  const CanonicalComparison cmp = compare_canonical(c1, c2, cfg);
  if (!cmp.equivalent) {
    if (method == Method::Theorem) {
      v.decision = Decision::Undecided;
      v.diagnosis = prefix + "fingerprints agree but canonical forms differ: " + cmp.diagnosis;
    } else {
      v.decision = Decision::NotEquivalent;
      v.diagnosis = "canonical forms differ: " + cmp.diagnosis;
    }
    return v;
  }
  try {
    v.lu_witness = build_witness(s1, c1, s2, c2, cmp.matching, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::WitnessVerificationFailure) throw;
    v.decision = Decision::Undecided;
    v.diagnosis = prefix + "witness construction failed: " + e.what();
    return v;
  }
  v.decision = Decision::Equivalent;
  v.diagnosis = prefix + "canonical witness verified";
  return v;
}

}  // namespace

double verify_lu_witness(const RankTwoState& s1, const RankTwoState& s2, const LUWitness& w,
                         const ToleranceConfig& cfg) {
  require_same_shape(s1, s2);
  if (w.u1.rows() != s1.shape().m || w.u2.rows() != s1.shape().n) {
    throw Error(ErrorCode::ShapeMismatch, "witness does not match the bipartite shape");
  }
  return frobenius_distance(assemble(s2).rho(),
                            apply_local_unitary(assemble(s1), w.u1, w.u2, cfg).rho());
}

Verdict decide_lu(const RankTwoState& s1, const RankTwoState& s2, const ToleranceConfig& cfg) {
  require_same_shape(s1, s2);
  require_class(s1, 1, cfg);
  require_class(s2, 2, cfg);

  const Fingerprint f1 = fingerprint(s1, cfg);
  const Fingerprint f2 = fingerprint(s2, cfg);
  Verdict v;
  v.method = Method::Theorem;
  if (std::abs(f1.purity - f2.purity) > cfg.tol_eq) {
    v.decision = Decision::NotEquivalent;
    v.diagnosis = describe_fingerprint_failure({false, "(i)", {}}, f1, f2);
    return v;
  }
  // Equal purities with lambda1 = lambda2 leave the eigenbasis undetermined.
  if (s1.degenerate(cfg) || s2.degenerate(cfg)) {
    v.diagnosis = kDegenerateDiagnosis;
    return v;
  }
  const FingerprintComparison cmp = compare_fingerprints(f1, f2, cfg);
  if (!cmp.equal) {
    v.decision = Decision::NotEquivalent;
    v.diagnosis = describe_fingerprint_failure(cmp, f1, f2);
    return v;
  }
  return canonical_stage(s1, s2, Method::Theorem, cfg, "conditions (i)-(iii) hold; ");
}

Verdict decide_lu_canonical(const RankTwoState& s1, const RankTwoState& s2,
                            const ToleranceConfig& cfg) {
  require_same_shape(s1, s2);
  require_class(s1, 1, cfg);
  require_class(s2, 2, cfg);
  Verdict v;
  v.method = Method::Canonical;
  if (std::abs(s1.lambda1() - s2.lambda1()) > cfg.tol_eq) {
    v.decision = Decision::NotEquivalent;
    v.diagnosis = "(i) eigenvalues differ";
    return v;
  }
  if (s1.degenerate(cfg) || s2.degenerate(cfg)) {
    v.diagnosis = kDegenerateDiagnosis;
    return v;
  }
  return canonical_stage(s1, s2, Method::Canonical, cfg, "");
}

double verify_slocc_witness(const RankTwoState& s1, const RankTwoState& s2,
                            const ComplexMatrix& p, const ComplexMatrix& q) {
  require_same_shape(s1, s2);
  const ComplexMatrix a = p * s1.a() * q.transpose();
  const ComplexMatrix b = p * s1.b() * q.transpose();
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::infinity();
  const ComplexVector va = matrix_to_vec(a) / na;
  const ComplexVector vb = matrix_to_vec(b) / nb;
  const ComplexMatrix rho = s1.lambda1() * va * va.adjoint() + s1.lambda2() * vb * vb.adjoint();
  return frobenius_distance(assemble(s2).rho(), rho);
}

Verdict decide_slocc(const RankTwoState& s1, const RankTwoState& s2, const ToleranceConfig& cfg) {
  require_same_shape(s1, s2);
  const int m = s1.shape().m;
  if (m != s1.shape().n) {
    throw Error(ErrorCode::ShapeMismatch, "SLOCC criterion requires m = n");
  }
  for (const auto* s : {&s1, &s2}) {
    if (rank_tol(s->b(), cfg) < static_cast<std::size_t>(m)) {
      throw Error(ErrorCode::SingularB, "B singular");
    }
  }

  Verdict v;
  v.method = Method::Slocc;
  const ComplexMatrix b1_inv = s1.b().inverse();
  const ComplexMatrix b2_inv = s2.b().inverse();
  const ComplexMatrix k1 = s1.a() * b1_inv;
  const ComplexMatrix k2 = s2.a() * b2_inv;

  const double purity1 = s1.lambda1() * s1.lambda1() + s1.lambda2() * s1.lambda2();
  const double purity2 = s2.lambda1() * s2.lambda1() + s2.lambda2() * s2.lambda2();
  if (std::abs(purity1 - purity2) > cfg.tol_eq) {
    v.diagnosis = "(i) purities differ; the SLOCC criterion is sufficient only";
    return v;
  }
  std::vector<Complex> z1;
  std::vector<Complex> z2;
  for (int k = 1; k <= m; ++k) {
    z1.push_back(trace_power(k1, k));
    z2.push_back(trace_power(k2, k));
  }
  const auto chi = align_phase(z1, z2, cfg);
  if (!chi) {
    v.diagnosis = "(ii) trace powers of A B^-1 differ; the SLOCC criterion is sufficient only";
    return v;
  }
  bool ranks_ok = rank_tol(s1.a(), cfg) == rank_tol(s2.a(), cfg);
  const ComplexMatrix r1 = b1_inv * s1.a();
  const ComplexMatrix r2 = b2_inv * s2.a();
  ComplexMatrix p1 = r1;
  ComplexMatrix p2 = r2;
  for (int k = 1; k <= m && ranks_ok; ++k) {
    if (k > 1) {
      p1 = (p1 * r1).eval();
      p2 = (p2 * r2).eval();
    }
    ranks_ok = rank_tol(p1, cfg) == rank_tol(p2, cfg);
  }
  if (!ranks_ok) {
    v.diagnosis = "(iii) rank profiles differ; the SLOCC criterion is sufficient only";
    return v;
  }

  // Similarity S^-1 K1 S = e^{i chi} K2 through eigenbases of both sides.
  const ComplexMatrix k2_rot = std::polar(1.0, *chi) * k2;
  Eigen::ComplexEigenSolver<ComplexMatrix> eig1(k1);
  Eigen::ComplexEigenSolver<ComplexMatrix> eig2(k2_rot);
  if (eig1.info() != Eigen::Success || eig2.info() != Eigen::Success) {
    v.diagnosis = "conditions hold but the eigen solver failed";
    return v;
  }
  const ComplexMatrix x1 = eig1.eigenvectors();
  const ComplexMatrix x2 = eig2.eigenvectors();
  if (rank_tol(x1, cfg) < static_cast<std::size_t>(m) ||
      rank_tol(x2, cfg) < static_cast<std::size_t>(m)) {
    v.diagnosis = "conditions hold but A B^-1 is not diagonalizable; no constructive witness";
    return v;
  }
  const ComplexVector d1 = eig1.eigenvalues();
  const ComplexVector d2 = eig2.eigenvalues();
  const double match_tol = 1e-6 * (1.0 + d1.cwiseAbs().maxCoeff());
  ComplexMatrix x2_matched(m, m);
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (int k = 0; k < m; ++k) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double dist = std::abs(d1(k) - d2(j));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < 0 || best_dist > match_tol) {
      v.diagnosis = "conditions hold but the spectra of A B^-1 could not be matched";
      return v;
    }
    used[static_cast<std::size_t>(best)] = true;
    x2_matched.col(k) = x2.col(best);
  }
  const ComplexMatrix s = x1 * x2_matched.inverse();
  const ComplexMatrix t = b1_inv * s * s2.b();
  SloccWitness w{s.inverse(), t.transpose(), 0.0};
  if (rank_tol(w.p, cfg) < static_cast<std::size_t>(m) ||
      rank_tol(w.q, cfg) < static_cast<std::size_t>(m)) {
    v.diagnosis = "conditions hold but the constructed local operators are singular";
    return v;
  }
  w.residual = verify_slocc_witness(s1, s2, w.p, w.q);
  if (!(w.residual <= kWitnessThreshold)) {
    std::ostringstream msg;
    msg << "conditions hold but the constructive witness failed (residual " << w.residual << ")";
    v.diagnosis = msg.str();
    return v;
  }
  v.decision = Decision::Equivalent;
  v.diagnosis = "conditions (i)-(iii) hold; SLOCC witness verified";
  v.slocc_witness = std::move(w);
  return v;
}

}  // namespace rank2lu
