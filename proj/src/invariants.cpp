#include "rank2lu/invariants.hpp"

#include <cmath>
#include <numbers>

namespace rank2lu {

Fingerprint fingerprint(const RankTwoState& state, const ToleranceConfig& cfg) {
  const ClassCheck check = check_class_condition(state, cfg);
  if (!check.holds) {
    throw Error(ErrorCode::ClassConditionViolated,
                "class condition violated: ||A^dag A - B^dag B|| = " +
                    std::to_string(check.right_residual) + ", ||A A^dag - B B^dag|| = " +
                    std::to_string(check.left_residual));
  }
  const ComplexMatrix& a = state.a();
  const ComplexMatrix& b = state.b();
  const int m = state.shape().m;

  Fingerprint f;
  f.purity = state.lambda1() * state.lambda1() + state.lambda2() * state.lambda2();
  f.rank_a = rank_tol(a, cfg);
  f.rank_b = rank_tol(b, cfg);

  const ComplexMatrix ab = a * b.adjoint();
  const ComplexMatrix ba = b.adjoint() * a;
  ComplexMatrix ab_power = ab;
  ComplexMatrix ba_power = ba;
  for (int k = 1; k <= m; ++k) {
    if (k > 1) {
      ab_power = (ab_power * ab).eval();
      ba_power = (ba_power * ba).eval();
    }
    f.trace_powers.push_back(ab_power.trace());
    f.rank_ba_powers.push_back(rank_tol(ba_power, cfg));
  }
  return f;
}

std::optional<double> align_phase(const std::vector<Complex>& z,
                                  const std::vector<Complex>& z_prime,
                                  const ToleranceConfig& cfg) {
  if (z.size() != z_prime.size()) {
    throw Error(ErrorCode::ShapeMismatch, "align_phase: sequences differ in length");
  }
  const double tol = cfg.tol_eq;
  std::size_t pivot = z.size();
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (std::abs(z[k]) > tol) {
      pivot = k;
      break;
    }
  }
  if (pivot == z.size()) {
    for (const auto& w : z_prime) {
      if (std::abs(w) > tol) return std::nullopt;
    }
    return 0.0;
  }
  if (std::abs(z_prime[pivot]) == 0.0) return std::nullopt;

  const double two_pi = 2.0 * std::numbers::pi;
  const int power = static_cast<int>(pivot) + 1;
  const double base = std::arg(z[pivot] / z_prime[pivot]);
  for (int j = 0; j < power; ++j) {
    double chi = std::fmod((base + two_pi * j) / power, two_pi);
    if (chi < 0.0) chi += two_pi;
    bool ok = true;
    for (std::size_t k = 0; k < z.size() && ok; ++k) {
      const Complex rot = std::polar(1.0, static_cast<double>(k + 1) * chi);
      ok = std::abs(rot * z_prime[k] - z[k]) <= tol;
    }
    if (ok) return chi;
  }
  return std::nullopt;
}

FingerprintComparison compare_fingerprints(const Fingerprint& f1, const Fingerprint& f2,
                                           const ToleranceConfig& cfg) {
  if (f1.trace_powers.size() != f2.trace_powers.size()) {
    throw Error(ErrorCode::ShapeMismatch, "compare_fingerprints: subsystem dimensions differ");
  }
  FingerprintComparison out;
  if (std::abs(f1.purity - f2.purity) > cfg.tol_eq) {
    out.diagnosis = "(i)";
    return out;
  }
  out.chi = align_phase(f1.trace_powers, f2.trace_powers, cfg);
  if (!out.chi) {
    out.diagnosis = "(ii)";
    return out;
  }
  if (f1.rank_a != f2.rank_a || f1.rank_b != f2.rank_b ||
      f1.rank_ba_powers != f2.rank_ba_powers) {
    out.diagnosis = "(iii)";
    out.chi.reset();
    return out;
  }
  out.equal = true;
  return out;
}

}  // namespace rank2lu
