#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rank2lu/canonical.hpp"
#include "rank2lu/invariants.hpp"

namespace rank2lu {

enum class Decision { Equivalent, NotEquivalent, Undecided };
enum class Method { Theorem, Canonical, Oracle, Slocc };

std::string_view to_string(Decision d);
std::string_view to_string(Method m);

/// Invertible local operators with rho2 proportional to the renormalized
/// (P (x) Q) rho1 (P (x) Q)^dag eigen-data.
struct SloccWitness {
  ComplexMatrix p;
  ComplexMatrix q;
  double residual = 0.0;
};

struct Verdict {
  Decision decision = Decision::Undecided;
  Method method = Method::Theorem;
  std::string diagnosis;
  std::optional<LUWitness> lu_witness;
  std::optional<SloccWitness> slocc_witness;
};

/// Residual ||rho2 - (u1 (x) u2) rho1 (u1 (x) u2)^dag||_F.
double verify_lu_witness(const RankTwoState& s1, const RankTwoState& s2, const LUWitness& w,
                         const ToleranceConfig& cfg = {});

/// Invariant route: fingerprints first, then a canonical witness.
Verdict decide_lu(const RankTwoState& s1, const RankTwoState& s2,
                  const ToleranceConfig& cfg = {});

/// Canonical route only: purity plus compare_canonical, then a witness.
Verdict decide_lu_canonical(const RankTwoState& s1, const RankTwoState& s2,
                            const ToleranceConfig& cfg = {});

/// Sufficient SLOCC criterion for m = n and invertible B. Never returns
/// NotEquivalent.
Verdict decide_slocc(const RankTwoState& s1, const RankTwoState& s2,
                     const ToleranceConfig& cfg = {});

/// Residual of the renormalized SLOCC image of s1 against s2.
double verify_slocc_witness(const RankTwoState& s1, const RankTwoState& s2,
                            const ComplexMatrix& p, const ComplexMatrix& q);

}  // namespace rank2lu
