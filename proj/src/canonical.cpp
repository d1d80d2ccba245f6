#include "rank2lu/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace rank2lu {

namespace {

constexpr double kGammaUnitarityLimit = 1e-7;
constexpr double kReconstructionLimit = 1e-8;
constexpr std::size_t kMaxWitnessAttempts = 4096;
constexpr int kMaxPermutedBlock = 8;

double principal_arg(Complex z) {
  double a = std::arg(z);
  if (a <= -std::numbers::pi + 1e-12) a += 2.0 * std::numbers::pi;
  return a;
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

}  // namespace

std::vector<SingularBlock> singular_blocks(const RealVector& delta, const ToleranceConfig& cfg) {
  std::vector<SingularBlock> blocks;
  const int m = static_cast<int>(delta.size());
  const double top = m > 0 ? delta(0) : 0.0;
  const double zero_cut = cfg.tol_rank * top;
  const double gap_cut = cfg.tol_degenerate * top;
  for (int k = 0; k < m; ++k) {
    const bool zero = delta(k) <= zero_cut;
    const bool extend = !blocks.empty() &&
                        (zero ? blocks.back().zero
                              : (!blocks.back().zero && delta(k - 1) - delta(k) <= gap_cut));
    if (extend) {
      ++blocks.back().size;
    } else {
      blocks.push_back(SingularBlock{k, 1, 0.0, zero});
    }
  }
  for (auto& blk : blocks) {
    blk.value = blk.zero ? 0.0 : delta.segment(blk.start, blk.size).mean();
  }
  return blocks;
}

namespace {

// Greedy nearest-neighbour matching of `rotated` onto `target`, visiting the
// rotated eigenvalues in order of argument. Empty result on failure.
std::vector<int> greedy_match(const std::vector<Complex>& rotated,
                              const std::vector<Complex>& target, double tol) {
  const std::size_t k = rotated.size();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return principal_arg(rotated[static_cast<std::size_t>(x)]) <
           principal_arg(rotated[static_cast<std::size_t>(y)]);
  });
  std::vector<int> perm(k, -1);
  std::vector<bool> used(k, false);
  for (int idx : order) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double dist = std::abs(rotated[static_cast<std::size_t>(idx)] - target[j]);
      if (dist < best) {
        best = dist;
        best_j = static_cast<int>(j);
      }
    }
    if (best_j < 0 || best > tol) return {};
    used[static_cast<std::size_t>(best_j)] = true;
    perm[static_cast<std::size_t>(idx)] = best_j;
  }
  return perm;
}

std::vector<Complex> to_std(const ComplexVector& v) { return {v.data(), v.data() + v.size()}; }

ComplexMatrix block_of(const ComplexMatrix& gamma, const SingularBlock& blk) {
  return gamma.block(blk.start, blk.start, blk.size, blk.size);
}

// Every permutation that keeps each matched pair within `tol`, greedy one first.
std::vector<std::vector<int>> admissible_perms(const std::vector<Complex>& rotated,
                                               const std::vector<Complex>& target,
                                               const std::vector<int>& greedy, double tol) {
  std::vector<std::vector<int>> out{greedy};
  if (static_cast<int>(rotated.size()) > kMaxPermutedBlock) return out;
  std::vector<int> perm(rotated.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (perm == greedy) continue;
    bool ok = true;
    for (std::size_t k = 0; k < perm.size() && ok; ++k) {
      ok = std::abs(rotated[k] - target[static_cast<std::size_t>(perm[k])]) <= tol;
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

ComplexMatrix CanonicalForm::delta_hat(int n) const {
  ComplexMatrix out = ComplexMatrix::Zero(delta.size(), n);
  for (Eigen::Index k = 0; k < delta.size(); ++k) out(k, k) = delta(k);
  return out;
}

BlockSpectrum normal_spectrum(const ComplexMatrix& block) {
  Eigen::ComplexSchur<ComplexMatrix> schur(block);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "normal_spectrum: Schur iteration failed");
  }
  return BlockSpectrum{schur.matrixT().diagonal(), schur.matrixU()};
}

std::vector<std::vector<Complex>> gamma_spectra(const CanonicalForm& form) {
  std::vector<std::vector<Complex>> out;
  for (const auto& blk : form.blocks) {
    if (blk.zero) {
      out.emplace_back();
      continue;
    }
    auto values = to_std(normal_spectrum(block_of(form.gamma, blk)).eigenvalues);
    std::stable_sort(values.begin(), values.end(), [](Complex x, Complex y) {
      return principal_arg(x) < principal_arg(y);
    });
    out.push_back(std::move(values));
  }
  return out;
}

CanonicalForm canonicalize(const RankTwoState& state, const ToleranceConfig& cfg) {
  const ClassCheck check = check_class_condition(state, cfg);
  if (!check.holds) {
    throw Error(ErrorCode::ClassConditionViolated,
                "class condition violated: ||A^dag A - B^dag B|| = " +
                    std::to_string(check.right_residual) + ", ||A A^dag - B B^dag|| = " +
                    std::to_string(check.left_residual));
  }
  const int m = state.shape().m;
  const int n = state.shape().n;
  const Svd d = svd(state.a());

  CanonicalForm form;
  form.delta = d.sigma;
  form.u = d.u;
  form.v = d.v;
  form.blocks = singular_blocks(form.delta, cfg);
  form.gamma = ComplexMatrix::Identity(m, m);

  // u^dag B v = Gamma Delta_hat, so column j of a block is Gamma(:, j) * delta_j.
  const ComplexMatrix rotated_b = d.u.adjoint() * state.b() * d.v;
  for (const auto& blk : form.blocks) {
    if (blk.zero) continue;
    ComplexMatrix g = rotated_b.block(blk.start, blk.start, blk.size, blk.size);
    for (int j = 0; j < blk.size; ++j) g.col(j) /= form.delta(blk.start + j);
    form.gamma.block(blk.start, blk.start, blk.size, blk.size) = g;
  }

  if (unitarity_defect(form.gamma) > kGammaUnitarityLimit) {
    throw Error(ErrorCode::BlockExtractionFailure,
                "canonicalize: extracted Gamma is not unitary (defect " +
                    std::to_string(unitarity_defect(form.gamma)) + ")");
  }
  const ComplexMatrix dh = form.delta_hat(n);
  const double a_err = (state.a() - form.u * dh * form.v.adjoint()).norm();
  const double b_err = (state.b() - form.u * form.gamma * dh * form.v.adjoint()).norm();
  if (a_err > kReconstructionLimit || b_err > kReconstructionLimit) {
    throw Error(ErrorCode::BlockExtractionFailure,
                "canonicalize: block-diagonal Gamma does not reproduce (A, B)");
  }
  return form;
}

CanonicalComparison compare_canonical(const CanonicalForm& c1, const CanonicalForm& c2,
                                      const ToleranceConfig& cfg) {
  if (c1.delta.size() != c2.delta.size()) {
    throw Error(ErrorCode::ShapeMismatch, "compare_canonical: subsystem dimensions differ");
  }
  CanonicalComparison out;
  if ((c1.delta - c2.delta).cwiseAbs().maxCoeff() > cfg.tol_eq) {
    out.diagnosis = "singular values differ";
    return out;
  }
  if (c1.blocks.size() != c2.blocks.size()) {
    out.diagnosis = "block structure differs";
    return out;
  }
  for (std::size_t i = 0; i < c1.blocks.size(); ++i) {
    const auto& b1 = c1.blocks[i];
    const auto& b2 = c2.blocks[i];
    if (b1.start != b2.start || b1.size != b2.size || b1.zero != b2.zero) {
      out.diagnosis = "block structure differs";
      return out;
    }
  }

  std::vector<std::vector<Complex>> e1;
  std::vector<std::vector<Complex>> e2;
  std::size_t first = c1.blocks.size();
  for (std::size_t i = 0; i < c1.blocks.size(); ++i) {
    if (c1.blocks[i].zero) {
      e1.emplace_back();
      e2.emplace_back();
      continue;
    }
    if (first == c1.blocks.size()) first = i;
    e1.push_back(to_std(normal_spectrum(block_of(c1.gamma, c1.blocks[i])).eigenvalues));
    e2.push_back(to_std(normal_spectrum(block_of(c2.gamma, c2.blocks[i])).eigenvalues));
  }
  if (first == c1.blocks.size()) {
    out.equivalent = true;
    out.matching.perms.assign(c1.blocks.size(), {});
    return out;
  }

  for (const Complex& target : e2[first]) {
    const double chi = wrap_angle(std::arg(target / e1[first][0]));
    const Complex rot = std::polar(1.0, chi);
    BlockMatching matching{chi, {}};
    bool ok = true;
    for (std::size_t i = 0; i < c1.blocks.size() && ok; ++i) {
      if (c1.blocks[i].zero) {
        matching.perms.emplace_back();
        continue;
      }
      std::vector<Complex> rotated = e1[i];
      for (auto& z : rotated) z *= rot;
      auto perm = greedy_match(rotated, e2[i], cfg.tol_eq);
      ok = !perm.empty();
      matching.perms.push_back(std::move(perm));
    }
    if (ok) {
      out.equivalent = true;
      out.matching = std::move(matching);
      return out;
    }
  }
  out.diagnosis = "Gamma block spectra differ for every global phase";
  return out;
}

LUWitness build_witness(const RankTwoState& s1, const CanonicalForm& c1,
                        const RankTwoState& s2, const CanonicalForm& c2,
                        const BlockMatching& matching, const ToleranceConfig& cfg) {
  if (!(s1.shape() == s2.shape())) {
    throw Error(ErrorCode::ShapeMismatch, "build_witness: states have different shapes");
  }
  if (matching.perms.size() != c1.blocks.size()) {
    throw Error(ErrorCode::InvalidArgument, "build_witness: matching does not fit the blocks");
  }
  const int m = s1.shape().m;
  const int n = s1.shape().n;
  const Complex unrotate = std::polar(1.0, -matching.chi);

  struct BlockData {
    BlockSpectrum first;
    BlockSpectrum second;  // spectrum of e^{-i chi} Gamma'_i
    std::vector<std::vector<int>> perms;
  };
  std::vector<BlockData> data;
  for (std::size_t i = 0; i < c1.blocks.size(); ++i) {
    const auto& blk = c1.blocks[i];
    BlockData bd;
    if (!blk.zero) {
      bd.first = normal_spectrum(block_of(c1.gamma, blk));
      bd.second = normal_spectrum(block_of(c2.gamma, c2.blocks[i]));
      bd.second.eigenvalues *= unrotate;
      bd.perms = admissible_perms(to_std(bd.first.eigenvalues), to_std(bd.second.eigenvalues),
                                  matching.perms[i], std::max(1e3 * cfg.tol_eq, 1e-6));
    }
    data.push_back(std::move(bd));
  }

  const DensityMatrix rho1 = assemble(s1);
  const DensityMatrix rho2 = assemble(s2);
  LUWitness best{ComplexMatrix(), ComplexMatrix(), std::numeric_limits<double>::infinity()};

  // Mixed-radix walk over the per-block admissible permutations.
  std::vector<std::size_t> choice(data.size(), 0);
  for (std::size_t attempt = 0; attempt < kMaxWitnessAttempts; ++attempt) {
    ComplexMatrix w = ComplexMatrix::Identity(m, m);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& blk = c1.blocks[i];
      if (blk.zero) continue;
      const auto& perm = data[i].perms[choice[i]];
      ComplexMatrix y(blk.size, blk.size);
      for (int k = 0; k < blk.size; ++k) {
        y.col(k) = data[i].second.eigenvectors.col(perm[static_cast<std::size_t>(k)]);
      }
      w.block(blk.start, blk.start, blk.size, blk.size) =
          y * data[i].first.eigenvectors.adjoint();
    }
    ComplexMatrix w_hat = ComplexMatrix::Identity(n, n);
    w_hat.topLeftCorner(m, m) = w;

    LUWitness candidate;
    candidate.u1 = c2.u * w * c1.u.adjoint();
    candidate.u2 = (c1.v * w_hat.adjoint() * c2.v.adjoint()).transpose();
    candidate.residual =
        frobenius_distance(rho2.rho(), apply_local_unitary(rho1, candidate.u1, candidate.u2).rho());
    if (candidate.residual < best.residual) best = candidate;
    if (best.residual <= kWitnessThreshold) return best;

    std::size_t i = 0;
    for (; i < data.size(); ++i) {
      if (data[i].perms.empty()) continue;
      if (++choice[i] < data[i].perms.size()) break;
      choice[i] = 0;
    }
    if (i == data.size()) break;
  }
  throw Error(ErrorCode::WitnessVerificationFailure,
              "build_witness: best residual " + std::to_string(best.residual) +
                  " exceeds the verification threshold");
}

RankTwoState standard_form(const RankTwoState& state, const ToleranceConfig& cfg) {
  const CanonicalForm form = canonicalize(state, cfg);
  const ComplexMatrix dh = form.delta_hat(state.shape().n);
  return RankTwoState::make(state.shape(), state.lambda1(), dh, form.gamma * dh, cfg);
}

}  // namespace rank2lu
