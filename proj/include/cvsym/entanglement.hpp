#pragma once

// Logarithmic negativity of 1xN splits through the equivalent two-mode state.
//
// For an (N+1)-mode state of the OnePlusNState form, the partially transposed
// spectrum is {nu_- x (N-1), n~_-, n~_+}. Since nu_- >= 1 only n~_- can drop
// below 1, and n~_-/+ are exactly the partially transposed eigenvalues of a
// two-mode state with global purity mu_eq, seralian Delta_eq and local purities
// mu1_eq, mu2_eq.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cvsym/symmetric_states.hpp"

namespace cvsym {

struct TwoModeEquivalent {
  double mu_eq = 1.0;
  double delta_eq = 2.0;
  double mu1_eq = 1.0;
  double mu2_eq = 1.0;

  /// Seralian of the partially transposed equivalent state.
  double delta_tilde() const { return -delta_eq + 2.0 / (mu1_eq * mu1_eq) + 2.0 / (mu2_eq * mu2_eq); }
};

struct NegativityResult {
  double value = 0.0;  ///< nats
  double n_tilde_minus = 1.0;
  bool entangled = false;
};

struct HierarchyEntry {
  std::size_t k = 0;
  NegativityResult negativity;
};

inline TwoModeEquivalent equivalent_two_mode(const OnePlusNState& s) {
  const auto inv = one_plus_n_invariants(s);
  const double nu_minus = block_nu_minus(s.block);
  if (!(nu_minus > 0.0)) throw UnphysicalError("degenerate block eigenvalue is zero");
  const double scale = std::pow(nu_minus, static_cast<double>(s.block.n_modes - 1));
  TwoModeEquivalent eq;
  eq.mu_eq = scale * inv.mu_sigma;
  eq.mu2_eq = scale * inv.mu_betaN;
  eq.mu1_eq = inv.mu_alpha;
  eq.delta_eq = inv.delta_ag + 1.0 / (eq.mu2_eq * eq.mu2_eq);
  return eq;
}

/// E_N = max{0, -ln n~_-} with 2 n~_-^2 = D~ - sqrt(D~^2 - 4/mu_eq^2).
inline NegativityResult negativity_from_equivalent(const TwoModeEquivalent& eq) {
  if (!(eq.mu_eq > 0.0) || !(eq.mu1_eq > 0.0) || !(eq.mu2_eq > 0.0) || !std::isfinite(eq.delta_eq)) {
    throw InvalidInvariants("equivalent two-mode invariants must be finite with positive purities");
  }
  const auto pt = two_mode_nus(eq.mu_eq, eq.delta_tilde());
  if (pt.nu_plus < 1.0 - kPhysicalTol) {
    throw InvalidInvariants("largest transposed eigenvalue " + std::to_string(pt.nu_plus) +
                            " < 1: invariants do not describe a physical two-mode state");
  }
  NegativityResult r;
  r.n_tilde_minus = pt.nu_minus;
  r.entangled = pt.nu_minus < 1.0;
  r.value = r.entangled ? -std::log(pt.nu_minus) : 0.0;
  return r;
}

/// Negativity between the single mode alpha and the whole N-mode block.
inline NegativityResult one_plus_n_negativity(const OnePlusNState& s) {
  return negativity_from_equivalent(equivalent_two_mode(s));
}

/// 1xK negativity inside a fully symmetric N-mode block: the block is traced down
/// to K+1 modes and mode 0 plays alpha (= beta) coupled through gamma (= epsilon).
inline NegativityResult one_by_k_negativity(const SymmetricBlock& blk, std::size_t k) {
  if (k < 1 || k + 1 > blk.n_modes) {
    throw RangeError("k = " + std::to_string(k) + " outside [1, " + std::to_string(blk.n_modes) + " - 1]");
  }
  return one_plus_n_negativity(as_one_plus_n(blk.with_modes(k + 1)));
}

inline NegativityResult one_by_k_negativity(const SymmetricBlockParams& p, std::size_t k) {
  return one_by_k_negativity(SymmetricBlock::from_params(p), k);
}

/// Reads beta and epsilon back from a covariance matrix that must be fully symmetric.
inline SymmetricBlock symmetric_block_of(const CovarianceMatrix& cm, double tol = 1e-9) {
  SymmetricBlock blk;
  blk.n_modes = cm.n_modes();
  blk.beta = cm.block(0, 0);
  blk.epsilon = cm.n_modes() > 1 ? cm.block(0, 1) : Mat2::Zero();
  const double scale = std::max(1.0, cm.matrix().cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < cm.n_modes(); ++i) {
    for (std::size_t j = 0; j < cm.n_modes(); ++j) {
      const Mat2& expected = (i == j) ? blk.beta : blk.epsilon;
      if ((cm.block(i, j) - expected).cwiseAbs().maxCoeff() > tol * scale) {
        throw ShapeError("covariance matrix is not fully symmetric (block " + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
    }
  }
  return blk;
}

inline NegativityResult one_by_k_negativity(const CovarianceMatrix& fully_symmetric, std::size_t k) {
  return one_by_k_negativity(symmetric_block_of(fully_symmetric), k);
}

/// 1xK negativities for K = 1..k_max, ascending in K.
inline std::vector<HierarchyEntry> entanglement_hierarchy(const SymmetricBlock& blk, std::size_t k_max) {
  if (k_max + 1 > blk.n_modes) {
    throw RangeError("k_max = " + std::to_string(k_max) + " needs at least k_max + 1 modes");
  }
  std::vector<HierarchyEntry> out;
  out.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) out.push_back({k, one_by_k_negativity(blk, k)});
  return out;
}

inline std::vector<HierarchyEntry> entanglement_hierarchy(const SymmetricBlockParams& p, std::size_t k_max) {
  return entanglement_hierarchy(SymmetricBlock::from_params(p), k_max);
}

/// Von Neumann entropy of a single-mode state with symplectic eigenvalue b.
inline double entropy_of_entanglement(double b) {
  if (!(b >= 1.0)) throw RangeError("entropy_of_entanglement needs b >= 1, got " + std::to_string(b));
  const auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return xlogx(0.5 * (b + 1.0)) - xlogx(0.5 * (b - 1.0));
}

}  // namespace cvsym
