#pragma once

// Fully symmetric N-mode states (beta on the diagonal blocks, epsilon everywhere
// else) and (N+1)-mode states in which one extra mode alpha couples to every
// mode of a fully symmetric block through the same 2x2 matrix gamma.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "cvsym/covariance.hpp"

namespace cvsym {

/// Standard-form parameters: beta = diag(b, b), epsilon = diag(e1, e2).
struct SymmetricBlockParams {
  double b = 1.0;
  double e1 = 0.0;
  double e2 = 0.0;
  std::size_t n_modes = 1;
};

/// Fully symmetric block with general symmetric 2x2 beta and epsilon.
struct SymmetricBlock {
  Mat2 beta = Mat2::Identity();
  Mat2 epsilon = Mat2::Zero();
  std::size_t n_modes = 1;

  static SymmetricBlock from_params(const SymmetricBlockParams& p) {
    SymmetricBlock blk;
    blk.beta << p.b, 0.0, 0.0, p.b;
    blk.epsilon << p.e1, 0.0, 0.0, p.e2;
    blk.n_modes = p.n_modes;
    return blk;
  }

  /// Same beta and epsilon on a different number of modes (tracing or extending).
  SymmetricBlock with_modes(std::size_t n) const { return {beta, epsilon, n}; }

  /// beta - epsilon: its determinant is the square of the degenerate eigenvalue.
  Mat2 difference() const { return beta - epsilon; }
  /// beta + (N-1) epsilon: the collective (fully symmetric) mode.
  Mat2 collective() const { return beta + static_cast<double>(n_modes - 1) * epsilon; }
};

struct OnePlusNState {
  Mat2 alpha = Mat2::Identity();
  Mat2 gamma = Mat2::Zero();
  SymmetricBlock block;

  std::size_t block_modes() const noexcept { return block.n_modes; }
};

struct OnePlusNInvariants {
  double delta_ag = 0.0;        ///< det alpha + 2N det gamma
  double delta_bN = 0.0;        ///< N (det beta + (N-1) det epsilon)
  double delta_ag_tilde = 0.0;  ///< det alpha - 2N det gamma
  double mu_alpha = 1.0;
  double mu_betaN = 1.0;
  double mu_sigma = 1.0;
};

namespace detail {

inline void check_block_shape(const SymmetricBlock& blk) {
  if (blk.n_modes == 0) throw RangeError("symmetric block needs at least one mode");
  if ((blk.beta - blk.beta.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol ||
      (blk.epsilon - blk.epsilon.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw ShapeError("beta and epsilon must be symmetric 2x2 matrices");
  }
}

inline Mat2 symmetrized(const Mat2& m) { return 0.5 * (m + m.transpose()); }

}  // namespace detail

/// nu_-^2 = det(beta - epsilon), nu_+^(N)^2 = det(beta + (N-1) epsilon).
/// For standard-form parameters these are (b-e1)(b-e2) and (b+(N-1)e1)(b+(N-1)e2).
struct FullySymmetricPair {
  double nu_minus = 1.0;
  double nu_plus_n = 1.0;
};

inline FullySymmetricPair fs_symplectic_pair(const SymmetricBlock& blk) {
  detail::check_block_shape(blk);
  const double minus_sq = blk.difference().determinant();
  const double plus_sq = blk.collective().determinant();
  if (blk.n_modes > 1 && minus_sq < 0.0) {
    throw UnphysicalError("negative radicand for the degenerate eigenvalue: " + std::to_string(minus_sq));
  }
  if (plus_sq < 0.0) {
    throw UnphysicalError("negative radicand for the collective eigenvalue: " + std::to_string(plus_sq));
  }
  return {blk.n_modes > 1 ? std::sqrt(minus_sq) : std::sqrt(plus_sq), std::sqrt(plus_sq)};
}

/// Closed-form spectrum {nu_- x (N-1), nu_+^(N)}, ascending.
inline SymplecticSpectrum fs_spectrum(const SymmetricBlock& blk) {
  const auto pair = fs_symplectic_pair(blk);
  SymplecticSpectrum s;
  s.values.assign(blk.n_modes - 1, pair.nu_minus);
  s.values.push_back(pair.nu_plus_n);
  std::sort(s.values.begin(), s.values.end());
  return s;
}

inline SymplecticSpectrum fs_spectrum(const SymmetricBlockParams& p) { return fs_spectrum(SymmetricBlock::from_params(p)); }

/// Physicality of a fully symmetric block from its two 2x2 "normal-mode" matrices.
inline PhysicalityReport fs_physicality(const SymmetricBlock& blk) {
  detail::check_block_shape(blk);
  PhysicalityReport r;
  const Mat2 collective = blk.collective();
  const Mat2 difference = blk.difference();
  const bool pd = collective.determinant() > 0.0 && collective.trace() > 0.0 &&
                  (blk.n_modes == 1 || (difference.determinant() > 0.0 && difference.trace() > 0.0));
  r.positive_definite = pd;
  if (!pd) return r;
  const auto pair = fs_symplectic_pair(blk);
  r.min_nu = std::min(pair.nu_minus, pair.nu_plus_n);
  r.is_physical = r.min_nu >= 1.0 - kPhysicalTol;
  return r;
}

inline CovarianceMatrix build_fully_symmetric(const SymmetricBlock& blk) {
  const auto report = fs_physicality(blk);
  if (!report.is_physical) {
    throw UnphysicalError("fully symmetric parameters violate the uncertainty relation (min nu " +
                          std::to_string(report.min_nu) + ")",
                          report.min_nu);
  }
  const Mat2 beta = detail::symmetrized(blk.beta);
  const Mat2 eps = detail::symmetrized(blk.epsilon);
  const auto n = static_cast<Eigen::Index>(blk.n_modes);
  Matrix m(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m.block<2, 2>(2 * i, 2 * j) = (i == j) ? beta : eps;
  }
  return CovarianceMatrix::from_matrix(m);
}

inline CovarianceMatrix build_fully_symmetric(const SymmetricBlockParams& p) {
  return build_fully_symmetric(SymmetricBlock::from_params(p));
}

/// Collective eigenvalue of an N-mode block from the single-mode purity and the
/// two-mode spectrum {nu_-, nu_+}:
///   nu_+^(N)^2 = -N(N-2)/mu_beta^2 + (N-1)/2 (N nu_+^2 + (N-2) nu_-^2).
inline double nu_plus_of_N(double mu_beta, double nu_plus, double nu_minus, std::size_t n_modes) {
  if (n_modes == 0) throw RangeError("nu_plus_of_N needs n_modes >= 1");
  if (!(mu_beta > 0.0)) throw InvalidInvariants("mu_beta must be positive");
  const double n = static_cast<double>(n_modes);
  const double sq = -n * (n - 2.0) / (mu_beta * mu_beta) +
                    0.5 * (n - 1.0) * (n * nu_plus * nu_plus + (n - 2.0) * nu_minus * nu_minus);
  if (sq < 0.0) throw InvalidInvariants("inconsistent inputs: nu_+^(N)^2 = " + std::to_string(sq));
  return std::sqrt(sq);
}

struct TwoModePair {
  double nu_minus = 1.0;
  double nu_plus = 1.0;
};

/// Symplectic eigenvalues of a two-mode state from its purity and seralian:
///   2 nu_-/+^2 = Delta -/+ sqrt(Delta^2 - 4/mu^2).
/// The smaller one is taken from the product nu_-^2 nu_+^2 = 1/mu^2 to avoid cancellation.
inline TwoModePair two_mode_nus(double mu, double delta) {
  if (!(mu > 0.0) || !std::isfinite(mu) || !std::isfinite(delta)) {
    throw InvalidInvariants("two_mode_nus needs finite mu > 0 and finite Delta");
  }
  const double det = 1.0 / (mu * mu);
  double disc = delta * delta - 4.0 * det;
  if (disc < 0.0) {
    // Rounding at exact degeneracy, where nu_- = nu_+.
    if (disc < -1e-12 * delta * delta) {
      throw InvalidInvariants("negative discriminant: Delta^2 - 4/mu^2 = " + std::to_string(disc));
    }
    disc = 0.0;
  }
  if (delta <= 0.0) throw InvalidInvariants("two_mode_nus needs Delta > 0");
  const double plus_sq = 0.5 * (delta + std::sqrt(disc));
  return {std::sqrt(det / plus_sq), std::sqrt(plus_sq)};
}

/// mu_{beta^N} = (nu_-^(N-1) nu_+^(N))^-1.
inline double global_purity_fs(const SymmetricBlock& blk) {
  const auto pair = fs_symplectic_pair(blk);
  if (!(pair.nu_minus > 0.0) || !(pair.nu_plus_n > 0.0)) throw UnphysicalError("zero symplectic eigenvalue");
  return 1.0 / (std::pow(pair.nu_minus, static_cast<double>(blk.n_modes - 1)) * pair.nu_plus_n);
}

inline double global_purity_fs(const SymmetricBlockParams& p) { return global_purity_fs(SymmetricBlock::from_params(p)); }

/// Assembles the (N+1)-mode covariance matrix without a physicality check.
inline CovarianceMatrix assemble_one_plus_n(const OnePlusNState& s) {
  detail::check_block_shape(s.block);
  const auto n = static_cast<Eigen::Index>(s.block.n_modes);
  const Mat2 beta = detail::symmetrized(s.block.beta);
  const Mat2 eps = detail::symmetrized(s.block.epsilon);
  Matrix m(2 * n + 2, 2 * n + 2);
  m.block<2, 2>(0, 0) = detail::symmetrized(s.alpha);
  for (Eigen::Index j = 1; j <= n; ++j) {
    m.block<2, 2>(0, 2 * j) = s.gamma;
    m.block<2, 2>(2 * j, 0) = s.gamma.transpose();
    for (Eigen::Index k = 1; k <= n; ++k) m.block<2, 2>(2 * j, 2 * k) = (j == k) ? beta : eps;
  }
  return CovarianceMatrix::from_matrix(m);
}

inline CovarianceMatrix build_one_plus_n(const OnePlusNState& s) {
  auto cm = assemble_one_plus_n(s);
  const auto report = validate(cm);
  if (!report.is_physical) {
    throw UnphysicalError("1xN state violates the uncertainty relation (min nu " + std::to_string(report.min_nu) +
                              ")",
                          report.min_nu);
  }
  return cm;
}

/// A fully symmetric (N+1)-mode block seen as mode 0 coupled to the remaining N modes.
inline OnePlusNState as_one_plus_n(const SymmetricBlock& blk) {
  if (blk.n_modes < 2) throw RangeError("splitting a fully symmetric block needs at least two modes");
  return {blk.beta, blk.epsilon, blk.with_modes(blk.n_modes - 1)};
}

/// Det sigma of the (N+1)-mode state from 2x2 data only:
/// det(beta - eps)^(N-1) * det [[alpha, sqrt(N) gamma], [sqrt(N) gamma^T, beta + (N-1) eps]].
inline double one_plus_n_determinant(const OnePlusNState& s) {
  const double n = static_cast<double>(s.block.n_modes);
  Eigen::Matrix4d reduced;
  reduced.block<2, 2>(0, 0) = s.alpha;
  reduced.block<2, 2>(0, 2) = std::sqrt(n) * s.gamma;
  reduced.block<2, 2>(2, 0) = std::sqrt(n) * s.gamma.transpose();
  reduced.block<2, 2>(2, 2) = s.block.collective();
  return std::pow(s.block.difference().determinant(), n - 1.0) * reduced.determinant();
}

inline OnePlusNInvariants one_plus_n_invariants(const OnePlusNState& s) {
  detail::check_block_shape(s.block);
  const double n = static_cast<double>(s.block.n_modes);
  const double det_alpha = s.alpha.determinant();
  const double det_gamma = s.gamma.determinant();
  if (!(det_alpha > 0.0)) throw UnphysicalError("det alpha must be positive");

  OnePlusNInvariants inv;
  inv.delta_ag = det_alpha + 2.0 * n * det_gamma;
  inv.delta_ag_tilde = det_alpha - 2.0 * n * det_gamma;
  inv.delta_bN = n * (s.block.beta.determinant() + (n - 1.0) * s.block.epsilon.determinant());
  inv.mu_alpha = 1.0 / std::sqrt(det_alpha);
  inv.mu_betaN = global_purity_fs(s.block);
  const double det_sigma = one_plus_n_determinant(s);
  if (!(det_sigma > 0.0)) throw UnphysicalError("Det sigma must be positive");
  inv.mu_sigma = 1.0 / std::sqrt(det_sigma);
  return inv;
}

/// Smallest eigenvalue of the two-mode block sigma_{beta^2}: nu_-^2 = det(beta - epsilon),
/// valid for any symmetric beta and epsilon. Equal to 1 by convention for a single-mode block.
inline double block_nu_minus(const SymmetricBlock& blk) {
  if (blk.n_modes < 2) return 1.0;
  const double sq = blk.difference().determinant();
  if (!(sq > 0.0)) throw UnphysicalError("two-mode block has a non-positive degenerate eigenvalue");
  return std::sqrt(sq);
}

/// The two eigenvalues n_-/+ that are not the (N-1)-fold degenerate block eigenvalue.
/// `delta_ag` selects sigma (Delta_{alpha gamma}) or its partial transpose (the tilde value).
inline TwoModePair one_plus_n_pair(const OnePlusNInvariants& inv, double nu_minus, std::size_t block_modes,
                                   double delta_ag) {
  const double scale = std::pow(nu_minus, static_cast<double>(block_modes - 1));
  const double block_term = 1.0 / (scale * inv.mu_betaN);
  return two_mode_nus(scale * inv.mu_sigma, delta_ag + block_term * block_term);
}

/// Closed-form spectrum {nu_- x (N-1), n_-, n_+}, ascending.
inline SymplecticSpectrum one_plus_n_spectrum(const OnePlusNState& s) {
  const auto inv = one_plus_n_invariants(s);
  const double nu_minus = block_nu_minus(s.block);
  const auto pair = one_plus_n_pair(inv, nu_minus, s.block.n_modes, inv.delta_ag);
  SymplecticSpectrum spectrum;
  spectrum.values.assign(s.block.n_modes - 1, nu_minus);
  spectrum.values.push_back(pair.nu_minus);
  spectrum.values.push_back(pair.nu_plus);
  std::sort(spectrum.values.begin(), spectrum.values.end());
  return spectrum;
}

}  // namespace cvsym
