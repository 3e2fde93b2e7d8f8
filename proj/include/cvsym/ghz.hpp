#pragma once

// Pure fully symmetric (GHZ-type) states parameterized by b = 1/mu_beta, their
// 1xK entanglement hierarchy, the b -> infinity limits and the N-scaling tables.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cvsym/entanglement.hpp"

namespace cvsym {

struct GhzSpec {
  double b = 1.0;
  std::size_t total_modes = 2;  ///< N + 1
};

struct GhzCovariances {
  double e1 = 0.0;
  double e2 = 0.0;
};

namespace detail {

inline void check_ghz(double b, std::size_t total_modes) {
  if (!(b >= 1.0) || !std::isfinite(b)) throw RangeError("GHZ-type state needs finite b >= 1, got " + std::to_string(b));
  if (total_modes < 2) throw RangeError("GHZ-type state needs at least two modes");
}

}  // namespace detail

/// Off-diagonal covariances that make the (N+1)-mode fully symmetric state pure:
///   e_i = [1 + b^2 (N-1) - N -/+ sqrt((b^2-1)(b^2 (N+1)^2 - (N-1)^2))] / (2 b N),
/// with N = total_modes - 1 (e1 takes the + root).
inline GhzCovariances ghz_covariances(double b, std::size_t total_modes) {
  detail::check_ghz(b, total_modes);
  const double n = static_cast<double>(total_modes - 1);
  const double b2 = b * b;
  const double root = std::sqrt((b2 - 1.0) * (b2 * (n + 1.0) * (n + 1.0) - (n - 1.0) * (n - 1.0)));
  const double base = 1.0 + b2 * (n - 1.0) - n;
  return {(base + root) / (2.0 * b * n), (base - root) / (2.0 * b * n)};
}

inline SymmetricBlockParams ghz_params(const GhzSpec& spec) {
  const auto e = ghz_covariances(spec.b, spec.total_modes);
  return {spec.b, e.e1, e.e2, spec.total_modes};
}

inline CovarianceMatrix build_ghz(const GhzSpec& spec) { return build_fully_symmetric(ghz_params(spec)); }

/// 1xK negativities for K = 1..N (N = total_modes - 1).
inline std::vector<HierarchyEntry> ghz_hierarchy(const GhzSpec& spec) {
  return entanglement_hierarchy(ghz_params(spec), spec.total_modes - 1);
}

/// b -> infinity limit of the 1xK negativity of an (N+1)-mode GHZ-type state:
///   -1/2 ln(1 - 4K / (N(K+1) - K(K-3))), infinite for K = N.
inline double ghz_limit(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw RangeError("ghz_limit needs 1 <= k <= n");
  if (k == n) return std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return -0.5 * std::log(1.0 - 4.0 * kd / (nd * (kd + 1.0) - kd * (kd - 3.0)));
}

/// Negativities of the (N+1)-mode GHZ-type state at fixed b for one N.
struct ScalingRow {
  std::size_t n = 0;
  NegativityResult one_by_one;
  NegativityResult one_by_rest;  ///< 1x(N-1)
  std::optional<NegativityResult> one_by_all;  ///< 1xN; absent for traced (N-mode) states

  double e_1x1() const { return one_by_one.value; }
  double e_1xNm1() const { return one_by_rest.value; }
  double e_1xN() const { return one_by_all ? one_by_all->value : std::numeric_limits<double>::quiet_NaN(); }
};

inline constexpr std::size_t kMaxScalingModes = 50;

namespace detail {

inline void check_scaling_range(double b, std::size_t n_min, std::size_t n_max) {
  if (!(b > 1.0) || !std::isfinite(b)) throw RangeError("scaling table needs finite b > 1");
  if (n_min < 2 || n_max > kMaxScalingModes || n_min > n_max) {
    throw RangeError("scaling range must satisfy 2 <= n_min <= n_max <= " + std::to_string(kMaxScalingModes));
  }
}

}  // namespace detail

/// One row per N in [n_min, n_max] for the pure (N+1)-mode state.
inline std::vector<ScalingRow> scaling_table(double b, std::size_t n_min, std::size_t n_max) {
  detail::check_scaling_range(b, n_min, n_max);
  std::vector<ScalingRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto blk = SymmetricBlock::from_params(ghz_params({b, n + 1}));
    rows.push_back({n, one_by_k_negativity(blk, 1), one_by_k_negativity(blk, n - 1), one_by_k_negativity(blk, n)});
  }
  return rows;
}

/// Same table for the N-mode mixed state left after tracing one mode out of the
/// (N+1)-mode GHZ-type state; the 1x(N-1) split is then the largest available.
inline std::vector<ScalingRow> traced_scaling_table(double b, std::size_t n_min, std::size_t n_max) {
  detail::check_scaling_range(b, n_min, n_max);
  std::vector<ScalingRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto pure = build_ghz({b, n + 1});
    std::vector<std::size_t> kept(n);
    for (std::size_t i = 0; i < n; ++i) kept[i] = i;
    const auto mixed = reduce(pure, kept);
    rows.push_back({n, one_by_k_negativity(mixed, 1), one_by_k_negativity(mixed, n - 1), std::nullopt});
  }
  return rows;
}

}  // namespace cvsym
