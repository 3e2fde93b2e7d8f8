#pragma once

// Numeric witnesses for the closed forms: explicit eigenvectors of the
// degenerate eigenvalue, the seralian identity, and a seeded corpus that
// compares every analytic route with the numeric spectrum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cvsym/io.hpp"

namespace cvsym {

/// Candidate eigenvector of i Omega sigma, stored as interleaved (re, im) pairs.
struct EigenpairCheck {
  std::vector<double> vector;
  double eigenvalue = 0.0;
  /// max-norm of (i Omega sigma) v - eigenvalue v
  double residual = 0.0;

  double norm() const {
    double s = 0.0;
    for (double x : vector) s += x * x;
    return std::sqrt(s);
  }
  bool passed(double tol = 1e-9) const { return residual < tol * norm(); }

  Eigen::VectorXcd as_complex() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(vector.size() / 2));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = {vector[2 * k], vector[2 * k + 1]};
    return v;
  }
};

/// max |(i Omega sigma) v - lambda v| for v = a + i b, via real products only:
/// i Omega sigma (a + i b) = -Omega sigma b + i Omega sigma a.
inline double eigen_residual(const CovarianceMatrix& cm, const std::vector<double>& interleaved, double lambda) {
  const auto dim = cm.matrix().rows();
  Eigen::VectorXd re(dim), im(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    re[k] = interleaved[static_cast<std::size_t>(2 * k)];
    im[k] = interleaved[static_cast<std::size_t>(2 * k + 1)];
  }
  const Matrix os = symplectic_form(cm.n_modes()) * cm.matrix();
  const Eigen::VectorXd out_re = -(os * im) - lambda * re;
  const Eigen::VectorXd out_im = os * re - lambda * im;
  return std::max(out_re.cwiseAbs().maxCoeff(), out_im.cwiseAbs().maxCoeff());
}

/// N-1 eigenvectors of i Omega sigma for the degenerate eigenvalue nu_- of a
/// standard-form fully symmetric state. Vector j pairs mode 0 with mode j:
/// (-i c, -1) on mode 0, (+i c, +1) on mode j, zero elsewhere, with
/// c = (b - e2)/nu_- = nu_-/(b - e1) in the (x, p) ordering.
inline std::vector<EigenpairCheck> degenerate_eigenvectors(const SymmetricBlockParams& p) {
  if (p.n_modes < 2) throw RangeError("degenerate eigenvectors need at least two modes");
  const double nu_sq = (p.b - p.e1) * (p.b - p.e2);
  if (!(nu_sq > 0.0)) throw UnphysicalError("degenerate eigenvalue is zero or imaginary");
  const double nu = std::sqrt(nu_sq);
  const double c = (p.b - p.e2) / nu;
  const auto cm = build_fully_symmetric(p);

  std::vector<EigenpairCheck> out;
  out.reserve(p.n_modes - 1);
  for (std::size_t j = 1; j < p.n_modes; ++j) {
    EigenpairCheck check;
    check.eigenvalue = nu;
    check.vector.assign(4 * p.n_modes, 0.0);
    // Entry k of the complex vector occupies slots 2k (re) and 2k+1 (im).
    check.vector[1] = -c;        // x_0 = -i c
    check.vector[2] = -1.0;      // p_0 = -1
    check.vector[4 * j + 1] = c; // x_j = +i c
    check.vector[4 * j + 2] = 1.0;
    check.residual = eigen_residual(cm, check.vector, nu);
    out.push_back(std::move(check));
  }
  return out;
}

struct RankReport {
  std::size_t rank = 0;
  std::vector<double> singular_values;  ///< relative to the largest, descending
};

/// Rank of the stacked complex vectors; a singular value counts when it exceeds 1e-6 of the largest.
inline RankReport stacked_rank(const std::vector<EigenpairCheck>& checks) {
  RankReport r;
  if (checks.empty()) return r;
  const auto dim = static_cast<Eigen::Index>(checks.front().vector.size() / 2);
  Eigen::MatrixXcd stacked(static_cast<Eigen::Index>(checks.size()), dim);
  for (std::size_t i = 0; i < checks.size(); ++i) stacked.row(static_cast<Eigen::Index>(i)) = checks[i].as_complex();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? s[0] : 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double rel = top > 0.0 ? s[k] / top : 0.0;
    r.singular_values.push_back(rel);
    if (rel > 1e-6) ++r.rank;
  }
  return r;
}

/// |Delta_sigma - Delta_ag - (N-1) nu_-^2 - (nu_-^(N-1) mu_betaN)^-2| with
/// Delta_sigma taken from the block determinants of the assembled matrix.
inline double check_seralian_identity(const OnePlusNState& s) {
  const double delta_sigma = seralian(build_one_plus_n(s));
  const auto inv = one_plus_n_invariants(s);
  const double nu = block_nu_minus(s.block);
  const double n = static_cast<double>(s.block.n_modes);
  const double block_term = 1.0 / (std::pow(nu, n - 1.0) * inv.mu_betaN);
  return std::abs(delta_sigma - inv.delta_ag - (n - 1.0) * nu * nu - block_term * block_term);
}

// -- random corpus -----------------------------------------------------------

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Rejection sampling: b in [1, 5], e_i in [-b, b], N in [min_modes, max_modes].
inline SymmetricBlockParams random_symmetric_params(Rng& rng, std::size_t min_modes, std::size_t max_modes) {
  while (true) {
    SymmetricBlockParams p;
    p.n_modes = uniform_count(rng, min_modes, max_modes);
    p.b = uniform(rng, 1.0, 5.0);
    p.e1 = uniform(rng, -p.b, p.b);
    p.e2 = uniform(rng, -p.b, p.b);
    if (fs_physicality(SymmetricBlock::from_params(p)).is_physical) return p;
  }
}

/// Rejection sampling of 1xN states: random symmetric block, squeezed-thermal
/// alpha = diag(a s, a/s), gamma = diag(g1, g2) with |g_i| <= 1.5/sqrt(N);
/// only assemblies passing validate() are kept.
inline OnePlusNState random_one_plus_n(Rng& rng, std::size_t min_modes, std::size_t max_modes) {
  while (true) {
    OnePlusNState s;
    s.block = SymmetricBlock::from_params(random_symmetric_params(rng, min_modes, max_modes));
    const double a = uniform(rng, 1.0, 3.0);
    const double sq = uniform(rng, 0.5, 2.0);
    s.alpha << a * sq, 0.0, 0.0, a / sq;
    const double g = 1.5 / std::sqrt(static_cast<double>(s.block.n_modes));
    s.gamma << uniform(rng, -g, g), 0.0, 0.0, uniform(rng, -g, g);
    if (validate(assemble_one_plus_n(s)).is_physical) return s;
  }
}

// -- cross validation --------------------------------------------------------

struct IdentityCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_residual < tolerance; }
};

struct CrossValidationReport {
  std::size_t corpus_size = 0;
  std::uint64_t seed = 0;
  std::vector<IdentityCheck> checks;
  /// One JSON document per failing (state, identity) pair, for replay.
  std::vector<std::string> failures;

  bool passed() const {
    return failures.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
  }

  const IdentityCheck& check(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return c;
    }
    throw RangeError("no identity named " + name);
  }
};

namespace detail {

inline double max_relative_gap(const SymplecticSpectrum& a, const SymplecticSpectrum& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::abs(a.values[i] - b.values[i]) / std::max(std::abs(b.values[i]), 1e-300));
  }
  return gap;
}

}  // namespace detail

inline constexpr const char* kFsSpectrum = "fs_spectrum_vs_numeric";
inline constexpr const char* kOnePlusNSpectrum = "one_plus_n_spectrum_vs_numeric";
inline constexpr const char* kEquivalence = "equivalent_negativity_vs_numeric";
inline constexpr const char* kNuPlusForms = "nu_plus_two_closed_forms";
inline constexpr const char* kSeralian = "seralian_identity";
inline constexpr const char* kAppendixResidual = "appendix_eigenpair_residual";
inline constexpr const char* kAppendixRank = "appendix_rank_deficit";

/// Deterministic corpus of `corpus_size` fully symmetric states (2..20 modes)
/// and `corpus_size` 1xN states (N in 1..20). `tol` applies to every identity
/// except the two closed forms for nu_+^(N), which use tol / 10.
inline CrossValidationReport cross_validate(std::size_t corpus_size, std::uint64_t seed, double tol = 1e-9) {
  CrossValidationReport report;
  report.corpus_size = corpus_size;
  report.seed = seed;
  report.checks = {{kFsSpectrum, 0.0, tol},  {kOnePlusNSpectrum, 0.0, tol},      {kEquivalence, 0.0, tol},
                   {kNuPlusForms, 0.0, tol / 10}, {kSeralian, 0.0, tol}, {kAppendixResidual, 0.0, tol},
                   {kAppendixRank, 0.0, 0.5}};
  auto slot = [&](const char* name) -> IdentityCheck& {
    for (auto& c : report.checks) {
      if (c.name == name) return c;
    }
    throw RangeError(name);
  };

  Rng rng(seed);
  for (std::size_t item = 0; item < corpus_size; ++item) {
    const auto params = random_symmetric_params(rng, 2, 20);
    const auto state = random_one_plus_n(rng, 1, 20);
    const auto blk = SymmetricBlock::from_params(params);

    auto record = [&](const char* name, double residual, const json& subject) {
      auto& c = slot(name);
      c.max_residual = std::max(c.max_residual, std::isnan(residual) ? std::numeric_limits<double>::infinity() : residual);
      if (!(residual < c.tolerance)) {
        report.failures.push_back(
            json{{"index", item}, {"identity", name}, {"residual", io::number_or_inf(residual)}, {"state", subject}}
                .dump());
      }
    };

    // Fully symmetric routes.
    const json params_doc = io::to_json(params);
    try {
      record(kFsSpectrum, detail::max_relative_gap(fs_spectrum(blk), symplectic_spectrum_numeric(build_fully_symmetric(blk))),
             params_doc);
      const auto two = fs_symplectic_pair(blk.with_modes(2));
      const double mu_beta = 1.0 / std::sqrt(blk.beta.determinant());
      const double eq3 = nu_plus_of_N(mu_beta, two.nu_plus_n, two.nu_minus, blk.n_modes);
      const double eq2 = fs_symplectic_pair(blk).nu_plus_n;
      record(kNuPlusForms, std::abs(eq3 - eq2) / eq2, params_doc);

      const auto pairs = degenerate_eigenvectors(params);
      double worst = 0.0;
      for (const auto& pc : pairs) worst = std::max(worst, pc.residual / pc.norm());
      record(kAppendixResidual, worst, params_doc);
      const auto rank = stacked_rank(pairs);
      record(kAppendixRank, std::abs(static_cast<double>(rank.rank) - static_cast<double>(params.n_modes - 1)),
             params_doc);
    } catch (const Error& e) {
      report.failures.push_back(json{{"index", item}, {"identity", "exception"}, {"what", e.what()}, {"state", params_doc}}.dump());
    }

    // 1xN routes.
    const json state_doc = io::to_json(state);
    try {
      const auto cm = build_one_plus_n(state);
      record(kOnePlusNSpectrum, detail::max_relative_gap(one_plus_n_spectrum(state), symplectic_spectrum_numeric(cm)),
             state_doc);
      const double e_eq = one_plus_n_negativity(state).value;
      const double e_num = log_negativity_numeric(cm, {0});
      record(kEquivalence, std::abs(e_eq - e_num) / std::max(1.0, e_num), state_doc);
      record(kSeralian, check_seralian_identity(state), state_doc);
    } catch (const Error& e) {
      report.failures.push_back(json{{"index", item}, {"identity", "exception"}, {"what", e.what()}, {"state", state_doc}}.dump());
    }
  }
  return report;
}

inline std::string format_report(const CrossValidationReport& r) {
  std::string out = "corpus " + std::to_string(r.corpus_size) + " seed " + std::to_string(r.seed) + '\n';
  for (const auto& c : r.checks) {
    out += c.name + ' ' + io::format_double(c.max_residual) + " tol " + io::format_double(c.tolerance) + ' ' +
           (c.passed() ? "PASS" : "FAIL") + '\n';
  }
  out += r.passed() ? "all identities passed\n" : std::to_string(r.failures.size()) + " failure(s)\n";
  return out;
}

}  // namespace cvsym
