#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_support.hpp"

namespace cvsym {
namespace {

using testing::oracle_spectrum;
using testing::relative_gap;

void expect_spectra_close(const SymplecticSpectrum& analytic, const std::vector<double>& numeric, double tol) {
  ASSERT_EQ(analytic.size(), numeric.size());
  for (std::size_t i = 0; i < numeric.size(); ++i) EXPECT_LT(relative_gap(analytic.values[i], numeric[i]), tol) << i;
}

/// Permutation matrix acting on whole modes.
Matrix mode_permutation(const std::vector<std::size_t>& perm) {
  const auto dim = static_cast<Eigen::Index>(2 * perm.size());
  Matrix p = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    p.block<2, 2>(2 * static_cast<Eigen::Index>(i), 2 * static_cast<Eigen::Index>(perm[i])) = Mat2::Identity();
  }
  return p;
}

TEST(BuildFullySymmetric, VacuumParameters) {
  EXPECT_EQ(build_fully_symmetric(SymmetricBlockParams{1.0, 0.0, 0.0, 3}).matrix(), Matrix::Identity(6, 6));
}

TEST(BuildFullySymmetric, TwoModeSqueezedIsPure) {
  const auto cm = build_fully_symmetric(SymmetricBlockParams{1.5431, 1.1752, -1.1752, 2});
  // Rounded cosh(1), sinh(1): det close to 1 but not exact.
  const auto s = symplectic_spectrum_numeric(cm);
  EXPECT_NEAR(s.values[0], 1.0, 1e-4);
  EXPECT_NEAR(s.values[1], 1.0, 1e-4);
  const auto exact = build_fully_symmetric(testing::two_mode_squeezed(0.5));
  EXPECT_NEAR(purity(exact), 1.0, 1e-12);
  for (double nu : oracle_spectrum(exact)) EXPECT_NEAR(nu, 1.0, 1e-10);
}

TEST(BuildFullySymmetric, PermutationInvariantBitwise) {
  const auto cm = build_fully_symmetric(SymmetricBlockParams{2.0, 0.7, -0.4, 5});
  std::vector<std::size_t> perm(5);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const Matrix p = mode_permutation(perm);
    EXPECT_EQ(Matrix(p * cm.matrix() * p.transpose()), cm.matrix());
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(BuildFullySymmetric, RejectsUnphysical) {
  EXPECT_THROW(build_fully_symmetric(SymmetricBlockParams{0.9, 0.0, 0.0, 2}), UnphysicalError);
  // (b - e1)(b - e2) < 1
  EXPECT_THROW(build_fully_symmetric(SymmetricBlockParams{1.2, 0.5, 0.5, 2}), UnphysicalError);
  // collective mode unphysical for many modes
  EXPECT_THROW(build_fully_symmetric(SymmetricBlockParams{1.2, -0.3, -0.3, 5}), UnphysicalError);
}

TEST(FsSpectrum, UncoupledThermal) {
  const auto s = fs_spectrum(SymmetricBlockParams{2.5, 0.0, 0.0, 4});
  ASSERT_EQ(s.size(), 4u);
  for (double v : s.values) EXPECT_DOUBLE_EQ(v, 2.5);
}

TEST(FsSpectrum, NegativeRadicandIsAnError) {
  EXPECT_THROW(fs_spectrum(SymmetricBlockParams{1.0, 2.0, -2.0, 3}), UnphysicalError);
}

TEST(FsSpectrum, GhzParametersArePure) {
  for (double b : {1.0, 1.3, 2.0, 7.0}) {
    for (std::size_t total = 2; total <= 12; ++total) {
      for (double v : fs_spectrum(ghz_params({b, total})).values) EXPECT_NEAR(v, 1.0, 1e-9);
    }
  }
}

TEST(FsSpectrum, MatchesNumericOnRandomPhysicalParameters) {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_symmetric_params(rng, 1, 20);
    const auto cm = build_fully_symmetric(p);
    expect_spectra_close(fs_spectrum(p), symplectic_spectrum_numeric(cm).values, 1e-9);
  }
}

TEST(FsSpectrum, GeneralBlocksMatchOracle) {
  // Apply the same local symplectic to every mode: the block stays fully
  // symmetric but leaves standard form.
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_symmetric_params(rng, 2, 9);
    const Mat2 s = testing::random_local_symplectic(rng);
    SymmetricBlock blk = SymmetricBlock::from_params(p);
    blk.beta = s.transpose() * blk.beta * s;
    blk.epsilon = s.transpose() * blk.epsilon * s;
    blk.beta = 0.5 * (blk.beta + blk.beta.transpose()).eval();
    blk.epsilon = 0.5 * (blk.epsilon + blk.epsilon.transpose()).eval();
    expect_spectra_close(fs_spectrum(blk), oracle_spectrum(build_fully_symmetric(blk)), 1e-9);
    expect_spectra_close(fs_spectrum(blk), fs_spectrum(p).values, 1e-9);
  }
}

TEST(FsPhysicality, AgreesWithNumericAwayFromTheBoundary) {
  Rng rng(47);
  int disagreements = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    SymmetricBlockParams p;
    p.n_modes = 1 + static_cast<std::size_t>(trial % 8);
    p.b = testing::uniform(rng, 0.8, 3.0);
    p.e1 = testing::uniform(rng, -p.b, p.b);
    p.e2 = testing::uniform(rng, -p.b, p.b);
    const auto blk = SymmetricBlock::from_params(p);
    const auto analytic = fs_physicality(blk);
    Matrix m(2 * p.n_modes, 2 * p.n_modes);
    for (std::size_t i = 0; i < p.n_modes; ++i) {
      for (std::size_t j = 0; j < p.n_modes; ++j) {
        m.block<2, 2>(2 * static_cast<Eigen::Index>(i), 2 * static_cast<Eigen::Index>(j)) =
            i == j ? blk.beta : blk.epsilon;
      }
    }
    const auto numeric = validate(CovarianceMatrix::from_matrix(m));
    if (analytic.positive_definite && numeric.positive_definite && std::abs(numeric.min_nu - 1.0) < 1e-8) continue;
    if (analytic.is_physical != numeric.is_physical) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(NuPlusOfN, TwoModesReturnsNuPlus) { EXPECT_DOUBLE_EQ(nu_plus_of_N(0.3, 2.7, 1.4, 2), 2.7); }

TEST(NuPlusOfN, SingleModeReturnsInverseLocalPurity) {
  EXPECT_NEAR(nu_plus_of_N(1.0 / 3.0, 5.0, 2.0, 1), 3.0, 1e-14);
}

TEST(NuPlusOfN, AgreesWithDirectFormula) {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_symmetric_params(rng, 2, 20);
    const auto blk = SymmetricBlock::from_params(p);
    const auto two = fs_symplectic_pair(blk.with_modes(2));
    const double eq3 = nu_plus_of_N(1.0 / p.b, two.nu_plus_n, two.nu_minus, p.n_modes);
    EXPECT_LT(relative_gap(eq3, fs_symplectic_pair(blk).nu_plus_n), 1e-10);
  }
  // The N = 5 example from a fixed parameter set.
  const SymmetricBlockParams p{2.0, 0.3, -0.2, 5};
  const auto two = fs_symplectic_pair(SymmetricBlock::from_params(p).with_modes(2));
  EXPECT_NEAR(nu_plus_of_N(0.5, two.nu_plus_n, two.nu_minus, 5),
              std::sqrt((2.0 + 4 * 0.3) * (2.0 - 4 * 0.2)), 1e-10);
}

TEST(NuPlusOfN, InconsistentInputs) {
  EXPECT_THROW(nu_plus_of_N(0.1, 1.0, 1.0, 4), InvalidInvariants);
  EXPECT_THROW(nu_plus_of_N(0.0, 1.0, 1.0, 4), InvalidInvariants);
}

TEST(TwoModeNus, Examples) {
  const auto pure = two_mode_nus(1.0, 2.0);
  EXPECT_DOUBLE_EQ(pure.nu_minus, 1.0);
  EXPECT_DOUBLE_EQ(pure.nu_plus, 1.0);
  const auto thermal = two_mode_nus(1.0 / 9.0, 18.0);
  EXPECT_NEAR(thermal.nu_minus, 3.0, 1e-12);
  EXPECT_NEAR(thermal.nu_plus, 3.0, 1e-12);
  const auto mixed = two_mode_nus(1.0 / 6.0, 4.0 + 9.0);
  EXPECT_NEAR(mixed.nu_minus, 2.0, 1e-13);
  EXPECT_NEAR(mixed.nu_plus, 3.0, 1e-13);
}

TEST(TwoModeNus, NegativeDiscriminant) { EXPECT_THROW(two_mode_nus(0.1, 2.0), InvalidInvariants); }

TEST(TwoModeNus, FromSymmetricBlockInvariants) {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_symmetric_params(rng, 2, 2);
    const auto cm = build_fully_symmetric(p);
    const auto pair = two_mode_nus(purity(cm), seralian(cm));
    const auto direct = fs_symplectic_pair(SymmetricBlock::from_params(p));
    // The quadratic route loses digits when nu_- ~ nu_+.
    const double tol = 1e-9 + 1e-15 / std::max(1e-12, std::abs(direct.nu_plus_n - direct.nu_minus));
    EXPECT_NEAR(pair.nu_minus, std::min(direct.nu_minus, direct.nu_plus_n), tol);
    EXPECT_NEAR(pair.nu_plus, std::max(direct.nu_minus, direct.nu_plus_n), tol);
  }
}

TEST(GlobalPurityFs, Examples) {
  EXPECT_DOUBLE_EQ(global_purity_fs(SymmetricBlockParams{1.0, 0.0, 0.0, 4}), 1.0);
  EXPECT_NEAR(global_purity_fs(SymmetricBlockParams{3.0, 0.0, 0.0, 2}), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(global_purity_fs(ghz_params({2.5, 6})), 1.0, 1e-9);
}

TEST(GlobalPurityFs, MatchesDeterminant) {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_symmetric_params(rng, 1, 15);
    EXPECT_LT(relative_gap(global_purity_fs(p), purity(build_fully_symmetric(p))), 1e-9);
  }
}

TEST(BuildOnePlusN, ProductStateHasNoEntanglement) {
  OnePlusNState s;
  s.block = SymmetricBlock::from_params(ghz_params({2.0, 4}));
  const auto cm = build_one_plus_n(s);
  EXPECT_NEAR(log_negativity_numeric(cm, {0}), 0.0, 1e-12);
}

TEST(BuildOnePlusN, FullySymmetricIsSpecialCase) {
  const auto blk = SymmetricBlock::from_params(ghz_params({1.5, 6}));
  EXPECT_EQ(build_one_plus_n(as_one_plus_n(blk)), build_fully_symmetric(blk));
}

TEST(BuildOnePlusN, InvariantUnderBlockPermutations) {
  Rng rng(67);
  const auto s = random_one_plus_n(rng, 4, 4);
  const auto cm = build_one_plus_n(s);
  const Matrix p = mode_permutation({0, 3, 1, 4, 2});
  EXPECT_EQ(Matrix(p * cm.matrix() * p.transpose()), cm.matrix());
}

TEST(BuildOnePlusN, RejectsUnphysicalAssembly) {
  OnePlusNState s;
  s.gamma << 2.0, 0.0, 0.0, 2.0;
  s.block.n_modes = 3;
  try {
    build_one_plus_n(s);
    FAIL() << "expected UnphysicalError";
  } catch (const UnphysicalError& e) {
    EXPECT_LT(e.min_nu(), 1.0);
  }
}

TEST(OnePlusNInvariants, SeralianSplits) {
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_one_plus_n(rng, 1, 20);
    const auto inv = one_plus_n_invariants(s);
    const auto cm = build_one_plus_n(s);
    EXPECT_LT(relative_gap(inv.delta_ag + inv.delta_bN, seralian(cm)), 1e-12);
    double oracle_sum = 0.0;
    for (double v : oracle_spectrum(cm)) oracle_sum += v * v;
    EXPECT_LT(relative_gap(inv.delta_ag + inv.delta_bN, oracle_sum), 1e-9);
    EXPECT_LT(relative_gap(inv.mu_sigma, purity(cm)), 1e-9);
    EXPECT_NEAR(inv.delta_ag_tilde + inv.delta_ag, 2.0 / (inv.mu_alpha * inv.mu_alpha), 1e-12);
  }
}

TEST(OnePlusNInvariants, UncoupledAndSignFlip) {
  OnePlusNState s;
  s.alpha << 2.0, 0.0, 0.0, 3.0;
  s.block = SymmetricBlock::from_params({1.5, 0.2, 0.1, 3});
  auto inv = one_plus_n_invariants(s);
  EXPECT_DOUBLE_EQ(inv.delta_ag, 6.0);
  EXPECT_DOUBLE_EQ(inv.delta_ag_tilde, 6.0);

  s.gamma << 0.3, 0.0, 0.0, -0.2;  // det gamma < 0
  inv = one_plus_n_invariants(s);
  EXPECT_GT(inv.delta_ag_tilde, inv.delta_ag);
}

TEST(OnePlusNInvariants, GhzMatchesBruteForceBlocks) {
  const auto blk = SymmetricBlock::from_params(ghz_params({1.5, 3}));
  const auto s = as_one_plus_n(blk);
  const auto cm = build_one_plus_n(s);
  const auto inv = one_plus_n_invariants(s);
  const double det_alpha = cm.block(0, 0).determinant();
  double delta_ag = det_alpha, delta_bn = 0.0;
  for (std::size_t j = 1; j < 3; ++j) delta_ag += 2.0 * cm.block(0, j).determinant();
  for (std::size_t i = 1; i < 3; ++i) {
    delta_bn += cm.block(i, i).determinant();
    for (std::size_t j = i + 1; j < 3; ++j) delta_bn += 2.0 * cm.block(i, j).determinant();
  }
  EXPECT_NEAR(inv.delta_ag, delta_ag, 1e-12);
  EXPECT_NEAR(inv.delta_bN, delta_bn, 1e-12);
  EXPECT_NEAR(inv.mu_alpha, 1.0 / std::sqrt(det_alpha), 1e-12);
  EXPECT_NEAR(inv.mu_betaN, purity(reduce(cm, {1, 2})), 1e-12);
  EXPECT_NEAR(inv.mu_sigma, 1.0, 1e-9);
}

TEST(OnePlusNSpectrum, MatchesNumericUpToTwentyModes) {
  Rng rng(73);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_one_plus_n(rng, 1, 20);
    expect_spectra_close(one_plus_n_spectrum(s), symplectic_spectrum_numeric(build_one_plus_n(s)).values, 1e-9);
  }
}

TEST(OnePlusNSpectrum, UncoupledConcatenatesSpectra) {
  OnePlusNState s;
  s.alpha << 4.0, 0.0, 0.0, 1.0;  // nu = 2
  s.block = SymmetricBlock::from_params({2.0, 0.5, -0.3, 4});
  const auto fs = fs_symplectic_pair(s.block);
  std::vector<double> expected(3, fs.nu_minus);
  expected.push_back(2.0);
  expected.push_back(fs.nu_plus_n);
  std::sort(expected.begin(), expected.end());
  expect_spectra_close(one_plus_n_spectrum(s), expected, 1e-12);
}

TEST(OnePlusNSpectrum, SeralianIdentity) {
  Rng rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_one_plus_n(rng, 1, 20);
    const auto inv = one_plus_n_invariants(s);
    const double nu = block_nu_minus(s.block);
    const double n = static_cast<double>(s.block.n_modes);
    const double block_term = 1.0 / (std::pow(nu, n - 1.0) * inv.mu_betaN);
    const double rhs = inv.delta_ag + (n - 1.0) * nu * nu + block_term * block_term;
    EXPECT_NEAR(seralian(build_one_plus_n(s)), rhs, 1e-9);
  }
}

}  // namespace
}  // namespace cvsym
