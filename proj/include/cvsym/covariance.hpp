#pragma once

// Covariance-matrix algebra for N-mode Gaussian states.
//
// Conventions used everywhere in cvsym:
//   * quadratures are ordered (x_1, p_1, ..., x_N, p_N);
//   * the symplectic form is the direct sum of w = [[0, 1], [-1, 0]];
//   * the vacuum covariance matrix is the identity, so physical states have
//     every symplectic eigenvalue >= 1;
//   * logarithms are natural.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cvsym/errors.hpp"

namespace cvsym {

using Mat2 = Eigen::Matrix2d;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance on the smallest symplectic eigenvalue when deciding physicality.
inline constexpr double kPhysicalTol = 1e-9;
/// Largest |s_ij - s_ji| accepted when constructing a covariance matrix.
inline constexpr double kSymmetryTol = 1e-12;

/// Real symmetric 2N x 2N covariance matrix. Symmetry is exact after construction.
class CovarianceMatrix {
 public:
  /// Vacuum state of `n_modes` modes.
  static CovarianceMatrix vacuum(std::size_t n_modes) {
    if (n_modes == 0) throw ShapeError("covariance matrix needs at least one mode");
    return CovarianceMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes));
  }

  /// Checks shape and symmetry (within kSymmetryTol), then symmetrizes exactly.
  static CovarianceMatrix from_matrix(const Matrix& entries, double symmetry_tol = kSymmetryTol) {
    if (entries.rows() == 0 || entries.rows() != entries.cols() || entries.rows() % 2 != 0) {
      throw ShapeError("covariance matrix must be 2N x 2N with N >= 1, got " +
                       std::to_string(entries.rows()) + " x " + std::to_string(entries.cols()));
    }
    if (!entries.allFinite()) throw ShapeError("covariance matrix has non-finite entries");
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > symmetry_tol) {
      throw ShapeError("covariance matrix is not symmetric (max |s_ij - s_ji| = " +
                       std::to_string(asym) + ")");
    }
    return CovarianceMatrix(0.5 * (entries + entries.transpose()));
  }

  std::size_t n_modes() const noexcept { return static_cast<std::size_t>(entries_.rows() / 2); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  /// 2x2 block coupling mode i (rows) and mode j (columns).
  Mat2 block(std::size_t i, std::size_t j) const {
    return entries_.block<2, 2>(2 * static_cast<Eigen::Index>(i), 2 * static_cast<Eigen::Index>(j));
  }

  friend bool operator==(const CovarianceMatrix& a, const CovarianceMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_ == b.entries_;
  }

 private:
  explicit CovarianceMatrix(Matrix m) : entries_(std::move(m)) {}

  Matrix entries_;
};

/// Symplectic eigenvalues in ascending order.
struct SymplecticSpectrum {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }

  /// Product of nu_i^2, equal to Det sigma.
  double product_of_squares() const {
    return std::accumulate(values.begin(), values.end(), 1.0,
                           [](double acc, double v) { return acc * v * v; });
  }
  /// Sum of nu_i^2, equal to the seralian.
  double sum_of_squares() const {
    return std::accumulate(values.begin(), values.end(), 0.0,
                           [](double acc, double v) { return acc + v * v; });
  }
};

struct PhysicalityReport {
  bool is_physical = false;
  bool positive_definite = false;
  /// Smallest symplectic eigenvalue; 0 when the matrix is not positive definite.
  double min_nu = 0.0;
};

inline Matrix symplectic_form(std::size_t n_modes) {
  if (n_modes == 0) throw RangeError("symplectic form needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Matrix omega = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

namespace detail {

/// Symmetric square root through the eigendecomposition of a positive definite matrix.
inline Matrix sqrtm_spd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw DecompositionError("symmetric eigendecomposition failed");
  const auto& lambda = es.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    throw DecompositionError("matrix is not positive definite (smallest eigenvalue " +
                             std::to_string(lambda.minCoeff()) + ")");
  }
  return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

inline std::vector<std::size_t> checked_modes(std::span<const std::size_t> modes, std::size_t n_modes,
                                              const char* what) {
  if (modes.empty()) throw RangeError(std::string(what) + ": mode set is empty");
  std::vector<std::size_t> out(modes.begin(), modes.end());
  for (auto m : out) {
    if (m >= n_modes) {
      throw RangeError(std::string(what) + ": mode index " + std::to_string(m) +
                       " out of range for " + std::to_string(n_modes) + " modes");
    }
  }
  auto sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw RangeError(std::string(what) + ": duplicate mode index");
  }
  return out;
}

}  // namespace detail

/// Symplectic eigenvalues computed as the singular values of sigma^{1/2} Omega sigma^{1/2}.
/// The singular values come in equal pairs; each pair is one eigenvalue.
inline SymplecticSpectrum symplectic_spectrum_numeric(const CovarianceMatrix& cm) {
  const Matrix root = detail::sqrtm_spd(cm.matrix());
  const Matrix antisym = root * symplectic_form(cm.n_modes()) * root;
  Eigen::JacobiSVD<Matrix> svd(antisym);
  Eigen::VectorXd s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size());

  SymplecticSpectrum spectrum;
  spectrum.values.reserve(cm.n_modes());
  for (Eigen::Index k = 0; k + 1 < s.size(); k += 2) {
    spectrum.values.push_back(0.5 * (s[k] + s[k + 1]));
  }
  return spectrum;
}

inline PhysicalityReport validate(const CovarianceMatrix& cm) {
  PhysicalityReport report;
  try {
    report.min_nu = symplectic_spectrum_numeric(cm).min();
    report.positive_definite = true;
  } catch (const DecompositionError&) {
    return report;
  }
  report.is_physical = report.min_nu >= 1.0 - kPhysicalTol;
  return report;
}

inline double determinant(const CovarianceMatrix& cm) { return cm.matrix().partialPivLu().determinant(); }

/// Tr rho^2 = (Det sigma)^{-1/2}.
inline double purity(const CovarianceMatrix& cm) {
  const double det = determinant(cm);
  if (!(det >= 1.0 - kPhysicalTol)) {
    throw UnphysicalError("Det sigma = " + std::to_string(det) + " < 1: purity would exceed 1");
  }
  return 1.0 / std::sqrt(det);
}

/// Sum of the determinants of the per-mode 2x2 blocks, off-diagonal blocks counted twice.
inline double seralian(const CovarianceMatrix& cm) {
  double delta = 0.0;
  for (std::size_t i = 0; i < cm.n_modes(); ++i) {
    delta += cm.block(i, i).determinant();
    for (std::size_t j = i + 1; j < cm.n_modes(); ++j) delta += 2.0 * cm.block(i, j).determinant();
  }
  return delta;
}

/// Mirror reflection p -> -p of every mode in `modes`.
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& cm, std::span<const std::size_t> modes) {
  const auto checked = detail::checked_modes(modes, cm.n_modes(), "partial_transpose");
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(cm.matrix().rows());
  for (auto m : checked) signs[static_cast<Eigen::Index>(2 * m + 1)] = -1.0;
  return CovarianceMatrix::from_matrix(signs.asDiagonal() * cm.matrix() * signs.asDiagonal());
}

inline CovarianceMatrix partial_transpose(const CovarianceMatrix& cm, std::initializer_list<std::size_t> modes) {
  return partial_transpose(cm, std::span<const std::size_t>(modes.begin(), modes.size()));
}

/// -sum ln(nu~_i) over the partially transposed eigenvalues below 1; 0 for PPT states.
inline double log_negativity_from_spectrum(const SymplecticSpectrum& transposed) {
  double e = 0.0;
  for (double nu : transposed.values) {
    if (nu < 1.0) e -= std::log(nu);
  }
  return std::max(0.0, e);
}

inline double log_negativity_numeric(const CovarianceMatrix& cm, std::span<const std::size_t> transposed_modes) {
  return log_negativity_from_spectrum(symplectic_spectrum_numeric(partial_transpose(cm, transposed_modes)));
}

inline double log_negativity_numeric(const CovarianceMatrix& cm, std::initializer_list<std::size_t> modes) {
  return log_negativity_numeric(cm, std::span<const std::size_t>(modes.begin(), modes.size()));
}

/// Covariance matrix of the modes in `kept_modes`, in the given order (partial trace).
inline CovarianceMatrix reduce(const CovarianceMatrix& cm, std::span<const std::size_t> kept_modes) {
  const auto kept = detail::checked_modes(kept_modes, cm.n_modes(), "reduce");
  const auto dim = static_cast<Eigen::Index>(2 * kept.size());
  Matrix out(dim, dim);
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t c = 0; c < kept.size(); ++c) {
      out.block<2, 2>(2 * static_cast<Eigen::Index>(a), 2 * static_cast<Eigen::Index>(c)) =
          cm.block(kept[a], kept[c]);
    }
  }
  return CovarianceMatrix::from_matrix(out);
}

inline CovarianceMatrix reduce(const CovarianceMatrix& cm, std::initializer_list<std::size_t> kept_modes) {
  return reduce(cm, std::span<const std::size_t>(kept_modes.begin(), kept_modes.size()));
}

}  // namespace cvsym
