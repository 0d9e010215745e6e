#pragma once

// Dense complex linear algebra helpers shared by every module.

#include <complex>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>

namespace kirchhoff {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Singular values in decreasing order. Empty matrices have none.
Eigen::VectorXd singular_values(const Matrix& a);

/// max(m, n) * machine epsilon * largest singular value.
double default_rank_tolerance(const Matrix& a);

std::size_t numerical_rank(const Matrix& a, std::optional<double> tol = std::nullopt);

/// Orthonormal basis (columns) of the numerical kernel.
Matrix kernel(const Matrix& a, std::optional<double> tol = std::nullopt);

/// Determinant in log-polar form so that very small or very large values
/// survive. A singular matrix has log_abs = -inf.
struct LogDeterminant {
  double log_abs = 0.0;
  double phase = 0.0;  // radians in (-pi, pi]

  bool is_zero() const noexcept;
  Complex value() const;
};

/// Fully pivoted LU. The matrix must be square.
LogDeterminant log_determinant(const Matrix& a);

double max_abs(const Matrix& a);

/// max(m, n) times the largest singular value; 0 for a zero matrix.
double operator_scale(const Matrix& a);

}  // namespace kirchhoff
