#include "kirchhoff/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

namespace {

double tolerance_for(const Matrix& a, const Eigen::VectorXd& sv) {
  if (sv.size() == 0) return 0.0;
  return static_cast<double>(std::max(a.rows(), a.cols())) *
         std::numeric_limits<double>::epsilon() * sv(0);
}

std::size_t rank_from(const Eigen::VectorXd& sv, double tol) {
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;
  return r;
}

}  // namespace

double default_rank_tolerance(const Matrix& a) { return tolerance_for(a, singular_values(a)); }

std::size_t numerical_rank(const Matrix& a, std::optional<double> tol) {
  Eigen::VectorXd sv = singular_values(a);
  return rank_from(sv, tol.value_or(tolerance_for(a, sv)));
}

Matrix kernel(const Matrix& a, std::optional<double> tol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto r = static_cast<Eigen::Index>(rank_from(sv, tol.value_or(tolerance_for(a, sv))));
  return svd.matrixV().rightCols(n - r);
}

bool LogDeterminant::is_zero() const noexcept { return std::isinf(log_abs) && log_abs < 0; }

Complex LogDeterminant::value() const {
  if (is_zero()) return Complex(0.0, 0.0);
  return std::polar(std::exp(log_abs), phase);
}

LogDeterminant log_determinant(const Matrix& a) {
  if (a.rows() != a.cols())
    throw Error(ErrorCode::NonSquare, "determinant of a non-square matrix");
  LogDeterminant det;
  if (a.rows() == 0) return det;
  Eigen::FullPivLU<Matrix> lu(a);
  const Matrix& packed = lu.matrixLU();
  double phase = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const Complex pivot = packed(i, i);
    if (pivot == Complex(0.0, 0.0)) {
      det.log_abs = -std::numeric_limits<double>::infinity();
      det.phase = 0.0;
      return det;
    }
    det.log_abs += std::log(std::abs(pivot));
    phase += std::arg(pivot);
  }
  if (lu.permutationP().determinant() * lu.permutationQ().determinant() < 0)
    phase += std::numbers::pi;
  det.phase = std::remainder(phase, 2.0 * std::numbers::pi);
  if (det.phase <= -std::numbers::pi) det.phase += 2.0 * std::numbers::pi;
  return det;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double operator_scale(const Matrix& a) {
  Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0) return 0.0;
  return static_cast<double>(std::max(a.rows(), a.cols())) * sv(0);
}

}  // namespace kirchhoff
