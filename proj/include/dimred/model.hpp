#pragma once

#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/preprocess.hpp"

namespace dimred {

// Latent-variable regression model shared by ppdire, snipls and sprm.
// W holds the unit-norm per-component weights in the (deflated) scaled space;
// R = W (P^T W)^-1 maps scaled data directly to scores: T = Z R. The intercept
// lives in score space, so predictions are T gamma + intercept and a row at
// the scaler center predicts exactly the intercept.
struct ProjectionModel {
  Matrix W;  // p x h unit-norm weights
  Matrix P;  // p x h loadings
  Matrix R;  // p x h effective weights (scores of new data)
  Matrix T;  // n x h training scores
  Vector gamma;  // h regression coefficients on scores
  double intercept = 0.0;
  Vector beta;  // p coefficients in original units
  preprocess::FittedScaler scaler;
  std::vector<double> index_values;  // criterion value per component
  bool has_regression = false;
};

namespace model_detail {

// Effective weights via the loading recursion; preserves exact zero rows.
inline Matrix rotations(const Matrix& w, const Matrix& p) {
  Matrix r = w;
  for (Index i = 0; i < w.cols(); ++i) {
    for (Index j = 0; j < i; ++j) {
      r.col(i) -= p.col(j).dot(w.col(i)) * r.col(j);
    }
  }
  return r;
}

// Deterministic orientation: the largest-magnitude entry is made positive,
// ties resolved by the lowest index.
inline void apply_sign_convention(Vector& w) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > best_abs) {
      best_abs = std::abs(w[i]);
      best = i;
    }
  }
  if (w[best] < 0.0) w = -w;
}

// Least squares of y on [A 1]; returns coefficients and intercept.
inline std::pair<Vector, double> lstsq_with_intercept(const Matrix& a, const Vector& y) {
  Matrix aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()).setOnes();
  Eigen::ColPivHouseholderQR<Matrix> qr(aug);
  if (qr.rank() < aug.cols())
    throw numeric_error("least squares: rank-deficient design");
  Vector sol = qr.solve(y);
  return {sol.head(a.cols()), sol[a.cols()]};
}

}  // namespace model_detail

// New-data scores: apply the stored scaler, then the effective weights.
inline Matrix transform(const ProjectionModel& m, const Eigen::Ref<const Matrix>& x) {
  return preprocess::transform(m.scaler, x) * m.R;
}

// Predictions via the score route (scaler -> weights -> regression step).
inline Vector predict(const ProjectionModel& m, const Eigen::Ref<const Matrix>& x) {
  if (!m.has_regression)
    throw invalid_spec("predict: model was fitted without a response");
  return (transform(m, x) * m.gamma).array() + m.intercept;
}

// Predictions via the stored original-unit coefficients; algebraically equal
// to the score route.
inline Vector predict_from_beta(const ProjectionModel& m, const Eigen::Ref<const Matrix>& x) {
  if (!m.has_regression)
    throw invalid_spec("predict: model was fitted without a response");
  const double b0 = m.intercept - m.scaler.mu.dot(m.beta);
  return (x * m.beta).array() + b0;
}

}  // namespace dimred
