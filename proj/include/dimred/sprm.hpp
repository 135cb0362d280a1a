#pragma once

#include <limits>
#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/dicomo.hpp"
#include "dimred/model.hpp"
#include "dimred/preprocess.hpp"

// Robust M regression (IRLS), sparse NIPALS, and sparse partial robust M
// regression as iteratively reweighted sparse NIPALS.

namespace dimred::sprm {

enum class RhoFamily { fair, huber, hampel, ls };

// Standard-normal quantiles at 0.95 / 0.975 / 0.999: the default Hampel cuts.
inline constexpr double kHampelA = 1.6448536269514722;
inline constexpr double kHampelB = 1.959963984540054;
inline constexpr double kHampelC = 3.090232306167813;

struct RhoSpec {
  RhoFamily family = RhoFamily::hampel;
  double fair_c = 1.3998;
  double huber_c = 1.345;
  double hampel_a = kHampelA;
  double hampel_b = kHampelB;
  double hampel_c = kHampelC;
};

inline void validate(const RhoSpec& rho) {
  switch (rho.family) {
    case RhoFamily::ls:
      return;
    case RhoFamily::fair:
      if (!(rho.fair_c > 0.0)) throw invalid_spec("fair: c must be positive");
      return;
    case RhoFamily::huber:
      if (!(rho.huber_c > 0.0)) throw invalid_spec("huber: c must be positive");
      return;
    case RhoFamily::hampel:
      if (!(rho.hampel_a > 0.0 && rho.hampel_a < rho.hampel_b &&
            rho.hampel_b < rho.hampel_c))
        throw invalid_spec("hampel: need 0 < a < b < c");
      return;
  }
  throw invalid_spec("unknown rho family");
}

// Case weight for a standardized residual or distance. Even in u,
// non-increasing in |u|, valued in [0, 1].
inline double weight(double u, const RhoSpec& rho) {
  const double a = std::abs(u);
  switch (rho.family) {
    case RhoFamily::ls:
      return 1.0;
    case RhoFamily::fair: {
      const double d = 1.0 + a / rho.fair_c;
      return 1.0 / (d * d);
    }
    case RhoFamily::huber:
      return a <= rho.huber_c ? 1.0 : rho.huber_c / a;
    case RhoFamily::hampel: {
      if (a <= rho.hampel_a) return 1.0;
      if (a <= rho.hampel_b) return rho.hampel_a / a;
      if (a <= rho.hampel_c)
        return rho.hampel_a * (rho.hampel_c - a) /
               ((rho.hampel_c - rho.hampel_b) * a);
      return 0.0;
    }
  }
  throw invalid_spec("unknown rho family");
}

// rho(u) consistent with the weight function (psi(u) = u * weight(u)); used
// only for objective diagnostics.
inline double rho_value(double u, const RhoSpec& rho) {
  const double a = std::abs(u);
  switch (rho.family) {
    case RhoFamily::ls:
      return 0.5 * a * a;
    case RhoFamily::fair: {
      const double c = rho.fair_c;
      const double d = 1.0 + a / c;
      return c * c * (std::log(d) + 1.0 / d - 1.0);
    }
    case RhoFamily::huber: {
      const double c = rho.huber_c;
      return a <= c ? 0.5 * a * a : c * a - 0.5 * c * c;
    }
    case RhoFamily::hampel: {
      const double pa = rho.hampel_a, pb = rho.hampel_b, pc = rho.hampel_c;
      if (a <= pa) return 0.5 * a * a;
      if (a <= pb) return pa * a - 0.5 * pa * pa;
      const double rho_b = pa * pb - 0.5 * pa * pa;
      if (a <= pc)
        return rho_b + pa / (pc - pb) * (pc * (a - pb) - 0.5 * (a * a - pb * pb));
      return rho_b + pa / (pc - pb) * (pc * (pc - pb) - 0.5 * (pc * pc - pb * pb));
    }
  }
  throw invalid_spec("unknown rho family");
}

struct RMModel {
  Vector beta;
  double intercept = 0.0;
  double sigma_hat = 0.0;
  Vector caseweights;
  int iterations = 0;
  bool converged = true;
  std::vector<double> objective_trace;  // Sum rho(r_i / sigma) per iteration
};

struct RMOptions {
  int max_iter = 100;
  double tol = 1e-6;
  // Freeze the residual scale after this many iterations (< 0: never). With a
  // frozen scale the IRLS objective is non-increasing.
  int freeze_sigma_after = -1;
};

// Robust M regression via iteratively reweighted least squares. The residual
// scale is re-estimated each iteration by the consistency-corrected MAD; a
// zero scale is treated as an exact fit.
inline RMModel rm_fit(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                      const RhoSpec& rho, const RMOptions& opts = {}) {
  validate(rho);
  check_finite(x, "rm_fit");
  check_finite(y, "rm_fit");
  const Index n = x.rows();
  const Index p = x.cols();
  if (y.size() != n) throw data_error("rm_fit: row count mismatch");
  if (n <= p) throw data_error("rm_fit: need more observations than predictors");

  // Median-center once for conditioning; the intercept column in the weighted
  // design carries the remainder and the centers are restored afterwards.
  Vector mu_x(p);
  for (Index j = 0; j < p; ++j) mu_x[j] = median_of(x.col(j));
  const double mu_y = median_of(y);
  const Matrix xc = x.rowwise() - mu_x.transpose();
  const Vector yc = y.array() - mu_y;

  RMModel model;
  Vector beta = Vector::Zero(p);
  double b0 = 0.0;
  Vector r = yc;
  double sigma = 0.0;
  bool sigma_frozen = false;
  // Residual scales at roundoff level count as an exact fit.
  const double sigma_floor =
      1e-12 * std::max(1.0, yc.cwiseAbs().maxCoeff());

  for (int it = 0; it < opts.max_iter; ++it) {
    if (!sigma_frozen) {
      sigma = mad_of(r);
      if (opts.freeze_sigma_after >= 0 && it >= opts.freeze_sigma_after)
        sigma_frozen = true;
    }
    if (sigma <= sigma_floor) {
      // Exact fit: all cases agree with the current coefficients.
      model.caseweights = Vector::Ones(n);
      model.sigma_hat = 0.0;
      model.converged = true;
      model.iterations = it;
      model.beta = beta;
      model.intercept = b0 + mu_y - mu_x.dot(beta);
      return model;
    }

    Vector w(n);
    double obj = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double u = r[i] / sigma;
      w[i] = weight(u, rho);
      obj += rho_value(u, rho);
    }
    model.objective_trace.push_back(obj);

    // Weighted least squares with an intercept column.
    Matrix aug(n, p + 1);
    aug.leftCols(p) = xc;
    aug.col(p).setOnes();
    const Vector sw = w.cwiseSqrt();
    Matrix wa = aug.array().colwise() * sw.array();
    Vector wy = yc.cwiseProduct(sw);
    Eigen::ColPivHouseholderQR<Matrix> qr(wa);
    if (qr.rank() < p + 1)
      throw numeric_error("rm_fit: weighted design is rank-deficient");
    const Vector sol = qr.solve(wy);
    const Vector beta_new = sol.head(p);
    const double b0_new = sol[p];

    const double change = (beta_new - beta).norm() + std::abs(b0_new - b0);
    const double scale = beta_new.norm() + std::abs(b0_new) + 1e-12;
    beta = beta_new;
    b0 = b0_new;
    r = yc - xc * beta;
    r.array() -= b0;
    model.iterations = it + 1;
    if (change / scale < opts.tol) {
      model.converged = true;
      model.beta = beta;
      model.intercept = b0 + mu_y - mu_x.dot(beta);
      model.sigma_hat = sigma;
      model.caseweights.resize(n);
      for (Index i = 0; i < n; ++i) model.caseweights[i] = weight(r[i] / sigma, rho);
      return model;
    }
  }

  model.converged = false;
  model.beta = beta;
  model.intercept = b0 + mu_y - mu_x.dot(beta);
  model.sigma_hat = sigma;
  model.caseweights.resize(n);
  for (Index i = 0; i < n; ++i)
    model.caseweights[i] = sigma > 0.0 ? weight(r[i] / sigma, rho) : 1.0;
  return model;
}

// ---------------------------------------------------------------------------
// Sparse NIPALS.

struct SniplsModel : ProjectionModel {
  std::vector<Index> active_set;  // variables with a nonzero weight anywhere
  bool truncated = false;         // stopped early: a component thresholded to zero
};

namespace detail {

inline std::vector<Index> active_rows(const Matrix& w) {
  std::vector<Index> act;
  for (Index j = 0; j < w.rows(); ++j) {
    bool nonzero = false;
    for (Index i = 0; i < w.cols(); ++i) {
      if (w(j, i) != 0.0) {
        nonzero = true;
        break;
      }
    }
    if (nonzero) act.push_back(j);
  }
  return act;
}

// Core loop shared by snipls_fit and the reweighted sprm iterations: operates
// on already centered/scaled data. lambda is the scale-free threshold
// fraction; the actual threshold is lambda * max_j |s_j| per component.
inline SniplsModel snipls_core(const Matrix& xc, const Vector& yc, int h, double lambda) {
  const Index n = xc.rows();
  const Index p = xc.cols();
  Matrix xd = xc;
  Vector yd = yc;
  Matrix w(p, h), pl(p, h), t(n, h);
  std::vector<double> index_values;

  Index comp = 0;
  bool truncated = false;
  for (; comp < h; ++comp) {
    const Vector s = xd.transpose() * yd;
    const double smax = s.cwiseAbs().maxCoeff();
    Vector wt(p);
    for (Index j = 0; j < p; ++j) {
      const double mag = std::abs(s[j]) - lambda * smax;
      wt[j] = mag > 0.0 ? (s[j] > 0.0 ? mag : -mag) : 0.0;
    }
    const double wn = wt.norm();
    if (wn == 0.0 || smax == 0.0) {
      truncated = true;
      break;
    }
    wt /= wn;
    model_detail::apply_sign_convention(wt);
    Vector ti = xd * wt;
    const double tt = ti.squaredNorm();
    if (tt <= 0.0) {
      truncated = true;
      break;
    }
    const Vector pi = xd.transpose() * ti / tt;
    const double qi = yd.dot(ti) / tt;
    w.col(comp) = wt;
    pl.col(comp) = pi;
    t.col(comp) = ti;
    {
      const double c = ti.dot(yc) / static_cast<double>(n);
      index_values.push_back(c * c);
    }
    xd -= ti * pi.transpose();
    yd -= ti * qi;
  }

  SniplsModel m;
  m.truncated = truncated;
  m.W = w.leftCols(comp);
  m.P = pl.leftCols(comp);
  m.T = t.leftCols(comp);
  m.R = model_detail::rotations(m.W, m.P);
  m.index_values = std::move(index_values);
  m.active_set = active_rows(m.W);
  m.has_regression = true;
  m.intercept = 0.0;  // callers center y and restore the center afterwards
  if (comp == 0) {
    m.gamma = Vector::Zero(0);
    m.beta = Vector::Zero(p);
  } else {
    // T has orthogonal columns, so the regression step separates.
    m.gamma.resize(comp);
    for (Index i = 0; i < comp; ++i)
      m.gamma[i] = m.T.col(i).dot(yc) / m.T.col(i).squaredNorm();
    m.beta = m.R * m.gamma;
  }
  return m;
}

}  // namespace detail

// Sparse NIPALS fit. lambda in [0, 1] is the scale-free soft-threshold
// fraction; lambda = 0 reproduces NIPALS PLS. A component whose weights all
// threshold to zero truncates the model and sets the flag.
inline SniplsModel snipls_fit(const Eigen::Ref<const Matrix>& x,
                              const Eigen::Ref<const Vector>& y, int h, double lambda,
                              const preprocess::ScalerSpec& scaler_spec = {
                                  preprocess::CenterMethod::mean,
                                  preprocess::ScaleMethod::none}) {
  check_finite(x, "snipls_fit");
  check_finite(y, "snipls_fit");
  if (x.rows() != y.size()) throw data_error("snipls_fit: row count mismatch");
  if (h < 1 || h > std::min(x.rows(), x.cols()))
    throw invalid_spec("snipls_fit: h must lie in [1, min(n, p)]");
  if (lambda < 0.0) throw invalid_spec("snipls_fit: lambda must be >= 0");

  const preprocess::FittedScaler scaler = preprocess::fit_scaler(x, scaler_spec);
  const Matrix xc = preprocess::transform(scaler, x);
  const double y_center = y.mean();
  const Vector yc = y.array() - y_center;

  SniplsModel m = detail::snipls_core(xc, yc, h, lambda);
  m.scaler = scaler;
  m.intercept += y_center;
  m.beta = m.beta.cwiseQuotient(scaler.sigma);
  return m;
}

// ---------------------------------------------------------------------------
// Sparse partial robust M.

struct SprmSpec {
  int h = 1;
  double lambda = 0.0;
  RhoSpec rho{};
  preprocess::ScalerSpec scaler{preprocess::CenterMethod::colmedian,
                                preprocess::ScaleMethod::mad};
  int max_iter = 100;
  double tol = 1e-6;
};

struct SprmModel : SniplsModel {
  Vector caseweights;
  double sigma_hat = 0.0;  // final robust residual scale
  int iterations = 0;
  bool converged = true;
};

namespace detail {

// Distance-based weights: Euclidean distance of each row to the column-wise
// median, standardized by the MAD of the distances, pushed through the weight
// function. Only excess distance counts, so inner points are never
// downweighted. Falls back to unit weights when the distances are degenerate.
inline Vector distance_weights(const Matrix& t, const RhoSpec& rho) {
  const Index n = t.rows();
  Vector mu(t.cols());
  for (Index j = 0; j < t.cols(); ++j) mu[j] = median_of(t.col(j));
  Vector d(n);
  for (Index i = 0; i < n; ++i) d[i] = (t.row(i).transpose() - mu).norm();
  const double center = median_of(d);
  const double scale = mad_of(d);
  Vector w(n);
  if (scale <= 0.0) {
    w.setOnes();
    return w;
  }
  for (Index i = 0; i < n; ++i)
    w[i] = weight(std::max(0.0, d[i] - center) / scale, rho);
  return w;
}

inline Vector residual_weights(const Vector& r, const RhoSpec& rho, double* sigma_out,
                               double sigma_floor = 0.0) {
  const double sigma = mad_of(r);
  if (sigma_out) *sigma_out = sigma;
  Vector w(r.size());
  if (sigma <= sigma_floor) {
    w.setOnes();
    return w;
  }
  for (Index i = 0; i < r.size(); ++i) w[i] = weight(r[i] / sigma, rho);
  return w;
}

}  // namespace detail

// Sparse partial robust M regression: iteratively reweighted sparse NIPALS
// with caseweights combining residual- and score-space components. lambda = 0
// gives the non-sparse partial robust M fit.
inline SprmModel sprm_fit(const Eigen::Ref<const Matrix>& x,
                          const Eigen::Ref<const Vector>& y, const SprmSpec& spec) {
  validate(spec.rho);
  check_finite(x, "sprm_fit");
  check_finite(y, "sprm_fit");
  const Index n = x.rows();
  const Index p = x.cols();
  if (y.size() != n) throw data_error("sprm_fit: row count mismatch");
  if (spec.h < 1 || spec.h > std::min(n, p))
    throw invalid_spec("sprm_fit: h must lie in [1, min(n, p)]");
  if (spec.lambda < 0.0) throw invalid_spec("sprm_fit: lambda must be >= 0");

  const preprocess::FittedScaler scaler = preprocess::fit_scaler(x, spec.scaler);
  const Matrix xc = preprocess::transform(scaler, x);
  const double y_center = median_of(y);
  const Vector yc = y.array() - y_center;
  const double sigma_floor = 1e-12 * std::max(1.0, yc.cwiseAbs().maxCoeff());

  // Robust start: residual weights from a univariate robust fit on the single
  // variable with the largest trimmed correlation to y, distance weights from
  // the robustly scaled data.
  Vector w_cases;
  {
    dicomo::MomentSpec corr_spec;
    corr_spec.kind = dicomo::MomentKind::corr;
    corr_spec.center = dicomo::CenterKind::median;
    corr_spec.trim_alpha = 0.2;
    Index best_j = 0;
    double best_corr = -1.0;
    for (Index j = 0; j < p; ++j) {
      double c = 0.0;
      try {
        c = std::abs(dicomo::comoment(xc.col(j), yc, corr_spec));
      } catch (const data_error&) {
        continue;  // degenerate column; skip as a start candidate
      }
      if (c > best_corr) {
        best_corr = c;
        best_j = j;
      }
    }
    const RMModel start = rm_fit(xc.col(best_j), yc, spec.rho);
    const Vector r0 = yc - xc.col(best_j) * start.beta[0] -
                      Vector::Constant(n, start.intercept);
    double sigma0 = 0.0;
    const Vector wr = detail::residual_weights(r0, spec.rho, &sigma0, sigma_floor);
    const Vector wd = detail::distance_weights(xc, spec.rho);
    w_cases = wr.cwiseProduct(wd);
  }

  SprmModel model;
  Vector beta_prev = Vector::Zero(p);
  double best_sigma = std::numeric_limits<double>::infinity();
  SniplsModel best_fit;
  Vector best_weights = w_cases;
  Vector best_mu_x = Vector::Zero(p);
  double best_mu_y = 0.0;
  bool converged = false;
  int iterations = 0;

  for (int it = 0; it < spec.max_iter; ++it) {
    iterations = it + 1;
    // Weighted recentering: the robust median start plus caseweights make the
    // weighted means resistant, and the intercept is restored afterwards.
    const double wsum = w_cases.sum();
    const Vector mu_x = xc.transpose() * w_cases / wsum;
    const double mu_y = yc.dot(w_cases) / wsum;
    const Matrix xcen = xc.rowwise() - mu_x.transpose();
    const Vector ycen = yc.array() - mu_y;

    const Vector sw = w_cases.cwiseSqrt();
    const Matrix xw = xcen.array().colwise() * sw.array();
    const Vector yw = ycen.cwiseProduct(sw);
    SniplsModel fit = detail::snipls_core(xw, yw, spec.h, spec.lambda);

    // Scores and residuals for all (unweighted) cases.
    const Matrix t_all = xcen * fit.R;
    Vector r = ycen;
    if (fit.gamma.size() > 0) r -= t_all * fit.gamma;

    double sigma = 0.0;
    const Vector wr = detail::residual_weights(r, spec.rho, &sigma, sigma_floor);
    Vector wd;
    if (fit.gamma.size() > 0) {
      wd = detail::distance_weights(t_all, spec.rho);
    } else {
      wd = Vector::Ones(n);
    }
    w_cases = wr.cwiseProduct(wd);

    // Track the iterate with the smallest robust residual scale.
    if (sigma < best_sigma || it == 0) {
      best_sigma = sigma;
      best_fit = fit;
      best_weights = w_cases;
      best_mu_x = mu_x;
      best_mu_y = mu_y;
    }

    const double change = (fit.beta - beta_prev).norm() / (beta_prev.norm() + 1e-12);
    beta_prev = fit.beta;
    if (it > 0 && change < spec.tol) {
      best_sigma = sigma;
      best_fit = fit;
      best_weights = w_cases;
      best_mu_x = mu_x;
      best_mu_y = mu_y;
      converged = true;
      break;
    }
  }

  static_cast<SniplsModel&>(model) = best_fit;
  model.converged = converged;
  model.iterations = iterations;
  model.caseweights = best_weights;
  model.sigma_hat = best_sigma;
  // Fold the per-iteration centers back into the stored scaler and intercept.
  model.scaler = scaler;
  model.scaler.mu += best_mu_x.cwiseProduct(scaler.sigma);
  model.intercept += y_center + best_mu_y;
  model.beta = model.beta.cwiseQuotient(scaler.sigma);
  // Scores of the unweighted cases in the final model.
  model.T = preprocess::transform(model.scaler, x) * model.R;
  return model;
}

// Caseweights for new data under a fitted sprm model: residuals standardized
// by the training scale (sigma <= 0 falls back to the MAD of the new
// residuals), times score-distance weights.
inline Vector caseweights_for(const SprmModel& model, const RhoSpec& rho,
                              const Eigen::Ref<const Matrix>& x,
                              const Eigen::Ref<const Vector>& y, double sigma = 0.0) {
  const Vector yhat = predict(model, x);
  const Vector r = y - yhat;
  if (sigma <= 0.0) sigma = mad_of(r);
  Vector wr(r.size());
  if (sigma <= 0.0) {
    wr.setOnes();
  } else {
    for (Index i = 0; i < r.size(); ++i) wr[i] = weight(r[i] / sigma, rho);
  }
  const Matrix t = transform(model, x);
  const Vector wd = detail::distance_weights(t, rho);
  return wr.cwiseProduct(wd);
}

// ---------------------------------------------------------------------------
// Outlier flagging.

enum class CaseClass { regular, moderate, harsh };

inline constexpr double kDefaultModerateCut = 0.7;
inline constexpr double kDefaultHarshCut = 0.3;

inline std::vector<CaseClass> caseweight_classes(const Eigen::Ref<const Vector>& weights,
                                                 double cut_moderate = kDefaultModerateCut,
                                                 double cut_harsh = kDefaultHarshCut) {
  if (!(cut_harsh >= 0.0 && cut_harsh < cut_moderate && cut_moderate <= 1.0))
    throw invalid_spec("caseweight_classes: need 0 <= cut_harsh < cut_moderate <= 1");
  std::vector<CaseClass> classes(static_cast<std::size_t>(weights.size()));
  for (Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (w >= cut_moderate)
      classes[static_cast<std::size_t>(i)] = CaseClass::regular;
    else if (w >= cut_harsh)
      classes[static_cast<std::size_t>(i)] = CaseClass::moderate;
    else
      classes[static_cast<std::size_t>(i)] = CaseClass::harsh;
  }
  return classes;
}

}  // namespace dimred::sprm
