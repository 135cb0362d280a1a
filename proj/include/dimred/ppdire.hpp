#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/dicomo.hpp"
#include "dimred/model.hpp"
#include "dimred/preprocess.hpp"
#include "dimred/sprm.hpp"

// Projection pursuit dimension reduction: sequential extraction of unit-norm
// directions maximizing a pluggable projection index, with plane-wise grid
// search or sphere-constrained gradient ascent, projection deflation and a
// regression step on the scores.

namespace dimred::ppdire {

using IndexFn = dicomo::IndexFn;

enum class OptimizerKind { grid, nlp };
enum class RegressionMethod { ols, quantile, rm };

struct GridParams {
  int n_angles = 26;                // grid points per plane sweep
  double angle_resolution = 1e-4;   // stop refining below this spacing (rad)
  double direction_tol = 1e-5;      // cycle convergence on direction change
  int max_cycles = 50;
};

struct NlpParams {
  double grad_tol = 1e-7;   // projected-gradient stopping norm
  double fd_step = 1e-6;    // central-difference step
  int max_iter = 500;
  double warm_resolution = 1e-2;  // coarse grid resolution for the warm start
};

struct PPSpec {
  IndexFn index;  // scalar criterion of (t) or (t, y); y passed empty if absent
  int n_components = 1;
  OptimizerKind optimizer = OptimizerKind::grid;
  RegressionMethod regression = RegressionMethod::ols;
  double quantile_tau = 0.5;
  sprm::RhoSpec rho{};
  preprocess::ScalerSpec scaler{preprocess::CenterMethod::mean,
                                preprocess::ScaleMethod::none};
  GridParams grid{};
  NlpParams nlp{};
};

namespace detail {

inline std::string direction_string(const Vector& w) {
  std::ostringstream os;
  os << "[";
  for (Index i = 0; i < w.size(); ++i) {
    if (i) os << ", ";
    os << w[i];
  }
  os << "]";
  return os.str();
}

struct IndexEvaluator {
  const IndexFn& index;
  const Matrix& x;
  const Vector& y;

  double operator()(const Vector& w) const {
    try {
      return index(x * w, y);
    } catch (const std::exception& e) {
      throw numeric_error(std::string("projection index failed at direction ") +
                          direction_string(w) + ": " + e.what());
    }
  }
};

}  // namespace detail

// Grid algorithm: cycle over the planes spanned by the current direction and
// each coordinate axis; per plane, scan a uniform angular grid over
// [-90, 90] degrees and repeatedly halve the interval around the best angle.
inline Vector grid_maximize(const IndexFn& index, const Eigen::Ref<const Matrix>& x,
                            const Vector& y = Vector(), const GridParams& gp = {}) {
  const Index p = x.cols();
  if (p < 1) throw invalid_spec("grid_maximize: empty matrix");
  if (gp.n_angles < 3) throw invalid_spec("grid_maximize: need at least 3 angles");
  if (p == 1) return Vector::Ones(1);

  const Matrix& xm = x;
  detail::IndexEvaluator eval{index, xm, y};

  // Deterministic start: the best coordinate axis.
  Vector w = Vector::Unit(p, 0);
  double best = eval(w);
  for (Index j = 1; j < p; ++j) {
    const Vector e = Vector::Unit(p, j);
    const double v = eval(e);
    if (v > best) {
      best = v;
      w = e;
    }
  }

  const double pi = std::acos(-1.0);
  for (int cycle = 0; cycle < gp.max_cycles; ++cycle) {
    const Vector w_before = w;
    for (Index j = 0; j < p; ++j) {
      const Vector axis = Vector::Unit(p, j);
      double center = 0.0;
      double width = pi;  // [-90, 90] degrees around the current direction
      while (true) {
        double local_best = best;
        double local_theta = 0.0;
        bool improved = false;
        for (int k = 0; k < gp.n_angles; ++k) {
          const double theta = center - 0.5 * width +
                               width * static_cast<double>(k) /
                                   static_cast<double>(gp.n_angles - 1);
          Vector cand = std::cos(theta) * w + std::sin(theta) * axis;
          const double nrm = cand.norm();
          if (nrm < 1e-12) continue;
          cand /= nrm;
          const double v = eval(cand);
          if (v > local_best) {
            local_best = v;
            local_theta = theta;
            improved = true;
          }
        }
        if (improved) {
          best = local_best;
          center = local_theta;
        }
        const double spacing = width / static_cast<double>(gp.n_angles - 1);
        if (spacing <= gp.angle_resolution) break;
        width *= 0.5;
      }
      if (center != 0.0) {
        Vector next = std::cos(center) * w + std::sin(center) * axis;
        const double nrm = next.norm();
        if (nrm >= 1e-12) w = next / nrm;
      }
    }
    const double change = std::min((w - w_before).norm(), (w + w_before).norm());
    if (change < gp.direction_tol) break;
  }
  model_detail::apply_sign_convention(w);
  return w;
}

// Sphere-constrained ascent with numerical gradients and normalization
// retraction, warm-started from a coarse grid pass. Intended for smooth
// indices.
inline Vector nlp_maximize(const IndexFn& index, const Eigen::Ref<const Matrix>& x,
                           const Vector& y = Vector(), const NlpParams& np = {},
                           Vector warm = Vector(), const GridParams& gp = {}) {
  const Index p = x.cols();
  if (p == 1) return Vector::Ones(1);
  detail::IndexEvaluator eval{index, x, y};

  Vector w;
  if (warm.size() == p) {
    w = warm.normalized();
  } else {
    GridParams coarse = gp;
    coarse.angle_resolution = np.warm_resolution;
    w = grid_maximize(index, x, y, coarse);
  }
  double f = eval(w);

  const auto eval_dir = [&](Vector v) {
    const double nrm = v.norm();
    if (nrm < 1e-14) throw numeric_error("nlp_maximize: degenerate direction");
    v /= nrm;
    return eval(v);
  };

  Vector grad(p);
  for (int iter = 0; iter < np.max_iter; ++iter) {
    for (Index i = 0; i < p; ++i) {
      Vector vp = w, vm = w;
      vp[i] += np.fd_step;
      vm[i] -= np.fd_step;
      grad[i] = (eval_dir(vp) - eval_dir(vm)) / (2.0 * np.fd_step);
    }
    Vector gproj = grad - grad.dot(w) * w;
    const double gnorm = gproj.norm();
    if (gnorm <= np.grad_tol) {
      model_detail::apply_sign_convention(w);
      return w;
    }
    double alpha = 1.0;
    bool stepped = false;
    while (alpha >= 1e-14) {
      Vector cand = (w + alpha * gproj).normalized();
      const double fc = eval(cand);
      if (fc >= f + 1e-4 * alpha * gnorm * gnorm) {
        w = cand;
        f = fc;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      // No ascent step available: accept if within the stationarity contract,
      // otherwise report non-convergence with the best iterate.
      if (gnorm <= 1e-6) {
        model_detail::apply_sign_convention(w);
        return w;
      }
      throw convergence_error("nlp_maximize: line search stalled before reaching "
                              "the gradient tolerance",
                              w);
    }
  }
  throw convergence_error("nlp_maximize: maximum iterations reached", w);
}

// Regression of y on the score matrix. ols minimizes squared error, quantile
// runs IRLS on the smoothed pinball loss, rm delegates to the robust M fit.
inline std::pair<Vector, double> regress_scores(const Matrix& t, const Vector& y,
                                                RegressionMethod method,
                                                double quantile_tau = 0.5,
                                                const sprm::RhoSpec& rho = {}) {
  if (t.rows() != y.size()) throw data_error("regress_scores: row count mismatch");
  switch (method) {
    case RegressionMethod::ols:
      return model_detail::lstsq_with_intercept(t, y);
    case RegressionMethod::quantile: {
      if (!(quantile_tau > 0.0 && quantile_tau < 1.0))
        throw invalid_spec("quantile regression: tau must lie in (0, 1)");
      const double eps = 1e-6;
      auto [gamma, b] = model_detail::lstsq_with_intercept(t, y);
      for (int it = 0; it < 200; ++it) {
        Vector r = y - t * gamma;
        r.array() -= b;
        Vector w(r.size());
        for (Index i = 0; i < r.size(); ++i) {
          const double a = std::max(eps, std::abs(r[i]));
          w[i] = (r[i] >= 0.0 ? quantile_tau : 1.0 - quantile_tau) / a;
        }
        Matrix aug(t.rows(), t.cols() + 1);
        aug.leftCols(t.cols()) = t;
        aug.col(t.cols()).setOnes();
        const Vector sw = w.cwiseSqrt();
        Matrix wa = aug.array().colwise() * sw.array();
        Eigen::ColPivHouseholderQR<Matrix> qr(wa);
        if (qr.rank() < aug.cols())
          throw numeric_error("quantile regression: rank-deficient design");
        const Vector sol = qr.solve(y.cwiseProduct(sw));
        const double change =
            (sol.head(t.cols()) - gamma).norm() + std::abs(sol[t.cols()] - b);
        gamma = sol.head(t.cols());
        b = sol[t.cols()];
        if (change < 1e-9 * (1.0 + gamma.norm())) break;
      }
      return {gamma, b};
    }
    case RegressionMethod::rm: {
      const sprm::RMModel m = sprm::rm_fit(t, y, rho);
      return {m.beta, m.intercept};
    }
  }
  throw invalid_spec("regress_scores: unknown regression method");
}

// Fit a projection pursuit model: standardize, extract n_components directions
// with projection deflation between components, then regress y on the scores
// when a response is present.
inline ProjectionModel fit_pp(const Eigen::Ref<const Matrix>& x, const Vector& y,
                              const PPSpec& spec) {
  if (!spec.index) throw invalid_spec("fit_pp: no projection index supplied");
  check_finite(x, "fit_pp");
  const Index n = x.rows();
  const Index p = x.cols();
  const bool supervised = y.size() > 0;
  if (supervised && y.size() != n) throw data_error("fit_pp: row count mismatch");
  if (supervised) check_finite(y, "fit_pp");
  const int h = spec.n_components;
  if (h < 1 || h > std::min(n, p))
    throw invalid_spec("fit_pp: n_components must lie in [1, min(n, p)]");

  ProjectionModel model;
  model.scaler = preprocess::fit_scaler(x, spec.scaler);
  const Matrix z = preprocess::transform(model.scaler, x);
  const double z_norm = std::max(1.0, z.norm());

  Matrix xd = z;
  model.W.resize(p, h);
  model.P.resize(p, h);
  model.T.resize(n, h);

  for (int i = 0; i < h; ++i) {
    if (xd.norm() <= 1e-12 * z_norm)
      throw numeric_error("fit_pp: rank exhausted at component " + std::to_string(i + 1));
    Vector w;
    if (spec.optimizer == OptimizerKind::grid) {
      w = grid_maximize(spec.index, xd, y, spec.grid);
    } else {
      w = nlp_maximize(spec.index, xd, y, spec.nlp, Vector(), spec.grid);
    }
    const Vector t = xd * w;
    const double tt = t.squaredNorm();
    if (tt <= 1e-24 * z_norm * z_norm)
      throw numeric_error("fit_pp: degenerate scores at component " + std::to_string(i + 1));
    const Vector pl = xd.transpose() * t / tt;
    model.W.col(i) = w;
    model.P.col(i) = pl;
    model.T.col(i) = t;
    model.index_values.push_back(detail::IndexEvaluator{spec.index, xd, y}(w));
    xd -= t * pl.transpose();
  }

  model.R = model_detail::rotations(model.W, model.P);
  if (supervised) {
    auto [gamma, b] =
        regress_scores(model.T, y, spec.regression, spec.quantile_tau, spec.rho);
    model.gamma = gamma;
    model.intercept = b;
    model.beta = (model.R * gamma).cwiseQuotient(model.scaler.sigma);
    model.has_regression = true;
  } else {
    model.gamma = Vector::Zero(h);
    model.beta = Vector::Zero(p);
  }
  return model;
}

}  // namespace dimred::ppdire
