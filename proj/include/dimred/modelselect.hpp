#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/sprm.hpp"

// Cross-validation utilities and the caseweight-aware robust loss.

namespace dimred::modelselect {

struct CVPlan {
  Index n = 0;
  int k = 5;
  std::uint64_t seed = 0;
  bool shuffle = false;
};

struct Fold {
  std::vector<Index> train;
  std::vector<Index> test;
};

// Disjoint, covering folds with sizes differing by at most one; deterministic
// for a given seed.
inline std::vector<Fold> kfold(const CVPlan& plan) {
  if (plan.k < 2) throw invalid_spec("kfold: need at least 2 folds");
  if (plan.k > plan.n) throw invalid_spec("kfold: more folds than observations");
  std::vector<Index> idx(static_cast<std::size_t>(plan.n));
  std::iota(idx.begin(), idx.end(), Index{0});
  if (plan.shuffle) deterministic_shuffle(idx, plan.seed);

  std::vector<Fold> folds(static_cast<std::size_t>(plan.k));
  std::size_t pos = 0;
  for (int s = 0; s < plan.k; ++s) {
    const auto size = static_cast<std::size_t>(plan.n / plan.k + (s < plan.n % plan.k ? 1 : 0));
    auto& fold = folds[static_cast<std::size_t>(s)];
    fold.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                     idx.begin() + static_cast<std::ptrdiff_t>(pos + size));
    fold.train.reserve(idx.size() - size);
    fold.train.insert(fold.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(pos));
    fold.train.insert(fold.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(pos + size), idx.end());
    std::sort(fold.test.begin(), fold.test.end());
    std::sort(fold.train.begin(), fold.train.end());
    pos += size;
  }
  return folds;
}

// Caseweighted squared-error loss: sum w (y - yhat)^2 / sum w. Reduces to the
// MSE at unit weights.
inline double robust_loss(const Eigen::Ref<const Vector>& y,
                          const Eigen::Ref<const Vector>& yhat,
                          const Eigen::Ref<const Vector>& weights) {
  if (y.size() != yhat.size() || y.size() != weights.size())
    throw data_error("robust_loss: length mismatch");
  if (weights.minCoeff() < 0.0 || weights.maxCoeff() > 1.0)
    throw invalid_spec("robust_loss: weights must lie in [0, 1]");
  const double wsum = weights.sum();
  if (wsum <= 0.0) throw data_error("robust_loss: all weights are zero");
  return weights.dot((y - yhat).cwiseAbs2()) / wsum;
}

enum class Scoring { mse, mae, robust };

// What grid_search needs from a fitted candidate: a predictor plus, for the
// robust score, the training weight rule (residual scale and rho).
struct CVModel {
  std::function<Vector(const Matrix&)> predict;
  double sigma_hat = 0.0;
  std::optional<sprm::RhoSpec> rho;
};

using FitFn = std::function<CVModel(const Matrix& x, const Vector& y)>;

struct GridCell {
  std::string name;
  FitFn fit;
};

struct CellResult {
  std::string name;
  std::vector<double> fold_scores;        // NaN where the fold failed
  std::vector<std::string> fold_errors;   // empty where the fold succeeded
  double mean_score = std::numeric_limits<double>::quiet_NaN();
  bool all_failed = false;
};

struct GridSearchResult {
  std::vector<CellResult> cells;
  int best_index = -1;
  Scoring scoring = Scoring::mse;
};

namespace detail {

inline Matrix take_rows(const Eigen::Ref<const Matrix>& x, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

inline Vector take(const Eigen::Ref<const Vector>& v, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = v[rows[i]];
  return out;
}

inline double score_fold(const CVModel& model, const Matrix& xte, const Vector& yte,
                         Scoring scoring) {
  const Vector yhat = model.predict(xte);
  const Vector r = yte - yhat;
  switch (scoring) {
    case Scoring::mse:
      return r.squaredNorm() / static_cast<double>(r.size());
    case Scoring::mae:
      return r.cwiseAbs().sum() / static_cast<double>(r.size());
    case Scoring::robust: {
      // Test residuals standardized by the training scale, pushed through the
      // training weight rule; plain MSE when the model carries no rule.
      if (!model.rho || model.sigma_hat <= 0.0)
        return r.squaredNorm() / static_cast<double>(r.size());
      Vector w(r.size());
      for (Index i = 0; i < r.size(); ++i)
        w[i] = sprm::weight(r[i] / model.sigma_hat, *model.rho);
      return robust_loss(yte, yhat, w);
    }
  }
  throw invalid_spec("grid_search: unknown scoring rule");
}

}  // namespace detail

// Exhaustive cross-validated grid evaluation. Best cell = lowest mean test
// score, ties resolved by grid order. Fold errors are recorded per cell;
// cells whose folds all failed are excluded from the ranking.
inline GridSearchResult grid_search(const std::vector<GridCell>& grid,
                                    const Eigen::Ref<const Matrix>& x, const Vector& y,
                                    const CVPlan& plan, Scoring scoring) {
  if (grid.empty()) throw invalid_spec("grid_search: empty grid");
  if (x.rows() != y.size()) throw data_error("grid_search: row count mismatch");
  const std::vector<Fold> folds = kfold(plan);

  GridSearchResult result;
  result.scoring = scoring;
  result.cells.reserve(grid.size());

  for (const auto& cell : grid) {
    CellResult cr;
    cr.name = cell.name;
    double sum = 0.0;
    int ok = 0;
    for (const auto& fold : folds) {
      const Matrix xtr = detail::take_rows(x, fold.train);
      const Vector ytr = detail::take(y, fold.train);
      const Matrix xte = detail::take_rows(x, fold.test);
      const Vector yte = detail::take(y, fold.test);
      try {
        const CVModel model = cell.fit(xtr, ytr);
        const double s = detail::score_fold(model, xte, yte, scoring);
        cr.fold_scores.push_back(s);
        cr.fold_errors.emplace_back();
        sum += s;
        ++ok;
      } catch (const std::exception& e) {
        cr.fold_scores.push_back(std::numeric_limits<double>::quiet_NaN());
        cr.fold_errors.emplace_back(e.what());
      }
    }
    if (ok > 0) {
      cr.mean_score = sum / static_cast<double>(ok);
    } else {
      cr.all_failed = true;
    }
    result.cells.push_back(std::move(cr));
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& cr = result.cells[i];
    if (!cr.all_failed && cr.mean_score < best) {
      best = cr.mean_score;
      result.best_index = static_cast<int>(i);
    }
  }
  if (result.best_index < 0)
    throw numeric_error("grid_search: every grid cell failed on every fold");
  return result;
}

}  // namespace dimred::modelselect
