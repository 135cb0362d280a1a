#pragma once

#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/dicomo.hpp"

// Sufficient dimension reduction: slicing and directional kernels (SIR, SAVE,
// DR, PHD, IHT) and joint dependence-maximization SDR over the Stiefel set
// with distance covariance or martingale difference divergence.

namespace dimred::sudire {

enum class SDRMethod { sir, save, dr, phd, iht, dcov_sdr, mdd_sdr, custom };

// A dependence measure of (projected data, response); must be permutation
// invariant. This is the pluggable hook for external measures.
using DependenceFn = std::function<double(const Matrix& t, const Vector& y)>;

struct SDRSpec {
  SDRMethod method = SDRMethod::sir;
  int h = 1;
  int n_slices = 10;
  int max_iter = 200;
  double grad_tol = 1e-5;
  double fd_step = 1e-6;
  DependenceFn custom;  // required when method == custom
};

struct SDRModel {
  Matrix B;   // p x h basis of the estimated central subspace, original coords
  Vector mu;  // column means used for centering
  double criterion = 0.0;
  std::vector<double> eigenvalues;  // kernel spectrum (slicing/directional)
  std::string warm_start;           // chosen warm start (dependence methods)
  bool converged = true;
  bool truncated = false;  // iht returned fewer directions than requested
};

namespace detail {

struct Whitening {
  Vector mu;
  Matrix inv_sqrt;  // Sigma^(-1/2)
};

inline Whitening whiten_fit(const Eigen::Ref<const Matrix>& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (p >= n) throw data_error("whitening requires n > p");
  Whitening wh;
  wh.mu = x.colwise().mean().transpose();
  const Matrix xc = x.rowwise() - wh.mu.transpose();
  const Matrix sigma = xc.transpose() * xc / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const Vector d = es.eigenvalues();
  if (d.minCoeff() <= 1e-12 * std::max(1e-300, d.maxCoeff()))
    throw numeric_error("whitening: singular covariance");
  wh.inv_sqrt =
      es.eigenvectors() * d.cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  return wh;
}

// Equal-frequency slice assignment on sorted y; ties keep original order.
inline std::vector<std::vector<Index>> slices_of(const Vector& y, int n_slices) {
  const Index n = y.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return y[a] < y[b]; });
  std::vector<std::vector<Index>> slices(static_cast<std::size_t>(n_slices));
  Index pos = 0;
  for (int s = 0; s < n_slices; ++s) {
    const Index size = n / n_slices + (s < n % n_slices ? 1 : 0);
    for (Index k = 0; k < size; ++k)
      slices[static_cast<std::size_t>(s)].push_back(order[static_cast<std::size_t>(pos++)]);
  }
  return slices;
}

// Orthonormal columns closest to span; QR with a positive-diagonal sign fix so
// the retraction is deterministic.
inline Matrix qf(const Matrix& v) {
  Eigen::HouseholderQR<Matrix> qr(v);
  Matrix q = qr.householderQ() * Matrix::Identity(v.rows(), v.cols());
  const Matrix r = q.transpose() * v;
  for (Index j = 0; j < v.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace detail

// Slicing / directional kernels on already-whitened data.
inline Matrix slice_kernel_whitened(const Eigen::Ref<const Matrix>& z, const Vector& y,
                                    SDRMethod method, int n_slices) {
  const Index n = z.rows();
  const Index p = z.cols();
  if (y.size() != n) throw data_error("slice_kernel: row count mismatch");

  if (method == SDRMethod::phd) {
    const double ybar = y.mean();
    Matrix m = Matrix::Zero(p, p);
    for (Index i = 0; i < n; ++i)
      m += (y[i] - ybar) * z.row(i).transpose() * z.row(i);
    m /= static_cast<double>(n);
    return 0.5 * (m + m.transpose());
  }

  if (n_slices < 2 || n_slices > n)
    throw invalid_spec("slice_kernel: n_slices must lie in [2, n]");
  const auto slices = detail::slices_of(y, n_slices);
  for (const auto& s : slices) {
    if (s.size() < 2)
      throw data_error("slice_kernel: a slice has fewer than 2 observations; "
                       "use fewer slices");
  }

  const Matrix eye = Matrix::Identity(p, p);
  Matrix m = Matrix::Zero(p, p);
  if (method == SDRMethod::sir) {
    for (const auto& s : slices) {
      Vector mean = Vector::Zero(p);
      for (Index i : s) mean += z.row(i).transpose();
      mean /= static_cast<double>(s.size());
      const double f = static_cast<double>(s.size()) / static_cast<double>(n);
      m += f * mean * mean.transpose();
    }
  } else if (method == SDRMethod::save) {
    for (const auto& s : slices) {
      Vector mean = Vector::Zero(p);
      for (Index i : s) mean += z.row(i).transpose();
      mean /= static_cast<double>(s.size());
      Matrix v = Matrix::Zero(p, p);
      for (Index i : s) {
        const Vector c = z.row(i).transpose() - mean;
        v += c * c.transpose();
      }
      v /= static_cast<double>(s.size());
      const double f = static_cast<double>(s.size()) / static_cast<double>(n);
      const Matrix dev = eye - v;
      m += f * dev * dev;
    }
  } else if (method == SDRMethod::dr) {
    // Candidate-matrix form combining first and second slice moments.
    Matrix second_sum = Matrix::Zero(p, p);  // E_s[(E[zz'|s] - I)^2]
    Matrix mm = Matrix::Zero(p, p);          // E_s[m m']
    double msq = 0.0;                        // E_s[m' m]
    for (const auto& s : slices) {
      Vector mean = Vector::Zero(p);
      for (Index i : s) mean += z.row(i).transpose();
      mean /= static_cast<double>(s.size());
      Matrix v = Matrix::Zero(p, p);
      for (Index i : s) {
        const Vector c = z.row(i).transpose() - mean;
        v += c * c.transpose();
      }
      v /= static_cast<double>(s.size());
      const double f = static_cast<double>(s.size()) / static_cast<double>(n);
      const Matrix a = v + mean * mean.transpose() - eye;
      second_sum += f * a * a;
      mm += f * mean * mean.transpose();
      msq += f * mean.squaredNorm();
    }
    m = 2.0 * second_sum + 2.0 * mm * mm + 2.0 * msq * mm;
  } else {
    throw invalid_spec("slice_kernel: method has no slice kernel");
  }
  return 0.5 * (m + m.transpose());
}

// Whitens internally and returns the kernel in whitened coordinates.
inline Matrix slice_kernel(const Eigen::Ref<const Matrix>& x, const Vector& y,
                           SDRMethod method, int n_slices) {
  check_finite(x, "slice_kernel");
  check_finite(y, "slice_kernel");
  const detail::Whitening wh = detail::whiten_fit(x);
  const Matrix z = (x.rowwise() - wh.mu.transpose()) * wh.inv_sqrt;
  return slice_kernel_whitened(z, y, method, n_slices);
}

struct IhtResult {
  Matrix u;  // orthonormal directions in the standardized coordinates
  bool truncated = false;
};

// Iterative Hessian transformations: orthonormalized Krylov block of the PHD
// kernel applied to the covariance between z and y, truncated to h columns.
inline IhtResult iht_directions(const Eigen::Ref<const Matrix>& z, const Vector& y, int h) {
  const Index n = z.rows();
  const Index p = z.cols();
  if (y.size() != n) throw data_error("iht_directions: row count mismatch");
  if (h < 1 || h > p) throw invalid_spec("iht_directions: h must lie in [1, p]");

  const double ybar = y.mean();
  Vector sxy = Vector::Zero(p);
  for (Index i = 0; i < n; ++i) sxy += (y[i] - ybar) * z.row(i).transpose();
  sxy /= static_cast<double>(n);
  const Matrix m = slice_kernel_whitened(z, y, SDRMethod::phd, 2);

  // Modified Gram-Schmidt over the Krylov columns with a rank tolerance.
  IhtResult result;
  Matrix basis(p, p);
  Index rank = 0;
  Vector k = sxy;
  const double tol = 1e-10 * std::max(1.0, sxy.norm());
  for (Index j = 0; j < p; ++j) {
    Vector v = k;
    for (Index r = 0; r < rank; ++r) v -= basis.col(r).dot(v) * basis.col(r);
    const double nrm = v.norm();
    if (nrm > tol) {
      basis.col(rank) = v / nrm;
      ++rank;
    }
    k = m * k;
  }
  result.truncated = rank < h;
  result.u = basis.leftCols(std::min<Index>(rank, h));
  return result;
}

// Stiefel-constrained maximization of a dependence measure of (z b, y) via
// gradient ascent with QR retraction, Armijo backtracking and numerical
// central-difference gradients.
struct StiefelResult {
  Matrix w;
  double value = 0.0;
  int iterations = 0;
  bool converged = true;
};

inline StiefelResult maximize_dependence(const Eigen::Ref<const Matrix>& z, const Vector& y,
                                         int h, const DependenceFn& measure,
                                         Matrix warm = Matrix(), int max_iter = 200,
                                         double grad_tol = 1e-5, double fd_step = 1e-6) {
  const Index p = z.cols();
  if (!measure) throw invalid_spec("maximize_dependence: no measure supplied");
  if (h < 1 || h > p) throw invalid_spec("maximize_dependence: h must lie in [1, p]");

  Matrix w = warm.size() > 0 ? detail::qf(warm)
                             : Matrix::Identity(p, p).leftCols(h);
  if (w.rows() != p || w.cols() != h)
    throw invalid_spec("maximize_dependence: warm start has wrong shape");

  const auto objective = [&](const Matrix& v) { return measure(z * detail::qf(v), y); };
  double f = measure(z * w, y);

  StiefelResult result;
  Matrix grad(p, h);
  for (int iter = 0; iter < max_iter; ++iter) {
    result.iterations = iter + 1;
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < h; ++j) {
        Matrix vp = w, vm = w;
        vp(i, j) += fd_step;
        vm(i, j) -= fd_step;
        grad(i, j) = (objective(vp) - objective(vm)) / (2.0 * fd_step);
      }
    }
    const Matrix sym = 0.5 * (w.transpose() * grad + grad.transpose() * w);
    const Matrix tangent = grad - w * sym;
    const double gnorm = tangent.norm();
    if (gnorm <= grad_tol) {
      result.w = w;
      result.value = f;
      result.converged = true;
      return result;
    }
    double alpha = 1.0;
    bool stepped = false;
    while (alpha >= 1e-14) {
      const Matrix cand = detail::qf(w + alpha * tangent);
      const double fc = measure(z * cand, y);
      if (fc >= f + 1e-4 * alpha * gnorm * gnorm) {
        w = cand;
        f = fc;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) break;  // finite-difference noise floor
  }
  result.w = w;
  result.value = f;
  result.converged = false;
  return result;
}

// Fit a sufficient dimension reduction model. Slicing and directional methods
// take the top-h kernel eigenvectors; dependence methods refine the best of
// the SIR/SAVE/DR warm starts under the target criterion. Every returned
// basis satisfies B' Sigma B = I.
inline SDRModel fit_sdr(const Eigen::Ref<const Matrix>& x, const Vector& y,
                        const SDRSpec& spec) {
  check_finite(x, "fit_sdr");
  check_finite(y, "fit_sdr");
  const Index n = x.rows();
  const Index p = x.cols();
  if (y.size() != n) throw data_error("fit_sdr: row count mismatch");
  if (spec.h < 1 || spec.h > p) throw invalid_spec("fit_sdr: h must lie in [1, p]");
  if (spec.method == SDRMethod::custom && !spec.custom)
    throw invalid_spec("fit_sdr: custom method requires a dependence function");

  const detail::Whitening wh = detail::whiten_fit(x);
  const Matrix z = (x.rowwise() - wh.mu.transpose()) * wh.inv_sqrt;

  SDRModel model;
  model.mu = wh.mu;

  const auto eigen_directions = [&](SDRMethod m, int h,
                                    std::vector<double>* spectrum) -> Matrix {
    const Matrix kernel = slice_kernel_whitened(z, y, m, spec.n_slices);
    Eigen::SelfAdjointEigenSolver<Matrix> es(kernel);
    std::vector<Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Index{0});
    const Vector& ev = es.eigenvalues();
    const bool use_abs = (m == SDRMethod::phd);
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double va = use_abs ? std::abs(ev[a]) : ev[a];
      const double vb = use_abs ? std::abs(ev[b]) : ev[b];
      return va != vb ? va > vb : a < b;
    });
    if (spectrum) {
      spectrum->clear();
      for (Index i : order)
        spectrum->push_back(use_abs ? std::abs(ev[i]) : ev[i]);
    }
    Matrix u(p, h);
    for (int k = 0; k < h; ++k) u.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    return u;
  };

  switch (spec.method) {
    case SDRMethod::sir:
    case SDRMethod::save:
    case SDRMethod::dr:
    case SDRMethod::phd: {
      std::vector<double> spectrum;
      const Matrix u = eigen_directions(spec.method, spec.h, &spectrum);
      model.B = wh.inv_sqrt * u;
      model.eigenvalues = spectrum;
      model.criterion = 0.0;
      for (int k = 0; k < spec.h; ++k) model.criterion += spectrum[static_cast<std::size_t>(k)];
      return model;
    }
    case SDRMethod::iht: {
      const IhtResult r = iht_directions(z, y, spec.h);
      if (r.u.cols() == 0)
        throw numeric_error("fit_sdr: iht produced no directions");
      model.B = wh.inv_sqrt * r.u;
      model.truncated = r.truncated;
      return model;
    }
    case SDRMethod::dcov_sdr:
    case SDRMethod::mdd_sdr:
    case SDRMethod::custom: {
      DependenceFn measure;
      if (spec.method == SDRMethod::dcov_sdr) {
        // Precompute the response-side centered matrix once.
        const Matrix by = dicomo::centered_distances(Matrix(y));
        measure = [by](const Matrix& t, const Vector&) {
          return dicomo::detail::vstat_inner(dicomo::centered_distances(t), by);
        };
      } else if (spec.method == SDRMethod::mdd_sdr) {
        const Matrix by = dicomo::centered_half_squared(y);
        measure = [by](const Matrix& t, const Vector&) {
          return dicomo::detail::vstat_inner(dicomo::centered_distances(t), by);
        };
      } else {
        measure = spec.custom;
      }

      const SDRMethod warm_methods[] = {SDRMethod::sir, SDRMethod::save, SDRMethod::dr};
      const char* warm_names[] = {"sir", "save", "dr"};
      Matrix best_w;
      double best_val = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < 3; ++c) {
        const Matrix u = eigen_directions(warm_methods[c], spec.h, nullptr);
        const double v = measure(z * u, y);
        if (v > best_val) {
          best_val = v;
          best_w = u;
          model.warm_start = warm_names[c];
        }
      }
      const StiefelResult r = maximize_dependence(z, y, spec.h, measure, best_w,
                                                  spec.max_iter, spec.grad_tol,
                                                  spec.fd_step);
      model.B = wh.inv_sqrt * r.w;
      model.criterion = r.value;
      model.converged = r.converged;
      return model;
    }
  }
  throw invalid_spec("fit_sdr: unknown method");
}

// Scores of (possibly new) data under a fitted model.
inline Matrix transform(const SDRModel& model, const Eigen::Ref<const Matrix>& x) {
  if (x.cols() != model.mu.size()) throw data_error("sdr transform: column count mismatch");
  return (x.rowwise() - model.mu.transpose()) * model.B;
}

// Structural dimension estimate: maximize the penalized eigenvalue sum
// G(h) = sum_{i<=h} lambda_i - c h log(n)/sqrt(n) over h = 1..p.
inline int estimate_dimension(const Eigen::Ref<const Matrix>& x, const Vector& y,
                              SDRMethod method, int n_slices = 10, double penalty_c = 0.5) {
  if (method != SDRMethod::sir && method != SDRMethod::save &&
      method != SDRMethod::dr && method != SDRMethod::phd)
    throw invalid_spec("estimate_dimension: method must have an eigenvalue spectrum");
  const detail::Whitening wh = detail::whiten_fit(x);
  const Matrix z = (x.rowwise() - wh.mu.transpose()) * wh.inv_sqrt;
  const Matrix kernel = slice_kernel_whitened(z, y, method, n_slices);
  Eigen::SelfAdjointEigenSolver<Matrix> es(kernel);
  std::vector<double> ev(static_cast<std::size_t>(kernel.rows()));
  for (Index i = 0; i < kernel.rows(); ++i)
    ev[static_cast<std::size_t>(i)] =
        method == SDRMethod::phd ? std::abs(es.eigenvalues()[i]) : es.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), std::greater<>());

  const double n = static_cast<double>(x.rows());
  const double pen = penalty_c * std::log(n) / std::sqrt(n);
  int best_h = 1;
  double best_g = -std::numeric_limits<double>::infinity();
  double cum = 0.0;
  for (std::size_t hh = 1; hh <= ev.size(); ++hh) {
    cum += ev[hh - 1];
    const double g = cum - pen * static_cast<double>(hh);
    if (g > best_g) {
      best_g = g;
      best_h = static_cast<int>(hh);
    }
  }
  return best_h;
}

}  // namespace dimred::sudire
