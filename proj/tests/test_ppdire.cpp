#include <catch2/catch_amalgamated.hpp>

#include "dimred/ppdire.hpp"

#include "oracles.hpp"

using namespace dimred;
using namespace dimred::ppdire;
using Catch::Approx;

namespace {

IndexFn var_index(double trim = 0.0) {
  dicomo::MomentSpec s;
  s.kind = dicomo::MomentKind::var;
  s.trim_alpha = trim;
  return dicomo::make_projection_index(s);
}

IndexFn cov_sq_index() {
  dicomo::MomentSpec s;
  s.kind = dicomo::MomentKind::cov;
  return dicomo::make_projection_index(s);
}

// Mean-zero data with independent columns of the given spreads.
Matrix two_dim_data(oracles::Rng& rng, Index n, double sd1, double sd2) {
  Matrix x(n, 2);
  for (Index i = 0; i < n; ++i) {
    x(i, 0) = rng.normal(0.0, sd1);
    x(i, 1) = rng.normal(0.0, sd2);
  }
  return x;
}

}  // namespace

TEST_CASE("grid with one variable returns the unit direction", "[ppdire]") {
  oracles::Rng rng(3);
  const Matrix x = rng.gaussian(15, 1);
  const Vector w = grid_maximize(var_index(), x);
  REQUIRE(w.size() == 1);
  REQUIRE(w[0] == 1.0);
}

TEST_CASE("grid variance direction matches the covariance eigenvector", "[ppdire]") {
  oracles::Rng rng(5);
  const Matrix x = two_dim_data(rng, 400, 3.0, 1.0);
  const Vector w = grid_maximize(var_index(), x);
  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Matrix v = oracles::pca_directions(xc);
  REQUIRE(oracles::angle_between(w, v.col(0)) < 1e-3);
}

TEST_CASE("grid with a trimmed index matches a dense angular scan", "[ppdire]") {
  oracles::Rng rng(7);
  Matrix x = two_dim_data(rng, 60, 2.0, 0.8);
  x.row(0) << 15.0, -12.0;  // stray points the trimmed index ignores
  x.row(1) << -14.0, 13.0;

  const IndexFn idx = var_index(0.2);
  const Vector w = grid_maximize(idx, x);

  double best_val = -1e300;
  double best_theta = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double theta = -M_PI / 2 + M_PI * k / 100000.0;
    Vector cand(2);
    cand << std::cos(theta), std::sin(theta);
    const double v = idx(x * cand, Vector());
    if (v > best_val) {
      best_val = v;
      best_theta = theta;
    }
  }
  Vector brute(2);
  brute << std::cos(best_theta), std::sin(best_theta);
  REQUIRE(oracles::angle_between(w, brute) < 1e-2);
}

TEST_CASE("nlp refines the variance direction to the eigenvector", "[ppdire]") {
  oracles::Rng rng(11);
  const Matrix x = rng.gaussian(80, 4);
  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Matrix v = oracles::pca_directions(xc);
  const Vector w = nlp_maximize(var_index(), xc);
  REQUIRE(oracles::angle_between(w, v.col(0)) < 1e-4);
}

TEST_CASE("nlp with the squared covariance index finds the PLS direction", "[ppdire]") {
  oracles::Rng rng(13);
  const Matrix x = rng.gaussian(70, 5);
  Vector y = x * Vector::LinSpaced(5, 0.2, 1.0);
  for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, 0.3);

  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Vector yc = y.array() - y.mean();
  const Vector analytic = (xc.transpose() * yc).normalized();
  const Vector w = nlp_maximize(cov_sq_index(), xc, y);
  REQUIRE(oracles::angle_between(w, analytic) < 1e-4);
}

TEST_CASE("nlp returns an already optimal warm start unchanged", "[ppdire]") {
  oracles::Rng rng(17);
  const Matrix x = rng.gaussian(60, 3);
  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Vector v1 = oracles::pca_directions(xc).col(0);
  const Vector w = nlp_maximize(var_index(), xc, Vector(), NlpParams{}, v1);
  REQUIRE(oracles::angle_between(w, v1) < 1e-6);
}

TEST_CASE("fit_pp with the variance index reproduces PCA", "[ppdire]") {
  oracles::Rng rng(19);
  const Matrix x = rng.gaussian(50, 6);

  PPSpec spec;
  spec.index = var_index();
  spec.n_components = 6;
  spec.optimizer = OptimizerKind::nlp;
  spec.scaler = {preprocess::CenterMethod::mean, preprocess::ScaleMethod::none};
  const ProjectionModel m = fit_pp(x, Vector(), spec);

  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Matrix v = oracles::pca_directions(xc);
  for (int k = 0; k < 6; ++k) {
    REQUIRE(oracles::angle_between(m.W.col(k), v.col(k)) < 1e-6);
  }
  for (int k = 0; k < 6; ++k) {
    const Vector ref = xc * v.col(k);
    const double sign = m.T.col(k).dot(ref) >= 0 ? 1.0 : -1.0;
    REQUIRE((m.T.col(k) - sign * ref).norm() < 1e-6 * ref.norm());
  }
}

TEST_CASE("fit_pp with the squared covariance index reproduces NIPALS PLS",
          "[ppdire]") {
  oracles::Rng rng(23);
  const Matrix x = rng.gaussian(40, 5);
  Vector y = x * Vector::LinSpaced(5, -0.5, 1.0);
  for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, 0.2);

  PPSpec spec;
  spec.index = cov_sq_index();
  spec.n_components = 2;
  spec.optimizer = OptimizerKind::nlp;
  const ProjectionModel m = fit_pp(x, y, spec);

  const oracles::NipalsFit oracle = oracles::nipals_pls(x, y, 2);
  for (int k = 0; k < 2; ++k) {
    REQUIRE(oracles::angle_between(m.W.col(k), oracle.w.col(k)) < 1e-6);
    const double sign = m.T.col(k).dot(oracle.t.col(k)) >= 0 ? 1.0 : -1.0;
    REQUIRE((m.T.col(k) - sign * oracle.t.col(k)).norm() < 1e-5);
  }
}

TEST_CASE("continuum at alpha one gives the same model as squared covariance",
          "[ppdire]") {
  oracles::Rng rng(29);
  const Matrix x = rng.gaussian(45, 4);
  Vector y = x * Vector::Ones(4);
  for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, 0.2);

  dicomo::MomentSpec cont;
  cont.kind = dicomo::MomentKind::continuum;
  cont.continuum_alpha = 1.0;

  PPSpec s1;
  s1.index = dicomo::make_projection_index(cont);
  s1.n_components = 2;
  PPSpec s2 = s1;
  s2.index = cov_sq_index();

  const ProjectionModel m1 = fit_pp(x, y, s1);
  const ProjectionModel m2 = fit_pp(x, y, s2);
  REQUIRE((m1.W - m2.W).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE((m1.beta - m2.beta).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("regress_scores on orthonormal centered scores", "[ppdire]") {
  oracles::Rng rng(31);
  Matrix raw = rng.gaussian(30, 3);
  raw.rowwise() -= raw.colwise().mean().eval();
  Matrix tc = Eigen::HouseholderQR<Matrix>(raw).householderQ() *
              Matrix::Identity(30, 3);
  const Vector y = rng.gaussian_vec(30);

  auto [gamma, b] = regress_scores(tc, y, RegressionMethod::ols);
  const Vector oracle =
      (Matrix(tc.transpose() * tc)).ldlt().solve(tc.transpose() * y);
  // the QR basis of centered data keeps near-zero column means, so the
  // intercept stays decoupled and gamma ~ T'y
  REQUIRE((gamma - oracle).norm() < 1e-6);
}

TEST_CASE("median quantile regression tracks least squares on symmetric noise",
          "[ppdire]") {
  oracles::Rng rng(37);
  const Matrix t = rng.gaussian(300, 2);
  Vector y = t * Vector::Ones(2);
  for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, 0.5);

  auto [g_ols, b_ols] = regress_scores(t, y, RegressionMethod::ols);
  auto [g_q, b_q] = regress_scores(t, y, RegressionMethod::quantile, 0.5);
  REQUIRE((g_q - g_ols).cwiseAbs().maxCoeff() <= 0.05);
  REQUIRE(std::abs(b_q - b_ols) <= 0.05);
}

TEST_CASE("noiseless scores are recovered by every regression method", "[ppdire]") {
  oracles::Rng rng(41);
  const Matrix t = rng.gaussian(50, 3);
  const Vector gamma0 = Vector::LinSpaced(3, 1.0, 2.0);
  const Vector y = t * gamma0 + Vector::Constant(50, 0.7);

  for (auto method : {RegressionMethod::ols, RegressionMethod::quantile,
                      RegressionMethod::rm}) {
    auto [gamma, b] = regress_scores(t, y, method, 0.5);
    REQUIRE((gamma - gamma0).norm() < 1e-6);
    REQUIRE(b == Approx(0.7).margin(1e-6));
  }
}

TEST_CASE("predict reproduces fitted values and the centered row", "[ppdire]") {
  oracles::Rng rng(43);
  const Matrix x = rng.gaussian(35, 4).array() * 2.0 + 1.5;
  Vector y = x * Vector::Ones(4);
  for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, 0.3);

  PPSpec spec;
  spec.index = cov_sq_index();
  spec.n_components = 2;
  spec.scaler = {preprocess::CenterMethod::mean, preprocess::ScaleMethod::stddev};
  const ProjectionModel m = fit_pp(x, y, spec);

  const Vector fitted = (m.T * m.gamma).array() + m.intercept;
  const Vector pred = predict(m, x);
  REQUIRE((pred - fitted).cwiseAbs().maxCoeff() < 1e-10);

  Matrix center(1, 4);
  center.row(0) = m.scaler.mu.transpose();
  REQUIRE(predict(m, center)[0] == Approx(m.intercept).margin(1e-10));

  const Vector via_beta = predict_from_beta(m, x);
  REQUIRE((pred - via_beta).cwiseAbs().maxCoeff() < 1e-10);

  REQUIRE_THROWS_AS(predict(m, rng.gaussian(3, 2)), data_error);
}

TEST_CASE("fitted models satisfy the weight and score constraints", "[ppdire]") {
  oracles::Rng rng(47);
  const Matrix x = rng.gaussian(60, 5);
  Vector y = x * Vector::LinSpaced(5, 0.5, 1.5);
  for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, 0.4);

  for (double trim : {0.0, 0.15}) {
    PPSpec spec;
    spec.index = var_index(trim);
    spec.n_components = 3;
    const ProjectionModel m = fit_pp(x, y, spec);
    for (int k = 0; k < 3; ++k)
      REQUIRE(m.W.col(k).norm() == Approx(1.0).margin(1e-8));
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double dot = std::abs(m.T.col(i).dot(m.T.col(j)));
        REQUIRE(dot <= 1e-6 * m.T.col(i).norm() * m.T.col(j).norm());
      }
  }
}

TEST_CASE("variance index values decrease across components", "[ppdire]") {
  oracles::Rng rng(53);
  const Matrix x = rng.gaussian(80, 4);
  PPSpec spec;
  spec.index = var_index();
  spec.n_components = 4;
  spec.optimizer = OptimizerKind::nlp;
  const ProjectionModel m = fit_pp(x, Vector(), spec);
  for (std::size_t k = 0; k + 1 < m.index_values.size(); ++k)
    REQUIRE(m.index_values[k + 1] <= m.index_values[k] + 1e-9);
}

TEST_CASE("fits are deterministic and sign-fixed", "[ppdire]") {
  oracles::Rng rng(59);
  const Matrix x = rng.gaussian(40, 4);
  PPSpec spec;
  spec.index = var_index();
  spec.n_components = 2;
  const ProjectionModel m1 = fit_pp(x, Vector(), spec);
  const ProjectionModel m2 = fit_pp(x, Vector(), spec);
  REQUIRE((m1.W - m2.W).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < 2; ++k) {
    Index imax = 0;
    m1.W.col(k).cwiseAbs().maxCoeff(&imax);
    REQUIRE(m1.W(imax, k) > 0.0);
  }
}

TEST_CASE("trimmed variance shrugs off planted outliers where plain variance turns",
          "[ppdire]") {
  oracles::Rng rng(61);
  const Index n = 100;
  Matrix clean = two_dim_data(rng, n, 3.0, 1.0);
  Matrix dirty = clean;
  for (Index k = 0; k < 10; ++k) {
    dirty(k * 10, 0) = 0.0;
    dirty(k * 10, 1) = (k % 2 ? 50.0 : -50.0);  // gross outliers along e2
  }

  PPSpec plain;
  plain.index = var_index();
  plain.n_components = 1;
  PPSpec trimmed;
  trimmed.index = var_index(0.2);
  trimmed.n_components = 1;

  const Vector w_clean = fit_pp(clean, Vector(), trimmed).W.col(0);
  const Vector w_dirty_trim = fit_pp(dirty, Vector(), trimmed).W.col(0);
  const Vector w_dirty_plain = fit_pp(dirty, Vector(), plain).W.col(0);

  const double deg = 180.0 / M_PI;
  REQUIRE(oracles::angle_between(w_clean, w_dirty_trim) * deg <= 5.0);
  REQUIRE(oracles::angle_between(w_clean, w_dirty_plain) * deg >= 20.0);
}

TEST_CASE("rank exhaustion names the failing component", "[ppdire]") {
  oracles::Rng rng(67);
  Matrix x(30, 3);
  x.col(0) = rng.gaussian_vec(30);
  x.col(1) = 2.0 * x.col(0);
  x.col(2) = -x.col(0);  // rank one

  PPSpec spec;
  spec.index = var_index();
  spec.n_components = 2;
  try {
    fit_pp(x, Vector(), spec);
    FAIL("expected numeric_error");
  } catch (const numeric_error& e) {
    REQUIRE(std::string(e.what()).find("component 2") != std::string::npos);
  }
}

TEST_CASE("index evaluation failures carry the direction", "[ppdire]") {
  oracles::Rng rng(71);
  const Matrix x = rng.gaussian(10, 2);
  IndexFn broken = [](const Vector&, const Vector&) -> double {
    throw std::runtime_error("deliberately broken index");
  };
  REQUIRE_THROWS_AS(grid_maximize(broken, x), numeric_error);
}
