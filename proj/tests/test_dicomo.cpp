#include <catch2/catch_amalgamated.hpp>

#include "dimred/dicomo.hpp"

#include "oracles.hpp"

using namespace dimred;
using namespace dimred::dicomo;
using Catch::Approx;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

MomentSpec spec_of(MomentKind kind, double trim = 0.0, int option = 1) {
  MomentSpec s;
  s.kind = kind;
  s.trim_alpha = trim;
  s.option = option;
  return s;
}

}  // namespace

TEST_CASE("population variance of {1,2,3}", "[dicomo]") {
  REQUIRE(moment(vec({1, 2, 3}), spec_of(MomentKind::var)) ==
          Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("skewness of a symmetric sample is zero", "[dicomo]") {
  REQUIRE(moment(vec({-2, -1, 1, 2}), spec_of(MomentKind::skew)) ==
          Approx(0.0).margin(1e-13));
}

TEST_CASE("kurtosis of a two-point symmetric sample", "[dicomo]") {
  REQUIRE(moment(vec({-1, 1, -1, 1}), spec_of(MomentKind::kurt)) ==
          Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trim 0 equals the untrimmed definitions", "[dicomo]") {
  oracles::Rng rng(3);
  const Vector x = rng.gaussian_vec(40);
  const Vector y = rng.gaussian_vec(40);
  const double mx = x.mean(), my = y.mean();
  const double var_direct = (x.array() - mx).square().mean();
  REQUIRE(moment(x, spec_of(MomentKind::var)) == Approx(var_direct).epsilon(1e-13));
  const double cov_direct = ((x.array() - mx) * (y.array() - my)).mean();
  REQUIRE(comoment(x, y, spec_of(MomentKind::cov)) == Approx(cov_direct).epsilon(1e-13));
}

TEST_CASE("self co-moment is the variance, correlation of a linear map is one",
          "[dicomo]") {
  oracles::Rng rng(7);
  const Vector x = rng.gaussian_vec(25);
  REQUIRE(comoment(x, x, spec_of(MomentKind::cov)) ==
          Approx(moment(x, spec_of(MomentKind::var))).epsilon(1e-13));
  const Vector y = 2.5 * x.array() + 1.0;
  REQUIRE(comoment(x, y, spec_of(MomentKind::corr)) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trimmed covariance matches the sort-and-trim oracle", "[dicomo]") {
  const Vector x = vec({1, 2, 3});
  // floor(0.34 * 3) = 1 case with the largest |centered product| is dropped;
  // products are (1, 0, 1), so the kept mean is (0 + 1) / 2.
  REQUIRE(comoment(x, x, spec_of(MomentKind::cov, 0.34)) == Approx(0.5).epsilon(1e-14));
  REQUIRE(oracles::trimmed_cov_brute(x, x, 0.34) == Approx(0.5).epsilon(1e-14));

  oracles::Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector a = rng.gaussian_vec(17);
    const Vector b = rng.gaussian_vec(17);
    const double alpha = rng.uniform(0.0, 0.45);
    REQUIRE(comoment(a, b, spec_of(MomentKind::cov, alpha)) ==
            Approx(oracles::trimmed_cov_brute(a, b, alpha)).margin(1e-13));
  }
}

TEST_CASE("co-moment input validation", "[dicomo]") {
  const Vector x = vec({1, 2, 3});
  const Vector y = vec({1, 2});
  REQUIRE_THROWS_AS(comoment(x, y, spec_of(MomentKind::cov)), data_error);
  const Vector c = vec({5, 5, 5});
  REQUIRE_THROWS_AS(comoment(x, c, spec_of(MomentKind::corr)), data_error);
  REQUIRE_THROWS_AS(moment(x, spec_of(MomentKind::var, 0.5)), invalid_spec);
}

TEST_CASE("co-moment power placement", "[dicomo]") {
  const Vector x = vec({1, 2, 4});
  const Vector y = vec({2, 1, 3});
  const double mx = x.mean(), my = y.mean();
  const Vector dx = x.array() - mx;
  const Vector dy = y.array() - my;

  const double cs1 = (dx.array().square() * dy.array()).mean();
  REQUIRE(comoment(x, y, spec_of(MomentKind::coskew, 0.0, 1)) ==
          Approx(cs1).epsilon(1e-13));
  const double cs2 = (dx.array() * dy.array().square()).mean();
  REQUIRE(comoment(x, y, spec_of(MomentKind::coskew, 0.0, 2)) ==
          Approx(cs2).epsilon(1e-13));
  const double ck22 = (dx.array().square() * dy.array().square()).mean();
  REQUIRE(comoment(x, y, spec_of(MomentKind::cokurt, 0.0, 2)) ==
          Approx(ck22).epsilon(1e-13));
  const double ck31 = (dx.array().cube() * dy.array()).mean();
  REQUIRE(comoment(x, y, spec_of(MomentKind::cokurt, 0.0, 1)) ==
          Approx(ck31).epsilon(1e-13));
  REQUIRE_THROWS_AS(comoment(x, y, spec_of(MomentKind::cokurt, 0.0, 4)), invalid_spec);
}

TEST_CASE("continuum association", "[dicomo]") {
  oracles::Rng rng(17);
  const Vector t = rng.gaussian_vec(30);
  const Vector y = rng.gaussian_vec(30);

  SECTION("alpha 1 is the squared covariance, exactly") {
    const double c = comoment(t, y, spec_of(MomentKind::cov));
    REQUIRE(continuum(t, y, 1.0) == c * c);
  }
  SECTION("constant response gives zero") {
    const Vector c = Vector::Constant(30, 2.0);
    REQUIRE(continuum(t, c, 2.0) == Approx(0.0).margin(1e-15));
  }
  SECTION("direct evaluation at alpha 2") {
    const Vector a = vec({-1, 0, 1});
    REQUIRE(continuum(a, a, 2.0) == Approx(8.0 / 27.0).epsilon(1e-14));
  }
  SECTION("alpha below one is rejected") {
    REQUIRE_THROWS_AS(continuum(t, y, 0.5), invalid_spec);
  }
}

TEST_CASE("capi basis selection and degenerate weights", "[dicomo]") {
  oracles::Rng rng(19);
  const Vector t = rng.gaussian_vec(50);
  const Vector y = 0.7 * t.array() + rng.gaussian_vec(50).array() * 0.5;

  Vector e1 = Vector::Zero(6);
  e1[0] = 1.0;
  const double corr = comoment(t, y, spec_of(MomentKind::corr));
  REQUIRE(capi(t, y, e1) == Approx(corr * corr).epsilon(1e-12));

  REQUIRE(capi(t, y, Vector::Zero(6)) == 0.0);
  REQUIRE_THROWS_AS(capi(t, y, Vector::Ones(3)), invalid_spec);
}

TEST_CASE("capi with uniform weights is near zero under independence", "[dicomo]") {
  oracles::Rng rng(30);
  const Vector t = rng.gaussian_vec(2000);
  const Vector y = rng.gaussian_vec(2000);
  REQUIRE(std::abs(capi(t, y, Vector::Ones(6))) < 0.1);
}

TEST_CASE("distance covariance basics", "[dicomo]") {
  oracles::Rng rng(23);
  const Matrix x = rng.gaussian(12, 2);
  const Matrix y_const = Matrix::Constant(12, 1, 3.0);
  REQUIRE(dcov_sq(x, y_const) == Approx(0.0).margin(1e-14));

  const Vector v = rng.gaussian_vec(15);
  REQUIRE(dcor(v, v) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dcov and mdd match the double-sum oracles", "[dicomo]") {
  oracles::Rng rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 6 + rep % 5;
    const Matrix x = rng.gaussian(n, 2);
    const Matrix y = rng.gaussian(n, 1);
    REQUIRE(dcov_sq(x, y) ==
            Approx(oracles::dcov_sq_double_sum(x, y)).margin(1e-12));
    const Vector yv = y.col(0);
    REQUIRE(mdd_sq(yv, x) ==
            Approx(oracles::mdd_sq_double_sum(yv, x)).margin(1e-12));
  }
}

TEST_CASE("dcov symmetry, homogeneity and permutation invariance", "[dicomo]") {
  oracles::Rng rng(31);
  const Matrix x = rng.gaussian(14, 2);
  const Matrix y = rng.gaussian(14, 3);
  REQUIRE(dcov_sq(x, y) == Approx(dcov_sq(y, x)).margin(1e-14));

  const double a = -1.7;
  REQUIRE(dcov_sq(a * x, y) == Approx(std::abs(a) * dcov_sq(x, y)).epsilon(1e-11));

  std::vector<Index> perm(14);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng.eng);
  Matrix xp(14, 2), yp(14, 3);
  for (Index i = 0; i < 14; ++i) {
    xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    yp.row(i) = y.row(perm[static_cast<std::size_t>(i)]);
  }
  REQUIRE(dcov_sq(xp, yp) == Approx(dcov_sq(x, y)).epsilon(1e-12));
}

TEST_CASE("corr and dcor stay inside their ranges", "[dicomo]") {
  oracles::Rng rng(37);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = 4 + static_cast<Index>(rng.uniform(0, 20));
    const Vector x = rng.gaussian_vec(n);
    const Vector y = rng.gaussian_vec(n);
    const double c = comoment(x, y, spec_of(MomentKind::corr));
    REQUIRE(c >= -1.0 - 1e-10);
    REQUIRE(c <= 1.0 + 1e-10);
    const double d = dcor(x, y);
    REQUIRE(d >= -1e-10);
    REQUIRE(d <= 1.0 + 1e-10);
  }
}

TEST_CASE("mdd degenerate cases", "[dicomo]") {
  oracles::Rng rng(41);
  const Matrix x = rng.gaussian(10, 2);
  const Vector y_const = Vector::Constant(10, 1.5);
  REQUIRE(mdd_sq(y_const, x) == Approx(0.0).margin(1e-14));

  Matrix x_same(10, 2);
  for (Index i = 0; i < 10; ++i) x_same.row(i) << 1.0, -2.0;
  const Vector y = rng.gaussian_vec(10);
  REQUIRE(mdd_sq(y, x_same) == Approx(0.0).margin(1e-14));
  REQUIRE(mdd_sq(y, x) >= -1e-12);
}

TEST_CASE("projection index adapter squares signed statistics", "[dicomo]") {
  oracles::Rng rng(43);
  const Vector t = rng.gaussian_vec(30);
  const Vector y = rng.gaussian_vec(30);

  const auto var_idx = make_projection_index(spec_of(MomentKind::var));
  REQUIRE(var_idx(t, Vector()) == Approx(moment(t, spec_of(MomentKind::var))));

  const auto cov_idx = make_projection_index(spec_of(MomentKind::cov));
  const double c = comoment(t, y, spec_of(MomentKind::cov));
  REQUIRE(cov_idx(t, y) == Approx(c * c).epsilon(1e-13));

  MomentSpec cont = spec_of(MomentKind::continuum);
  cont.continuum_alpha = 1.0;
  const auto cont_idx = make_projection_index(cont);
  REQUIRE(cont_idx(t, y) == cov_idx(t, y));
}
