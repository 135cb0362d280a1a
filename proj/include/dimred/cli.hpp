#pragma once

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/csv.hpp"
#include "dimred/jsonio.hpp"
#include "dimred/modelselect.hpp"
#include "dimred/ppdire.hpp"
#include "dimred/preprocess.hpp"
#include "dimred/serialize.hpp"
#include "dimred/sprm.hpp"
#include "dimred/sudire.hpp"
#include "dimred/svgplot.hpp"

// CSV-in / JSON-model / SVG-plot command line workflow. Verbs:
//   fit | predict | plot | cv | preprocess
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

namespace dimred::cli {

using nlohmann::json;

namespace detail {

inline json load_config(const std::string& path) {
  try {
    return parse_json_file(path);
  } catch (const data_error& e) {
    throw invalid_spec(std::string("config: ") + e.what());
  }
}

inline preprocess::CenterMethod parse_center(const std::string& s) {
  using preprocess::CenterMethod;
  if (s == "mean") return CenterMethod::mean;
  if (s == "colmedian" || s == "median") return CenterMethod::colmedian;
  if (s == "spatial_median") return CenterMethod::spatial_median;
  if (s == "kstep_lts") return CenterMethod::kstep_lts;
  if (s == "none") return CenterMethod::none;
  throw invalid_spec("unknown center method '" + s + "'");
}

inline preprocess::ScaleMethod parse_scale(const std::string& s) {
  using preprocess::ScaleMethod;
  if (s == "std" || s == "stddev") return ScaleMethod::stddev;
  if (s == "mad") return ScaleMethod::mad;
  if (s == "tau") return ScaleMethod::tau;
  if (s == "none") return ScaleMethod::none;
  throw invalid_spec("unknown scale method '" + s + "'");
}

inline preprocess::ScalerSpec parse_scaler(const json& j,
                                           preprocess::ScalerSpec fallback) {
  preprocess::ScalerSpec spec = fallback;
  if (j.is_null()) return spec;
  if (j.contains("center")) spec.center = parse_center(j["center"].get<std::string>());
  if (j.contains("scale")) spec.scale = parse_scale(j["scale"].get<std::string>());
  if (j.contains("sample_variance")) spec.sample_variance = j["sample_variance"].get<bool>();
  return spec;
}

inline sprm::RhoSpec parse_rho(const json& j) {
  if (j.is_null()) return sprm::RhoSpec{};
  sprm::RhoSpec rho = serialize_detail::read_rho(j);
  sprm::validate(rho);
  return rho;
}

inline dicomo::MomentSpec parse_index(const json& j) {
  dicomo::MomentSpec spec;
  if (j.is_null()) return spec;
  const std::string kind = j.value("kind", std::string("var"));
  using dicomo::MomentKind;
  if (kind == "var") spec.kind = MomentKind::var;
  else if (kind == "cov") spec.kind = MomentKind::cov;
  else if (kind == "corr") spec.kind = MomentKind::corr;
  else if (kind == "skew") spec.kind = MomentKind::skew;
  else if (kind == "kurt") spec.kind = MomentKind::kurt;
  else if (kind == "coskew") spec.kind = MomentKind::coskew;
  else if (kind == "cokurt") spec.kind = MomentKind::cokurt;
  else if (kind == "continuum") spec.kind = MomentKind::continuum;
  else if (kind == "capi") spec.kind = MomentKind::capi;
  else throw invalid_spec("unknown projection index kind '" + kind + "'");
  if (j.contains("center")) {
    const std::string c = j["center"].get<std::string>();
    if (c == "mean") spec.center = dicomo::CenterKind::mean;
    else if (c == "median") spec.center = dicomo::CenterKind::median;
    else throw invalid_spec("unknown index center '" + c + "'");
  }
  spec.trim_alpha = j.value("trim_alpha", 0.0);
  spec.option = j.value("option", 1);
  spec.continuum_alpha = j.value("alpha", 1.0);
  if (j.contains("capi_weights")) spec.capi_weights = json_to_vector(j["capi_weights"]);
  return spec;
}

inline sudire::SDRMethod parse_sdr_method(const std::string& s) {
  using sudire::SDRMethod;
  if (s == "sir") return SDRMethod::sir;
  if (s == "save") return SDRMethod::save;
  if (s == "dr") return SDRMethod::dr;
  if (s == "phd") return SDRMethod::phd;
  if (s == "iht") return SDRMethod::iht;
  if (s == "dcov-sdr" || s == "dcov_sdr") return SDRMethod::dcov_sdr;
  if (s == "mdd-sdr" || s == "mdd_sdr") return SDRMethod::mdd_sdr;
  throw invalid_spec("unknown sudire method '" + s + "'");
}

struct Dataset {
  Matrix x;
  Vector y;  // empty when no target
  std::vector<std::string> feature_names;
  std::string target_name;
};

inline Dataset split_dataset(const DataMatrix& dm, const json& config) {
  Dataset ds;
  Matrix values = dm.values;
  if (config.contains("rows")) {
    const auto& r = config["rows"];
    const Index from = r.value("from", 1);
    const Index to = r.value("to", static_cast<Index>(values.rows()));
    if (from < 1 || to > values.rows() || from > to)
      throw invalid_spec("rows: range [" + std::to_string(from) + ", " +
                         std::to_string(to) + "] out of bounds");
    values = values.middleRows(from - 1, to - from + 1).eval();
  }
  const std::string target = config.value("target", std::string());
  ds.target_name = target;
  if (target.empty()) {
    ds.x = values;
    ds.feature_names = dm.column_names;
    return ds;
  }
  const Index tcol = dm.col_index(target);
  if (tcol < 0) throw data_error("target column '" + target + "' not found in CSV");
  ds.y = values.col(tcol);
  ds.x.resize(values.rows(), values.cols() - 1);
  Index k = 0;
  for (Index j = 0; j < values.cols(); ++j) {
    if (j == tcol) continue;
    ds.x.col(k) = values.col(j);
    ds.feature_names.push_back(dm.column_names[static_cast<std::size_t>(j)]);
    ++k;
  }
  return ds;
}

// Columns selected by name for prediction; the target column may be present
// and is ignored.
inline Matrix select_features(const DataMatrix& dm, const std::vector<std::string>& names) {
  Matrix x(dm.values.rows(), static_cast<Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    const Index col = dm.col_index(names[j]);
    if (col < 0)
      throw data_error("prediction data: missing feature column '" + names[j] +
                       "' (column count/names must match the fitted model)");
    x.col(static_cast<Index>(j)) = dm.values.col(col);
  }
  return x;
}

inline ModelArtifact fit_artifact(const Dataset& ds, const json& config,
                                  std::uint64_t seed) {
  const std::string estimator = config.value("estimator", std::string());
  if (estimator.empty()) throw invalid_spec("config: missing 'estimator'");

  ModelArtifact a;
  a.estimator = estimator;
  a.spec_echo = config;
  a.feature_names = ds.feature_names;
  a.target_name = ds.target_name;
  a.seed = seed;
  a.store_scores = config.value("store_scores", true);

  if (estimator == "ppdire") {
    ppdire::PPSpec spec;
    spec.index = dicomo::make_projection_index(parse_index(config.value("index", json())));
    spec.n_components = config.value("n_components", 1);
    const std::string opt = config.value("optimizer", std::string("grid"));
    if (opt == "grid") spec.optimizer = ppdire::OptimizerKind::grid;
    else if (opt == "nlp") spec.optimizer = ppdire::OptimizerKind::nlp;
    else throw invalid_spec("unknown optimizer '" + opt + "'");
    if (config.contains("regression")) {
      const auto& r = config["regression"];
      const std::string m = r.value("method", std::string("ols"));
      if (m == "ols") spec.regression = ppdire::RegressionMethod::ols;
      else if (m == "quantile") spec.regression = ppdire::RegressionMethod::quantile;
      else if (m == "rm") spec.regression = ppdire::RegressionMethod::rm;
      else throw invalid_spec("unknown regression method '" + m + "'");
      spec.quantile_tau = r.value("tau", 0.5);
      if (r.contains("rho")) spec.rho = parse_rho(r["rho"]);
    }
    spec.scaler = parse_scaler(config.value("scaler", json()),
                               {preprocess::CenterMethod::mean,
                                preprocess::ScaleMethod::none});
    a.proj = ppdire::fit_pp(ds.x, ds.y, spec);
  } else if (estimator == "snipls") {
    if (ds.y.size() == 0) throw invalid_spec("snipls requires a target column");
    const auto scaler = parse_scaler(config.value("scaler", json()),
                                     {preprocess::CenterMethod::mean,
                                      preprocess::ScaleMethod::none});
    const sprm::SniplsModel m = sprm::snipls_fit(
        ds.x, ds.y, config.value("n_components", 1), config.value("lambda", 0.0), scaler);
    a.proj = m;
    a.active_set = m.active_set;
    a.truncated = m.truncated;
  } else if (estimator == "sprm") {
    if (ds.y.size() == 0) throw invalid_spec("sprm requires a target column");
    sprm::SprmSpec spec;
    spec.h = config.contains("h") ? config["h"].get<int>()
                                  : config.value("n_components", 1);
    spec.lambda = config.value("lambda", 0.0);
    spec.rho = parse_rho(config.value("rho", json()));
    spec.scaler = parse_scaler(config.value("scaler", json()), spec.scaler);
    spec.max_iter = config.value("max_iter", 100);
    spec.tol = config.value("tol", 1e-6);
    const sprm::SprmModel m = sprm::sprm_fit(ds.x, ds.y, spec);
    a.proj = m;
    a.active_set = m.active_set;
    a.truncated = m.truncated;
    a.caseweights = m.caseweights;
    a.sigma_hat = m.sigma_hat;
    a.rho = spec.rho;
    a.has_rho = true;
    a.iterations = m.iterations;
    a.converged = m.converged;
  } else if (estimator == "rm") {
    if (ds.y.size() == 0) throw invalid_spec("rm requires a target column");
    const sprm::RhoSpec rho = parse_rho(config.value("rho", json()));
    sprm::RMOptions opts;
    opts.max_iter = config.value("max_iter", 100);
    opts.tol = config.value("tol", 1e-6);
    const sprm::RMModel m = sprm::rm_fit(ds.x, ds.y, rho, opts);
    a.rm_beta = m.beta;
    a.rm_intercept = m.intercept;
    a.sigma_hat = m.sigma_hat;
    a.caseweights = m.caseweights;
    a.rho = rho;
    a.has_rho = true;
    a.iterations = m.iterations;
    a.converged = m.converged;
  } else if (estimator == "sudire") {
    if (ds.y.size() == 0) throw invalid_spec("sudire requires a target column");
    sudire::SDRSpec spec;
    spec.method = parse_sdr_method(config.value("method", std::string("sir")));
    spec.h = config.value("h", 1);
    spec.n_slices = config.value("n_slices", 10);
    spec.max_iter = config.value("max_iter", 200);
    a.sdr = sudire::fit_sdr(ds.x, ds.y, spec);
    a.converged = a.sdr.converged;
  } else {
    throw invalid_spec("unknown estimator '" + estimator + "'");
  }

  if (ds.y.size() > 0 && a.store_scores) {
    a.y_train = ds.y;
    if (a.is_projection_family() && a.proj.has_regression) {
      a.fitted = predict(a.proj, ds.x);
    } else if (estimator == "rm") {
      a.fitted = (ds.x * a.rm_beta).array() + a.rm_intercept;
    }
  }
  return a;
}

inline std::pair<double, double> class_cutoffs(const json& spec_echo) {
  double moderate = sprm::kDefaultModerateCut;
  double harsh = sprm::kDefaultHarshCut;
  if (spec_echo.contains("cutoffs") && spec_echo["cutoffs"].is_array() &&
      spec_echo["cutoffs"].size() == 2) {
    moderate = spec_echo["cutoffs"][0].get<double>();
    harsh = spec_echo["cutoffs"][1].get<double>();
  }
  return {moderate, harsh};
}

inline std::vector<int> classes_of(const Vector& weights, double moderate, double harsh) {
  std::vector<int> cls(static_cast<std::size_t>(weights.size()), 0);
  if (weights.size() == 0) return cls;
  const auto labels = sprm::caseweight_classes(weights, moderate, harsh);
  for (std::size_t i = 0; i < labels.size(); ++i) cls[i] = static_cast<int>(labels[i]);
  return cls;
}

}  // namespace detail

inline void cmd_fit(const std::string& data_path, const std::string& config_path,
                    const std::string& out_path,
                    std::optional<std::uint64_t> seed_override = {}) {
  const json config = detail::load_config(config_path);
  const DataMatrix dm = read_csv(data_path);
  const detail::Dataset ds = detail::split_dataset(dm, config);
  check_finite(ds.x, "fit data");
  const std::uint64_t seed =
      seed_override ? *seed_override : config.value("seed", std::uint64_t{0});
  const ModelArtifact artifact = detail::fit_artifact(ds, config, seed);
  save_model(out_path, artifact);
}

inline void cmd_predict(const std::string& model_path, const std::string& data_path,
                        const std::string& out_path) {
  const ModelArtifact a = load_model(model_path);
  const DataMatrix dm = read_csv(data_path);
  const Matrix x = detail::select_features(dm, a.feature_names);
  const Matrix pred = artifact_predict(a, x);

  DataMatrix out;
  out.values = pred;
  if (pred.cols() == 1 && (a.estimator == "rm" || a.proj.has_regression)) {
    out.column_names = {"prediction"};
  } else {
    for (Index j = 0; j < pred.cols(); ++j)
      out.column_names.push_back("t" + std::to_string(j + 1));
  }
  write_csv(out_path, out);
}

inline void cmd_plot(const std::string& model_path, const std::string& kind,
                     const std::string& data_path, const std::string& out_path) {
  const ModelArtifact a = load_model(model_path);
  const auto [cut_moderate, cut_harsh] = detail::class_cutoffs(a.spec_echo);

  std::vector<svgplot::Point> points;
  svgplot::PlotSpec plot;

  const bool have_test = !data_path.empty();
  DataMatrix test_dm;
  Matrix test_x;
  Vector test_y;
  if (have_test) {
    test_dm = read_csv(data_path);
    test_x = detail::select_features(test_dm, a.feature_names);
    if (!a.target_name.empty()) {
      const Index tcol = test_dm.col_index(a.target_name);
      if (tcol >= 0) test_y = test_dm.values.col(tcol);
    }
  }

  if (kind == "projection") {
    Matrix t;
    if (a.is_projection_family()) {
      if (a.proj.T.size() == 0)
        throw invalid_spec("projection plot: model was saved without scores");
      t = a.proj.T;
    } else if (a.estimator == "sudire") {
      throw invalid_spec("projection plot: refit with stored training data or use "
                         "predict to export sudire scores");
    } else {
      throw invalid_spec("projection plot: model has no scores");
    }
    const std::vector<int> cls =
        detail::classes_of(a.caseweights, cut_moderate, cut_harsh);
    const bool two_d = t.cols() >= 2;
    for (Index i = 0; i < t.rows(); ++i) {
      svgplot::Point p;
      p.x = two_d ? t(i, 0) : static_cast<double>(i + 1);
      p.y = two_d ? t(i, 1) : t(i, 0);
      p.cls = a.caseweights.size() > 0 ? cls[static_cast<std::size_t>(i)] : 0;
      points.push_back(p);
    }
    if (have_test && a.is_projection_family()) {
      const Matrix tt = transform(a.proj, test_x);
      for (Index i = 0; i < tt.rows(); ++i) {
        svgplot::Point p;
        p.x = two_d ? tt(i, 0) : static_cast<double>(t.rows() + i + 1);
        p.y = two_d ? tt(i, 1) : tt(i, 0);
        p.test = true;
        points.push_back(p);
      }
    }
    plot.title = "Score plot";
    plot.xlabel = two_d ? "t1" : "case";
    plot.ylabel = two_d ? "t2" : "t1";
  } else if (kind == "parity") {
    if (a.y_train.size() == 0 || a.fitted.size() == 0)
      throw invalid_spec("parity plot: model was saved without fitted values "
                         "(store_scores disabled or unsupervised fit)");
    const std::vector<int> cls =
        detail::classes_of(a.caseweights, cut_moderate, cut_harsh);
    for (Index i = 0; i < a.y_train.size(); ++i) {
      svgplot::Point p;
      p.x = a.y_train[i];
      p.y = a.fitted[i];
      p.cls = a.caseweights.size() > 0 ? cls[static_cast<std::size_t>(i)] : 0;
      points.push_back(p);
    }
    if (have_test) {
      if (test_y.size() == 0)
        throw data_error("parity plot: test data lacks the target column '" +
                         a.target_name + "'");
      const Matrix pred = artifact_predict(a, test_x);
      Vector w_test;
      if (a.estimator == "sprm" && a.has_rho) {
        sprm::SprmModel m;
        static_cast<ProjectionModel&>(m) = a.proj;
        w_test = sprm::caseweights_for(m, a.rho, test_x, test_y, a.sigma_hat);
      }
      const std::vector<int> tcls = detail::classes_of(w_test, cut_moderate, cut_harsh);
      for (Index i = 0; i < test_y.size(); ++i) {
        svgplot::Point p;
        p.x = test_y[i];
        p.y = pred(i, 0);
        p.test = true;
        p.cls = w_test.size() > 0 ? tcls[static_cast<std::size_t>(i)] : 0;
        points.push_back(p);
      }
    }
    plot.title = "Parity plot";
    plot.xlabel = "observed y";
    plot.ylabel = "predicted y";
    plot.identity_line = true;
  } else if (kind == "caseweights") {
    if (a.caseweights.size() == 0)
      throw invalid_spec("caseweight plot: model has no caseweights "
                         "(not a robust fit)");
    const std::vector<int> cls =
        detail::classes_of(a.caseweights, cut_moderate, cut_harsh);
    for (Index i = 0; i < a.caseweights.size(); ++i) {
      svgplot::Point p;
      p.x = static_cast<double>(i + 1);
      p.y = a.caseweights[i];
      p.cls = cls[static_cast<std::size_t>(i)];
      points.push_back(p);
    }
    plot.title = "Caseweights";
    plot.xlabel = "case";
    plot.ylabel = "weight";
    plot.hlines = {cut_moderate, cut_harsh};
    plot.use_y_hint = true;
    plot.y_min_hint = 0.0;
    plot.y_max_hint = 1.0;
  } else {
    throw invalid_spec("unknown plot kind '" + kind +
                       "' (expected projection | parity | caseweights)");
  }

  write_text_file(out_path, svgplot::scatter_svg(points, plot));
}

inline void cmd_cv(const std::string& data_path, const std::string& config_path,
                   const std::string& out_path,
                   std::optional<std::uint64_t> seed_override = {}) {
  const json config = detail::load_config(config_path);
  if (!config.contains("cv")) throw invalid_spec("config: missing 'cv' section");
  const json& cv = config["cv"];
  if (!cv.contains("grid") || !cv["grid"].is_array() || cv["grid"].empty())
    throw invalid_spec("config: cv.grid must be a non-empty array");

  const DataMatrix dm = read_csv(data_path);
  const detail::Dataset ds = detail::split_dataset(dm, config);
  if (ds.y.size() == 0) throw invalid_spec("cv requires a target column");

  const std::uint64_t seed =
      seed_override ? *seed_override : config.value("seed", std::uint64_t{0});

  modelselect::CVPlan plan;
  plan.n = ds.x.rows();
  plan.k = cv.value("folds", 5);
  plan.seed = seed;
  plan.shuffle = cv.value("shuffle", true);

  const std::string scoring_name = cv.value("scoring", std::string("mse"));
  modelselect::Scoring scoring;
  if (scoring_name == "mse") scoring = modelselect::Scoring::mse;
  else if (scoring_name == "mae") scoring = modelselect::Scoring::mae;
  else if (scoring_name == "robust") scoring = modelselect::Scoring::robust;
  else throw invalid_spec("unknown scoring rule '" + scoring_name + "'");

  std::vector<modelselect::GridCell> cells;
  std::vector<json> cell_params;
  for (const auto& cell : cv["grid"]) {
    json merged = config;
    merged.erase("cv");
    for (auto it = cell.begin(); it != cell.end(); ++it) merged[it.key()] = it.value();
    cell_params.push_back(cell);
    modelselect::GridCell gc;
    gc.name = cell.dump();
    gc.fit = [merged, &ds](const Matrix& xtr, const Vector& ytr) {
      detail::Dataset sub;
      sub.x = xtr;
      sub.y = ytr;
      sub.feature_names = ds.feature_names;
      sub.target_name = ds.target_name;
      const ModelArtifact a = detail::fit_artifact(sub, merged, 0);
      modelselect::CVModel m;
      m.predict = [a](const Matrix& xte) { return Vector(artifact_predict(a, xte).col(0)); };
      if (a.has_rho && a.sigma_hat > 0.0) {
        m.sigma_hat = a.sigma_hat;
        m.rho = a.rho;
      }
      return m;
    };
    cells.push_back(std::move(gc));
  }

  const modelselect::GridSearchResult result =
      modelselect::grid_search(cells, ds.x, ds.y, plan, scoring);

  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("scoring", scoring_name);
  w.kv("folds", plan.k);
  w.kv("seed", seed);
  w.kv("shuffle", plan.shuffle);
  w.key("cells").begin_array();
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& cr = result.cells[i];
    w.begin_object();
    w.kv("params", cell_params[i].dump());
    w.key("fold_scores").begin_array();
    for (double s : cr.fold_scores) {
      if (std::isnan(s)) w.null_value();
      else w.value(s);
    }
    w.end_array();
    w.key("fold_errors").begin_array();
    for (const auto& e : cr.fold_errors) w.value(e);
    w.end_array();
    if (cr.all_failed) {
      w.key("mean_score").null_value();
      w.kv("all_failed", true);
    } else {
      w.kv("mean_score", cr.mean_score);
      w.kv("all_failed", false);
    }
    w.end_object();
  }
  w.end_array();
  w.key("best").begin_object();
  w.kv("index", result.best_index);
  w.kv("params", cell_params[static_cast<std::size_t>(result.best_index)].dump());
  w.kv("mean_score", result.cells[static_cast<std::size_t>(result.best_index)].mean_score);
  w.end_object();
  w.end_object();
  write_text_file(out_path, w.str() + "\n");
}

inline void cmd_preprocess(const std::string& data_path, const std::string& config_path,
                           const std::string& out_path) {
  const json config = detail::load_config(config_path);
  if (!config.contains("preprocess"))
    throw invalid_spec("config: missing 'preprocess' section");
  const json& pp = config["preprocess"];
  const DataMatrix dm = read_csv(data_path);
  check_finite(dm.values, "preprocess data");

  Matrix values = dm.values;
  if (pp.contains("scaler")) {
    const auto spec = detail::parse_scaler(pp["scaler"], {});
    const auto fitted = preprocess::fit_scaler(values, spec);
    values = preprocess::transform(fitted, values);
  }
  if (pp.contains("sign")) {
    const json& sj = pp["sign"];
    preprocess::SignSpec spec;
    const std::string fn = sj.value("radial", std::string("ss"));
    using preprocess::RadialFn;
    if (fn == "ss") spec.fn = RadialFn::ss;
    else if (fn == "quadratic" || fn == "quadratic_radial") spec.fn = RadialFn::quadratic_radial;
    else if (fn == "ball") spec.fn = RadialFn::ball;
    else if (fn == "shell") spec.fn = RadialFn::shell;
    else if (fn == "winsor") spec.fn = RadialFn::winsor;
    else if (fn == "lr") spec.fn = RadialFn::lr;
    else throw invalid_spec("unknown radial function '" + fn + "'");
    if (sj.contains("cutoffs") && sj["cutoffs"].is_array()) {
      const auto& c = sj["cutoffs"];
      if (c.size() >= 1) spec.r1 = c[0].get<double>();
      if (c.size() >= 2) spec.r2 = c[1].get<double>();
    }
    if (sj.contains("centering"))
      spec.centering = detail::parse_scaler(sj["centering"],
                                            {preprocess::CenterMethod::spatial_median,
                                             preprocess::ScaleMethod::none});
    values = preprocess::gen_spatial_sign(values, spec);
  }

  DataMatrix out;
  out.values = values;
  out.column_names = dm.column_names;
  write_csv(out_path, out);
}

// Maps library exceptions onto the documented exit codes, printing one
// diagnostic line on stderr.
template <class F>
inline int guarded(F&& fn) {
  try {
    fn();
    return 0;
  } catch (const invalid_spec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace dimred::cli
