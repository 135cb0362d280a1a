#pragma once

#include <string>
#include <vector>

#include "dimred/core.hpp"
#include "dimred/jsonio.hpp"
#include "dimred/model.hpp"
#include "dimred/sprm.hpp"
#include "dimred/sudire.hpp"

// Fitted-model persistence. The artifact is a single JSON document with fixed
// key order and 17-significant-digit numbers, so save -> load -> predict is
// bit-identical to the in-memory prediction and repeated runs produce
// byte-identical files.

namespace dimred {

inline constexpr int kArtifactSchemaVersion = 1;

struct ModelArtifact {
  std::string estimator;  // "ppdire" | "snipls" | "sprm" | "rm" | "sudire"
  nlohmann::json spec_echo;
  std::vector<std::string> feature_names;
  std::string target_name;
  std::uint64_t seed = 0;
  bool store_scores = true;

  // Projection-family content (ppdire / snipls / sprm).
  ProjectionModel proj;
  std::vector<Index> active_set;
  bool truncated = false;

  // Robust content (rm / sprm).
  Vector caseweights;
  double sigma_hat = 0.0;
  sprm::RhoSpec rho{};
  bool has_rho = false;

  // rm content.
  Vector rm_beta;
  double rm_intercept = 0.0;

  // Training response and fitted values (kept when store_scores is on) so
  // parity plots are self-contained.
  Vector y_train;
  Vector fitted;

  // sudire content.
  sudire::SDRModel sdr;

  int iterations = 0;
  bool converged = true;

  bool is_projection_family() const {
    return estimator == "ppdire" || estimator == "snipls" || estimator == "sprm";
  }
};

namespace serialize_detail {

inline void write_rho(JsonWriter& w, const sprm::RhoSpec& rho) {
  w.begin_object();
  switch (rho.family) {
    case sprm::RhoFamily::fair:
      w.kv("family", "fair").kv("c", rho.fair_c);
      break;
    case sprm::RhoFamily::huber:
      w.kv("family", "huber").kv("c", rho.huber_c);
      break;
    case sprm::RhoFamily::hampel:
      w.kv("family", "hampel").kv("a", rho.hampel_a).kv("b", rho.hampel_b).kv("c", rho.hampel_c);
      break;
    case sprm::RhoFamily::ls:
      w.kv("family", "ls");
      break;
  }
  w.end_object();
}

inline sprm::RhoSpec read_rho(const nlohmann::json& j) {
  sprm::RhoSpec rho;
  const std::string family = j.at("family").get<std::string>();
  if (family == "fair") {
    rho.family = sprm::RhoFamily::fair;
    if (j.contains("c")) rho.fair_c = j["c"].get<double>();
  } else if (family == "huber") {
    rho.family = sprm::RhoFamily::huber;
    if (j.contains("c")) rho.huber_c = j["c"].get<double>();
  } else if (family == "hampel") {
    rho.family = sprm::RhoFamily::hampel;
    if (j.contains("a")) rho.hampel_a = j["a"].get<double>();
    if (j.contains("b")) rho.hampel_b = j["b"].get<double>();
    if (j.contains("c")) rho.hampel_c = j["c"].get<double>();
  } else if (family == "ls") {
    rho.family = sprm::RhoFamily::ls;
  } else {
    throw data_error("model artifact: unknown rho family '" + family + "'");
  }
  return rho;
}

}  // namespace serialize_detail

inline std::string artifact_to_json(const ModelArtifact& a) {
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", kArtifactSchemaVersion);
  w.kv("estimator", a.estimator);
  // Spec echo: round-trip the parsed config compactly (sorted keys, stable).
  w.key("spec");
  w.begin_object();
  {
    // nlohmann::json iterates objects in sorted key order, which is stable.
    std::function<void(const nlohmann::json&)> emit = [&](const nlohmann::json& j) {
      if (j.is_object()) {
        w.begin_object();
        for (auto it = j.begin(); it != j.end(); ++it) {
          w.key(it.key());
          emit(it.value());
        }
        w.end_object();
      } else if (j.is_array()) {
        w.begin_array();
        for (const auto& v : j) emit(v);
        w.end_array();
      } else if (j.is_string()) {
        w.value(j.get<std::string>());
      } else if (j.is_boolean()) {
        w.value(j.get<bool>());
      } else if (j.is_number_integer()) {
        w.value(j.get<std::int64_t>());
      } else if (j.is_number()) {
        w.value(j.get<double>());
      } else {
        w.null_value();
      }
    };
    for (auto it = a.spec_echo.begin(); it != a.spec_echo.end(); ++it) {
      w.key(it.key());
      emit(it.value());
    }
  }
  w.end_object();

  w.key("data").begin_object();
  w.key("features").begin_array();
  for (const auto& f : a.feature_names) w.value(f);
  w.end_array();
  w.kv("target", a.target_name);
  w.kv("seed", a.seed);
  w.end_object();

  w.key("model").begin_object();
  if (a.is_projection_family()) {
    w.matrix_field("W", a.proj.W);
    w.matrix_field("P", a.proj.P);
    w.matrix_field("R", a.proj.R);
    if (a.store_scores) w.matrix_field("T", a.proj.T);
    w.vector_field("gamma", a.proj.gamma);
    w.kv("intercept", a.proj.intercept);
    w.vector_field("beta", a.proj.beta);
    w.vector_field("mu", a.proj.scaler.mu);
    w.vector_field("sigma", a.proj.scaler.sigma);
    w.key("index_values").begin_array();
    for (double v : a.proj.index_values) w.value(v);
    w.end_array();
    w.kv("has_regression", a.proj.has_regression);
    w.key("active_set").begin_array();
    for (Index i : a.active_set) w.value(static_cast<std::int64_t>(i));
    w.end_array();
    w.kv("truncated", a.truncated);
    if (a.caseweights.size() > 0) w.vector_field("caseweights", a.caseweights);
    if (a.sigma_hat > 0.0) w.kv("sigma_hat", a.sigma_hat);
    if (a.has_rho) {
      w.key("rho");
      serialize_detail::write_rho(w, a.rho);
    }
  } else if (a.estimator == "rm") {
    w.vector_field("beta", a.rm_beta);
    w.kv("intercept", a.rm_intercept);
    w.kv("sigma_hat", a.sigma_hat);
    w.vector_field("caseweights", a.caseweights);
    w.key("rho");
    serialize_detail::write_rho(w, a.rho);
  } else if (a.estimator == "sudire") {
    w.matrix_field("B", a.sdr.B);
    w.vector_field("mu", a.sdr.mu);
    w.kv("criterion", a.sdr.criterion);
    w.key("eigenvalues").begin_array();
    for (double v : a.sdr.eigenvalues) w.value(v);
    w.end_array();
    w.kv("warm_start", a.sdr.warm_start);
    w.kv("truncated", a.sdr.truncated);
  } else {
    throw invalid_spec("artifact_to_json: unknown estimator '" + a.estimator + "'");
  }
  w.end_object();

  if (a.y_train.size() > 0) {
    w.key("train").begin_object();
    w.vector_field("y", a.y_train);
    if (a.fitted.size() > 0) w.vector_field("fitted", a.fitted);
    w.end_object();
  }

  w.key("diagnostics").begin_object();
  w.kv("iterations", a.iterations);
  w.kv("converged", a.converged);
  w.end_object();

  w.end_object();
  return w.str() + "\n";
}

inline void save_model(const std::string& path, const ModelArtifact& a) {
  write_text_file(path, artifact_to_json(a));
}

inline ModelArtifact load_model(const std::string& path) {
  const nlohmann::json j = parse_json_file(path);
  ModelArtifact a;
  const int version = j.at("schema_version").get<int>();
  if (version != kArtifactSchemaVersion)
    throw data_error("model artifact: schema version " + std::to_string(version) +
                     " does not match expected " + std::to_string(kArtifactSchemaVersion));
  a.estimator = j.at("estimator").get<std::string>();
  a.spec_echo = j.value("spec", nlohmann::json::object());
  const auto& data = j.at("data");
  for (const auto& f : data.at("features")) a.feature_names.push_back(f.get<std::string>());
  a.target_name = data.value("target", std::string());
  a.seed = data.value("seed", std::uint64_t{0});

  const auto& m = j.at("model");
  if (a.is_projection_family()) {
    a.proj.W = json_to_matrix(m.at("W"));
    a.proj.P = json_to_matrix(m.at("P"));
    a.proj.R = json_to_matrix(m.at("R"));
    if (m.contains("T")) a.proj.T = json_to_matrix(m.at("T"));
    a.store_scores = m.contains("T");
    a.proj.gamma = json_to_vector(m.at("gamma"));
    a.proj.intercept = m.at("intercept").get<double>();
    a.proj.beta = json_to_vector(m.at("beta"));
    a.proj.scaler.mu = json_to_vector(m.at("mu"));
    a.proj.scaler.sigma = json_to_vector(m.at("sigma"));
    for (const auto& v : m.at("index_values")) a.proj.index_values.push_back(v.get<double>());
    a.proj.has_regression = m.at("has_regression").get<bool>();
    for (const auto& v : m.at("active_set")) a.active_set.push_back(v.get<Index>());
    a.truncated = m.value("truncated", false);
    if (m.contains("caseweights")) a.caseweights = json_to_vector(m.at("caseweights"));
    a.sigma_hat = m.value("sigma_hat", 0.0);
    if (m.contains("rho")) {
      a.rho = serialize_detail::read_rho(m.at("rho"));
      a.has_rho = true;
    }
  } else if (a.estimator == "rm") {
    a.rm_beta = json_to_vector(m.at("beta"));
    a.rm_intercept = m.at("intercept").get<double>();
    a.sigma_hat = m.at("sigma_hat").get<double>();
    a.caseweights = json_to_vector(m.at("caseweights"));
    a.rho = serialize_detail::read_rho(m.at("rho"));
    a.has_rho = true;
  } else if (a.estimator == "sudire") {
    a.sdr.B = json_to_matrix(m.at("B"));
    a.sdr.mu = json_to_vector(m.at("mu"));
    a.sdr.criterion = m.value("criterion", 0.0);
    if (m.contains("eigenvalues"))
      for (const auto& v : m.at("eigenvalues")) a.sdr.eigenvalues.push_back(v.get<double>());
    a.sdr.warm_start = m.value("warm_start", std::string());
    a.sdr.truncated = m.value("truncated", false);
  } else {
    throw data_error("model artifact: unknown estimator '" + a.estimator + "'");
  }

  if (j.contains("train")) {
    const auto& t = j["train"];
    if (t.contains("y")) a.y_train = json_to_vector(t["y"]);
    if (t.contains("fitted")) a.fitted = json_to_vector(t["fitted"]);
  }

  const auto& d = j.value("diagnostics", nlohmann::json::object());
  a.iterations = d.value("iterations", 0);
  a.converged = d.value("converged", true);
  return a;
}

// Predictions from a loaded artifact. Projection-family and rm artifacts give
// one response column; sudire artifacts give the h score columns.
inline Matrix artifact_predict(const ModelArtifact& a, const Eigen::Ref<const Matrix>& x) {
  if (a.is_projection_family()) {
    if (!a.proj.has_regression) return transform(a.proj, x);
    return predict(a.proj, x);
  }
  if (a.estimator == "rm") {
    if (x.cols() != a.rm_beta.size())
      throw data_error("predict: column count mismatch with fitted model");
    return Matrix((x * a.rm_beta).array() + a.rm_intercept);
  }
  if (a.estimator == "sudire") {
    return sudire::transform(a.sdr, x);
  }
  throw data_error("predict: unknown estimator '" + a.estimator + "'");
}

}  // namespace dimred
