#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dimred/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dimred: projection pursuit, sufficient dimension reduction and "
               "sparse robust M estimation"};
  app.require_subcommand(1);

  std::string data, config, model, out, kind;
  std::optional<std::uint64_t> seed;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (overrides the config)");
  };

  CLI::App* fit = app.add_subcommand("fit", "fit a model from CSV data");
  fit->add_option("--data", data, "input CSV with header row")->required();
  fit->add_option("--config", config, "JSON estimator configuration")->required();
  fit->add_option("--out", out, "output model JSON path")->required();
  add_seed(fit);

  CLI::App* predict = app.add_subcommand("predict", "predict with a fitted model");
  predict->add_option("--model", model, "model JSON path")->required();
  predict->add_option("--data", data, "input CSV")->required();
  predict->add_option("--out", out, "output predictions CSV")->required();

  CLI::App* plot = app.add_subcommand("plot", "render an SVG plot of a fitted model");
  plot->add_option("--model", model, "model JSON path")->required();
  plot->add_option("--kind", kind, "projection | parity | caseweights")->required();
  plot->add_option("--data", data, "optional test CSV");
  plot->add_option("--out", out, "output SVG path")->required();

  CLI::App* cv = app.add_subcommand("cv", "cross-validated grid search");
  cv->add_option("--data", data, "input CSV")->required();
  cv->add_option("--config", config, "JSON configuration with a cv section")->required();
  cv->add_option("--out", out, "output report JSON path")->required();
  add_seed(cv);

  CLI::App* prep = app.add_subcommand("preprocess", "standardize / sign-transform a CSV");
  prep->add_option("--data", data, "input CSV")->required();
  prep->add_option("--config", config, "JSON configuration with a preprocess section")->required();
  prep->add_option("--out", out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }

  using namespace dimred::cli;
  if (fit->parsed()) return guarded([&] { cmd_fit(data, config, out, seed); });
  if (predict->parsed()) return guarded([&] { cmd_predict(model, data, out); });
  if (plot->parsed()) return guarded([&] { cmd_plot(model, kind, data, out); });
  if (cv->parsed()) return guarded([&] { cmd_cv(data, config, out, seed); });
  if (prep->parsed()) return guarded([&] { cmd_preprocess(data, config, out); });
  return 1;
}
