// Command-line front end: bands, predict, validate, verify.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandgap/harness.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::size_t workers = 0;     // 0: keep config value
  std::vector<double> epsilon; // overrides the config grid when non-empty
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "JSON run configuration")->required();
  cmd->add_option("--out", opt.out_dir, "output directory for CSV files");
  cmd->add_option("--workers", opt.workers, "concurrent per-epsilon jobs");
  cmd->add_option("--epsilon", opt.epsilon, "override the epsilon grid");
}

bandgap::harness::RunConfig load(const Options& opt) {
  auto cfg = bandgap::harness::RunConfig::from_file(opt.config_path);
  if (opt.workers > 0) cfg.solver.workers = opt.workers;
  if (!opt.epsilon.empty()) {
    cfg.epsilon_grid = opt.epsilon;
    for (std::size_t i = 0; i < cfg.epsilon_grid.size(); ++i) {
      const double e = cfg.epsilon_grid[i];
      if (!(e > 0.0 && e < 0.5))
        throw bandgap::ConfigError("--epsilon entries must lie in (0, 0.5)");
      if (i > 0 && e >= cfg.epsilon_grid[i - 1])
        throw bandgap::ConfigError("--epsilon values must be sorted descending");
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band-edge defect-mode toolkit"};
  app.require_subcommand(1);
  Options opt;
  auto* bands = app.add_subcommand("bands", "dispersion curves and the gap table");
  auto* predict = app.add_subcommand("predict", "effective model and predicted eigenvalues");
  auto* validate = app.add_subcommand("validate", "direct solves across the epsilon grid");
  auto* verify = app.add_subcommand("verify", "module invariant suites");
  for (auto* cmd : {bands, predict, validate, verify}) add_common(cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const auto cfg = load(opt);
    std::string path;
    if (bands->parsed()) path = bandgap::harness::cmd_bands(cfg, opt.out_dir);
    if (predict->parsed()) path = bandgap::harness::cmd_predict(cfg, opt.out_dir);
    if (validate->parsed()) path = bandgap::harness::cmd_validate(cfg, opt.out_dir);
    if (verify->parsed()) path = bandgap::harness::cmd_verify(cfg, opt.out_dir);
    std::printf("%s\n", path.c_str());
    return 0;
  } catch (const bandgap::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const bandgap::NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
