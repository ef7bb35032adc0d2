// sgcol: sparse Gauss-Hermite collocation experiments.
//
//   sgcol norms    [--imax 39] [--numax 39] [--out DIR]
//   sgcol counts   --family td|hc --M 2 --wmax 6 [--out DIR]
//   sgcol converge --q 3 --seed 1 [--algo aposteriori] [--desk] [--config FILE] ...
//   sgcol dimsweep --q 2 --seed 1 --M 10,20,40 [--desk] ...
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "sgcol/errors.hpp"
#include "sgcol/experiments.hpp"

namespace {

// Flags shared by all subcommands, kept as strings so that only flags given
// on the command line override the config file.
struct Overrides {
  std::map<std::string, std::string> values;
  std::string config;
  bool desk = false;
  bool emit_plots = false;
  int threads = 0;

  void attach(CLI::App& app) {
    static const char* keys[][2] = {
        {"q", "field decay exponent"},
        {"sigma", "log-diffusion amplitude"},
        {"M", "model dimensions (dimsweep: comma-separated list)"},
        {"mref", "reference dimensions"},
        {"nmc", "Monte Carlo samples"},
        {"seed", "sampling seed"},
        {"nmax", "number of indices"},
        {"buffer", "dimension buffer m_buffer"},
        {"algo", "apriori | aposteriori"},
        {"family", "td | hc"},
        {"wmax", "largest TD/HC budget"},
        {"nx", "spatial intervals"},
        {"out", "output directory"},
    };
    for (const auto& [key, help] : keys) app.add_option("--" + std::string(key), values[key], help);
    app.add_option("--config", config, "key=value configuration file");
    app.add_flag("--desk", desk, "desk-scale defaults (mref 64, nmax 60)");
    app.add_flag("--emit-plots", emit_plots, "write gnuplot scripts next to the CSV files");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  sgcol::ExperimentConfig resolve(const CLI::App& app) const {
    sgcol::ExperimentConfig cfg;
    if (!config.empty()) cfg.load_file(config);
    if (desk) cfg.apply_desk();
    for (const auto& [key, value] : values) {
      if (app.count("--" + key) > 0) cfg.set(key, value);
    }
    cfg.emit_plots = emit_plots;
    sgcol::set_worker_threads(threads);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Gauss-Hermite collocation experiments"};
  app.require_subcommand(1);

  Overrides norms_opts, counts_opts, converge_opts, sweep_opts;
  int imax = 39;
  int numax = 39;
  auto* norms = app.add_subcommand("norms", "tables of ||U_i H_nu|| and ||Delta_i H_nu||");
  norms_opts.attach(*norms);
  norms->add_option("--imax", imax, "largest level i (<= 64)");
  norms->add_option("--numax", numax, "largest degree nu (<= 64)");
  auto* counts = app.add_subcommand("counts", "sparse-grid point counts for TD/HC sets");
  counts_opts.attach(*counts);
  auto* converge = app.add_subcommand("converge", "convergence study on the lognormal testbed");
  converge_opts.attach(*converge);
  auto* sweep = app.add_subcommand("dimsweep", "convergence curves for several dimensions M");
  sweep_opts.attach(*sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::vector<std::filesystem::path> files;
    if (norms->parsed()) {
      const auto cfg = norms_opts.resolve(*norms);
      files = sgcol::cmd_norms(cfg, imax, numax);
    } else if (counts->parsed()) {
      const auto cfg = counts_opts.resolve(*counts);
      cfg.validate(false);
      files = sgcol::cmd_counts(cfg);
    } else if (converge->parsed()) {
      const auto cfg = converge_opts.resolve(*converge);
      files = sgcol::cmd_converge(cfg, std::cout);
    } else if (sweep->parsed()) {
      const auto cfg = sweep_opts.resolve(*sweep);
      files = sgcol::cmd_dimsweep(cfg, std::cout);
    }
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  } catch (const sgcol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const sgcol::ContractError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
