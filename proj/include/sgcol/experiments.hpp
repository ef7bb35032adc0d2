#pragma once

// Experiment drivers behind the `sgcol` command line tool: norm tables,
// point-count tables, convergence studies with Monte Carlo error estimation
// against a higher-dimensional reference, and dimension sweeps.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgcol/adaptive.hpp"
#include "sgcol/collocation.hpp"
#include "sgcol/lognormal.hpp"

namespace sgcol {

enum class Algorithm { apriori, aposteriori };
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

struct ExperimentConfig {
  double q = 2.0;
  double sigma = 0.1;
  int M = 0;        // model dimensions; 0 means "same as mref"
  int mref = 640;   // reference dimensions
  int nmc = 1000;
  std::optional<std::uint64_t> seed;
  int nmax = 200;
  int buffer = 5;
  int nx = 1024;
  Algorithm algo = Algorithm::aposteriori;
  std::string family = "td";
  int wmax = 6;
  std::vector<int> sweep;  // M values for dimsweep
  std::filesystem::path out = ".";
  bool emit_plots = false;

  /// Desk-scale proxy: mref = 64, nmax = 60, M capped at 64.
  void apply_desk();
  /// Sets one key from a config file or flag ("q", "sigma", "M", "mref", "nmc",
  /// "seed", "nmax", "buffer", "nx", "algo", "family", "wmax", "out"). Throws ConfigError.
  void set(const std::string& key, const std::string& value);
  /// Flat key=value file; '#' starts a comment.
  void load_file(const std::filesystem::path& path);
  /// Throws ConfigError; `need_seed` for convergence runs.
  void validate(bool need_seed) const;
  int model_dims() const { return M > 0 ? M : mref; }
};

/// "%.17g"
std::string format_double(double v);

/// Monte Carlo estimate of E ||u_ref(xi) - v(xi)||_{H^1_0} over fixed samples
/// drawn from the mref-dimensional standard Gaussian.
class MonteCarloError {
 public:
  MonteCarloError(const FieldConfig& reference_field, int nmc, std::uint64_t seed);

  double operator()(const std::function<Vector(std::span<const double>)>& approx) const;

  const std::vector<std::vector<double>>& samples() const noexcept { return samples_; }
  const std::vector<SpatialFunction>& reference() const noexcept { return reference_; }

 private:
  std::vector<std::vector<double>> samples_;
  std::vector<SpatialFunction> reference_;
};

struct RateFit {
  std::string measure;  // "indices", "grid", "extended"
  double rate = 0.0;    // -slope of log(error) vs log(measure)
  double intercept = 0.0;
  std::size_t first_n = 0;  // fit window, inclusive step numbers
  std::size_t last_n = 0;
};

/// Least squares on (log x, log e) over records [n/2, n).
RateFit fit_rate(const std::string& measure, const std::vector<double>& x, const std::vector<double>& err,
                 const std::vector<std::size_t>& steps);

struct ConvergenceRecord {
  std::size_t n = 0;
  std::size_t indices = 0;
  std::size_t grid = 0;
  std::size_t extended = 0;
  double error = 0.0;
  int active_dims = 0;
  MultiIndex chosen;
};

struct ConvergenceResult {
  Algorithm algo = Algorithm::aposteriori;
  std::vector<ConvergenceRecord> records;
  std::vector<RateFit> fits;
  std::vector<BestNTermPoint> best_n_term;  // a-posteriori only
};

/// Runs the selected algorithm to nmax and measures the error after every step.
ConvergenceResult run_convergence(const ExperimentConfig& cfg, bool with_best_n_term = true);

void write_norms_csv(std::ostream& os, int i_max, int nu_max);
void write_counts_csv(std::ostream& os, const std::string& family, int M, int w_max);
void write_convergence_csv(std::ostream& os, const ConvergenceResult& r);
void write_rates_csv(std::ostream& os, const ConvergenceResult& r);
void write_best_n_term_csv(std::ostream& os, const ConvergenceResult& r);

/// Subcommands; each writes its CSV files into cfg.out and returns their paths.
std::vector<std::filesystem::path> cmd_norms(const ExperimentConfig& cfg, int i_max, int nu_max);
std::vector<std::filesystem::path> cmd_counts(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_converge(const ExperimentConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> cmd_dimsweep(const ExperimentConfig& cfg, std::ostream& log);

/// "converge_aposteriori_q3.csv" and friends.
std::string converge_file_name(const ExperimentConfig& cfg);

}  // namespace sgcol
