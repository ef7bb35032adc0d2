#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgcol/errors.hpp"
#include "sgcol/experiments.hpp"
#include "sgcol/rng.hpp"

namespace sgcol {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sgcol_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.q = 2.0;
  cfg.mref = 16;
  cfg.M = 16;
  cfg.nmc = 40;
  cfg.nmax = 12;
  cfg.nx = 256;
  cfg.seed = 7;
  return cfg;
}

// Known-answer vectors published with the Random123 library.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, PureFunctionOfCoordinates) {
  EXPECT_EQ(counter_normal(3, 17, 5), counter_normal(3, 17, 5));
  EXPECT_NE(counter_normal(3, 17, 5), counter_normal(3, 17, 6));
  EXPECT_NE(counter_normal(3, 17, 5), counter_normal(4, 17, 5));
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const double u = counter_uniform(1, k, 0);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(CounterRng, NormalMoments) {
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = counter_normal(11, std::uint64_t(k), 2);
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(double(n)));
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(Config, ParsingAndOverrides) {
  ExperimentConfig cfg;
  cfg.set("q", "3");
  cfg.set("seed", "42");
  cfg.set("algo", "apriori");
  cfg.set("M", "10, 20,40");
  EXPECT_DOUBLE_EQ(cfg.q, 3.0);
  EXPECT_EQ(*cfg.seed, 42u);
  EXPECT_EQ(cfg.algo, Algorithm::apriori);
  EXPECT_EQ(cfg.M, 10);
  EXPECT_EQ(cfg.sweep, (std::vector<int>{10, 20, 40}));
  EXPECT_THROW(cfg.set("nmax", "12x"), ConfigError);
  EXPECT_THROW(cfg.set("q", "abc"), ConfigError);
  EXPECT_THROW(cfg.set("colour", "red"), ConfigError);
  EXPECT_THROW(cfg.set("algo", "greedy"), ConfigError);
}

TEST(Config, FileAndDesk) {
  const auto dir = scratch_dir("config");
  {
    std::ofstream os(dir / "run.cfg");
    os << "# desk run\nq = 1.5\nnmc=250  # fewer samples\n\nseed=9\n";
  }
  ExperimentConfig cfg;
  cfg.load_file(dir / "run.cfg");
  EXPECT_DOUBLE_EQ(cfg.q, 1.5);
  EXPECT_EQ(cfg.nmc, 250);
  cfg.apply_desk();
  EXPECT_EQ(cfg.mref, 64);
  EXPECT_EQ(cfg.nmax, 60);
  EXPECT_EQ(cfg.model_dims(), 64);
  EXPECT_NO_THROW(cfg.validate(true));

  {
    std::ofstream os(dir / "bad.cfg");
    os << "q 2\n";
  }
  EXPECT_THROW(cfg.load_file(dir / "bad.cfg"), ConfigError);
  EXPECT_THROW(cfg.load_file(dir / "missing.cfg"), ConfigError);
}

TEST(Config, Validation) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate(false));
  EXPECT_THROW(cfg.validate(true), ConfigError);
  cfg.M = 700;
  EXPECT_THROW(cfg.validate(false), ConfigError);
  cfg = ExperimentConfig{};
  cfg.q = 1.0;
  EXPECT_NO_THROW(cfg.validate(false));
  cfg.algo = Algorithm::apriori;
  EXPECT_THROW(cfg.validate(false), ConfigError);
  cfg = ExperimentConfig{};
  cfg.family = "sm";
  EXPECT_THROW(cfg.validate(false), ConfigError);
}

TEST(RateFitTest, RecoversPowerLaw) {
  std::vector<double> x, e;
  std::vector<std::size_t> steps;
  for (std::size_t n = 1; n <= 40; ++n) {
    x.push_back(double(n));
    e.push_back(3.0 * std::pow(double(n), -1.7));
    steps.push_back(n);
  }
  const auto fit = fit_rate("indices", x, e, steps);
  EXPECT_NEAR(fit.rate, 1.7, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-10);
  EXPECT_EQ(fit.first_n, 21u);
  EXPECT_EQ(fit.last_n, 40u);
}

TEST(Tables, NormsCsv) {
  std::stringstream ss;
  write_norms_csv(ss, 5, 3);
  const auto rows = parse_csv(ss.str());
  ASSERT_EQ(rows.size(), 1u + 6 * 4);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"i", "nu", "norm_U", "norm_Delta"}));
  for (const auto& r : std::vector(rows.begin() + 1, rows.end())) {
    const int i = std::stoi(r[0]);
    const int nu = std::stoi(r[1]);
    if (i == 5 && nu == 3) EXPECT_NEAR(std::stod(r[2]), 1.0, 1e-12);
    if (i == 2 && nu == 3) EXPECT_NEAR(std::stod(r[2]), 0.0, 1e-12);
  }
  EXPECT_THROW(write_norms_csv(ss, 65, 3), ConfigError);
}

TEST(Tables, CountsCsv) {
  std::stringstream ss;
  write_counts_csv(ss, "hc", 3, 4);
  const auto rows = parse_csv(ss.str());
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"hc", "3", "1", "1", "1", "1"}));
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LE(std::stoul(rows[k][4]), std::stoul(rows[k][5]));
}

TEST(Convergence, FirstRecordIsSinglePointCollocation) {
  const auto cfg = small_config();
  const auto r = run_convergence(cfg, false);
  ASSERT_EQ(r.records.size(), 12u);
  const auto& first = r.records[0];
  EXPECT_EQ(first.indices, 1u);
  EXPECT_EQ(first.grid, 1u);

  // Oracle: average of ||u_ref(xi_k) - u(., 0)|| over the same samples.
  const MonteCarloError mc(FieldConfig{cfg.q, cfg.sigma, cfg.mref, cfg.nx}, cfg.nmc, *cfg.seed);
  const DiffusionSolver solver(FieldConfig{cfg.q, cfg.sigma, cfg.M, cfg.nx});
  const std::vector<double> zero{0.0};
  const SpatialFunction u0 = solver.solve(zero);
  double s = 0.0;
  for (const auto& ref : mc.reference()) s += h10_norm(ref - u0);
  EXPECT_NEAR(first.error, s / cfg.nmc, 1e-15);

  for (std::size_t k = 1; k < r.records.size(); ++k) {
    EXPECT_GE(r.records[k].grid, r.records[k - 1].grid);
    EXPECT_GE(r.records[k].extended, r.records[k].grid);
    EXPECT_GE(r.records[k].active_dims, r.records[k - 1].active_dims);
  }
  EXPECT_LT(r.records.back().error, first.error);
}

TEST(Convergence, SamplesIndependentOfRunLength) {
  const MonteCarloError a(FieldConfig{2.0, 0.1, 8, 64}, 10, 3);
  const MonteCarloError b(FieldConfig{2.0, 0.1, 8, 64}, 25, 3);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(a.samples()[k], b.samples()[k]);
}

TEST(Convergence, FilesAreReproducible) {
  auto cfg = small_config();
  cfg.nmax = 8;
  cfg.out = scratch_dir("repro_a");
  std::stringstream log;
  const auto files_a = cmd_converge(cfg, log);
  cfg.out = scratch_dir("repro_b");
  const auto files_b = cmd_converge(cfg, log);
  ASSERT_EQ(files_a.size(), files_b.size());
  for (std::size_t k = 0; k < files_a.size(); ++k) {
    EXPECT_EQ(files_a[k].filename(), files_b[k].filename());
    EXPECT_EQ(slurp(files_a[k]), slurp(files_b[k]));
  }
  EXPECT_EQ(files_a[0].filename(), "converge_aposteriori_q2.csv");
}

TEST(Convergence, RequiresSeed) {
  auto cfg = small_config();
  cfg.seed.reset();
  EXPECT_THROW(run_convergence(cfg), ConfigError);
}

TEST(DimSweep, CurvesAgreeBeforeDeparture) {
  auto cfg = small_config();
  cfg.q = 3.0;
  cfg.nmax = 16;
  cfg.nmc = 60;
  cfg.mref = 20;
  cfg.sweep = {10, 20};
  cfg.out = scratch_dir("sweep");
  std::stringstream log;
  const auto files = cmd_dimsweep(cfg, log);
  ASSERT_EQ(files.size(), 2u);
  const auto small = parse_csv(slurp(cfg.out / "dimsweep_M10.csv"));
  const auto large = parse_csv(slurp(cfg.out / "dimsweep_M20.csv"));
  ASSERT_EQ(small.size(), 17u);
  ASSERT_EQ(large.size(), 17u);
  // Same first point (identical samples in the shared dimensions, u(., 0) equal).
  EXPECT_NEAR(std::stod(small[1][4]) / std::stod(large[1][4]), 1.0, 1e-3);
  // While at most half of the smaller run's dimensions are active the curves
  // are superposed; once it saturates, the truncated reference lets its error
  // fall away from the larger run.
  std::size_t checked = 0;
  for (std::size_t k = 1; k < small.size() && std::stoi(small[k][5]) <= 5; ++k) {
    EXPECT_NEAR(std::stod(small[k][4]) / std::stod(large[k][4]), 1.0, 0.05) << "N=" << k;
    ++checked;
  }
  EXPECT_GE(checked, 4u);
  EXPECT_EQ(std::stoi(small.back()[5]), 10);
  EXPECT_LT(std::stod(small.back()[4]) / std::stod(large.back()[4]), 0.5);
}

}  // namespace
}  // namespace sgcol
