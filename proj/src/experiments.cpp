#include "sgcol/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sgcol/errors.hpp"
#include "sgcol/hermite.hpp"
#include "sgcol/parallel.hpp"
#include "sgcol/rng.hpp"

namespace sgcol {

std::string to_string(Algorithm a) { return a == Algorithm::apriori ? "apriori" : "aposteriori"; }

Algorithm parse_algorithm(const std::string& s) {
  if (s == "apriori") return Algorithm::apriori;
  if (s == "aposteriori") return Algorithm::aposteriori;
  throw ConfigError("unknown algorithm '" + s + "' (expected apriori or aposteriori)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw ConfigError("invalid value '" + value + "' for " + key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
}

std::string q_tag(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

std::string index_label(const MultiIndex& nu) {
  std::string s;
  for (const auto& [m, l] : nu.entries()) {
    if (!s.empty()) s += ';';
    s += std::to_string(m) + ':' + std::to_string(l);
  }
  return s.empty() ? "0" : s;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

void write_plot_script(const std::filesystem::path& script, const std::string& body) {
  auto os = open_output(script);
  os << "set datafile separator ','\nset key autotitle columnhead\n" << body;
}

}  // namespace

void ExperimentConfig::apply_desk() {
  mref = 64;
  nmax = 60;
  if (M == 0 || M > 64) M = 64;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "q") {
    q = parse_real(key, value);
  } else if (key == "sigma") {
    sigma = parse_real(key, value);
  } else if (key == "M") {
    sweep.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) sweep.push_back(parse_number<int>(key, trim(item)));
    if (sweep.empty()) throw ConfigError("empty value for M");
    M = sweep.front();
  } else if (key == "mref") {
    mref = parse_number<int>(key, value);
  } else if (key == "nmc") {
    nmc = parse_number<int>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "nmax") {
    nmax = parse_number<int>(key, value);
  } else if (key == "buffer") {
    buffer = parse_number<int>(key, value);
  } else if (key == "nx") {
    nx = parse_number<int>(key, value);
  } else if (key == "algo") {
    algo = parse_algorithm(value);
  } else if (key == "family") {
    family = value;
  } else if (key == "wmax") {
    wmax = parse_number<int>(key, value);
  } else if (key == "out") {
    out = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void ExperimentConfig::validate(bool need_seed) const {
  if (!(q >= 1.0)) throw ConfigError("q must be >= 1");
  if (algo == Algorithm::apriori && !(q > 1.0)) throw ConfigError("the a-priori algorithm needs q > 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (mref < 1) throw ConfigError("mref must be >= 1");
  if (M < 0 || model_dims() > mref) throw ConfigError("need 1 <= M <= mref");
  if (nmc < 1) throw ConfigError("nmc must be >= 1");
  if (nmax < 1) throw ConfigError("nmax must be >= 1");
  if (buffer < 1) throw ConfigError("buffer must be >= 1");
  if (family != "td" && family != "hc") throw ConfigError("family must be td or hc");
  if (wmax < 0) throw ConfigError("wmax must be >= 0");
  FieldConfig{q, sigma, mref, nx}.validate();
  if (need_seed && !seed) throw ConfigError("a seed is required for convergence runs (--seed)");
}

// ---------------------------------------------------------------------------

MonteCarloError::MonteCarloError(const FieldConfig& reference_field, int nmc, std::uint64_t seed) {
  const DiffusionSolver solver(reference_field);
  samples_.resize(nmc);
  reference_.resize(nmc);
  parallel_for(std::size_t(nmc), [&](std::size_t k) {
    auto& xi = samples_[k];
    xi.resize(reference_field.M);
    for (int m = 0; m < reference_field.M; ++m) xi[m] = counter_normal(seed, k, std::uint32_t(m));
    reference_[k] = solver.solve(xi);
  });
}

double MonteCarloError::operator()(const std::function<Vector(std::span<const double>)>& approx) const {
  std::vector<double> per_sample(samples_.size());
  parallel_for(samples_.size(), [&](std::size_t k) {
    per_sample[k] = h10_norm(reference_[k] - approx(samples_[k]));
  });
  double s = 0.0;
  for (double v : per_sample) s += v;
  return s / double(per_sample.size());
}

RateFit fit_rate(const std::string& measure, const std::vector<double>& x, const std::vector<double>& err,
                 const std::vector<std::size_t>& steps) {
  RateFit fit;
  fit.measure = measure;
  const std::size_t n = x.size();
  if (n != err.size() || n != steps.size()) throw ContractError("fit_rate: length mismatch");
  if (n < 2) return fit;
  const std::size_t begin = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = begin; i < n; ++i) {
    if (!(x[i] > 0.0) || !(err[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  fit.first_n = steps[begin];
  fit.last_n = steps[n - 1];
  const double denom = cnt * sxx - sx * sx;
  if (cnt < 2 || denom <= 0.0) return fit;
  const double slope = (cnt * sxy - sx * sy) / denom;
  fit.rate = -slope;
  fit.intercept = (sy - slope * sx) / cnt;
  return fit;
}

// ---------------------------------------------------------------------------

ConvergenceResult run_convergence(const ExperimentConfig& cfg, bool with_best_n_term) {
  cfg.validate(true);
  const int dims = cfg.model_dims();
  const DiffusionSolver model_solver(FieldConfig{cfg.q, cfg.sigma, dims, cfg.nx});
  const Model model = [&model_solver](std::span<const double> xi) -> Vector { return model_solver.solve(xi); };
  const NormFn norm = [](const Vector& v) { return h10_norm(v); };
  const MonteCarloError mc(FieldConfig{cfg.q, cfg.sigma, cfg.mref, cfg.nx}, cfg.nmc, *cfg.seed);

  AdaptiveOptions opt;
  opt.m_buffer = cfg.buffer;
  opt.n_max = cfg.nmax;
  opt.dim_cap = dims;

  auto store = std::make_shared<ValueStore>(dims);
  AdaptiveState state = cfg.algo == Algorithm::apriori
                            ? run_apriori(APrioriWeights::for_q(cfg.q), opt)
                            : run_aposteriori(model, opt, norm, store);

  ConvergenceResult result;
  result.algo = cfg.algo;
  MonotoneSet lambda = MonotoneSet::origin();
  for (std::size_t n = 1; n <= state.history.size() + 1; ++n) {
    ConvergenceRecord rec;
    rec.n = n;
    if (n > 1) {
      const auto& step = state.history[n - 2];
      lambda.insert(step.chosen);
      rec.chosen = step.chosen;
      rec.grid = step.grid_size;
      rec.extended = step.extended_size;
      rec.active_dims = step.active_dims;
    } else {
      rec.grid = 1;
      rec.extended = 1;
    }
    rec.indices = lambda.size();
    const auto sc = SparseCollocation::build(lambda, model, store);
    rec.error = mc([&sc](std::span<const double> xi) { return sc.evaluate(xi); });
    result.records.push_back(rec);
  }

  std::vector<double> idx, grid, ext, err;
  std::vector<std::size_t> steps;
  for (const auto& r : result.records) {
    idx.push_back(double(r.indices));
    grid.push_back(double(r.grid));
    ext.push_back(double(r.extended));
    err.push_back(r.error);
    steps.push_back(r.n);
  }
  result.fits.push_back(fit_rate("indices", idx, err, steps));
  result.fits.push_back(fit_rate("grid", grid, err, steps));
  if (cfg.algo == Algorithm::aposteriori) result.fits.push_back(fit_rate("extended", ext, err, steps));

  if (with_best_n_term && cfg.algo == Algorithm::aposteriori) {
    // Extended index set Lambda_N u N(Lambda_{N-1}) is monotone and its grid
    // is exactly what the a-posteriori run evaluated.
    MonotoneSet ext_set = lambda;
    const MonotoneSet before = state.prefix(std::max<std::size_t>(1, lambda.size() - 1));
    for (const auto& nu : neighbors(before, cfg.buffer, dims)) {
      if (!ext_set.contains(nu)) ext_set.insert(nu);
    }
    const auto sc = SparseCollocation::build(ext_set, model, store);
    const HermiteExpansion he = to_hermite(sc);
    result.best_n_term = best_n_term_curve(
        he, norm,
        [&mc](const HermiteExpansion& truncated) {
          return mc([&truncated](std::span<const double> xi) { return truncated.evaluate(xi); });
        },
        std::size_t(cfg.nmax));
  }
  return result;
}

// ---------------------------------------------------------------------------

void write_norms_csv(std::ostream& os, int i_max, int nu_max) {
  if (i_max < 0 || nu_max < 0 || i_max > 64 || nu_max > 64) throw ConfigError("norm table bounds must be in 0..64");
  os << "i,nu,norm_U,norm_Delta\n";
  for (int i = 0; i <= i_max; ++i) {
    for (int nu = 0; nu <= nu_max; ++nu) {
      os << i << ',' << nu << ',' << format_double(norm_U_H(i, nu)) << ',' << format_double(norm_Delta_H(i, nu))
         << '\n';
    }
  }
}

void write_counts_csv(std::ostream& os, const std::string& family, int M, int w_max) {
  if (family != "td" && family != "hc") throw ConfigError("family must be td or hc");
  if (M < 1) throw ConfigError("M must be >= 1");
  os << "family,M,w,indices,points,bound\n";
  for (int w = family == "td" ? 0 : 1; w <= w_max; ++w) {
    const MonotoneSet s = family == "td" ? td_set(w, M) : hc_set(w, M);
    const PointCount c = count_points(s);
    os << family << ',' << M << ',' << w << ',' << s.size() << ',' << c.exact << ',' << c.bound << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceResult& r) {
  os << "N,indices,grid_points,extended_points,error,active_dims,chosen\n";
  for (const auto& rec : r.records) {
    os << rec.n << ',' << rec.indices << ',' << rec.grid << ',' << rec.extended << ',' << format_double(rec.error)
       << ',' << rec.active_dims << ',' << index_label(rec.chosen) << '\n';
  }
}

void write_rates_csv(std::ostream& os, const ConvergenceResult& r) {
  os << "algo,measure,rate,intercept,first_N,last_N\n";
  for (const auto& f : r.fits) {
    os << to_string(r.algo) << ',' << f.measure << ',' << format_double(f.rate) << ','
       << format_double(f.intercept) << ',' << f.first_n << ',' << f.last_n << '\n';
  }
}

void write_best_n_term_csv(std::ostream& os, const ConvergenceResult& r) {
  os << "N,error\n";
  for (const auto& p : r.best_n_term) os << p.n << ',' << format_double(p.error) << '\n';
}

std::string converge_file_name(const ExperimentConfig& cfg) {
  return "converge_" + to_string(cfg.algo) + "_q" + q_tag(cfg.q) + ".csv";
}

std::vector<std::filesystem::path> cmd_norms(const ExperimentConfig& cfg, int i_max, int nu_max) {
  std::filesystem::create_directories(cfg.out);
  const auto path = cfg.out / "norms.csv";
  {
    auto os = open_output(path);
    write_norms_csv(os, i_max, nu_max);
  }
  std::vector<std::filesystem::path> files{path};
  if (cfg.emit_plots) {
    files.push_back(cfg.out / "norms.gp");
    write_plot_script(files.back(),
                      "set logscale y\nset xlabel 'nu'\n"
                      "plot 'norms.csv' using 2:($1==$2-1 ? NaN : $3) with points title '||U_i H_nu||', \\\n"
                      "     'norms.csv' using 2:4 with points title '||Delta_i H_nu||', sqrt(2) dt 2 title 'sqrt(2)'\n");
  }
  return files;
}

std::vector<std::filesystem::path> cmd_counts(const ExperimentConfig& cfg) {
  const int M = cfg.M > 0 ? cfg.M : 2;
  std::filesystem::create_directories(cfg.out);
  const auto path = cfg.out / "counts.csv";
  {
    auto os = open_output(path);
    write_counts_csv(os, cfg.family, M, cfg.wmax);
  }
  std::vector<std::filesystem::path> files{path};
  if (cfg.emit_plots) {
    files.push_back(cfg.out / "counts.gp");
    write_plot_script(files.back(),
                      "set logscale xy\nset xlabel '|Lambda|'\n"
                      "plot 'counts.csv' using 4:5 with linespoints title '|Xi_Lambda|', \\\n"
                      "     'counts.csv' using 4:6 with lines title '|Lambda|(|Lambda|+1)/2'\n");
  }
  return files;
}

std::vector<std::filesystem::path> cmd_converge(const ExperimentConfig& cfg, std::ostream& log) {
  const ConvergenceResult r = run_convergence(cfg);
  std::filesystem::create_directories(cfg.out);
  const std::string name = converge_file_name(cfg);
  std::vector<std::filesystem::path> files;

  files.push_back(cfg.out / name);
  {
    auto os = open_output(files.back());
    write_convergence_csv(os, r);
  }
  files.push_back(cfg.out / ("rates_" + to_string(cfg.algo) + "_q" + q_tag(cfg.q) + ".csv"));
  {
    auto os = open_output(files.back());
    write_rates_csv(os, r);
  }
  if (!r.best_n_term.empty()) {
    files.push_back(cfg.out / "bestnterm.csv");
    auto os = open_output(files.back());
    write_best_n_term_csv(os, r);
  }
  if (cfg.emit_plots) {
    std::string body = "set logscale xy\nset xlabel 'N'\nset ylabel 'error'\nplot '" + name +
                       "' using 2:5 with linespoints title '|Lambda_N|'";
    if (cfg.algo == Algorithm::aposteriori) {
      body += ", \\\n     '" + name + "' using 3:5 with linespoints title 'a-posteriori grid'";
      body += ", \\\n     '" + name + "' using 4:5 with linespoints title 'extended grid'";
      if (!r.best_n_term.empty()) body += ", \\\n     'bestnterm.csv' using 1:2 with lines title 'best N-term'";
    } else {
      body += ", \\\n     '" + name + "' using 3:5 with linespoints title 'grid'";
    }
    files.push_back(cfg.out / (name.substr(0, name.size() - 4) + ".gp"));
    write_plot_script(files.back(), body + "\n");
  }

  for (const auto& f : r.fits) {
    log << to_string(cfg.algo) << " q=" << q_tag(cfg.q) << " rate vs " << f.measure << ": "
        << format_double(f.rate) << " (N=" << f.first_n << ".." << f.last_n << ")\n";
  }
  return files;
}

std::vector<std::filesystem::path> cmd_dimsweep(const ExperimentConfig& cfg, std::ostream& log) {
  const std::vector<int> dims = cfg.sweep.empty() ? std::vector<int>{cfg.model_dims()} : cfg.sweep;
  std::filesystem::create_directories(cfg.out);
  std::vector<std::filesystem::path> files;
  std::string plot = "set logscale xy\nset xlabel '|Lambda_N|'\nset ylabel 'error'\nplot ";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    ExperimentConfig run = cfg;
    run.M = dims[i];
    run.mref = dims[i];
    const ConvergenceResult r = run_convergence(run, false);
    const std::string name = "dimsweep_M" + std::to_string(dims[i]) + ".csv";
    files.push_back(cfg.out / name);
    auto os = open_output(files.back());
    write_convergence_csv(os, r);
    plot += (i ? ", \\\n     '" : "'") + name + "' using 2:5 with linespoints title 'M=" + std::to_string(dims[i]) + "'";
    log << "M=" << dims[i] << " rate vs indices: " << format_double(r.fits.front().rate) << '\n';
  }
  if (cfg.emit_plots) {
    files.push_back(cfg.out / "dimsweep.gp");
    write_plot_script(files.back(), plot + "\n");
  }
  return files;
}

}  // namespace sgcol
