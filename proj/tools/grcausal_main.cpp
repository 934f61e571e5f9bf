// grcausal command-line front end. Talks to the library only through the
// C interface in grcausal.h.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grcausal/grcausal.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitTies = 4;

struct Failure {
  grc_status status;
  std::string message;
};

int exit_code(grc_status s) {
  switch (s) {
    case GRC_OK: return kExitOk;
    case GRC_TIES_ERROR: return kExitTies;
    case GRC_DEGENERATE_TARGETS:
    case GRC_DEGENERATE_RESIDUALS:
    case GRC_NUMERICAL_ERROR:
    case GRC_OUT_OF_MEMORY:
    case GRC_INTERNAL_ERROR: return kExitNumerical;
    default: return kExitUsage;
  }
}

void check(grc_status s) {
  if (s != GRC_OK) throw Failure{s, grc_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{GRC_INVALID_ARGUMENT, msg}; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using PairPtr = std::unique_ptr<grc_pair, decltype(&grc_pair_free)>;
using ConfigPtr = std::unique_ptr<grc_config, decltype(&grc_config_free)>;
using DiagPtr = std::unique_ptr<grc_diagnostics, decltype(&grc_diagnostics_free)>;

// Writes to a file when a path is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Failure{GRC_IO_ERROR, "cannot write '" + path + "'"};
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct InferOptions {
  std::string method = "gran";
  std::uint64_t seed = 0;
  std::size_t grid_size = 10;
  std::size_t folds = 10;
};

ConfigPtr make_config(const InferOptions& o) {
  grc_config* raw = nullptr;
  check(grc_config_create(&raw));
  ConfigPtr cfg(raw, grc_config_free);
  grc_method m;
  check(grc_method_parse(o.method.c_str(), &m));
  check(grc_config_set_method(cfg.get(), m));
  check(grc_config_set_seed(cfg.get(), o.seed));
  check(grc_config_set_grid_size(cfg.get(), o.grid_size));
  check(grc_config_set_folds(cfg.get(), o.folds));
  return cfg;
}

void add_infer_options(CLI::App* cmd, InferOptions& o) {
  cmd->add_option("--method", o.method, "gran | gran-star | grk4 | grent")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Cross-validation seed")->capture_default_str();
  cmd->add_option("--grid-size", o.grid_size, "Points per hyper-parameter grid")->capture_default_str();
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
}

struct SpecOptions {
  std::string mechanism = "M1";
  std::string cause = "p1";
  std::string noise = "laplace";
  std::size_t n = 500;
  std::uint64_t seed = 0;
};

void add_spec_options(CLI::App* cmd, SpecOptions& o) {
  cmd->add_option("--mechanism", o.mechanism, "M1 | M2 | M3 | M4")->capture_default_str();
  cmd->add_option("--cause", o.cause, "p1 | p2 | p3")->capture_default_str();
  cmd->add_option("--noise", o.noise, "gg | laplace | gauss | bimodal")->capture_default_str();
  cmd->add_option("--n", o.n, "Sample size")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Data seed")->capture_default_str();
}

grc_synth_spec make_spec(const SpecOptions& o) {
  grc_synth_spec s{};
  check(grc_mechanism_parse(o.mechanism.c_str(), &s.mechanism));
  check(grc_cause_parse(o.cause.c_str(), &s.cause));
  check(grc_noise_parse(o.noise.c_str(), &s.noise));
  s.n = o.n;
  s.seed = o.seed;
  return s;
}

// ---- infer

int run_infer(const std::string& path, const InferOptions& o, bool json) {
  grc_pair* raw = nullptr;
  check(grc_pair_load(path.c_str(), &raw));
  PairPtr pair(raw, grc_pair_free);
  for (std::size_t i = 0; i < grc_pair_warning_count(pair.get()); ++i)
    std::cerr << "warning: " << grc_pair_warning(pair.get(), i) << '\n';
  ConfigPtr cfg = make_config(o);
  grc_decision d{};
  check(grc_infer(pair.get(), cfg.get(), &d));

  static const char* fits[] = {"xtilde->y", "y->xtilde", "ytilde->x", "x->ytilde"};
  if (json) {
    nlohmann::json j;
    j["pair"] = path;
    j["n"] = grc_pair_size(pair.get());
    j["method"] = o.method;
    j["seed"] = o.seed;
    j["direction"] = grc_direction_name(d.direction);
    j["confidence"] = d.confidence;
    j["g_xtilde"] = d.g_xtilde;
    j["g_ytilde"] = d.g_ytilde;
    for (int i = 0; i < 4; ++i)
      j["fits"].push_back({{"fit", fits[i]}, {"statistic", d.stats[i]}, {"gamma", d.gamma[i]}, {"tau", d.tau[i]}});
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "direction,confidence,g_xtilde,g_ytilde\n"
              << grc_direction_name(d.direction) << ',' << num(d.confidence) << ',' << num(d.g_xtilde) << ','
              << num(d.g_ytilde) << '\n';
  }
  return kExitOk;
}

// ---- gen

int run_gen(const SpecOptions& o, const std::string& out) {
  const grc_synth_spec spec = make_spec(o);
  grc_pair* raw = nullptr;
  check(grc_synth_generate(&spec, &raw));
  PairPtr pair(raw, grc_pair_free);
  if (out.empty()) usage_error("--out is required");
  check(grc_pair_save(pair.get(), out.c_str()));
  return kExitOk;
}

// ---- bench

struct BenchOptions {
  std::string mechanisms = "M1,M2,M3,M4";
  std::string causes = "p1,p2,p3";
  std::string noises = "gg,laplace,gauss,bimodal";
  std::string methods = "gran";
  std::size_t n = 500;
  std::size_t reps = 20;
  std::size_t grid_size = 5;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string results_out;
};

int run_bench(const BenchOptions& o) {
  Output out(o.out);
  std::unique_ptr<Output> per_rep;
  if (!o.results_out.empty()) {
    per_rep = std::make_unique<Output>(o.results_out);
    per_rep->stream() << "mechanism,cause,noise,method,seed,decided,correct,confidence\n";
  }
  out.stream() << "mechanism,cause,noise,method,n,reps,accuracy,undecided\n";
  for (const std::string& method : split_list(o.methods)) {
    const ConfigPtr cfg = make_config({method, o.seed, o.grid_size, o.folds});
    for (const std::string& mech : split_list(o.mechanisms))
      for (const std::string& cause : split_list(o.causes))
        for (const std::string& noise : split_list(o.noises)) {
          const grc_synth_spec spec = make_spec({mech, cause, noise, o.n, o.seed});
          std::vector<int> decided(o.reps), correct(o.reps);
          std::vector<double> conf(o.reps);
          grc_bench_result r{};
          check(grc_bench_run(&spec, o.reps, cfg.get(), &r, decided.data(), correct.data(), conf.data()));
          out.stream() << grc_mechanism_name(spec.mechanism) << ',' << grc_cause_name(spec.cause) << ','
                       << grc_noise_name(spec.noise) << ',' << method << ',' << o.n << ',' << o.reps << ','
                       << num(r.accuracy) << ',' << r.undecided << '\n';
          out.stream().flush();
          if (per_rep) {
            for (std::size_t i = 0; i < o.reps; ++i)
              per_rep->stream() << grc_mechanism_name(spec.mechanism) << ',' << grc_cause_name(spec.cause) << ','
                                << grc_noise_name(spec.noise) << ',' << method << ',' << (o.seed ^ i) << ','
                                << decided[i] << ',' << correct[i] << ',' << num(conf[i]) << '\n';
          }
        }
  }
  return kExitOk;
}

// ---- lab

struct LabOptions {
  std::size_t points = 199;
  double limit = 0.99;
  int order_min = 3;
  int order_max = 8;
  std::size_t count = 100;
  std::string dims = "2";
  std::uint64_t seed = 0;
  double sv_min = 0.05;
  double sv_max = 0.95;
  double k3_max = 2.0;
  double k4_max = 6.0;
  std::string out;
};

std::vector<double> open_grid(double limit, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = points == 1 ? 0.0 : -limit + 2.0 * limit * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& t : split_list(s)) {
    try {
      out.push_back(static_cast<std::size_t>(std::stoul(t)));
    } catch (const std::exception&) {
      usage_error("invalid dimension '" + t + "'");
    }
  }
  if (out.empty()) usage_error("no dimensions given");
  return out;
}

// Uniform singular values in [lo, hi] drawn from a per-case seed.
std::vector<double> singular_draw(std::size_t d, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> s(d);
  for (double& v : s) v = u(rng);
  return s;
}

int run_lab(const std::string& what, const LabOptions& o) {
  Output out(o.out);
  std::ostream& os = out.stream();
  if (what == "cn") {
    os << "n,w,c\n";
    for (int n = o.order_min; n <= o.order_max; ++n)
      for (double w : open_grid(o.limit, o.points)) {
        double c = 0.0;
        check(grc_cumulant_factor(w, n, &c));
        os << n << ',' << num(w) << ',' << num(c) << '\n';
      }
  } else if (what == "mn") {
    os << "n,lambda1,lambda2,op_norm\n";
    const std::vector<double> g = open_grid(o.limit, o.points);
    for (int n = o.order_min; n <= o.order_max; ++n)
      for (double l1 : g)
        for (double l2 : g) {
          const double eig[] = {l1, l2};
          double norm = 0.0;
          check(grc_symmetric_op_norm(eig, 2, n, &norm));
          os << n << ',' << num(l1) << ',' << num(l2) << ',' << num(norm) << '\n';
        }
  } else if (what == "detcheck") {
    os << "case,d,det_aat,det_ata,relative_difference\n";
    for (std::size_t d : parse_dims(o.dims))
      for (std::size_t k = 0; k < o.count; ++k) {
        const std::uint64_t seed = o.seed + k;
        const std::vector<double> sv = singular_draw(d, seed, o.sv_min, o.sv_max);
        std::vector<double> a(d * d);
        check(grc_random_mixing_matrix(sv.data(), d, seed, a.data()));
        double l = 0.0, r = 0.0;
        check(grc_determinant_check(a.data(), d, &l, &r));
        const double rel = std::abs(l - r) / std::max(std::abs(l), std::abs(r));
        os << seed << ',' << d << ',' << num(l) << ',' << num(r) << ',' << num(rel) << '\n';
      }
  } else if (what == "gram-charlier") {
    os << "kappa3,kappa4,energy\n";
    for (std::size_t i = 0; i < o.points; ++i)
      for (std::size_t j = 0; j < o.points; ++j) {
        const double t = o.points == 1 ? 0.0 : 1.0 / static_cast<double>(o.points - 1);
        const double k3 = o.k3_max * static_cast<double>(i) * t;
        const double k4 = o.k4_max * static_cast<double>(j) * t;
        double e = 0.0;
        check(grc_gram_charlier_energy(k3, k4, &e));
        os << num(k3) << ',' << num(k4) << ',' << num(e) << '\n';
      }
  } else if (what == "projection") {
    os << "n,lambda1,lambda2,c,residual,degenerate_top\n";
    const std::vector<double> g = open_grid(o.limit, o.points);
    for (int n = o.order_min; n <= o.order_max; ++n)
      for (double l1 : g)
        for (double l2 : g) {
          const double a[] = {l1, 0.0, 0.0, l2};
          double c = 0.0, res = 0.0;
          int degenerate = 0;
          check(grc_projection_check(a, 2, n, &c, &res, &degenerate));
          os << n << ',' << num(l1) << ',' << num(l2) << ',' << num(c) << ',' << num(res) << ',' << degenerate
             << '\n';
        }
  } else {
    usage_error("unknown lab experiment '" + what + "'");
  }
  return kExitOk;
}

// ---- curve

int run_curve(const std::string& results, const std::string& out_path) {
  std::ifstream in(results, std::ios::binary);
  if (!in) throw Failure{GRC_IO_ERROR, "cannot open '" + results + "'"};
  std::string line;
  if (!std::getline(in, line)) throw Failure{GRC_PARSE_ERROR, results + ": empty file"};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_list(line);
  int ci = -1, fi = -1, di = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "correct") ci = static_cast<int>(i);
    if (header[i] == "confidence") fi = static_cast<int>(i);
    if (header[i] == "decided") di = static_cast<int>(i);
  }
  if (ci < 0 || fi < 0) throw Failure{GRC_PARSE_ERROR, results + ": header needs 'correct' and 'confidence'"};

  std::vector<int> correct;
  std::vector<double> conf;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const auto need = static_cast<std::size_t>(std::max({ci, fi, di})) + 1;
    if (cells.size() < need)
      throw Failure{GRC_PARSE_ERROR, results + ": line " + std::to_string(line_no) + ": too few columns"};
    try {
      if (di >= 0 && std::stoi(cells[static_cast<std::size_t>(di)]) == 0) continue;
      std::size_t used = 0;
      const double c = std::stod(cells[static_cast<std::size_t>(fi)], &used);
      if (used != cells[static_cast<std::size_t>(fi)].size()) throw std::invalid_argument("trailing");
      correct.push_back(std::stoi(cells[static_cast<std::size_t>(ci)]) != 0 ? 1 : 0);
      conf.push_back(c);
    } catch (const std::exception&) {
      throw Failure{GRC_PARSE_ERROR, results + ": line " + std::to_string(line_no) + ": invalid value"};
    }
  }
  const std::size_t n = correct.size();
  std::vector<double> thr(n), frac(n), acc(n);
  check(grc_decision_rate_curve(correct.data(), conf.data(), n, thr.data(), frac.data(), acc.data()));
  Output out(out_path);
  out.stream() << "threshold,decision_fraction,accuracy\n";
  for (std::size_t i = 0; i < n; ++i) out.stream() << num(thr[i]) << ',' << num(frac[i]) << ',' << num(acc[i]) << '\n';
  return kExitOk;
}

// ---- diagnose

int run_diagnose(const SpecOptions& so, const InferOptions& io, std::size_t grid_points, std::size_t bins,
                 const std::string& prefix) {
  if (prefix.empty()) usage_error("--out-prefix is required");
  const grc_synth_spec spec = make_spec(so);
  const ConfigPtr cfg = make_config(io);
  grc_diagnostics* raw = nullptr;
  check(grc_diagnose(&spec, cfg.get(), grid_points, bins, &raw));
  DiagPtr diag(raw, grc_diagnostics_free);

  const grc_side sides[] = {GRC_CAUSAL, GRC_ANTICAUSAL};
  const char* names[] = {"causal", "anticausal"};

  Output summary(prefix + "_summary.csv");
  summary.stream() << "side,energy,gamma,tau,fit_mean,fit_sd\n";
  Output resid(prefix + "_residuals.csv");
  resid.stream() << "side,index,value\n";
  Output hist(prefix + "_histogram.csv");
  hist.stream() << "side,left,right,density\n";
  Output pre(prefix + "_preimage.csv");
  pre.stream() << "side,regressor,preimage\n";

  for (int s = 0; s < 2; ++s) {
    const grc_side side = sides[s];
    double gamma = 0.0, tau = 0.0, mean = 0.0, sd = 0.0;
    grc_diagnostics_hyper(diag.get(), side, &gamma, &tau);
    grc_diagnostics_fit(diag.get(), side, &mean, &sd);
    const double energy = grc_diagnostics_energy(diag.get(), side);
    summary.stream() << names[s] << ',' << num(energy) << ',' << num(gamma) << ',' << num(tau) << ','
                     << num(mean) << ',' << num(sd) << '\n';
    std::cout << names[s] << " energy " << num(energy) << '\n';

    std::size_t len = 0;
    const double* z = grc_diagnostics_component(diag.get(), side, &len);
    for (std::size_t i = 0; i < len; ++i) resid.stream() << names[s] << ',' << i << ',' << num(z[i]) << '\n';

    std::size_t nb = 0;
    const double* edges = nullptr;
    const double* dens = nullptr;
    grc_diagnostics_histogram(diag.get(), side, &nb, &edges, &dens);
    for (std::size_t i = 0; i < nb; ++i)
      hist.stream() << names[s] << ',' << num(edges[i]) << ',' << num(edges[i + 1]) << ',' << num(dens[i]) << '\n';

    const double* grid = nullptr;
    const double* vals = nullptr;
    grc_diagnostics_preimages(diag.get(), side, &len, &grid, &vals);
    for (std::size_t i = 0; i < len; ++i) pre.stream() << names[s] << ',' << num(grid[i]) << ',' << num(vals[i]) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal direction inference by Gaussianity of regression residuals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(grc_version()));

  std::string pair_path;
  bool json = false;
  InferOptions infer_opts;
  auto* infer = app.add_subcommand("infer", "Infer the causal direction of a pair file");
  infer->add_option("--pair", pair_path, "Two-column pair file")->required();
  add_infer_options(infer, infer_opts);
  infer->add_flag("--json", json, "Full-precision JSON output");

  SpecOptions gen_opts;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic cause-effect pair");
  add_spec_options(gen, gen_opts);
  gen->add_option("--out", gen_out, "Output pair file")->required();

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Synthetic accuracy benchmark, one CSV row per cell");
  bench->add_option("--mechanisms", bench_opts.mechanisms)->capture_default_str();
  bench->add_option("--causes", bench_opts.causes)->capture_default_str();
  bench->add_option("--noises", bench_opts.noises)->capture_default_str();
  bench->add_option("--methods", bench_opts.methods)->capture_default_str();
  bench->add_option("--n", bench_opts.n)->capture_default_str();
  bench->add_option("--reps", bench_opts.reps)->capture_default_str();
  bench->add_option("--grid-size", bench_opts.grid_size)->capture_default_str();
  bench->add_option("--folds", bench_opts.folds)->capture_default_str();
  bench->add_option("--seed", bench_opts.seed)->capture_default_str();
  bench->add_option("--out", bench_opts.out, "Summary CSV (stdout if omitted)");
  bench->add_option("--results-out", bench_opts.results_out, "Per-repetition CSV, input for 'curve'");

  std::string lab_what;
  LabOptions lab_opts;
  auto* lab = app.add_subcommand("lab", "Cumulant asymmetry experiments");
  lab->add_option("experiment", lab_what, "cn | mn | detcheck | gram-charlier | projection")->required();
  lab->add_option("--points", lab_opts.points, "Grid points per axis")->capture_default_str();
  lab->add_option("--limit", lab_opts.limit, "Grid spans [-limit, limit]")->capture_default_str();
  lab->add_option("--order-min", lab_opts.order_min)->capture_default_str();
  lab->add_option("--order-max", lab_opts.order_max)->capture_default_str();
  lab->add_option("--count", lab_opts.count, "Random matrices per dimension")->capture_default_str();
  lab->add_option("--dims", lab_opts.dims, "Comma-separated dimensions")->capture_default_str();
  lab->add_option("--seed", lab_opts.seed)->capture_default_str();
  lab->add_option("--k3-max", lab_opts.k3_max)->capture_default_str();
  lab->add_option("--k4-max", lab_opts.k4_max)->capture_default_str();
  lab->add_option("--out", lab_opts.out, "Output CSV (stdout if omitted)");

  std::string curve_in, curve_out;
  auto* curve = app.add_subcommand("curve", "Accuracy versus fraction of decisions made");
  curve->add_option("--results", curve_in, "CSV with 'correct' and 'confidence' columns")->required();
  curve->add_option("--out", curve_out, "Output CSV (stdout if omitted)");

  SpecOptions diag_spec;
  InferOptions diag_infer;
  diag_infer.grid_size = 5;
  std::size_t grid_points = 50, bins = 20;
  std::string prefix;
  auto* diagnose = app.add_subcommand("diagnose", "Residual diagnostics for one synthetic run");
  diagnose->add_option("--mechanism", diag_spec.mechanism)->capture_default_str();
  diagnose->add_option("--cause", diag_spec.cause)->capture_default_str();
  diagnose->add_option("--noise", diag_spec.noise)->capture_default_str();
  diagnose->add_option("--n", diag_spec.n)->capture_default_str();
  diagnose->add_option("--seed", diag_spec.seed)->capture_default_str();
  diagnose->add_option("--grid-size", diag_infer.grid_size)->capture_default_str();
  diagnose->add_option("--folds", diag_infer.folds)->capture_default_str();
  diagnose->add_option("--grid-points", grid_points, "Pre-image grid points")->capture_default_str();
  diagnose->add_option("--bins", bins, "Histogram bins")->capture_default_str();
  diagnose->add_option("--out-prefix", prefix, "Prefix for the output CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*infer) return run_infer(pair_path, infer_opts, json);
    if (*gen) return run_gen(gen_opts, gen_out);
    if (*bench) return run_bench(bench_opts);
    if (*lab) return run_lab(lab_what, lab_opts);
    if (*curve) return run_curve(curve_in, curve_out);
    if (*diagnose) {
      diag_infer.seed = diag_spec.seed;
      return run_diagnose(diag_spec, diag_infer, grid_points, bins, prefix);
    }
  } catch (const Failure& f) {
    std::cerr << "error [" << grc_status_name(f.status) << "]: " << f.message << '\n';
    return exit_code(f.status);
  }
  return kExitUsage;
}
