#include "grcausal/grcausal.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "grcausal/asymmetry_lab.hpp"
#include "grcausal/causal_inference.hpp"
#include "grcausal/error.hpp"
#include "grcausal/gaussianity_tests.hpp"
#include "grcausal/pair_io.hpp"
#include "grcausal/synthetic_bench.hpp"

namespace gc = grcausal;

struct grc_pair {
  gc::PairFile file;
};

struct grc_config {
  gc::InferenceConfig cfg;
};

struct grc_diagnostics {
  gc::DiagnosticRecord rec;
};

namespace {

thread_local std::string g_last_error;

grc_status to_status(gc::ErrorCode code) {
  switch (code) {
    case gc::ErrorCode::InvalidArgument: return GRC_INVALID_ARGUMENT;
    case gc::ErrorCode::InsufficientData: return GRC_INSUFFICIENT_DATA;
    case gc::ErrorCode::DegenerateInput: return GRC_DEGENERATE_INPUT;
    case gc::ErrorCode::DegenerateTargets: return GRC_DEGENERATE_TARGETS;
    case gc::ErrorCode::DegenerateResiduals: return GRC_DEGENERATE_RESIDUALS;
    case gc::ErrorCode::NumericalError: return GRC_NUMERICAL_ERROR;
    case gc::ErrorCode::TiesError: return GRC_TIES_ERROR;
    case gc::ErrorCode::DomainError: return GRC_DOMAIN_ERROR;
    case gc::ErrorCode::ResourceLimit: return GRC_RESOURCE_LIMIT;
    case gc::ErrorCode::ParseError: return GRC_PARSE_ERROR;
    case gc::ErrorCode::IoError: return GRC_IO_ERROR;
  }
  return GRC_INTERNAL_ERROR;
}

// Runs fn, translating exceptions into status codes at the boundary.
template <class F>
grc_status guarded(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GRC_OK;
  } catch (const gc::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GRC_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GRC_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return GRC_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) gc::fail(gc::ErrorCode::InvalidArgument, what);
}

gc::Matrix square_from(const double* a, size_t d) {
  require(a != nullptr && d > 0, "matrix pointer is null or empty");
  gc::Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i * d + j];
  return m;
}

void write_square(const gc::Matrix& m, double* out) {
  const auto d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
}

gc::SyntheticSpec spec_from(const grc_synth_spec* s) {
  require(s != nullptr, "spec is null");
  require(s->mechanism >= GRC_M1 && s->mechanism <= GRC_M4, "unknown mechanism");
  require(s->cause >= GRC_P1 && s->cause <= GRC_P3, "unknown cause distribution");
  require(s->noise >= GRC_NOISE_GENERALIZED_GAUSSIAN && s->noise <= GRC_NOISE_BIMODAL, "unknown noise");
  gc::SyntheticSpec spec;
  spec.mechanism = static_cast<gc::Mechanism>(s->mechanism);
  spec.cause = static_cast<gc::CauseDistribution>(s->cause);
  spec.noise = static_cast<gc::NoiseDistribution>(s->noise);
  spec.n = s->n;
  spec.seed = s->seed;
  return spec;
}

const gc::DirectionDiagnostics& side_of(const grc_diagnostics* d, grc_side side) {
  return side == GRC_ANTICAUSAL ? d->rec.anticausal : d->rec.causal;
}

// Enum names live in the library as string_views over literals, so they are
// null terminated.
const char* c_name(std::string_view s) { return s.data(); }

}  // namespace

extern "C" {

const char* grc_version(void) { return "0.1.0"; }

const char* grc_status_name(grc_status status) {
  switch (status) {
    case GRC_OK: return "ok";
    case GRC_OUT_OF_MEMORY: return "out-of-memory";
    case GRC_INTERNAL_ERROR: return "internal-error";
    default: break;
  }
  if (status >= GRC_INVALID_ARGUMENT && status <= GRC_IO_ERROR)
    return gc::to_string(static_cast<gc::ErrorCode>(status - 1));
  return "unknown";
}

const char* grc_last_error(void) { return g_last_error.c_str(); }

grc_status grc_method_parse(const char* name, grc_method* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = static_cast<grc_method>(gc::parse_method(name));
  });
}

const char* grc_method_name(grc_method method) { return c_name(gc::to_string(static_cast<gc::Method>(method))); }
const char* grc_direction_name(grc_direction d) { return c_name(gc::to_string(static_cast<gc::Direction>(d))); }

grc_status grc_mechanism_parse(const char* name, grc_mechanism* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = static_cast<grc_mechanism>(gc::parse_mechanism(name));
  });
}

grc_status grc_cause_parse(const char* name, grc_cause* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = static_cast<grc_cause>(gc::parse_cause(name));
  });
}

grc_status grc_noise_parse(const char* name, grc_noise* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = static_cast<grc_noise>(gc::parse_noise(name));
  });
}

const char* grc_mechanism_name(grc_mechanism m) { return c_name(gc::to_string(static_cast<gc::Mechanism>(m))); }
const char* grc_cause_name(grc_cause c) { return c_name(gc::to_string(static_cast<gc::CauseDistribution>(c))); }
const char* grc_noise_name(grc_noise e) { return c_name(gc::to_string(static_cast<gc::NoiseDistribution>(e))); }

// ---- pairs

grc_status grc_pair_create(const double* x, const double* y, size_t n, grc_pair** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    require(n == 0 || (x && y), "sample pointers are null");
    auto p = std::make_unique<grc_pair>();
    p->file.path = "<memory>";
    p->file.pair.x.assign(x, x + n);
    p->file.pair.y.assign(y, y + n);
    gc::validate_pair(p->file.pair, gc::kDefaultMinPairSize);
    p->file.tie_fraction_x = gc::tie_fraction(p->file.pair.x);
    p->file.tie_fraction_y = gc::tie_fraction(p->file.pair.y);
    *out = p.release();
  });
}

grc_status grc_pair_load(const char* path, grc_pair** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto p = std::make_unique<grc_pair>();
    p->file = gc::load_pair(path);
    *out = p.release();
  });
}

grc_status grc_pair_save(const grc_pair* pair, const char* path) {
  return guarded([&] {
    require(pair && path, "null argument");
    gc::save_pair(path, pair->file.pair);
  });
}

void grc_pair_free(grc_pair* pair) { delete pair; }
size_t grc_pair_size(const grc_pair* pair) { return pair ? pair->file.pair.size() : 0; }
const double* grc_pair_x(const grc_pair* pair) { return pair ? pair->file.pair.x.data() : nullptr; }
const double* grc_pair_y(const grc_pair* pair) { return pair ? pair->file.pair.y.data() : nullptr; }
double grc_pair_tie_fraction_x(const grc_pair* pair) { return pair ? pair->file.tie_fraction_x : 0.0; }
double grc_pair_tie_fraction_y(const grc_pair* pair) { return pair ? pair->file.tie_fraction_y : 0.0; }
size_t grc_pair_warning_count(const grc_pair* pair) { return pair ? pair->file.warnings.size() : 0; }

const char* grc_pair_warning(const grc_pair* pair, size_t index) {
  if (!pair || index >= pair->file.warnings.size()) return nullptr;
  return pair->file.warnings[index].c_str();
}

// ---- configuration

grc_status grc_config_create(grc_config** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = new grc_config{};
  });
}

void grc_config_free(grc_config* cfg) { delete cfg; }

grc_status grc_config_set_method(grc_config* cfg, grc_method method) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(method >= GRC_GRAN && method <= GRC_GRENT, "unknown method");
    cfg->cfg.method = static_cast<gc::Method>(method);
  });
}

grc_status grc_config_set_grid_size(grc_config* cfg, size_t grid_size) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(grid_size >= 1, "grid size must be positive");
    cfg->cfg.grid_size = grid_size;
  });
}

grc_status grc_config_set_folds(grc_config* cfg, size_t folds) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(folds >= 2, "need at least two folds");
    cfg->cfg.folds = folds;
  });
}

grc_status grc_config_set_seed(grc_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    cfg->cfg.seed = seed;
  });
}

grc_status grc_config_set_gamma_grid(grc_config* cfg, const double* values, size_t count) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(count == 0 || values, "grid pointer is null");
    gc::InferenceConfig next = cfg->cfg;
    next.gamma_grid.assign(values, values + count);
    gc::validate(next);
    cfg->cfg = std::move(next);
  });
}

grc_status grc_config_set_tau_grid(grc_config* cfg, const double* values, size_t count) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(count == 0 || values, "grid pointer is null");
    gc::InferenceConfig next = cfg->cfg;
    next.tau_grid.assign(values, values + count);
    gc::validate(next);
    cfg->cfg = std::move(next);
  });
}

grc_status grc_config_set_entropy_neighbors(grc_config* cfg, size_t k) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(k >= 1, "need at least one neighbour");
    cfg->cfg.entropy_neighbors = k;
  });
}

grc_status grc_config_set_tie_threshold(grc_config* cfg, double fraction) {
  return guarded([&] {
    require(cfg != nullptr, "config is null");
    require(fraction >= 0.0 && fraction <= 1.0, "tie threshold must lie in [0, 1]");
    cfg->cfg.tie_threshold = fraction;
  });
}

grc_status grc_infer(const grc_pair* pair, const grc_config* cfg, grc_decision* out) {
  return guarded([&] {
    require(pair && out, "null argument");
    const gc::InferenceConfig def;
    const gc::DirectionDecision d = gc::infer_direction(pair->file.pair, cfg ? cfg->cfg : def);
    grc_decision r{};
    r.direction = static_cast<grc_direction>(d.direction);
    r.confidence = d.confidence;
    r.g_xtilde = d.g_xtilde;
    r.g_ytilde = d.g_ytilde;
    for (int i = 0; i < 4; ++i) {
      r.stats[i] = d.stats[static_cast<size_t>(i)];
      r.gamma[i] = d.hyper[static_cast<size_t>(i)].gamma;
      r.tau[i] = d.hyper[static_cast<size_t>(i)].tau;
    }
    *out = r;
  });
}

// ---- scores

grc_status grc_energy_statistic(const double* z, size_t n, double* out) {
  return guarded([&] {
    require(z && out, "null argument");
    *out = gc::energy_statistic({z, n}).value;
  });
}

grc_status grc_kurtosis_score(const double* z, size_t n, double* out) {
  return guarded([&] {
    require(z && out, "null argument");
    *out = gc::kurtosis_score({z, n}).value;
  });
}

grc_status grc_knn_entropy(const double* z, size_t n, size_t k, double* out) {
  return guarded([&] {
    require(z && out, "null argument");
    *out = gc::knn_entropy({z, n}, k).value;
  });
}

// ---- synthetic benchmark

grc_status grc_synth_generate(const grc_synth_spec* spec, grc_pair** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    auto p = std::make_unique<grc_pair>();
    p->file.path = "<synthetic>";
    p->file.pair = gc::generate_pair(spec_from(spec));
    p->file.tie_fraction_x = gc::tie_fraction(p->file.pair.x);
    p->file.tie_fraction_y = gc::tie_fraction(p->file.pair.y);
    *out = p.release();
  });
}

grc_status grc_bench_run(const grc_synth_spec* spec, size_t repetitions, const grc_config* cfg,
                         grc_bench_result* out, int* decided, int* correct, double* confidence) {
  return guarded([&] {
    require(out != nullptr, "result pointer is null");
    const gc::InferenceConfig def;
    const gc::BenchResult r = gc::run_benchmark(spec_from(spec), repetitions, cfg ? cfg->cfg : def);
    out->repetitions = r.repetitions;
    out->decided = r.decided;
    out->correct = r.correct;
    out->undecided = r.undecided;
    out->accuracy = r.accuracy;
    for (size_t i = 0; i < r.outcomes.size(); ++i) {
      if (decided) decided[i] = r.outcomes[i].decided ? 1 : 0;
      if (correct) correct[i] = r.outcomes[i].correct ? 1 : 0;
      if (confidence) confidence[i] = r.outcomes[i].confidence;
    }
  });
}

grc_status grc_diagnose(const grc_synth_spec* spec, const grc_config* cfg, size_t grid_points,
                        size_t histogram_bins, grc_diagnostics** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    gc::DiagnosticsOptions opt;
    opt.grid_points = grid_points;
    opt.histogram_bins = histogram_bins;
    opt.preimages = grid_points > 0;
    const gc::InferenceConfig def;
    auto d = std::make_unique<grc_diagnostics>();
    d->rec = gc::residual_diagnostics(spec_from(spec), cfg ? cfg->cfg : def, opt);
    *out = d.release();
  });
}

void grc_diagnostics_free(grc_diagnostics* d) { delete d; }

double grc_diagnostics_energy(const grc_diagnostics* d, grc_side side) { return side_of(d, side).energy; }

void grc_diagnostics_hyper(const grc_diagnostics* d, grc_side side, double* gamma, double* tau) {
  const auto& s = side_of(d, side);
  if (gamma) *gamma = s.hyper.gamma;
  if (tau) *tau = s.hyper.tau;
}

void grc_diagnostics_fit(const grc_diagnostics* d, grc_side side, double* mean, double* sd) {
  const auto& s = side_of(d, side);
  if (mean) *mean = s.fit_mean;
  if (sd) *sd = s.fit_sd;
}

const double* grc_diagnostics_component(const grc_diagnostics* d, grc_side side, size_t* length) {
  const auto& s = side_of(d, side);
  if (length) *length = s.first_component.size();
  return s.first_component.data();
}

void grc_diagnostics_histogram(const grc_diagnostics* d, grc_side side, size_t* bins, const double** edges,
                               const double** density) {
  const auto& s = side_of(d, side);
  if (bins) *bins = s.hist.density.size();
  if (edges) *edges = s.hist.edges.data();
  if (density) *density = s.hist.density.data();
}

void grc_diagnostics_preimages(const grc_diagnostics* d, grc_side side, size_t* length, const double** grid,
                               const double** values) {
  const auto& s = side_of(d, side);
  if (length) *length = s.grid.size();
  if (grid) *grid = s.grid.data();
  if (values) *values = s.preimages.data();
}

// ---- lab

grc_status grc_cumulant_factor(double w, int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    *out = gc::cumulant_factor(w, n);
  });
}

grc_status grc_mn_op_norm(const double* a, size_t d, int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    *out = gc::build_mn(gc::MixingMatrix::from(square_from(a, d)), n).op_norm;
  });
}

grc_status grc_mn_matrix(const double* a, size_t d, int n, double* m, size_t capacity, size_t* dim) {
  return guarded([&] {
    require(m && dim, "null argument");
    const gc::CumulantRelation rel = gc::build_mn(gc::MixingMatrix::from(square_from(a, d)), n);
    const auto size = static_cast<size_t>(rel.m.rows());
    require(capacity >= size * size, "output buffer too small");
    write_square(rel.m, m);
    *dim = size;
  });
}

grc_status grc_symmetric_op_norm(const double* eigenvalues, size_t d, int n, double* out) {
  return guarded([&] {
    require(eigenvalues && out, "null argument");
    *out = gc::symmetric_op_norm({eigenvalues, d}, n);
  });
}

grc_status grc_determinant_check(const double* a, size_t d, double* det_aat, double* det_ata) {
  return guarded([&] {
    require(det_aat && det_ata, "null argument");
    const auto [l, r] = gc::determinant_identity_check(gc::MixingMatrix::from(square_from(a, d)));
    *det_aat = l;
    *det_ata = r;
  });
}

grc_status grc_second_cumulant_ratio(const double* a, size_t d, double* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    *out = gc::second_cumulant_ratio(gc::MixingMatrix::from(square_from(a, d)));
  });
}

grc_status grc_hermite_moments(double* h2, double* h3) {
  return guarded([&] {
    require(h2 && h3, "null argument");
    *h2 = gc::hermite_moment_h2();
    *h3 = gc::hermite_moment_h3();
  });
}

grc_status grc_gram_charlier_energy(double kappa3, double kappa4, double* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    *out = gc::gram_charlier_energy(kappa3, kappa4);
  });
}

grc_status grc_projection_check(const double* a, size_t d, int n, double* c, double* residual, int* degenerate_top) {
  return guarded([&] {
    require(c != nullptr, "output is null");
    const gc::ProjectionCheck p = gc::projected_shrinkage_check(gc::MixingMatrix::from(square_from(a, d)), n);
    *c = p.c;
    if (residual) *residual = p.residual;
    if (degenerate_top) *degenerate_top = p.degenerate_top ? 1 : 0;
  });
}

grc_status grc_random_mixing_matrix(const double* singular_values, size_t d, uint64_t seed, double* out) {
  return guarded([&] {
    require(singular_values && out, "null argument");
    write_square(gc::random_mixing_matrix({singular_values, d}, seed), out);
  });
}

grc_status grc_random_symmetric_matrix(const double* eigenvalues, size_t d, uint64_t seed, double* out) {
  return guarded([&] {
    require(eigenvalues && out, "null argument");
    write_square(gc::random_symmetric_matrix({eigenvalues, d}, seed), out);
  });
}

grc_status grc_decision_rate_curve(const int* correct, const double* confidence, size_t n, double* thresholds,
                                   double* decision_fraction, double* accuracy) {
  return guarded([&] {
    require(n == 0 || (correct && confidence), "null input");
    std::vector<gc::DecisionResult> results(n);
    for (size_t i = 0; i < n; ++i) results[i] = {correct[i] != 0, confidence[i]};
    const gc::DecisionRateCurve c = gc::decision_rate_curve(results);
    for (size_t i = 0; i < n; ++i) {
      if (thresholds) thresholds[i] = c.thresholds[i];
      if (decision_fraction) decision_fraction[i] = c.decision_fraction[i];
      if (accuracy) accuracy[i] = c.accuracy[i];
    }
  });
}

}  // extern "C"
