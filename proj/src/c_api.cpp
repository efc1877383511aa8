#include "dls/dls.h"

#include <cstdio>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "dls/atomic.hpp"
#include "dls/config.hpp"
#include "dls/errors.hpp"
#include "dls/experiments.hpp"
#include "dls/lasing.hpp"

struct dls_config {
  dls::ExperimentConfig cfg;
};

struct dls_result {
  dls::RunOutput out;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs fn, mapping exceptions onto status codes.
template <class F>
int guarded(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DLS_OK;
  } catch (const dls::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DLS_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DLS_ERR_NUMERICAL, e.what());
  }
}

dls::ThreeLevelParams convert(const dls_three_level_params& p) {
  dls::ThreeLevelParams t;
  t.omega_L = p.omega_L;
  t.omega_P = p.omega_P;
  t.delta_p = p.delta_p;
  t.delta_diff = p.delta_diff;
  t.gamma_eff = p.gamma_eff;
  t.gamma_3 = p.gamma_3;
  t.direction = p.depletion ? dls::PumpDirection::depletion : dls::PumpDirection::gain;
  t.branch_to_1 = p.branch_to_1;
  return t;
}

}  // namespace

extern "C" {

const char* dls_last_error(void) { return g_last_error.c_str(); }

const char* dls_status_name(int status) {
  if (status == DLS_ERR_INVALID_ARGUMENT) return "invalid_argument";
  if (status < 0 || status > DLS_ERR_NUMERICAL) return "unknown";
  return dls::error_name(static_cast<dls::ErrorCode>(status));
}

int dls_config_default(dls_config** out) {
  if (!out) return fail(DLS_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new dls_config{}; });
}

int dls_config_load(const char* path, dls_config** out) {
  if (!path || !out) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new dls_config{dls::load_config(path)}; });
}

int dls_config_parse(const char* text, dls_config** out) {
  if (!text || !out) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new dls_config{dls::parse_config(text)}; });
}

int dls_config_set_experiment(dls_config* cfg, const char* name) {
  if (!cfg || !name) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { cfg->cfg.experiment = dls::parse_experiment(name); });
}

const char* dls_config_experiment(const dls_config* cfg) {
  return cfg ? dls::experiment_name(cfg->cfg.experiment) : "";
}

const char* dls_config_output_dir(const dls_config* cfg) { return cfg ? cfg->cfg.output.dir.c_str() : ""; }

int dls_config_write(const dls_config* cfg, const char* path) {
  if (!cfg || !path) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    FILE* f = std::fopen(path, "wb");
    if (!f) throw dls::Error(dls::ErrorCode::io, std::string("cannot write '") + path + "'");
    const std::string body = dls::format_config(cfg->cfg);
    const bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size();
    if (std::fclose(f) != 0 || !ok) throw dls::Error(dls::ErrorCode::io, std::string("write failed for '") + path + "'");
  });
}

void dls_config_free(dls_config* cfg) { delete cfg; }

int dls_run(const dls_config* cfg, const char* out_dir, int workers, dls_result** out) {
  if (!cfg || !out) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  if (workers < 1) return fail(DLS_ERR_INVALID_ARGUMENT, "workers must be at least 1");
  return guarded([&] {
    const std::string dir = out_dir ? out_dir : cfg->cfg.output.dir;
    auto* r = new dls_result{dls::run_experiment(cfg->cfg, dir, workers)};
    *out = r;
  });
}

int dls_result_exit_code(const dls_result* r) { return r ? r->out.exit_code : -1; }
const char* dls_result_report(const dls_result* r) { return r ? r->out.report.c_str() : ""; }
size_t dls_result_file_count(const dls_result* r) { return r ? r->out.files.size() : 0; }
const char* dls_result_file(const dls_result* r, size_t i) {
  return r && i < r->out.files.size() ? r->out.files[i].c_str() : nullptr;
}
double dls_result_seconds(const dls_result* r) { return r ? r->out.seconds : 0.0; }
void dls_result_free(dls_result* r) { delete r; }

int dls_three_level_steady_state(const dls_three_level_params* p, double rho_re[9], double rho_im[9]) {
  if (!p || !rho_re || !rho_im) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto s = dls::three_level_steady_state(convert(*p));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        rho_re[3 * i + j] = s.rho(i, j).real();
        rho_im[3 * i + j] = s.rho(i, j).imag();
      }
  });
}

int dls_two_level_rho21(const dls_three_level_params* p, double* re, double* im) {
  if (!p || !re || !im) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto e = dls::build_effective_two_level(convert(*p));
    const auto s = dls::two_level_steady_state(e);
    *re = s.rho21.real();
    *im = s.rho21.imag();
  });
}

int dls_shift_ratio_analytic(double n_g, double* ratio) {
  if (!ratio) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *ratio = dls::shift_ratio_analytic(n_g); });
}

int dls_solve_linear_shift(double n_g, double delta_P_hz, double* delta_L_hz) {
  if (!delta_L_hz) return fail(DLS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    dls::PumpShiftScenario s;
    s.medium = dls::calibrate_linear(n_g, s.cavity.omega_L0);
    s.delta_P = dls::hz_to_rad(delta_P_hz);
    *delta_L_hz = dls::rad_to_hz(dls::solve_lasing_frequency(s).delta_L);
  });
}

}  // extern "C"
