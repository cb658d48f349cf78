#include "creutz/creutz.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "creutz/bands.hpp"
#include "creutz/error.hpp"
#include "creutz/fitting.hpp"
#include "creutz/io/commands.hpp"
#include "creutz/response.hpp"
#include "creutz/version.hpp"

struct creutz_hamiltonian {
  creutz::RealSpaceHamiltonian h;
};
struct creutz_bands {
  creutz::BandStructure b;
};
struct creutz_cls {
  creutz::CompactLocalizedState s;
};
struct creutz_steady_state {
  creutz::SteadyState s;
};
struct creutz_result {
  std::string metadata;
  std::vector<creutz::io::BundleFile> files;
};

namespace {

thread_local std::string last_error;

creutz_status fail(creutz_status code, const char* what) {
  last_error = what;
  return code;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
creutz_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return CREUTZ_OK;
  } catch (const creutz::ConfigError& e) {
    return fail(CREUTZ_ERR_CONFIG, e.what());
  } catch (const creutz::InvalidParameter& e) {
    return fail(CREUTZ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const creutz::NumericalError& e) {
    return fail(CREUTZ_ERR_NUMERICAL, e.what());
  } catch (const creutz::IoError& e) {
    return fail(CREUTZ_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CREUTZ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CREUTZ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CREUTZ_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (!p) throw creutz::InvalidParameter(std::string(name) + " is null");
}

creutz::LatticeParams to_params(const creutz_params* p) {
  need(p, "params");
  return {p->omega1_mhz, p->omega2_mhz, p->delta_c_mhz, p->phi_rad};
}

creutz::Leg to_leg(creutz_leg leg) {
  if (leg != CREUTZ_LEG_A && leg != CREUTZ_LEG_B) throw creutz::InvalidParameter("invalid leg");
  return leg == CREUTZ_LEG_A ? creutz::Leg::A : creutz::Leg::B;
}

creutz::ProbeConfig to_probe(const creutz_probe* p) {
  need(p, "probe");
  creutz::ProbeConfig c;
  c.probed_leg = to_leg(p->leg);
  c.detuning_mhz = p->detuning_mhz;
  c.omega_p = p->omega_p;
  c.gamma_a_mhz = p->gamma_a_mhz;
  c.gamma_b_mhz = p->gamma_b_mhz;
  return c;
}

}  // namespace

extern "C" {

const char* creutz_version(void) { return creutz::kVersion; }

const char* creutz_last_error(void) { return last_error.c_str(); }

creutz_params creutz_default_params(void) {
  const creutz::io::RunConfig cfg;
  return {cfg.lattice.omega1_mhz, cfg.lattice.omega2_mhz, cfg.lattice.delta_c_mhz, cfg.lattice.phi};
}

creutz_probe creutz_default_probe(void) {
  const creutz::ProbeConfig p;
  return {p.probed_leg == creutz::Leg::A ? CREUTZ_LEG_A : CREUTZ_LEG_B, p.detuning_mhz, p.omega_p,
          p.gamma_a_mhz, p.gamma_b_mhz};
}

creutz_status creutz_hoppings_derive(const creutz_params* params, creutz_hoppings* out) {
  return guarded([&] {
    need(out, "out");
    const creutz::Hoppings t = creutz::derive_hoppings(to_params(params));
    *out = {t.t1, t.t2, t.t3, t.eta.value_or(std::numeric_limits<double>::quiet_NaN())};
  });
}

creutz_status creutz_hamiltonian_create(const creutz_params* params, int n_cells,
                                        creutz_hamiltonian** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new creutz_hamiltonian{creutz::build_real_space(to_params(params), n_cells)};
  });
}

void creutz_hamiltonian_destroy(creutz_hamiltonian* h) { delete h; }

int creutz_hamiltonian_dim(const creutz_hamiltonian* h) {
  return h ? static_cast<int>(h->h.matrix.rows()) : 0;
}

creutz_status creutz_hamiltonian_element(const creutz_hamiltonian* h, int row, int col, double* re,
                                         double* im) {
  return guarded([&] {
    need(h, "hamiltonian");
    need(re, "re");
    need(im, "im");
    const int n = static_cast<int>(h->h.matrix.rows());
    if (row < 0 || col < 0 || row >= n || col >= n)
      throw creutz::InvalidParameter("matrix index out of range");
    const auto v = h->h.matrix(row, col);
    *re = v.real();
    *im = v.imag();
  });
}

creutz_status creutz_bands_compute(const creutz_params* params, int n_k, int threads,
                                   creutz_bands** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new creutz_bands{creutz::compute_bands(to_params(params), n_k, threads)};
  });
}

void creutz_bands_destroy(creutz_bands* b) { delete b; }

size_t creutz_bands_size(const creutz_bands* b) { return b ? b->b.size() : 0; }

creutz_status creutz_bands_get(const creutz_bands* b, size_t index, int branch, double* k,
                               double* energy, double* sigma_z) {
  return guarded([&] {
    need(b, "bands");
    if (index >= b->b.size() || (branch != 0 && branch != 1))
      throw creutz::InvalidParameter("band index out of range");
    const auto br = static_cast<std::size_t>(branch);
    if (k) *k = b->b.k_grid[index];
    if (energy) *energy = b->b.energies[index][br];
    if (sigma_z) *sigma_z = b->b.polarization[index][br];
  });
}

creutz_status creutz_band_gap(const creutz_params* params, int n_k, double* gap_mhz) {
  return guarded([&] {
    need(gap_mhz, "gap_mhz");
    *gap_mhz = creutz::band_gap(to_params(params), n_k);
  });
}

creutz_status creutz_cls_build(const creutz_params* params, int cell, int literal_eta,
                               creutz_cls** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const auto coef = literal_eta ? creutz::ClsCoefficient::LiteralEta
                                  : creutz::ClsCoefficient::EigenCondition;
    *out = new creutz_cls{creutz::build_cls(to_params(params), cell, coef)};
  });
}

void creutz_cls_destroy(creutz_cls* c) { delete c; }

size_t creutz_cls_size(const creutz_cls* c) { return c ? c->s.sites.size() : 0; }

creutz_status creutz_cls_site(const creutz_cls* c, size_t index, creutz_leg* leg, int* cell,
                              double* re, double* im) {
  return guarded([&] {
    need(c, "cls");
    if (index >= c->s.sites.size()) throw creutz::InvalidParameter("site index out of range");
    const auto& s = c->s.sites[index];
    if (leg) *leg = s.leg == creutz::Leg::A ? CREUTZ_LEG_A : CREUTZ_LEG_B;
    if (cell) *cell = s.cell;
    if (re) *re = s.amplitude.real();
    if (im) *im = s.amplitude.imag();
  });
}

creutz_status creutz_cls_residual(const creutz_cls* c, const creutz_hamiltonian* h,
                                  double* residual_mhz) {
  return guarded([&] {
    need(c, "cls");
    need(h, "hamiltonian");
    need(residual_mhz, "residual_mhz");
    *residual_mhz = creutz::verify_cls(c->s, h->h);
  });
}

creutz_status creutz_steady_state_solve(const creutz_params* params, const creutz_probe* probe,
                                        int n_cells, creutz_steady_state** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new creutz_steady_state{creutz::steady_state(to_params(params), to_probe(probe), n_cells)};
  });
}

void creutz_steady_state_destroy(creutz_steady_state* s) { delete s; }

creutz_status creutz_steady_state_amplitude(const creutz_steady_state* s, creutz_leg leg, int cell,
                                            double* re, double* im) {
  return guarded([&] {
    need(s, "steady_state");
    const auto v = s->s.amplitude(to_leg(leg), cell);
    if (re) *re = v.real();
    if (im) *im = v.imag();
  });
}

creutz_status creutz_steady_state_ratio(const creutz_steady_state* s, double* ratio,
                                        double* boundary_ratio) {
  return guarded([&] {
    need(s, "steady_state");
    if (ratio) *ratio = s->s.neighbor_ratio;
    if (boundary_ratio) *boundary_ratio = s->s.boundary_ratio;
  });
}

creutz_status creutz_spectrum(const creutz_params* params, const creutz_probe* probe,
                              const double* detunings, size_t n, int n_cells, int threads,
                              double* out_values, double* r_bar) {
  return guarded([&] {
    need(detunings, "detunings");
    need(out_values, "out_values");
    creutz::SpectrumOptions opts;
    opts.n_cells = n_cells;
    opts.threads = threads;
    const creutz::Spectrum s = creutz::spectrum(to_params(params), to_probe(probe),
                                                std::vector<double>(detunings, detunings + n), opts);
    std::copy(s.values.begin(), s.values.end(), out_values);
    if (r_bar) *r_bar = s.r_bar;
  });
}

creutz_status creutz_averaged_reflectivity(const double* detunings, const double* values, size_t n,
                                           double lo, double hi, double* out) {
  return guarded([&] {
    need(detunings, "detunings");
    need(values, "values");
    need(out, "out");
    *out = creutz::averaged_reflectivity(std::vector<double>(detunings, detunings + n),
                                         std::vector<double>(values, values + n), lo, hi);
  });
}

creutz_status creutz_fit_sinusoid(const double* phi, const double* values, size_t n, double* offset,
                                  double* amplitude, double* phase, double* rms_residual) {
  return guarded([&] {
    need(phi, "phi");
    need(values, "values");
    const creutz::SinusoidFit f = creutz::fit_sinusoid(std::vector<double>(phi, phi + n),
                                                       std::vector<double>(values, values + n));
    if (offset) *offset = f.offset;
    if (amplitude) *amplitude = f.amplitude;
    if (phase) *phase = f.phase;
    if (rms_residual) *rms_residual = f.rms_residual;
  });
}

creutz_status creutz_fit_ellipse(const double* x, const double* y, size_t n, double conic[6],
                                 double* phase_difference, int* degenerate, double* rms_residual) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    std::vector<creutz::Point2> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i]};
    const creutz::EllipseFit f = creutz::fit_ellipse(pts);
    if (conic) std::copy(f.conic.begin(), f.conic.end(), conic);
    if (phase_difference) *phase_difference = f.phase_difference;
    if (degenerate) *degenerate = f.degenerate ? 1 : 0;
    if (rms_residual) *rms_residual = f.rms_residual;
  });
}

creutz_status creutz_run(const char* command, const char* config_json,
                         const creutz_run_options* options, creutz_result** out) {
  return guarded([&] {
    need(command, "command");
    need(out, "out");
    *out = nullptr;
    creutz::io::RunConfig cfg = creutz::io::parse_config_text(config_json ? config_json : "");
    creutz::io::CommandOptions opts;
    if (options) {
      opts.threads = options->threads > 0 ? options->threads : 1;
      if (options->svg) cfg.svg = true;
      if (options->input_path) opts.input_path = options->input_path;
      if (options->x_column) opts.x_column = options->x_column;
      if (options->y_column) opts.y_column = options->y_column;
      if (options->plus_convention) opts.convention = creutz::io::PhaseConvention::PlusU;
    }
    const creutz::io::ResultBundle bundle = creutz::io::run_command(command, cfg, opts);
    if (options && options->write_files)
      creutz::io::write_bundle(bundle, options->out_dir ? options->out_dir : cfg.output_directory);
    *out = new creutz_result{creutz::io::dump_json(bundle.metadata()), bundle.files};
  });
}

void creutz_result_destroy(creutz_result* r) { delete r; }

const char* creutz_result_metadata(const creutz_result* r) { return r ? r->metadata.c_str() : ""; }

size_t creutz_result_file_count(const creutz_result* r) { return r ? r->files.size() : 0; }

const char* creutz_result_file_name(const creutz_result* r, size_t index) {
  if (!r || index >= r->files.size()) return nullptr;
  return r->files[index].name.c_str();
}

const char* creutz_result_file_content(const creutz_result* r, size_t index, size_t* length) {
  if (!r || index >= r->files.size()) return nullptr;
  if (length) *length = r->files[index].content.size();
  return r->files[index].content.c_str();
}

creutz_status creutz_config_resolve(const char* config_json, char** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const std::string text =
        creutz::io::dump_json(creutz::io::resolved_json(creutz::io::parse_config_text(config_json ? config_json : "")));
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void creutz_string_free(char* s) { std::free(s); }

}  // extern "C"
