#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "creutz/lattice.hpp"

namespace creutz {

struct ProbeConfig {
  Leg probed_leg = Leg::B;
  double detuning_mhz = -2.0;  // Delta_p (leg b) or Delta'_p (leg a)
  double omega_p = 1.0;        // sqrt(N) * Omega_p, arbitrary scale
  double gamma_a_mhz = 2.3;
  double gamma_b_mhz = 2.3;

  double gamma(Leg leg) const { return leg == Leg::A ? gamma_a_mhz : gamma_b_mhz; }
  double gamma_max() const { return std::max(gamma_a_mhz, gamma_b_mhz); }
};

void validate(const ProbeConfig& probe);

// Boundary-cell amplitude relative to the probed site above which a solve is
// reported as not converged in n_cells.
inline constexpr double kBoundaryTolerance = 1e-6;

inline constexpr int kDefaultCells = 601;

struct SteadyState {
  LadderLayout layout{3};
  Leg probed_leg = Leg::B;
  double detuning_mhz = 0.0;
  std::vector<cplx> alpha;  // a-leg amplitudes, index cell + half
  std::vector<cplx> beta;   // b-leg amplitudes
  cplx probed_amplitude;
  double neighbor_ratio = 0.0;  // |x_1 / x_0|^2 on the probed leg
  double boundary_ratio = 0.0;  // largest boundary-cell magnitude / |x_0|
  bool converged = true;

  cplx amplitude(Leg leg, int cell) const;
};

/// Solves (Delta I + i Gamma - H) x = omega_p e_probe on the truncated ladder,
/// Gamma = diag(gamma_a, gamma_b) per cell. `cell_detuning_slope` adds
/// j * slope to the detuning of cell j (Doppler tilt).
std::vector<cplx> solve_response(const LatticeParams& params, const ProbeConfig& probe,
                                 const LadderLayout& layout, double cell_detuning_slope = 0.0);

SteadyState steady_state(const LatticeParams& params, const ProbeConfig& probe,
                         int n_cells = kDefaultCells);

struct Spectrum {
  std::vector<double> detunings;
  std::vector<double> values;
  std::pair<double, double> window{0.0, 0.0};
  double r_bar = 0.0;  // NaN when the window misses the grid
  int unconverged_points = 0;
  double worst_boundary_ratio = 0.0;
};

/// 601 points spanning +-(4|t1| + 4|t2| + 10) MHz.
std::vector<double> default_detuning_grid(const LatticeParams& params, int points = 601);

/// Dispersive band range widened by 2 * max(gamma_a, gamma_b).
std::pair<double, double> default_window(const LatticeParams& params, const ProbeConfig& probe);

struct SpectrumOptions {
  int n_cells = kDefaultCells;
  int threads = 1;
  std::optional<std::pair<double, double>> window;  // default_window when empty
};

/// Reflectivity proxy R = |x_1/x_0|^2 on the probed leg for every detuning.
/// probe.detuning_mhz is ignored.
Spectrum spectrum(const LatticeParams& params, const ProbeConfig& probe,
                  const std::vector<double>& detunings, const SpectrumOptions& opts = {});

struct VelocityModel {
  enum class Kind { None, Gaussian };
  Kind kind = Kind::None;
  double sigma_mhz = 0.0;     // width of the probe Doppler shift distribution
  int n_classes = 11;
  double cutoff_sigmas = 3.0;
  double tilt_ratio = 2.0;    // per-cell tilt / probe shift = 2 k_c / k_p

  // (probe Doppler shift in MHz, normalized weight) per velocity class.
  std::vector<std::pair<double, double>> classes() const;
};

/// Velocity class with probe shift d sees detuning Delta - d on cell 0 and
/// Delta - d + j * tilt_ratio * d on cell j. The per-class spectra are
/// averaged with normalized Gaussian weights.
Spectrum doppler_average(const LatticeParams& params, const ProbeConfig& probe,
                         const std::vector<double>& detunings, const VelocityModel& model,
                         const SpectrumOptions& opts = {});

/// R-bar over the averaging window, solving only at the grid points the
/// window touches. Equals spectrum(...).r_bar / doppler_average(...).r_bar.
double band_averaged_reflectivity(const LatticeParams& params, const ProbeConfig& probe,
                                  const std::vector<double>& detunings,
                                  const VelocityModel& model, const SpectrumOptions& opts = {});

/// Trapezoidal mean of piecewise-linear R over [lo, hi] clipped to the grid.
double averaged_reflectivity(const std::vector<double>& detunings,
                             const std::vector<double>& values, double lo, double hi);
double averaged_reflectivity(const Spectrum& spec, std::pair<double, double> window);

struct PeakSummary {
  double value = 0.0;
  double detuning_mhz = 0.0;
  double fwhm_mhz = 0.0;       // full width where R crosses value / 2
  bool width_truncated = false;  // a half-maximum crossing fell off the grid
};

/// Global maximum and its half-maximum width, with linear interpolation of
/// the crossings.
PeakSummary summarize_peak(const std::vector<double>& detunings, const std::vector<double>& values);

/// Indices [first, last] of grid points needed to integrate over [lo, hi].
std::pair<std::size_t, std::size_t> window_support(const std::vector<double>& detunings,
                                                   double lo, double hi);

}  // namespace creutz
