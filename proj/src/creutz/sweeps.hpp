#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "creutz/fitting.hpp"
#include "creutz/lattice.hpp"
#include "creutz/response.hpp"

namespace creutz {

/// Re-balance the drive for a target eta = (omega2/omega1)^2 while holding
/// omega1 * omega2 (hence t3) fixed: omega1 = W0 eta^(-1/4),
/// omega2 = W0 eta^(1/4), W0 = sqrt(omega1 * omega2) of `reference`.
LatticeParams params_for_eta(const LatticeParams& reference, double eta);

/// n uniform points 0, 2*pi/n, ..., 2*pi*(n-1)/n.
std::vector<double> uniform_phi_grid(int n);

// Grids with fewer points than this have their extrema flagged.
inline constexpr int kLowResolutionPoints = 16;

struct Extremum {
  double phi = 0.0;    // parabola vertex, reduced to [0, 2*pi)
  double value = 0.0;
  std::size_t grid_index = 0;
};

struct CurveExtrema {
  Extremum max;
  Extremum min;
};

/// Grid extremum refined by a parabola through it and its two periodic
/// neighbours.
CurveExtrema locate_extrema(const std::vector<double>& phi_grid, const std::vector<double>& values);

struct SweepDataset {
  double eta = 0.0;
  LatticeParams lattice;  // phi ignored
  std::vector<double> phi_grid;
  // R-bar with leg b probed at phi, and R-bar_{1/eta}(-phi), obtained as in
  // the experiment from the leg-a probe of the same lattice at phi.
  std::vector<double> r_bar_eta;
  std::vector<double> r_bar_inv_eta;
  // |x_1/x_0|^2 at the single probe detuning for the same two probes.
  std::vector<double> ratio_eta;
  std::vector<double> ratio_inv_eta;
  CurveExtrema r_bar_eta_extrema, r_bar_inv_eta_extrema;
  CurveExtrema ratio_eta_extrema, ratio_inv_eta_extrema;
  bool low_resolution = false;
  int unconverged_points = 0;
  double worst_boundary_ratio = 0.0;
};

struct SweepOptions {
  int n_cells = kDefaultCells;
  int threads = 1;
  std::vector<double> detunings;  // default_detuning_grid when empty
  std::optional<std::pair<double, double>> window;  // band window per phi when empty
  VelocityModel doppler;
  bool include_inverse = true;  // leg-a curves
  bool include_ratio = true;    // single-detuning curves
};

/// Sweeps phi on `lattice` (its phi is overwritten). probe.detuning_mhz sets
/// the detuning of the single-detuning curves; probe.probed_leg is ignored.
SweepDataset phi_sweep(const LatticeParams& lattice, const ProbeConfig& probe,
                       const std::vector<double>& phi_grid, const SweepOptions& opts = {});

struct ProfileDataset {
  double eta = 0.0;
  double phi = 0.0;
  std::vector<int> cells;
  std::vector<double> prob_b;  // |beta_j|^2 / |beta_0|^2
  double prob(int cell) const;
};

/// b-leg steady-state distribution for a leg-b probe at probe.detuning_mhz,
/// reported for cells -radius..radius.
ProfileDataset profile(const LatticeParams& params, const ProbeConfig& probe,
                       int n_cells = kDefaultCells, int radius = 20);

/// (P(1) - P(-1)) / (P(1) + P(-1)); 0 when both vanish.
double chiral_asymmetry(const ProfileDataset& profile);

struct EtaMean {
  double eta;
  double mean_r_bar;
};

/// Mean over phi of R-bar_eta(phi) for each eta at fixed t3.
std::vector<EtaMean> mean_reflectivity_vs_eta(const LatticeParams& reference,
                                              const std::vector<double>& etas,
                                              const ProbeConfig& probe,
                                              const std::vector<double>& phi_grid,
                                              const SweepOptions& opts = {});

/// Ellipse fit of the point set {(R-bar_eta(phi), R-bar_{1/eta}(-phi))}.
EllipseFit lissajous_fit(const SweepDataset& data);

}  // namespace creutz
