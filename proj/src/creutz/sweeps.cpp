#include "creutz/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "creutz/error.hpp"
#include "creutz/parallel.hpp"

namespace creutz {

namespace {
constexpr double pi = std::numbers::pi;
}

LatticeParams params_for_eta(const LatticeParams& reference, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("eta must be positive");
  validate(reference);
  const double w0 = std::sqrt(reference.omega1_mhz * reference.omega2_mhz);
  if (!(w0 > 0.0)) throw InvalidParameter("reference drive must have omega1 * omega2 > 0");
  LatticeParams out = reference;
  const double q = std::pow(eta, 0.25);
  out.omega1_mhz = w0 / q;
  out.omega2_mhz = w0 * q;
  return out;
}

std::vector<double> uniform_phi_grid(int n) {
  if (n < 3) throw InvalidParameter("phi grid needs at least 3 points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = 2.0 * pi * i / n;
  return g;
}

namespace {

void check_phi_grid(const std::vector<double>& g) {
  if (g.size() < 3) throw InvalidParameter("phi grid needs at least 3 points");
  const double step = 2.0 * pi / static_cast<double>(g.size());
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs(g[i] - g[i - 1] - step) > 1e-9)
      throw InvalidParameter("phi grid must be uniform over one period [phi0, phi0 + 2*pi)");
}

Extremum refine(const std::vector<double>& phi, const std::vector<double>& v, std::size_t i) {
  const std::size_t n = v.size();
  const double ym = v[(i + n - 1) % n];
  const double y0 = v[i];
  const double yp = v[(i + 1) % n];
  const double curvature = ym - 2.0 * y0 + yp;
  double delta = 0.0;
  if (curvature != 0.0) delta = std::clamp(0.5 * (ym - yp) / curvature, -1.0, 1.0);
  const double step = 2.0 * pi / static_cast<double>(n);
  return {reduce_angle(phi[i] + delta * step), y0 - 0.25 * (ym - yp) * delta, i};
}

}  // namespace

CurveExtrema locate_extrema(const std::vector<double>& phi_grid, const std::vector<double>& values) {
  check_phi_grid(phi_grid);
  if (values.size() != phi_grid.size()) throw InvalidParameter("curve length differs from grid");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {refine(phi_grid, values, static_cast<std::size_t>(hi - values.begin())),
          refine(phi_grid, values, static_cast<std::size_t>(lo - values.begin()))};
}

SweepDataset phi_sweep(const LatticeParams& lattice, const ProbeConfig& probe,
                       const std::vector<double>& phi_grid, const SweepOptions& opts) {
  check_phi_grid(phi_grid);
  validate(lattice);
  validate(probe);
  const std::size_t n = phi_grid.size();
  SweepDataset ds;
  ds.lattice = lattice;
  ds.eta = derive_hoppings(lattice).eta.value_or(std::numeric_limits<double>::infinity());
  ds.phi_grid = phi_grid;
  ds.low_resolution = n < static_cast<std::size_t>(kLowResolutionPoints);
  ds.r_bar_eta.assign(n, 0.0);
  if (opts.include_inverse) ds.r_bar_inv_eta.assign(n, 0.0);
  if (opts.include_ratio) {
    ds.ratio_eta.assign(n, 0.0);
    if (opts.include_inverse) ds.ratio_inv_eta.assign(n, 0.0);
  }
  const std::vector<double> detunings =
      opts.detunings.empty() ? default_detuning_grid(lattice) : opts.detunings;
  std::vector<double> boundary(n, 0.0);

  SpectrumOptions spec_opts;
  spec_opts.n_cells = opts.n_cells;
  spec_opts.threads = 1;
  spec_opts.window = opts.window;

  parallel_for(n, opts.threads, [&](std::size_t i) {
    LatticeParams p = lattice;
    p.phi = phi_grid[i];
    ProbeConfig pb = probe;
    pb.probed_leg = Leg::B;
    ProbeConfig pa = probe;
    pa.probed_leg = Leg::A;
    double edge = 0.0;
    ds.r_bar_eta[i] = band_averaged_reflectivity(p, pb, detunings, opts.doppler, spec_opts);
    if (opts.include_inverse)
      ds.r_bar_inv_eta[i] = band_averaged_reflectivity(p, pa, detunings, opts.doppler, spec_opts);
    if (opts.include_ratio) {
      const SteadyState sb = steady_state(p, pb, opts.n_cells);
      ds.ratio_eta[i] = sb.neighbor_ratio;
      edge = std::max(edge, sb.boundary_ratio);
      if (opts.include_inverse) {
        const SteadyState sa = steady_state(p, pa, opts.n_cells);
        ds.ratio_inv_eta[i] = sa.neighbor_ratio;
        edge = std::max(edge, sa.boundary_ratio);
      }
    }
    boundary[i] = edge;
  });
  for (double b : boundary) {
    ds.worst_boundary_ratio = std::max(ds.worst_boundary_ratio, b);
    if (!(b < kBoundaryTolerance)) ++ds.unconverged_points;
  }

  ds.r_bar_eta_extrema = locate_extrema(phi_grid, ds.r_bar_eta);
  if (opts.include_inverse) ds.r_bar_inv_eta_extrema = locate_extrema(phi_grid, ds.r_bar_inv_eta);
  if (opts.include_ratio) {
    ds.ratio_eta_extrema = locate_extrema(phi_grid, ds.ratio_eta);
    if (opts.include_inverse) ds.ratio_inv_eta_extrema = locate_extrema(phi_grid, ds.ratio_inv_eta);
  }
  return ds;
}

double ProfileDataset::prob(int cell) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i] == cell) return prob_b[i];
  throw InvalidParameter("cell " + std::to_string(cell) + " not in profile");
}

ProfileDataset profile(const LatticeParams& params, const ProbeConfig& probe, int n_cells,
                       int radius) {
  ProbeConfig pb = probe;
  pb.probed_leg = Leg::B;
  const SteadyState s = steady_state(params, pb, n_cells);
  const int r = std::min(radius, s.layout.half());
  if (r < 1) throw InvalidParameter("profile radius must be >= 1");
  ProfileDataset out;
  out.eta = derive_hoppings(params).eta.value_or(std::numeric_limits<double>::infinity());
  out.phi = params.phi;
  const double p0 = std::norm(s.amplitude(Leg::B, 0));
  for (int j = -r; j <= r; ++j) {
    out.cells.push_back(j);
    out.prob_b.push_back(std::norm(s.amplitude(Leg::B, j)) / p0);
  }
  return out;
}

double chiral_asymmetry(const ProfileDataset& profile) {
  const double up = profile.prob(1);
  const double down = profile.prob(-1);
  if (up + down == 0.0) return 0.0;
  return (up - down) / (up + down);
}

std::vector<EtaMean> mean_reflectivity_vs_eta(const LatticeParams& reference,
                                              const std::vector<double>& etas,
                                              const ProbeConfig& probe,
                                              const std::vector<double>& phi_grid,
                                              const SweepOptions& opts) {
  SweepOptions o = opts;
  o.include_inverse = false;
  o.include_ratio = false;
  std::vector<EtaMean> out;
  for (double eta : etas) {
    const SweepDataset ds = phi_sweep(params_for_eta(reference, eta), probe, phi_grid, o);
    double sum = 0.0;
    for (double v : ds.r_bar_eta) sum += v;
    out.push_back({eta, sum / static_cast<double>(ds.r_bar_eta.size())});
  }
  return out;
}

EllipseFit lissajous_fit(const SweepDataset& data) {
  if (data.r_bar_inv_eta.size() != data.r_bar_eta.size())
    throw InvalidParameter("sweep dataset lacks the inverse-eta curve");
  std::vector<Point2> pts;
  pts.reserve(data.r_bar_eta.size());
  for (std::size_t i = 0; i < data.r_bar_eta.size(); ++i)
    pts.push_back({data.r_bar_eta[i], data.r_bar_inv_eta[i]});
  return fit_ellipse(pts);
}

}  // namespace creutz
