#include "creutz/response.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "creutz/bands.hpp"
#include "creutz/error.hpp"
#include "creutz/parallel.hpp"

namespace creutz {

namespace {

// a_j couples to b_{j+1}: three rows apart in the (a, b) per-cell layout.
constexpr int kBandwidth = 3;

}  // namespace

void validate(const ProbeConfig& probe) {
  if (!(probe.gamma_a_mhz > 0.0) || !(probe.gamma_b_mhz > 0.0) ||
      !std::isfinite(probe.gamma_a_mhz) || !std::isfinite(probe.gamma_b_mhz))
    throw InvalidParameter("decoherence rates gamma_a, gamma_b must be positive and finite");
  if (!(probe.omega_p > 0.0) || !std::isfinite(probe.omega_p))
    throw InvalidParameter("probe scale omega_p must be positive and finite");
  if (!std::isfinite(probe.detuning_mhz)) throw InvalidParameter("probe detuning must be finite");
}

cplx SteadyState::amplitude(Leg leg, int cell) const {
  if (!layout.contains(cell))
    throw InvalidParameter("cell " + std::to_string(cell) + " outside the truncated ladder");
  const auto i = static_cast<std::size_t>(cell + layout.half());
  return leg == Leg::A ? alpha[i] : beta[i];
}

std::vector<cplx> solve_response(const LatticeParams& params, const ProbeConfig& probe,
                                 const LadderLayout& layout, double cell_detuning_slope) {
  validate(probe);
  const int n = layout.dim();
  const int kl = kBandwidth;
  const int ku = kBandwidth;
  const int ldab = 2 * kl + ku + 1;
  // Column-major LAPACK band storage: A(i, j) -> ab[kl + ku + i - j + j * ldab].
  std::vector<cplx> ab(static_cast<std::size_t>(ldab) * n, cplx(0.0));
  auto at = [&](int i, int j) -> cplx& {
    return ab[static_cast<std::size_t>(kl + ku + i - j + j * ldab)];
  };

  for (const Coupling& c : ladder_couplings(params, layout)) {
    if (c.row == c.col) {
      const Leg leg = layout.leg_of(c.row);
      const double detuning =
          probe.detuning_mhz + cell_detuning_slope * layout.cell_of(c.row);
      at(c.row, c.row) = cplx(detuning, probe.gamma(leg)) - c.value;
    } else {
      at(c.row, c.col) = -c.value;
      at(c.col, c.row) = -std::conj(c.value);
    }
  }

  std::vector<cplx> x(static_cast<std::size_t>(n), cplx(0.0));
  x[static_cast<std::size_t>(layout.index(probe.probed_leg, 0))] = probe.omega_p;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(), ldab, ipiv.data(), x.data(), n);
  if (info != 0)
    throw NumericalError("banded resolvent solve failed (LAPACK info " + std::to_string(info) +
                         ")");
  return x;
}

namespace {

struct PointResult {
  double ratio;
  double boundary;
};

PointResult evaluate(const std::vector<cplx>& x, const LadderLayout& layout, Leg leg) {
  const cplx x0 = x[static_cast<std::size_t>(layout.index(leg, 0))];
  const cplx x1 = x[static_cast<std::size_t>(layout.index(leg, 1))];
  if (x0 == cplx(0.0)) throw NumericalError("probed-site amplitude vanished");
  double edge = 0.0;
  for (int cell : {layout.first_cell(), layout.last_cell()})
    for (Leg l : {Leg::A, Leg::B})
      edge = std::max(edge, std::abs(x[static_cast<std::size_t>(layout.index(l, cell))]));
  return {std::norm(x1 / x0), edge / std::abs(x0)};
}

}  // namespace

SteadyState steady_state(const LatticeParams& params, const ProbeConfig& probe, int n_cells) {
  const LadderLayout layout(n_cells);
  const std::vector<cplx> x = solve_response(params, probe, layout);
  SteadyState s;
  s.layout = layout;
  s.probed_leg = probe.probed_leg;
  s.detuning_mhz = probe.detuning_mhz;
  s.alpha.resize(static_cast<std::size_t>(n_cells));
  s.beta.resize(static_cast<std::size_t>(n_cells));
  for (int j = layout.first_cell(); j <= layout.last_cell(); ++j) {
    const auto slot = static_cast<std::size_t>(j + layout.half());
    s.alpha[slot] = x[static_cast<std::size_t>(layout.index(Leg::A, j))];
    s.beta[slot] = x[static_cast<std::size_t>(layout.index(Leg::B, j))];
  }
  s.probed_amplitude = s.amplitude(probe.probed_leg, 0);
  const PointResult r = evaluate(x, layout, probe.probed_leg);
  s.neighbor_ratio = r.ratio;
  s.boundary_ratio = r.boundary;
  s.converged = r.boundary < kBoundaryTolerance;
  return s;
}

std::vector<double> default_detuning_grid(const LatticeParams& params, int points) {
  if (points < 2) throw InvalidParameter("detuning grid needs at least 2 points");
  const Hoppings t = derive_hoppings(params);
  const double span = 4.0 * std::abs(t.t2) + 4.0 * std::abs(t.t1) + 10.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (points - 1);
  return grid;
}

std::pair<double, double> default_window(const LatticeParams& params, const ProbeConfig& probe) {
  const BandStructure bs = compute_bands(params, 512);
  const double pad = 2.0 * probe.gamma_max();
  return {bs.dispersive_min() - pad, bs.dispersive_max() + pad};
}

namespace {

void check_grid(const std::vector<double>& detunings) {
  if (detunings.empty()) throw InvalidParameter("detuning grid is empty");
  for (double d : detunings)
    if (!std::isfinite(d)) throw InvalidParameter("detuning grid contains a non-finite value");
  for (std::size_t i = 1; i < detunings.size(); ++i)
    if (!(detunings[i] > detunings[i - 1]))
      throw InvalidParameter("detuning grid must be strictly increasing");
}

// Averaged proxy over velocity classes at each requested grid index.
void fill_values(const LatticeParams& params, const ProbeConfig& probe,
                 const std::vector<double>& detunings,
                 const std::vector<std::pair<double, double>>& classes, double tilt_ratio,
                 const SpectrumOptions& opts, std::size_t first, std::size_t last,
                 Spectrum& out) {
  const LadderLayout layout(opts.n_cells);
  const std::size_t count = last - first + 1;
  std::vector<double> boundary(count, 0.0);
  parallel_for(count, opts.threads, [&](std::size_t n) {
    const std::size_t i = first + n;
    double acc = 0.0;
    double edge = 0.0;
    for (const auto& [shift, weight] : classes) {
      ProbeConfig p = probe;
      p.detuning_mhz = detunings[i] - shift;
      const auto x = solve_response(params, p, layout, tilt_ratio * shift);
      const PointResult r = evaluate(x, layout, probe.probed_leg);
      acc += weight * r.ratio;
      edge = std::max(edge, r.boundary);
    }
    out.values[i] = acc;
    boundary[n] = edge;
  });
  for (double b : boundary) {
    out.worst_boundary_ratio = std::max(out.worst_boundary_ratio, b);
    if (!(b < kBoundaryTolerance)) ++out.unconverged_points;
  }
}

Spectrum run_spectrum(const LatticeParams& params, const ProbeConfig& probe,
                      const std::vector<double>& detunings,
                      const std::vector<std::pair<double, double>>& classes, double tilt_ratio,
                      const SpectrumOptions& opts) {
  validate(params);
  validate(probe);
  check_grid(detunings);
  Spectrum s;
  s.detunings = detunings;
  s.values.assign(detunings.size(), 0.0);
  s.window = opts.window ? *opts.window : default_window(params, probe);
  fill_values(params, probe, detunings, classes, tilt_ratio, opts, 0, detunings.size() - 1, s);
  const bool overlaps = s.window.first <= detunings.back() && s.window.second >= detunings.front();
  s.r_bar = overlaps ? averaged_reflectivity(s, s.window) : std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace

Spectrum spectrum(const LatticeParams& params, const ProbeConfig& probe,
                  const std::vector<double>& detunings, const SpectrumOptions& opts) {
  return run_spectrum(params, probe, detunings, {{0.0, 1.0}}, 0.0, opts);
}

std::vector<std::pair<double, double>> VelocityModel::classes() const {
  if (kind == Kind::None) return {{0.0, 1.0}};
  if (n_classes < 1) throw InvalidParameter("velocity model needs n_classes >= 1");
  if (!(sigma_mhz >= 0.0) || !std::isfinite(sigma_mhz))
    throw InvalidParameter("velocity model sigma must be non-negative");
  if (!(cutoff_sigmas > 0.0)) throw InvalidParameter("velocity cutoff must be positive");
  if (n_classes == 1 || sigma_mhz == 0.0) return {{0.0, 1.0}};
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n_classes));
  const double reach = cutoff_sigmas * sigma_mhz;
  double total = 0.0;
  for (int i = 0; i < n_classes; ++i) {
    const double shift = -reach + 2.0 * reach * i / (n_classes - 1);
    const double u = shift / sigma_mhz;
    out[static_cast<std::size_t>(i)] = {shift, std::exp(-0.5 * u * u)};
    total += out[static_cast<std::size_t>(i)].second;
  }
  for (auto& c : out) c.second /= total;
  return out;
}

Spectrum doppler_average(const LatticeParams& params, const ProbeConfig& probe,
                         const std::vector<double>& detunings, const VelocityModel& model,
                         const SpectrumOptions& opts) {
  if (!std::isfinite(model.tilt_ratio)) throw InvalidParameter("tilt ratio must be finite");
  return run_spectrum(params, probe, detunings, model.classes(), model.tilt_ratio, opts);
}

double band_averaged_reflectivity(const LatticeParams& params, const ProbeConfig& probe,
                                  const std::vector<double>& detunings,
                                  const VelocityModel& model, const SpectrumOptions& opts) {
  validate(params);
  validate(probe);
  check_grid(detunings);
  const auto window = opts.window ? *opts.window : default_window(params, probe);
  const auto [first, last] = window_support(detunings, window.first, window.second);
  Spectrum s;
  s.values.assign(detunings.size(), 0.0);
  fill_values(params, probe, detunings, model.classes(), model.tilt_ratio, opts, first, last, s);
  const std::vector<double> x(detunings.begin() + static_cast<std::ptrdiff_t>(first),
                              detunings.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const std::vector<double> y(s.values.begin() + static_cast<std::ptrdiff_t>(first),
                              s.values.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return averaged_reflectivity(x, y, window.first, window.second);
}

std::pair<std::size_t, std::size_t> window_support(const std::vector<double>& detunings,
                                                   double lo, double hi) {
  const std::size_t n = detunings.size();
  if (n == 0) throw InvalidParameter("detuning grid is empty");
  for (std::size_t i = 1; i < n; ++i)
    if (!(detunings[i] > detunings[i - 1]))
      throw InvalidParameter("detuning grid must be strictly increasing");
  if (!(lo <= hi)) throw InvalidParameter("averaging window must satisfy lo <= hi");
  const double a = std::max(lo, detunings.front());
  const double b = std::min(hi, detunings.back());
  if (a > b) throw InvalidParameter("averaging window does not overlap the detuning grid");
  std::size_t first = 0;
  while (first + 1 < n && detunings[first + 1] <= a) ++first;
  std::size_t last = n - 1;
  while (last > 0 && detunings[last - 1] >= b) --last;
  return {first, std::max(first, last)};
}

double averaged_reflectivity(const std::vector<double>& x, const std::vector<double>& y,
                             double lo, double hi) {
  if (x.size() != y.size()) throw InvalidParameter("detuning and value lengths differ");
  const auto [first, last] = window_support(x, lo, hi);
  const double a = std::max(lo, x.front());
  const double b = std::min(hi, x.back());
  auto interp = [&](std::size_t i, double at) {
    if (i + 1 >= x.size() || at <= x[i]) return y[i];
    const double w = (at - x[i]) / (x[i + 1] - x[i]);
    return y[i] + w * (y[i + 1] - y[i]);
  };
  if (a == b) return interp(first, a);
  double integral = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double l = std::max(a, x[i]);
    const double r = std::min(b, x[i + 1]);
    if (r <= l) continue;
    integral += 0.5 * (r - l) * (interp(i, l) + interp(i, r));
  }
  return integral / (b - a);
}

double averaged_reflectivity(const Spectrum& spec, std::pair<double, double> window) {
  return averaged_reflectivity(spec.detunings, spec.values, window.first, window.second);
}

PeakSummary summarize_peak(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidParameter("detuning and value lengths differ");
  check_grid(x);
  const auto top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  PeakSummary p;
  p.value = y[top];
  p.detuning_mhz = x[top];
  const double half = 0.5 * p.value;
  double left = x.front();
  double right = x.back();
  std::size_t i = top;
  while (i > 0 && y[i - 1] > half) --i;
  if (i == 0) p.width_truncated = true;
  else left = x[i - 1] + (half - y[i - 1]) / (y[i] - y[i - 1]) * (x[i] - x[i - 1]);
  i = top;
  while (i + 1 < x.size() && y[i + 1] > half) ++i;
  if (i + 1 == x.size()) p.width_truncated = true;
  else right = x[i] + (y[i] - half) / (y[i] - y[i + 1]) * (x[i + 1] - x[i]);
  p.fwhm_mhz = right - left;
  return p;
}

}  // namespace creutz
