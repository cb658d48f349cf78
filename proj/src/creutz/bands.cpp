#include "creutz/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "creutz/error.hpp"
#include "creutz/parallel.hpp"

namespace creutz {

namespace {

constexpr double pi = std::numbers::pi;

// Rotate so the larger component is real and positive (a wins ties).
Eigen::Vector2cd fix_phase(Eigen::Vector2cd v) {
  const int pivot = std::abs(v(1)) > std::abs(v(0)) ? 1 : 0;
  const double mag = std::abs(v(pivot));
  if (mag > 0.0) v *= std::conj(v(pivot)) / mag;
  return v.normalized();
}

double splitting(const Eigen::Matrix2cd& m) {
  const double d = m(0, 0).real() - m(1, 1).real();
  return std::sqrt(d * d + 4.0 * std::norm(m(0, 1)));
}

}  // namespace

std::vector<double> brillouin_grid(int n_k) {
  if (n_k < 2) throw InvalidParameter("n_k must be >= 2, got " + std::to_string(n_k));
  std::vector<double> k(static_cast<std::size_t>(n_k));
  for (int i = 0; i < n_k; ++i) k[static_cast<std::size_t>(i)] = -pi + 2.0 * pi * i / n_k;
  return k;
}

double sigma_z(const Eigen::Vector2cd& v) { return std::norm(v(0)) - std::norm(v(1)); }

double BandStructure::flat_bandwidth() const {
  auto [lo, hi] = std::minmax_element(energies.begin(), energies.end(),
                                      [](const auto& x, const auto& y) { return x[0] < y[0]; });
  return (*hi)[0] - (*lo)[0];
}

double BandStructure::dispersive_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : energies) m = std::min(m, e[1]);
  return m;
}

double BandStructure::dispersive_max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& e : energies) m = std::max(m, e[1]);
  return m;
}

BandStructure compute_bands(const LatticeParams& params, int n_k, int threads) {
  const Hoppings t = derive_hoppings(params);
  BandStructure bs;
  bs.k_grid = brillouin_grid(n_k);
  const std::size_t n = bs.k_grid.size();

  // Sorted branches: 0 = lower, 1 = upper. The two branches touch but never
  // cross, so sorting keeps each branch continuous.
  std::vector<std::array<double, 2>> sorted(n);
  std::vector<std::array<Eigen::Vector2cd, 2>> vecs(n);
  std::vector<char> degenerate(n, 0);
  const double degeneracy_tol = 1e-12 * std::max(8.0 * t.max_abs(), 1e-300);

  parallel_for(n, threads, [&](std::size_t i) {
    const BlochHamiltonian h = build_bloch(params, bs.k_grid[i]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h.matrix);
    if (es.info() != Eigen::Success) throw NumericalError("2x2 eigensolver failed");
    sorted[i] = {es.eigenvalues()(0), es.eigenvalues()(1)};
    degenerate[i] = splitting(h.matrix) <= degeneracy_tol;
    vecs[i] = {fix_phase(es.eigenvectors().col(0)), fix_phase(es.eigenvectors().col(1))};
  });

  // Degenerate points inherit the basis of the nearest preceding
  // non-degenerate point (cyclically); a fully degenerate spectrum gets the
  // leg basis.
  std::size_t anchor = n;
  for (std::size_t i = 0; i < n; ++i)
    if (!degenerate[i]) {
      anchor = i;
      break;
    }
  if (anchor == n) {
    for (auto& v : vecs) v = {Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0)};
  } else {
    for (std::size_t step = 1; step < n; ++step) {
      const std::size_t i = (anchor + step) % n;
      const std::size_t prev = (i + n - 1) % n;
      if (degenerate[i]) vecs[i] = vecs[prev];
    }
  }

  double lo[2] = {sorted[0][0], sorted[0][1]};
  double hi[2] = {lo[0], lo[1]};
  for (const auto& e : sorted)
    for (int b = 0; b < 2; ++b) {
      lo[b] = std::min(lo[b], e[b]);
      hi[b] = std::max(hi[b], e[b]);
    }
  const double width0 = hi[0] - lo[0];
  const double width1 = hi[1] - lo[1];
  int flat = width0 < width1 ? 0 : 1;
  if (width0 == width1) flat = std::abs(hi[0] + lo[0]) <= std::abs(hi[1] + lo[1]) ? 0 : 1;
  if (anchor == n) flat = 0;
  const int disp = 1 - flat;

  bs.energies.resize(n);
  bs.eigenvectors.resize(n);
  bs.polarization.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    bs.energies[i] = {sorted[i][flat], sorted[i][disp]};
    bs.eigenvectors[i] = {vecs[i][flat], vecs[i][disp]};
    bs.polarization[i] = {sigma_z(vecs[i][flat]), sigma_z(vecs[i][disp])};
  }
  return bs;
}

double band_gap(const LatticeParams& params, int n_k) {
  const std::vector<double> grid = brillouin_grid(n_k);
  auto gap_at = [&](double k) { return splitting(build_bloch(params, k).matrix); };
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = gap_at(grid[i]);
    if (g < best_gap) {
      best_gap = g;
      best = i;
    }
  }
  if (best_gap == 0.0) return 0.0;
  const double dk = 2.0 * pi / n_k;
  const auto refined = boost::math::tools::brent_find_minima(
      gap_at, grid[best] - dk, grid[best] + dk, std::numeric_limits<double>::digits / 2 + 8);
  return std::min(best_gap, refined.second);
}

int CompactLocalizedState::min_cell() const {
  int m = sites.front().cell;
  for (const auto& s : sites) m = std::min(m, s.cell);
  return m;
}

int CompactLocalizedState::max_cell() const {
  int m = sites.front().cell;
  for (const auto& s : sites) m = std::max(m, s.cell);
  return m;
}

CompactLocalizedState build_cls(const LatticeParams& params, int cell, ClsCoefficient coefficient) {
  const Hoppings t = derive_hoppings(params);
  if (params.omega1_mhz == 0.0)
    throw InvalidParameter("omega1 == 0: the flat band has no a-component to fix the CLS ratio");
  const double c = coefficient == ClsCoefficient::EigenCondition ? t.t3 / t.t1 : *t.eta;

  const double reduced = reduce_angle(params.phi);
  const bool trivial_flux = reduced < 1e-12 || 2.0 * pi - reduced < 1e-12;

  CompactLocalizedState st;
  if (trivial_flux) {
    const double sign = std::cos(0.5 * params.phi) > 0.0 ? 1.0 : -1.0;
    st.sites = {{Leg::A, cell, cplx(c)}, {Leg::B, cell, cplx(-sign)}};
  } else {
    const cplx e = std::polar(1.0, 0.5 * params.phi);
    st.sites = {{Leg::A, cell, cplx(c)},
                {Leg::B, cell, -e},
                {Leg::A, cell + 1, c * e},
                {Leg::B, cell + 1, cplx(-1.0)}};
  }
  std::erase_if(st.sites, [](const ClsSite& s) { return s.amplitude == cplx(0.0); });
  double norm2 = 0.0;
  for (const auto& s : st.sites) norm2 += std::norm(s.amplitude);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& s : st.sites) s.amplitude *= inv;
  st.energy = 0.0;
  return st;
}

CompactLocalizedState translate(const CompactLocalizedState& state, int shift) {
  CompactLocalizedState out = state;
  for (auto& s : out.sites) s.cell += shift;
  return out;
}

Eigen::VectorXcd embed(const CompactLocalizedState& state, const RealSpaceHamiltonian& h) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(h.layout.dim());
  for (const auto& s : state.sites) v(h.index(s.leg, s.cell)) += s.amplitude;
  return v;
}

double verify_cls(const CompactLocalizedState& state, const RealSpaceHamiltonian& h) {
  if (state.sites.empty()) throw InvalidParameter("empty compact localized state");
  const LadderLayout& layout = h.layout;
  if (state.min_cell() - layout.first_cell() < 2 || layout.last_cell() - state.max_cell() < 2)
    throw InvalidParameter("CLS support must stay two cells away from the truncation boundary");
  const Eigen::VectorXcd v = embed(state, h);
  return (h.matrix * v - state.energy * v).norm();
}

}  // namespace creutz
