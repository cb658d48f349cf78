#include "creutz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "creutz/error.hpp"

namespace creutz {

double reduce_angle(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

double LatticeParams::phi_reduced() const { return reduce_angle(phi); }

double Hoppings::max_abs() const {
  return std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
}

void validate(const LatticeParams& params) {
  if (!std::isfinite(params.omega1_mhz) || !std::isfinite(params.omega2_mhz) ||
      !std::isfinite(params.delta_c_mhz) || !std::isfinite(params.phi))
    throw InvalidParameter("lattice parameters must be finite");
  if (params.omega1_mhz < 0.0 || params.omega2_mhz < 0.0)
    throw InvalidParameter("Rabi frequencies must be non-negative");
  if (params.delta_c_mhz == 0.0)
    throw InvalidParameter("coupling detuning delta_c must be nonzero");
}

Hoppings derive_hoppings(const LatticeParams& params) {
  validate(params);
  const double w1 = params.omega1_mhz;
  const double w2 = params.omega2_mhz;
  const double dc = params.delta_c_mhz;
  Hoppings h;
  h.t1 = -w1 * w1 / dc;
  h.t2 = -w2 * w2 / dc;
  h.t3 = -w1 * w2 / dc;
  if (w1 > 0.0) h.eta = h.t2 / h.t1;
  return h;
}

LadderLayout::LadderLayout(int n_cells) : n_cells_(n_cells) {
  if (n_cells < 3 || n_cells % 2 == 0)
    throw InvalidParameter("n_cells must be odd and >= 3, got " + std::to_string(n_cells));
}

int LadderLayout::index(Leg leg, int cell) const {
  if (!contains(cell))
    throw InvalidParameter("cell " + std::to_string(cell) + " outside the truncated ladder");
  return 2 * (cell + half()) + (leg == Leg::B ? 1 : 0);
}

std::vector<Coupling> ladder_couplings(const LatticeParams& params, const LadderLayout& layout) {
  const Hoppings t = derive_hoppings(params);
  const double half_phi = 0.5 * params.phi;
  const cplx phase = std::polar(1.0, half_phi);
  const cplx rung = 2.0 * t.t3 * std::cos(half_phi);
  // Upper-triangle elements H[j][j+1] are the conjugates of the forward
  // amplitudes <j+1|H|j>.
  const cplx leg_a = t.t1 * phase;
  const cplx leg_b = t.t2 * std::conj(phase);

  std::vector<Coupling> out;
  out.reserve(static_cast<std::size_t>(layout.n_cells()) * 7);
  for (int j = layout.first_cell(); j <= layout.last_cell(); ++j) {
    const int a = layout.index(Leg::A, j);
    const int b = layout.index(Leg::B, j);
    out.push_back({a, a, cplx(2.0 * t.t1)});
    out.push_back({a, b, rung});
    out.push_back({b, b, cplx(2.0 * t.t2)});
    if (j == layout.last_cell()) continue;
    const int a1 = layout.index(Leg::A, j + 1);
    const int b1 = layout.index(Leg::B, j + 1);
    out.push_back({a, a1, leg_a});
    out.push_back({a, b1, cplx(t.t3)});
    out.push_back({b, a1, cplx(t.t3)});
    out.push_back({b, b1, leg_b});
  }
  return out;
}

RealSpaceHamiltonian build_real_space(const LatticeParams& params, int n_cells) {
  LadderLayout layout(n_cells);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(layout.dim(), layout.dim());
  for (const Coupling& c : ladder_couplings(params, layout)) {
    m(c.row, c.col) = c.value;
    if (c.row != c.col) m(c.col, c.row) = std::conj(c.value);
  }
  return {layout, std::move(m)};
}

RealSpaceHamiltonian swap_legs(const RealSpaceHamiltonian& h) {
  const int dim = h.layout.dim();
  Eigen::VectorXi perm(dim);
  for (int row = 0; row < dim; ++row) perm(row) = row ^ 1;
  Eigen::MatrixXcd m(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) m(r, c) = h.matrix(perm(r), perm(c));
  return {h.layout, std::move(m)};
}

LatticeParams mirrored(const LatticeParams& params) {
  LatticeParams out = params;
  std::swap(out.omega1_mhz, out.omega2_mhz);
  out.phi = -params.phi;
  return out;
}

BlochHamiltonian build_bloch(const LatticeParams& params, double k) {
  const Hoppings t = derive_hoppings(params);
  const double half_phi = 0.5 * params.phi;
  const double a = 2.0 * t.t1 * (1.0 + std::cos(k - half_phi));
  const double b = 2.0 * t.t2 * (1.0 + std::cos(k + half_phi));
  const double c = 2.0 * t.t3 * (std::cos(half_phi) + std::cos(k));
  BlochHamiltonian out;
  out.k = k;
  out.matrix << cplx(a), cplx(c), cplx(c), cplx(b);
  return out;
}

}  // namespace creutz
