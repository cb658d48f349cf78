#include <doctest.h>

#include "creutz/error.hpp"
#include "creutz/sweeps.hpp"
#include "oracles.hpp"

using namespace creutz;
using oracle::pi;

namespace {

LatticeParams reference(double phi = pi) { return {15.0, 68.0, 233.5, phi}; }

SweepOptions quick() {
  SweepOptions o;
  o.n_cells = 201;
  o.detunings = default_detuning_grid(reference(), 121);
  return o;
}

}  // namespace

TEST_CASE("eta re-balancing at fixed t3") {
  for (double eta : {1.0, 3.8, 20.55, 1.0 / 20.55}) {
    const LatticeParams p = params_for_eta(reference(), eta);
    CHECK(p.omega1_mhz * p.omega2_mhz == doctest::Approx(15.0 * 68.0));
    CHECK(*derive_hoppings(p).eta == doctest::Approx(eta).epsilon(1e-12));
    CHECK(derive_hoppings(p).t3 == doctest::Approx(derive_hoppings(reference()).t3));
  }
  CHECK_THROWS_AS(params_for_eta(reference(), 0.0), InvalidParameter);
  CHECK_THROWS_AS(params_for_eta(reference(), -2.0), InvalidParameter);
}

TEST_CASE("phi grid") {
  const auto g = uniform_phi_grid(4);
  CHECK(g == std::vector<double>{0.0, pi / 2, pi, 1.5 * pi});
  CHECK_THROWS_AS(uniform_phi_grid(2), InvalidParameter);
}

TEST_CASE("extremum refinement") {
  const auto g = uniform_phi_grid(40);
  for (double center : {0.3, 1.234, 3.0, 6.1}) {
    std::vector<double> v;
    for (double p : g) v.push_back(std::cos(p - center));
    const CurveExtrema e = locate_extrema(g, v);
    CHECK(std::abs(std::remainder(e.max.phi - center, 2.0 * pi)) < 2e-3);
    CHECK(std::abs(std::remainder(e.min.phi - center - pi, 2.0 * pi)) < 2e-3);
    CHECK(e.max.value == doctest::Approx(1.0).epsilon(1e-3));
  }
  CHECK_THROWS_AS(locate_extrema({0.0, 1.0, 3.0}, {1.0, 2.0, 3.0}), InvalidParameter);
}

TEST_CASE("sweep curves are periodic and follow the leg-exchange route") {
  ProbeConfig probe;
  SweepOptions o = quick();
  const auto grid = uniform_phi_grid(6);
  const SweepDataset ds = phi_sweep(reference(), probe, grid, o);
  CHECK(ds.eta == doctest::Approx(derive_hoppings(reference()).eta.value()));
  CHECK(ds.low_resolution);
  SpectrumOptions so;
  so.n_cells = o.n_cells;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    LatticeParams shifted = reference(grid[i] + 2.0 * pi);
    const double again = band_averaged_reflectivity(shifted, probe, o.detunings, VelocityModel{}, so);
    CHECK(std::abs(again - ds.r_bar_eta[i]) < 1e-9);
    // 1/eta lattice probed on leg b at -phi.
    LatticeParams inverse = mirrored(reference(grid[i]));
    const double inv = band_averaged_reflectivity(inverse, probe, o.detunings, VelocityModel{}, so);
    CHECK(std::abs(inv - ds.r_bar_inv_eta[i]) < 1e-12);
  }
}

TEST_CASE("sweep output does not depend on the worker count") {
  ProbeConfig probe;
  SweepOptions a = quick(), b = quick();
  b.threads = 3;
  const auto grid = uniform_phi_grid(5);
  const SweepDataset s1 = phi_sweep(reference(), probe, grid, a);
  const SweepDataset s2 = phi_sweep(reference(), probe, grid, b);
  CHECK(s1.r_bar_eta == s2.r_bar_eta);
  CHECK(s1.r_bar_inv_eta == s2.r_bar_inv_eta);
  CHECK(s1.ratio_eta == s2.ratio_eta);
}

TEST_CASE("profiles") {
  ProbeConfig probe;
  const ProfileDataset p = profile(reference(0.64 * pi), probe, 201, 5);
  CHECK(p.cells.size() == 11);
  CHECK(p.prob(0) == 1.0);
  CHECK_THROWS_AS(p.prob(6), InvalidParameter);

  const ProfileDataset isolated = profile({0.0, 0.0, 233.5, 1.0}, probe, 21, 3);
  for (int j = -3; j <= 3; ++j) CHECK(isolated.prob(j) == (j == 0 ? 1.0 : 0.0));
  CHECK(chiral_asymmetry(isolated) == 0.0);
}

TEST_CASE("no chirality without flux") {
  ProbeConfig probe;
  for (double eta : {1.0 / 20.55, 1.0, 3.8, 20.55}) {
    const ProfileDataset p = profile(params_for_eta(reference(0.0), eta), probe, 201, 2);
    CHECK(std::abs(chiral_asymmetry(p)) < 1e-12);
  }
}

TEST_CASE("chiral current favours b1 for flux in (0, pi)") {
  ProbeConfig probe;
  const ProfileDataset p = profile(params_for_eta(reference(0.64 * pi), 20.55), probe, 601, 3);
  CHECK(chiral_asymmetry(p) > 0.0);
}

TEST_CASE("mean reflectivity is symmetric in the eta label") {
  ProbeConfig probe;
  const auto m = mean_reflectivity_vs_eta(reference(), {1.0, 1.0}, probe, uniform_phi_grid(4), quick());
  REQUIRE(m.size() == 2);
  CHECK(m[0].mean_r_bar == m[1].mean_r_bar);
}

TEST_CASE("Lissajous fit requires both curves") {
  SweepDataset ds;
  ds.r_bar_eta = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  CHECK_THROWS_AS(lissajous_fit(ds), InvalidParameter);
}
