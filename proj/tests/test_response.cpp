#include <doctest.h>

#include <random>

#include "creutz/error.hpp"
#include "creutz/lattice.hpp"
#include "creutz/response.hpp"
#include "oracles.hpp"

using namespace creutz;
using oracle::pi;

namespace {

LatticeParams reference(double phi = pi) { return {15.0, 68.0, 233.5, phi}; }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("banded solve matches the spectral resolvent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> det(-60.0, 60.0), phi(0.0, 2.0 * pi);
  for (int n : {21, 41}) {
    for (int trial = 0; trial < 5; ++trial) {
      const LatticeParams p = reference(phi(rng));
      ProbeConfig probe;
      probe.probed_leg = trial % 2 ? Leg::A : Leg::B;
      probe.detuning_mhz = det(rng);
      probe.gamma_a_mhz = probe.gamma_b_mhz = 1.7;
      const SteadyState s = steady_state(p, probe, n);
      const Eigen::MatrixXcd h = oracle::ladder(15.0, 68.0, 233.5, p.phi, n);
      const int row = 2 * (n / 2) + (probe.probed_leg == Leg::B ? 1 : 0);
      const Eigen::VectorXcd x =
          oracle::spectral_response(h, row, probe.detuning_mhz, 1.7, probe.omega_p);
      double err = 0.0;
      for (int j = -n / 2; j <= n / 2; ++j) {
        err = std::max(err, std::abs(s.amplitude(Leg::A, j) - x(2 * (j + n / 2))));
        err = std::max(err, std::abs(s.amplitude(Leg::B, j) - x(2 * (j + n / 2) + 1)));
      }
      CHECK(err < 1e-10 * x.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("unequal decoherence matches a dense LU solve") {
  const LatticeParams p = reference(0.64 * pi);
  ProbeConfig probe;
  probe.gamma_a_mhz = 0.8;
  probe.gamma_b_mhz = 3.1;
  probe.omega_p = 2.5;
  probe.detuning_mhz = -7.0;
  const auto layout = LadderLayout(31);
  const auto x = solve_response(p, probe, layout);
  const Eigen::MatrixXcd h = oracle::ladder(15.0, 68.0, 233.5, p.phi, 31);
  const Eigen::VectorXcd o = oracle::dense_response(h, 31, -7.0, 0.8, 3.1, 2.5);
  for (int i = 0; i < 62; ++i) CHECK(std::abs(x[static_cast<std::size_t>(i)] - o(i)) < 1e-12);
}

TEST_CASE("probe normalization cancels in the neighbour ratio") {
  ProbeConfig a, b;
  b.omega_p = 40.0;
  CHECK(steady_state(reference(), a, 101).neighbor_ratio ==
        doctest::Approx(steady_state(reference(), b, 101).neighbor_ratio).epsilon(1e-13));
}

TEST_CASE("leg exchange symmetry of the spectrum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(5.0, 80.0), phi(0.0, 2.0 * pi), g(0.5, 4.0);
  const auto grid = linspace(-40.0, 40.0, 41);
  for (int trial = 0; trial < 4; ++trial) {
    const LatticeParams p{w(rng), w(rng), 233.5, phi(rng)};
    ProbeConfig pb;
    pb.gamma_a_mhz = g(rng);
    pb.gamma_b_mhz = g(rng);
    ProbeConfig pa = pb;
    pa.probed_leg = Leg::A;
    std::swap(pa.gamma_a_mhz, pa.gamma_b_mhz);
    SpectrumOptions o;
    o.n_cells = 201;
    const Spectrum s1 = spectrum(p, pb, grid, o);
    const Spectrum s2 = spectrum(mirrored(p), pa, grid, o);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(s1.values[i] - s2.values[i]) < 1e-12);
  }
}

TEST_CASE("zero hopping leaves the probed site isolated") {
  ProbeConfig probe;
  const SteadyState s = steady_state({0.0, 0.0, 233.5, 1.0}, probe, 11);
  CHECK(s.neighbor_ratio == 0.0);
  CHECK(std::abs(s.probed_amplitude - cplx(1.0) / cplx(-2.0, 2.3)) < 1e-15);
}

TEST_CASE("truncation convergence at the default size") {
  ProbeConfig probe;
  for (double phi : {0.64 * pi, pi, 1.62 * pi}) {
    const SteadyState a = steady_state(reference(phi), probe, kDefaultCells);
    const SteadyState b = steady_state(reference(phi), probe, 2 * kDefaultCells + 1);
    CHECK(a.converged);
    CHECK(std::abs(a.neighbor_ratio - b.neighbor_ratio) < 1e-6 * std::abs(b.neighbor_ratio));
  }
  const SteadyState small = steady_state(reference(0.64 * pi), probe, 11);
  CHECK_FALSE(small.converged);
  CHECK(small.boundary_ratio > kBoundaryTolerance);
}

TEST_CASE("window average") {
  const auto x = linspace(-10.0, 10.0, 21);
  std::vector<double> lin, cst(x.size(), 0.25);
  for (double v : x) lin.push_back(3.0 + 0.5 * v);
  CHECK(averaged_reflectivity(x, cst, -4.0, 7.0) == doctest::Approx(0.25));
  // Mean of a linear function is its midpoint value, also off-grid.
  CHECK(averaged_reflectivity(x, lin, -3.3, 6.1) == doctest::Approx(3.0 + 0.5 * 1.4));
  // Window clipped to the grid.
  CHECK(averaged_reflectivity(x, lin, -50.0, 0.0) == doctest::Approx(3.0 - 2.5));
  CHECK(averaged_reflectivity(x, lin, 2.5, 2.5) == doctest::Approx(4.25));
  CHECK_THROWS_AS(averaged_reflectivity(x, lin, 20.0, 30.0), InvalidParameter);
  CHECK_THROWS_AS(averaged_reflectivity(x, lin, 3.0, 1.0), InvalidParameter);
  // Quadratic against Simpson quadrature of the piecewise-linear interpolant.
  std::vector<double> q;
  for (double v : x) q.push_back(v * v);
  const double expected =
      oracle::simpson([](double t) {
        const double lo = std::floor(t), hi = lo + 1.0;
        return lo * lo + (t - lo) * (hi * hi - lo * lo);
      }, -4.0, 7.0, 22000) / 11.0;
  CHECK(averaged_reflectivity(x, q, -4.0, 7.0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("window support") {
  const auto x = linspace(0.0, 10.0, 11);
  CHECK(window_support(x, 2.5, 4.5) == std::make_pair<std::size_t, std::size_t>(2, 5));
  CHECK(window_support(x, 3.0, 4.0) == std::make_pair<std::size_t, std::size_t>(3, 4));
  CHECK(window_support(x, -5.0, 50.0) == std::make_pair<std::size_t, std::size_t>(0, 10));
}

TEST_CASE("band average equals the full-spectrum average") {
  ProbeConfig probe;
  const auto grid = default_detuning_grid(reference(), 201);
  SpectrumOptions o;
  o.n_cells = 201;
  const Spectrum s = spectrum(reference(), probe, grid, o);
  CHECK(band_averaged_reflectivity(reference(), probe, grid, VelocityModel{}, o) ==
        doctest::Approx(s.r_bar).epsilon(1e-14));
  CHECK(s.window.first < s.window.second);
}

TEST_CASE("default grid and window") {
  const auto g = default_detuning_grid(reference());
  const oracle::Hop t = oracle::hoppings(15.0, 68.0, 233.5);
  const double span = 4.0 * std::abs(t.t1) + 4.0 * std::abs(t.t2) + 10.0;
  CHECK(g.size() == 601);
  CHECK(g.front() == doctest::Approx(-span));
  CHECK(g.back() == doctest::Approx(span));
  ProbeConfig probe;
  const auto w = default_window(reference(), probe);
  // Dispersive band of the closed form at phi = pi spans [4 t2, 4 t1].
  CHECK(w.first == doctest::Approx(4.0 * t.t2 - 4.6).epsilon(1e-6));
  CHECK(w.second == doctest::Approx(4.0 * t.t1 + 4.6).epsilon(1e-6));
}

TEST_CASE("Doppler average reduces to the bare spectrum") {
  ProbeConfig probe;
  const auto grid = linspace(-30.0, 10.0, 21);
  SpectrumOptions o;
  o.n_cells = 201;
  const Spectrum bare = spectrum(reference(), probe, grid, o);
  VelocityModel m;
  m.kind = VelocityModel::Kind::Gaussian;
  m.sigma_mhz = 1e-9;
  const Spectrum narrow = doppler_average(reference(), probe, grid, m, o);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(bare.values[i] - narrow.values[i]) < 1e-10);
  m.sigma_mhz = 0.0;
  CHECK(m.classes().size() == 1);
}

TEST_CASE("velocity classes") {
  VelocityModel m;
  m.kind = VelocityModel::Kind::Gaussian;
  m.sigma_mhz = 5.0;
  m.n_classes = 9;
  const auto c = m.classes();
  REQUIRE(c.size() == 9);
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    total += c[i].second;
    CHECK(c[i].first == doctest::Approx(-c[c.size() - 1 - i].first));
    CHECK(c[i].second == doctest::Approx(c[c.size() - 1 - i].second));
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(c.front().first == doctest::Approx(-15.0));
  m.n_classes = 0;
  CHECK_THROWS_AS(m.classes(), InvalidParameter);
}

TEST_CASE("Doppler tilt shifts cell detunings") {
  // One class with shift d: cell j sees Delta - d + j * ratio * d.
  const LatticeParams p = reference(0.9);
  ProbeConfig probe;
  probe.detuning_mhz = -3.0;
  const double d = 1.5;
  ProbeConfig shifted = probe;
  shifted.detuning_mhz -= d;
  const auto x = solve_response(p, shifted, LadderLayout(21), 2.0 * d);
  Eigen::MatrixXcd h = oracle::ladder(15.0, 68.0, 233.5, 0.9, 21);
  for (int r = 0; r < 42; ++r) h(r, r) -= 2.0 * d * (r / 2 - 10);
  const Eigen::VectorXcd o = oracle::dense_response(h, 21, -3.0 - d, 2.3, 2.3, 1.0);
  for (int i = 0; i < 42; ++i) CHECK(std::abs(x[static_cast<std::size_t>(i)] - o(i)) < 1e-12);
}

TEST_CASE("peak summary of a Lorentzian") {
  const auto x = linspace(-50.0, 50.0, 20001);
  std::vector<double> y;
  const double g = 2.0;
  for (double v : x) y.push_back(1.0 / ((v - 3.0) * (v - 3.0) + g * g));
  const PeakSummary p = summarize_peak(x, y);
  CHECK(p.detuning_mhz == doctest::Approx(3.0));
  CHECK(p.fwhm_mhz == doctest::Approx(2.0 * g).epsilon(1e-5));
  CHECK_FALSE(p.width_truncated);
}

TEST_CASE("spectrum output does not depend on the worker count") {
  ProbeConfig probe;
  const auto grid = linspace(-40.0, 20.0, 31);
  SpectrumOptions a, b;
  a.n_cells = b.n_cells = 201;
  b.threads = 3;
  const Spectrum s1 = spectrum(reference(), probe, grid, a);
  const Spectrum s2 = spectrum(reference(), probe, grid, b);
  CHECK(s1.values == s2.values);
  CHECK(s1.r_bar == s2.r_bar);
}

TEST_CASE("probe validation") {
  ProbeConfig probe;
  probe.gamma_a_mhz = 0.0;
  CHECK_THROWS_AS(steady_state(reference(), probe, 11), InvalidParameter);
  ProbeConfig ok;
  CHECK_THROWS_AS(spectrum(reference(), ok, {1.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(spectrum(reference(), ok, {}), InvalidParameter);
}
