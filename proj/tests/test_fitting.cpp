#include <doctest.h>

#include <random>

#include "creutz/error.hpp"
#include "creutz/fitting.hpp"
#include "oracles.hpp"

using namespace creutz;
using oracle::pi;

namespace {

std::vector<double> grid(int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(2.0 * pi * i / n);
  return g;
}

// x = ox + ax sin(u), y = oy + ay sin(-u + p).
std::vector<Point2> lissajous(double p, int n, double ax = 1.0, double ay = 1.0, double ox = 0.0,
                              double oy = 0.0) {
  std::vector<Point2> pts;
  for (double u : grid(n)) pts.push_back({ox + ax * std::sin(u), oy + ay * std::sin(-u + p)});
  return pts;
}

}  // namespace

TEST_CASE("sinusoid recovery") {
  const auto phi = grid(100);
  std::vector<double> v;
  for (double p : phi) v.push_back(0.3 + 0.1 * std::sin(p + 0.64 * pi));
  const SinusoidFit f = fit_sinusoid(phi, v);
  CHECK(f.offset == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(f.amplitude == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(f.phase == doctest::Approx(0.64 * pi).epsilon(1e-13));
  CHECK(f.rms_residual < 1e-12);
  CHECK(f(1.0) == doctest::Approx(0.3 + 0.1 * std::sin(1.0 + 0.64 * pi)));
}

TEST_CASE("sinusoid edge cases") {
  const auto phi = grid(50);
  const SinusoidFit c = fit_sinusoid(phi, std::vector<double>(50, 2.5));
  CHECK(c.amplitude == 0.0);
  CHECK(c.phase == 0.0);
  CHECK(c.rms_residual < 1e-15);
  CHECK(c.offset == doctest::Approx(2.5));
  CHECK_THROWS_AS(fit_sinusoid(std::vector<double>(10, 1.0), std::vector<double>(10, 0.0)),
                  InvalidParameter);
  CHECK_THROWS_AS(fit_sinusoid({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}), InvalidParameter);
  CHECK_THROWS_AS(fit_sinusoid({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 2.0}), InvalidParameter);
}

TEST_CASE("second harmonic does not bias the fundamental") {
  const auto phi = grid(100);
  std::vector<double> v;
  for (double p : phi) v.push_back(0.5 + 0.2 * std::sin(p + 1.1) + 0.01 * std::sin(2.0 * p));
  CHECK(std::abs(fit_sinusoid(phi, v).phase - 1.1) < 0.02);
}

TEST_CASE("exact recovery on noiseless Lissajous data") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> p(0.05 * pi, 0.95 * pi), amp(0.1, 5.0), off(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double target = p(rng);
    const EllipseFit f = fit_ellipse(lissajous(target, 60, amp(rng), amp(rng), off(rng), off(rng)));
    CHECK_FALSE(f.degenerate);
    CHECK(std::abs(f.phase_difference - target) < 1e-6);
    CHECK(4.0 * f.conic[0] * f.conic[2] - f.conic[1] * f.conic[1] > 0.0);
    CHECK(f.rms_residual < 1e-9);
  }
}

TEST_CASE("circle and line limits") {
  const EllipseFit circle = fit_ellipse(lissajous(pi / 2, 40));
  CHECK(circle.phase_difference == doctest::Approx(pi / 2).epsilon(1e-10));
  CHECK(std::abs(circle.conic[1]) < 1e-10);
  CHECK(circle.conic[0] == doctest::Approx(circle.conic[2]).epsilon(1e-10));
  CHECK(circle.amplitude_x == doctest::Approx(1.0).epsilon(1e-10));

  const EllipseFit line = fit_ellipse(lissajous(0.0, 40));
  CHECK(line.degenerate);
  CHECK(line.phase_difference == 0.0);
  const EllipseFit rising = fit_ellipse(lissajous(pi, 40));
  CHECK(rising.degenerate);
  CHECK(rising.phase_difference == pi);
}

TEST_CASE("axis ratio of the quarter-phase ellipse") {
  const EllipseFit f = fit_ellipse(lissajous(pi / 4, 200));
  const auto& q = f.conic;
  Eigen::Matrix2d m;
  m << q[0], q[1] / 2, q[1] / 2, q[2];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const double ratio = std::sqrt(es.eigenvalues()(0) / es.eigenvalues()(1));
  CHECK(ratio == doctest::Approx(std::tan(pi / 8)).epsilon(1e-9));
  CHECK(f.phase_difference == doctest::Approx(pi / 4).epsilon(1e-9));
}

TEST_CASE("fit input errors") {
  CHECK_THROWS_AS(fit_ellipse(lissajous(1.0, 5)), InvalidParameter);
  std::vector<Point2> flat(10, Point2{1.0, 1.0});
  CHECK_THROWS_AS(fit_ellipse(flat), InvalidParameter);
  std::vector<Point2> horizontal;
  for (int i = 0; i < 10; ++i) horizontal.push_back({double(i), 2.0});
  CHECK_THROWS_AS(fit_ellipse(horizontal), NumericalError);
  auto bad = lissajous(1.0, 10);
  bad[3].x = std::nan("");
  CHECK_THROWS_AS(fit_ellipse(bad), InvalidParameter);
}

TEST_CASE("noise robustness") {
  int passed = 0;
  const int trials = 100;
  for (int seed = 0; seed < trials; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::uniform_real_distribution<double> p(0.1 * pi, 0.9 * pi);
    const double target = p(rng);
    auto pts = lissajous(target, 400, 1.0, 0.6, 0.4, 0.8);
    std::normal_distribution<double> nx(0.0, 0.01), ny(0.0, 0.006);
    for (auto& q : pts) {
      q.x += nx(rng);
      q.y += ny(rng);
    }
    if (std::abs(fit_ellipse(pts).phase_difference - target) < 0.02 * pi) ++passed;
  }
  CHECK(passed >= 95);
}

TEST_CASE("translation and isotropic scaling equivariance") {
  const auto base = lissajous(0.37 * pi, 80, 0.7, 1.9, 0.1, -0.4);
  const EllipseFit f0 = fit_ellipse(base);
  const double s = 3.5, dx = -2.0, dy = 7.0;
  std::vector<Point2> moved;
  for (const auto& p : base) moved.push_back({s * p.x + dx, s * p.y + dy});
  const EllipseFit f1 = fit_ellipse(moved);
  CHECK(f1.phase_difference == doctest::Approx(f0.phase_difference).epsilon(1e-10));
  CHECK(f1.center.x == doctest::Approx(s * f0.center.x + dx).epsilon(1e-10));
  CHECK(f1.center.y == doctest::Approx(s * f0.center.y + dy).epsilon(1e-10));
  // Quadratic part scales as 1/s^2 before normalization: same direction.
  const double r0 = f0.conic[1] / f0.conic[0], r1 = f1.conic[1] / f1.conic[0];
  CHECK(r1 == doctest::Approx(r0).epsilon(1e-10));
  CHECK(f0.conic[2] / f0.conic[0] == doctest::Approx(f1.conic[2] / f1.conic[0]).epsilon(1e-10));
  for (const auto& p : moved) CHECK(std::abs(f1.evaluate(p.x, p.y)) < 1e-9);
}

TEST_CASE("ellipse phase agrees with the sinusoid phases") {
  const auto phi = grid(100);
  for (double target : {0.15 * pi, 0.4 * pi, 0.7 * pi}) {
    std::vector<double> x, y;
    std::vector<Point2> pts;
    for (double u : phi) {
      x.push_back(0.2 + 0.05 * std::sin(u + 0.3));
      y.push_back(0.9 + 0.11 * std::sin(-(u + 0.3) + target));
      pts.push_back({x.back(), y.back()});
    }
    const double from_sin = fold_phase(pi - (fit_sinusoid(phi, y).phase - fit_sinusoid(phi, x).phase));
    CHECK(std::abs(fit_ellipse(pts).phase_difference - from_sin) < 1e-3);
  }
}

TEST_CASE("orientation resolves the half-period ambiguity") {
  const EllipseFit cw = fit_ellipse(lissajous(0.3 * pi, 50));
  CHECK(cw.orientation == -1);
  CHECK(cw.phase_difference_full == doctest::Approx(0.3 * pi).epsilon(1e-9));
  // Same curve traversed with y = sin(-u - p): counter-clockwise.
  const EllipseFit ccw = fit_ellipse(lissajous(-0.3 * pi, 50));
  CHECK(ccw.phase_difference == doctest::Approx(0.3 * pi).epsilon(1e-9));
  CHECK(ccw.orientation == 1);
  CHECK(ccw.phase_difference_full == doctest::Approx(1.7 * pi).epsilon(1e-9));
}

TEST_CASE("fold") {
  CHECK(fold_phase(0.3) == doctest::Approx(0.3));
  CHECK(fold_phase(2.0 * pi - 0.3) == doctest::Approx(0.3));
  CHECK(fold_phase(-0.3) == doctest::Approx(0.3));
  CHECK(fold_phase(pi) == doctest::Approx(pi));
}
