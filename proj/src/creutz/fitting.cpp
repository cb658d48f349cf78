#include "creutz/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "creutz/error.hpp"
#include "creutz/lattice.hpp"

namespace creutz {

namespace {

constexpr double pi = std::numbers::pi;

// Relative spread below which the point cloud is treated as a line.
constexpr double kCollinearTolerance = 1e-10;

}  // namespace

double SinusoidFit::operator()(double phi) const {
  return offset + amplitude * std::sin(phi + phase);
}

SinusoidFit fit_sinusoid(const std::vector<double>& phi, const std::vector<double>& values) {
  if (phi.size() != values.size()) throw InvalidParameter("phi and values lengths differ");
  if (phi.size() < 4) throw InvalidParameter("sinusoid fit needs at least 4 points");
  const auto n = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = phi[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = std::sin(p);
    design(i, 2) = std::cos(p);
    rhs(i) = values[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-10 * sv(0))
    throw InvalidParameter("sinusoid design is rank deficient (phi does not span a period)");
  const Eigen::Vector3d c = svd.solve(rhs);

  SinusoidFit fit;
  fit.offset = c(0);
  fit.amplitude = std::hypot(c(1), c(2));
  const double scale = rhs.cwiseAbs().maxCoeff();
  if (fit.amplitude <= 1e-12 * scale) {
    fit.amplitude = 0.0;
    fit.phase = 0.0;
  } else {
    fit.phase = reduce_angle(std::atan2(c(2), c(1)));
  }
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rhs(i) - fit(phi[static_cast<std::size_t>(i)]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

double fold_phase(double p) {
  const double r = reduce_angle(p);
  return std::min(r, 2.0 * pi - r);
}

double EllipseFit::evaluate(double x, double y) const {
  const auto& q = conic;
  return q[0] * x * x + q[1] * x * y + q[2] * y * y + q[3] * x + q[4] * y + q[5];
}

namespace {

std::array<double, 6> normalized(std::array<double, 6> q) {
  double norm = 0.0;
  for (double v : q) norm += v * v;
  norm = std::sqrt(norm);
  const double sign = (q[0] + q[2]) < 0.0 ? -1.0 : 1.0;
  for (double& v : q) v *= sign / norm;
  return q;
}

// Shoelace area of the closed polygon through the points in input order.
int traversal_orientation(const std::vector<Point2>& pts, Point2 c, double extent) {
  double twice_area = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2& p = pts[i];
    const Point2& q = pts[(i + 1) % pts.size()];
    twice_area += (p.x - c.x) * (q.y - c.y) - (q.x - c.x) * (p.y - c.y);
  }
  if (std::abs(twice_area) <= 1e-12 * extent) return 0;
  return twice_area > 0.0 ? 1 : -1;
}

double sampson_rms(const EllipseFit& fit, const std::vector<Point2>& pts) {
  const auto& q = fit.conic;
  double ss = 0.0;
  for (const Point2& p : pts) {
    const double gx = 2.0 * q[0] * p.x + q[1] * p.y + q[3];
    const double gy = q[1] * p.x + 2.0 * q[2] * p.y + q[4];
    const double g2 = gx * gx + gy * gy;
    const double v = fit.evaluate(p.x, p.y);
    ss += g2 > 0.0 ? v * v / g2 : 0.0;
  }
  return std::sqrt(ss / static_cast<double>(pts.size()));
}

}  // namespace

EllipseFit fit_ellipse(const std::vector<Point2>& points) {
  if (points.size() < 6) throw InvalidParameter("ellipse fit needs at least 6 points");
  const auto n = static_cast<Eigen::Index>(points.size());

  // Isotropic normalization keeps the fit equivariant under translation and
  // uniform scaling while conditioning the scatter matrix.
  double mx = 0.0, my = 0.0;
  for (const Point2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidParameter("ellipse fit input contains non-finite values");
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const Point2& p : points) {
    const Eigen::Vector2d d(p.x - mx, p.y - my);
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(n);
  const double s = std::sqrt(0.5 * cov.trace());
  if (!(s > 0.0)) throw InvalidParameter("ellipse fit input has no spread");

  EllipseFit fit;
  fit.n_points = points.size();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> pca(cov);
  const double spread_ratio = pca.eigenvalues()(0) / pca.eigenvalues()(1);

  if (spread_ratio < kCollinearTolerance) {
    // Line through the centroid; conic (n . (p - m))^2 = 0.
    const Eigen::Vector2d dir = pca.eigenvectors().col(1);
    const Eigen::Vector2d nrm = pca.eigenvectors().col(0);
    const double cross = dir(0) * dir(1);
    if (std::abs(cross) < 1e-9)
      throw NumericalError("degenerate Lissajous data with a constant coordinate");
    const double off = -(nrm(0) * mx + nrm(1) * my);
    fit.conic = normalized({nrm(0) * nrm(0), 2.0 * nrm(0) * nrm(1), nrm(1) * nrm(1),
                            2.0 * nrm(0) * off, 2.0 * nrm(1) * off, off * off});
    fit.center = {mx, my};
    double ax = 0.0, ay = 0.0;
    for (const Point2& p : points) {
      ax = std::max(ax, std::abs(p.x - mx));
      ay = std::max(ay, std::abs(p.y - my));
    }
    fit.amplitude_x = ax;
    fit.amplitude_y = ay;
    fit.degenerate = true;
    fit.phase_difference = cross > 0.0 ? pi : 0.0;
    fit.phase_difference_full = fit.phase_difference;
    fit.orientation = 0;
    fit.rms_residual = sampson_rms(fit, points);
    return fit;
  }

  Eigen::MatrixXd d1(n, 3), d2(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = (points[static_cast<std::size_t>(i)].x - mx) / s;
    const double y = (points[static_cast<std::size_t>(i)].y - my) / s;
    d1.row(i) << x * x, x * y, y * y;
    d2.row(i) << x, y, 1.0;
  }
  const Eigen::Matrix3d s1 = d1.transpose() * d1;
  const Eigen::Matrix3d s2 = d1.transpose() * d2;
  const Eigen::Matrix3d s3 = d2.transpose() * d2;
  const Eigen::Matrix3d t = -s3.ldlt().solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * t;
  // Premultiply by the inverse of the 3x3 constraint block [[0,0,2],[0,-1,0],[2,0,0]].
  Eigen::Matrix3d reduced;
  reduced.row(0) = m.row(2) / 2.0;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> es(reduced);
  if (es.info() != Eigen::Success) throw NumericalError("ellipse eigenproblem failed");
  int best = -1;
  double best_constraint = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d v = es.eigenvectors().col(k).real();
    const double constraint = 4.0 * v(0) * v(2) - v(1) * v(1);
    const double scaled = constraint / v.squaredNorm();
    if (scaled > best_constraint) {
      best_constraint = scaled;
      best = k;
    }
  }
  if (best < 0) throw NumericalError("no ellipse-constrained solution for the point set");
  const Eigen::Vector3d quad = es.eigenvectors().col(best).real();
  const Eigen::Vector3d lin = t * quad;

  // Undo the normalization x = (X - mx)/s, y = (Y - my)/s.
  const double a = quad(0) / (s * s), b = quad(1) / (s * s), c = quad(2) / (s * s);
  const double dn = lin(0) / s, en = lin(1) / s, fn = lin(2);
  std::array<double, 6> q{};
  q[0] = a;
  q[1] = b;
  q[2] = c;
  q[3] = dn - 2.0 * a * mx - b * my;
  q[4] = en - 2.0 * c * my - b * mx;
  q[5] = a * mx * mx + b * mx * my + c * my * my - dn * mx - en * my + fn;
  fit.conic = normalized(q);

  const auto& k = fit.conic;
  const double disc = 4.0 * k[0] * k[2] - k[1] * k[1];
  fit.center = {(k[1] * k[4] - 2.0 * k[2] * k[3]) / disc, (k[1] * k[3] - 2.0 * k[0] * k[4]) / disc};
  const double level = -fit.evaluate(fit.center.x, fit.center.y);
  fit.amplitude_x = std::sqrt(std::max(0.0, 4.0 * k[2] * level / disc));
  fit.amplitude_y = std::sqrt(std::max(0.0, 4.0 * k[0] * level / disc));
  fit.phase_difference = phase_difference(fit);
  fit.orientation = traversal_orientation(points, fit.center, fit.amplitude_x * fit.amplitude_y);
  fit.phase_difference_full =
      fit.orientation > 0 ? reduce_angle(2.0 * pi - fit.phase_difference) : fit.phase_difference;
  fit.rms_residual = sampson_rms(fit, points);
  return fit;
}

double phase_difference(const EllipseFit& fit) {
  if (fit.degenerate) return fit.phase_difference;
  const auto& k = fit.conic;
  if (!(4.0 * k[0] * k[2] - k[1] * k[1] > 0.0))
    throw NumericalError("conic is not an ellipse; phase difference undefined");
  const double cosine = std::clamp(k[1] / (2.0 * std::sqrt(k[0] * k[2])), -1.0, 1.0);
  return std::acos(cosine);
}

}  // namespace creutz
