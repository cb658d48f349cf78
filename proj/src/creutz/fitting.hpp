#pragma once

#include <array>
#include <vector>

namespace creutz {

// values ~ offset + amplitude * sin(phi + phase)
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // [0, 2*pi)
  double rms_residual = 0.0;

  double operator()(double phi) const;
};

SinusoidFit fit_sinusoid(const std::vector<double>& phi, const std::vector<double>& values);

struct Point2 {
  double x;
  double y;
};

// Conic A x^2 + B xy + C y^2 + D x + E y + F = 0 with unit coefficient norm
// and A + C > 0.
struct EllipseFit {
  std::array<double, 6> conic{};
  Point2 center{0.0, 0.0};
  double amplitude_x = 0.0;  // half extent of the curve along x
  double amplitude_y = 0.0;
  // Phase of the Lissajous model x = sin(u), y = sin(-u + p), folded to [0, pi].
  double phase_difference = 0.0;
  // Unfolded phase in [0, 2*pi) using the traversal direction of the input
  // order: clockwise traversal keeps p, counter-clockwise maps p -> 2*pi - p.
  double phase_difference_full = 0.0;
  int orientation = 0;  // -1 clockwise, +1 counter-clockwise, 0 undetermined
  double rms_residual = 0.0;  // RMS Sampson distance, data units
  bool degenerate = false;    // points on a line; conic holds the line squared
  std::size_t n_points = 0;

  double evaluate(double x, double y) const;
};

/// Ellipse-specific direct least-squares conic fit (scatter matrix vs the
/// 4AC - B^2 = 1 constraint, solved through the reduced 3x3 eigenproblem).
/// Collinear input falls back to a line fit and sets `degenerate`.
EllipseFit fit_ellipse(const std::vector<Point2>& points);

/// cos(p) = B / (2 sqrt(AC)) for the fitted conic, which is independent of
/// the amplitudes and offsets of the two curves. Degenerate fits return 0
/// (negative slope) or pi (positive slope).
double phase_difference(const EllipseFit& fit);

/// Fold an angle onto [0, pi] (p and -p are the same ellipse).
double fold_phase(double p);

}  // namespace creutz
