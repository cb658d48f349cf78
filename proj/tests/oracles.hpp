#pragma once

// Reference implementations used only by tests. Nothing here calls into the
// library's construction or solver code.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Hop {
  double t1, t2, t3;
};

inline Hop hoppings(double w1, double w2, double dc) {
  return {-w1 * w1 / dc, -w2 * w2 / dc, -w1 * w2 / dc};
}

// Dense open ladder, rows (a_j, b_j) for j = -(n-1)/2 ... (n-1)/2.
inline Eigen::MatrixXcd ladder(double w1, double w2, double dc, double phi, int n) {
  const Hop t = hoppings(w1, w2, dc);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const cplx i(0.0, 1.0);
  for (int c = 0; c < n; ++c) {
    const int a = 2 * c, b = 2 * c + 1;
    h(a, a) = 2.0 * t.t1;
    h(b, b) = 2.0 * t.t2;
    h(a, b) = h(b, a) = 2.0 * t.t3 * std::cos(phi / 2.0);
    if (c + 1 < n) {
      const int a1 = a + 2, b1 = b + 2;
      // Amplitude for hopping forward j -> j+1.
      h(a1, a) = t.t1 * std::exp(-i * phi / 2.0);
      h(b1, b) = t.t2 * std::exp(i * phi / 2.0);
      h(a, a1) = std::conj(h(a1, a));
      h(b, b1) = std::conj(h(b1, b));
      h(b1, a) = h(a, b1) = t.t3;
      h(a1, b) = h(b, a1) = t.t3;
    }
  }
  return h;
}

inline double e_disp(const Hop& t, double phi, double k) {
  return 2.0 * (t.t1 + t.t2) + 2.0 * t.t1 * std::cos(k - phi / 2.0) +
         2.0 * t.t2 * std::cos(k + phi / 2.0);
}

inline double gap(const Hop& t, double phi) {
  return 2.0 * std::abs(t.t1 + t.t2) -
         2.0 * std::sqrt(t.t1 * t.t1 + t.t2 * t.t2 + 2.0 * t.t1 * t.t2 * std::cos(phi));
}

// x = sum_n v_n <v_n|e> omega_p / (delta + i gamma - E_n), uniform gamma.
inline Eigen::VectorXcd spectral_response(const Eigen::MatrixXcd& h, int probe_row, double delta,
                                          double gamma, double omega_p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const auto& v = es.eigenvectors();
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(h.rows());
  for (Eigen::Index n = 0; n < h.rows(); ++n) {
    const cplx w = std::conj(v(probe_row, n)) * omega_p / cplx(delta - es.eigenvalues()(n), gamma);
    x += w * v.col(n);
  }
  return x;
}

// Dense LU solve of (delta + i Gamma - H) x = omega_p e_probe.
inline Eigen::VectorXcd dense_response(const Eigen::MatrixXcd& h, int probe_row, double delta,
                                       double gamma_a, double gamma_b, double omega_p) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd m = -h;
  for (Eigen::Index r = 0; r < n; ++r) m(r, r) += cplx(delta, r % 2 == 0 ? gamma_a : gamma_b);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  e(probe_row) = omega_p;
  return m.partialPivLu().solve(e);
}

// Composite Simpson rule on [a, b] with n (even) intervals.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
