#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace creutz {

using cplx = std::complex<double>;

enum class Leg { A, B };

inline Leg other_leg(Leg leg) { return leg == Leg::A ? Leg::B : Leg::A; }

// Drive parameters of the two standing waves. Frequencies in MHz, flux in
// radians. phi is kept unreduced so sweeps stay continuous across 2*pi.
struct LatticeParams {
  double omega1_mhz = 0.0;
  double omega2_mhz = 0.0;
  double delta_c_mhz = 0.0;
  double phi = 0.0;

  double phi_reduced() const;
};

struct Hoppings {
  double t1 = 0.0;  // a-leg
  double t2 = 0.0;  // b-leg
  double t3 = 0.0;  // diagonals, and rungs via 2*t3*cos(phi/2)
  std::optional<double> eta;  // t2/t1, empty when omega1 == 0

  double max_abs() const;
};

/// Adiabatically eliminated hoppings: t1 = -W1^2/Dc, t2 = -W2^2/Dc,
/// t3 = -W1*W2/Dc. Throws InvalidParameter for Dc == 0 or negative Rabi
/// frequencies.
Hoppings derive_hoppings(const LatticeParams& params);

void validate(const LatticeParams& params);

/// Reduce an angle to [0, 2*pi).
double reduce_angle(double phi);

// One upper-triangle (row <= col) nonzero of the open ladder. Diagonal
// entries have row == col.
struct Coupling {
  int row;
  int col;
  cplx value;
};

// Row layout of the truncated ladder: cells -(n-1)/2 ... (n-1)/2, two rows
// per cell in order (a, b), so cell 0 sits at the array center.
class LadderLayout {
public:
  explicit LadderLayout(int n_cells);

  int n_cells() const { return n_cells_; }
  int half() const { return (n_cells_ - 1) / 2; }
  int dim() const { return 2 * n_cells_; }
  int first_cell() const { return -half(); }
  int last_cell() const { return half(); }
  bool contains(int cell) const { return cell >= first_cell() && cell <= last_cell(); }
  int index(Leg leg, int cell) const;
  Leg leg_of(int row) const { return row % 2 == 0 ? Leg::A : Leg::B; }
  int cell_of(int row) const { return row / 2 - half(); }

private:
  int n_cells_;
};

/// Every nonzero of the open-boundary Hamiltonian (upper triangle).
/// Forward hopping j -> j+1 carries t1*exp(-i*phi/2) on leg a and
/// t2*exp(+i*phi/2) on leg b; the product of matrix elements around
/// a_j -> a_{j+1} -> b_{j+1} -> b_j -> a_j has phase phi.
std::vector<Coupling> ladder_couplings(const LatticeParams& params, const LadderLayout& layout);

struct RealSpaceHamiltonian {
  LadderLayout layout;
  Eigen::MatrixXcd matrix;

  int n_cells() const { return layout.n_cells(); }
  int index(Leg leg, int cell) const { return layout.index(leg, cell); }
};

/// Dense open-boundary Hamiltonian. n_cells must be odd and >= 3.
RealSpaceHamiltonian build_real_space(const LatticeParams& params, int n_cells);

/// Exchange the a and b rows/columns of every cell.
RealSpaceHamiltonian swap_legs(const RealSpaceHamiltonian& h);

/// Parameters of the leg-exchanged lattice: omega1 <-> omega2, phi -> -phi.
LatticeParams mirrored(const LatticeParams& params);

struct BlochHamiltonian {
  double k = 0.0;
  Eigen::Matrix2cd matrix;
};

/// H(k) = sum_R H[(.,0),(.,R)] exp(-i k R) in the (a, b) basis:
///   A(k) = 2 t1 (1 + cos(k - phi/2)), B(k) = 2 t2 (1 + cos(k + phi/2)),
///   C(k) = 2 t3 (cos(phi/2) + cos k).
BlochHamiltonian build_bloch(const LatticeParams& params, double k);

}  // namespace creutz
