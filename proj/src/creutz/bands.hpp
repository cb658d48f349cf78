#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "creutz/lattice.hpp"

namespace creutz {

// Per-k data for both branches; index 0 of each pair is the flat band,
// index 1 the dispersive band.
struct BandStructure {
  std::vector<double> k_grid;
  std::vector<std::array<double, 2>> energies;
  std::vector<std::array<Eigen::Vector2cd, 2>> eigenvectors;
  std::vector<std::array<double, 2>> polarization;

  std::size_t size() const { return k_grid.size(); }
  double e_flat(std::size_t i) const { return energies[i][0]; }
  double e_disp(std::size_t i) const { return energies[i][1]; }
  double flat_bandwidth() const;
  double dispersive_min() const;
  double dispersive_max() const;
};

/// Uniform, endpoint-exclusive grid on [-pi, pi).
std::vector<double> brillouin_grid(int n_k);

/// Diagonalizes H(k) on a uniform grid. The branch with the smaller
/// bandwidth is labelled flat. At degenerate k points the eigenvectors are
/// carried over from the nearest non-degenerate neighbor, which is the basis
/// of maximal overlap because the degenerate eigenspace is all of C^2.
BandStructure compute_bands(const LatticeParams& params, int n_k, int threads = 1);

/// <sigma_z> = |a|^2 - |b|^2.
double sigma_z(const Eigen::Vector2cd& v);

/// min_k |E_disp(k) - E_flat(k)|: grid search followed by a Brent refinement
/// between the neighbours of the best grid point.
double band_gap(const LatticeParams& params, int n_k = 2048);

struct ClsSite {
  Leg leg;
  int cell;
  cplx amplitude;
};

struct CompactLocalizedState {
  std::vector<ClsSite> sites;
  double energy = 0.0;

  int min_cell() const;
  int max_cell() const;
  int cell_span() const { return max_cell() - min_cell() + 1; }
};

// Ratio between the a- and b-components of the CLS. EigenCondition solves
// H v = 0 (c = t3/t1 = omega2/omega1); LiteralEta uses c = t2/t1 and is only
// an eigenstate for eta == 1. Kept so the difference can be demonstrated.
enum class ClsCoefficient { EigenCondition, LiteralEta };

/// Flat-band state anchored at `cell`. One cell of support when phi is a
/// multiple of 2*pi, cells `cell` and `cell + 1` otherwise.
CompactLocalizedState build_cls(const LatticeParams& params, int cell,
                                ClsCoefficient coefficient = ClsCoefficient::EigenCondition);

CompactLocalizedState translate(const CompactLocalizedState& state, int shift);

/// Embeds the state into the ladder rows of `h`.
Eigen::VectorXcd embed(const CompactLocalizedState& state, const RealSpaceHamiltonian& h);

/// ||H v - E v||_2. The support must stay at least two cells away from the
/// truncation boundary.
double verify_cls(const CompactLocalizedState& state, const RealSpaceHamiltonian& h);

}  // namespace creutz
