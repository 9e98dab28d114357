#pragma once

#include <cstdint>
#include <vector>

#include "modcomm/regions.hpp"
#include "modcomm/types.hpp"

namespace modcomm {

inline constexpr int kMaxOracleModes = 14;

// Many-body state with fixed particle number. Basis index b encodes mode m in
// bit (N - 1 - m), so mode 0 is the leftmost bit of the bitstring, and
// |b> = c^dag_{m1} c^dag_{m2} ... |0> with m1 < m2 < ... ascending.
class FockState {
 public:
  FockState(CVector amplitudes, int modes, int particles);

  const CVector& amplitudes() const noexcept { return amps_; }
  int modes() const noexcept { return modes_; }
  int particles() const noexcept { return particles_; }
  bool occupied(std::uint32_t config, int mode) const noexcept {
    return (config >> (modes_ - 1 - mode)) & 1U;
  }

 private:
  CVector amps_;
  int modes_;
  int particles_;
};

FockState exact_ground_state(const CMatrix& h, int n_particles, double gap_threshold = 1e-10);
// <c^dag_j c_k>
CMatrix exact_correlations(const FockState& state);
double exact_energy(const FockState& state, const CMatrix& h);

struct DensitySector {
  int particles = 0;
  std::vector<std::uint32_t> configs;  // local bitstrings, modes[0] leftmost
  CMatrix rho;
};

// Reduced density matrix stored block-diagonally by particle number.
class DensityOperator {
 public:
  DensityOperator(IndexList modes, std::vector<DensitySector> sectors);

  const IndexList& modes() const noexcept { return modes_; }
  const std::vector<DensitySector>& sectors() const noexcept { return sectors_; }
  CMatrix dense() const;
  RVector eigenvalues() const;
  double trace() const;
  double purity() const;

 private:
  IndexList modes_;
  std::vector<DensitySector> sectors_;
};

DensityOperator reduce(const FockState& state, const IndexList& modes);
double von_neumann_entropy(const DensityOperator& rho);
double exact_entropy(const FockState& state, const IndexList& modes);
double exact_cmi(const FockState& state, const IndexList& a, const IndexList& b, const IndexList& c);
// <psi| K_X |psi> with K_X = -ln rho_X on its support.
double exact_modular_expectation(const FockState& state, const IndexList& modes);

struct ExactCommutator {
  double value = 0.0;
  double support_weight = 0.0;  // largest weight of rho_X discarded outside its support
  bool support_warning = false;
};

ExactCommutator exact_modular_commutator(const FockState& state, const IndexList& a, const IndexList& b,
                                         const IndexList& c, double support_tol = 1e-10);
ExactCommutator exact_modular_commutator(const FockState& state, const Region& a, const Region& b,
                                         const Region& c, double support_tol = 1e-10);

}  // namespace modcomm
