#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modcomm/types.hpp"

namespace modcomm {

enum class Sublattice { a, b };

struct Site {
  int index = 0;
  Vec2 position = Vec2::Zero();
  Sublattice sublattice = Sublattice::a;
  std::array<int, 2> unit_cell{0, 0};
};

struct ModelParams {
  std::string name;  // "haldane", "pi_flux" or "custom"
  int L = 0;
  int Lx = 0;
  int Ly = 0;
  double mu_tilde = 0.0;
  double mu = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double phi = 0.0;
  double tau = 0.0;
  double disorder_w = 0.0;
  std::optional<std::uint64_t> disorder_seed;
};

// Immutable single-particle model: geometry plus Hermitian hopping matrix.
//
// Haldane: nearest-neighbour distance 1, Bravais vectors a1 = (sqrt3, 0) and
// a2 = (sqrt3/2, 3/2), patch = unit cells whose centres lie in the flat-top
// hexagon |y| <= L, |sqrt3/2 x +- y/2| <= L. The patch centre (origin) is a
// plaquette centre. Two sites per unit cell.
//
// pi-flux: unit cell (x, m) holds a at (x, m) and b at (x, m + 1/2), full
// Lx x Ly rectangle of cells, so N = 2 Lx Ly.
class LatticeModel {
 public:
  LatticeModel(std::vector<Site> sites, CMatrix h, ModelParams params, Vec2 center,
               double lattice_constant, double bond_length);

  const std::vector<Site>& sites() const noexcept { return sites_; }
  const Site& site(int i) const { return sites_.at(static_cast<std::size_t>(i)); }
  const Vec2& position(int i) const { return sites_[static_cast<std::size_t>(i)].position; }
  const CMatrix& h() const noexcept { return h_; }
  const ModelParams& params() const noexcept { return params_; }
  int size() const noexcept { return static_cast<int>(sites_.size()); }
  const Vec2& center() const noexcept { return center_; }
  double lattice_constant() const noexcept { return lattice_constant_; }
  double bond_length() const noexcept { return bond_length_; }
  // FNV-1a hash of positions and h; identifies the model in regions and golden files.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  std::vector<Site> sites_;
  CMatrix h_;
  ModelParams params_;
  Vec2 center_;
  double lattice_constant_;
  double bond_length_;
  std::uint64_t fingerprint_;
};

LatticeModel build_haldane(int L, double mu_tilde, double t1 = 1.0, double t2 = 1.0,
                           double phi = 1.5707963267948966);
LatticeModel build_pi_flux(int Lx, int Ly, double t1 = 1.0, double tau = 1.2);
// Sites on a line at unit spacing with an arbitrary Hermitian h.
LatticeModel build_custom(CMatrix h, std::string name = "custom");
LatticeModel build_chain(int n, double t = 1.0);

LatticeModel add_disorder(const LatticeModel& model, double W, std::uint64_t seed);

double half_filling_gap(const LatticeModel& model);
double half_filling_gap(const CMatrix& h);

// Indirect band gap of the translation-invariant model with the same
// parameters, from a k-grid of size k_points^2 (include K and M points when
// k_points is a multiple of 6).
double haldane_bulk_gap(double mu_tilde, double t1 = 1.0, double t2 = 1.0,
                        double phi = 1.5707963267948966, int k_points = 96);
double pi_flux_bulk_gap(double t1, double tau, int k_points = 96);
double bulk_gap(const ModelParams& params, int k_points = 96);

// Largest distance between two sites connected by a nonzero off-diagonal entry.
double hopping_range(const LatticeModel& model, double tol = 0.0);

}  // namespace modcomm
