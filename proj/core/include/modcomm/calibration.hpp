#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modcomm/gaussian.hpp"
#include "modcomm/lattice.hpp"

namespace modcomm {

// Random dense Hermitian model with a random filling and a random tripartition
// of its modes, drawn from SplitMix64(seed).
struct RandomInstance {
  CMatrix h;
  int particles = 0;
  IndexList a, b, c;
};

RandomInstance random_instance(std::uint64_t seed, int min_modes, int max_modes);

struct CalibrationOptions {
  int instances = 200;
  int min_modes = 4;
  int max_modes = 10;
  std::uint64_t seed = 20240901;
  double tolerance = 1e-8;
  GaussianOptions gaussian;
};

struct CalibrationCheck {
  std::string name;
  int count = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return count > 0 && max_error <= tolerance; }
};

struct CalibrationReport {
  std::vector<CalibrationCheck> checks;
  double min_cmi = 0.0;
  bool passed() const;
};

// Compares the Gaussian engine against the exact oracle (C, S, CMI, J) and
// checks the invariants of both on the same instances.
CalibrationReport run_calibration(const CalibrationOptions& opts);

// Invariants of the lattice pipeline on a small Haldane patch: Hermiticity,
// projector property, purity, antisymmetry of J, current resummation, SSA.
std::vector<CalibrationCheck> run_invariant_suite(const GaussianOptions& opts = {}, int L = 12);

}  // namespace modcomm
