#include <gtest/gtest.h>

#include <cmath>

#include "modcomm/calibration.hpp"
#include "modcomm/errors.hpp"
#include "modcomm/gaussian.hpp"
#include "modcomm/linalg.hpp"
#include "modcomm/oracle.hpp"

namespace modcomm {
namespace {

TEST(Oracle, DimerGroundState) {
  CMatrix h(2, 2);
  h << 0.0, -1.0, -1.0, 0.0;
  const FockState psi = exact_ground_state(h, 1);
  const CVector& a = psi.amplitudes();
  ASSERT_EQ(a.size(), 4);
  EXPECT_NEAR(std::abs(a(0b10)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(a(0b01)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_EQ(std::abs(a(0b00)), 0.0);
  EXPECT_EQ(std::abs(a(0b11)), 0.0);
  EXPECT_TRUE(psi.occupied(0b10, 0));
  EXPECT_FALSE(psi.occupied(0b10, 1));
}

TEST(Oracle, StateIsNormalisedInItsSector) {
  const RandomInstance r = random_instance(9, 8, 8);
  const FockState psi = exact_ground_state(r.h, r.particles);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
  for (Eigen::Index b = 0; b < psi.amplitudes().size(); ++b)
    if (__builtin_popcount(unsigned(b)) != r.particles) EXPECT_EQ(psi.amplitudes()(b), cplx(0.0));
}

TEST(Oracle, EnergyIsSumOfOccupiedLevels) {
  const RandomInstance r = random_instance(3, 7, 7);
  const RVector w = hermitian_eigenvalues(r.h);
  EXPECT_NEAR(exact_energy(exact_ground_state(r.h, r.particles), r.h), w.head(r.particles).sum(), 1e-12);
}

TEST(Oracle, Limits) {
  EXPECT_THROW(exact_ground_state(CMatrix::Zero(15, 15), 3), InvalidArgument);
  EXPECT_THROW(exact_ground_state(CMatrix::Zero(4, 4), 2), DegenerateFilling);
  EXPECT_THROW(exact_ground_state(build_chain(4).h(), 5), InvalidArgument);
}

TEST(Oracle, FullReductionIsPure) {
  const RandomInstance r = random_instance(4, 6, 6);
  const FockState psi = exact_ground_state(r.h, r.particles);
  const DensityOperator rho = reduce(psi, {0, 1, 2, 3, 4, 5});
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(rho), 0.0, 1e-10);
  EXPECT_THROW(reduce(psi, {}), InvalidArgument);
}

TEST(Oracle, ComplementarySpectraAgree) {
  const RandomInstance r = random_instance(5, 8, 8);
  const FockState psi = exact_ground_state(r.h, r.particles);
  const DensityOperator a = reduce(psi, {0, 2, 5});
  const DensityOperator b = reduce(psi, {1, 3, 4, 6, 7});
  EXPECT_NEAR(a.trace(), 1.0, 1e-12);
  EXPECT_GE(a.eigenvalues().minCoeff(), -1e-12);
  EXPECT_LE(a.purity(), 1.0 + 1e-12);
  RVector ea = a.eigenvalues();
  RVector eb = b.eigenvalues();
  std::sort(ea.data(), ea.data() + ea.size(), std::greater<>());
  std::sort(eb.data(), eb.data() + eb.size(), std::greater<>());
  for (Eigen::Index i = 0; i < ea.size(); ++i) EXPECT_NEAR(ea(i), eb(i), 1e-10);
  EXPECT_NEAR(von_neumann_entropy(a), von_neumann_entropy(b), 1e-10);
}

TEST(Oracle, PeschelSpectrumOfHalfChain) {
  const LatticeModel m = build_chain(4);
  const FockState psi = exact_ground_state(m.h(), 2);
  RVector rho = reduce(psi, {0, 1}).eigenvalues();
  const RVector n = hermitian_eigenvalues(restrict(ground_state_correlations(m), IndexList{0, 1}).matrix());
  std::vector<double> expected;
  for (int mask = 0; mask < 4; ++mask) {
    double p = 1.0;
    for (int l = 0; l < 2; ++l) p *= (mask >> l) & 1 ? n(l) : 1.0 - n(l);
    expected.push_back(p);
  }
  std::sort(expected.begin(), expected.end());
  std::sort(rho.data(), rho.data() + rho.size());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(rho(i), expected[std::size_t(i)], 1e-10);
}

TEST(Oracle, ModularHamiltonianSupportConvention) {
  for (std::uint64_t seed : {11, 12, 13}) {
    const RandomInstance r = random_instance(seed, 6, 9);
    const FockState psi = exact_ground_state(r.h, r.particles);
    EXPECT_NEAR(exact_modular_expectation(psi, r.a), exact_entropy(psi, r.a), 1e-10);
    IndexList all(std::size_t(r.h.rows()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
    EXPECT_NEAR(exact_modular_expectation(psi, all), 0.0, 1e-10);
  }
}

TEST(Oracle, CommutatorEmptyAndAntisymmetry) {
  // J vanishes for a pure ABC and for a single particle or hole; skip those instances.
  std::uint64_t seed = 21;
  RandomInstance r = random_instance(seed, 7, 7);
  while (r.a.size() + r.b.size() + r.c.size() == 7 || r.particles < 2 || r.particles > 5)
    r = random_instance(++seed, 7, 7);
  const FockState psi = exact_ground_state(r.h, r.particles);
  EXPECT_EQ(exact_modular_commutator(psi, {}, r.b, r.c).value, 0.0);
  EXPECT_EQ(exact_modular_commutator(psi, r.a, {}, r.c).value, 0.0);
  const double j = exact_modular_commutator(psi, r.a, r.b, r.c).value;
  EXPECT_NEAR(j, -exact_modular_commutator(psi, r.c, r.b, r.a).value, 1e-12);
  EXPECT_GT(std::abs(j), 1e-4);
  EXPECT_THROW(exact_modular_commutator(psi, r.a, r.a, r.c), InvalidArgument);
}

TEST(Oracle, CmiIsNonNegative) {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    const RandomInstance r = random_instance(seed, 4, 9);
    EXPECT_GE(exact_cmi(exact_ground_state(r.h, r.particles), r.a, r.b, r.c), -1e-10);
  }
}

TEST(Oracle, RandomInstancesAreReproducible) {
  const RandomInstance a = random_instance(77, 4, 10);
  const RandomInstance b = random_instance(77, 4, 10);
  EXPECT_TRUE(a.h == b.h);
  EXPECT_EQ(a.a, b.a);
  EXPECT_THROW(random_instance(1, 2, 10), InvalidArgument);
  EXPECT_THROW(random_instance(1, 4, 15), InvalidArgument);
}

TEST(Calibration, PassesOnAFreshBuild) {
  CalibrationOptions opts;
  opts.instances = 60;
  const CalibrationReport rep = run_calibration(opts);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed()) << c.name << " " << c.max_error;
  EXPECT_TRUE(rep.passed());
}

TEST(Calibration, LargerInstancesAlsoPass) {
  CalibrationOptions opts;
  opts.instances = 8;
  opts.min_modes = 11;
  opts.max_modes = 12;
  EXPECT_TRUE(run_calibration(opts).passed());
}

TEST(Calibration, FlippedTransposeFails) {
  CalibrationOptions opts;
  opts.instances = 20;
  opts.gaussian.flip_transpose = true;
  const CalibrationReport rep = run_calibration(opts);
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.checks[0].passed());
}

TEST(Calibration, InvariantSuitePasses) {
  for (const auto& c : run_invariant_suite()) EXPECT_TRUE(c.passed()) << c.name << " " << c.max_error;
}

}  // namespace
}  // namespace modcomm
