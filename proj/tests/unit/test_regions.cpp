#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "modcomm/errors.hpp"
#include "modcomm/regions.hpp"

namespace modcomm {
namespace {

constexpr double kPi = std::numbers::pi;

class RegionsTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new LatticeModel(build_haldane(12, 0.0));
    pflux_ = new LatticeModel(build_pi_flux(31, 30, 1.0, 1.2));
    large_ = new LatticeModel(build_haldane(24, 0.0));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete pflux_;
    delete large_;
  }
  static PresetParams small() {
    PresetParams p;
    p.r = 7.0;
    p.w = 5.0;
    return p;
  }
  static LatticeModel* model_;
  static LatticeModel* pflux_;
  static LatticeModel* large_;
};

LatticeModel* RegionsTest::model_ = nullptr;
LatticeModel* RegionsTest::pflux_ = nullptr;
LatticeModel* RegionsTest::large_ = nullptr;

TEST_F(RegionsTest, RegionIsSortedAndRangeChecked) {
  const Region r = Region::from_sites(*model_, {5, 1, 3}, "R");
  EXPECT_EQ(r.sites(), (IndexList{1, 3, 5}));
  EXPECT_THROW(Region::from_sites(*model_, {5, 1, 5}), InvalidArgument);
  EXPECT_TRUE(r.contains(3));
  EXPECT_FALSE(r.contains(2));
  EXPECT_THROW(Region::from_sites(*model_, {model_->size()}), InvalidArgument);
  EXPECT_THROW(Region::from_sites(*model_, {-1}), InvalidArgument);
}

TEST_F(RegionsTest, FullWedgeSelectsEverySite) {
  EXPECT_EQ(sector(*model_, model_->center(), 0.3, 0.3 + 2 * kPi).size(), std::size_t(model_->size()));
  EXPECT_TRUE(sector(*model_, model_->center(), 0.7, 0.7).empty());
}

TEST_F(RegionsTest, SixWedgesTileTheLattice) {
  std::vector<Region> parts;
  for (int k = 0; k < 6; ++k) parts.push_back(sector(*model_, model_->center(), k * kPi / 3, (k + 1) * kPi / 3));
  std::size_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    total += parts[i].size();
    for (std::size_t j = i + 1; j < parts.size(); ++j) EXPECT_TRUE(region_intersect(parts[i], parts[j]).empty());
  }
  EXPECT_EQ(total, std::size_t(model_->size()));
  EXPECT_EQ(region_union(parts).size(), std::size_t(model_->size()));
}

TEST_F(RegionsTest, WedgesAreHalfOpen) {
  // Pi-flux sites lie on the x axis through the centre row, so rays at 0 hit sites.
  const Vec2 o = pflux_->center();
  const Region upper = sector(*pflux_, o, 0.0, kPi);
  const Region lower = sector(*pflux_, o, kPi, 2 * kPi);
  EXPECT_TRUE(region_intersect(upper, lower).empty());
  EXPECT_EQ(upper.size() + lower.size(), std::size_t(pflux_->size()));
}

TEST_F(RegionsTest, SetAlgebra) {
  const Region a = disk(*model_, model_->center(), 5.0);
  const Region b = sector(*model_, model_->center(), 0.0, kPi);
  EXPECT_TRUE(region_subtract(a, a).empty());
  EXPECT_EQ(region_union(a, region_subtract(b, a)), region_union(a, b));
  EXPECT_EQ(region_intersect(a, b).size() + region_subtract(a, b).size(), a.size());
  EXPECT_EQ(complement(*model_, a).size() + a.size(), std::size_t(model_->size()));
}

TEST_F(RegionsTest, OperandsMustShareAModel) {
  const LatticeModel other = build_haldane(12, 0.5);
  const Region a = disk(*model_, model_->center(), 3.0);
  const Region b = disk(other, other.center(), 3.0);
  EXPECT_THROW(region_union(a, b), InvalidArgument);
  EXPECT_THROW(region_intersect(a, b), InvalidArgument);
  EXPECT_THROW(region_subtract(a, b), InvalidArgument);
}

TEST_F(RegionsTest, DiskAndRectangleAreClosed) {
  const Vec2 o = pflux_->center();
  const Vec2 p = pflux_->position(0);
  const double r = (p - o).norm();
  EXPECT_TRUE(disk(*pflux_, o, r).contains(0));
  EXPECT_TRUE(rectangle(*pflux_, p, p + Vec2(1.0, 1.0)).contains(0));
  const Region d = disk(*model_, model_->center(), 4.0);
  for (int s : d.sites())
    EXPECT_LE((model_->position(s) - model_->center()).norm(), 4.0 + 1e-12);
}

TEST_F(RegionsTest, EdgeBandLimits) {
  EXPECT_EQ(edge_band(*model_, 100.0).size(), std::size_t(model_->size()));
  const Region thin = edge_band(*model_, 1e-6);
  EXPECT_FALSE(thin.empty());
  EXPECT_LT(thin.size(), std::size_t(model_->size()) / 4);
  const Region band = edge_band(*model_, 3.0);
  EXPECT_TRUE(region_subtract(thin, band).empty());
}

TEST_F(RegionsTest, IdenticalRegionsFailValidation) {
  Partition p;
  p.name = "twins";
  const Region a = disk(*model_, model_->center(), 3.0, "A");
  p.regions = {a, a.relabeled("B"), sector(*model_, model_->center(), 0.0, 1.0, "C")};
  EXPECT_THROW(validate_partition(*model_, p), InvalidPartition);
  const PartitionDiagnostics d = diagnose_partition(*model_, p);
  EXPECT_FALSE(d.valid);
  EXPECT_FALSE(d.overlaps.empty());
}

TEST_F(RegionsTest, JunctionBallRadiiMustIncrease) {
  EXPECT_NO_THROW(JunctionBall(Vec2::Zero(), 1.0, 2.0, 3.0));
  EXPECT_THROW(JunctionBall(Vec2::Zero(), 0.0, 2.0, 3.0), InvalidArgument);
  EXPECT_THROW(JunctionBall(Vec2::Zero(), 2.0, 2.0, 3.0), InvalidArgument);
  EXPECT_THROW(JunctionBall(Vec2::Zero(), 1.0, 3.0, 2.0), InvalidArgument);
}

TEST_F(RegionsTest, PresetsAreValidWithExpectedCounts) {
  for (const auto& name : preset_names()) {
    const bool pi = name == "edge_pizza_n3" || name == "edge_pizza_n4";
    const LatticeModel& m = pi ? *pflux_ : *model_;
    const Partition p = preset(name, m, pi ? PresetParams{} : small());
    const PartitionDiagnostics d = validate_partition(m, p);
    EXPECT_TRUE(d.valid) << name;
    for (std::size_t c : d.counts) EXPECT_GT(c, 0U) << name;
    EXPECT_EQ(p.name, name);
  }
  EXPECT_EQ(preset("bulk_pizza_n2", *model_, small()).regions.size(), 3U);
  EXPECT_EQ(preset("incomplete_disk", *model_, small()).regions.size(), 4U);
}

TEST_F(RegionsTest, PizzaFootprintMatchesABruteForceDiskCount) {
  const LatticeModel big = build_haldane(24, 0.0);
  PresetParams p;
  p.r = 17.0;
  const Partition part = preset("bulk_pizza_n2", big, p);
  std::size_t covered = 0;
  for (const auto& r : part.regions) covered += r.size();
  std::size_t brute = 0;
  for (int i = 0; i < big.size(); ++i) brute += (big.position(i) - big.center()).norm() <= 17.0 ? 1 : 0;
  EXPECT_EQ(covered, brute);
  EXPECT_EQ(covered, 696U);
}

TEST_F(RegionsTest, EdgePresetsStayInsideTheBand) {
  for (const char* name : {"edge_pizza_n2", "edge_pizza_alt"}) {
    const Partition p = preset(name, *model_, small());
    ASSERT_TRUE(p.band.has_value());
    for (const auto& r : p.regions) EXPECT_TRUE(region_subtract(r, *p.band).empty()) << name;
    EXPECT_TRUE(diagnose_partition(*model_, p).inside_band);
  }
  const LatticeModel big = build_haldane(24, 0.0);
  PresetParams w13;
  w13.w = 13.0;
  const Partition e = preset("edge_pizza_n2", big, w13);
  const Region band = edge_band(big, 13.0);
  for (const auto& r : e.regions) EXPECT_TRUE(region_subtract(r, band).empty());
}

TEST_F(RegionsTest, PresetErrors) {
  EXPECT_THROW(preset("no_such_preset", *model_), InvalidArgument);
  PresetParams huge;
  huge.r = 40.0;
  EXPECT_THROW(preset("tripartite_disk", *model_, huge), InvalidArgument);
  PresetParams wide;
  wide.w = 40.0;
  EXPECT_THROW(preset("edge_pizza_n2", *model_, wide), InvalidArgument);
  PresetParams widths = small();
  widths.widths = std::vector<double>{1.0, 1.0, 1.0};
  EXPECT_THROW(preset("bulk_pizza_n2", *model_, widths), InvalidArgument);
}

TEST_F(RegionsTest, TripartiteDiskHasOneCompleteJunction) {
  const Partition p = preset("tripartite_disk", *model_, small());
  const auto js = find_trijunctions(*model_, p);
  ASSERT_EQ(js.size(), 1U);
  EXPECT_TRUE(js[0].complete);
  EXPECT_EQ(js[0].orientation, 1);
  EXPECT_LT((js[0].position - model_->center()).norm(), 2.0 * model_->lattice_constant());
  EXPECT_EQ(predict_geometric_integer(*model_, p), 1);
}

TEST_F(RegionsTest, PizzaComplementHasTwoJunctionsOfEqualSign) {
  const Partition p = preset("bulk_pizza_n2", *large_);
  const auto js = find_trijunctions(*large_, p);
  ASSERT_EQ(js.size(), 2U);
  EXPECT_TRUE(js[0].complete && js[1].complete);
  EXPECT_EQ(js[0].orientation, js[1].orientation);
  EXPECT_EQ(predict_geometric_integer(*large_, p), 2);
}

TEST_F(RegionsTest, PresetPredictionsMatchTheirIntegers) {
  EXPECT_EQ(predict_geometric_integer(*large_, preset("bulk_pizza_n0", *large_)), 0);
  EXPECT_EQ(predict_geometric_integer(*large_, preset("edge_pizza_n2", *large_)), 2);
  EXPECT_EQ(predict_geometric_integer(*large_, preset("edge_pizza_alt", *large_)), 0);
  EXPECT_EQ(predict_geometric_integer(*pflux_, preset("edge_pizza_n3", *pflux_)), 3);
  EXPECT_EQ(predict_geometric_integer(*pflux_, preset("edge_pizza_n4", *pflux_)), 4);
}

TEST_F(RegionsTest, UnequalEdgeIntervalsStillGiveThree) {
  PresetParams p;
  p.widths = std::vector<double>{0.4, 0.9, 2 * kPi / 3 - 1.3};
  EXPECT_EQ(predict_geometric_integer(*pflux_, preset("edge_pizza_n3", *pflux_, p)), 3);
}

TEST_F(RegionsTest, PredictionIsRotationAndScaleInvariant) {
  for (double theta0 : {0.2, 1.0, 2.5}) {
    PresetParams p;
    p.theta0 = theta0;
    EXPECT_EQ(predict_geometric_integer(*large_, preset("bulk_pizza_n2", *large_, p)), 2) << theta0;
    EXPECT_EQ(predict_geometric_integer(*large_, preset("tripartite_disk", *large_, p)), 1) << theta0;
  }
  for (double r : {12.0, 14.0, 17.0}) {
    PresetParams p;
    p.r = r;
    EXPECT_EQ(predict_geometric_integer(*large_, preset("bulk_pizza_n2", *large_, p)), 2) << r;
  }
}

TEST_F(RegionsTest, IncompleteDiskJunctionIsRefused) {
  const Partition p = preset("incomplete_disk", *model_, small());
  const auto js = find_trijunctions(*model_, p);
  bool incomplete = false;
  for (const auto& j : js) incomplete = incomplete || !j.complete;
  EXPECT_TRUE(incomplete);
  EXPECT_THROW(predict_geometric_integer(*model_, p), PredictionRefused);
}

}  // namespace
}  // namespace modcomm
