#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "modcomm/errors.hpp"
#include "modcomm/experiments.hpp"

namespace modcomm {
namespace {

// Small Haldane patch.
ExperimentConfig small_config(const std::string& op) {
  ExperimentConfig cfg = default_config(op);
  cfg.model.L = 12;
  cfg.preset_params.r = 10.0;
  cfg.preset_params.w = 5.0;
  cfg.axioms.inner_radius = 3.0;
  cfg.axioms.outer_radius = 9.0;
  cfg.threads = 2;
  return cfg;
}

// Drops the runtime_s column (index 11) from every CSV line.
std::string without_runtime(const std::string& csv) {
  std::stringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (i != 11) out += cols[i] + ",";
    out += "\n";
  }
  return out;
}

std::string csv_of(const std::vector<ExperimentRecord>& recs) {
  std::stringstream ss;
  write_csv(ss, recs);
  return ss.str();
}

TEST(Grid, Linspace) {
  const SweepGrid g = SweepGrid::linspace("mu_tilde", -2.0, 2.0, 41);
  ASSERT_EQ(g.values.size(), 41U);
  EXPECT_EQ(g.values.front(), -2.0);
  EXPECT_EQ(g.values.back(), 2.0);
  EXPECT_NEAR(g.values[20], 0.0, 1e-15);
  EXPECT_EQ(SweepGrid::linspace("tau", 1.2, 9.0, 1).values, std::vector<double>{1.2});
  EXPECT_TRUE(SweepGrid::linspace("tau", 0, 1, 0).values.empty());
  EXPECT_THROW(SweepGrid::linspace("tau", 0, 1, -1), InvalidArgument);
}

TEST(Grid, SweepValuesLandInTheRightField) {
  ModelSpec m;
  PresetParams p;
  apply_sweep_value(m, p, "mu_tilde", 0.25);
  apply_sweep_value(m, p, "tau", 1.4);
  apply_sweep_value(m, p, "L", 10);
  apply_sweep_value(m, p, "r", 7.5);
  apply_sweep_value(m, p, "gap_fraction", 0.1);
  apply_sweep_value(m, p, "seed", 5);
  EXPECT_EQ(m.mu_tilde, 0.25);
  EXPECT_EQ(m.tau, 1.4);
  EXPECT_EQ(m.L, 10);
  EXPECT_EQ(*p.r, 7.5);
  EXPECT_EQ(*m.disorder_gap_fraction, 0.1);
  EXPECT_EQ(m.seed, 5U);
  EXPECT_THROW(apply_sweep_value(m, p, "L", 10.5), InvalidArgument);
  EXPECT_THROW(apply_sweep_value(m, p, "seed", -1), InvalidArgument);
  EXPECT_THROW(apply_sweep_value(m, p, "nonsense", 1), InvalidArgument);
}

TEST(Defaults, DefaultGridsPerOperation) {
  EXPECT_EQ(default_config("sweep_haldane_pizza").grid.values.size(), 41U);
  EXPECT_EQ(default_config("sweep_haldane_pizza").model.L, 24);
  const ExperimentConfig pf = default_config("sweep_piflux_edge");
  EXPECT_EQ(pf.model.name, "pi_flux");
  EXPECT_EQ(pf.model.Lx, 47);
  EXPECT_EQ(pf.model.Ly, 46);
  EXPECT_EQ(pf.grid.values.front(), 1.0);
  EXPECT_EQ(pf.grid.values.back(), 1.5);
  EXPECT_THROW(default_config("unknown"), InvalidArgument);
}

TEST(Models, DisorderAsGapFraction) {
  ModelSpec s;
  s.L = 6;
  s.disorder_gap_fraction = 0.1;
  s.seed = 9;
  const LatticeModel m = build_model(s);
  EXPECT_NEAR(m.params().disorder_w, 0.1 * haldane_bulk_gap(0.0), 1e-12);
  EXPECT_EQ(m.params().disorder_seed, std::optional<std::uint64_t>(9));
  s.disorder_w = 0.3;
  EXPECT_THROW(build_model(s), InvalidArgument);
  ModelSpec bad;
  bad.name = "kagome";
  EXPECT_THROW(build_model(bad), InvalidArgument);
}

TEST(Pool, ResultsComeBackInIndexOrder) {
  for (int threads : {1, 3, 8}) {
    const auto recs = run_ordered(17, threads, [](std::size_t i) {
      ExperimentRecord r;
      r.value = double(i);
      return r;
    });
    ASSERT_EQ(recs.size(), 17U);
    for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(recs[i].value, double(i));
  }
}

TEST(Compute, RecordCarriesMetadata) {
  const ExperimentRecord r = compute_point(small_config("compute"));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.partition, "tripartite_disk");
  EXPECT_EQ(r.kind, "bulk");
  EXPECT_EQ(r.seed, 1U);
  EXPECT_FALSE(r.code_version.empty());
  EXPECT_NEAR(r.n, 3.0 / std::numbers::pi * r.J, 1e-12);
  EXPECT_EQ(r.prediction, std::optional<int>(1));
  EXPECT_NEAR(r.n, 1.0, 0.15);
  EXPECT_EQ(*r.partition_param("r"), 10.0);
}

TEST(Sweep, HaldanePizzaPlateaus) {
  ExperimentConfig cfg = small_config("sweep_haldane_pizza");
  cfg.grid = SweepGrid{"mu_tilde", {0.0, 2.0}};
  const auto recs = sweep_haldane_pizza(cfg);
  ASSERT_EQ(recs.size(), 2U);
  EXPECT_NEAR(recs[0].n, 2.0, 0.5);
  EXPECT_NEAR(recs[1].n, 0.0, 0.05);
  EXPECT_EQ(recs[0].sweep_var, "mu_tilde");
}

TEST(Sweep, EdgeSignConvention) {
  ExperimentConfig cfg = small_config("sweep_haldane_pizza");
  cfg.preset = "edge_pizza_n2";
  cfg.grid = SweepGrid{"mu_tilde", {0.0}};
  const auto recs = sweep_haldane_pizza(cfg);
  EXPECT_LT(recs[0].J, 0.0);
  EXPECT_GT(recs[0].n, 1.0);
}

TEST(Sweep, PresetAndModelChecks) {
  ExperimentConfig cfg = small_config("sweep_haldane_pizza");
  cfg.preset = "edge_pizza_n3";
  EXPECT_THROW(sweep_haldane_pizza(cfg), InvalidArgument);
  ExperimentConfig pf = small_config("sweep_piflux_edge");
  pf.model.name = "haldane";
  EXPECT_THROW(sweep_piflux_edge(pf), InvalidArgument);
  ExperimentConfig empty = small_config("sweep_haldane_pizza");
  empty.grid.values.clear();
  EXPECT_THROW(run_experiment(empty), InvalidArgument);
  ExperimentConfig notsweep = small_config("compute");
  notsweep.grid = SweepGrid{"mu_tilde", {0.0}};
  EXPECT_THROW(run_experiment(notsweep), InvalidArgument);
}

TEST(Sweep, FailedPointsBecomeNaNRecords) {
  ExperimentConfig cfg = small_config("sweep_haldane_pizza");
  cfg.grid = SweepGrid{"r", {9.0, 50.0}};
  const auto recs = sweep_haldane_pizza(cfg);
  ASSERT_EQ(recs.size(), 2U);
  EXPECT_TRUE(recs[0].ok());
  EXPECT_FALSE(recs[1].ok());
  EXPECT_TRUE(std::isnan(recs[1].J));
  EXPECT_NE(recs[1].error.find("regions"), std::string::npos);
  EXPECT_EQ(recs[1].value, 50.0);
}

TEST(Sweep, DeterministicCsvApartFromRuntime) {
  ExperimentConfig cfg = small_config("sweep_haldane_pizza");
  cfg.grid = SweepGrid{"mu_tilde", {-0.5, 0.5, 1.5}};
  cfg.model.disorder_gap_fraction = 0.1;
  cfg.model.seed = 4;
  const std::string a = csv_of(sweep_haldane_pizza(cfg));
  cfg.threads = 1;
  const std::string b = csv_of(sweep_haldane_pizza(cfg));
  EXPECT_EQ(without_runtime(a), without_runtime(b));
  EXPECT_EQ(a.substr(0, a.find('\n')),
            "sweep_var,value,partition,L-or-Lx,Ly,r,w,seed,J,n,imag_residue,runtime_s,error");
  cfg.model.seed = 5;
  EXPECT_NE(without_runtime(csv_of(sweep_haldane_pizza(cfg))), without_runtime(a));
}

TEST(Sweep, ResumeReusesFinishedRows) {
  ExperimentConfig cfg = small_config("sweep_haldane_pizza");
  cfg.grid = SweepGrid{"mu_tilde", {0.0, 2.0}};
  auto first = sweep_haldane_pizza(cfg);
  first[0].runtime_s = 1234.5;
  cfg.grid = SweepGrid{"mu_tilde", {0.0, 1.5, 2.0}};
  const auto second = run_experiment(cfg, first);
  ASSERT_EQ(second.size(), 3U);
  EXPECT_EQ(second[0].runtime_s, 1234.5);
  EXPECT_NE(second[1].runtime_s, 1234.5);
  EXPECT_EQ(second[2].J, first[1].J);
}

TEST(Sweep, IncompleteDiskRecordsBothTerms) {
  ExperimentConfig cfg = small_config("incomplete_disk_sum");
  cfg.preset_params.r = 10.0;
  cfg.grid = SweepGrid{"mu_tilde", {0.6}};
  const auto recs = incomplete_disk_sum(cfg);
  ASSERT_EQ(recs.size(), 1U);
  const auto& r = recs[0];
  EXPECT_NEAR(*r.extra("J_ABC") + *r.extra("J_BCD"), r.J, 1e-12);
  EXPECT_NEAR(*r.extra("reference"), std::numbers::pi / 3, 1e-15);
  EXPECT_GT(*r.extra("cmi_ABC"), 0.0);
  EXPECT_FALSE(r.prediction.has_value());
}

TEST(Sweep, AxiomReportExtras) {
  ExperimentConfig cfg = small_config("axiom_report");
  cfg.grid = SweepGrid{"mu_tilde", {0.0}};
  const auto r = axiom_report(cfg).at(0);
  ASSERT_TRUE(r.ok()) << r.error;
  for (const char* k : {"delta_two", "delta_three", "delta_two_hole", "cmi_incomplete", "cmi_product"})
    EXPECT_TRUE(r.extra(k).has_value()) << k;
  EXPECT_NEAR(*r.extra("cmi_product"), 0.0, 1e-8);
  EXPECT_GT(*r.extra("cmi_incomplete"), 0.0);
  EXPECT_GT(*r.extra("delta_two"), -1e-8);
  EXPECT_LT(*r.extra("delta_two"), 0.25);
}

TEST(Records, JsonRoundTrip) {
  ExperimentRecord r = compute_point(small_config("compute"));
  r.extras.emplace_back("x", 1.5);
  ExperimentRecord failed;
  failed.operation = "sweep_haldane_pizza";
  failed.error = "[gaussian] degenerate filling";
  std::stringstream ss;
  write_jsonl(ss, {r, failed});
  const auto back = read_jsonl(ss);
  ASSERT_EQ(back.size(), 2U);
  EXPECT_EQ(back[0].J, r.J);
  EXPECT_EQ(back[0].n, r.n);
  EXPECT_EQ(back[0].partition, r.partition);
  EXPECT_EQ(back[0].prediction, r.prediction);
  EXPECT_EQ(back[0].model.L, r.model.L);
  EXPECT_EQ(back[0].partition_params, r.partition_params);
  EXPECT_EQ(back[0].extras, r.extras);
  EXPECT_TRUE(std::isnan(back[1].J));
  EXPECT_EQ(back[1].error, failed.error);
  EXPECT_EQ(record_to_json(back[0]), record_to_json(r));
}

TEST(CurrentMap, ResumsAndRanksBoundaries) {
  ExperimentConfig cfg = small_config("current_map");
  cfg.preset = "tripartite_disk";
  const CurrentMap map = current_map(cfg);
  EXPECT_NEAR(map.resummed, map.J, 1e-9);
  EXPECT_GT(map.max_abs_outflow, 0.0);
  std::stringstream ss;
  write_current_csv(ss, map);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "site,x,y,region,outflow");
  ExperimentConfig trivial = cfg;
  trivial.model.mu_tilde = 2.0;
  EXPECT_LT(current_map(trivial).max_abs_outflow * 10.0, map.max_abs_outflow);
}

}  // namespace
}  // namespace modcomm
