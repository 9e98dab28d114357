#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modcomm/gaussian.hpp"
#include "modcomm/lattice.hpp"
#include "modcomm/regions.hpp"

namespace modcomm {

// Model description before construction. Units: energies in t1, lengths in
// nearest-neighbour distances (Haldane) or unit cells (pi-flux).
struct ModelSpec {
  std::string name = "haldane";
  int L = 24;
  int Lx = 47;
  int Ly = 46;
  double mu_tilde = 0.0;
  double t1 = 1.0;
  double t2 = 1.0;
  double phi = 1.5707963267948966;
  double tau = 1.2;
  double disorder_w = 0.0;                      // absolute strength W
  std::optional<double> disorder_gap_fraction;  // W as a fraction of the bulk gap
  std::uint64_t seed = 1;
};

LatticeModel build_model(const ModelSpec& spec);

struct SweepGrid {
  std::string variable;
  std::vector<double> values;

  static SweepGrid linspace(std::string variable, double lo, double hi, int points);
};

// Recognised sweep variables: mu_tilde, tau, phi, t1, t2, W, gap_fraction,
// seed, L, Lx, Ly, r, w, theta0.
const std::vector<std::string>& sweep_variables();
void apply_sweep_value(ModelSpec& model, PresetParams& preset, const std::string& variable, double value);

struct ExperimentRecord {
  std::string operation;
  ModelParams model;
  std::string partition;
  std::string kind;
  std::vector<std::pair<std::string, double>> partition_params;
  std::string sweep_var;
  double value = 0.0;
  double J = std::numeric_limits<double>::quiet_NaN();
  double n = std::numeric_limits<double>::quiet_NaN();
  double imag_residue = std::numeric_limits<double>::quiet_NaN();
  double runtime_s = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  std::optional<int> prediction;
  std::uint64_t seed = 0;
  std::string code_version;
  std::vector<std::pair<std::string, double>> extras;
  std::string error;

  bool ok() const { return error.empty(); }
  std::optional<double> extra(const std::string& key) const;
  std::optional<double> partition_param(const std::string& key) const;
};

struct AxiomGeometry {
  double inner_radius = 4.0;  // disk C
  double outer_radius = 18.0; // annulus B u D
  double split_angle = 0.17453292519943295;
};

using PartitionBuilder = std::function<Partition(const LatticeModel&, const PresetParams&)>;
using ProgressFn = std::function<void(std::size_t done, std::size_t total, const ExperimentRecord&)>;

struct ExperimentConfig {
  std::string operation = "compute";
  ModelSpec model;
  std::string preset = "tripartite_disk";
  PresetParams preset_params;
  PartitionBuilder custom_partition;  // replaces the preset when set
  std::string custom_name = "custom";
  SweepGrid grid;
  GaussianOptions gaussian;
  AxiomGeometry axioms;
  bool region_entropies = false;
  int threads = 0;  // 0 = hardware concurrency
};

ExperimentConfig default_config(const std::string& operation);
const std::vector<std::string>& operation_names();

// One record for the current model/partition without sweeping.
ExperimentRecord compute_point(const ExperimentConfig& cfg);

// Runs fn(i) for i in [0, n) on a pool; results are returned in index order.
std::vector<ExperimentRecord> run_ordered(std::size_t n, int threads,
                                          const std::function<ExperimentRecord(std::size_t)>& fn,
                                          const ProgressFn& progress = {});

// Evaluates cfg.grid, reusing finished records (matched by value) from `previous`.
std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& previous = {},
                                        const ProgressFn& progress = {});

std::vector<ExperimentRecord> sweep_haldane_pizza(const ExperimentConfig& cfg, const ProgressFn& progress = {},
                                                  const std::vector<ExperimentRecord>& previous = {});
std::vector<ExperimentRecord> sweep_piflux_edge(const ExperimentConfig& cfg, const ProgressFn& progress = {},
                                                const std::vector<ExperimentRecord>& previous = {});
std::vector<ExperimentRecord> incomplete_disk_sum(const ExperimentConfig& cfg, const ProgressFn& progress = {},
                                                  const std::vector<ExperimentRecord>& previous = {});
std::vector<ExperimentRecord> axiom_report(const ExperimentConfig& cfg, const ProgressFn& progress = {},
                                           const std::vector<ExperimentRecord>& previous = {});

// Dispatches on cfg.operation to one of the four sweep operations above.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg,
                                             const std::vector<ExperimentRecord>& previous = {},
                                             const ProgressFn& progress = {});

struct SiteCurrent {
  int site = 0;
  Vec2 position = Vec2::Zero();
  std::string region;
  double outflow = 0.0;
};

struct CurrentMap {
  ExperimentRecord record;
  std::vector<SiteCurrent> sites;
  double J = 0.0;
  double resummed = 0.0;
  double max_abs_outflow = 0.0;
};

CurrentMap current_map(const ExperimentConfig& cfg, CurrentSlicing slicing = CurrentSlicing::symmetric);

// Output formats
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_jsonl(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::string record_to_json(const ExperimentRecord& record);
ExperimentRecord record_from_json(const std::string& line);
std::vector<ExperimentRecord> read_jsonl(std::istream& in);
void write_current_csv(std::ostream& out, const CurrentMap& map);

}  // namespace modcomm
