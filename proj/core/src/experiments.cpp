#include "modcomm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "modcomm/errors.hpp"

namespace modcomm {

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Partition make_partition(const ExperimentConfig& cfg, const LatticeModel& model, const PresetParams& params) {
  if (cfg.custom_partition) {
    Partition p = cfg.custom_partition(model, params);
    if (p.name.empty()) p.name = cfg.custom_name;
    validate_partition(model, p);
    return p;
  }
  return preset(cfg.preset, model, params);
}

ExperimentRecord base_record(const ExperimentConfig& cfg, const LatticeModel& model, const Partition& part) {
  ExperimentRecord rec;
  rec.operation = cfg.operation;
  rec.model = model.params();
  rec.partition = part.name;
  rec.kind = to_string(part.kind);
  rec.partition_params = part.parameters;
  rec.seed = cfg.model.seed;
  rec.code_version = version();
  return rec;
}

void add_prediction(ExperimentRecord& rec, const LatticeModel& model, const Partition& part) {
  try {
    rec.prediction = predict_geometric_integer(model, part);
  } catch (const PredictionRefused&) {
    rec.prediction.reset();
  }
}

ExperimentRecord evaluate_commutator(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeModel model = build_model(cfg.model);
  const Partition part = make_partition(cfg, model, cfg.preset_params);
  ExperimentRecord rec = base_record(cfg, model, part);
  const CorrelationMatrix c = ground_state_correlations(model, cfg.gaussian, &rec.gap);
  const auto res = modular_commutator(c, part.u(), part.v(), part.w(), cfg.gaussian);
  rec.J = res.value;
  rec.n = geometric_integer(res.value, part.kind);
  rec.imag_residue = res.imag_residue;
  add_prediction(rec, model, part);
  if (cfg.region_entropies)
    for (const auto& r : part.regions)
      rec.extras.emplace_back("S_" + r.label(), entanglement_entropy(c, r, cfg.gaussian.entropy_eps));
  rec.runtime_s = seconds_since(t0);
  return rec;
}

ExperimentRecord evaluate_incomplete(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeModel model = build_model(cfg.model);
  const Partition part = make_partition(cfg, model, cfg.preset_params);
  if (part.regions.size() < 4)
    throw InvalidArgument("experiments", "incomplete_disk_sum needs a partition with regions A, B, C, D");
  ExperimentRecord rec = base_record(cfg, model, part);
  const CorrelationMatrix c = ground_state_correlations(model, cfg.gaussian, &rec.gap);
  const auto& r = part.regions;
  const auto abc = modular_commutator(c, r[0], r[1], r[2], cfg.gaussian);
  const auto bcd = modular_commutator(c, r[1], r[2], r[3], cfg.gaussian);
  rec.J = abc.value + bcd.value;
  rec.n = geometric_integer(rec.J, part.kind);
  rec.imag_residue = std::max(abc.imag_residue, bcd.imag_residue);
  rec.extras = {{"J_ABC", abc.value},
                {"J_BCD", bcd.value},
                {"n_ABC", geometric_integer(abc.value, part.kind)},
                {"n_BCD", geometric_integer(bcd.value, part.kind)},
                {"reference", kPi / 3.0},
                {"cmi_ABC", cond_mutual_info(c, r[0], r[1], r[2], cfg.gaussian.entropy_eps)}};
  rec.runtime_s = seconds_since(t0);
  return rec;
}

// Two decoupled chains; A and C sit in different blocks, B is everything else.
double product_sanity_cmi(double eps) {
  CMatrix h = CMatrix::Zero(12, 12);
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < 5; ++i) h(6 * block + i, 6 * block + i + 1) = h(6 * block + i + 1, 6 * block + i) = -1.0;
  const LatticeModel m = build_custom(h, "two_chains");
  const CorrelationMatrix c = ground_state_correlations(m);
  const Region a = Region::from_sites(m, {0, 1, 2}, "A");
  const Region b = Region::from_sites(m, {3, 4, 5, 9, 10, 11}, "B");
  const Region cr = Region::from_sites(m, {6, 7, 8}, "C");
  return cond_mutual_info(c, a, b, cr, eps);
}

ExperimentRecord evaluate_axioms(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeModel model = build_model(cfg.model);
  const auto& g = cfg.axioms;
  if (!(0.0 < g.inner_radius && g.inner_radius < g.outer_radius))
    throw InvalidArgument("experiments", "axiom geometry needs 0 < inner_radius < outer_radius");
  const Vec2 o = model.center();
  const Region cdisk = disk(model, o, g.inner_radius, "C");
  const Region ring = region_subtract(disk(model, o, g.outer_radius), cdisk).relabeled("B");
  if (ring.empty() || cdisk.empty()) throw InvalidArgument("experiments", "axiom regions are empty");
  const double s = g.split_angle;
  const Region bh = region_intersect(ring, sector(model, o, s, s + kPi)).relabeled("B");
  const Region dh = region_intersect(ring, sector(model, o, s + kPi, s + 2 * kPi)).relabeled("D");
  Region b2 = Region::empty_of(model, "B");
  Region d2 = Region::empty_of(model, "D");
  for (int q = 0; q < 4; ++q) {
    const Region arc = region_intersect(ring, sector(model, o, s + q * kPi / 2, s + (q + 1) * kPi / 2));
    if (q % 2 == 0)
      b2 = region_union(b2, arc);
    else
      d2 = region_union(d2, arc);
  }
  const Partition inc = preset("incomplete_disk", model, cfg.preset_params);

  ExperimentRecord rec = base_record(cfg, model, inc);
  rec.partition = "axioms";
  rec.partition_params.emplace_back("inner_radius", g.inner_radius);
  rec.partition_params.emplace_back("outer_radius", g.outer_radius);
  const double eps = cfg.gaussian.entropy_eps;
  const CorrelationMatrix c = ground_state_correlations(model, cfg.gaussian, &rec.gap);
  const auto j = modular_commutator(c, inc.regions[0], inc.regions[1], inc.regions[2], cfg.gaussian);
  rec.J = j.value;
  rec.n = geometric_integer(j.value, PartitionKind::bulk);
  rec.imag_residue = j.imag_residue;
  rec.extras = {{"delta_two", delta_two(c, ring, cdisk, eps)},
                {"delta_three", delta_three(c, bh, cdisk, dh, eps)},
                {"delta_two_hole", delta_three(c, b2, cdisk, d2, eps)},
                {"cmi_incomplete", cond_mutual_info(c, inc.regions[0], inc.regions[1], inc.regions[2], eps)},
                {"cmi_product", product_sanity_cmi(eps)}};
  rec.runtime_s = seconds_since(t0);
  return rec;
}

std::function<ExperimentRecord(const ExperimentConfig&)> evaluator_for(const std::string& op) {
  if (op == "incomplete_disk_sum") return evaluate_incomplete;
  if (op == "axiom_report") return evaluate_axioms;
  if (op == "compute" || op == "sweep_haldane_pizza" || op == "sweep_piflux_edge" || op == "current_map")
    return evaluate_commutator;
  throw InvalidArgument("experiments", "unknown operation '" + op + "'");
}

void require_model(const ExperimentConfig& cfg, const char* name, const char* op) {
  if (cfg.model.name != name)
    throw InvalidArgument("experiments", fmt::format("{} needs model '{}', got '{}'", op, name, cfg.model.name));
}

}  // namespace

std::optional<double> ExperimentRecord::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return std::nullopt;
}

std::optional<double> ExperimentRecord::partition_param(const std::string& key) const {
  for (const auto& [k, v] : partition_params)
    if (k == key) return v;
  return std::nullopt;
}

LatticeModel build_model(const ModelSpec& spec) {
  LatticeModel model = [&] {
    if (spec.name == "haldane") return build_haldane(spec.L, spec.mu_tilde, spec.t1, spec.t2, spec.phi);
    if (spec.name == "pi_flux") return build_pi_flux(spec.Lx, spec.Ly, spec.t1, spec.tau);
    throw InvalidArgument("experiments", "unknown model '" + spec.name + "' (expected haldane or pi_flux)");
  }();
  double w = spec.disorder_w;
  if (spec.disorder_gap_fraction) {
    if (w != 0.0) throw InvalidArgument("experiments", "give either disorder W or gap_fraction, not both");
    w = *spec.disorder_gap_fraction * bulk_gap(model.params());
  }
  if (w != 0.0 || spec.disorder_gap_fraction) return add_disorder(model, w, spec.seed);
  return model;
}

SweepGrid SweepGrid::linspace(std::string variable, double lo, double hi, int points) {
  if (points < 0) throw InvalidArgument("experiments", "grid point count must be non-negative");
  SweepGrid g{std::move(variable), {}};
  for (int i = 0; i < points; ++i)
    g.values.push_back(points == 1 ? lo : lo + (hi - lo) * double(i) / double(points - 1));
  return g;
}

const std::vector<std::string>& sweep_variables() {
  static const std::vector<std::string> v{"mu_tilde", "tau", "phi", "t1", "t2", "W", "gap_fraction",
                                          "seed",     "L",   "Lx",  "Ly", "r",  "w", "theta0"};
  return v;
}

void apply_sweep_value(ModelSpec& m, PresetParams& p, const std::string& var, double value) {
  auto as_int = [&](const char* what) {
    if (value != std::floor(value)) throw InvalidArgument("experiments", fmt::format("{} must be an integer", what));
    return static_cast<int>(value);
  };
  if (var == "mu_tilde") m.mu_tilde = value;
  else if (var == "tau") m.tau = value;
  else if (var == "phi") m.phi = value;
  else if (var == "t1") m.t1 = value;
  else if (var == "t2") m.t2 = value;
  else if (var == "W") m.disorder_w = value;
  else if (var == "gap_fraction") m.disorder_gap_fraction = value;
  else if (var == "seed") {
    if (value < 0 || value != std::floor(value)) throw InvalidArgument("experiments", "seed must be a non-negative integer");
    m.seed = static_cast<std::uint64_t>(value);
  } else if (var == "L") m.L = as_int("L");
  else if (var == "Lx") m.Lx = as_int("Lx");
  else if (var == "Ly") m.Ly = as_int("Ly");
  else if (var == "r") p.r = value;
  else if (var == "w") p.w = value;
  else if (var == "theta0") p.theta0 = value;
  else throw InvalidArgument("experiments", "unknown sweep variable '" + var + "'");
}

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> ops{"compute",           "sweep_haldane_pizza", "sweep_piflux_edge",
                                            "incomplete_disk_sum", "axiom_report",       "current_map"};
  return ops;
}

ExperimentConfig default_config(const std::string& op) {
  ExperimentConfig cfg;
  cfg.operation = op;
  if (op == "compute" || op == "current_map") {
    cfg.preset = op == "compute" ? "tripartite_disk" : "bulk_pizza_n2";
  } else if (op == "sweep_haldane_pizza") {
    cfg.preset = "bulk_pizza_n2";
    cfg.grid = SweepGrid::linspace("mu_tilde", -2.0, 2.0, 41);
  } else if (op == "sweep_piflux_edge") {
    cfg.model.name = "pi_flux";
    cfg.preset = "edge_pizza_n3";
    cfg.grid = SweepGrid::linspace("tau", 1.0, 1.5, 6);
  } else if (op == "incomplete_disk_sum") {
    cfg.model.L = 22;
    cfg.preset = "incomplete_disk";
    cfg.grid = SweepGrid::linspace("mu_tilde", 0.5, 1.25, 16);
  } else if (op == "axiom_report") {
    cfg.preset = "incomplete_disk";
    cfg.grid = SweepGrid::linspace("mu_tilde", -2.0, 2.0, 9);
  } else {
    throw InvalidArgument("experiments", "unknown operation '" + op + "'");
  }
  return cfg;
}

ExperimentRecord compute_point(const ExperimentConfig& cfg) { return evaluator_for(cfg.operation)(cfg); }

std::vector<ExperimentRecord> run_ordered(std::size_t n, int threads,
                                          const std::function<ExperimentRecord(std::size_t)>& fn,
                                          const ProgressFn& progress) {
  std::vector<ExperimentRecord> out(n);
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(n, threads > 0 ? std::size_t(threads) : hw);
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      out[i] = fn(i);
      if (progress) {
        std::lock_guard<std::mutex> lock(mu);
        progress(++done, n, out[i]);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& previous,
                                        const ProgressFn& progress) {
  if (cfg.grid.values.empty()) throw InvalidArgument("experiments", "sweep grid is empty");
  const auto eval = evaluator_for(cfg.operation);
  {
    ExperimentConfig probe = cfg;
    apply_sweep_value(probe.model, probe.preset_params, cfg.grid.variable, cfg.grid.values.front());
  }
  return run_ordered(cfg.grid.values.size(), cfg.threads, [&](std::size_t i) {
    const double value = cfg.grid.values[i];
    for (const auto& p : previous)
      if (p.ok() && p.sweep_var == cfg.grid.variable && p.value == value && p.operation == cfg.operation) return p;
    ExperimentConfig point = cfg;
    ExperimentRecord rec;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      apply_sweep_value(point.model, point.preset_params, cfg.grid.variable, value);
      rec = eval(point);
    } catch (const std::exception& e) {
      rec = ExperimentRecord{};
      rec.operation = cfg.operation;
      rec.partition = cfg.custom_partition ? cfg.custom_name : cfg.preset;
      rec.model.name = point.model.name;
      rec.model.L = point.model.name == "haldane" ? point.model.L : 0;
      rec.model.Lx = point.model.name == "pi_flux" ? point.model.Lx : 0;
      rec.model.Ly = point.model.name == "pi_flux" ? point.model.Ly : 0;
      rec.seed = point.model.seed;
      rec.code_version = version();
      rec.error = e.what();
      rec.runtime_s = seconds_since(t0);
    }
    rec.sweep_var = cfg.grid.variable;
    rec.value = value;
    return rec;
  }, progress);
}

std::vector<ExperimentRecord> sweep_haldane_pizza(const ExperimentConfig& cfg, const ProgressFn& progress,
                                                  const std::vector<ExperimentRecord>& previous) {
  require_model(cfg, "haldane", "sweep_haldane_pizza");
  static const std::vector<std::string> allowed{"bulk_pizza_n2", "bulk_pizza_n0", "edge_pizza_n2", "edge_pizza_alt",
                                                "tripartite_disk"};
  if (!cfg.custom_partition && std::find(allowed.begin(), allowed.end(), cfg.preset) == allowed.end())
    throw InvalidArgument("experiments", "sweep_haldane_pizza does not support preset '" + cfg.preset + "'");
  ExperimentConfig c = cfg;
  c.operation = "sweep_haldane_pizza";
  return run_sweep(c, previous, progress);
}

std::vector<ExperimentRecord> sweep_piflux_edge(const ExperimentConfig& cfg, const ProgressFn& progress,
                                                const std::vector<ExperimentRecord>& previous) {
  require_model(cfg, "pi_flux", "sweep_piflux_edge");
  ExperimentConfig c = cfg;
  c.operation = "sweep_piflux_edge";
  return run_sweep(c, previous, progress);
}

std::vector<ExperimentRecord> incomplete_disk_sum(const ExperimentConfig& cfg, const ProgressFn& progress,
                                                  const std::vector<ExperimentRecord>& previous) {
  ExperimentConfig c = cfg;
  c.operation = "incomplete_disk_sum";
  return run_sweep(c, previous, progress);
}

std::vector<ExperimentRecord> axiom_report(const ExperimentConfig& cfg, const ProgressFn& progress,
                                           const std::vector<ExperimentRecord>& previous) {
  ExperimentConfig c = cfg;
  c.operation = "axiom_report";
  return run_sweep(c, previous, progress);
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& previous,
                                             const ProgressFn& progress) {
  if (cfg.operation == "sweep_haldane_pizza") return sweep_haldane_pizza(cfg, progress, previous);
  if (cfg.operation == "sweep_piflux_edge") return sweep_piflux_edge(cfg, progress, previous);
  if (cfg.operation == "incomplete_disk_sum") return incomplete_disk_sum(cfg, progress, previous);
  if (cfg.operation == "axiom_report") return axiom_report(cfg, progress, previous);
  throw InvalidArgument("experiments", "operation '" + cfg.operation + "' is not a sweep");
}

CurrentMap current_map(const ExperimentConfig& cfg, CurrentSlicing slicing) {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeModel model = build_model(cfg.model);
  const Partition part = make_partition(cfg, model, cfg.preset_params);
  CurrentMap map;
  map.record = base_record(cfg, model, part);
  map.record.operation = "current_map";
  const CorrelationMatrix c = ground_state_correlations(model, cfg.gaussian, &map.record.gap);
  const ModularCurrent cur = modular_current(c, part.u(), part.v(), part.w(), cfg.gaussian, slicing);
  map.J = cur.J;
  map.resummed = cur.resummed;
  for (const auto& [site, flow] : cur.net_outflow()) {
    SiteCurrent s;
    s.site = site;
    s.position = model.position(site);
    for (const auto& r : part.regions)
      if (r.contains(site)) s.region = r.label();
    s.outflow = flow;
    map.max_abs_outflow = std::max(map.max_abs_outflow, std::abs(flow));
    map.sites.push_back(std::move(s));
  }
  map.record.J = cur.J;
  map.record.n = geometric_integer(cur.J, part.kind);
  map.record.imag_residue = cur.imag_residue;
  map.record.extras = {{"resummed", cur.resummed},
                       {"current_max_imag", cur.max_imag},
                       {"resummation_error", std::abs(cur.resummed - cur.J)},
                       {"max_abs_outflow", map.max_abs_outflow}};
  map.record.runtime_s = seconds_since(t0);
  return map;
}

}  // namespace modcomm
