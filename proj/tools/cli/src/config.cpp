#include "modcomm_cli/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "modcomm_cli/region_expr.hpp"

namespace modcomm::cli {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

// Object view that records which keys were read and rejects the rest.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    used_.insert(key);
    return j_.at(key);
  }

  Block child(const char* key) { return Block(raw(key), at(key)); }

  template <class T>
  std::optional<T> get(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError(at(key) + " must be a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ConfigError(at(key) + " must be an integer");
        if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned())
          throw ConfigError(at(key) + " must be non-negative");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(at(key) + " must be true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(at(key) + " must be a string");
      }
      return v.get<T>();
    } catch (const json::exception&) {
      throw ConfigError(at(key) + " has the wrong type");
    }
  }

  std::optional<std::vector<double>> numbers(const char* key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key) + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(at(key) + " must be a list of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError("unknown key '" + at(it.key()) + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class T>
void assign(std::optional<T> v, T& dst) {
  if (v) dst = *v;
}

void parse_model(Block b, ModelSpec& m) {
  assign(b.get<std::string>("name"), m.name);
  if (m.name != "haldane" && m.name != "pi_flux")
    throw ConfigError("model.name must be 'haldane' or 'pi_flux', got '" + m.name + "'");
  assign(b.get<int>("L"), m.L);
  assign(b.get<int>("Lx"), m.Lx);
  assign(b.get<int>("Ly"), m.Ly);
  assign(b.get<double>("mu_tilde"), m.mu_tilde);
  assign(b.get<double>("t1"), m.t1);
  assign(b.get<double>("t2"), m.t2);
  assign(b.get<double>("phi"), m.phi);
  assign(b.get<double>("tau"), m.tau);
  if (b.has("disorder")) {
    Block d = b.child("disorder");
    assign(d.get<double>("W"), m.disorder_w);
    if (auto f = d.get<double>("gap_fraction")) m.disorder_gap_fraction = *f;
    if (d.has("W") && d.has("gap_fraction")) throw ConfigError("model.disorder: give either W or gap_fraction");
    d.finish();
  }
  b.finish();
}

JunctionBall parse_ball(const json& j, const std::string& where) {
  Block b(j, where);
  const json& c = b.raw("center");
  if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
    throw ConfigError(where + ".center must be an [x, y] pair");
  const auto rb = b.get<double>("r_b");
  const auto rd1 = b.get<double>("r_d1");
  const auto rd2 = b.get<double>("r_d2");
  if (!rb || !rd1 || !rd2) throw ConfigError(where + " needs r_b, r_d1 and r_d2");
  b.finish();
  return JunctionBall(Vec2(c[0].get<double>(), c[1].get<double>()), *rb, *rd1, *rd2);
}

std::vector<double> degrees(std::vector<double> v) {
  for (auto& x : v) x *= kDeg;
  return v;
}

void parse_preset_params(Block& b, PresetParams& p) {
  if (auto v = b.get<double>("r")) p.r = *v;
  if (auto v = b.get<double>("w")) p.w = *v;
  if (auto v = b.get<double>("theta0_deg")) p.theta0 = *v * kDeg;
  if (auto v = b.numbers("widths_deg")) p.widths = degrees(*v);
  if (auto v = b.get<int>("lx")) p.lx = *v;
  if (auto v = b.get<int>("ly")) p.ly = *v;
  if (auto v = b.numbers("rays_deg")) p.rays = degrees(*v);
  assign(b.get<bool>("symmetric"), p.symmetric);
  if (b.has("balls")) {
    const json& arr = b.raw("balls");
    if (!arr.is_array()) throw ConfigError(b.at("balls") + " must be a list");
    std::vector<JunctionBall> balls;
    for (std::size_t i = 0; i < arr.size(); ++i)
      balls.push_back(parse_ball(arr[i], b.at("balls") + "[" + std::to_string(i) + "]"));
    p.balls = balls;
  }
}

struct CustomRegion {
  std::string label;
  json expr;
};

void parse_custom_partition(Block& b, ExperimentConfig& cfg) {
  std::string name = b.get<std::string>("name").value_or("custom");
  const std::string kind_s = b.get<std::string>("kind").value_or("bulk");
  if (kind_s != "bulk" && kind_s != "edge") throw ConfigError("partition.kind must be 'bulk' or 'edge'");
  const PartitionKind kind = kind_s == "bulk" ? PartitionKind::bulk : PartitionKind::edge;

  const json& arr = b.raw("regions");
  if (!arr.is_array() || arr.size() < 3) throw ConfigError("partition.regions must list at least three regions");
  std::vector<CustomRegion> regions;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "partition.regions[" + std::to_string(i) + "]";
    Block rb(arr[i], where);
    CustomRegion cr;
    cr.label = rb.get<std::string>("label").value_or(std::string(1, char('A' + i)));
    if (!rb.has("expr")) throw ConfigError(where + " needs an expr");
    cr.expr = rb.raw("expr");
    check_region(cr.expr, where + ".expr");
    rb.finish();
    if (!index.emplace(cr.label, int(i)).second) throw ConfigError("duplicate region label '" + cr.label + "'");
    regions.push_back(std::move(cr));
  }

  auto roles_from = [&](const char* key, const std::map<std::string, int>& idx) {
    Roles r;
    if (!b.has(key)) return r;
    const json& v = b.raw(key);
    if (!v.is_array() || v.size() != 3) throw ConfigError(b.at(key) + " must list three labels");
    int out[3];
    for (int k = 0; k < 3; ++k) {
      if (!v[std::size_t(k)].is_string()) throw ConfigError(b.at(key) + " must list three labels");
      auto it = idx.find(v[std::size_t(k)].get<std::string>());
      if (it == idx.end()) throw ConfigError(b.at(key) + ": unknown label '" + v[std::size_t(k)].get<std::string>() + "'");
      out[k] = it->second;
    }
    if (out[0] == out[1] || out[1] == out[2] || out[0] == out[2])
      throw ConfigError(b.at(key) + " must name three distinct regions");
    return Roles{out[0], out[1], out[2]};
  };

  const Roles roles = roles_from("roles", index);
  std::optional<std::string> complement_label = b.get<std::string>("complement_label");
  std::map<std::string, int> jindex = index;
  if (complement_label) {
    if (index.count(*complement_label)) throw ConfigError("partition.complement_label clashes with a region label");
    jindex.emplace(*complement_label, int(regions.size()));
  }
  const Roles jroles = b.has("junction_roles") ? roles_from("junction_roles", jindex) : roles;
  std::optional<json> band;
  if (b.has("band")) {
    band = b.raw("band");
    check_region(*band, "partition.band");
  }
  std::optional<int> expected = b.get<int>("expected_n");

  cfg.custom_name = name;
  cfg.custom_partition = [=](const LatticeModel& model, const PresetParams&) {
    Partition p;
    p.name = name;
    p.kind = kind;
    p.center = model.center();
    for (const auto& r : regions) p.regions.push_back(eval_region(r.expr, model, r.label));
    p.roles = roles;
    p.junction_roles = jroles;
    if (complement_label) p.complement_region = complement(model, region_union(p.regions), *complement_label);
    if (band) p.band = eval_region(*band, model, "band");
    p.expected_n = expected;
    return p;
  };
}

void parse_partition(Block b, ExperimentConfig& cfg) {
  if (b.has("regions")) {
    if (b.has("preset")) throw ConfigError("partition: give either a preset or regions, not both");
    parse_custom_partition(b, cfg);
  } else {
    assign(b.get<std::string>("preset"), cfg.preset);
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), cfg.preset) == names.end())
      throw ConfigError("partition.preset: unknown preset '" + cfg.preset + "'");
    parse_preset_params(b, cfg.preset_params);
  }
  b.finish();
}

void parse_grid(Block b, SweepGrid& grid) {
  const auto var = b.get<std::string>("variable");
  if (var) grid.variable = *var;
  const auto& vars = sweep_variables();
  if (std::find(vars.begin(), vars.end(), grid.variable) == vars.end())
    throw ConfigError("experiment.grid.variable: unknown sweep variable '" + grid.variable + "'");
  if (b.has("values")) {
    if (b.has("start") || b.has("stop") || b.has("points"))
      throw ConfigError("experiment.grid: give either values or start/stop/points");
    grid.values = *b.numbers("values");
  } else {
    const auto start = b.get<double>("start");
    const auto stop = b.get<double>("stop");
    const auto points = b.get<int>("points");
    if (!start || !stop || !points) throw ConfigError("experiment.grid needs values or start, stop and points");
    if (*points < 0) throw ConfigError("experiment.grid.points must be non-negative");
    grid = SweepGrid::linspace(grid.variable, *start, *stop, *points);
  }
  b.finish();
}

void parse_experiment(Block b, RunConfig& rc) {
  ExperimentConfig& cfg = rc.experiment;
  b.get<std::string>("operation");  // read earlier
  if (b.has("grid")) {
    parse_grid(b.child("grid"), cfg.grid);
    rc.grid_given = true;
  }
  if (b.has("clip")) {
    Block c = b.child("clip");
    assign(c.get<double>("entropy_eps"), cfg.gaussian.entropy_eps);
    assign(c.get<double>("modular_eps"), cfg.gaussian.modular_eps);
    c.finish();
  }
  if (b.has("tolerances")) {
    Block t = b.child("tolerances");
    assign(t.get<double>("residue_factor"), cfg.gaussian.residue_factor);
    assign(t.get<double>("degeneracy_threshold"), cfg.gaussian.degeneracy_threshold);
    assign(t.get<bool>("enforce_residue"), cfg.gaussian.enforce_residue);
    t.finish();
  }
  assign(b.get<bool>("region_entropies"), cfg.region_entropies);
  if (b.has("axioms")) {
    Block a = b.child("axioms");
    assign(a.get<double>("inner_radius"), cfg.axioms.inner_radius);
    assign(a.get<double>("outer_radius"), cfg.axioms.outer_radius);
    if (auto s = a.get<double>("split_angle_deg")) cfg.axioms.split_angle = *s * kDeg;
    a.finish();
  }
  if (auto s = b.get<std::string>("slicing")) {
    if (*s == "symmetric") rc.slicing = CurrentSlicing::symmetric;
    else if (*s == "row") rc.slicing = CurrentSlicing::row;
    else throw ConfigError("experiment.slicing must be 'symmetric' or 'row'");
  }
  b.finish();
}

void parse_output(Block b, OutputSpec& o) {
  assign(b.get<std::string>("dir"), o.dir);
  assign(b.get<std::string>("csv"), o.csv);
  assign(b.get<std::string>("jsonl"), o.jsonl);
  assign(b.get<std::string>("result"), o.result);
  assign(b.get<std::string>("current"), o.current);
  b.finish();
}

}  // namespace

std::string OutputSpec::path(const std::string& file) const {
  const std::filesystem::path f(file);
  if (f.is_absolute()) return f.string();
  return (std::filesystem::path(dir) / f).string();
}

RunConfig parse_config(const std::string& text, const std::string& operation_hint) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Block b(root, "config");
  std::string op = operation_hint;
  if (b.has("experiment")) {
    const json& e = root.at("experiment");
    if (e.is_object() && e.contains("operation")) {
      if (!e["operation"].is_string()) throw ConfigError("config.experiment.operation must be a string");
      op = e["operation"].get<std::string>();
    }
  }
  const auto& ops = operation_names();
  if (std::find(ops.begin(), ops.end(), op) == ops.end())
    throw ConfigError("experiment.operation: unknown operation '" + op + "'");

  RunConfig rc;
  rc.experiment = default_config(op);
  if (auto s = b.get<std::uint64_t>("seed")) rc.seed = *s;
  if (auto t = b.get<int>("threads")) {
    if (*t < 0) throw ConfigError("config.threads must be non-negative");
    rc.experiment.threads = *t;
  }
  if (b.has("model")) parse_model(b.child("model"), rc.experiment.model);
  if (b.has("partition")) parse_partition(b.child("partition"), rc.experiment);
  if (b.has("experiment")) parse_experiment(b.child("experiment"), rc);
  if (b.has("output")) parse_output(b.child("output"), rc.output);
  b.finish();
  rc.experiment.model.seed = rc.seed;
  return rc;
}

RunConfig load_config(const std::string& path, const std::string& operation_hint) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), operation_hint);
}

std::optional<std::string> env_output_dir() {
  const char* v = std::getenv("MODCOMM_OUT_DIR");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

}  // namespace modcomm::cli
