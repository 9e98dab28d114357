#include "modcomm_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "modcomm/calibration.hpp"
#include "modcomm/errors.hpp"
#include "modcomm/experiments.hpp"
#include "modcomm_cli/config.hpp"

namespace modcomm::cli {

namespace {

bool is_sweep(const std::string& op) {
  return op == "sweep_haldane_pizza" || op == "sweep_piflux_edge" || op == "incomplete_disk_sum" ||
         op == "axiom_report";
}

RunConfig prepare(const CommonOptions& opts, const std::string& hint) {
  RunConfig rc = load_config(opts.config, hint);
  if (opts.seed) {
    rc.seed = *opts.seed;
    rc.experiment.model.seed = *opts.seed;
  }
  if (opts.threads) {
    if (*opts.threads < 0) throw ConfigError("--threads must be non-negative");
    rc.experiment.threads = *opts.threads;
  }
  if (opts.out_dir) rc.output.dir = *opts.out_dir;
  else if (auto env = env_output_dir()) rc.output.dir = *env;
  return rc;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(path, mode);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

// Maps library exceptions to exit codes.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

std::string fmt_opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

}  // namespace

int cmd_compute(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = prepare(opts, "compute");
    const ExperimentRecord rec = compute_point(rc.experiment);
    out << fmt::format("operation     {}\n", rec.operation);
    out << fmt::format("partition     {} ({})\n", rec.partition, rec.kind);
    out << fmt::format("J             {:.12f}\n", rec.J);
    out << fmt::format("n             {:.6f}\n", rec.n);
    out << fmt::format("imag_residue  {:.3e}\n", rec.imag_residue);
    out << fmt::format("prediction    {}\n", fmt_opt(rec.prediction));
    out << fmt::format("fermi_gap     {:.6f}\n", rec.gap);
    for (const auto& [k, v] : rec.extras) out << fmt::format("{:<13} {:.12g}\n", k, v);
    const std::string path = rc.output.path(rc.output.result);
    open_output(path) << record_to_json(rec) << "\n";
    out << "wrote " << path << "\n";
    return int(kOk);
  });
}

int cmd_sweep(const CommonOptions& opts, bool resume, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = prepare(opts, "sweep_haldane_pizza");
    if (!is_sweep(rc.experiment.operation))
      throw ConfigError("sweep needs a sweep operation, got '" + rc.experiment.operation + "'");
    const std::string csv_path = rc.output.path(rc.output.csv);
    const std::string jsonl_path = rc.output.path(rc.output.jsonl);

    std::vector<ExperimentRecord> previous;
    if (resume && std::filesystem::exists(jsonl_path)) {
      std::ifstream in(jsonl_path);
      previous = read_jsonl(in);
      std::size_t done = 0;
      for (const auto& r : previous) done += r.ok() ? 1 : 0;
      err << fmt::format("resuming: {} finished records in {}\n", done, jsonl_path);
    }

    // Finished records are appended as they complete so an interrupted run can resume.
    std::ofstream checkpoint = open_output(jsonl_path);
    for (const auto& r : previous)
      if (r.ok()) checkpoint << record_to_json(r) << "\n";
    checkpoint.flush();
    std::mutex mu;
    const ProgressFn progress = [&](std::size_t done, std::size_t total, const ExperimentRecord& r) {
      std::lock_guard<std::mutex> lock(mu);
      err << fmt::format("[{}/{}] {}={:.6g} J={:.6f} n={:.4f}{}\n", done, total, r.sweep_var, r.value, r.J, r.n,
                         r.ok() ? "" : " error: " + r.error);
      checkpoint << record_to_json(r) << "\n";
      checkpoint.flush();
    };
    const auto records = run_experiment(rc.experiment, previous, progress);
    checkpoint.close();

    {
      std::ofstream jsonl = open_output(jsonl_path);
      write_jsonl(jsonl, records);
      std::ofstream csv = open_output(csv_path);
      write_csv(csv, records);
    }
    std::size_t failed = 0;
    for (const auto& r : records) failed += r.ok() ? 0 : 1;
    out << fmt::format("{} points, {} failed\nwrote {}\nwrote {}\n", records.size(), failed, csv_path, jsonl_path);
    return failed == records.size() ? int(kNumericalError) : int(kOk);
  });
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    CalibrationOptions co;
    co.max_modes = opts.modes;
    co.min_modes = std::min(4, opts.modes);
    co.instances = opts.instances;
    co.seed = opts.seed;
    co.gaussian.flip_transpose = opts.flip_transpose;
    const CalibrationReport cal = run_calibration(co);
    const auto inv = run_invariant_suite(co.gaussian);

    bool ok = cal.passed();
    out << fmt::format("{:<44} {:>6} {:>11} {:>9}  {}\n", "check", "count", "max error", "tolerance", "result");
    auto row = [&](const CalibrationCheck& c) {
      out << fmt::format("{:<44} {:>6} {:>11.3e} {:>9.1e}  {}\n", c.name, c.count, c.max_error, c.tolerance,
                         c.passed() ? "PASS" : "FAIL");
    };
    out << fmt::format("oracle calibration: {} instances, {}..{} modes, seed {}\n", co.instances, co.min_modes,
                       co.max_modes, co.seed);
    for (const auto& c : cal.checks) row(c);
    out << fmt::format("{:<44} {:>6} {:>11.3e} {:>9}  {}\n", "min I(A:C|B) (SSA)", co.instances, cal.min_cmi, ">=-1e-8",
                       cal.min_cmi >= -1e-8 ? "PASS" : "FAIL");
    out << "invariant suite: Haldane L=12, mu_tilde=0\n";
    for (const auto& c : inv) {
      row(c);
      ok = ok && c.passed();
    }
    out << (ok ? "all checks passed\n" : "VALIDATION FAILED\n");
    return ok ? int(kOk) : int(kValidationFailed);
  });
}

int cmd_current(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = prepare(opts, "current_map");
    rc.experiment.operation = "current_map";
    const CurrentMap map = current_map(rc.experiment, rc.slicing);
    const double diff = std::abs(map.resummed - map.J);
    out << fmt::format("partition        {}\n", map.record.partition);
    out << fmt::format("J                {:.12f}\n", map.J);
    out << fmt::format("sum of currents  {:.12f}\n", map.resummed);
    out << fmt::format("difference       {:.3e}\n", diff);
    out << fmt::format("max |outflow|    {:.6e}\n", map.max_abs_outflow);
    const std::string path = rc.output.path(rc.output.current);
    {
      std::ofstream f = open_output(path);
      write_current_csv(f, map);
    }
    out << "wrote " << path << "\n";
    if (diff > 1e-9) {
      err << fmt::format("error: [experiments] current resummation differs from J by {:.3e}\n", diff);
      return int(kNumericalError);
    }
    return int(kOk);
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular commutators of free-fermion lattice ground states", "modcomm"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  CommonOptions common;
  bool resume = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", common.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", common.out_dir, "output directory (overrides MODCOMM_OUT_DIR and output.dir)");
    sub->add_option("--threads,-j", common.threads, "worker threads (0 = all cores)");
    sub->add_option("--seed", common.seed, "RNG seed for disorder");
  };
  CLI::App* compute = app.add_subcommand("compute", "single-point computation, writes a JSON result");
  add_common(compute);
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep, writes CSV and JSON lines");
  add_common(sweep);
  sweep->add_flag("--resume", resume, "reuse finished rows from the existing JSON lines output");
  CLI::App* current = app.add_subcommand("current", "modular current map, writes a per-site CSV");
  add_common(current);

  ValidateOptions vopts;
  CLI::App* validate = app.add_subcommand("validate", "oracle calibration and invariant suite");
  validate->add_option("--modes", vopts.modes, "largest oracle instance in modes")->check(CLI::Range(4, 14));
  validate->add_option("--instances", vopts.instances, "number of random instances")->check(CLI::PositiveNumber);
  validate->add_option("--seed", vopts.seed, "first instance seed");
  validate->add_flag("--flip-transpose", vopts.flip_transpose, "negative control: use C in place of its transpose");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int(kOk) : int(kConfigError);
  }
  if (*compute) return cmd_compute(common, out, err);
  if (*sweep) return cmd_sweep(common, resume, out, err);
  if (*current) return cmd_current(common, out, err);
  return cmd_validate(vopts, out, err);
}

}  // namespace modcomm::cli
