#include "modcomm/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modcomm/errors.hpp"
#include "modcomm/linalg.hpp"
#include "modcomm/oracle.hpp"
#include "modcomm/regions.hpp"
#include "modcomm/rng.hpp"

namespace modcomm {

namespace {

IndexList join(IndexList x, const IndexList& y) {
  x.insert(x.end(), y.begin(), y.end());
  std::sort(x.begin(), x.end());
  return x;
}

void record(CalibrationCheck& c, double err) {
  c.count += 1;
  c.max_error = std::max(c.max_error, std::isfinite(err) ? err : std::numeric_limits<double>::infinity());
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, int min_modes, int max_modes) {
  if (min_modes < 3 || max_modes < min_modes || max_modes > kMaxOracleModes)
    throw InvalidArgument("oracle", "random instances need 3 <= min_modes <= max_modes <= 14");
  SplitMix64 rng(seed);
  for (;;) {
    RandomInstance inst;
    const int n = min_modes + int(rng.next() % std::uint64_t(max_modes - min_modes + 1));
    inst.h = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      inst.h(i, i) = rng.uniform(-1.0, 1.0);
      for (int j = i + 1; j < n; ++j) {
        inst.h(i, j) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        inst.h(j, i) = std::conj(inst.h(i, j));
      }
    }
    inst.particles = 1 + int(rng.next() % std::uint64_t(n - 1));
    std::vector<int> label(static_cast<std::size_t>(n));
    for (auto& l : label) l = int(rng.next() % 4);
    for (int i = 0; i < n; ++i) {
      if (label[std::size_t(i)] == 0) inst.a.push_back(i);
      if (label[std::size_t(i)] == 1) inst.b.push_back(i);
      if (label[std::size_t(i)] == 2) inst.c.push_back(i);
    }
    if (inst.a.empty() || inst.b.empty() || inst.c.empty()) continue;
    const RVector w = hermitian_eigenvalues(inst.h);
    if (w(inst.particles) - w(inst.particles - 1) < 1e-3) continue;
    return inst;
  }
}

bool CalibrationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CalibrationCheck& c) { return c.passed(); }) &&
         min_cmi >= -1e-8;
}

CalibrationReport run_calibration(const CalibrationOptions& opts) {
  CalibrationCheck corr{"correlation matrix C vs oracle", 0, 0.0, opts.tolerance};
  CalibrationCheck ent{"entropy S vs oracle", 0, 0.0, opts.tolerance};
  CalibrationCheck cmi{"CMI I(A:C|B) vs oracle", 0, 0.0, opts.tolerance};
  CalibrationCheck jj{"modular commutator J vs oracle", 0, 0.0, opts.tolerance};
  CalibrationCheck anti{"J(A,B,C) + J(C,B,A) = 0", 0, 0.0, 0.0};
  CalibrationCheck purity{"S(X) = S(complement)", 0, 0.0, 1e-8};
  CalibrationCheck proj{"C^2 = C (pure Slater state)", 0, 0.0, 1e-9};
  CalibrationCheck energy{"oracle energy = sum of occupied levels", 0, 0.0, 1e-10};
  CalibrationCheck ksupp{"Tr(rho_X K_X) = S(rho_X)", 0, 0.0, 1e-10};
  CalibrationReport report;
  report.min_cmi = std::numeric_limits<double>::infinity();

  for (int k = 0; k < opts.instances; ++k) {
    const auto inst = random_instance(opts.seed + std::uint64_t(k), opts.min_modes, opts.max_modes);
    const LatticeModel model = build_custom(inst.h, "random");
    const CorrelationMatrix c = ground_state_correlations(inst.h, inst.particles, opts.gaussian, model.fingerprint());
    const FockState psi = exact_ground_state(inst.h, inst.particles);
    const Region a = Region::from_sites(model, inst.a, "A");
    const Region b = Region::from_sites(model, inst.b, "B");
    const Region cr = Region::from_sites(model, inst.c, "C");

    record(corr, (exact_correlations(psi) - c.matrix()).cwiseAbs().maxCoeff());
    for (const IndexList& x : {inst.a, join(inst.a, inst.b), join(join(inst.a, inst.b), inst.c)})
      record(ent, std::abs(entanglement_entropy(restrict(c, x), opts.gaussian.entropy_eps) - exact_entropy(psi, x)));
    const double g_cmi = cond_mutual_info(c, a, b, cr, opts.gaussian.entropy_eps);
    report.min_cmi = std::min(report.min_cmi, g_cmi);
    record(cmi, std::abs(g_cmi - exact_cmi(psi, inst.a, inst.b, inst.c)));
    const double j = modular_commutator(c, a, b, cr, opts.gaussian).value;
    record(jj, std::abs(j - exact_modular_commutator(psi, inst.a, inst.b, inst.c).value));
    record(anti, std::abs(j + modular_commutator(c, cr, b, a, opts.gaussian).value));

    const Region comp = complement(model, a);
    record(purity, std::abs(entanglement_entropy(c, a) - entanglement_entropy(c, comp)));
    record(proj, diagnose(c).projector_residual);
    const RVector levels = hermitian_eigenvalues(inst.h);
    record(energy, std::abs(exact_energy(psi, inst.h) - levels.head(inst.particles).sum()));
    const IndexList ab = join(inst.a, inst.b);
    record(ksupp, std::abs(exact_modular_expectation(psi, ab) - exact_entropy(psi, ab)));
  }
  report.checks = {corr, ent, cmi, jj, anti, purity, proj, energy, ksupp};
  return report;
}

std::vector<CalibrationCheck> run_invariant_suite(const GaussianOptions& opts, int L) {
  const LatticeModel model = build_haldane(L, 0.0);
  const CorrelationMatrix c = ground_state_correlations(model, opts);
  const CorrelationDiagnostics d = diagnose(c);
  PresetParams pp;
  pp.r = 0.6 * L;
  const Partition part = preset("tripartite_disk", model, pp);
  const Region& a = part.u();
  const Region& b = part.v();
  const Region& cr = part.w();

  std::vector<CalibrationCheck> out;
  auto add = [&](std::string name, double err, double tol) {
    CalibrationCheck k{std::move(name), 0, 0.0, tol};
    record(k, err);
    out.push_back(std::move(k));
  };
  add("lattice h Hermitian", hermiticity_residual(model.h()), 1e-12);
  add("C Hermitian", d.hermiticity, 1e-12);
  add("C spectrum inside [0, 1]", std::max({0.0, -d.min_eigenvalue, d.max_eigenvalue - 1.0}), 1e-10);
  add("C^2 = C at half filling", d.projector_residual, 1e-9);
  add("Tr C = N/2", std::abs(d.trace - 0.5 * model.size()), 1e-9);
  add("S(ABC) = S(rest of lattice)",
      std::abs(entanglement_entropy(c, region_union(part.regions), opts.entropy_eps) -
               entanglement_entropy(c, complement(model, region_union(part.regions)), opts.entropy_eps)),
      1e-8);
  const double j = modular_commutator(c, a, b, cr, opts).value;
  add("J(A,B,C) + J(C,B,A) = 0", std::abs(j + modular_commutator(c, cr, b, a, opts).value), 1e-10);
  const ModularCurrent cur = modular_current(c, a, b, cr, opts);
  add("sum of modular current = J", std::abs(cur.resummed - j), 1e-9);
  add("I(A:C|B) >= 0", std::max(0.0, -cond_mutual_info(c, a, b, cr, opts.entropy_eps)), 1e-8);
  return out;
}

}  // namespace modcomm
