#include "modcomm/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "modcomm/errors.hpp"
#include "modcomm/linalg.hpp"

namespace modcomm {

namespace {

constexpr cplx kI{0.0, 1.0};

IndexList sorted_union(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexList sorted_intersection(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void require_disjoint(const char* what, std::initializer_list<const Region*> regions) {
  std::vector<const Region*> rs(regions);
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j)
      if (!sorted_intersection(rs[i]->sites(), rs[j]->sites()).empty())
        throw InvalidPartition("gaussian", fmt::format("{}: regions {} and {} overlap", what,
                                                       rs[i]->label(), rs[j]->label()));
}

void require_model(const CorrelationMatrix& c, const Region& r) {
  if (r.model_id() != c.model_id() || r.model_size() != c.model_size())
    throw InvalidArgument("gaussian", "region " + r.label() + " refers to a different model");
}

double entropy_of(const RVector& n, double eps) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    const double x = n(i);
    if (x < eps || x > 1.0 - eps) continue;
    s -= x * std::log(x) + (1.0 - x) * std::log1p(-x);
  }
  return s;
}

double entropy_of_sites(const CorrelationMatrix& c, const IndexList& sites, double eps) {
  if (sites.empty()) return 0.0;
  return entanglement_entropy(restrict(c, sites), eps);
}

// Tr(Gamma k_X k_Y) with k_X, k_Y zero-padded onto the index space of gamma.
// x, y: positions of X and Y inside gamma; both sorted.
cplx padded_trace(const CMatrix& gamma, const IndexList& x, const ModularMatrix& kx, const IndexList& y,
                  const ModularMatrix& ky) {
  IndexList shared = sorted_intersection(x, y);
  if (shared.empty()) return 0.0;
  IndexList in_x, in_y;
  for (int s : shared) {
    in_x.push_back(int(std::lower_bound(x.begin(), x.end(), s) - x.begin()));
    in_y.push_back(int(std::lower_bound(y.begin(), y.end(), s) - y.begin()));
  }
  const CMatrix left = kx.k(Eigen::all, in_x);
  const CMatrix right = ky.k(in_y, Eigen::all);
  const CMatrix prod = left * right;  // rows X, columns Y
  const CMatrix g_yx = gather(gamma, y, x);
  return (g_yx.transpose().array() * prod.array()).sum();
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(CMatrix gamma, IndexList sites, int model_size, std::uint64_t model_id)
    : gamma_(std::move(gamma)), sites_(std::move(sites)), model_size_(model_size), model_id_(model_id) {
  if (gamma_.rows() != gamma_.cols() || gamma_.rows() != static_cast<Eigen::Index>(sites_.size()))
    throw InvalidArgument("gaussian", "correlation matrix shape does not match its site list");
  if (!std::is_sorted(sites_.begin(), sites_.end()))
    throw InvalidArgument("gaussian", "correlation matrix sites must be sorted");
}

IndexList CorrelationMatrix::local_indices(const IndexList& global) const {
  IndexList out;
  out.reserve(global.size());
  for (int s : global) {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
    if (it == sites_.end() || *it != s)
      throw InvalidArgument("gaussian", fmt::format("site {} is not covered by this correlation matrix", s));
    out.push_back(int(it - sites_.begin()));
  }
  return out;
}

CorrelationMatrix ground_state_correlations(const CMatrix& h, int n_particles, const GaussianOptions& opts,
                                            std::uint64_t model_id, double* fermi_gap) {
  const int N = static_cast<int>(h.rows());
  if (h.rows() != h.cols()) throw InvalidArgument("gaussian", "h must be square");
  if (n_particles < 0 || n_particles > N)
    throw InvalidArgument("gaussian", fmt::format("particle number {} outside 0..{}", n_particles, N));
  auto eig = hermitian_eig(h);
  if (fermi_gap) *fermi_gap = std::numeric_limits<double>::quiet_NaN();
  if (n_particles > 0 && n_particles < N) {
    const double gap = eig.values(n_particles) - eig.values(n_particles - 1);
    if (fermi_gap) *fermi_gap = gap;
    if (gap <= opts.degeneracy_threshold)
      throw DegenerateFilling("gaussian", fmt::format("degenerate filling: gap {:.3e} at the Fermi level is below {:.1e}",
                                                      gap, opts.degeneracy_threshold));
  }
  const auto occ = eig.vectors.leftCols(n_particles);
  CMatrix gamma = occ * occ.adjoint();
  if (opts.flip_transpose) gamma.transposeInPlace();
  IndexList sites(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) sites[std::size_t(i)] = i;
  return CorrelationMatrix(std::move(gamma), std::move(sites), N, model_id);
}

CorrelationMatrix ground_state_correlations(const LatticeModel& model, const GaussianOptions& opts,
                                            double* fermi_gap) {
  if (model.size() % 2 != 0)
    throw InvalidArgument("gaussian", fmt::format("half filling needs even N, got {}", model.size()));
  return ground_state_correlations(model.h(), model.size() / 2, opts, model.fingerprint(), fermi_gap);
}

CorrelationMatrix ground_state_correlations(const LatticeModel& model, const GaussianOptions& opts) {
  return ground_state_correlations(model, opts, nullptr);
}

CorrelationDiagnostics diagnose(const CorrelationMatrix& c) {
  CorrelationDiagnostics d;
  const CMatrix& g = c.gamma();
  if (g.size() == 0) return d;
  d.hermiticity = hermiticity_residual(g);
  const RVector w = hermitian_eigenvalues(g);
  d.min_eigenvalue = w.minCoeff();
  d.max_eigenvalue = w.maxCoeff();
  d.projector_residual = (g * g - g).cwiseAbs().maxCoeff();
  d.trace = g.trace().real();
  return d;
}

CorrelationMatrix restrict(const CorrelationMatrix& c, const IndexList& global_sites) {
  const IndexList keep = sorted_intersection(c.sites(), global_sites);
  const IndexList local = c.local_indices(keep);
  return CorrelationMatrix(gather(c.gamma(), local, local), keep, c.model_size(), c.model_id());
}

CorrelationMatrix restrict(const CorrelationMatrix& c, const Region& x) {
  if (x.empty()) throw InvalidArgument("gaussian", "restriction to an empty region");
  require_model(c, x);
  return restrict(c, x.sites());
}

double entanglement_entropy(const CorrelationMatrix& cx, double eps) {
  if (cx.size() == 0) return 0.0;
  return entropy_of(hermitian_eigenvalues(cx.gamma()), eps);
}

double entanglement_entropy(const CorrelationMatrix& c, const Region& x, double eps) {
  if (x.empty()) return 0.0;
  return entanglement_entropy(restrict(c, x), eps);
}

double ModularMatrix::norm() const { return spectrum.size() ? spectrum.cwiseAbs().maxCoeff() : 0.0; }

ModularMatrix modular_matrix(const CorrelationMatrix& cx, double eps) {
  if (!(eps > 0.0 && eps <= 1e-6))
    throw InvalidArgument("gaussian", fmt::format("modular clip eps must lie in (0, 1e-6], got {}", eps));
  ModularMatrix m;
  m.sites = cx.sites();
  m.eps = eps;
  if (cx.size() == 0) return m;
  auto eig = hermitian_eig(cx.gamma());
  m.occupations = eig.values.unaryExpr([eps](double n) { return std::clamp(n, eps, 1.0 - eps); });
  m.spectrum = m.occupations.unaryExpr([](double n) { return std::log((1.0 - n) / n); });
  m.k = eig.vectors * m.spectrum.asDiagonal() * eig.vectors.adjoint();
  m.k = 0.5 * (m.k + m.k.adjoint()).eval();
  return m;
}

CommutatorResult modular_commutator(const CorrelationMatrix& c, const Region& a, const Region& b,
                                    const Region& cr, const GaussianOptions& opts) {
  for (const Region* r : {&a, &b, &cr}) require_model(c, *r);
  require_disjoint("modular_commutator", {&a, &b, &cr});
  CommutatorResult res;
  if (a.empty() || b.empty() || cr.empty()) return res;

  const IndexList ab = sorted_union(a.sites(), b.sites());
  const IndexList bc = sorted_union(b.sites(), cr.sites());
  const IndexList abc = sorted_union(ab, cr.sites());
  const CorrelationMatrix c_abc = restrict(c, abc);
  const IndexList x = c_abc.local_indices(ab);
  const IndexList y = c_abc.local_indices(bc);
  const ModularMatrix k_ab = modular_matrix(restrict(c, ab), opts.modular_eps);
  const ModularMatrix k_bc = modular_matrix(restrict(c, bc), opts.modular_eps);

  const cplx t_xy = padded_trace(c_abc.gamma(), x, k_ab, y, k_bc);
  const cplx t_yx = padded_trace(c_abc.gamma(), y, k_bc, x, k_ab);
  const cplx t = kI * (t_xy - t_yx);
  res.value = t.real();
  res.imag_residue = std::abs(t.imag());
  res.residue_bound = opts.residue_factor * k_ab.norm() * k_bc.norm();
  if (opts.enforce_residue && res.imag_residue > res.residue_bound)
    throw ResidueExceeded("gaussian", fmt::format("imaginary residue {:.3e} of J exceeds the bound {:.3e}",
                                                  res.imag_residue, res.residue_bound));
  return res;
}

double geometric_integer(double J, PartitionKind kind) {
  const double n = 3.0 / std::numbers::pi * J;
  return kind == PartitionKind::bulk ? n : -n;
}

double cond_mutual_info(const CorrelationMatrix& c, const Region& a, const Region& b, const Region& cr, double eps) {
  for (const Region* r : {&a, &b, &cr}) require_model(c, *r);
  require_disjoint("cond_mutual_info", {&a, &b, &cr});
  const IndexList ab = sorted_union(a.sites(), b.sites());
  const IndexList bc = sorted_union(b.sites(), cr.sites());
  return entropy_of_sites(c, ab, eps) + entropy_of_sites(c, bc, eps) - entropy_of_sites(c, b.sites(), eps) -
         entropy_of_sites(c, sorted_union(ab, cr.sites()), eps);
}

double delta_two(const CorrelationMatrix& c, const Region& b, const Region& cr, double eps) {
  for (const Region* r : {&b, &cr}) require_model(c, *r);
  require_disjoint("delta_two", {&b, &cr});
  return entropy_of_sites(c, sorted_union(b.sites(), cr.sites()), eps) + entropy_of_sites(c, cr.sites(), eps) -
         entropy_of_sites(c, b.sites(), eps);
}

double delta_three(const CorrelationMatrix& c, const Region& b, const Region& cr, const Region& d, double eps) {
  for (const Region* r : {&b, &cr, &d}) require_model(c, *r);
  require_disjoint("delta_three", {&b, &cr, &d});
  return entropy_of_sites(c, sorted_union(b.sites(), cr.sites()), eps) +
         entropy_of_sites(c, sorted_union(cr.sites(), d.sites()), eps) - entropy_of_sites(c, b.sites(), eps) -
         entropy_of_sites(c, d.sites(), eps);
}

AdditivityResult additivity_decomposition(const CorrelationMatrix& c, const LatticeModel& model, const Region& u,
                                          const Region& v, const Region& w, const std::vector<JunctionBall>& balls,
                                          const GaussianOptions& opts) {
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if ((balls[i].center - balls[j].center).norm() <= balls[i].outer_radius + balls[j].outer_radius)
        throw InvalidArgument("gaussian", "additivity_decomposition: junction balls overlap");
  AdditivityResult res;
  res.total = modular_commutator(c, u, v, w, opts).value;
  Region small = Region::empty_of(model);
  for (const auto& ball : balls) {
    const Region big = disk(model, ball.center, ball.outer_radius);
    small = region_union(small, disk(model, ball.center, ball.inner_radius));
    res.ball_terms.push_back(
        modular_commutator(c, region_intersect(u, big), region_intersect(v, big), region_intersect(w, big), opts).value);
  }
  res.residual =
      modular_commutator(c, region_subtract(u, small), region_subtract(v, small), region_subtract(w, small), opts).value;
  res.defect = res.total - res.residual;
  for (double t : res.ball_terms) res.defect -= t;
  return res;
}

}  // namespace modcomm
