#include "modcomm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "modcomm/errors.hpp"
#include "modcomm/linalg.hpp"

namespace modcomm {

namespace {

constexpr double kSupportCut = 1e-12;

std::vector<std::uint32_t> configs_with(int modes, int particles) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t b = 0; b < (1U << modes); ++b)
    if (std::popcount(b) == particles) out.push_back(b);
  return out;
}

IndexList checked_modes(const IndexList& modes, int n, const char* what) {
  IndexList m = modes;
  std::sort(m.begin(), m.end());
  if (std::adjacent_find(m.begin(), m.end()) != m.end())
    throw InvalidArgument("oracle", fmt::format("{}: duplicate mode", what));
  if (!m.empty() && (m.front() < 0 || m.back() >= n))
    throw InvalidArgument("oracle", fmt::format("{}: mode index out of range 0..{}", what, n - 1));
  return m;
}

// Splits the global basis into X (modes, in order) and the remaining modes.
// For each global config: sector p = particles in X, local X index, rest index
// and the sign of reordering the creation string to X-first.
class Bipartition {
 public:
  Bipartition(const FockState& state, IndexList modes) : state_(&state), modes_(std::move(modes)) {
    const int n = state.modes();
    const int m = int(modes_.size());
    std::vector<bool> in_x(std::size_t(n), false);
    for (int x : modes_) in_x[std::size_t(x)] = true;
    for (int k = 0; k < n; ++k)
      if (!in_x[std::size_t(k)]) rest_.push_back(k);
    const int rsize = int(rest_.size());
    const int np = state.particles();
    for (int p = 0; p <= std::min(m, np); ++p) {
      if (np - p > rsize) continue;
      Sector s;
      s.particles = p;
      s.xconf = configs_with(m, p);
      s.rconf = configs_with(rsize, np - p);
      for (std::size_t i = 0; i < s.xconf.size(); ++i) s.xpos[s.xconf[i]] = int(i);
      for (std::size_t i = 0; i < s.rconf.size(); ++i) s.rpos[s.rconf[i]] = int(i);
      s.psi = CMatrix::Zero(Eigen::Index(s.xconf.size()), Eigen::Index(s.rconf.size()));
      sector_of_p_[p] = int(sectors_.size());
      sectors_.push_back(std::move(s));
    }
    const auto& amps = state.amplitudes();
    for (std::uint32_t cfg = 0; cfg < (1U << n); ++cfg) {
      if (std::popcount(cfg) != np) continue;
      Entry e = split(cfg);
      entries_.push_back(e);
      sectors_[std::size_t(e.sector)].psi(e.xi, e.ri) = double(e.sign) * amps(cfg);
    }
  }

  std::vector<DensitySector> densities() const {
    std::vector<DensitySector> out;
    for (const auto& s : sectors_) out.push_back({s.particles, s.xconf, s.psi * s.psi.adjoint()});
    return out;
  }

  // Applies sum_p op_p (block on X) tensor identity to the state.
  CVector apply(const std::vector<CMatrix>& ops) const {
    CVector out = CVector::Zero(state_->amplitudes().size());
    std::vector<CMatrix> phi;
    for (std::size_t k = 0; k < sectors_.size(); ++k) phi.push_back(ops[k] * sectors_[k].psi);
    for (const auto& e : entries_) out(e.cfg) = double(e.sign) * phi[std::size_t(e.sector)](e.xi, e.ri);
    return out;
  }

 private:
  struct Sector {
    int particles = 0;
    std::vector<std::uint32_t> xconf, rconf;
    std::map<std::uint32_t, int> xpos, rpos;
    CMatrix psi;
  };
  struct Entry {
    std::uint32_t cfg;
    int sector, xi, ri, sign;
  };

  Entry split(std::uint32_t cfg) const {
    const int m = int(modes_.size());
    const int rsize = int(rest_.size());
    std::uint32_t xb = 0, rb = 0;
    int crossings = 0;
    for (int i = 0; i < m; ++i)
      if (state_->occupied(cfg, modes_[std::size_t(i)])) {
        xb |= 1U << (m - 1 - i);
        for (int r : rest_)
          if (r < modes_[std::size_t(i)] && state_->occupied(cfg, r)) ++crossings;
      }
    for (int i = 0; i < rsize; ++i)
      if (state_->occupied(cfg, rest_[std::size_t(i)])) rb |= 1U << (rsize - 1 - i);
    const int p = std::popcount(xb);
    const int k = sector_of_p_.at(p);
    const auto& s = sectors_[std::size_t(k)];
    return {cfg, k, s.xpos.at(xb), s.rpos.at(rb), crossings % 2 ? -1 : 1};
  }

  const FockState* state_;
  IndexList modes_;
  IndexList rest_;
  std::vector<Sector> sectors_;
  std::map<int, int> sector_of_p_;
  std::vector<Entry> entries_;
};

// -ln rho per sector on the support, and the discarded weight.
std::vector<CMatrix> modular_blocks(const Bipartition& bp, double* dropped) {
  std::vector<CMatrix> ks;
  double lost = 0.0;
  for (const auto& d : bp.densities()) {
    auto eig = hermitian_eig(d.rho);
    RVector lnv(eig.values.size());
    for (Eigen::Index i = 0; i < lnv.size(); ++i) {
      const double l = eig.values(i);
      if (l < kSupportCut) {
        lnv(i) = 0.0;
        lost += std::max(l, 0.0);
      } else {
        lnv(i) = -std::log(l);
      }
    }
    ks.push_back(eig.vectors * lnv.asDiagonal() * eig.vectors.adjoint());
  }
  if (dropped) *dropped = lost;
  return ks;
}

int find_bit(std::uint32_t cfg, int mode, int n) { return int((cfg >> (n - 1 - mode)) & 1U); }
int occupied_before(std::uint32_t cfg, int mode, int n) {
  return mode == 0 ? 0 : std::popcount(cfg >> (n - mode));
}

}  // namespace

FockState::FockState(CVector amplitudes, int modes, int particles)
    : amps_(std::move(amplitudes)), modes_(modes), particles_(particles) {
  if (modes < 1 || modes > kMaxOracleModes)
    throw InvalidArgument("oracle", fmt::format("mode count {} outside 1..{}", modes, kMaxOracleModes));
  if (amps_.size() != (Eigen::Index(1) << modes))
    throw InvalidArgument("oracle", "amplitude vector length must be 2^N");
  if (std::abs(amps_.norm() - 1.0) > 1e-12) throw InvalidArgument("oracle", "Fock state is not normalized");
  for (std::uint32_t b = 0; b < (1U << modes); ++b)
    if (std::popcount(b) != particles && amps_(b) != cplx(0.0))
      throw InvalidArgument("oracle", "Fock state has weight outside its particle-number sector");
}

FockState exact_ground_state(const CMatrix& h, int n_particles, double gap_threshold) {
  const int n = int(h.rows());
  if (h.rows() != h.cols()) throw InvalidArgument("oracle", "h must be square");
  if (n < 1 || n > kMaxOracleModes)
    throw InvalidArgument("oracle", fmt::format("exact ground state limited to {} modes, got {}", kMaxOracleModes, n));
  if (n_particles < 0 || n_particles > n) throw InvalidArgument("oracle", "particle number out of range");
  auto eig = hermitian_eig(h);
  if (n_particles > 0 && n_particles < n && eig.values(n_particles) - eig.values(n_particles - 1) <= gap_threshold)
    throw DegenerateFilling("oracle", "many-body ground state is degenerate");
  CVector amps = CVector::Zero(Eigen::Index(1) << n);
  for (std::uint32_t cfg : configs_with(n, n_particles)) {
    IndexList occ;
    for (int m = 0; m < n; ++m)
      if (find_bit(cfg, m, n)) occ.push_back(m);
    CMatrix sub(n_particles, n_particles);
    for (int i = 0; i < n_particles; ++i)
      for (int a = 0; a < n_particles; ++a) sub(i, a) = eig.vectors(occ[std::size_t(i)], a);
    amps(cfg) = n_particles == 0 ? cplx(1.0) : sub.determinant();
  }
  amps /= amps.norm();
  return FockState(std::move(amps), n, n_particles);
}

CMatrix exact_correlations(const FockState& state) {
  const int n = state.modes();
  const auto& psi = state.amplitudes();
  CMatrix c = CMatrix::Zero(n, n);
  for (std::uint32_t cfg = 0; cfg < (1U << n); ++cfg) {
    if (psi(cfg) == cplx(0.0)) continue;
    for (int k = 0; k < n; ++k) {
      if (!find_bit(cfg, k, n)) continue;
      const std::uint32_t mid = cfg & ~(1U << (n - 1 - k));
      const int s1 = occupied_before(cfg, k, n);
      for (int j = 0; j < n; ++j) {
        if (find_bit(mid, j, n)) continue;
        const std::uint32_t out = mid | (1U << (n - 1 - j));
        const int s2 = occupied_before(mid, j, n);
        const double sign = (s1 + s2) % 2 ? -1.0 : 1.0;
        c(j, k) += std::conj(psi(out)) * sign * psi(cfg);
      }
    }
  }
  return c;
}

double exact_energy(const FockState& state, const CMatrix& h) {
  const CMatrix c = exact_correlations(state);
  return (h.array() * c.array()).sum().real();
}

DensityOperator::DensityOperator(IndexList modes, std::vector<DensitySector> sectors)
    : modes_(std::move(modes)), sectors_(std::move(sectors)) {}

CMatrix DensityOperator::dense() const {
  const Eigen::Index dim = Eigen::Index(1) << modes_.size();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& s : sectors_)
    for (std::size_t i = 0; i < s.configs.size(); ++i)
      for (std::size_t j = 0; j < s.configs.size(); ++j)
        out(s.configs[i], s.configs[j]) = s.rho(Eigen::Index(i), Eigen::Index(j));
  return out;
}

RVector DensityOperator::eigenvalues() const {
  std::vector<double> all;
  for (const auto& s : sectors_) {
    const RVector w = hermitian_eigenvalues(s.rho);
    all.insert(all.end(), w.data(), w.data() + w.size());
  }
  std::sort(all.begin(), all.end());
  return Eigen::Map<RVector>(all.data(), Eigen::Index(all.size()));
}

double DensityOperator::trace() const {
  double t = 0.0;
  for (const auto& s : sectors_) t += s.rho.trace().real();
  return t;
}

double DensityOperator::purity() const {
  double p = 0.0;
  for (const auto& s : sectors_) p += (s.rho * s.rho).trace().real();
  return p;
}

DensityOperator reduce(const FockState& state, const IndexList& modes) {
  if (modes.empty()) throw InvalidArgument("oracle", "reduce: empty region");
  IndexList m = checked_modes(modes, state.modes(), "reduce");
  Bipartition bp(state, m);
  return DensityOperator(std::move(m), bp.densities());
}

double von_neumann_entropy(const DensityOperator& rho) {
  double s = 0.0;
  const RVector w = rho.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > kSupportCut) s -= w(i) * std::log(w(i));
  return s;
}

double exact_entropy(const FockState& state, const IndexList& modes) {
  if (modes.empty()) return 0.0;
  return von_neumann_entropy(reduce(state, modes));
}

double exact_cmi(const FockState& state, const IndexList& a, const IndexList& b, const IndexList& c) {
  auto join = [](IndexList x, const IndexList& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return exact_entropy(state, join(a, b)) + exact_entropy(state, join(b, c)) - exact_entropy(state, b) -
         exact_entropy(state, join(join(a, b), c));
}

double exact_modular_expectation(const FockState& state, const IndexList& modes) {
  if (modes.empty()) return 0.0;
  Bipartition bp(state, checked_modes(modes, state.modes(), "modular expectation"));
  const CVector k_psi = bp.apply(modular_blocks(bp, nullptr));
  return state.amplitudes().dot(k_psi).real();
}

ExactCommutator exact_modular_commutator(const FockState& state, const IndexList& a, const IndexList& b,
                                         const IndexList& c, double support_tol) {
  const int n = state.modes();
  IndexList all = a;
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), c.begin(), c.end());
  checked_modes(all, n, "exact_modular_commutator");
  ExactCommutator res;
  if (a.empty() || b.empty() || c.empty()) return res;

  IndexList ab = a, bc = b;
  ab.insert(ab.end(), b.begin(), b.end());
  bc.insert(bc.end(), c.begin(), c.end());
  std::sort(ab.begin(), ab.end());
  std::sort(bc.begin(), bc.end());
  Bipartition p_ab(state, ab);
  Bipartition p_bc(state, bc);
  double lost_ab = 0.0, lost_bc = 0.0;
  const CVector k1 = p_ab.apply(modular_blocks(p_ab, &lost_ab));
  const CVector k2 = p_bc.apply(modular_blocks(p_bc, &lost_bc));
  // i <[K1, K2]> = i (<K1 psi|K2 psi> - c.c.) = -2 Im <K1 psi|K2 psi>
  res.value = -2.0 * k1.dot(k2).imag();
  res.support_weight = std::max(lost_ab, lost_bc);
  res.support_warning = res.support_weight > support_tol;
  return res;
}

ExactCommutator exact_modular_commutator(const FockState& state, const Region& a, const Region& b,
                                         const Region& c, double support_tol) {
  return exact_modular_commutator(state, a.sites(), b.sites(), c.sites(), support_tol);
}

}  // namespace modcomm
