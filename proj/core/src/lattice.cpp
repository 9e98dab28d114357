#include "modcomm/lattice.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "modcomm/errors.hpp"
#include "modcomm/linalg.hpp"
#include "modcomm/rng.hpp"

namespace modcomm {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr cplx kI{0.0, 1.0};

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t model_fingerprint(const std::vector<Site>& sites, const CMatrix& h) {
  std::uint64_t f = 0xCBF29CE484222325ULL;
  const std::uint64_t n = sites.size();
  f = fnv1a(f, &n, sizeof n);
  for (const auto& s : sites) f = fnv1a(f, s.position.data(), 2 * sizeof(double));
  return fnv1a(f, h.data(), static_cast<std::size_t>(h.size()) * sizeof(cplx));
}

// Directed hopping term h[site of sublattice `from`, site displaced by d] += amp.
struct Hop {
  int from;
  int to;
  Vec2 d;
  cplx amp;
};

const std::array<Vec2, 3>& honeycomb_bonds() {
  static const std::array<Vec2, 3> dl{Vec2(0.0, 1.0), Vec2(-kSqrt3 / 2, -0.5),
                                      Vec2(kSqrt3 / 2, -0.5)};
  return dl;
}

// All directed hops leaving a site of sublattice s (0 = a, 1 = b).
// NNN phase: nu = sign of the cross product of the two bonds on the path.
std::vector<Hop> haldane_hops(int s, double t1, double t2, double phi) {
  const double sg = s == 0 ? 1.0 : -1.0;
  std::vector<Hop> hops;
  for (const auto& x : honeycomb_bonds()) hops.push_back({s, 1 - s, sg * x, cplx(t1, 0.0)});
  for (const auto& x : honeycomb_bonds()) {
    for (const auto& y : honeycomb_bonds()) {
      if (&x == &y) continue;
      const Vec2 d1 = sg * x;
      const Vec2 d2 = -sg * y;
      const double nu = d1.x() * d2.y() - d1.y() * d2.x() > 0 ? 1.0 : -1.0;
      hops.push_back({s, s, d1 + d2, std::abs(t2) * std::exp(-kI * phi * nu)});
    }
  }
  return hops;
}

std::vector<Hop> pi_flux_hops(double t1, double tau) {
  std::vector<Hop> hops;
  auto both = [&](int from, int to, Vec2 d, cplx amp) {
    hops.push_back({from, to, d, amp});
    hops.push_back({to, from, -d, std::conj(amp)});
  };
  both(0, 1, Vec2(0.0, 0.5), t1);
  both(1, 0, Vec2(0.0, 0.5), t1);
  both(0, 0, Vec2(1.0, 0.0), t1);
  both(1, 1, Vec2(1.0, 0.0), -t1);
  both(1, 0, Vec2(-1.0, -0.5), kI * tau);
  return hops;
}

double bloch_gap(const std::vector<Hop>& hops, const Vec2& a1, const Vec2& a2, int k_points) {
  if (k_points < 1) throw InvalidArgument("lattice", "k_points must be positive");
  Eigen::Matrix2d A;
  A.col(0) = a1;
  A.col(1) = a2;
  const Eigen::Matrix2d B = 2.0 * std::numbers::pi * A.inverse().transpose();
  double lower_max = -std::numeric_limits<double>::infinity();
  double upper_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k_points; ++i) {
    for (int j = 0; j < k_points; ++j) {
      const Vec2 k = B * Vec2(double(i) / k_points, double(j) / k_points);
      Eigen::Matrix2cd hk = Eigen::Matrix2cd::Zero();
      for (const auto& hop : hops) hk(hop.from, hop.to) += hop.amp * std::exp(kI * k.dot(hop.d));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hk, Eigen::EigenvaluesOnly);
      lower_max = std::max(lower_max, es.eigenvalues()(0));
      upper_min = std::min(upper_min, es.eigenvalues()(1));
    }
  }
  return upper_min - lower_max;
}

struct PositionKey {
  long long x;
  long long y;
  bool operator==(const PositionKey&) const = default;
};

struct PositionKeyHash {
  std::size_t operator()(const PositionKey& k) const noexcept {
    return std::hash<long long>()(k.x * 1000003LL + k.y);
  }
};

// Honeycomb x coordinates are multiples of sqrt3/2 and y of 1/2.
PositionKey honeycomb_key(const Vec2& p) {
  return {std::llround(2.0 * p.x() / kSqrt3), std::llround(2.0 * p.y())};
}

}  // namespace

LatticeModel::LatticeModel(std::vector<Site> sites, CMatrix h, ModelParams params, Vec2 center,
                           double lattice_constant, double bond_length)
    : sites_(std::move(sites)),
      h_(std::move(h)),
      params_(std::move(params)),
      center_(std::move(center)),
      lattice_constant_(lattice_constant),
      bond_length_(bond_length) {
  const auto n = static_cast<Eigen::Index>(sites_.size());
  if (h_.rows() != n || h_.cols() != n)
    throw InvalidArgument("lattice", "h must be N x N for N sites");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i].index != static_cast<int>(i))
      throw InvalidArgument("lattice", "site indices must be 0..N-1 in order");
    if (!sites_[i].position.allFinite())
      throw InvalidArgument("lattice", "site positions must be finite");
  }
  const double res = hermiticity_residual(h_);
  if (!(res < 1e-12))
    throw InvalidArgument("lattice", fmt::format("h is not Hermitian (residual {:.3e})", res));
  fingerprint_ = model_fingerprint(sites_, h_);
}

LatticeModel build_haldane(int L, double mu_tilde, double t1, double t2, double phi) {
  if (L < 2) throw InvalidArgument("lattice", fmt::format("build_haldane needs L >= 2, got {}", L));
  if (t2 == 0.0) throw InvalidArgument("lattice", "build_haldane needs t2 != 0 (mu_tilde undefined)");
  const Vec2 a1(kSqrt3, 0.0);
  const Vec2 a2(kSqrt3 / 2, 1.5);
  const Vec2 da(-kSqrt3 / 2, -0.5);
  const Vec2 db(-kSqrt3 / 2, 0.5);
  const Vec2 cell_offset(-kSqrt3 / 2, 0.0);
  const double tol = 1e-9;

  std::vector<Site> sites;
  const int R = 2 * L + 4;
  for (int i = -R; i <= R; ++i) {
    for (int j = -R; j <= R; ++j) {
      const Vec2 origin = double(i) * a1 + double(j) * a2;
      const Vec2 c = origin + cell_offset;
      if (std::abs(c.y()) > L + tol) continue;
      if (std::abs(kSqrt3 / 2 * c.x() + c.y() / 2) > L + tol) continue;
      if (std::abs(kSqrt3 / 2 * c.x() - c.y() / 2) > L + tol) continue;
      const int n = static_cast<int>(sites.size());
      sites.push_back({n, origin + da, Sublattice::a, {i, j}});
      sites.push_back({n + 1, origin + db, Sublattice::b, {i, j}});
    }
  }

  const auto N = static_cast<Eigen::Index>(sites.size());
  std::unordered_map<PositionKey, int, PositionKeyHash> lookup;
  for (const auto& s : sites) lookup.emplace(honeycomb_key(s.position), s.index);

  const double mu = mu_tilde * 3.0 * kSqrt3 * t2;
  const std::array<std::vector<Hop>, 2> hops{haldane_hops(0, t1, t2, phi), haldane_hops(1, t1, t2, phi)};
  CMatrix h = CMatrix::Zero(N, N);
  for (const auto& s : sites) {
    const int sub = s.sublattice == Sublattice::a ? 0 : 1;
    h(s.index, s.index) = sub == 0 ? mu : -mu;
    for (const auto& hop : hops[sub]) {
      auto it = lookup.find(honeycomb_key(s.position + hop.d));
      if (it != lookup.end()) h(s.index, it->second) = hop.amp;
    }
  }

  ModelParams p;
  p.name = "haldane";
  p.L = L;
  p.mu_tilde = mu_tilde;
  p.mu = mu;
  p.t1 = t1;
  p.t2 = t2;
  p.phi = phi;
  return LatticeModel(std::move(sites), std::move(h), std::move(p), Vec2::Zero(), kSqrt3, 1.0);
}

LatticeModel build_pi_flux(int Lx, int Ly, double t1, double tau) {
  if (Lx < 2 || Ly < 2)
    throw InvalidArgument("lattice", fmt::format("build_pi_flux needs Lx, Ly >= 2, got {} x {}", Lx, Ly));
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(2 * Lx * Ly));
  auto index = [Ly](int x, int m, int sub) { return 2 * (x * Ly + m) + sub; };
  for (int x = 0; x < Lx; ++x) {
    for (int m = 0; m < Ly; ++m) {
      sites.push_back({index(x, m, 0), Vec2(x, m), Sublattice::a, {x, m}});
      sites.push_back({index(x, m, 1), Vec2(x, m + 0.5), Sublattice::b, {x, m}});
    }
  }
  const auto N = static_cast<Eigen::Index>(sites.size());
  CMatrix h = CMatrix::Zero(N, N);
  auto add = [&h](int i, int j, cplx v) {
    h(i, j) += v;
    h(j, i) += std::conj(v);
  };
  for (int x = 0; x < Lx; ++x) {
    for (int m = 0; m < Ly; ++m) {
      const int a = index(x, m, 0);
      const int b = index(x, m, 1);
      add(a, b, t1);
      if (m + 1 < Ly) add(b, index(x, m + 1, 0), t1);
      if (x + 1 < Lx) {
        add(a, index(x + 1, m, 0), t1);
        add(b, index(x + 1, m, 1), -t1);
        add(index(x + 1, m, 1), a, kI * tau);
      }
    }
  }
  ModelParams p;
  p.name = "pi_flux";
  p.Lx = Lx;
  p.Ly = Ly;
  p.t1 = t1;
  p.tau = tau;
  const Vec2 center((Lx - 1) / 2.0, (Ly - 1) / 2.0 + 0.25);
  return LatticeModel(std::move(sites), std::move(h), std::move(p), center, 1.0, 0.5);
}

LatticeModel build_custom(CMatrix h, std::string name) {
  if (h.rows() != h.cols()) throw InvalidArgument("lattice", "custom h must be square");
  std::vector<Site> sites;
  for (int i = 0; i < h.rows(); ++i) sites.push_back({i, Vec2(i, 0.0), Sublattice::a, {i, 0}});
  ModelParams p;
  p.name = std::move(name);
  p.L = static_cast<int>(h.rows());
  const Vec2 center((static_cast<double>(h.rows()) - 1.0) / 2.0, 0.0);
  return LatticeModel(std::move(sites), std::move(h), std::move(p), center, 1.0, 1.0);
}

LatticeModel build_chain(int n, double t) {
  if (n < 1) throw InvalidArgument("lattice", "chain needs at least one site");
  CMatrix h = CMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = -t;
  auto m = build_custom(std::move(h), "chain");
  return m;
}

LatticeModel add_disorder(const LatticeModel& model, double W, std::uint64_t seed) {
  if (!(W >= 0.0)) throw InvalidArgument("lattice", fmt::format("disorder strength W must be >= 0, got {}", W));
  CMatrix h = model.h();
  if (W > 0.0) {
    SplitMix64 rng(seed);
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) += rng.uniform(-W / 2, W / 2);
  }
  ModelParams p = model.params();
  p.disorder_w = W;
  p.disorder_seed = seed;
  return LatticeModel(model.sites(), std::move(h), std::move(p), model.center(),
                      model.lattice_constant(), model.bond_length());
}

double half_filling_gap(const CMatrix& h) {
  if (h.rows() % 2 != 0)
    throw InvalidArgument("lattice", fmt::format("half filling needs even N, got {}", h.rows()));
  if (h.rows() == 0) throw InvalidArgument("lattice", "half filling of an empty model");
  const RVector w = hermitian_eigenvalues(h);
  const Eigen::Index n = w.size() / 2;
  return w(n) - w(n - 1);
}

double half_filling_gap(const LatticeModel& model) { return half_filling_gap(model.h()); }

double haldane_bulk_gap(double mu_tilde, double t1, double t2, double phi, int k_points) {
  const double mu = mu_tilde * 3.0 * kSqrt3 * t2;
  auto hops = haldane_hops(0, t1, t2, phi);
  auto hb = haldane_hops(1, t1, t2, phi);
  hops.insert(hops.end(), hb.begin(), hb.end());
  hops.push_back({0, 0, Vec2::Zero(), mu});
  hops.push_back({1, 1, Vec2::Zero(), -mu});
  return bloch_gap(hops, Vec2(kSqrt3, 0.0), Vec2(kSqrt3 / 2, 1.5), k_points);
}

double pi_flux_bulk_gap(double t1, double tau, int k_points) {
  return bloch_gap(pi_flux_hops(t1, tau), Vec2(1.0, 0.0), Vec2(0.0, 1.0), k_points);
}

double bulk_gap(const ModelParams& params, int k_points) {
  if (params.name == "haldane")
    return haldane_bulk_gap(params.mu_tilde, params.t1, params.t2, params.phi, k_points);
  if (params.name == "pi_flux") return pi_flux_bulk_gap(params.t1, params.tau, k_points);
  throw InvalidArgument("lattice", "bulk gap is defined for haldane and pi_flux models only");
}

double hopping_range(const LatticeModel& model, double tol) {
  double r = 0.0;
  const auto& h = model.h();
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (i != j && std::abs(h(i, j)) > tol)
        r = std::max(r, (model.position(int(i)) - model.position(int(j))).norm());
  return r;
}

}  // namespace modcomm
