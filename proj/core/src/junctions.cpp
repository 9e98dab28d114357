#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "modcomm/errors.hpp"
#include "modcomm/regions.hpp"
#include "geometry.hpp"

namespace modcomm {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(std::size_t(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[std::size_t(x)] != x) x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

std::vector<TriJunction> find_trijunctions(const LatticeModel& model, const Partition& p,
                                           const JunctionOptions& opts) {
  const auto regs = p.junction_regions();
  if (regs.size() > 63) throw InvalidArgument("regions", "too many regions for junction analysis");
  const Roles& roles = p.junction_roles;
  for (int r : {roles.u, roles.v, roles.w})
    if (r < 0 || r >= int(regs.size())) throw InvalidArgument("regions", "junction role index out of range");

  std::vector<int> label(std::size_t(model.size()), -1);
  for (std::size_t i = 0; i < regs.size(); ++i)
    for (int s : regs[i].sites()) label[std::size_t(s)] = int(i);

  const double a = model.lattice_constant();
  const double det = opts.detection_radius * a;
  const double step = opts.grid_step * a;
  const geometry::SiteGrid grid(model, det);
  const std::uint64_t need = (1ULL << roles.u) | (1ULL << roles.v) | (1ULL << roles.w);

  const int nx = int(std::floor((grid.hi().x() - grid.lo().x()) / step)) + 1;
  const int ny = int(std::floor((grid.hi().y() - grid.lo().y()) / step)) + 1;
  std::vector<std::uint64_t> mask(std::size_t(nx) * std::size_t(ny), 0);
  auto point = [&](int ix, int iy) { return Vec2(grid.lo().x() + ix * step, grid.lo().y() + iy * step); };
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      std::uint64_t m = 0;
      grid.for_each_within(point(ix, iy), det, [&](int s) {
        if (label[std::size_t(s)] >= 0) m |= 1ULL << label[std::size_t(s)];
      });
      mask[std::size_t(ix * ny + iy)] = (m & need) == need ? m : 0;
    }
  }

  UnionFind uf(nx * ny);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      if (!mask[std::size_t(ix * ny + iy)]) continue;
      for (int dx = 0; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          if (dx == 0 && dy <= 0) continue;
          const int jx = ix + dx, jy = iy + dy;
          if (jx < nx && jy >= 0 && jy < ny && mask[std::size_t(jx * ny + jy)])
            uf.unite(ix * ny + iy, jx * ny + jy);
        }
    }

  struct Cluster {
    Vec2 sum = Vec2::Zero();
    int count = 0;
    std::uint64_t labels = 0;
  };
  std::vector<int> order;
  std::vector<Cluster> clusters(std::size_t(nx * ny));
  for (int i = 0; i < nx * ny; ++i) {
    if (!mask[std::size_t(i)]) continue;
    const int root = uf.find(i);
    auto& c = clusters[std::size_t(root)];
    if (c.count == 0) order.push_back(root);
    c.sum += point(i / ny, i % ny);
    c.count += 1;
    c.labels |= mask[std::size_t(i)];
  }

  const int role_of[3] = {roles.u, roles.v, roles.w};
  std::vector<TriJunction> out;
  for (int root : order) {
    const auto& c = clusters[std::size_t(root)];
    TriJunction j;
    j.position = c.sum / c.count;
    for (std::size_t i = 0; i < regs.size(); ++i)
      if (c.labels & (1ULL << i)) j.labels.push_back(regs[i].label());

    std::vector<int> seq;
    bool complete = true;
    for (int k = 0; k < opts.ring_samples; ++k) {
      const double t = 2.0 * std::numbers::pi * k / opts.ring_samples;
      const Vec2 q = j.position + opts.ring_radius * a * Vec2(std::cos(t), std::sin(t));
      const int s = grid.nearest(q, opts.cover_radius * a);
      const int l = s < 0 ? -1 : label[std::size_t(s)];
      int role = -1;
      for (int r = 0; r < 3; ++r)
        if (l == role_of[r]) role = r;
      if (role < 0) {
        complete = false;
        continue;
      }
      if (seq.empty() || seq.back() != role) seq.push_back(role);
    }
    while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
    int winding = 0;
    for (std::size_t i = 0; seq.size() > 1 && i < seq.size(); ++i) {
      const int d = ((seq[(i + 1) % seq.size()] - seq[i]) % 3 + 3) % 3;
      winding += d == 1 ? 1 : -1;
    }
    j.complete = complete;
    j.orientation = int(std::lround(winding / 3.0));
    out.push_back(std::move(j));
  }
  return out;
}

int predict_geometric_integer(const LatticeModel& model, const Partition& p, const JunctionOptions& opts) {
  int total = 0;
  for (const auto& j : find_trijunctions(model, p, opts)) {
    if (!j.complete)
      throw PredictionRefused("regions", fmt::format("partition '{}' has an incomplete tri-junction near ({:.2f}, {:.2f})",
                                                     p.name, j.position.x(), j.position.y()));
    total += j.orientation;
  }
  return p.kind == PartitionKind::bulk ? total : -total;
}

}  // namespace modcomm
