#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "modcomm/errors.hpp"
#include "modcomm/regions.hpp"
#include "geometry.hpp"

namespace modcomm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

bool is_pi_flux(const LatticeModel& m) { return m.params().name == "pi_flux"; }

// Centred block of lx x ly unit cells of a pi-flux patch.
Region cell_block(const LatticeModel& model, int lx, int ly, std::string label) {
  const int Lx = model.params().Lx;
  const int Ly = model.params().Ly;
  if (lx <= 0 || ly <= 0 || lx >= Lx || ly >= Ly)
    throw InvalidArgument("regions", fmt::format("cell block {} x {} does not fit inside {} x {}", lx, ly, Lx, Ly));
  const int x0 = (Lx - lx) / 2;
  const int m0 = (Ly - ly) / 2;
  IndexList out;
  for (const auto& s : model.sites()) {
    const auto [x, m] = s.unit_cell;
    if (x >= x0 && x < x0 + lx && m >= m0 && m < m0 + ly) out.push_back(s.index);
  }
  return Region::from_sites(model, std::move(out), std::move(label));
}

int default_pi_flux_block(int L, int reference) {
  return L - 2 * static_cast<int>(std::lround(10.0 * L / reference));
}

// Bulk footprint used by the disk-shaped presets.
using ParamList = std::vector<std::pair<std::string, double>>;

Region bulk_footprint(const LatticeModel& model, const PresetParams& p, double default_r,
                      int default_lx, int default_ly, ParamList& used) {
  if (is_pi_flux(model) && !p.r) {
    const int lx = p.lx.value_or(default_lx);
    const int ly = p.ly.value_or(default_ly);
    used.emplace_back("lx", lx);
    used.emplace_back("ly", ly);
    return cell_block(model, lx, ly, "disk");
  }
  const double r = p.r.value_or(default_r);
  used.emplace_back("r", r);
  if (!(r > 0.0)) throw InvalidArgument("regions", "preset radius must be positive");
  const double inradius = geometry::hull_inradius(model, model.center());
  if (r > inradius)
    throw InvalidArgument("regions", fmt::format("radius {} exceeds the patch inradius {:.3f}", r, inradius));
  return disk(model, model.center(), r, "disk");
}

Region edge_footprint(const LatticeModel& model, const PresetParams& p, ParamList& used) {
  if (is_pi_flux(model)) {
    const int lx = p.lx.value_or(default_pi_flux_block(model.params().Lx, 47));
    const int ly = p.ly.value_or(default_pi_flux_block(model.params().Ly, 46));
    used.emplace_back("lx", lx);
    used.emplace_back("ly", ly);
    return complement(model, cell_block(model, lx, ly, "inner"), "band");
  }
  const double w = p.w.value_or(13.0);
  used.emplace_back("w", w);
  const double inradius = geometry::hull_inradius(model, model.center());
  if (!(w > 0.0) || w >= inradius)
    throw InvalidArgument("regions", fmt::format("edge width {} must lie in (0, {:.3f})", w, inradius));
  return edge_band(model, w, "band");
}

// Wedges [b_k, b_{k+1}) intersected with footprint, assigned cyclically to labels by pattern.
std::vector<Region> wedges(const LatticeModel& model, const Region& footprint, const std::vector<double>& bounds,
                           const std::vector<int>& pattern, const std::vector<std::string>& labels) {
  std::vector<Region> out;
  for (const auto& l : labels) out.push_back(Region::empty_of(model, l));
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const int which = pattern[k % pattern.size()];
    const Region s = region_intersect(sector(model, model.center(), bounds[k], bounds[k + 1]), footprint);
    out[std::size_t(which)] = region_union(out[std::size_t(which)], s).relabeled(labels[std::size_t(which)]);
  }
  return out;
}

std::vector<double> repeated_bounds(double theta0, const std::vector<double>& widths, int repeats) {
  double total = 0.0;
  for (double w : widths) {
    if (!(w > 0.0)) throw InvalidArgument("regions", "wedge widths must be positive");
    total += w;
  }
  if (std::abs(total * repeats - 2.0 * kPi) > 1e-9)
    throw InvalidArgument("regions", fmt::format("wedge widths sum to {:.6f} rad but must tile the circle in {} repeats",
                                                 total, repeats));
  std::vector<double> b{theta0};
  for (int k = 0; k < repeats; ++k)
    for (double w : widths) b.push_back(b.back() + w);
  b.back() = theta0 + 2.0 * kPi;
  return b;
}

Vec2 rim_point(const LatticeModel& model, double r, double angle) {
  return model.center() + r * Vec2(std::cos(angle), std::sin(angle));
}

Partition bulk_pizza(const LatticeModel& model, const PresetParams& p, bool doubled) {
  Partition part;
  const Region foot = bulk_footprint(model, p, 17.0, 15, 14, part.parameters);
  const double theta0 = p.theta0.value_or(0.0);
  part.parameters.emplace_back("theta0", theta0);
  const auto widths = p.widths.value_or(std::vector<double>{kPi / 3, kPi / 3, kPi / 3});
  const auto bounds = repeated_bounds(theta0, widths, 2);
  const std::vector<int> pattern = doubled ? std::vector<int>{0, 1, 2, 0, 1, 2} : std::vector<int>{0, 1, 2, 0, 2, 1};
  part.name = doubled ? "bulk_pizza_n2" : "bulk_pizza_n0";
  part.kind = PartitionKind::bulk;
  part.regions = wedges(model, foot, bounds, pattern, {"A", "B", "C"});
  part.complement_region = complement(model, foot, "D");
  part.junction_roles = {2, 3, 0};
  part.center = model.center();
  part.expected_n = doubled ? 2 : 0;
  if (p.balls) {
    part.junction_balls = *p.balls;
  } else if (doubled && !is_pi_flux(model)) {
    const double r = p.r.value_or(17.0);
    for (double a : {bounds[0], bounds[3]}) part.junction_balls.emplace_back(rim_point(model, r, a), 6.0, 9.0, 12.0);
  }
  return part;
}

Partition edge_pizza(const LatticeModel& model, const PresetParams& p, const std::string& name,
                     std::vector<double> default_widths, double default_theta0, int repeats,
                     std::vector<int> pattern, int expected) {
  Partition part;
  const Region band = edge_footprint(model, p, part.parameters);
  const auto widths = p.widths.value_or(default_widths);
  const double theta0 = p.theta0.value_or(default_theta0);
  part.parameters.emplace_back("theta0", theta0);
  const auto bounds = repeated_bounds(theta0, widths, repeats);
  part.name = name;
  part.kind = PartitionKind::edge;
  part.regions = wedges(model, band, bounds, pattern, {"X", "Y", "Z"});
  part.complement_region = complement(model, band, "W");
  part.band = band;
  part.junction_roles = {2, 3, 0};
  part.center = model.center();
  part.expected_n = expected;
  if (p.balls) part.junction_balls = *p.balls;
  return part;
}

Partition tripartite_disk(const LatticeModel& model, const PresetParams& p) {
  Partition part;
  const Region foot = bulk_footprint(model, p, 17.0, 15, 15, part.parameters);
  const double theta0 = p.theta0.value_or(is_pi_flux(model) ? 10.0 * kDeg : 0.0);
  part.parameters.emplace_back("theta0", theta0);
  const auto widths = p.widths.value_or(std::vector<double>{2 * kPi / 3, 2 * kPi / 3, 2 * kPi / 3});
  part.name = "tripartite_disk";
  part.kind = PartitionKind::bulk;
  part.regions = wedges(model, foot, repeated_bounds(theta0, widths, 1), {0, 1, 2}, {"A", "B", "C"});
  part.center = model.center();
  part.expected_n = 1;
  if (p.balls)
    part.junction_balls = *p.balls;
  else if (!is_pi_flux(model))
    part.junction_balls.emplace_back(model.center(), 4.0, 8.0, 12.0);
  return part;
}

Partition incomplete_disk(const LatticeModel& model, const PresetParams& p) {
  Partition part;
  const Region foot = bulk_footprint(model, p, 15.0, 15, 14, part.parameters);
  std::vector<double> rays;
  if (p.rays) {
    rays = *p.rays;
  } else if (p.symmetric) {
    rays = {-180.0 * kDeg, -80.0 * kDeg, 0.0, 80.0 * kDeg};
  } else {
    rays = {-90.0 * kDeg, -10.0 * kDeg, 60.0 * kDeg, 180.0 * kDeg};
  }
  if (rays.size() != 4) throw InvalidArgument("regions", "incomplete_disk needs exactly four ray angles");
  for (std::size_t i = 0; i + 1 < rays.size(); ++i)
    if (!(rays[i] < rays[i + 1])) throw InvalidArgument("regions", "incomplete_disk rays must increase");
  if (!(rays[3] < rays[0] + 2 * kPi)) throw InvalidArgument("regions", "incomplete_disk rays must span less than a turn");
  std::vector<double> bounds = rays;
  bounds.push_back(rays[0] + 2 * kPi);
  for (std::size_t i = 0; i < rays.size(); ++i) part.parameters.emplace_back("ray" + std::to_string(i), rays[i]);
  part.name = "incomplete_disk";
  part.kind = PartitionKind::bulk;
  part.regions = wedges(model, foot, bounds, {0, 1, 2, 3}, {"A", "B", "C", "D"});
  part.center = model.center();
  return part;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"tripartite_disk", "bulk_pizza_n2", "bulk_pizza_n0",
                                              "edge_pizza_n2",   "edge_pizza_alt", "edge_pizza_n3",
                                              "edge_pizza_n4",   "incomplete_disk"};
  return names;
}

Partition preset(const std::string& name, const LatticeModel& model, const PresetParams& p) {
  Partition part;
  if (name == "tripartite_disk") {
    part = tripartite_disk(model, p);
  } else if (name == "bulk_pizza_n2") {
    part = bulk_pizza(model, p, true);
  } else if (name == "bulk_pizza_n0") {
    part = bulk_pizza(model, p, false);
  } else if (name == "edge_pizza_n2") {
    part = edge_pizza(model, p, name, {kPi / 3, kPi / 3, kPi / 3}, 0.0, 2, {0, 1, 2, 0, 1, 2}, 2);
  } else if (name == "edge_pizza_alt") {
    part = edge_pizza(model, p, name, {kPi / 3, kPi / 3, kPi / 3}, 0.0, 2, {0, 1, 2, 0, 2, 1}, 0);
  } else if (name == "edge_pizza_n3") {
    part = edge_pizza(model, p, name, {30 * kDeg, 50 * kDeg, 40 * kDeg}, 7 * kDeg, 3, {0, 1, 2}, 3);
  } else if (name == "edge_pizza_n4") {
    part = edge_pizza(model, p, name, {30 * kDeg, 30 * kDeg, 30 * kDeg}, 7 * kDeg, 4, {0, 1, 2}, 4);
  } else if (name == "incomplete_disk") {
    part = incomplete_disk(model, p);
  } else {
    throw InvalidArgument("regions", "unknown preset '" + name + "'");
  }
  validate_partition(model, part);
  return part;
}

}  // namespace modcomm
