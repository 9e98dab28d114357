#include "modcomm/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "modcomm/errors.hpp"
#include "geometry.hpp"

namespace modcomm {

namespace {

void require_same_model(const Region& a, const Region& b) {
  if (a.model_id() != b.model_id() || a.model_size() != b.model_size())
    throw InvalidArgument("regions", "set operation on regions of different models");
}

Region make(const LatticeModel& model, IndexList sites, std::string label) {
  return Region(std::move(sites), std::move(label), model.size(), model.fingerprint());
}

template <class Pred>
Region select(const LatticeModel& model, std::string label, Pred pred) {
  IndexList out;
  for (const auto& s : model.sites())
    if (pred(s.position)) out.push_back(s.index);
  return make(model, std::move(out), std::move(label));
}

}  // namespace

Region::Region(IndexList sites, std::string label, int model_size, std::uint64_t model_id)
    : sites_(std::move(sites)), label_(std::move(label)), model_size_(model_size), model_id_(model_id) {
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
    throw InvalidArgument("regions", "duplicate site index in region " + label_);
  if (!sites_.empty() && (sites_.front() < 0 || sites_.back() >= model_size_))
    throw InvalidArgument("regions", fmt::format("site index out of range 0..{} in region {}",
                                                 model_size_ - 1, label_));
}

Region Region::empty_of(const LatticeModel& model, std::string label) {
  return make(model, {}, std::move(label));
}

Region Region::from_sites(const LatticeModel& model, IndexList sites, std::string label) {
  return make(model, std::move(sites), std::move(label));
}

bool Region::contains(int site) const { return std::binary_search(sites_.begin(), sites_.end(), site); }

Region Region::relabeled(std::string label) const {
  Region r = *this;
  r.label_ = std::move(label);
  return r;
}

Region all_sites(const LatticeModel& model, std::string label) {
  return select(model, std::move(label), [](const Vec2&) { return true; });
}

Region sector(const LatticeModel& model, const Vec2& center, double theta1, double theta2,
              std::string label) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double tol = 1e-12;
  const double width = theta2 - theta1;
  if (width >= two_pi) return all_sites(model, std::move(label));
  if (width <= 0.0) return make(model, {}, std::move(label));
  return select(model, std::move(label), [&](const Vec2& p) {
    const Vec2 d = p - center;
    double rel = std::fmod(std::atan2(d.y(), d.x()) - theta1, two_pi);
    if (rel < 0.0) rel += two_pi;
    if (rel > two_pi - tol) rel = 0.0;
    return rel < width - tol;
  });
}

Region disk(const LatticeModel& model, const Vec2& center, double radius, std::string label) {
  const double r2 = radius * radius * (1.0 + 1e-12);
  return select(model, std::move(label), [&](const Vec2& p) { return (p - center).squaredNorm() <= r2; });
}

Region rectangle(const LatticeModel& model, const Vec2& lo, const Vec2& hi, std::string label) {
  constexpr double tol = 1e-12;
  return select(model, std::move(label), [&](const Vec2& p) {
    return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= lo.y() - tol &&
           p.y() <= hi.y() + tol;
  });
}

Region edge_band(const LatticeModel& model, double w, std::string label) {
  if (!(w > 0.0)) throw InvalidArgument("regions", "edge_band needs w > 0");
  const auto hull = geometry::convex_hull(model);
  return select(model, std::move(label),
                [&](const Vec2& p) { return geometry::distance_to_polygon(hull, p) <= w + 1e-9; });
}

Region region_union(const Region& a, const Region& b) {
  require_same_model(a, b);
  IndexList out;
  std::set_union(a.sites().begin(), a.sites().end(), b.sites().begin(), b.sites().end(),
                 std::back_inserter(out));
  return Region(std::move(out), a.label(), a.model_size(), a.model_id());
}

Region region_intersect(const Region& a, const Region& b) {
  require_same_model(a, b);
  IndexList out;
  std::set_intersection(a.sites().begin(), a.sites().end(), b.sites().begin(), b.sites().end(),
                        std::back_inserter(out));
  return Region(std::move(out), a.label(), a.model_size(), a.model_id());
}

Region region_subtract(const Region& a, const Region& b) {
  require_same_model(a, b);
  IndexList out;
  std::set_difference(a.sites().begin(), a.sites().end(), b.sites().begin(), b.sites().end(),
                      std::back_inserter(out));
  return Region(std::move(out), a.label(), a.model_size(), a.model_id());
}

Region region_union(const std::vector<Region>& parts, std::string label) {
  if (parts.empty()) throw InvalidArgument("regions", "union of no regions");
  Region out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = region_union(out, parts[i]);
  return out.relabeled(std::move(label));
}

Region complement(const LatticeModel& model, const Region& r, std::string label) {
  return region_subtract(all_sites(model), r).relabeled(std::move(label));
}

double min_distance(const LatticeModel& model, const Region& a, const Region& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int i : a.sites())
    for (int j : b.sites()) best = std::min(best, (model.position(i) - model.position(j)).squaredNorm());
  return std::sqrt(best);
}

const char* to_string(PartitionKind kind) noexcept { return kind == PartitionKind::bulk ? "bulk" : "edge"; }

JunctionBall::JunctionBall(Vec2 c, double rb, double rd1, double rd2)
    : center(std::move(c)), inner_radius(rb), mid_radius(rd1), outer_radius(rd2) {
  if (!(0.0 < rb && rb < rd1 && rd1 < rd2))
    throw InvalidArgument("regions", fmt::format("junction ball radii must satisfy 0 < r_b < r_d1 < r_d2, got {}, {}, {}",
                                                 rb, rd1, rd2));
}

std::vector<Region> Partition::junction_regions() const {
  std::vector<Region> out = regions;
  if (complement_region) out.push_back(*complement_region);
  return out;
}

PartitionDiagnostics diagnose_partition(const LatticeModel& model, const Partition& p) {
  PartitionDiagnostics d;
  const double adjacency = 1.01 * model.lattice_constant();
  for (std::size_t i = 0; i < p.regions.size(); ++i) {
    const auto& r = p.regions[i];
    if (r.model_id() != model.fingerprint())
      throw InvalidArgument("regions", "partition region " + r.label() + " belongs to another model");
    d.counts.push_back(r.size());
    d.labels.push_back(r.label());
    if (p.band && !region_subtract(r, *p.band).empty()) d.inside_band = false;
    for (std::size_t j = i + 1; j < p.regions.size(); ++j) {
      if (!region_intersect(r, p.regions[j]).empty()) {
        d.overlaps.emplace_back(int(i), int(j));
        continue;
      }
      const double dist = min_distance(model, r, p.regions[j]);
      if (dist > adjacency) d.min_nonadjacent_distance = std::min(d.min_nonadjacent_distance, dist);
    }
  }
  d.valid = d.overlaps.empty() && d.inside_band;
  return d;
}

PartitionDiagnostics validate_partition(const LatticeModel& model, const Partition& p) {
  auto d = diagnose_partition(model, p);
  if (!d.overlaps.empty()) {
    const auto [i, j] = d.overlaps.front();
    throw InvalidPartition("regions", fmt::format("regions {} and {} of partition '{}' overlap",
                                                  p.regions[std::size_t(i)].label(),
                                                  p.regions[std::size_t(j)].label(), p.name));
  }
  if (!d.inside_band)
    throw InvalidPartition("regions", fmt::format("edge partition '{}' has sites outside its band", p.name));
  return d;
}

}  // namespace modcomm
