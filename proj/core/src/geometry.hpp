#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "modcomm/lattice.hpp"

namespace modcomm::geometry {

// Counterclockwise convex hull of all site positions.
std::vector<Vec2> convex_hull(const LatticeModel& model);
double distance_to_polygon(const std::vector<Vec2>& polygon, const Vec2& p);
// Distance from p to the hull boundary when p is inside, used for size checks.
double hull_inradius(const LatticeModel& model, const Vec2& p);

// Uniform bucket grid over site positions for nearest-site queries.
class SiteGrid {
 public:
  SiteGrid(const LatticeModel& model, double cell);
  // Index of the nearest site within max_dist, or -1.
  int nearest(const Vec2& p, double max_dist) const;
  template <class F>
  void for_each_within(const Vec2& p, double radius, F&& f) const;
  const Vec2& lo() const { return lo_; }
  const Vec2& hi() const { return hi_; }

 private:
  const LatticeModel* model_;
  double cell_;
  Vec2 lo_;
  Vec2 hi_;
  int nx_;
  int ny_;
  std::vector<std::vector<int>> buckets_;
};

template <class F>
void SiteGrid::for_each_within(const Vec2& p, double radius, F&& f) const {
  const int span = static_cast<int>(std::ceil(radius / cell_));
  const int cx = static_cast<int>(std::floor((p.x() - lo_.x()) / cell_));
  const int cy = static_cast<int>(std::floor((p.y() - lo_.y()) / cell_));
  const double r2 = radius * radius;
  for (int ix = std::max(0, cx - span); ix <= std::min(nx_ - 1, cx + span); ++ix)
    for (int iy = std::max(0, cy - span); iy <= std::min(ny_ - 1, cy + span); ++iy)
      for (int s : buckets_[std::size_t(ix * ny_ + iy)])
        if ((model_->position(s) - p).squaredNorm() <= r2) f(s);
}

}  // namespace modcomm::geometry
