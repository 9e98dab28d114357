#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modcomm::geometry {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Vec2> convex_hull(const LatticeModel& model) {
  std::vector<Vec2> pts;
  for (const auto& s : model.sites()) pts.push_back(s.position);
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-12) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double distance_to_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return (p - poly[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const Vec2 e = b - a;
    const double t = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (p - (a + t * e)).norm());
  }
  return best;
}

double hull_inradius(const LatticeModel& model, const Vec2& p) {
  return distance_to_polygon(convex_hull(model), p);
}

SiteGrid::SiteGrid(const LatticeModel& model, double cell) : model_(&model), cell_(cell) {
  lo_ = Vec2::Constant(std::numeric_limits<double>::infinity());
  hi_ = -lo_;
  for (const auto& s : model.sites()) {
    lo_ = lo_.cwiseMin(s.position);
    hi_ = hi_.cwiseMax(s.position);
  }
  nx_ = static_cast<int>(std::floor((hi_.x() - lo_.x()) / cell_)) + 1;
  ny_ = static_cast<int>(std::floor((hi_.y() - lo_.y()) / cell_)) + 1;
  buckets_.resize(std::size_t(nx_) * std::size_t(ny_));
  for (const auto& s : model.sites()) {
    const int ix = static_cast<int>(std::floor((s.position.x() - lo_.x()) / cell_));
    const int iy = static_cast<int>(std::floor((s.position.y() - lo_.y()) / cell_));
    buckets_[std::size_t(ix * ny_ + iy)].push_back(s.index);
  }
}

int SiteGrid::nearest(const Vec2& p, double max_dist) const {
  int best = -1;
  double best_d2 = max_dist * max_dist;
  for_each_within(p, max_dist, [&](int s) {
    const double d2 = (model_->position(s) - p).squaredNorm();
    if (d2 <= best_d2 && (best < 0 || d2 < best_d2 || s < best)) {
      best = s;
      best_d2 = d2;
    }
  });
  return best;
}

}  // namespace modcomm::geometry
