#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modcomm/lattice.hpp"

namespace modcomm {

// Sorted, duplicate-free set of site indices tied to one model.
class Region {
 public:
  Region() = default;
  Region(IndexList sites, std::string label, int model_size, std::uint64_t model_id);
  static Region empty_of(const LatticeModel& model, std::string label = "");
  static Region from_sites(const LatticeModel& model, IndexList sites, std::string label = "");

  const IndexList& sites() const noexcept { return sites_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }
  bool contains(int site) const;
  int model_size() const noexcept { return model_size_; }
  std::uint64_t model_id() const noexcept { return model_id_; }
  Region relabeled(std::string label) const;

  bool operator==(const Region& o) const { return sites_ == o.sites_ && model_id_ == o.model_id_; }

 private:
  IndexList sites_;
  std::string label_;
  int model_size_ = 0;
  std::uint64_t model_id_ = 0;
};

Region all_sites(const LatticeModel& model, std::string label = "");
// Half-open wedge [theta1, theta2) counterclockwise about center; a width of
// 2 pi or more selects every site.
Region sector(const LatticeModel& model, const Vec2& center, double theta1, double theta2,
              std::string label = "");
Region disk(const LatticeModel& model, const Vec2& center, double radius, std::string label = "");
Region rectangle(const LatticeModel& model, const Vec2& corner_lo, const Vec2& corner_hi,
                 std::string label = "");
// Sites within distance w of the boundary of the convex hull of all sites.
Region edge_band(const LatticeModel& model, double w, std::string label = "");

Region region_union(const Region& a, const Region& b);
Region region_intersect(const Region& a, const Region& b);
Region region_subtract(const Region& a, const Region& b);
Region region_union(const std::vector<Region>& parts, std::string label = "");
Region complement(const LatticeModel& model, const Region& r, std::string label = "");

double min_distance(const LatticeModel& model, const Region& a, const Region& b);

enum class PartitionKind { bulk, edge };
const char* to_string(PartitionKind kind) noexcept;

struct JunctionBall {
  Vec2 center = Vec2::Zero();
  double inner_radius = 0.0;  // r_b
  double mid_radius = 0.0;    // r_d1
  double outer_radius = 0.0;  // r_d2

  JunctionBall() = default;
  JunctionBall(Vec2 c, double rb, double rd1, double rd2);
};

// Roles of the three regions whose modular commutator is measured; indices
// into Partition::regions.
struct Roles {
  int u = 0;
  int v = 1;
  int w = 2;
};

struct Partition {
  std::string name;
  PartitionKind kind = PartitionKind::bulk;
  std::vector<Region> regions;
  std::vector<JunctionBall> junction_balls;
  Roles roles;
  // Roles used for junction counting; differ from `roles` when the
  // complement of the covered area takes part in the count.
  Roles junction_roles;
  std::optional<Region> complement_region;
  std::optional<Region> band;
  Vec2 center = Vec2::Zero();
  std::optional<int> expected_n;
  // Resolved geometric parameters (r, w, lx, ly, theta0, ...), for records.
  std::vector<std::pair<std::string, double>> parameters;

  const Region& u() const { return regions.at(static_cast<std::size_t>(roles.u)); }
  const Region& v() const { return regions.at(static_cast<std::size_t>(roles.v)); }
  const Region& w() const { return regions.at(static_cast<std::size_t>(roles.w)); }
  // Regions used for junction analysis, with the complement appended when present.
  std::vector<Region> junction_regions() const;
};

struct PartitionDiagnostics {
  bool valid = true;
  std::vector<std::pair<int, int>> overlaps;
  std::vector<std::size_t> counts;
  std::vector<std::string> labels;
  bool inside_band = true;
  double min_nonadjacent_distance = std::numeric_limits<double>::infinity();
};

// Never throws on overlap; see validate_partition.
PartitionDiagnostics diagnose_partition(const LatticeModel& model, const Partition& p);
// Throws InvalidPartition on overlapping regions or band violations.
PartitionDiagnostics validate_partition(const LatticeModel& model, const Partition& p);

struct PresetParams {
  std::optional<double> r;
  std::optional<double> w;
  std::optional<double> theta0;               // rotation of the layout, radians
  std::optional<std::vector<double>> widths;  // wedge widths of one X,Y,Z triple, radians
  std::optional<int> lx;
  std::optional<int> ly;
  std::optional<std::vector<double>> rays;    // incomplete disk: four ray angles, radians
  bool symmetric = true;
  std::optional<std::vector<JunctionBall>> balls;
};

Partition preset(const std::string& name, const LatticeModel& model, const PresetParams& params = {});
const std::vector<std::string>& preset_names();

struct TriJunction {
  Vec2 position = Vec2::Zero();
  std::vector<std::string> labels;
  bool complete = false;
  int orientation = 0;
};

struct JunctionOptions {
  double detection_radius = 2.0;  // lattice constants
  double ring_radius = 3.0;       // lattice constants
  int ring_samples = 72;
  double grid_step = 0.5;         // lattice constants
  double cover_radius = 0.8;      // lattice constants
};

std::vector<TriJunction> find_trijunctions(const LatticeModel& model, const Partition& p,
                                           const JunctionOptions& opts = {});
int predict_geometric_integer(const LatticeModel& model, const Partition& p,
                              const JunctionOptions& opts = {});

}  // namespace modcomm
