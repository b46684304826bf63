// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latdecomp/d3q19.hpp"

namespace latdecomp {

struct Coord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Orders coordinates with z slowest and x fastest; the default site order.
inline bool raster_less(const Coord& a, const Coord& b) noexcept {
  if (a.z != b.z) return a.z < b.z;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class SiteType : std::uint8_t { Bulk = 0, Wall = 1, InOutlet = 2, WallInOutlet = 3 };
inline constexpr std::size_t kSiteTypeCount = 4;
inline constexpr std::array<SiteType, kSiteTypeCount> kAllSiteTypes{
    SiteType::Bulk, SiteType::Wall, SiteType::InOutlet, SiteType::WallInOutlet};

/// Short lowercase names shared by every text format: bulk, wall, inout, wallinout.
std::string_view site_type_name(SiteType t) noexcept;
std::optional<SiteType> parse_site_type(std::string_view name) noexcept;

constexpr std::size_t index_of(SiteType t) noexcept { return static_cast<std::size_t>(t); }
constexpr bool touches_inoutlet(SiteType t) noexcept {
  return t == SiteType::InOutlet || t == SiteType::WallInOutlet;
}
constexpr bool touches_wall(SiteType t) noexcept {
  return t == SiteType::Wall || t == SiteType::WallInOutlet;
}

using SiteTypeCounts = std::array<std::size_t, kSiteTypeCount>;

/// One fluid lattice site.
///
/// `wall_distances[i - 1]` is the fraction q of link i (D3Q19 direction i)
/// between the site centre and the wall; 1.0 means the link hits no wall.
/// `inoutlet_links` has bit `i - 1` set when link i leaves through an
/// in/outlet plane, in which case `boundary_id` names that plane.
struct Site {
  Coord coord;
  SiteType type = SiteType::Bulk;
  std::uint16_t boundary_id = 0;
  std::array<double, d3q19::kLinks> wall_distances = filled_distances();
  std::uint32_t inoutlet_links = 0;

  bool crosses_wall() const noexcept;
  bool crosses_inoutlet() const noexcept { return inoutlet_links != 0; }

  friend bool operator==(const Site&, const Site&) = default;

 private:
  static constexpr std::array<double, d3q19::kLinks> filled_distances() {
    std::array<double, d3q19::kLinks> q{};
    q.fill(1.0);
    return q;
  }
};

struct InOutletPlane {
  Vec3 point;
  Vec3 normal;  ///< points out of the fluid
  std::uint16_t id = 0;

  friend bool operator==(const InOutletPlane&, const InOutletPlane&) = default;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Coordinate -> site index map. Dense for modest boxes, hashed otherwise.
class SiteLookup {
 public:
  SiteLookup() = default;
  SiteLookup(const std::array<std::uint32_t, 3>& dims, std::span<const Coord> coords);

  std::optional<std::size_t> find(const Coord& c) const;
  /// Index of the first coordinate that appeared twice, if any.
  std::optional<std::size_t> first_duplicate() const noexcept { return duplicate_; }

 private:
  std::uint64_t linear(const Coord& c) const noexcept {
    return (static_cast<std::uint64_t>(c.z) * dims_[1] + c.y) * dims_[0] + c.x;
  }

  std::array<std::uint32_t, 3> dims_{};
  std::vector<std::int32_t> dense_;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
  bool use_dense_ = true;
  std::optional<std::size_t> duplicate_;
};

/// Sparse voxel lattice. Immutable after construction.
class Geometry {
 public:
  Geometry() = default;

  /// Validates coordinates (in bounds, unique), block size and plane ids;
  /// throws InvalidGeometryError otherwise. `periodic` is a runtime property
  /// used by the LB kernel and generators and is not persisted to disk.
  Geometry(std::array<std::uint32_t, 3> dims, std::uint32_t block_size,
           std::vector<InOutletPlane> planes, std::vector<Site> sites,
           std::array<bool, 3> periodic = {false, false, false});

  const std::array<std::uint32_t, 3>& dims() const noexcept { return dims_; }
  std::uint32_t block_size() const noexcept { return block_size_; }
  const std::vector<InOutletPlane>& planes() const noexcept { return planes_; }
  const std::vector<Site>& sites() const noexcept { return sites_; }
  const std::array<bool, 3>& periodic() const noexcept { return periodic_; }

  std::size_t size() const noexcept { return sites_.size(); }
  const Site& site(std::size_t i) const { return sites_.at(i); }
  std::uint64_t volume() const noexcept {
    return static_cast<std::uint64_t>(dims_[0]) * dims_[1] * dims_[2];
  }

  std::optional<std::size_t> find(const Coord& c) const { return lookup_.find(c); }

  /// Fluid neighbour of site i along D3Q19 direction `dir`, wrapping on
  /// periodic axes.
  std::optional<std::size_t> neighbour(std::size_t i, std::size_t dir) const;

  SiteTypeCounts type_counts() const noexcept;

  friend bool operator==(const Geometry& a, const Geometry& b) {
    return a.dims_ == b.dims_ && a.block_size_ == b.block_size_ && a.planes_ == b.planes_ &&
           a.sites_ == b.sites_ && a.periodic_ == b.periodic_;
  }

 private:
  std::array<std::uint32_t, 3> dims_{0, 0, 0};
  std::uint32_t block_size_ = 8;
  std::vector<InOutletPlane> planes_;
  std::vector<Site> sites_;
  std::array<bool, 3> periodic_{false, false, false};
  SiteLookup lookup_;
};

/// Assigns types from the recorded link crossings: Bulk when nothing is
/// crossed, Wall / InOutlet when only one kind is, WallInOutlet when both are.
/// Idempotent.
Geometry classify_sites(const Geometry& raw);

/// |sites| / bounding-box volume.
double fluid_fraction(const Geometry& g);

/// Quantizes q to the 16-bit grid used by the geometry file.
double quantize_distance(double q) noexcept;

// ---------------------------------------------------------------------------
// Synthetic generators. All produce classified geometries with sites in
// ascending (z, y, x) order and wall distances already on the 16-bit grid.

/// Capped cylinder. The axis runs through voxel centres; voxels with in-plane
/// squared distance < radius^2 are fluid. In/outlet planes (ids 0 and 1) sit
/// half a lattice spacing beyond the first and last layers.
Geometry generate_cylinder(double radius, int length, Axis axis = Axis::Z);

struct BifurcationSpec {
  double trunk_radius = 3.0;
  double branch_radius = 2.0;
  double branch_angle_deg = 30.0;  ///< angle of each branch to the trunk axis
  int trunk_length = 24;
  int branch_length = 24;
  /// Empty margin added on each side in x and y.
  int pad = 0;
  /// When set, grows `pad` until the fluid fraction drops to this value.
  std::optional<double> target_fluid_fraction;
  std::uint32_t block_size = 8;
};

/// Y-shaped union of a trunk and two symmetric branches in the x-z plane.
/// Plane 0 is the inlet at the trunk base, planes 1 and 2 the branch outlets.
Geometry generate_bifurcation(const BifurcationSpec& spec);

/// Plane channel for kernel validation: flow along x between walls normal to
/// y, periodic in z. The walls sit `wall_q` beyond the first and last fluid
/// rows; in/outlet planes 0 and 1 cap the x ends.
Geometry generate_channel(int length, int width, int depth, double wall_q = 0.5);

/// Box of fluid enclosed by walls at distance `wall_q` on every face.
Geometry generate_closed_box(std::array<int, 3> dims, double wall_q = 0.5);

/// Fully periodic box; every site is Bulk.
Geometry generate_periodic_box(std::array<int, 3> dims);

// ---------------------------------------------------------------------------
// Geometry file (little-endian, versioned). See README for the layout.

void write_geometry(std::ostream& out, const Geometry& g);
Geometry read_geometry(std::istream& in);
void save_geometry(const Geometry& g, const std::filesystem::path& path);
Geometry load_geometry(const std::filesystem::path& path);

}  // namespace latdecomp
