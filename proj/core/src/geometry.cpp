// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latdecomp/errors.hpp"

namespace latdecomp {

namespace {

// Dense lookup up to 128M voxels (512 MiB of indices).
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 27;

std::string coord_string(const Coord& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

}  // namespace

std::string_view site_type_name(SiteType t) noexcept {
  switch (t) {
    case SiteType::Bulk: return "bulk";
    case SiteType::Wall: return "wall";
    case SiteType::InOutlet: return "inout";
    case SiteType::WallInOutlet: return "wallinout";
  }
  return "?";
}

std::optional<SiteType> parse_site_type(std::string_view name) noexcept {
  for (auto t : kAllSiteTypes) {
    if (site_type_name(t) == name) return t;
  }
  return std::nullopt;
}

bool Site::crosses_wall() const noexcept {
  return std::any_of(wall_distances.begin(), wall_distances.end(),
                     [](double q) { return q < 1.0; });
}

SiteLookup::SiteLookup(const std::array<std::uint32_t, 3>& dims, std::span<const Coord> coords)
    : dims_(dims) {
  const std::uint64_t volume = static_cast<std::uint64_t>(dims[0]) * dims[1] * dims[2];
  use_dense_ = volume <= kDenseLimit;
  if (use_dense_) {
    dense_.assign(volume, -1);
  } else {
    sparse_.reserve(coords.size());
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto key = linear(coords[i]);
    if (use_dense_) {
      if (dense_[key] >= 0) {
        if (!duplicate_) duplicate_ = i;
        continue;
      }
      dense_[key] = static_cast<std::int32_t>(i);
    } else if (!sparse_.emplace(key, static_cast<std::uint32_t>(i)).second && !duplicate_) {
      duplicate_ = i;
    }
  }
}

std::optional<std::size_t> SiteLookup::find(const Coord& c) const {
  if (c.x >= dims_[0] || c.y >= dims_[1] || c.z >= dims_[2]) return std::nullopt;
  const auto key = linear(c);
  if (use_dense_) {
    const auto v = dense_[key];
    if (v < 0) return std::nullopt;
    return static_cast<std::size_t>(v);
  }
  auto it = sparse_.find(key);
  if (it == sparse_.end()) return std::nullopt;
  return it->second;
}

Geometry::Geometry(std::array<std::uint32_t, 3> dims, std::uint32_t block_size,
                   std::vector<InOutletPlane> planes, std::vector<Site> sites,
                   std::array<bool, 3> periodic)
    : dims_(dims),
      block_size_(block_size),
      planes_(std::move(planes)),
      sites_(std::move(sites)),
      periodic_(periodic) {
  if (block_size_ == 0) throw InvalidGeometryError("block size must be positive");
  if (sites_.empty()) throw InvalidGeometryError("geometry has no fluid sites");
  if (sites_.size() > static_cast<std::size_t>(INT32_MAX)) {
    throw InvalidGeometryError("too many sites for 32-bit indices");
  }
  for (const auto& s : sites_) {
    if (s.coord.x >= dims_[0] || s.coord.y >= dims_[1] || s.coord.z >= dims_[2]) {
      throw InvalidGeometryError("site " + coord_string(s.coord) + " outside bounding box");
    }
    for (double q : s.wall_distances) {
      if (!(q >= 0.0 && q <= 1.0)) {
        throw InvalidGeometryError("wall distance outside [0,1] at " + coord_string(s.coord));
      }
    }
    if (touches_inoutlet(s.type) || s.crosses_inoutlet()) {
      const bool known = std::any_of(planes_.begin(), planes_.end(),
                                     [&](const auto& p) { return p.id == s.boundary_id; });
      if (!known) {
        throw InvalidGeometryError("site " + coord_string(s.coord) +
                                   " references undeclared in/outlet " +
                                   std::to_string(s.boundary_id));
      }
    }
  }
  std::vector<Coord> coords;
  coords.reserve(sites_.size());
  for (const auto& s : sites_) coords.push_back(s.coord);
  lookup_ = SiteLookup(dims_, coords);
  if (auto dup = lookup_.first_duplicate()) {
    throw InvalidGeometryError("duplicate site " + coord_string(sites_[*dup].coord));
  }
}

std::optional<std::size_t> Geometry::neighbour(std::size_t i, std::size_t dir) const {
  const auto& c = sites_.at(i).coord;
  const auto& v = d3q19::kVelocity[dir];
  const std::array<std::uint32_t, 3> p{c.x, c.y, c.z};
  std::array<std::uint32_t, 3> n{};
  for (int d = 0; d < 3; ++d) {
    std::int64_t x = static_cast<std::int64_t>(p[d]) + v[d];
    if (periodic_[d]) {
      const std::int64_t period = dims_[d];
      x = ((x % period) + period) % period;
    } else if (x < 0 || x >= static_cast<std::int64_t>(dims_[d])) {
      return std::nullopt;
    }
    n[d] = static_cast<std::uint32_t>(x);
  }
  return lookup_.find(Coord{n[0], n[1], n[2]});
}

SiteTypeCounts Geometry::type_counts() const noexcept {
  SiteTypeCounts counts{};
  for (const auto& s : sites_) ++counts[index_of(s.type)];
  return counts;
}

Geometry classify_sites(const Geometry& raw) {
  std::vector<Site> sites = raw.sites();
  for (auto& s : sites) {
    const bool wall = s.crosses_wall();
    const bool io = s.crosses_inoutlet();
    if (wall && io) {
      s.type = SiteType::WallInOutlet;
    } else if (io) {
      s.type = SiteType::InOutlet;
    } else if (wall) {
      s.type = SiteType::Wall;
    } else {
      s.type = SiteType::Bulk;
    }
    if (!io) s.boundary_id = 0;
  }
  return Geometry(raw.dims(), raw.block_size(), raw.planes(), std::move(sites), raw.periodic());
}

double fluid_fraction(const Geometry& g) {
  return static_cast<double>(g.size()) / static_cast<double>(g.volume());
}

double quantize_distance(double q) noexcept {
  const double clamped = std::clamp(q, 0.0, 1.0);
  return std::round(clamped * 65535.0) / 65535.0;
}

}  // namespace latdecomp
