// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "latdecomp/errors.hpp"
#include "latdecomp/geometry.hpp"

namespace latdecomp {

namespace {

using IVec = std::array<std::int64_t, 3>;

Vec3 add(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 scale(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm2(const Vec3& a) { return dot(a, a); }

Vec3 to_vec(const IVec& p) {
  return {static_cast<double>(p[0]), static_cast<double>(p[1]), static_cast<double>(p[2])};
}

/// Continuous fluid region plus the planes that bound it. Voxels whose
/// centres lie inside are fluid.
struct Domain {
  std::function<bool(const Vec3&)> inside;
  std::vector<InOutletPlane> planes;  // in the local frame
  IVec scan_lo{};
  IVec scan_hi{};  // inclusive
  std::array<bool, 3> periodic{false, false, false};
  std::array<std::int64_t, 3> pad{0, 0, 0};
  std::uint32_t block_size = 8;
};

// Link exit search: coarse scan then bisection on the inside predicate.
constexpr int kScanSteps = 64;
constexpr int kBisections = 60;
constexpr double kPlaneTol = 1e-9;

double exit_fraction(const Domain& d, const Vec3& p, const Vec3& c) {
  double inside_t = 0.0;
  double outside_t = 1.0;
  bool found = false;
  for (int k = 1; k <= kScanSteps; ++k) {
    const double t = static_cast<double>(k) / kScanSteps;
    if (!d.inside(add(p, scale(c, t)))) {
      outside_t = t;
      found = true;
      break;
    }
    inside_t = t;
  }
  if (!found) return 1.0;
  for (int it = 0; it < kBisections; ++it) {
    const double mid = 0.5 * (inside_t + outside_t);
    if (d.inside(add(p, scale(c, mid)))) {
      inside_t = mid;
    } else {
      outside_t = mid;
    }
  }
  return 0.5 * (inside_t + outside_t);
}

/// Plane crossed by the segment p + t c at parameter t, if any.
const InOutletPlane* plane_at(const Domain& d, const Vec3& p, const Vec3& c, double t) {
  const Vec3 hit = add(p, scale(c, t));
  const InOutletPlane* best = nullptr;
  double best_dist = 0.0;
  for (const auto& plane : d.planes) {
    const double denom = dot(plane.normal, c);
    if (std::abs(denom) < 1e-12) continue;
    const double tp = dot(plane.normal, sub(plane.point, p)) / denom;
    if (std::abs(tp - t) > kPlaneTol) continue;
    const double dist = norm2(sub(hit, plane.point));
    if (!best || dist < best_dist) {
      best = &plane;
      best_dist = dist;
    }
  }
  return best;
}

Geometry voxelize(const Domain& d) {
  // Fluid voxels in (z, y, x) raster order.
  std::vector<IVec> fluid;
  for (auto z = d.scan_lo[2]; z <= d.scan_hi[2]; ++z) {
    for (auto y = d.scan_lo[1]; y <= d.scan_hi[1]; ++y) {
      for (auto x = d.scan_lo[0]; x <= d.scan_hi[0]; ++x) {
        if (d.inside(to_vec({x, y, z}))) fluid.push_back({x, y, z});
      }
    }
  }
  if (fluid.empty()) throw InvalidGeometryError("generator produced no fluid sites");

  IVec lo = fluid.front();
  IVec hi = fluid.front();
  for (const auto& p : fluid) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  IVec offset{};
  std::array<std::uint32_t, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    if (d.periodic[a]) {
      lo[a] = d.scan_lo[a];
      hi[a] = d.scan_hi[a];
    }
    offset[a] = d.pad[a] - lo[a];
    dims[a] = static_cast<std::uint32_t>(hi[a] - lo[a] + 1 + 2 * d.pad[a]);
  }

  auto to_coord = [&](const IVec& p) {
    return Coord{static_cast<std::uint32_t>(p[0] + offset[0]),
                 static_cast<std::uint32_t>(p[1] + offset[1]),
                 static_cast<std::uint32_t>(p[2] + offset[2])};
  };

  std::vector<Coord> coords;
  coords.reserve(fluid.size());
  for (const auto& p : fluid) coords.push_back(to_coord(p));
  const SiteLookup lookup(dims, coords);

  std::vector<Site> sites(fluid.size());
  for (std::size_t i = 0; i < fluid.size(); ++i) {
    const IVec& p = fluid[i];
    Site& s = sites[i];
    s.coord = coords[i];
    bool have_plane = false;
    for (std::size_t dir = 1; dir < d3q19::kQ; ++dir) {
      const auto& v = d3q19::kVelocity[dir];
      IVec n{p[0] + v[0], p[1] + v[1], p[2] + v[2]};
      bool in_box = true;
      for (int a = 0; a < 3; ++a) {
        if (d.periodic[a]) {
          const auto period = d.scan_hi[a] - d.scan_lo[a] + 1;
          n[a] = d.scan_lo[a] + (((n[a] - d.scan_lo[a]) % period) + period) % period;
        }
        const auto local = n[a] + offset[a];
        if (local < 0 || local >= static_cast<std::int64_t>(dims[a])) in_box = false;
      }
      if (in_box && lookup.find(to_coord(n))) continue;

      const Vec3 start = to_vec(p);
      const Vec3 c{static_cast<double>(v[0]), static_cast<double>(v[1]),
                   static_cast<double>(v[2])};
      const double t = exit_fraction(d, start, c);
      if (const InOutletPlane* plane = plane_at(d, start, c, t)) {
        if (have_plane && s.boundary_id != plane->id) {
          throw InvalidGeometryError("overlapping in/outlet planes " +
                                     std::to_string(s.boundary_id) + " and " +
                                     std::to_string(plane->id));
        }
        have_plane = true;
        s.boundary_id = plane->id;
        s.inoutlet_links |= 1u << (dir - 1);
      } else {
        // Keep wall links strictly inside (0, 1) after quantization.
        const double q = std::clamp(quantize_distance(t), 1.0 / 65535.0, 65534.0 / 65535.0);
        s.wall_distances[dir - 1] = q;
      }
    }
  }

  std::vector<InOutletPlane> planes = d.planes;
  for (auto& plane : planes) {
    plane.point = add(plane.point, to_vec(offset));
  }
  Geometry raw(dims, d.block_size, std::move(planes), std::move(sites), d.periodic);
  return classify_sites(raw);
}

}  // namespace

Geometry generate_cylinder(double radius, int length, Axis axis) {
  if (!(radius >= 1.0)) {
    throw InvalidGeometryError("cylinder radius must be >= 1 (got " + std::to_string(radius) + ")");
  }
  if (length < 2) {
    throw InvalidGeometryError("cylinder length must be >= 2 (got " + std::to_string(length) +
                               ")");
  }
  // Largest integer offset m with m^2 < r^2.
  const auto m = static_cast<std::int64_t>(std::ceil(radius)) - 1;
  const int ax = static_cast<int>(axis);
  const int u = (ax + 1) % 3;
  const int w = (ax + 2) % 3;
  const double r2 = radius * radius;
  const double top = static_cast<double>(length) - 0.5;

  Domain d;
  d.inside = [=](const Vec3& p) {
    const std::array<double, 3> a{p.x, p.y, p.z};
    return a[u] * a[u] + a[w] * a[w] < r2 && a[ax] > -0.5 && a[ax] < top;
  };
  d.scan_lo[ax] = 0;
  d.scan_hi[ax] = length - 1;
  d.scan_lo[u] = d.scan_lo[w] = -m;
  d.scan_hi[u] = d.scan_hi[w] = m;

  std::array<double, 3> in_pt{0, 0, 0}, out_pt{0, 0, 0}, in_n{0, 0, 0}, out_n{0, 0, 0};
  in_pt[ax] = -0.5;
  out_pt[ax] = top;
  in_n[ax] = -1.0;
  out_n[ax] = 1.0;
  auto v3 = [](const std::array<double, 3>& a) { return Vec3{a[0], a[1], a[2]}; };
  d.planes = {InOutletPlane{v3(in_pt), v3(in_n), 0}, InOutletPlane{v3(out_pt), v3(out_n), 1}};
  return voxelize(d);
}

Geometry generate_bifurcation(const BifurcationSpec& spec) {
  if (!(spec.trunk_radius >= 1.0) || !(spec.branch_radius >= 1.0)) {
    throw InvalidGeometryError("bifurcation radii must be >= 1");
  }
  if (!(spec.branch_angle_deg > 0.0 && spec.branch_angle_deg < 90.0)) {
    throw InvalidGeometryError("branch angle must lie in (0, 90) degrees");
  }
  if (spec.trunk_length < 2 || spec.branch_length < 2) {
    throw InvalidGeometryError("bifurcation lengths must be >= 2");
  }
  if (spec.pad < 0) throw InvalidGeometryError("pad must be non-negative");

  const double angle = spec.branch_angle_deg * std::numbers::pi / 180.0;
  const double rt = spec.trunk_radius;
  const double rb = spec.branch_radius;
  const double sin_a = std::sin(angle);
  const double cos_a = std::cos(angle);
  const double lb = spec.branch_length;
  const Vec3 junction{0.0, 0.0, static_cast<double>(spec.trunk_length)};
  const Vec3 dir_pos{sin_a, 0.0, cos_a};
  const Vec3 dir_neg{-sin_a, 0.0, cos_a};
  const double z_in = -0.5;
  const double z_out = junction.z + lb * cos_a;

  // The outlet cross-sections are ellipses of half-width rb / cos(a) in x.
  const double outlet_gap = 2.0 * lb * sin_a;
  if (outlet_gap <= 2.0 * rb / cos_a) {
    throw InvalidGeometryError("overlapping in/outlet planes: branch outlets intersect");
  }
  if (z_out - 1.0 <= junction.z + rt) {
    throw InvalidGeometryError("overlapping in/outlet planes: branches too short");
  }

  auto in_branch = [=](const Vec3& p, const Vec3& dir) {
    const Vec3 rel = sub(p, junction);
    const double along = dot(rel, dir);
    if (along < 0.0) return false;
    return norm2(sub(rel, scale(dir, along))) < rb * rb;
  };
  Domain d;
  d.inside = [=](const Vec3& p) {
    if (!(p.z > z_in && p.z < z_out)) return false;
    if (p.z <= junction.z && p.x * p.x + p.y * p.y < rt * rt) return true;
    if (norm2(sub(p, junction)) < rt * rt) return true;
    return in_branch(p, dir_pos) || in_branch(p, dir_neg);
  };
  const double half_x = lb * sin_a + rb / cos_a + rt;
  const auto ext_x = static_cast<std::int64_t>(std::ceil(half_x)) + 1;
  const auto ext_y = static_cast<std::int64_t>(std::ceil(std::max(rt, rb))) + 1;
  d.scan_lo = {-ext_x, -ext_y, 0};
  d.scan_hi = {ext_x, ext_y, static_cast<std::int64_t>(std::ceil(z_out))};
  d.block_size = spec.block_size;
  d.planes = {
      InOutletPlane{{0.0, 0.0, z_in}, {0.0, 0.0, -1.0}, 0},
      InOutletPlane{{lb * sin_a, 0.0, z_out}, {0.0, 0.0, 1.0}, 1},
      InOutletPlane{{-lb * sin_a, 0.0, z_out}, {0.0, 0.0, 1.0}, 2},
  };
  d.pad = {spec.pad, spec.pad, 0};
  Geometry g = voxelize(d);
  if (!spec.target_fluid_fraction) return g;

  const double target = *spec.target_fluid_fraction;
  if (!(target > 0.0 && target <= 1.0)) {
    throw InvalidGeometryError("target fluid fraction must lie in (0, 1]");
  }
  if (fluid_fraction(g) <= target) return g;
  // Smallest extra pad p with n / ((X + 2p)(Y + 2p) Z) <= target.
  const auto& dims = g.dims();
  const double n = static_cast<double>(g.size());
  std::int64_t extra = 0;
  while (n / (static_cast<double>(dims[0] + 2 * extra) * static_cast<double>(dims[1] + 2 * extra) *
              dims[2]) >
         target) {
    ++extra;
  }
  d.pad = {spec.pad + extra, spec.pad + extra, 0};
  return voxelize(d);
}

Geometry generate_channel(int length, int width, int depth, double wall_q) {
  if (length < 2 || width < 1 || depth < 1) {
    throw InvalidGeometryError("channel needs length >= 2, width >= 1, depth >= 1");
  }
  if (!(wall_q > 0.0 && wall_q < 1.0)) throw InvalidGeometryError("wall_q must lie in (0, 1)");
  const double x_hi = length - 0.5;
  const double y_lo = -wall_q;
  const double y_hi = (width - 1) + wall_q;
  Domain d;
  d.inside = [=](const Vec3& p) {
    return p.x > -0.5 && p.x < x_hi && p.y > y_lo && p.y < y_hi;
  };
  d.scan_lo = {0, 0, 0};
  d.scan_hi = {length - 1, width - 1, depth - 1};
  d.periodic = {false, false, true};
  d.planes = {InOutletPlane{{-0.5, 0.0, 0.0}, {-1.0, 0.0, 0.0}, 0},
              InOutletPlane{{x_hi, 0.0, 0.0}, {1.0, 0.0, 0.0}, 1}};
  return voxelize(d);
}

Geometry generate_closed_box(std::array<int, 3> dims, double wall_q) {
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) {
    throw InvalidGeometryError("box dimensions must be positive");
  }
  if (!(wall_q > 0.0 && wall_q < 1.0)) throw InvalidGeometryError("wall_q must lie in (0, 1)");
  Domain d;
  d.inside = [=](const Vec3& p) {
    const std::array<double, 3> a{p.x, p.y, p.z};
    for (int k = 0; k < 3; ++k) {
      if (!(a[k] > -wall_q && a[k] < dims[k] - 1 + wall_q)) return false;
    }
    return true;
  };
  d.scan_lo = {0, 0, 0};
  d.scan_hi = {dims[0] - 1, dims[1] - 1, dims[2] - 1};
  return voxelize(d);
}

Geometry generate_periodic_box(std::array<int, 3> dims) {
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) {
    throw InvalidGeometryError("box dimensions must be positive");
  }
  Domain d;
  d.inside = [](const Vec3&) { return true; };
  d.scan_lo = {0, 0, 0};
  d.scan_hi = {dims[0] - 1, dims[1] - 1, dims[2] - 1};
  d.periodic = {true, true, true};
  return voxelize(d);
}

}  // namespace latdecomp
