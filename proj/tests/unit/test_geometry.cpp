// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "latdecomp/d3q19.hpp"
#include "latdecomp/errors.hpp"
#include "latdecomp/geometry.hpp"
#include "oracles.hpp"

namespace latdecomp {
namespace {

Site make_site(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  Site s;
  s.coord = {x, y, z};
  return s;
}

std::size_t count_distinct_plane_ids(const Geometry& g) {
  std::set<std::uint16_t> ids;
  for (const auto& s : g.sites()) {
    if (touches_inoutlet(s.type)) ids.insert(s.boundary_id);
  }
  return ids.size();
}

TEST(D3Q19, WeightsSumToOneAndOppositesReverse) {
  double sum = 0.0;
  for (auto w : d3q19::kWeight) sum += w;
  EXPECT_DOUBLE_EQ(sum, 1.0);
  for (std::size_t i = 0; i < d3q19::kQ; ++i) {
    const auto j = d3q19::opposite(i);
    EXPECT_EQ(d3q19::kOpposite[i], j);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(d3q19::kVelocity[i][k], -d3q19::kVelocity[j][k]);
  }
}

TEST(D3Q19, SecondMomentIsotropic) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double m = 0.0;
      for (std::size_t i = 0; i < d3q19::kQ; ++i) {
        m += d3q19::kWeight[i] * d3q19::kVelocity[i][a] * d3q19::kVelocity[i][b];
      }
      EXPECT_NEAR(m, a == b ? d3q19::kCs2 : 0.0, 1e-15);
    }
  }
}

TEST(D3Q19, DiagonalsFollowAxisPairs) {
  const std::array<std::array<int, 3>, 7> axes{{{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                                {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (std::size_t i = 0; i < axes.size(); ++i) EXPECT_EQ(d3q19::kVelocity[i], axes[i]);
  for (std::size_t i = 7; i < d3q19::kQ; ++i) {
    int nonzero = 0;
    for (int v : d3q19::kVelocity[i]) nonzero += v != 0;
    EXPECT_EQ(nonzero, 2);
  }
}

TEST(Cylinder, UnitRadiusIsSingleColumnOfBoundarySites) {
  const auto g = generate_cylinder(1.0, 4);
  ASSERT_EQ(g.size(), 4u);
  for (const auto& s : g.sites()) {
    EXPECT_EQ(s.coord.x, g.sites()[0].coord.x);
    EXPECT_EQ(s.coord.y, g.sites()[0].coord.y);
    EXPECT_TRUE(s.type == SiteType::Wall || s.type == SiteType::WallInOutlet);
  }
}

TEST(Cylinder, FluidCountMatchesVoxelOracle) {
  for (double r : {1.0, 1.5, 2.5, 3.2, 4.0, 6.7}) {
    for (int len : {2, 5, 16}) {
      EXPECT_EQ(generate_cylinder(r, len).size(), oracle::cylinder_voxel_count(r, len))
          << "radius " << r << " length " << len;
    }
  }
}

TEST(Cylinder, FluidCountMonotoneInRadius) {
  std::size_t prev = 0;
  for (double r = 1.0; r <= 8.0; r += 0.25) {
    const auto n = generate_cylinder(r, 6).size();
    EXPECT_GE(n, prev) << "radius " << r;
    prev = n;
  }
}

TEST(Cylinder, AxisChoiceOnlyRotates) {
  const auto z = generate_cylinder(3.5, 7, Axis::Z);
  const auto x = generate_cylinder(3.5, 7, Axis::X);
  EXPECT_EQ(z.size(), x.size());
  EXPECT_EQ(z.type_counts(), x.type_counts());
}

TEST(Cylinder, RejectsBadParameters) {
  EXPECT_THROW(generate_cylinder(0.5, 4), InvalidGeometryError);
  EXPECT_THROW(generate_cylinder(2.0, 1), InvalidGeometryError);
}

TEST(Cylinder, EndSitesTouchTheirPlanes) {
  const auto g = generate_cylinder(4.0, 10);
  EXPECT_EQ(g.planes().size(), 2u);
  for (const auto& s : g.sites()) {
    const bool end = s.coord.z == 0 || s.coord.z == g.dims()[2] - 1;
    EXPECT_EQ(touches_inoutlet(s.type), end);
    if (end) EXPECT_EQ(s.boundary_id, s.coord.z == 0 ? 0 : 1);
  }
}

TEST(Bifurcation, ConnectedWithThreePlanes) {
  BifurcationSpec spec;
  spec.trunk_radius = 3;
  spec.branch_radius = 2;
  spec.branch_angle_deg = 30;
  const auto g = generate_bifurcation(spec);
  EXPECT_EQ(count_distinct_plane_ids(g), 3u);
  EXPECT_EQ(g.planes().size(), 3u);

  std::size_t inlet = g.size();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (touches_inoutlet(g.site(i).type) && g.site(i).boundary_id == 0) {
      inlet = i;
      break;
    }
  }
  ASSERT_LT(inlet, g.size());
  EXPECT_EQ(oracle::flood_fill_count(g, inlet), g.size());
}

TEST(Bifurcation, EveryShapeReachableFromInlet) {
  for (double angle : {10.0, 25.0, 45.0, 60.0}) {
    BifurcationSpec spec;
    spec.trunk_radius = 4;
    spec.branch_radius = 2.5;
    spec.branch_angle_deg = angle;
    spec.trunk_length = 16;
    spec.branch_length = 20;
    const auto g = generate_bifurcation(spec);
    std::size_t inlet = 0;
    while (!(touches_inoutlet(g.site(inlet).type) && g.site(inlet).boundary_id == 0)) ++inlet;
    EXPECT_EQ(oracle::flood_fill_count(g, inlet), g.size()) << "angle " << angle;
  }
}

TEST(Bifurcation, PaddingHitsTargetFluidFraction) {
  BifurcationSpec spec;
  spec.target_fluid_fraction = 0.1;
  const auto g = generate_bifurcation(spec);
  EXPECT_LE(fluid_fraction(g), 0.1);
  EXPECT_DOUBLE_EQ(fluid_fraction(g), static_cast<double>(g.size()) / g.volume());
}

TEST(Bifurcation, RejectsZeroAngle) {
  BifurcationSpec spec;
  spec.branch_angle_deg = 0;
  EXPECT_THROW(generate_bifurcation(spec), InvalidGeometryError);
}

TEST(Classify, ExampleSites) {
  Site bulk = make_site(1, 1, 1);
  Site wall = make_site(2, 1, 1);
  wall.wall_distances[4] = 0.3;
  Site both = make_site(3, 1, 1);
  both.wall_distances[0] = 0.5;
  both.inoutlet_links = 1u << 1;
  both.boundary_id = 0;
  const Geometry raw({5, 3, 3}, 8, {InOutletPlane{{3.5, 0, 0}, {1, 0, 0}, 0}},
                     {bulk, wall, both});
  const auto g = classify_sites(raw);
  EXPECT_EQ(g.site(0).type, SiteType::Bulk);
  EXPECT_EQ(g.site(1).type, SiteType::Wall);
  EXPECT_EQ(g.site(2).type, SiteType::WallInOutlet);
}

TEST(Classify, IdempotentAndCountsSum) {
  BifurcationSpec spec;
  const auto g = generate_bifurcation(spec);
  const auto once = classify_sites(g);
  EXPECT_EQ(classify_sites(once), once);
  const auto counts = once.type_counts();
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), once.size());
}

TEST(Classify, BulkIffNoCrossings) {
  const auto g = generate_cylinder(5.0, 8);
  for (const auto& s : g.sites()) {
    const bool clean = !s.crosses_wall() && !s.crosses_inoutlet();
    EXPECT_EQ(s.type == SiteType::Bulk, clean);
    if (s.crosses_wall()) EXPECT_TRUE(touches_wall(s.type));
  }
}

TEST(FluidFraction, Examples) {
  EXPECT_DOUBLE_EQ(fluid_fraction(generate_periodic_box({3, 4, 5})), 1.0);
  const Geometry one({10, 10, 10}, 8, {}, {make_site(4, 4, 4)});
  EXPECT_DOUBLE_EQ(fluid_fraction(one), 0.001);
}

TEST(GeometryValidation, RejectsBadInput) {
  EXPECT_THROW(Geometry({2, 2, 2}, 8, {}, {make_site(2, 0, 0)}), InvalidGeometryError);
  EXPECT_THROW(Geometry({2, 2, 2}, 8, {}, {make_site(1, 0, 0), make_site(1, 0, 0)}),
               InvalidGeometryError);
  EXPECT_THROW(Geometry({2, 2, 2}, 0, {}, {make_site(1, 0, 0)}), InvalidGeometryError);
  EXPECT_THROW(Geometry({2, 2, 2}, 8, {}, {}), InvalidGeometryError);
  Site io = make_site(0, 0, 0);
  io.type = SiteType::InOutlet;
  io.boundary_id = 3;
  EXPECT_THROW(Geometry({2, 2, 2}, 8, {}, {io}), InvalidGeometryError);
}

TEST(GeometryNeighbour, WrapsOnPeriodicAxesOnly) {
  const auto g = generate_periodic_box({4, 4, 4});
  const auto corner = *g.find(Coord{0, 0, 0});
  const auto wrapped = g.neighbour(corner, 2);  // -x
  ASSERT_TRUE(wrapped.has_value());
  EXPECT_EQ(g.site(*wrapped).coord, (Coord{3, 0, 0}));

  const auto box = generate_closed_box({4, 4, 4});
  EXPECT_FALSE(box.neighbour(*box.find(Coord{0, 0, 0}), 2).has_value());
}

TEST(Quantize, SixteenBitGrid) {
  EXPECT_DOUBLE_EQ(quantize_distance(0.0), 0.0);
  EXPECT_DOUBLE_EQ(quantize_distance(1.0), 1.0);
  EXPECT_DOUBLE_EQ(quantize_distance(0.5), 32768.0 / 65535.0);
  EXPECT_DOUBLE_EQ(quantize_distance(2.0), 1.0);
  for (double q = 0.0; q <= 1.0; q += 0.01234) {
    EXPECT_LE(std::abs(quantize_distance(q) - q), 0.5 / 65535.0 + 1e-15);
  }
}

TEST(GeometryIo, RoundtripGenerated) {
  BifurcationSpec spec;
  for (const auto& g : {generate_cylinder(4.5, 12), generate_bifurcation(spec),
                        generate_closed_box({5, 6, 7}, 0.3)}) {
    std::stringstream buf;
    write_geometry(buf, g);
    const auto back = read_geometry(buf);
    EXPECT_EQ(back, g);
  }
}

TEST(GeometryIo, RoundtripQuantizesDistances) {
  Site s = make_site(1, 1, 1);
  s.type = SiteType::Wall;
  s.wall_distances[3] = 0.123456789;
  const Geometry g({3, 3, 3}, 8, {}, {s});
  std::stringstream buf;
  write_geometry(buf, g);
  const auto back = read_geometry(buf);
  EXPECT_EQ(back.site(0).coord, s.coord);
  EXPECT_EQ(back.site(0).type, s.type);
  EXPECT_NEAR(back.site(0).wall_distances[3], 0.123456789, 0.5 / 65535.0);
}

TEST(GeometryIo, FileRoundtrip) {
  const auto g = generate_cylinder(3.0, 5);
  const auto path = std::filesystem::path(::testing::TempDir()) / "roundtrip.slbg";
  save_geometry(g, path);
  EXPECT_EQ(load_geometry(path), g);
  std::filesystem::remove(path);
}

GeometryParseError::Kind parse_kind(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_geometry(in);
  } catch (const GeometryParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error";
  return GeometryParseError::Kind::BadRecord;
}

std::string serialize(const Geometry& g) {
  std::ostringstream out;
  write_geometry(out, g);
  return out.str();
}

// Header: magic 4, version 4, dims 12, block 4, plane count 4, then no planes,
// then site count 8; each site record is 12 + 1 + 2 + 36 bytes.
constexpr std::size_t kSitesStart = 4 + 4 + 12 + 4 + 4 + 8;
constexpr std::size_t kRecord = 12 + 1 + 2 + 36;

TEST(GeometryIo, DistinctParseErrors) {
  const Geometry g({4, 4, 4}, 8, {}, {make_site(0, 0, 0), make_site(1, 0, 0)});
  const auto good = serialize(g);
  ASSERT_EQ(good.size(), kSitesStart + 2 * kRecord);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(parse_kind(bad_magic), GeometryParseError::Kind::BadHeader);

  EXPECT_EQ(parse_kind(good.substr(0, good.size() - 7)), GeometryParseError::Kind::Truncated);
  EXPECT_EQ(parse_kind(good.substr(0, 10)), GeometryParseError::Kind::Truncated);

  auto dup = good;
  dup[kSitesStart + kRecord] = 0;  // second site x: 1 -> 0
  EXPECT_EQ(parse_kind(dup), GeometryParseError::Kind::DuplicateCoord);

  auto oob = good;
  oob[kSitesStart + kRecord] = 9;
  EXPECT_EQ(parse_kind(oob), GeometryParseError::Kind::OutOfBounds);

  auto bad_type = good;
  bad_type[kSitesStart + 12] = 7;
  EXPECT_EQ(parse_kind(bad_type), GeometryParseError::Kind::BadRecord);
}

}  // namespace
}  // namespace latdecomp
