// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

// Binary geometry file:
//   "SLBG" | u32 version (=1) | u32 dims[3] | u32 block_size
//   u32 plane_count | plane_count x (f64 point[3], f64 normal[3], u16 id)
//   u64 site_count  | site_count x (u32 coord[3], u8 type, u16 boundary_id,
//                                   u16 q[18] with q = round(q * 65535))
// All integers and floats little-endian.

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "latdecomp/errors.hpp"
#include "latdecomp/geometry.hpp"

namespace latdecomp {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'B', 'G'};
constexpr std::uint32_t kVersion = 1;

using Kind = GeometryParseError::Kind;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    using U = std::make_unsigned_t<
        std::conditional_t<std::is_floating_point_v<T>,
                           std::conditional_t<sizeof(T) == 8, std::int64_t, std::int32_t>, T>>;
    const U bits = std::bit_cast<U>(value);
    unsigned char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFFu);
    }
    out_.write(reinterpret_cast<const char*>(buf), sizeof(U));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T get(const char* what) {
    using U = std::make_unsigned_t<
        std::conditional_t<std::is_floating_point_v<T>,
                           std::conditional_t<sizeof(T) == 8, std::int64_t, std::int32_t>, T>>;
    unsigned char buf[sizeof(U)];
    if (!in_.read(reinterpret_cast<char*>(buf), sizeof(U))) {
      throw GeometryParseError(Kind::Truncated, std::string("geometry file truncated reading ") +
                                                    what);
    }
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(buf[i]) << (8 * i);
    return std::bit_cast<T>(bits);
  }

  void read_bytes(char* dst, std::size_t n, const char* what) {
    if (!in_.read(dst, static_cast<std::streamsize>(n))) {
      throw GeometryParseError(Kind::Truncated, std::string("geometry file truncated reading ") +
                                                    what);
    }
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_geometry(std::ostream& out, const Geometry& g) {
  Writer w(out);
  out.write(kMagic, 4);
  w.put<std::uint32_t>(kVersion);
  for (auto d : g.dims()) w.put<std::uint32_t>(d);
  w.put<std::uint32_t>(g.block_size());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.planes().size()));
  for (const auto& p : g.planes()) {
    for (double v : {p.point.x, p.point.y, p.point.z, p.normal.x, p.normal.y, p.normal.z}) {
      w.put<double>(v);
    }
    w.put<std::uint16_t>(p.id);
  }
  w.put<std::uint64_t>(g.size());
  for (const auto& s : g.sites()) {
    w.put<std::uint32_t>(s.coord.x);
    w.put<std::uint32_t>(s.coord.y);
    w.put<std::uint32_t>(s.coord.z);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.type));
    w.put<std::uint16_t>(s.boundary_id);
    for (double q : s.wall_distances) {
      w.put<std::uint16_t>(static_cast<std::uint16_t>(std::lround(quantize_distance(q) * 65535.0)));
    }
  }
  if (!out) throw Error("failed writing geometry stream");
}

Geometry read_geometry(std::istream& in) {
  Reader r(in);
  char magic[4];
  r.read_bytes(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw GeometryParseError(Kind::BadHeader, "not a geometry file (bad magic)");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kVersion) {
    throw GeometryParseError(Kind::BadHeader,
                             "unsupported geometry version " + std::to_string(version));
  }
  std::array<std::uint32_t, 3> dims{};
  for (auto& d : dims) d = r.get<std::uint32_t>("dims");
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
    throw GeometryParseError(Kind::BadHeader, "zero bounding dimension");
  }
  const auto block_size = r.get<std::uint32_t>("block size");
  if (block_size == 0) throw GeometryParseError(Kind::BadHeader, "zero block size");

  const auto plane_count = r.get<std::uint32_t>("plane count");
  if (plane_count > 65536) throw GeometryParseError(Kind::BadHeader, "implausible plane count");
  std::vector<InOutletPlane> planes(plane_count);
  for (auto& p : planes) {
    p.point = {r.get<double>("plane"), r.get<double>("plane"), r.get<double>("plane")};
    p.normal = {r.get<double>("plane"), r.get<double>("plane"), r.get<double>("plane")};
    p.id = r.get<std::uint16_t>("plane id");
  }

  const auto site_count = r.get<std::uint64_t>("site count");
  const std::uint64_t volume = static_cast<std::uint64_t>(dims[0]) * dims[1] * dims[2];
  if (site_count == 0 || site_count > volume) {
    throw GeometryParseError(Kind::BadHeader,
                             "site count " + std::to_string(site_count) + " inconsistent with box");
  }
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(site_count, 1u << 24)));
  for (std::uint64_t i = 0; i < site_count; ++i) {
    Site s;
    s.coord.x = r.get<std::uint32_t>("site coord");
    s.coord.y = r.get<std::uint32_t>("site coord");
    s.coord.z = r.get<std::uint32_t>("site coord");
    const auto type = r.get<std::uint8_t>("site type");
    if (type >= kSiteTypeCount) {
      throw GeometryParseError(Kind::BadRecord, "site " + std::to_string(i) + " has bad type " +
                                                    std::to_string(type));
    }
    s.type = static_cast<SiteType>(type);
    s.boundary_id = r.get<std::uint16_t>("boundary id");
    for (auto& q : s.wall_distances) q = r.get<std::uint16_t>("wall distance") / 65535.0;
    if (s.coord.x >= dims[0] || s.coord.y >= dims[1] || s.coord.z >= dims[2]) {
      throw GeometryParseError(Kind::OutOfBounds,
                               "site " + std::to_string(i) + " lies outside the bounding box");
    }
    if (touches_inoutlet(s.type)) {
      bool known = false;
      for (const auto& p : planes) known = known || p.id == s.boundary_id;
      if (!known) {
        throw GeometryParseError(Kind::BadRecord, "site " + std::to_string(i) +
                                                      " references unknown in/outlet " +
                                                      std::to_string(s.boundary_id));
      }
    } else {
      s.boundary_id = 0;
    }
    sites.push_back(s);
  }

  std::vector<Coord> coords;
  coords.reserve(sites.size());
  for (const auto& s : sites) coords.push_back(s.coord);
  const SiteLookup lookup(dims, coords);
  if (auto dup = lookup.first_duplicate()) {
    throw GeometryParseError(Kind::DuplicateCoord,
                             "duplicate site coordinate at record " + std::to_string(*dup));
  }

  // In/outlet links are not stored: they are the links of in/outlet sites
  // that leave the fluid without hitting a wall.
  for (auto& s : sites) {
    if (!touches_inoutlet(s.type)) continue;
    for (std::size_t dir = 1; dir < d3q19::kQ; ++dir) {
      if (s.wall_distances[dir - 1] < 1.0) continue;
      const auto& v = d3q19::kVelocity[dir];
      const std::int64_t nx = static_cast<std::int64_t>(s.coord.x) + v[0];
      const std::int64_t ny = static_cast<std::int64_t>(s.coord.y) + v[1];
      const std::int64_t nz = static_cast<std::int64_t>(s.coord.z) + v[2];
      const bool outside_box = nx < 0 || ny < 0 || nz < 0;
      if (outside_box || !lookup.find(Coord{static_cast<std::uint32_t>(nx),
                                            static_cast<std::uint32_t>(ny),
                                            static_cast<std::uint32_t>(nz)})) {
        s.inoutlet_links |= 1u << (dir - 1);
      }
    }
  }

  try {
    return Geometry(dims, block_size, std::move(planes), std::move(sites));
  } catch (const InvalidGeometryError& e) {
    throw GeometryParseError(Kind::BadRecord, e.what());
  }
}

void save_geometry(const Geometry& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_geometry(out, g);
}

Geometry load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_geometry(in);
}

}  // namespace latdecomp
