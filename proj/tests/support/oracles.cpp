// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace latdecomp::oracle {

std::pair<std::uint32_t, std::uint64_t> naive_morton(std::uint32_t x, std::uint32_t y,
                                                      std::uint32_t z) {
  std::uint32_t hi = 0;
  std::uint64_t lo = 0;
  const std::uint32_t in[3] = {x, y, z};
  for (int bit = 0; bit < 32; ++bit) {
    for (int axis = 0; axis < 3; ++axis) {
      if (((in[axis] >> bit) & 1u) == 0) continue;
      const int pos = 3 * bit + axis;
      if (pos < 64) {
        lo |= std::uint64_t{1} << pos;
      } else {
        hi |= std::uint32_t{1} << (pos - 64);
      }
    }
  }
  return {hi, lo};
}

std::size_t cylinder_voxel_count(double radius, int length) {
  const int reach = static_cast<int>(radius) + 2;
  std::size_t disk = 0;
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      if (static_cast<double>(i * i + j * j) < radius * radius) ++disk;
    }
  }
  return disk * static_cast<std::size_t>(length);
}

std::size_t flood_fill_count(const Geometry& g, std::size_t start) {
  using Key = std::tuple<long, long, long>;
  std::set<Key> fluid;
  for (const auto& s : g.sites()) fluid.insert({s.coord.x, s.coord.y, s.coord.z});
  std::set<Key> seen;
  std::deque<Key> queue;
  const auto& c0 = g.sites().at(start).coord;
  queue.push_back({c0.x, c0.y, c0.z});
  seen.insert(queue.front());
  while (!queue.empty()) {
    const auto [x, y, z] = queue.front();
    queue.pop_front();
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const int nonzero = (dx != 0) + (dy != 0) + (dz != 0);
          if (nonzero == 0 || nonzero == 3) continue;  // D3Q19 drops the corners
          const Key k{x + dx, y + dy, z + dz};
          if (fluid.count(k) != 0 && seen.insert(k).second) queue.push_back(k);
        }
      }
    }
  }
  return seen.size();
}

std::vector<double> normal_equations(const std::vector<std::vector<double>>& a,
                                     const std::vector<double>& b) {
  const std::size_t m = a.size();
  const std::size_t n = a.at(0).size();
  std::vector<std::vector<double>> aug(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < m; ++r) aug[i][j] += a[r][i] * a[r][j];
    }
    for (std::size_t r = 0; r < m; ++r) aug[i][n] += a[r][i] * b[r];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    std::swap(aug[col], aug[pivot]);
    if (aug[col][col] == 0.0) throw std::runtime_error("singular normal equations");
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = aug[r][col] / aug[col][col];
      for (std::size_t c = col; c <= n; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n] / aug[i][i];
  return x;
}

std::vector<BenchmarkObservation> synthetic_observations(
    const std::vector<SiteTypeCounts>& counts, const std::array<double, 4>& costs, double noise,
    std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<BenchmarkObservation> out;
  for (const auto& c : counts) {
    double t = 0.0;
    for (std::size_t k = 0; k < 4; ++k) t += static_cast<double>(c[k]) * costs[k];
    BenchmarkObservation o;
    o.counts = c;
    o.runtime_s = t * 1e-9 * (1.0 + noise * gauss(rng));
    out.push_back(o);
  }
  return out;
}

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    const auto t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

}  // namespace

Fraction::Fraction(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const auto g = gcd64(n, d);
  num = n / g;
  den = d / g;
}

Fraction operator+(Fraction a, Fraction b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}
Fraction operator-(Fraction a, Fraction b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}
Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }

std::vector<std::pair<std::array<int, 3>, Fraction>> exact_equilibrium(
    Fraction rho, const std::array<Fraction, 3>& u) {
  std::vector<std::pair<std::array<int, 3>, Fraction>> out;
  const Fraction usq = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        const int len2 = dx * dx + dy * dy + dz * dz;
        if (len2 == 3) continue;
        const Fraction w = len2 == 0 ? Fraction(1, 3) : len2 == 1 ? Fraction(1, 18) : Fraction(1, 36);
        const Fraction cu = Fraction(dx) * u[0] + Fraction(dy) * u[1] + Fraction(dz) * u[2];
        const Fraction poly =
            Fraction(1) + Fraction(3) * cu + Fraction(9, 2) * cu * cu - Fraction(3, 2) * usq;
        out.push_back({{dx, dy, dz}, w * rho * poly});
      }
    }
  }
  return out;
}

LatticeGraph graph_from_edges(int n, const EdgeList& edges, std::vector<std::int64_t> weights) {
  std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  LatticeGraph g;
  for (int v = 0; v < n; ++v) {
    auto& list = adj[static_cast<std::size_t>(v)];
    std::sort(list.begin(), list.end());
    g.neighbours.insert(g.neighbours.end(), list.begin(), list.end());
    g.offsets.push_back(static_cast<std::int64_t>(g.neighbours.size()));
    g.coords.push_back(Coord{static_cast<std::uint32_t>(v), 0, 0});
  }
  g.vertex_weights = weights.empty() ? std::vector<std::int64_t>(static_cast<std::size_t>(n), 1)
                                     : std::move(weights);
  return g;
}

EdgeList random_edges(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  EdgeList edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (keep(rng)) edges.push_back({a, b});
    }
  }
  return edges;
}

std::int64_t exhaustive_min_bisection(int n, const EdgeList& edges,
                                      const std::vector<std::int64_t>& weights, std::int64_t cap) {
  std::int64_t best = -1;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::int64_t side1 = 0;
    std::int64_t side0 = 0;
    for (int v = 0; v < n; ++v) ((mask >> v) & 1u ? side1 : side0) += weights[static_cast<std::size_t>(v)];
    if (side0 > cap || side1 > cap) continue;
    std::int64_t cut = 0;
    for (const auto& [a, b] : edges) cut += ((mask >> a) & 1u) != ((mask >> b) & 1u);
    if (best < 0 || cut < best) best = cut;
  }
  return best;
}

std::int64_t pairwise_edge_cut(int n, const EdgeList& edges, const std::vector<int>& part) {
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                     std::vector<bool>(static_cast<std::size_t>(n), false));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
  }
  std::int64_t cut = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] &&
          part[static_cast<std::size_t>(a)] != part[static_cast<std::size_t>(b)]) {
        ++cut;
      }
    }
  }
  return cut;
}

}  // namespace latdecomp::oracle
