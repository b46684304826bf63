// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latdecomp/d3q19.hpp"
#include "latdecomp/geometry.hpp"

namespace latdecomp {

using Populations = std::array<double, d3q19::kQ>;

namespace detail {
[[noreturn]] void reject_wall_fraction(double q);
}  // namespace detail

/// Second-order Maxwellian truncated for D3Q19.
Populations equilibrium(double rho, const Vec3& u) noexcept;

/// Linear Bouzidi interpolation for a link of wall fraction q in [0, 1).
/// Returns the population re-entering the site opposite to the outgoing
/// direction. `out` is the post-collision population travelling towards the
/// wall, `out_upstream` the same direction at the site one link behind, and
/// `opposite` the site's post-collision population in the reverse direction.
/// Throws Error for q outside [0, 1).
inline double apply_bfl(double q, double out, double out_upstream, double opposite) {
  if (!(q >= 0.0 && q < 1.0)) [[unlikely]] detail::reject_wall_fraction(q);
  if (q < 0.5) return 2.0 * q * out + (1.0 - 2.0 * q) * out_upstream;
  return out / (2.0 * q) + (2.0 * q - 1.0) / (2.0 * q) * opposite;
}

/// Pressure boundary density, mean + amplitude * cos(2 pi step / period + phase).
struct IoletDensity {
  double mean = 1.0;
  double amplitude = 0.0;
  double period = 1000.0;  ///< in steps
  double phase = 0.0;

  double at(std::int64_t step) const noexcept;
};

/// Pressure boundaries keyed by plane id.
struct BoundaryParams {
  std::map<std::uint16_t, IoletDensity> iolets;
};

/// Solver state at the end of a step. `f` holds post-collision populations;
/// `rho` and `u` are the moments the last collision was computed from.
struct LbState {
  std::vector<double> f;  ///< site-major, kQ values per site
  std::vector<double> rho;
  std::vector<Vec3> u;
  double tau = 0.8;
  std::int64_t step = 0;

  std::size_t size() const noexcept { return rho.size(); }
  double* site(std::size_t s) noexcept { return f.data() + s * d3q19::kQ; }
  const double* site(std::size_t s) const noexcept { return f.data() + s * d3q19::kQ; }
};

/// D3Q19 LBGK with BFL walls and anti-bounce-back pressure boundaries.
///
/// A step gathers every site's incoming populations from the previous
/// lattice (streaming, with the boundary rules on cut links), collides them
/// and writes the result to a second lattice. Sites only read the old
/// lattice, so any split of the site range gives bit-identical results.
class LbSolver {
 public:
  /// Throws Error when tau <= 0.5, an iolet density can become
  /// non-positive, or an in/outlet site names a plane without an iolet.
  LbSolver(const Geometry& g, BoundaryParams bc, double tau = 0.8);

  /// Sets every site to equilibrium at (rho, u).
  void initialise(double rho, const Vec3& u = {});

  /// Advances one step using up to `threads` workers. Throws
  /// NumericalDivergenceError for a NaN or non-positive density.
  void step(int threads = 1);
  void run(std::int64_t steps, int threads = 1);

  const LbState& state() const noexcept { return state_; }
  LbState& state() noexcept { return state_; }
  const Geometry& geometry() const noexcept { return *geometry_; }

  double total_mass() const noexcept;
  double max_speed() const noexcept;

  /// "step,mass,max_u" line for the diagnostics CSV.
  std::string diagnostics_row() const;
  static constexpr const char* kDiagnosticsHeader = "step,mass,max_u";

 private:
  void update_bulk(std::size_t s);
  void update_boundary(std::size_t s, std::size_t k);
  void collide(std::size_t s, const double* in);
  template <typename Fn>
  void parallel_for(std::size_t n, int threads, Fn&& fn);

  const Geometry* geometry_;
  BoundaryParams bc_;
  LbState state_;
  std::vector<double> next_f_;
  std::vector<double> next_rho_;
  std::vector<Vec3> next_u_;
  struct CutLink {
    std::uint8_t dir;   ///< incoming direction i; the cut link is -i
    std::uint8_t kind;  ///< 0 wall, 1 in/outlet, 2 plain bounce-back
    double q;
  };

  /// upstream_[s * kQ + i]: site at s - c_i, or -1 when the link is cut.
  std::vector<std::int32_t> upstream_;
  /// Like upstream_ with cut links pointing at the site itself.
  std::vector<std::uint32_t> gather_;
  /// Position of each site among the boundary sites, -1 for bulk sites.
  std::vector<std::int32_t> boundary_index_;
  /// Cut links of boundary site k are cut_links_[cut_offsets_[k] .. cut_offsets_[k + 1]).
  std::vector<std::uint32_t> cut_offsets_;
  std::vector<CutLink> cut_links_;
  /// Iolet of each boundary site, nullptr when it has none.
  std::vector<const IoletDensity*> boundary_iolet_;
};

/// One step on a copy of `state`.
LbState step(const LbState& state, const Geometry& g, const BoundaryParams& bc);

}  // namespace latdecomp
