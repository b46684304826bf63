// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/lbkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "latdecomp/errors.hpp"

namespace latdecomp {

namespace {

using d3q19::kQ;
using d3q19::kVelocity;
using d3q19::kWeight;

}  // namespace

Populations equilibrium(double rho, const Vec3& u) noexcept {
  Populations eq{};
  const double usq = u.x * u.x + u.y * u.y + u.z * u.z;
  for (std::size_t i = 0; i < kQ; ++i) {
    const double cu = kVelocity[i][0] * u.x + kVelocity[i][1] * u.y + kVelocity[i][2] * u.z;
    eq[i] = kWeight[i] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * usq);
  }
  return eq;
}

namespace detail {

void reject_wall_fraction(double q) {
  throw Error("BFL needs a wall fraction in [0, 1), got " + std::to_string(q));
}

}  // namespace detail

double IoletDensity::at(std::int64_t step) const noexcept {
  return mean + amplitude * std::cos(2.0 * std::numbers::pi * static_cast<double>(step) / period +
                                     phase);
}

LbSolver::LbSolver(const Geometry& g, BoundaryParams bc, double tau)
    : geometry_(&g), bc_(std::move(bc)) {
  if (!(tau > 0.5)) throw Error("tau must exceed 0.5");
  for (const auto& [id, iolet] : bc_.iolets) {
    if (!(iolet.mean - std::abs(iolet.amplitude) > 0.0) || !(iolet.period > 0.0)) {
      throw Error("iolet " + std::to_string(id) + " needs a positive density and period");
    }
  }
  const std::size_t n = g.size();
  state_.f.assign(n * kQ, 0.0);
  state_.rho.assign(n, 1.0);
  state_.u.assign(n, Vec3{});
  state_.tau = tau;
  next_f_.assign(n * kQ, 0.0);
  next_rho_.assign(n, 1.0);
  next_u_.assign(n, Vec3{});
  upstream_.assign(n * kQ, -1);
  gather_.assign(n * kQ, 0);
  boundary_index_.assign(n, -1);
  cut_offsets_.push_back(0);

  for (std::size_t s = 0; s < n; ++s) {
    const Site& site = g.site(s);
    const auto self = static_cast<std::uint32_t>(s);
    const std::size_t first_cut = cut_links_.size();
    upstream_[s * kQ] = static_cast<std::int32_t>(s);
    gather_[s * kQ] = self;
    for (std::size_t i = 1; i < kQ; ++i) {
      const auto up = g.neighbour(s, d3q19::opposite(i));
      if (up) {
        upstream_[s * kQ + i] = static_cast<std::int32_t>(*up);
        gather_[s * kQ + i] = static_cast<std::uint32_t>(*up);
        continue;
      }
      gather_[s * kQ + i] = self;
      const std::size_t j = d3q19::opposite(i);
      CutLink link{static_cast<std::uint8_t>(i), 2, 1.0};
      if (site.inoutlet_links & (1u << (j - 1))) {
        link.kind = 1;
      } else if (site.wall_distances[j - 1] < 1.0) {
        link.kind = 0;
        link.q = site.wall_distances[j - 1];
      }
      cut_links_.push_back(link);
    }
    if (cut_links_.size() == first_cut) continue;
    const IoletDensity* iolet = nullptr;
    if (site.inoutlet_links != 0) {
      const auto it = bc_.iolets.find(site.boundary_id);
      if (it == bc_.iolets.end()) {
        throw Error("no iolet given for boundary " + std::to_string(site.boundary_id));
      }
      iolet = &it->second;
    }
    boundary_index_[s] = static_cast<std::int32_t>(boundary_iolet_.size());
    boundary_iolet_.push_back(iolet);
    cut_offsets_.push_back(static_cast<std::uint32_t>(cut_links_.size()));
  }
  initialise(1.0);
}

void LbSolver::initialise(double rho, const Vec3& u) {
  const auto eq = equilibrium(rho, u);
  for (std::size_t s = 0; s < state_.size(); ++s) {
    std::copy(eq.begin(), eq.end(), state_.site(s));
    state_.rho[s] = rho;
    state_.u[s] = u;
  }
  state_.step = 0;
}

void LbSolver::collide(std::size_t s, const double* in) {
  double rho = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double mz = 0.0;
  for (std::size_t i = 0; i < kQ; ++i) {
    rho += in[i];
    mx += kVelocity[i][0] * in[i];
    my += kVelocity[i][1] * in[i];
    mz += kVelocity[i][2] * in[i];
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw NumericalDivergenceError(s, "density " + std::to_string(rho) + " at site " +
                                          std::to_string(s) + " on step " +
                                          std::to_string(state_.step + 1));
  }
  const Vec3 u{mx / rho, my / rho, mz / rho};
  next_rho_[s] = rho;
  next_u_[s] = u;
  const double omega = 1.0 / state_.tau;
  const auto eq = equilibrium(rho, u);
  double* out = next_f_.data() + s * kQ;
  for (std::size_t i = 0; i < kQ; ++i) out[i] = in[i] - omega * (in[i] - eq[i]);
}

// Fully unrolled BGK for sites whose every link stays in the fluid.
void LbSolver::update_bulk(std::size_t s) {
  const double* cur = state_.f.data();
  const double omega = 1.0 / state_.tau;
  double in[kQ];
  {
    const std::uint32_t* from = gather_.data() + s * kQ;
    for (std::size_t i = 0; i < kQ; ++i) in[i] = cur[static_cast<std::size_t>(from[i]) * kQ + i];

    double rho = 0.0;
    for (std::size_t i = 0; i < kQ; ++i) rho += in[i];
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      collide(s, in);  // reports the divergence
      return;
    }
    const double jx = in[1] - in[2] + in[11] - in[12] + in[13] - in[14] + in[15] - in[16] +
                      in[17] - in[18];
    const double jy = in[3] - in[4] + in[7] - in[8] + in[9] - in[10] - in[11] + in[12] +
                      in[17] - in[18];
    const double jz = in[5] - in[6] - in[7] + in[8] + in[9] - in[10] - in[13] + in[14] +
                      in[15] - in[16];
    const double inv = 1.0 / rho;
    const double ux = jx * inv;
    const double uy = jy * inv;
    const double uz = jz * inv;
    next_rho_[s] = rho;
    next_u_[s] = {ux, uy, uz};

    double* out = next_f_.data() + s * kQ;
    const double base = 1.0 - 1.5 * (ux * ux + uy * uy + uz * uz);
    out[0] = in[0] - omega * (in[0] - rho / 3.0 * base);
    auto pair = [&](std::size_t a, double w, double cu) {
      const double sym = w * rho * (base + 4.5 * cu * cu);
      const double asym = w * rho * 3.0 * cu;
      out[a] = in[a] - omega * (in[a] - sym - asym);
      out[a + 1] = in[a + 1] - omega * (in[a + 1] - sym + asym);
    };
    constexpr double w1 = 1.0 / 18.0;
    constexpr double w2 = 1.0 / 36.0;
    pair(1, w1, ux);
    pair(3, w1, uy);
    pair(5, w1, uz);
    pair(7, w2, uy - uz);
    pair(9, w2, uy + uz);
    pair(11, w2, ux - uy);
    pair(13, w2, ux - uz);
    pair(15, w2, ux + uz);
    pair(17, w2, ux + uy);
  }
}

void LbSolver::update_boundary(std::size_t s, std::size_t k) {
  const double* cur = state_.f.data();
  double in[kQ];
  {
    const std::uint32_t* from = gather_.data() + s * kQ;
    const std::int32_t* up = upstream_.data() + s * kQ;
    const double* own = cur + s * kQ;
    for (std::size_t i = 0; i < kQ; ++i) in[i] = cur[static_cast<std::size_t>(from[i]) * kQ + i];

    const IoletDensity* iolet = boundary_iolet_[k];
    for (auto c = cut_offsets_[k]; c < cut_offsets_[k + 1]; ++c) {
      const CutLink& link = cut_links_[c];
      const std::size_t i = link.dir;
      const std::size_t j = d3q19::kOpposite[i];
      if (link.kind == 0) {
        const std::int32_t down = up[j];
        const double out_upstream =
            down >= 0 ? cur[static_cast<std::size_t>(down) * kQ + j] : own[i];
        in[i] = apply_bfl(link.q, own[j], out_upstream, own[i]);
      } else if (link.kind == 1) {
        // Non-equilibrium extrapolation from the site to the ghost node at s - c_i.
        const Vec3& us = state_.u[s];
        Vec3 ub = us;
        if (up[j] >= 0) {
          const Vec3& un = state_.u[static_cast<std::size_t>(up[j])];
          ub = {2.0 * us.x - un.x, 2.0 * us.y - un.y, 2.0 * us.z - un.z};
        }
        const double rho_b = iolet->at(state_.step);
        const double rho_s = state_.rho[s];
        const double cb = kVelocity[i][0] * ub.x + kVelocity[i][1] * ub.y + kVelocity[i][2] * ub.z;
        const double cs = kVelocity[i][0] * us.x + kVelocity[i][1] * us.y + kVelocity[i][2] * us.z;
        const double ub2 = ub.x * ub.x + ub.y * ub.y + ub.z * ub.z;
        const double us2 = us.x * us.x + us.y * us.y + us.z * us.z;
        const double eq_b = kWeight[i] * rho_b * (1.0 + 3.0 * cb + 4.5 * cb * cb - 1.5 * ub2);
        const double eq_s = kWeight[i] * rho_s * (1.0 + 3.0 * cs + 4.5 * cs * cs - 1.5 * us2);
        in[i] = eq_b + own[i] - eq_s;
      } else {
        in[i] = own[j];
      }
    }
    collide(s, in);
  }
}

template <typename Fn>
void LbSolver::parallel_for(std::size_t n, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (workers == 1 || n < 2 * workers) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = n * w / workers;
    const std::size_t e = n * (w + 1) / workers;
    pool.emplace_back([&, w, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

void LbSolver::step(int threads) {
  parallel_for(state_.size(), threads, [this](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const std::int32_t k = boundary_index_[s];
      if (k < 0) {
        update_bulk(s);
      } else {
        update_boundary(s, static_cast<std::size_t>(k));
      }
    }
  });
  state_.f.swap(next_f_);
  state_.rho.swap(next_rho_);
  state_.u.swap(next_u_);
  ++state_.step;
}

void LbSolver::run(std::int64_t steps, int threads) {
  for (std::int64_t k = 0; k < steps; ++k) step(threads);
}

double LbSolver::total_mass() const noexcept {
  double m = 0.0;
  for (double v : state_.f) m += v;
  return m;
}

double LbSolver::max_speed() const noexcept {
  double best = 0.0;
  for (const auto& u : state_.u) best = std::max(best, std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z));
  return best;
}

std::string LbSolver::diagnostics_row() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%lld,%.17g,%.9g", static_cast<long long>(state_.step),
                total_mass(), max_speed());
  return buf;
}

LbState step(const LbState& state, const Geometry& g, const BoundaryParams& bc) {
  LbSolver solver(g, bc, state.tau);
  solver.state() = state;
  solver.step();
  return solver.state();
}

}  // namespace latdecomp
