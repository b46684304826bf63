// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <set>

#include "latdecomp/multilevel.hpp"

namespace latdecomp::multilevel {

namespace {

// Consecutive non-improving FM moves tolerated before a pass gives up.
constexpr std::size_t kMaxBadMoves = 64;
constexpr int kBisectionTrials = 6;

/// Connectivity of one vertex to each part, reset between vertices.
class PartConnectivity {
 public:
  explicit PartConnectivity(int nparts) : conn_(static_cast<std::size_t>(nparts), 0) {}

  void load(const WeightedGraph& g, std::span<const int> part, std::int32_t v) {
    for (int p : touched_) conn_[static_cast<std::size_t>(p)] = 0;
    touched_.clear();
    for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
      const int p = part[g.adjncy[e]];
      auto& c = conn_[static_cast<std::size_t>(p)];
      if (c == 0) touched_.push_back(p);
      c += g.adjwgt[e];
    }
  }

  std::int64_t operator[](int p) const noexcept { return conn_[static_cast<std::size_t>(p)]; }
  const std::vector<int>& touched() const noexcept { return touched_; }

 private:
  std::vector<std::int64_t> conn_;
  std::vector<int> touched_;
};

struct Move {
  std::int64_t gain = 0;
  int target = -1;
};

bool is_boundary(const WeightedGraph& g, std::span<const int> part, std::int32_t v) {
  for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
    if (part[g.adjncy[e]] != part[v]) return true;
  }
  return false;
}

// Best feasible move of v to an adjacent part: highest gain, then lighter
// part, then lower part id.
Move best_adjacent_move(const WeightedGraph& g, std::span<const int> part,
                        std::span<const std::int64_t> pw, std::span<const std::int64_t> caps,
                        const PartConnectivity& conn, std::int32_t v) {
  const int own = part[v];
  const std::int64_t internal = conn[own];
  Move best;
  for (int p : conn.touched()) {
    if (p == own) continue;
    if (pw[p] + g.vwgt[v] > caps[p]) continue;
    const std::int64_t gain = conn[p] - internal;
    if (best.target < 0 || gain > best.gain ||
        (gain == best.gain && (pw[p] < pw[best.target] ||
                               (pw[p] == pw[best.target] && p < best.target)))) {
      best = Move{gain, p};
    }
  }
  return best;
}

std::int64_t max_of(std::span<const std::int64_t> v) {
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

using Queue = std::set<std::pair<std::int64_t, std::int32_t>>;  // (-gain, vertex)

class KeyedQueue {
 public:
  explicit KeyedQueue(std::size_t n) : key_(n, 0), queued_(n, 0) {}

  void upsert(std::int32_t v, std::int64_t gain) {
    if (queued_[v]) {
      if (key_[v] == gain) return;
      q_.erase({-key_[v], v});
    }
    key_[v] = gain;
    queued_[v] = 1;
    q_.insert({-gain, v});
  }
  void remove(std::int32_t v) {
    if (!queued_[v]) return;
    q_.erase({-key_[v], v});
    queued_[v] = 0;
  }
  bool empty() const noexcept { return q_.empty(); }
  std::pair<std::int64_t, std::int32_t> pop() {
    const auto top = *q_.begin();
    q_.erase(q_.begin());
    queued_[top.second] = 0;
    return {-top.first, top.second};
  }

 private:
  Queue q_;
  std::vector<std::int64_t> key_;
  std::vector<char> queued_;
};

std::size_t fm_pass(const WeightedGraph& g, std::span<int> part, int nparts,
                    std::span<const std::int64_t> caps, std::vector<std::int64_t>& pw,
                    std::int64_t& cut) {
  const auto n = static_cast<std::size_t>(g.size());
  PartConnectivity conn(nparts);
  KeyedQueue queue(n);
  std::vector<char> locked(n, 0);

  auto refresh = [&](std::int32_t v) {
    if (locked[v] || !is_boundary(g, part, v)) {
      queue.remove(v);
      return;
    }
    conn.load(g, part, v);
    const Move m = best_adjacent_move(g, part, pw, caps, conn, v);
    if (m.target < 0) {
      queue.remove(v);
    } else {
      queue.upsert(v, m.gain);
    }
  };
  for (std::int32_t v = 0; v < g.size(); ++v) refresh(v);

  struct Logged {
    std::int32_t v;
    int from;
  };
  std::vector<Logged> log;
  std::int64_t best_cut = cut;
  std::int64_t best_max = max_of(pw);
  std::size_t best_len = 0;
  std::size_t bad = 0;
  std::int64_t running = cut;

  while (!queue.empty()) {
    const auto [key, v] = queue.pop();
    conn.load(g, part, v);
    const Move m = best_adjacent_move(g, part, pw, caps, conn, v);
    if (m.target < 0) continue;
    if (m.gain < key) {
      queue.upsert(v, m.gain);
      continue;
    }
    const int from = part[v];
    pw[from] -= g.vwgt[v];
    pw[m.target] += g.vwgt[v];
    part[v] = m.target;
    running -= m.gain;
    locked[v] = 1;
    log.push_back({v, from});

    const std::int64_t cur_max = max_of(pw);
    if (running < best_cut || (running == best_cut && cur_max < best_max)) {
      best_cut = running;
      best_max = cur_max;
      best_len = log.size();
      bad = 0;
    } else if (++bad > kMaxBadMoves) {
      break;
    }
    for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) refresh(g.adjncy[e]);
  }

  while (log.size() > best_len) {
    const auto [v, from] = log.back();
    log.pop_back();
    pw[part[v]] -= g.vwgt[v];
    pw[from] += g.vwgt[v];
    part[v] = from;
  }
  cut = best_cut;
  return best_len;
}

// Moves vertices out of `heavy` until it fits its cap or nothing can move.
bool drain_part(const WeightedGraph& g, std::span<int> part, int nparts, int heavy,
                std::span<const std::int64_t> caps, std::vector<std::int64_t>& pw) {
  PartConnectivity conn(nparts);
  KeyedQueue queue(static_cast<std::size_t>(g.size()));

  // Part with the most room left, the fallback target for interior vertices.
  auto roomiest = [&](std::int64_t vw) {
    int best = -1;
    for (int p = 0; p < nparts; ++p) {
      if (p == heavy || pw[p] + vw > caps[p]) continue;
      if (best < 0 || caps[p] - pw[p] > caps[best] - pw[best]) best = p;
    }
    return best;
  };
  auto evaluate = [&](std::int32_t v) {
    conn.load(g, part, v);
    Move m = best_adjacent_move(g, part, pw, caps, conn, v);
    const int r = roomiest(g.vwgt[v]);
    if (r >= 0) {
      const std::int64_t gain = conn[r] - conn[heavy];
      if (m.target < 0 || gain > m.gain) m = Move{gain, r};
    }
    return m;
  };

  for (std::int32_t v = 0; v < g.size(); ++v) {
    if (part[v] != heavy) continue;
    const Move m = evaluate(v);
    if (m.target >= 0) queue.upsert(v, m.gain);
  }

  bool moved = false;
  while (pw[heavy] > caps[heavy] && !queue.empty()) {
    const auto [key, v] = queue.pop();
    const Move m = evaluate(v);
    if (m.target < 0) continue;
    if (m.gain < key) {
      queue.upsert(v, m.gain);
      continue;
    }
    pw[heavy] -= g.vwgt[v];
    pw[m.target] += g.vwgt[v];
    part[v] = m.target;
    moved = true;
    for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
      const auto u = g.adjncy[e];
      if (part[u] != heavy) continue;
      const Move mu = evaluate(u);
      if (mu.target >= 0) {
        queue.upsert(u, mu.gain);
      } else {
        queue.remove(u);
      }
    }
  }
  return moved;
}

// Splits g into two sides with side-0 weight near frac * total.
std::vector<int> bisect(const WeightedGraph& g, double frac, double tolerance,
                        std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(g.size());
  const double total = static_cast<double>(g.total_weight());
  const std::int64_t maxvw = g.max_vertex_weight();
  const std::array<double, 2> targets{frac * total, total - frac * total};
  std::array<std::int64_t, 2> caps{};
  for (int s = 0; s < 2; ++s) {
    caps[s] = std::max(static_cast<std::int64_t>(std::floor(tolerance * targets[s])),
                       static_cast<std::int64_t>(std::ceil(targets[s])) + maxvw - 1);
  }

  std::vector<int> best;
  std::int64_t best_cut = 0;
  std::int64_t best_excess = 0;
  for (int trial = 0; trial < kBisectionTrials; ++trial) {
    std::vector<int> side(n, 1);
    std::vector<std::int64_t> gain(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) gain[v] -= g.adjwgt[e];
    }
    KeyedQueue frontier(n);
    double grown = 0.0;
    std::size_t scan = rng() % n;
    std::size_t assigned = 0;
    while (grown < targets[0] && assigned < n) {
      std::int32_t v;
      if (frontier.empty()) {
        // Disconnected remainder: continue from the next unassigned vertex.
        while (side[scan] == 0) scan = (scan + 1) % n;
        v = static_cast<std::int32_t>(scan);
      } else {
        v = frontier.pop().second;
      }
      side[v] = 0;
      ++assigned;
      grown += static_cast<double>(g.vwgt[v]);
      for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
        const auto u = g.adjncy[e];
        if (side[u] == 0) continue;
        gain[u] += 2 * g.adjwgt[e];
        frontier.upsert(u, gain[u]);
      }
    }

    rebalance(g, side, 2, caps, targets);
    fm_refine(g, side, 2, caps, 4);
    const std::int64_t cut = edge_cut(g, side);
    const auto pw = part_weights(g, side, 2);
    const std::int64_t excess =
        std::max<std::int64_t>(0, pw[0] - caps[0]) + std::max<std::int64_t>(0, pw[1] - caps[1]);
    if (best.empty() || excess < best_excess || (excess == best_excess && cut < best_cut)) {
      best = std::move(side);
      best_cut = cut;
      best_excess = excess;
    }
  }
  return best;
}

void recursive_bisection(const WeightedGraph& g, std::span<const std::int32_t> ids, int nparts,
                         int first_part, double tolerance, std::mt19937_64& rng,
                         std::vector<int>& out) {
  if (nparts == 1 || g.size() <= 1) {
    for (auto id : ids) out[static_cast<std::size_t>(id)] = first_part;
    return;
  }
  const int left = nparts / 2;
  const auto side = bisect(g, static_cast<double>(left) / nparts, tolerance, rng);
  std::array<std::vector<std::int32_t>, 2> local;
  std::array<std::vector<std::int32_t>, 2> global;
  for (std::int32_t v = 0; v < g.size(); ++v) {
    local[side[v]].push_back(v);
    global[side[v]].push_back(ids[static_cast<std::size_t>(v)]);
  }
  for (int s = 0; s < 2; ++s) {
    const WeightedGraph sub = induced_subgraph(g, local[s]);
    recursive_bisection(sub, global[s], s == 0 ? left : nparts - left,
                        s == 0 ? first_part : first_part + left, tolerance, rng, out);
  }
}

}  // namespace

RefineResult fm_refine(const WeightedGraph& g, std::span<int> part, int nparts,
                       std::span<const std::int64_t> caps, int max_passes) {
  RefineResult r;
  r.cut_before = edge_cut(g, part);
  std::int64_t cut = r.cut_before;
  auto pw = part_weights(g, part, nparts);
  for (int pass = 0; pass < max_passes; ++pass) {
    const std::size_t kept = fm_pass(g, part, nparts, caps, pw, cut);
    r.moves += kept;
    if (kept == 0) break;
  }
  r.cut_after = cut;
  return r;
}

bool rebalance(const WeightedGraph& g, std::span<int> part, int nparts,
               std::span<const std::int64_t> caps, std::span<const double> targets) {
  auto pw = part_weights(g, part, nparts);
  const std::int64_t maxvw = g.max_vertex_weight();
  std::vector<std::int64_t> relaxed(caps.begin(), caps.end());
  for (int p = 0; p < nparts; ++p) {
    relaxed[p] = std::max(caps[p], static_cast<std::int64_t>(std::ceil(targets[p])) + maxvw - 1);
  }
  for (std::span<const std::int64_t> phase : {caps, std::span<const std::int64_t>(relaxed)}) {
    for (;;) {
      int heavy = -1;
      for (int p = 0; p < nparts; ++p) {
        const std::int64_t excess = pw[p] - phase[p];
        if (excess > 0 && (heavy < 0 || excess > pw[heavy] - phase[heavy])) heavy = p;
      }
      if (heavy < 0) break;
      if (!drain_part(g, part, nparts, heavy, phase, pw)) break;
    }
  }
  for (int p = 0; p < nparts; ++p) {
    if (pw[p] > caps[p]) return false;
  }
  return true;
}

std::vector<int> initial_partition(const WeightedGraph& g, int nparts, double tolerance,
                                   std::mt19937_64& rng) {
  std::vector<int> out(static_cast<std::size_t>(g.size()), 0);
  std::vector<std::int32_t> ids(static_cast<std::size_t>(g.size()));
  for (std::int32_t v = 0; v < g.size(); ++v) ids[static_cast<std::size_t>(v)] = v;
  recursive_bisection(g, ids, nparts, 0, tolerance, rng, out);
  return out;
}

}  // namespace latdecomp::multilevel
