// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "latdecomp/errors.hpp"
#include "latdecomp/graph.hpp"
#include "latdecomp/sfc.hpp"

namespace latdecomp::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string format_fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

FittedCosts costs_from_weights(const WeightTable& w) {
  const double scale = 10.0 / w[SiteType::Bulk];
  return FittedCosts::from_values(w[SiteType::Bulk] * scale, w[SiteType::Wall] * scale,
                                  w[SiteType::InOutlet] * scale,
                                  w[SiteType::WallInOutlet] * scale);
}

}  // namespace

BifurcationSpec reference_bifurcation() {
  BifurcationSpec s;
  s.trunk_radius = 6.0;
  s.branch_radius = 5.0;
  s.branch_angle_deg = 15.0;
  s.trunk_length = 200;
  s.branch_length = 170;
  s.target_fluid_fraction = 0.10;
  return s;
}

Geometry generate(const GenConfig& cfg) {
  if (cfg.kind == "bifurcation") return generate_bifurcation(cfg.bifurcation);
  if (cfg.kind == "cylinder") return generate_cylinder(cfg.radius, cfg.length);
  if (cfg.kind == "channel") return generate_channel(cfg.length, cfg.width, 1, cfg.wall_q);
  if (cfg.kind == "box") return generate_closed_box({cfg.width, cfg.width, cfg.width}, cfg.wall_q);
  throw Error("unknown geometry kind '" + cfg.kind +
              "' (expected bifurcation, cylinder, channel or box)");
}

CalibrationResult run_calibration(const CalibrationConfig& cfg, std::ostream& log) {
  CalibrationResult r;
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.observations) {
    r.observations = load_observations(*cfg.observations);
    log << "read " << r.observations.size() << " observations from "
        << cfg.observations->string() << "\n";
  } else {
    const auto cylinders = calibration_cylinders(cfg.sites_per_cylinder);
    r.observations = measure_site_costs(cylinders, cfg.timing);
    auto out = open_out(cfg.out_dir / "observations.csv");
    write_observations(out, r.observations);
    log << "timed " << cylinders.size() << " cylinders\n";
  }
  try {
    r.costs = fit_costs(r.observations);
  } catch (const UnderdeterminedFitError& e) {
    throw UnderdeterminedFitError(std::string(e.what()) +
                                  "; add geometries with different aspect ratios");
  }
  r.weights = round_costs(r.costs, cfg.base);
  {
    auto out = open_out(cfg.out_dir / "costs.txt");
    write_costs(out, r.costs);
  }
  {
    auto out = open_out(cfg.out_dir / "weights.txt");
    write_weight_table(out, r.weights);
  }
  log << "type        cost   weight\n";
  for (SiteType t : kAllSiteTypes) {
    log << std::left << std::setw(10) << site_type_name(t) << std::right << std::setw(8)
        << format_fixed(r.costs[t], 3) << std::setw(9) << r.weights[t] << "\n";
  }
  log << "relative rms residual " << format_fixed(r.costs.relative_rms_residual, 5) << "\n";
  for (SiteType t : r.costs.clamped) {
    log << "warning: " << site_type_name(t) << " fitted non-positive and was pinned\n";
  }
  for (SiteType t : r.costs.unobserved) {
    log << "warning: " << site_type_name(t) << " never observed; cost borrowed\n";
  }
  return r;
}

std::string_view variant_label(Variant v) noexcept {
  switch (v) {
    case Variant::Baseline: return "baseline";
    case Variant::Weights: return "weights";
    case Variant::Sfc: return "sfc";
    case Variant::WeightsSfc: return "weights+sfc";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  for (Variant v : {Variant::Baseline, Variant::Weights, Variant::Sfc, Variant::WeightsSfc}) {
    if (variant_label(v) == s) return v;
  }
  throw Error("unknown variant '" + std::string(s) +
              "' (expected baseline, weights, sfc or weights+sfc)");
}

int worker_count(int requested) {
  int n = std::max(1, requested);
  if (const char* env = std::getenv("LATTICE_DECOMP_THREADS")) {
    int cap = 0;
    const auto* end = env + std::char_traits<char>::length(env);
    if (std::from_chars(env, end, cap).ec == std::errc{} && cap > 0) n = std::min(n, cap);
  }
  return n;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, const Geometry& g) {
  if (cfg.nparts.empty() || cfg.variants.empty()) {
    throw Error("an experiment needs at least one part count and one variant");
  }
  const WeightTable weights = cfg.weights.value_or(WeightTable{{4, 8, 16, 16}});
  const FittedCosts costs = cfg.costs.value_or(costs_from_weights(weights));

  const auto unit_w = assign_weights(g, WeightTable::unit());
  const auto fitted_w = assign_weights(g, weights);
  const LatticeGraph unit_graph = build_graph(g, unit_w);
  const LatticeGraph fitted_graph = build_graph(g, fitted_w);

  const bool any_sfc = std::any_of(cfg.variants.begin(), cfg.variants.end(), [](Variant v) {
    return v == Variant::Sfc || v == Variant::WeightsSfc;
  });
  std::optional<MortonSorted> sorted;
  LatticeGraph sorted_unit;
  LatticeGraph sorted_fitted;
  if (any_sfc) {
    sorted = sort_by_morton(g);
    sorted_unit = build_graph(sorted->geometry, assign_weights(sorted->geometry, WeightTable::unit()));
    sorted_fitted = build_graph(sorted->geometry, assign_weights(sorted->geometry, weights));
  }

  std::vector<ExperimentRow> rows;
  for (int k : cfg.nparts) {
    for (Variant v : cfg.variants) {
      ExperimentRow r;
      r.variant = v;
      r.nparts = k;
      r.seed = cfg.seed;
      rows.push_back(std::move(r));
    }
  }

  auto run_row = [&](ExperimentRow& row) {
    try {
      PartitionConfig pc;
      pc.nparts = row.nparts;
      pc.tolerance = cfg.tolerance;
      pc.seed = cfg.seed;
      std::vector<int> assignment;
      switch (row.variant) {
        case Variant::Baseline:
          assignment = partition_kway(unit_graph, pc).assignment;
          break;
        case Variant::Weights:
          assignment = partition_kway(fitted_graph, pc).assignment;
          break;
        case Variant::Sfc:
        case Variant::WeightsSfc: {
          const auto& graph = row.variant == Variant::Sfc ? sorted_unit : sorted_fitted;
          const auto in_sorted = partition_geom_kway(graph, pc).assignment;
          assignment.resize(in_sorted.size());
          for (std::size_t i = 0; i < assignment.size(); ++i) {
            assignment[i] = in_sorted[sorted->permutation[i]];
          }
          break;
        }
      }
      row.metrics = compute_metrics(g, unit_graph, assignment, row.nparts, costs, cfg.comm,
                                    cfg.site_time);
      if (cfg.dump_partitions) row.assignment = std::move(assignment);
    } catch (const Error& e) {
      row.error = e.what();
    }
  };

  const int workers = std::min<int>(worker_count(cfg.threads), static_cast<int>(rows.size()));
  if (workers <= 1) {
    for (auto& row : rows) run_row(row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) run_row(rows[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  if (cfg.out_dir) {
    std::filesystem::create_directories(*cfg.out_dir);
    {
      auto out = open_out(*cfg.out_dir / "metrics.csv");
      write_metrics_csv(out, rows);
    }
    {
      auto out = open_out(*cfg.out_dir / "summary.txt");
      write_summary(out, rows);
    }
    if (cfg.dump_partitions) {
      for (const auto& row : rows) {
        if (row.assignment.empty()) continue;
        std::string name = std::string(variant_label(row.variant));
        std::replace(name.begin(), name.end(), '+', '_');
        auto out = open_out(*cfg.out_dir /
                            ("partition_" + name + "_" + std::to_string(row.nparts) + ".csv"));
        write_partition_csv(out, row.assignment);
      }
    }
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kMetricsCsvHeader << "\n";
  for (const auto& row : rows) {
    if (row.metrics) {
      out << metrics_csv_row(variant_label(row.variant), row.nparts, row.seed, *row.metrics)
          << "\n";
    } else {
      out << variant_label(row.variant) << ',' << row.nparts << ',' << row.seed
          << ",NA,NA,NA,NA,NA\n";
    }
  }
}

void write_summary(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "Reduction = share of the baseline excess imbalance (imbalance - 1) removed.\n";
  std::vector<int> counts;
  for (const auto& r : rows) {
    if (std::find(counts.begin(), counts.end(), r.nparts) == counts.end()) {
      counts.push_back(r.nparts);
    }
  }
  for (int k : counts) {
    const ExperimentRow* base = nullptr;
    for (const auto& r : rows) {
      if (r.nparts == k && r.variant == Variant::Baseline && r.metrics) base = &r;
    }
    out << "nparts " << k << "\n";
    for (const auto& r : rows) {
      if (r.nparts != k) continue;
      out << "  " << std::left << std::setw(12) << variant_label(r.variant) << std::right;
      if (!r.metrics) {
        out << " failed: " << r.error << "\n";
        continue;
      }
      out << " imbalance " << format_fixed(r.metrics->load_imbalance, 4) << "  edge cut "
          << r.metrics->edge_cut;
      if (base && &r != base) {
        const double red =
            imbalance_reduction(base->metrics->load_imbalance, r.metrics->load_imbalance);
        const double cut_change =
            base->metrics->edge_cut == 0
                ? 0.0
                : 100.0 * static_cast<double>(r.metrics->edge_cut - base->metrics->edge_cut) /
                      static_cast<double>(base->metrics->edge_cut);
        out << "  reduction " << format_fixed(red, 1) << "%  cut change "
            << format_fixed(cut_change, 1) << "%";
      }
      if (r.metrics->has_empty_part) out << "  (empty part)";
      out << "\n";
    }
  }
}

void report(const std::vector<std::filesystem::path>& csvs, std::ostream& out) {
  std::vector<std::string> texts;
  for (const auto& p : csvs) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    texts.push_back(buf.str());
  }
  report(texts, out);
}

void report(const std::vector<std::string>& csv_texts, std::ostream& out) {
  const auto required = split(std::string(kMetricsCsvHeader), ',');
  std::vector<std::vector<std::string>> table;
  for (const auto& text : csv_texts) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty metrics file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    std::vector<std::size_t> column(required.size());
    for (std::size_t c = 0; c < required.size(); ++c) {
      const auto it = std::find(header.begin(), header.end(), required[c]);
      if (it == header.end()) throw SchemaError("metrics file lacks column '" + required[c] + "'");
      column[c] = static_cast<std::size_t>(it - header.begin());
    }
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto cells = split(line, ',');
      if (cells.size() != header.size()) {
        throw SchemaError("row has " + std::to_string(cells.size()) + " fields, header has " +
                          std::to_string(header.size()));
      }
      std::vector<std::string> row;
      for (std::size_t c : column) row.push_back(cells[c]);
      table.push_back(std::move(row));
    }
  }

  // Reduction of each row relative to the baseline with the same nparts and seed.
  std::map<std::pair<std::string, std::string>, double> baseline;
  for (const auto& row : table) {
    if (row[0] != "baseline") continue;
    try {
      baseline[{row[1], row[2]}] = std::stod(row[4]);
    } catch (const std::exception&) {
    }
  }
  auto headings = required;
  headings.push_back("reduction_%");
  for (auto& row : table) {
    std::string red = "-";
    const auto it = baseline.find({row[1], row[2]});
    if (row[0] != "baseline" && it != baseline.end()) {
      try {
        red = format_fixed(imbalance_reduction(it->second, std::stod(row[4])), 1);
      } catch (const std::exception&) {
      }
    }
    row.push_back(red);
  }

  std::vector<std::size_t> width(headings.size());
  for (std::size_t c = 0; c < headings.size(); ++c) {
    width[c] = headings[c].size();
    for (const auto& row : table) width[c] = std::max(width[c], row[c].size());
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << cells[c] << std::right;
      } else {
        out << std::setw(static_cast<int>(width[c])) << cells[c];
      }
    }
    out << "\n";
  };
  emit(headings);
  for (const auto& row : table) emit(row);
}

}  // namespace latdecomp::cli
