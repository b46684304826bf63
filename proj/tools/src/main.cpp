// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "latdecomp/errors.hpp"

namespace {

using namespace latdecomp;

void add_gen(CLI::App& app, cli::GenConfig& cfg) {
  auto* gen = app.add_subcommand("gen", "Generate a synthetic geometry file");
  gen->add_option("--kind", cfg.kind, "bifurcation, cylinder, channel or box")
      ->capture_default_str();
  gen->add_option("--out", cfg.out, "Output geometry file")->required();
  gen->add_option("--radius", cfg.radius, "Cylinder radius")->capture_default_str();
  gen->add_option("--length", cfg.length, "Cylinder or channel length")->capture_default_str();
  gen->add_option("--width", cfg.width, "Channel width or box edge")->capture_default_str();
  gen->add_option("--wall-q", cfg.wall_q, "Wall offset for channel and box")->capture_default_str();
  auto& b = cfg.bifurcation;
  gen->add_option("--trunk-radius", b.trunk_radius)->capture_default_str();
  gen->add_option("--branch-radius", b.branch_radius)->capture_default_str();
  gen->add_option("--angle", b.branch_angle_deg, "Branch angle to the trunk axis in degrees")
      ->capture_default_str();
  gen->add_option("--trunk-length", b.trunk_length)->capture_default_str();
  gen->add_option("--branch-length", b.branch_length)->capture_default_str();
  gen->add_option("--fluid-fraction", b.target_fluid_fraction,
                  "Pad the bounding box down to this fluid fraction");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-weighted domain decomposition for sparse lattice geometries"};
  app.require_subcommand(1);

  cli::GenConfig gen_cfg;
  add_gen(app, gen_cfg);

  cli::CalibrationConfig cal_cfg;
  auto* cal = app.add_subcommand("calibrate", "Time the kernel on six cylinders and fit costs");
  cal->add_option("--out", cal_cfg.out_dir, "Output directory")->capture_default_str();
  cal->add_option("--observations", cal_cfg.observations,
                  "Fit this observations CSV instead of timing");
  cal->add_option("--steps", cal_cfg.timing.measure_steps, "Steps per timed window")
      ->capture_default_str();
  cal->add_option("--repeats", cal_cfg.timing.repeats, "Timed sweeps")->capture_default_str();
  cal->add_option("--warmup", cal_cfg.timing.warmup_steps)->capture_default_str();
  cal->add_option("--sites", cal_cfg.sites_per_cylinder, "Sites per cylinder")
      ->capture_default_str();
  cal->add_option("--base", cal_cfg.base, "Bulk weight after rounding (power of two)")
      ->capture_default_str();

  cli::ExperimentConfig exp_cfg;
  std::vector<std::string> variants{"baseline", "weights", "sfc", "weights+sfc"};
  std::filesystem::path weights_path;
  std::filesystem::path costs_path;
  std::filesystem::path out_dir;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* dec = app.add_subcommand("decompose", "Partition a geometry and score each variant");
  dec->add_option("--geometry", exp_cfg.geometry, "Geometry file")->required();
  dec->add_option("--nparts", exp_cfg.nparts, "Part counts, comma separated")
      ->required()
      ->delimiter(',');
  dec->add_option("--variants", variants, "Subset of baseline,weights,sfc,weights+sfc")
      ->delimiter(',')
      ->capture_default_str();
  dec->add_option("--weights", weights_path, "Weight table file");
  dec->add_option("--costs", costs_path, "Cost model the loads are measured with");
  dec->add_option("--tolerance", exp_cfg.tolerance, "Balance tolerance")->capture_default_str();
  dec->add_option("--seed", exp_cfg.seed)->capture_default_str();
  dec->add_option("--alpha", exp_cfg.comm.alpha, "Seconds per message")->capture_default_str();
  dec->add_option("--beta", exp_cfg.comm.beta, "Seconds per byte")->capture_default_str();
  dec->add_option("--bytes-per-link", exp_cfg.comm.bytes_per_link)->capture_default_str();
  dec->add_option("--site-time", exp_cfg.site_time, "Seconds per bulk site update")
      ->capture_default_str();
  dec->add_option("--threads", threads, "Worker threads")->capture_default_str();
  dec->add_option("--out", out_dir, "Output directory for metrics.csv and summary.txt");
  dec->add_flag("--dump-partitions", exp_cfg.dump_partitions, "Write site_index,part files");

  std::vector<std::filesystem::path> report_files;
  auto* rep = app.add_subcommand("report", "Tabulate metrics CSVs");
  rep->add_option("csv", report_files, "Metrics CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("gen")) {
      const Geometry g = cli::generate(gen_cfg);
      save_geometry(g, gen_cfg.out);
      const auto counts = g.type_counts();
      std::cout << g.size() << " sites, fluid fraction " << fluid_fraction(g) << "\n";
      for (SiteType t : kAllSiteTypes) {
        std::cout << "  " << site_type_name(t) << " " << counts[index_of(t)] << "\n";
      }
    } else if (app.got_subcommand("calibrate")) {
      cli::run_calibration(cal_cfg, std::cout);
    } else if (app.got_subcommand("decompose")) {
      exp_cfg.variants.clear();
      for (const auto& v : variants) exp_cfg.variants.push_back(cli::parse_variant(v));
      if (!weights_path.empty()) exp_cfg.weights = load_weight_table(weights_path);
      if (!costs_path.empty()) exp_cfg.costs = load_costs(costs_path);
      if (!out_dir.empty()) exp_cfg.out_dir = out_dir;
      exp_cfg.threads = threads;
      const Geometry g = load_geometry(exp_cfg.geometry);
      const auto rows = cli::run_experiment(exp_cfg, g);
      if (exp_cfg.out_dir) {
        cli::write_summary(std::cout, rows);
      } else {
        cli::write_metrics_csv(std::cout, rows);
      }
    } else if (app.got_subcommand("report")) {
      cli::report(report_files, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
