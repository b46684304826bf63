// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/weights.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "latdecomp/errors.hpp"

namespace latdecomp {

namespace {

constexpr double kBulkReference = 10.0;
constexpr double kClampFraction = 1e-3;

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SchemaError("cannot parse number '" + s + "' in " + context);
  }
}

// Reads "type=value" lines; every site type must appear exactly once.
std::array<double, kSiteTypeCount> read_type_values(std::istream& in, const char* what) {
  std::array<double, kSiteTypeCount> values{};
  std::array<bool, kSiteTypeCount> seen{};
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SchemaError(std::string(what) + ": expected type=value");
    const auto type = parse_site_type(trim(line.substr(0, eq)));
    if (!type) {
      throw SchemaError(std::string(what) + ": unknown site type '" + line.substr(0, eq) + "'");
    }
    if (seen[index_of(*type)]) {
      throw SchemaError(std::string(what) + ": duplicate entry for " +
                        std::string(site_type_name(*type)));
    }
    seen[index_of(*type)] = true;
    values[index_of(*type)] = parse_double(trim(line.substr(eq + 1)), what);
  }
  for (auto t : kAllSiteTypes) {
    if (!seen[index_of(t)]) {
      throw SchemaError(std::string(what) + ": missing entry for " +
                        std::string(site_type_name(t)));
    }
  }
  return values;
}

struct LsqSolution {
  Eigen::VectorXd x;
  double relative_rms = 0.0;
};

// Ordinary least squares via column-pivoted QR on column-scaled counts
// (scaling leaves the solution unchanged). Throws when the columns are not
// independent.
LsqSolution solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd col_scale = a.colwise().maxCoeff().transpose();
  const Eigen::MatrixXd scaled = a * col_scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-10);
  if (qr.rank() < a.cols()) {
    throw UnderdeterminedFitError("site-type counts are rank deficient (rank " +
                                  std::to_string(qr.rank()) + " < " + std::to_string(a.cols()) +
                                  "); vary the benchmark aspect ratios");
  }
  const Eigen::VectorXd y = qr.solve(b);
  LsqSolution out;
  out.x = col_scale.cwiseInverse().asDiagonal() * y;
  const Eigen::VectorXd rel = (a * out.x - b).cwiseQuotient(b);
  out.relative_rms = std::sqrt(rel.squaredNorm() / static_cast<double>(b.size()));
  return out;
}

}  // namespace

FittedCosts FittedCosts::from_values(double bulk, double wall, double inout, double wallinout) {
  for (double v : {bulk, wall, inout, wallinout}) {
    if (!(v > 0.0)) throw Error("site costs must be positive");
  }
  FittedCosts c;
  const double s = kBulkReference / bulk;
  c.cost = {bulk * s, wall * s, inout * s, wallinout * s};
  return c;
}

FittedCosts fit_costs(std::span<const BenchmarkObservation> observations) {
  if (observations.empty()) throw UnderdeterminedFitError("no benchmark observations");
  std::array<bool, kSiteTypeCount> present{};
  for (const auto& o : observations) {
    if (!(o.runtime_s > 0.0) || !std::isfinite(o.runtime_s)) {
      throw Error("benchmark observation with non-positive runtime");
    }
    bool any = false;
    for (std::size_t t = 0; t < kSiteTypeCount; ++t) {
      present[t] = present[t] || o.counts[t] > 0;
      any = any || o.counts[t] > 0;
    }
    if (!any) throw Error("benchmark observation without sites");
  }
  if (!present[index_of(SiteType::Bulk)]) {
    throw UnderdeterminedFitError("no bulk sites observed; cannot normalize costs");
  }

  // Columns still being solved for; pinned ones move to `clamped`.
  std::vector<std::size_t> active;
  for (std::size_t t = 0; t < kSiteTypeCount; ++t) {
    if (present[t]) active.push_back(t);
  }
  if (observations.size() < active.size()) {
    throw UnderdeterminedFitError(std::to_string(observations.size()) + " observations for " +
                                  std::to_string(active.size()) + " site types");
  }

  const auto m = static_cast<Eigen::Index>(observations.size());
  Eigen::VectorXd runtime(m);
  for (Eigen::Index i = 0; i < m; ++i) runtime(i) = observations[i].runtime_s;

  FittedCosts out;
  std::array<double, kSiteTypeCount> raw{};
  std::vector<std::size_t> pinned;
  double rms = 0.0;
  for (;;) {
    Eigen::MatrixXd a(m, static_cast<Eigen::Index>(active.size()));
    for (Eigen::Index i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        a(i, static_cast<Eigen::Index>(j)) = static_cast<double>(observations[i].counts[active[j]]);
      }
    }
    const auto sol = solve_least_squares(a, runtime);
    rms = sol.relative_rms;
    // Pin the most negative coefficient and re-solve without it.
    std::size_t worst = active.size();
    for (std::size_t j = 0; j < active.size(); ++j) {
      raw[active[j]] = sol.x(static_cast<Eigen::Index>(j));
      if (!(raw[active[j]] > 0.0) &&
          (worst == active.size() || raw[active[j]] < raw[active[worst]])) {
        worst = j;
      }
    }
    if (worst == active.size()) break;
    if (active[worst] == index_of(SiteType::Bulk)) {
      throw UnderdeterminedFitError("bulk cost fitted non-positive; observations inconsistent");
    }
    pinned.push_back(active[worst]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
    // Pinned columns contribute a negligible constant; re-fit the rest.
  }

  const double bulk = raw[index_of(SiteType::Bulk)];
  for (auto t : pinned) {
    raw[t] = kClampFraction * bulk;
    out.clamped.push_back(static_cast<SiteType>(t));
  }
  for (auto t : kAllSiteTypes) {
    if (present[index_of(t)]) continue;
    out.unobserved.push_back(t);
    const bool borrow_inout =
        t == SiteType::WallInOutlet && present[index_of(SiteType::InOutlet)];
    raw[index_of(t)] = borrow_inout ? raw[index_of(SiteType::InOutlet)] : bulk;
  }
  for (std::size_t t = 0; t < kSiteTypeCount; ++t) out.cost[t] = raw[t] * kBulkReference / bulk;
  out.relative_rms_residual = rms;
  return out;
}

WeightTable round_costs(const FittedCosts& costs, int base) {
  if (base < 1 || !std::has_single_bit(static_cast<unsigned>(base))) {
    throw Error("weight base must be a positive power of two");
  }
  const double bulk = costs[SiteType::Bulk];
  WeightTable w;
  for (auto t : kAllSiteTypes) {
    const double scaled = costs[t] / bulk * base;
    int rounded = 1;
    if (scaled > 1.0) {
      const double lower = std::exp2(std::floor(std::log2(scaled)));
      const double upper = 2.0 * lower;
      rounded = static_cast<int>(scaled - lower < upper - scaled ? lower : upper);
    }
    w.weight[index_of(t)] = rounded;
  }
  w.weight[index_of(SiteType::WallInOutlet)] = w.weight[index_of(SiteType::InOutlet)];
  return w;
}

std::vector<int> assign_weights(const Geometry& g, const WeightTable& w) {
  std::vector<int> out;
  out.reserve(g.size());
  for (const auto& s : g.sites()) out.push_back(w[s.type]);
  return out;
}

std::vector<double> assign_costs(const Geometry& g, const FittedCosts& c) {
  std::vector<double> out;
  out.reserve(g.size());
  for (const auto& s : g.sites()) out.push_back(c[s.type]);
  return out;
}

void write_weight_table(std::ostream& out, const WeightTable& w) {
  for (auto t : kAllSiteTypes) out << site_type_name(t) << '=' << w[t] << '\n';
}

WeightTable read_weight_table(std::istream& in) {
  const auto values = read_type_values(in, "weight table");
  WeightTable w;
  for (std::size_t t = 0; t < kSiteTypeCount; ++t) {
    const double v = values[t];
    if (v < 1.0 || v != std::floor(v) || v > 1e9) {
      throw SchemaError("weight table: weights must be positive integers");
    }
    w.weight[t] = static_cast<int>(v);
  }
  return w;
}

void write_costs(std::ostream& out, const FittedCosts& c) {
  const auto precision = out.precision(17);
  for (auto t : kAllSiteTypes) out << site_type_name(t) << '=' << c[t] << '\n';
  out.precision(precision);
}

FittedCosts read_costs(std::istream& in) {
  const auto v = read_type_values(in, "cost file");
  try {
    return FittedCosts::from_values(v[0], v[1], v[2], v[3]);
  } catch (const Error& e) {
    throw SchemaError(std::string("cost file: ") + e.what());
  }
}

void write_observations(std::ostream& out, std::span<const BenchmarkObservation> obs) {
  const auto precision = out.precision(17);
  out << "bulk,wall,inout,wallinout,runtime_s\n";
  for (const auto& o : obs) {
    out << o.counts[0] << ',' << o.counts[1] << ',' << o.counts[2] << ',' << o.counts[3] << ','
        << o.runtime_s << '\n';
  }
  out.precision(precision);
}

std::vector<BenchmarkObservation> read_observations(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "bulk,wall,inout,wallinout,runtime_s") {
    throw SchemaError("observation CSV must start with bulk,wall,inout,wallinout,runtime_s");
  }
  std::vector<BenchmarkObservation> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5) throw SchemaError("observation row needs 5 columns: " + line);
    BenchmarkObservation o;
    for (std::size_t t = 0; t < kSiteTypeCount; ++t) {
      std::size_t v = 0;
      const auto& c = cells[t];
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size()) {
        throw SchemaError("bad site count '" + c + "'");
      }
      o.counts[t] = v;
    }
    o.runtime_s = parse_double(cells[4], "observation CSV");
    out.push_back(o);
  }
  return out;
}

namespace {

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

WeightTable load_weight_table(const std::filesystem::path& path) {
  auto in = open_text(path);
  return read_weight_table(in);
}

FittedCosts load_costs(const std::filesystem::path& path) {
  auto in = open_text(path);
  return read_costs(in);
}

std::vector<BenchmarkObservation> load_observations(const std::filesystem::path& path) {
  auto in = open_text(path);
  return read_observations(in);
}

}  // namespace latdecomp
