#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "awstokes/adaptivity.hpp"

namespace awstokes {

/// Reference values of the smallest eigenvalue for nu = 1.
double reference_eigenvalue(Domain domain);

struct RateFit {
  std::string quantity;
  double slope = 0.0;
  double residual = 0.0;  ///< root mean square misfit in log space
  int points = 0;
};

/// Least-squares slope of log(err) against log(N) over the last `last` entries with err > 0.
RateFit fit_rate(std::span<const long> ndof, std::span<const double> err, int last = 3, std::string quantity = {});

/// Slopes of err_h, err_star, err_tilde, eta2 and mu2 against N.
std::vector<RateFit> fit_rates(const ConvergenceTable& table, int last = 3);

/// Columns: level,N,lambda_h,lambda_star,lambda_tilde,eta2,mu2,err_h,err_star,err_tilde.
void write_table_csv(std::ostream& os, const ConvergenceTable& table);
ConvergenceTable read_table_csv(std::istream& is);
/// Columns: quantity,slope,residual.
void write_rates_csv(std::ostream& os, const std::vector<RateFit>& rates);

struct BenchmarkOptions {
  AdaptiveConfig config;
  std::filesystem::path out_dir = ".";
  bool save_meshes = false;
  bool export_fields = false;
  /// Called after each solved level, after the files of that level are written.
  std::function<void(const LevelResult&)> on_level;
};

struct BenchmarkResult {
  AdaptiveResult run;
  std::vector<RateFit> rates;
  std::vector<std::filesystem::path> files;
};

/// Runs one study and writes <domain>_<mode>.csv and <domain>_<mode>_rates.csv to out_dir.
/// Mesh snapshots and per-level velocity tables are written on request. On a
/// solver failure the partial table is still written and run.failure is set.
BenchmarkResult run_benchmark(const BenchmarkOptions& options);

}  // namespace awstokes
