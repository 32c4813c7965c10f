#include "awstokes/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace awstokes {

double reference_eigenvalue(Domain domain) {
  switch (domain) {
    case Domain::Square: return 52.344691168;
    case Domain::LShape: return 32.13269465;
    case Domain::Slit: return 29.9168629;
  }
  throw InvalidArgument("reference_eigenvalue: unknown domain");
}

RateFit fit_rate(std::span<const long> ndof, std::span<const double> err, int last, std::string quantity) {
  if (ndof.size() != err.size()) throw InvalidArgument("fit_rate: size mismatch");
  if (last < 2) throw InvalidArgument("fit_rate: at least two points are required");
  std::vector<double> x, y;
  const std::size_t start = err.size() > static_cast<std::size_t>(last) ? err.size() - static_cast<std::size_t>(last) : 0;
  for (std::size_t i = start; i < err.size(); ++i) {
    if (err[i] > 0.0 && std::isfinite(err[i]) && ndof[i] > 0) {
      x.push_back(std::log(static_cast<double>(ndof[i])));
      y.push_back(std::log(err[i]));
    }
  }
  if (x.size() < 2) throw InvalidArgument("fit_rate: fewer than two positive entries");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_rate: all N are equal");
  RateFit fit;
  fit.quantity = std::move(quantity);
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = static_cast<int>(x.size());
  return fit;
}

std::vector<RateFit> fit_rates(const ConvergenceTable& table, int last) {
  std::vector<long> n;
  std::vector<double> eh, es, et, eta, mu;
  for (const ConvergenceRow& r : table.rows) {
    n.push_back(r.ndof);
    eh.push_back(r.err_h);
    es.push_back(r.err_star);
    et.push_back(r.err_tilde);
    eta.push_back(r.eta2);
    mu.push_back(r.mu2);
  }
  std::vector<RateFit> out;
  const std::pair<const char*, const std::vector<double>*> cols[] = {
      {"err_h", &eh}, {"err_star", &es}, {"err_tilde", &et}, {"eta2", &eta}, {"mu2", &mu}};
  for (const auto& [name, v] : cols) {
    try {
      out.push_back(fit_rate(n, *v, last, name));
    } catch (const InvalidArgument&) {
      // Too few usable levels for this quantity; the row is omitted.
    }
  }
  return out;
}

void write_table_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "level,N,lambda_h,lambda_star,lambda_tilde,eta2,mu2,err_h,err_star,err_tilde\n";
  char buf[512];
  for (const ConvergenceRow& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%d,%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.level, r.ndof,
                  r.lambda_h, r.lambda_star, r.lambda_tilde, r.eta2, r.mu2, r.err_h, r.err_star, r.err_tilde);
    os << buf;
  }
}

ConvergenceTable read_table_csv(std::istream& is) {
  ConvergenceTable table;
  std::string line;
  if (!std::getline(is, line) || line.rfind("level,N,", 0) != 0) throw InvalidArgument("read_table_csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw InvalidArgument("read_table_csv: expected 10 columns");
    ConvergenceRow r;
    try {
      r.level = std::stoi(cells[0]);
      r.ndof = std::stol(cells[1]);
      double* dst[] = {&r.lambda_h, &r.lambda_star, &r.lambda_tilde, &r.eta2, &r.mu2,
                       &r.err_h,    &r.err_star,    &r.err_tilde};
      for (std::size_t i = 0; i < 8; ++i) *dst[i] = std::strtod(cells[i + 2].c_str(), nullptr);
    } catch (const std::exception&) {
      throw InvalidArgument("read_table_csv: malformed row '" + line + "'");
    }
    table.rows.push_back(r);
  }
  return table;
}

void write_rates_csv(std::ostream& os, const std::vector<RateFit>& rates) {
  os << "quantity,slope,residual\n";
  char buf[256];
  for (const RateFit& r : rates) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n", r.quantity.c_str(), r.slope, r.residual);
    os << buf;
  }
}

BenchmarkResult run_benchmark(const BenchmarkOptions& options) {
  namespace fs = std::filesystem;
  const AdaptiveConfig& cfg = options.config;
  fs::create_directories(options.out_dir);
  const std::string stem = std::string(domain_name(cfg.domain)) + "_" + std::string(mode_name(cfg.mode));
  BenchmarkResult out;

  auto observer = [&](const LevelResult& r) {
    const std::string tag = stem + "_level" + std::to_string(r.mesh.level);
    if (options.save_meshes) {
      const fs::path p = options.out_dir / (tag + ".mesh");
      std::ofstream f(p);
      write_mesh(f, r.mesh);
      out.files.push_back(p);
    }
    if (options.export_fields) {
      const std::pair<const char*, const PiecewiseVector*> fields[] = {
          {"uh", &r.uh}, {"ustar", &r.post.u}, {"utilde", &r.utilde}};
      for (const auto& [name, field] : fields) {
        const fs::path p = options.out_dir / (tag + "_" + name + ".txt");
        std::ofstream f(p);
        write_field_table(f, *field);
        out.files.push_back(p);
      }
      const fs::path p = options.out_dir / (tag + "_eta.csv");
      std::ofstream f(p);
      write_estimator_csv(f, r.eta);
      out.files.push_back(p);
    }
    if (options.on_level) options.on_level(r);
  };

  out.run = adaptive_loop(cfg, observer);
  out.rates = fit_rates(out.run.table);

  const fs::path table_path = options.out_dir / (stem + ".csv");
  {
    std::ofstream f(table_path);
    if (!f) throw Error("cannot write " + table_path.string());
    write_table_csv(f, out.run.table);
  }
  const fs::path rates_path = options.out_dir / (stem + "_rates.csv");
  {
    std::ofstream f(rates_path);
    if (!f) throw Error("cannot write " + rates_path.string());
    write_rates_csv(f, out.rates);
  }
  out.files.push_back(table_path);
  out.files.push_back(rates_path);
  return out;
}

}  // namespace awstokes
