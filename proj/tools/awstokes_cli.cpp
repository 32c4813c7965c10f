#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "awstokes/experiments.hpp"

using namespace awstokes;

int main(int argc, char** argv) {
  CLI::App app{"Adaptive mixed finite element eigenvalue solver for the Stokes problem"};
  std::string domain = "square", mode = "adaptive", estimator = "eta", out = ".";
  double theta = 0.5, nu = 1.0, tol = 1e-10;
  double lambda_ref = 0.0;
  int levels = 8, eig = 1;
  long max_ndof = 0;
  bool save_meshes = false, export_fields = false;

  app.add_option("--domain", domain, "square, lshape or slit");
  app.add_option("--mode", mode, "uniform or adaptive");
  app.add_option("--theta", theta, "bulk marking parameter in (0, 1]");
  app.add_option("--levels", levels, "number of solved levels (0: limited by --max-ndof only)");
  app.add_option("--max-ndof", max_ndof, "stop before a mesh with more unknowns (0: no limit)");
  app.add_option("--eig", eig, "index of the eigenvalue to track (1 = smallest)");
  app.add_option("--estimator", estimator, "marking estimator: eta or mu");
  app.add_option("--nu", nu, "viscosity");
  app.add_option("--tol", tol, "eigensolver tolerance");
  auto* ref = app.add_option("--lambda-ref", lambda_ref, "reference eigenvalue (default: built-in value for nu = 1)");
  app.add_option("--out", out, "output directory");
  app.add_flag("--save-meshes", save_meshes, "write the mesh of every level");
  app.add_flag("--export-fields", export_fields, "write velocity tables and estimator CSV of every level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  BenchmarkOptions opts;
  try {
    AdaptiveConfig& cfg = opts.config;
    cfg.domain = parse_domain(domain);
    cfg.mode = parse_mode(mode);
    cfg.marking = parse_estimator(estimator);
    if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("--theta must lie in (0, 1]");
    if (!(nu > 0.0)) throw InvalidArgument("--nu must be positive");
    if (!(tol > 0.0)) throw InvalidArgument("--tol must be positive");
    if (eig < 1) throw InvalidArgument("--eig must be >= 1");
    if (levels < 0 || max_ndof < 0 || (levels == 0 && max_ndof == 0))
      throw InvalidArgument("--levels or --max-ndof must give a finite budget");
    cfg.theta = theta;
    cfg.nu = nu;
    cfg.eig_index = eig;
    cfg.max_levels = levels;
    cfg.max_ndof = max_ndof;
    cfg.eigen.tol = tol;
    if (ref->count() > 0)
      cfg.lambda_ref = lambda_ref;
    else if (nu == 1.0 && eig == 1)
      cfg.lambda_ref = reference_eigenvalue(cfg.domain);
    opts.out_dir = out;
    opts.save_meshes = save_meshes;
    opts.export_fields = export_fields;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  try {
    opts.on_level = [](const LevelResult& r) {
      std::printf("level %2d  N %8ld  lambda_h %.12f  lambda* %.12f  lambda~ %.12f  eta2 %.3e  mu2 %.3e\n",
                  r.mesh.level, r.ndof, r.eig.lambda, r.lambda_star, r.lambda_tilde, r.eta.total, r.mu.total);
      std::fflush(stdout);
    };
    const BenchmarkResult res = run_benchmark(opts);
    for (const RateFit& f : res.rates) std::printf("rate %-10s %8.4f  (misfit %.2e)\n", f.quantity.c_str(), f.slope, f.residual);
    for (const auto& p : res.files) std::printf("wrote %s\n", p.string().c_str());
    if (!res.run.failure.empty()) {
      std::cerr << "solver failure: " << res.run.failure << '\n';
      return 2;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
