// surface-stokes: convergence, eigenvalue and filtering studies.

#include "surfstokes/studies.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <regex>

using namespace surfstokes;

namespace
{

void parse_levels(std::string const & text, RunConfig & config)
{
  static std::regex const range(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
  static std::regex const single(R"(^\s*(\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, range)) {
    config.level_min = std::stoi(m[1]);
    config.level_max = std::stoi(m[2]);
  } else if (std::regex_match(text, m, single)) {
    config.level_min = config.level_max = std::stoi(m[1]);
  } else {
    throw CLI::ValidationError("--levels", "expected a..b");
  }
  if (config.level_max < config.level_min || config.level_max > 8)
    throw CLI::ValidationError("--levels", "need a <= b <= 8");
}

void print_table(ErrorReport const & report)
{
  std::printf("%5s %10s %11s %11s %11s %11s %11s %11s %11s %8s %7s %7s\n", "level", "h", "energy", "l2", "h1",
              "pk_norm", "lam1", "lam2", "lam3", "Jh", "eoc_E", "eoc_L2");
  for (auto const & r : report.rows)
    std::printf("%5d %10.4g %11.4e %11.4e %11.4e %11.4e %11.4e %11.4e %11.4e %8s %7.3f %7.3f\n", r.level, r.h,
                r.energy, r.l2, r.h1, r.pk_norm, r.lam[0], r.lam[1], r.lam[2], r.Jh.c_str(), r.eoc_energy,
                r.eoc_l2);
}

} // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Divergence-conforming interior penalty Stokes solver on ellipsoids"};
  app.require_subcommand(1);

  RunConfig config;
  std::string levels = "2..5";
  std::string filter = "none";
  std::string out;
  std::optional<double> epsilon;

  auto add_common = [&](CLI::App * sub) {
    sub->add_option("--c", config.c, "ellipsoid z semi-axis (1 = sphere)")->check(CLI::PositiveNumber);
    sub->add_option("--levels", levels, "refinement levels a..b");
    sub->add_option("--rho", config.rho, "penalty parameter")->check(CLI::PositiveNumber);
    sub->add_option("--jitter", config.jitter, "base vertex jitter of the icosphere (0 = symmetric)")
      ->check(CLI::Range(0.0, 0.25));
    sub->add_option("--seed", config.seed, "jitter seed");
    sub->add_flag("-v,--verbose", config.verbose, "per-level progress on stderr");
  };

  auto * run = app.add_subcommand("run", "convergence study");
  add_common(run);
  run->add_option("--alpha", config.alpha, "eps = h^alpha")->check(CLI::Range(0.0, 2.0));
  run->add_option("--epsilon", epsilon, "fixed eps (overrides --alpha)")->check(CLI::NonNegativeNumber);
  run->add_option("--filter", filter, "none | manual | known:<d> | auto:<alpha> | forcing");
  run->add_option("--add-killing", config.kappa, "replace f by f + kappa k1");
  run->add_option("--out", out, "output directory");
  run->add_flag("--dump-mesh", config.dump_mesh, "write mesh_L<k>.off");
  bool no_eigen = false;
  run->add_flag("--no-eigen", no_eigen, "skip the eigenvalue columns unless the filter needs them");

  auto * eig = app.add_subcommand("eigen", "lowest eigenvalues per level and Richardson extrapolation");
  add_common(eig);
  eig->add_option("--count", config.eigen_count, "number of eigenpairs")->check(CLI::Range(3, 10));

  auto * cmp = app.add_subcommand("compare", "none vs manual vs automatic filtering");
  add_common(cmp);
  cmp->add_option("--alpha", config.alpha, "eps = h^alpha")->check(CLI::Range(0.0, 2.0));
  cmp->add_option("--filter", filter, "automatic policy: auto:<alpha> | known:<d>");
  cmp->add_option("--add-killing", config.kappa, "replace f by f + kappa k1 (uses the forcing pipeline)");
  cmp->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    parse_levels(levels, config);
    config.filter = FilterPolicy::parse(filter);
    config.fixed_epsilon = epsilon;
    config.out = out;
    config.compute_eigen = !no_eigen;

    if (run->parsed()) {
      auto const study = convergence_study(config);
      print_table(study.report);
    } else if (eig->parsed()) {
      auto const study = eigen_study(config);
      std::printf("%5s %10s", "level", "h");
      for (int i = 0; i < config.eigen_count; ++i)
        std::printf("   Lambda_%d   ", i + 1);
      std::printf("\n");
      for (std::size_t l = 0; l < study.levels.size(); ++l) {
        std::printf("%5d %10.4g", study.levels[l], study.h[l]);
        for (double v : study.lambda[l])
          std::printf(" %13.6e", v);
        std::printf("\n");
      }
      std::printf("%16s", "extrapolated");
      for (double v : study.extrapolated)
        std::printf(" %13.6e", v);
      std::printf("\n");
    } else if (cmp->parsed()) {
      auto const result = killing_filter_study(config);
      for (auto const * s : {&result.none, &result.manual, &result.automatic}) {
        std::printf("filter %s\n", s->config.filter.str().c_str());
        print_table(s->report);
      }
    }
  } catch (std::exception const & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
