#include "surfstokes/studies.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace surfstokes
{

TriSurfaceMesh study_mesh(RunConfig const & config, int level)
{
  return icosphere(Ellipsoid(config.c), level, config.jitter, config.seed);
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

LevelResult run_level(RunConfig const & config, int level, AnalyticKilling const & killing)
{
  auto const start = std::chrono::steady_clock::now();
  Ellipsoid const surface(config.c);
  auto const mesh = study_mesh(config, level);
  auto const sys = assemble(mesh, surface, config.rho, config.kappa);
  auto const exact = exact_fields(surface);

  LevelResult res;
  res.level = level;
  res.metrics = metrics(mesh, surface);
  res.h = res.metrics.h;
  res.n_velocity = sys.n_velocity();
  double const h = res.h;

  std::optional<EigenSet> eigs;
  if (config.compute_eigen || config.filter.needs_eigen()) {
    eigs = solve_eigen(sys, std::max(3, config.eigen_count));
    res.eigenvalues = eigs->values;
  }

  GammaField const reference =
    killing.remainder([exact](Vec3 const & y) { return exact.velocity(y); });

  Coefficients U;
  if (config.filter.mode == FilterMode::forcing) {
    auto const pipe = forcing_filter_pipeline(sys, *eigs, h);
    res.epsilon = h * h;
    U = pipe.U_h2;
    res.filter = pipe.report;
    // P_K of the full forcing f + kappa k_1
    double const kappa = config.kappa;
    KillingBasis const kb = killing.basis();
    GammaField const pkf = killing.projection([exact, kappa, kb](Vec3 const & y) {
      return Vec3(exact.forcing(y) + kappa * kb.value(0, y));
    });
    res.pk_f_error = measure_errors(sys, surface, pipe.epsilon * pipe.U_f, pkf).l2;
  } else {
    res.epsilon = config.fixed_epsilon ? *config.fixed_epsilon : std::pow(h, config.alpha);
    U = solve_stokes(sys, res.epsilon).U;
    res.filter = filter_velocity(sys, eigs ? &*eigs : nullptr, U, config.filter, h);
  }
  res.filter.level = level;
  res.pk_norm = pk_norm(sys, U);
  res.unfiltered = measure_errors(sys, surface, U, reference);
  res.errors = config.filter.mode == FilterMode::none
                 ? res.unfiltered
                 : measure_errors(sys, surface, res.filter.filtered, reference);
  res.filter.filtered = Coefficients(); // not needed past this point

  if (config.dump_mesh && !config.out.empty()) {
    std::filesystem::create_directories(config.out);
    write_off(mesh, config.out / ("mesh_L" + std::to_string(level) + ".off"));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.verbose)
    std::cerr << "level " << level << " h=" << h << " dofs=" << res.n_velocity << " l2=" << res.errors.l2
              << " energy=" << res.errors.energy << " (" << res.seconds << " s)\n";
  return res;
}

StudyResult convergence_study(RunConfig const & config)
{
  if (config.level_min < 0 || config.level_max < config.level_min || config.level_max > 8)
    throw Error("convergence_study: invalid level range");
  Ellipsoid const surface(config.c);
  GammaQuadrature const quad(surface);
  AnalyticKilling const killing(surface, quad);

  StudyResult study;
  study.config = config;
  for (int level = config.level_min; level <= config.level_max; ++level) {
    LevelResult lr;
    try {
      lr = run_level(config, level, killing);
    } catch (Error const & e) {
      throw Error("level " + std::to_string(level) + ": " + e.what());
    }
    LevelRow row;
    row.level = level;
    row.h = lr.h;
    row.energy = lr.errors.energy;
    row.l2 = lr.errors.l2;
    row.h1 = lr.errors.h1;
    row.pk_norm = lr.pk_norm;
    for (int i = 0; i < 3 && i < static_cast<int>(lr.eigenvalues.size()); ++i)
      row.lam[i] = lr.eigenvalues[i];
    row.Jh = config.filter.mode == FilterMode::none ? "na" : format_indices(lr.filter.selected);
    study.report.rows.push_back(row);
    study.filters.push_back(lr.filter);
    study.levels.push_back(std::move(lr));
  }
  study.report.compute_eoc();
  if (!config.out.empty())
    write_outputs(study, config.out);
  return study;
}

void write_outputs(StudyResult const & study, std::filesystem::path const & dir)
{
  std::filesystem::create_directories(dir);
  write_csv(study.report, dir / "report.csv");
  write_json_lines(study.filters, dir / "report.json");
  std::vector<double> h;
  for (auto const & r : study.report.rows)
    h.push_back(r.h);
  auto plot = [&](std::string const & metric, std::string const & label, auto get) {
    PlotSeries s;
    s.label = label;
    s.x = h;
    for (auto const & r : study.report.rows)
      s.y.push_back(get(r));
    write_loglog_svg(dir / ("plot_" + metric + ".svg"), label + " vs h", label, {s});
  };
  plot("energy", "energy error", [](LevelRow const & r) { return r.energy; });
  plot("l2", "L2 error", [](LevelRow const & r) { return r.l2; });
  plot("h1", "broken H1 error", [](LevelRow const & r) { return r.h1; });
  plot("pk_norm", "|P_K U|", [](LevelRow const & r) { return r.pk_norm; });
}

EigenStudy eigen_study(RunConfig const & config)
{
  if (config.level_max - config.level_min < 1)
    throw Error("eigen_study: needs at least two levels");
  Ellipsoid const surface(config.c);
  EigenStudy out;
  for (int level = config.level_min; level <= config.level_max; ++level) {
    auto const mesh = study_mesh(config, level);
    auto const sys = assemble(mesh, surface, config.rho);
    auto const eigs = solve_eigen(sys, std::max(3, config.eigen_count));
    out.levels.push_back(level);
    out.h.push_back(sys.h);
    out.lambda.push_back(eigs.values);
    if (config.verbose) {
      std::cerr << "level " << level << " h=" << sys.h;
      for (double l : eigs.values)
        std::cerr << ' ' << l;
      std::cerr << '\n';
    }
  }
  auto const & coarse = out.lambda[out.lambda.size() - 2];
  auto const & fine = out.lambda.back();
  for (std::size_t i = 0; i < fine.size(); ++i)
    out.extrapolated.push_back(richardson(coarse[i], fine[i]));
  return out;
}

FilterComparison killing_filter_study(RunConfig const & config)
{
  FilterComparison cmp;
  RunConfig c = config;
  c.filter = FilterPolicy::parse("none");
  c.out = config.out.empty() ? config.out : config.out / "none";
  cmp.none = convergence_study(c);
  c.filter = FilterPolicy::parse("manual");
  c.out = config.out.empty() ? config.out : config.out / "manual";
  cmp.manual = convergence_study(c);
  c.filter = config.kappa != 0.0 ? FilterPolicy::parse("forcing") : config.filter;
  c.out = config.out.empty() ? config.out : config.out / "auto";
  cmp.automatic = convergence_study(c);
  if (!config.out.empty()) {
    std::vector<PlotSeries> series;
    for (auto const * s : {&cmp.none, &cmp.manual, &cmp.automatic}) {
      PlotSeries p;
      p.label = s->config.filter.str();
      for (auto const & r : s->report.rows) {
        p.x.push_back(r.h);
        p.y.push_back(r.l2);
      }
      series.push_back(p);
    }
    write_loglog_svg(config.out / "plot_l2.svg", "L2 error by filter", "L2 error", series);
  }
  return cmp;
}

} // namespace surfstokes
