#include "helmfci/cli/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <unistd.h>
#include "helmfci/cli/slice.hpp"
#include "helmfci/core/error.hpp"
#include "helmfci/fci/bench.hpp"
#include "helmfci/fci/outer.hpp"
#include "helmfci/operators/spectral.hpp"
#include "helmfci/spectrum/dense_eigen.hpp"

#ifndef HELMFCI_VERSION
#define HELMFCI_VERSION "unknown"
#endif
#ifndef HELMFCI_GIT_DESCRIBE
#define HELMFCI_GIT_DESCRIBE "unknown"
#endif

namespace helmfci::cli
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

std::string format_number(double v)
{
  if (std::isinf(v))
  {
    return "inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

class Staging
{
public:
  explicit Staging(const fs::path &output) : output_(fs::absolute(output))
  {
    const fs::path parent = output_.parent_path();
    fs::create_directories(parent);
    dir_ = parent / ("." + output_.filename().string() + ".staging-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Staging()
  {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  fs::path path(const std::string &name)
  {
    names_.push_back(name);
    return dir_ / name;
  }

  void write_text(const std::string &name, const std::string &text)
  {
    std::ofstream out(path(name));
    out << text;
    if (!out)
    {
      throw IoError("cannot write " + name);
    }
  }

  void write_json(const std::string &name, const json &j) { write_text(name, j.dump(2) + "\n"); }

  std::vector<fs::path> commit()
  {
    fs::create_directories(output_);
    std::vector<fs::path> out;
    for (const auto &n : names_)
    {
      fs::rename(dir_ / n, output_ / n);
      out.push_back(output_ / n);
    }
    return out;
  }

private:
  fs::path output_;
  fs::path dir_;
  std::vector<std::string> names_;
};

WavespeedModel build_model(const RunConfig &c, const Grid3 &grid)
{
  if (c.model.kind == "uniform")
  {
    return WavespeedModel::uniform(grid);
  }
  if (c.model.kind == "eight_anomaly")
  {
    return WavespeedModel::eight_anomaly(grid, c.model.contrast);
  }
  const fs::path sidecar = c.model_sidecar ? *c.model_sidecar : fs::path(c.model_in->string() + ".json");
  auto model = load_wavespeed_model(*c.model_in, sidecar, grid.l_min);
  if (model.grid.dims() != grid.dims())
  {
    throw ModelError("model dimensions do not match the configured grid");
  }
  return model;
}

ComplexVector build_rhs(const RunConfig &c, const Grid3 &g)
{
  ComplexVector f(g.size(), 0.0);
  if (c.source.kind == "random")
  {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal;
    for (auto &v : f)
    {
      v = {normal(rng), normal(rng)};
    }
    return f;
  }
  const auto p = c.source.position.value_or(std::array<int, 3>{g.n1 / 2, g.n2 / 2, g.n3 / 2});
  f[g.index(p[0], p[1], p[2])] = 1.0;
  return f;
}

ProblemOptions problem_options(const RunConfig &c)
{
  ProblemOptions po;
  po.discretization = c.discretization;
  po.formulation = c.formulation;
  po.damping_sign = c.damping_sign;
  po.sponge_width = c.sponge_width;
  po.sponge_strength = c.sponge_strength;
  return po;
}

FciConfig fci_config(const RunConfig &c, const HelmholtzProblem &p)
{
  TuneOptions tune;
  tune.q_max = c.q_max;
  auto cfg = make_fci_config(p, c.contour, tune, c.inner_its, c.node_reduction);
  cfg.node_max_sweeps = c.node_max_sweeps;
  cfg.warm_start = c.warm_start;
  cfg.threads = c.threads;
  return cfg;
}

OuterOptions outer_options(const RunConfig &c)
{
  OuterOptions o;
  o.tol = c.outer_tol;
  o.max_its = c.outer_max_its;
  o.restart = c.outer_restart;
  o.refinement = c.refinement;
  return o;
}

json box_json(const SpectralBox &b) { return {{"b1", b.b1}, {"b2", b.b2}, {"depth", b.depth}}; }

json scheme_json(const PolyScheme &s)
{
  return {{"z", complex_json(s.z)},        {"q", s.q},   {"delta", s.delta},
          {"z0", complex_json(s.z0)},      {"nu", s.nu}, {"nu_per_matvec", s.nu_per_matvec()},
          {"predicted_mvs", s.predicted_mvs}};
}

json problem_json(const HelmholtzProblem &p, const FciConfig &cfg)
{
  json nodes = json::array();
  for (std::size_t j = 0; j < cfg.contour.nodes.size(); j++)
  {
    nodes.push_back({{"z", complex_json(cfg.contour.nodes[j])},
                     {"sigma", complex_json(cfg.contour.weights[j])},
                     {"scheme", scheme_json(cfg.schemes[j])}});
  }
  return {{"dim", p.system->dim()},
          {"omega", p.grid.omega()},
          {"sponge_width", p.options.sponge_width},
          {"radii", {{"rho1", p.radii.rho1}, {"rho2", p.radii.rho2}, {"rho1_approximate", p.radii.rho1_approximate}}},
          {"box", box_json(p.box)},
          {"contour", {{"count", cfg.contour.count}, {"t", cfg.contour.t}, {"r", cfg.contour.r}, {"eps", cfg.contour.eps}, {"nodes", nodes}}}};
}

json diagnostics_json(const OuterResult &r)
{
  json its = json::array();
  for (std::size_t k = 0; k < r.fci.size(); k++)
  {
    const auto &d = r.fci[k];
    json nodes = json::array();
    for (const auto &n : d.nodes)
    {
      nodes.push_back({{"z", complex_json(n.z)},
                       {"q", n.q},
                       {"sweeps", n.sweeps},
                       {"mvs", n.mvs},
                       {"reduction", n.reduction},
                       {"mean_factor", n.mean_factor},
                       {"converged", n.converged}});
    }
    const auto &h = r.stats.residual_history;
    its.push_back({{"iteration", k + 1},
                   {"residual", k + 1 < h.size() ? json(h[k + 1].relative_residual) : json(nullptr)},
                   {"d", complex_json(d.d)},
                   {"degenerate_step", d.degenerate_step},
                   {"inner_its", d.inner_its},
                   {"inner_residual", d.inner_residual},
                   {"node_mvs", d.node_mvs},
                   {"step_mvs", d.step_mvs},
                   {"inner_mvs", d.inner_mvs},
                   {"nodes", nodes}});
  }
  return {{"status", to_string(r.status)}, {"outer_mvs", r.outer_mvs}, {"iterations", its}};
}

std::string residuals_csv(const SolveStats &s, bool wall_time)
{
  std::string out = "iter,resnorm,mvs,seconds\n";
  for (const auto &h : s.residual_history)
  {
    out += std::to_string(h.iteration) + "," + format_number(h.relative_residual) + "," +
           std::to_string(h.matvecs) + "," + format_number(wall_time ? h.seconds : 0.0) + "\n";
  }
  return out;
}

struct Context
{
  const RunConfig &config;
  std::ostream &log;
  Staging &stage;
  json summary;
  json resolved;  // derived quantities for the manifest
  bool failed = false;
  std::string failure;
};

void run_solve(Context &ctx)
{
  const auto &c = ctx.config;
  const Grid3 grid = c.grid3();
  Stopwatch setup_clock;
  const auto model = build_model(c, grid);
  const auto problem = build_problem(model, problem_options(c));
  const auto cfg = fci_config(c, problem);
  const double setup = setup_clock.seconds();
  ctx.resolved = problem_json(problem, cfg);
  ctx.log << "solve: n = " << grid.n1 << "x" << grid.n2 << "x" << grid.n3 << ", omega/2pi = " << grid.frequency()
          << ", box [" << problem.box.b1 << ", " << problem.box.b2 << "] x " << problem.box.depth << "\n";

  const auto f = build_rhs(c, grid);
  const auto r = outer_solve(problem, f, cfg, outer_options(c));
  ctx.log << "solve: " << to_string(r.status) << " after " << r.stats.its << " its, " << r.stats.mvs
          << " mvs, residual " << r.stats.final_residual() << "\n";

  ctx.stage.write_text("residuals.csv", residuals_csv(r.stats, c.wall_time));
  ctx.stage.write_json("diagnostics.json", diagnostics_json(r));
  ctx.summary = {{"n", grid.dims()},
                 {"frequency", grid.frequency()},
                 {"its", r.stats.its},
                 {"mvs", r.stats.mvs},
                 {"i-t", c.wall_time ? r.stats.seconds : 0.0},
                 {"setup_seconds", c.wall_time ? setup : 0.0},
                 {"status", to_string(r.status)},
                 {"final_residual", r.stats.final_residual()},
                 {"true_residual", r.true_residual},
                 {"counted_mvs", r.counted_mvs}};
  for (std::size_t k = 0; k < c.slices.size(); k++)
  {
    const auto &s = c.slices[k];
    const int index = s.index >= 0 ? s.index : grid.dims()[s.axis] / 2;
    const std::string name = "slice_axis" + std::to_string(s.axis) + "_" + std::to_string(index) + "." +
                             (s.format == "csv" ? "csv" : "f32");
    const auto fmt = s.format == "csv" ? SliceFormat::Csv : SliceFormat::Raw;
    export_slice(r.u, grid, s.axis, index, ctx.stage.path(name), fmt);
    if (fmt == SliceFormat::Raw)
    {
      ctx.stage.path(name + ".json");
    }
  }
  if (r.status != OuterStatus::Converged)
  {
    ctx.failed = true;
    ctx.failure = "outer iteration " + std::string(to_string(r.status)) + " at residual " +
                  format_number(r.stats.final_residual());
  }
}

void run_tune(Context &ctx)
{
  const auto &t = ctx.config.tune;
  TuneOptions opts;
  opts.q_max = t.q_max;
  opts.target = t.target;
  opts.delta_step = t.delta_step;
  std::string csv = "shift_re,shift_im,q,delta,nu,nu_per_mv,predicted_mvs,best\n";
  json rows = json::array();
  for (Complex z : t.shifts)
  {
    const auto best = tune_scheme(t.box, z, opts);
    for (const auto &s : tune_all(t.box, z, opts))
    {
      const bool is_best = s.q == best.q;
      csv += format_number(z.real()) + "," + format_number(z.imag()) + "," + std::to_string(s.q) + "," +
             format_number(s.delta) + "," + format_number(s.nu) + "," + format_number(s.nu_per_matvec()) + "," +
             std::to_string(s.predicted_mvs) + "," + (is_best ? "1" : "0") + "\n";
      auto row = scheme_json(s);
      row["best"] = is_best;
      rows.push_back(row);
    }
    ctx.log << "tune: z = " << z << " -> q = " << best.q << ", delta = " << best.delta << ", nu = " << best.nu << "\n";
  }
  ctx.stage.write_text("tune.csv", csv);
  ctx.summary = {{"box", box_json(t.box)}, {"target", t.target}, {"rows", rows}};
}

void run_spectrum(Context &ctx)
{
  const auto &c = ctx.config;
  const Grid3 grid = c.grid3();
  const auto problem = build_problem(build_model(c, grid), problem_options(c));
  const auto cfg = fci_config(c, problem);
  ctx.resolved = problem_json(problem, cfg);
  ctx.summary = ctx.resolved;
  if (problem.system->dim() <= kDenseEigenMaxDim)
  {
    const auto eigs = dense_eigenvalues(*problem.system);
    std::string csv = "re,im\n";
    std::size_t outside = 0, enclosed = 0;
    for (Complex l : eigs)
    {
      csv += format_number(l.real()) + "," + format_number(l.imag()) + "\n";
      outside += problem.box.contains(l, 1e-10) ? 0 : 1;
      enclosed += cfg.contour.encloses(l) ? 1 : 0;
    }
    ctx.stage.write_text("eigenvalues.csv", csv);
    ctx.summary["eigenvalues"] = {{"count", eigs.size()}, {"outside_box", outside}, {"inside_contour", enclosed}};
    ctx.log << "spectrum: " << eigs.size() << " eigenvalues, " << outside << " outside the box\n";
  }
  else
  {
    ctx.summary["eigenvalues"] = nullptr;
    ctx.log << "spectrum: dimension " << problem.system->dim() << " too large for dense eigenvalues\n";
  }
}

void run_bench(Context &ctx)
{
  const auto &b = ctx.config.bench;
  BenchShiftedOptions o;
  o.grid = {b.n, b.n, b.n, b.l_min};
  o.spectrum_tops = b.spectrum_tops;
  o.shifts = b.shifts;
  o.reduction = b.reduction;
  o.q_max = b.q_max;
  o.seed = ctx.config.seed;
  const auto cells = bench_shifted(o);
  auto mvs = [](const BenchCase &k) { return k.mvs ? std::to_string(*k.mvs) : std::string("inf"); };
  std::string csv = "spectrum_top,z_re,z_im,one_q,one_delta,one_mvs,s_re,s_im,two_q,two_delta,two_mvs,winner\n";
  json rows = json::array();
  for (const auto &cell : cells)
  {
    csv += format_number(cell.top) + "," + format_number(cell.z.real()) + "," + format_number(cell.z.imag()) + "," +
           std::to_string(cell.one.scheme.q) + "," + format_number(cell.one.scheme.delta) + "," + mvs(cell.one) +
           "," + format_number(cell.two.shift.real()) + "," + format_number(cell.two.shift.imag()) + "," +
           std::to_string(cell.two.scheme.q) + "," + format_number(cell.two.scheme.delta) + "," + mvs(cell.two) +
           "," + std::to_string(cell.winner()) + "\n";
    rows.push_back({{"spectrum", {-1.0, cell.top}},
                    {"z", complex_json(cell.z)},
                    {"one", cell.one.mvs ? json(*cell.one.mvs) : json("inf")},
                    {"two", cell.two.mvs ? json(*cell.two.mvs) : json("inf")},
                    {"winner", cell.winner()}});
  }
  ctx.stage.write_text("bench_shifted.csv", csv);
  ctx.summary = {{"reduction", b.reduction}, {"cells", rows}};
  ctx.log << "bench-shifted: " << cells.size() << " cells\n";
}

void run_scale(Context &ctx)
{
  const auto &c = ctx.config;
  if (c.model.kind == "file")
  {
    throw SchemaError("/model/kind", "scale runs need a synthetic model");
  }
  std::string csv = "n,frequency,its,mvs,it_seconds,status,final_residual\n";
  json rows = json::array();
  std::vector<std::pair<double, double>> points;
  for (int n : c.scale_sizes)
  {
    RunConfig rc = c;
    rc.grid = {n, n, n};
    rc.source.position.reset();
    const Grid3 grid = rc.grid3();
    const auto problem = build_problem(build_model(rc, grid), problem_options(rc));
    const auto cfg = fci_config(rc, problem);
    const auto r = outer_solve(problem, build_rhs(rc, grid), cfg, outer_options(rc));
    const double it_seconds = c.wall_time ? r.stats.seconds : 0.0;
    csv += std::to_string(n) + "," + format_number(grid.frequency()) + "," + std::to_string(r.stats.its) + "," +
           std::to_string(r.stats.mvs) + "," + format_number(it_seconds) + "," + std::string(to_string(r.status)) +
           "," + format_number(r.stats.final_residual()) + "\n";
    rows.push_back({{"n", n},
                    {"frequency", grid.frequency()},
                    {"its", r.stats.its},
                    {"mvs", r.stats.mvs},
                    {"i-t", it_seconds},
                    {"status", to_string(r.status)}});
    points.emplace_back(grid.frequency(), static_cast<double>(r.stats.mvs));
    ctx.log << "scale: n = " << n << ": " << r.stats.its << " its, " << r.stats.mvs << " mvs\n";
    if (r.status != OuterStatus::Converged)
    {
      ctx.failed = true;
      ctx.failure = "n = " + std::to_string(n) + " did not converge";
    }
  }
  // Least-squares slope of log(mvs) against log(frequency), as growth per doubling.
  json growth = nullptr;
  if (points.size() >= 2)
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : points)
    {
      sx += std::log(x);
      sy += std::log(y);
      sxx += std::log(x) * std::log(x);
      sxy += std::log(x) * std::log(y);
    }
    const double m = static_cast<double>(points.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    growth = std::pow(2.0, slope);
  }
  ctx.stage.write_text("scale.csv", csv);
  ctx.summary = {{"rows", rows}, {"mvs_growth_per_doubling", growth}};
}

RunConfig resolve(RunConfig c)
{
  if (c.subcommand == Subcommand::Solve || c.subcommand == Subcommand::Spectrum)
  {
    const Grid3 g = c.grid3();
    if (c.sponge_width < 0)
    {
      c.sponge_width = default_sponge_width(g);
    }
    if (c.source.kind == "point" && !c.source.position)
    {
      c.source.position = std::array<int, 3>{g.n1 / 2, g.n2 / 2, g.n3 / 2};
    }
  }
  return c;
}

json manifest(const RunConfig &c, const json &resolved, double seconds, int code, const std::string &message)
{
  return {{"manifest_version", 1},
          {"tool", "helmfci"},
          {"version", HELMFCI_VERSION},
          {"git_describe", HELMFCI_GIT_DESCRIBE},
          {"config", to_json(c)},
          {"resolved", resolved},
          {"timings", {{"total_seconds", c.wall_time ? seconds : 0.0}}},
          {"exit_code", code},
          {"message", message}};
}

}  // namespace

RunOutcome run(const RunConfig &input, std::ostream &log)
{
  RunOutcome out;
  try
  {
    const RunConfig config = resolve(input);
    for (const auto &p : {config.model_in, config.model_sidecar})
    {
      if (p && !fs::exists(*p))
      {
        throw IoError("missing input file " + p->string());
      }
    }
    if (config.model_in && !config.model_sidecar && !fs::exists(config.model_in->string() + ".json"))
    {
      throw IoError("missing sidecar " + config.model_in->string() + ".json");
    }
    for (const auto &w : config.grid3().validate())
    {
      log << "warning: " << w << "\n";
    }
    if (config.threads > 1)
    {
      set_fft_threads(config.threads);
    }

    Stopwatch clock;
    Staging stage(config.output_dir);
    Context ctx{config, log, stage, json::object(), json::object(), false, {}};
    try
    {
      switch (config.subcommand)
      {
      case Subcommand::Solve:
        run_solve(ctx);
        break;
      case Subcommand::Tune:
        run_tune(ctx);
        break;
      case Subcommand::Spectrum:
        run_spectrum(ctx);
        break;
      case Subcommand::BenchShifted:
        run_bench(ctx);
        break;
      case Subcommand::Scale:
        run_scale(ctx);
        break;
      }
    }
    catch (const DivergenceError &e)
    {
      ctx.failed = true;
      ctx.failure = e.what();
      stage.write_json("diagnostics.json", {{"error", e.what()}, {"growth_factor", e.factor()}});
    }
    catch (const NonFiniteError &e)
    {
      ctx.failed = true;
      ctx.failure = e.what();
      stage.write_json("diagnostics.json", {{"error", e.what()}});
    }
    out.exit_code = ctx.failed ? kExitSolver : kExitOk;
    out.message = ctx.failed ? ctx.failure : "ok";
    ctx.summary["subcommand"] = to_string(config.subcommand);
    ctx.summary["exit_code"] = out.exit_code;
    stage.write_json("summary.json", ctx.summary);
    stage.write_json("manifest.json", manifest(config, ctx.resolved, clock.seconds(), out.exit_code, out.message));
    out.files = stage.commit();
  }
  catch (const SchemaError &e)
  {
    out = {kExitSchema, e.what(), {}};
  }
  catch (const ConfigurationError &e)
  {
    out = {kExitSchema, e.what(), {}};
  }
  catch (const ModelError &e)
  {
    out = {kExitSchema, e.what(), {}};
  }
  catch (const DimensionError &e)
  {
    out = {kExitSchema, e.what(), {}};
  }
  catch (const IoError &e)
  {
    out = {kExitIo, e.what(), {}};
  }
  catch (const fs::filesystem_error &e)
  {
    out = {kExitIo, e.what(), {}};
  }
  catch (const std::exception &e)
  {
    out = {kExitFailure, e.what(), {}};
  }
  if (out.exit_code != kExitOk)
  {
    log << "error: " << out.message << "\n";
  }
  return out;
}

RunOutcome run_file(const fs::path &config_path, const fs::path &output, std::ostream &log)
{
  RunConfig config;
  try
  {
    config = load_run_config(config_path);
  }
  catch (const SchemaError &e)
  {
    log << "error: " << e.what() << "\n";
    return {kExitSchema, e.what(), {}};
  }
  catch (const IoError &e)
  {
    log << "error: " << e.what() << "\n";
    return {kExitIo, e.what(), {}};
  }
  if (!output.empty())
  {
    config.output_dir = output;
  }
  return run(config, log);
}

}  // namespace helmfci::cli
