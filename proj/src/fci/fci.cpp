#include "helmfci/fci/fci.hpp"

#include <cmath>
#include <future>
#include "helmfci/core/error.hpp"
#include "helmfci/polysolve/fixpoint.hpp"

namespace helmfci
{

std::string_view to_string(Formulation f)
{
  return f == Formulation::Single ? "single" : "doubled";
}

std::vector<PolyScheme> tune_node_schemes(const SpectralBox &box, const Contour &contour,
                                          const TuneOptions &options)
{
  std::vector<PolyScheme> out;
  out.reserve(contour.nodes.size());
  for (std::size_t j = 0; j < contour.nodes.size(); j++)
  {
    try
    {
      out.push_back(tune_scheme(box, contour.nodes[j], options));
    }
    catch (const ConfigurationError &e)
    {
      throw ConfigurationError("contour node " + std::to_string(j) + ": " + e.what());
    }
  }
  return out;
}

FciSolver::FciSolver(OperatorPtr a, FciConfig config) : a_(std::move(a)), config_(std::move(config))
{
  if (config_.schemes.size() != config_.contour.nodes.size())
  {
    throw ConfigurationError("FCI needs one polynomial scheme per contour node");
  }
  if (!(config_.node_reduction > 0.0 && config_.node_reduction < 1.0) || config_.inner_its < 0 ||
      config_.node_max_sweeps < 1)
  {
    throw ConfigurationError("FCI needs node_reduction in (0, 1), inner_its >= 0, sweeps >= 1");
  }
  for (std::size_t j = 0; j < config_.schemes.size(); j++)
  {
    if (std::abs(config_.schemes[j].z - config_.contour.nodes[j]) > 1e-12 * (1.0 + std::abs(config_.contour.nodes[j])))
    {
      throw ConfigurationError("scheme " + std::to_string(j) + " is tuned for a different shift");
    }
  }
}

FciResult FciSolver::apply(ConstVectorView f)
{
  const LinearOperator &a = *a_;
  const std::size_t n = a.dim();
  blas::require_same_size(f.size(), n, "fci_apply rhs");
  Stopwatch clock;
  FciResult out;
  out.x.assign(n, 0.0);
  const double fnorm = blas::norm2(f);
  if (fnorm == 0.0)
  {
    out.stats.converged = true;
    out.stats.record(0, 0.0);
    return out;
  }

  const std::size_t count = config_.contour.nodes.size();
  std::vector<FixpointResult> nodes(count);
  auto solve_node = [&](std::size_t j)
  {
    const FixpointStop stop{config_.node_reduction, config_.node_max_sweeps};
    const bool warm = config_.warm_start && previous_.size() == count;
    try
    {
      return fixpoint_solve(a, f, config_.schemes[j], stop,
                            warm ? ConstVectorView(previous_[j]) : ConstVectorView());
    }
    catch (const DivergenceError &e)
    {
      throw DivergenceError("contour node " + std::to_string(j) + " diverged: " + e.what(),
                            e.factor());
    }
  };
  if (config_.threads > 1 && count > 1)
  {
    std::vector<std::future<FixpointResult>> futures;
    for (std::size_t j = 0; j < count; j++)
    {
      futures.push_back(std::async(std::launch::async, solve_node, j));
    }
    for (std::size_t j = 0; j < count; j++)
    {
      nodes[j] = futures[j].get();
    }
  }
  else
  {
    for (std::size_t j = 0; j < count; j++)
    {
      nodes[j] = solve_node(j);
    }
  }

  // w = sum_j sigma_j / z_j y_j, merged in node order
  ComplexVector w(n, 0.0);
  auto &diag = out.diagnostics;
  for (std::size_t j = 0; j < count; j++)
  {
    const auto &r = nodes[j];
    blas::axpy(config_.contour.weights[j] / config_.contour.nodes[j], r.y, w);
    NodeDiagnostics nd;
    nd.z = config_.contour.nodes[j];
    nd.q = config_.schemes[j].q;
    nd.sweeps = r.stats.its;
    nd.mvs = r.stats.mvs;
    nd.reduction = r.stats.final_residual();
    nd.mean_factor = nd.sweeps > 0 ? std::pow(nd.reduction, 1.0 / nd.sweeps) : 1.0;
    nd.converged = r.stats.converged;
    diag.nodes.push_back(nd);
    diag.node_mvs += r.stats.mvs;
  }
  if (config_.warm_start)
  {
    previous_.resize(count);
    for (std::size_t j = 0; j < count; j++)
    {
      previous_[j] = std::move(nodes[j].y);
    }
  }

  ComplexVector aw(n);
  a.apply(w, aw);
  diag.step_mvs = 1;
  const auto step = optimal_step(aw, f);
  diag.d = step.d;
  diag.degenerate_step = step.degenerate;

  // g = f - d A w
  ComplexVector g(f.begin(), f.end());
  blas::axpy(-step.d, aw, g);
  blas::scale(step.d, w);
  if (config_.inner_its > 0 && blas::norm2(g) > 0.0)
  {
    KrylovConfig inner;
    inner.restart = config_.inner_its;
    inner.max_its = config_.inner_its;
    inner.tol = 1e-12;
    const auto v = gmres(a, g, {}, inner, config_.inner_precond);
    blas::axpy(1.0, v.x, w);
    diag.inner_its = v.stats.its;
    diag.inner_mvs = v.stats.mvs;
    diag.inner_residual = v.stats.final_residual() * blas::norm2(g) / fnorm;
    out.stats.precond_applies = v.stats.precond_applies;
  }
  else
  {
    diag.inner_residual = blas::norm2(g) / fnorm;
  }
  out.x = std::move(w);
  out.stats.its = 1;
  out.stats.mvs = diag.node_mvs + diag.step_mvs + diag.inner_mvs;
  out.stats.seconds = clock.seconds();
  out.stats.record(0, 1.0);
  out.stats.record(1, diag.inner_residual);
  out.stats.converged = true;
  return out;
}

FciResult fci_apply(OperatorPtr a, ConstVectorView f, const FciConfig &config)
{
  FciSolver solver(std::move(a), config);
  return solver.apply(f);
}

}  // namespace helmfci
