#include "helmfci/fci/outer.hpp"

#include <algorithm>
#include "helmfci/core/error.hpp"

namespace helmfci
{

std::string_view to_string(OuterStatus s)
{
  switch (s)
  {
  case OuterStatus::Converged:
    return "converged";
  case OuterStatus::MaxIterations:
    return "max_iterations";
  case OuterStatus::Stagnated:
    return "stagnated";
  }
  return "unknown";
}

namespace
{

bool stagnated(const std::vector<ResidualSample> &history, const OuterOptions &options)
{
  const auto k = history.size();
  const auto w = static_cast<std::size_t>(options.stagnation_window);
  if (w == 0 || k <= w)
  {
    return false;
  }
  return history[k - 1].relative_residual >
         (1.0 - options.stagnation_improvement) * history[k - 1 - w].relative_residual;
}

}  // namespace

OuterResult outer_solve(const HelmholtzProblem &problem, ConstVectorView f,
                        const FciConfig &config, const OuterOptions &options)
{
  if (!(options.tol > 0.0 && options.tol < 1.0) || options.max_its < 0 || options.restart < 1)
  {
    throw ConfigurationError("outer solve needs tol in (0, 1), max_its >= 0, restart >= 1");
  }
  const LinearOperator &a = *problem.system;
  blas::require_same_size(f.size(), problem.helmholtz->dim(), "outer_solve rhs");
  blas::require_finite(f, "outer_solve rhs");

  Stopwatch clock;
  OuterResult out;
  const ComplexVector g = problem.to_system(f);
  const double gnorm = blas::norm2(g);
  const std::uint64_t start = a.matvec_count();
  auto spent = [&] { return a.matvec_count() - start; };

  FciSolver fci(problem.system, config);
  ComplexVector x(a.dim(), 0.0);
  bool stop_stagnated = false;

  auto record = [&](int it, double rel)
  {
    out.stats.residual_history.push_back({it, rel, spent(), clock.seconds()});
  };

  if (gnorm == 0.0)
  {
    record(0, 0.0);
    out.status = OuterStatus::Converged;
  }
  else if (options.refinement)
  {
    ComplexVector r(g);
    for (int it = 0;; it++)
    {
      if (it > 0)
      {
        a.apply(x, r);
        out.outer_mvs++;
        blas::xpby(g, -1.0, r);
      }
      record(it, blas::norm2(r) / gnorm);
      if (out.stats.final_residual() <= options.tol)
      {
        out.status = OuterStatus::Converged;
        break;
      }
      if (stagnated(out.stats.residual_history, options))
      {
        out.status = OuterStatus::Stagnated;
        break;
      }
      if (it >= options.max_its)
      {
        break;
      }
      auto step = fci.apply(r);
      out.stats.precond_applies++;
      out.fci.push_back(std::move(step.diagnostics));
      blas::axpy(1.0, step.x, x);
    }
  }
  else
  {
    Preconditioner precond = [&](ConstVectorView r, VectorView z)
    {
      auto step = fci.apply(r);
      blas::copy(step.x, z);
      out.fci.push_back(std::move(step.diagnostics));
    };
    record(0, 1.0);
    GmresMonitor monitor = [&](int it, double rel)
    {
      record(it, rel);
      stop_stagnated = stagnated(out.stats.residual_history, options);
      return !stop_stagnated;
    };
    KrylovConfig kc;
    kc.restart = options.restart;
    kc.max_its = options.max_its;
    kc.tol = options.tol;
    kc.flexible = true;
    auto res = gmres(a, g, {}, kc, precond, monitor);
    x = std::move(res.x);
    out.outer_mvs = res.stats.mvs;
    out.stats.precond_applies = res.stats.precond_applies;
    if (res.stats.converged && res.stats.final_residual() <= options.tol)
    {
      out.status = OuterStatus::Converged;
    }
    else if (stop_stagnated)
    {
      out.status = OuterStatus::Stagnated;
    }
  }

  out.counted_mvs = spent();
  out.stats.its = static_cast<int>(out.fci.size());
  out.stats.mvs = out.outer_mvs;
  for (const auto &d : out.fci)
  {
    out.stats.mvs += d.node_mvs + d.step_mvs + d.inner_mvs;
  }
  out.stats.converged = out.status == OuterStatus::Converged;
  out.u = problem.from_system(x);

  // Verification with the user operator; not part of the solve's matvec count.
  const double fnorm = blas::norm2(f);
  if (fnorm > 0.0)
  {
    const auto user = problem.user_operator();
    ComplexVector r = user->apply(out.u);
    blas::xpby(f, -1.0, r);
    out.true_residual = blas::norm2(r) / fnorm;
  }
  else
  {
    out.true_residual = 0.0;
  }
  out.stats.seconds = clock.seconds();
  return out;
}

}  // namespace helmfci
