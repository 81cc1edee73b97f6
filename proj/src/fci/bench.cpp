#include "helmfci/fci/bench.hpp"

#include <cmath>
#include <random>
#include "helmfci/core/error.hpp"
#include "helmfci/operators/helmholtz.hpp"
#include "helmfci/operators/spectral.hpp"
#include "helmfci/polysolve/fixpoint.hpp"

namespace helmfci
{

int BenchCell::winner() const
{
  if (one.mvs && (!two.mvs || *one.mvs < *two.mvs))
  {
    return 1;
  }
  if (two.mvs && (!one.mvs || *two.mvs < *one.mvs))
  {
    return 2;
  }
  return 0;
}

namespace
{

BenchCase run_case(const LinearOperator &a, ConstVectorView f, const SpectralBox &box, Complex shift,
                   const BenchShiftedOptions &options)
{
  TuneOptions tune;
  tune.q_max = options.q_max;
  tune.target = options.reduction;
  BenchCase c;
  c.shift = shift;
  c.scheme = tune_scheme(box, shift, tune);
  try
  {
    const auto r = fixpoint_solve(a, f, c.scheme, {options.reduction, options.max_sweeps});
    c.reduction = r.stats.final_residual();
    if (r.stats.converged)
    {
      c.mvs = r.stats.mvs;
    }
  }
  catch (const DivergenceError &e)
  {
    c.reduction = e.factor();
  }
  return c;
}

}  // namespace

std::vector<BenchCell> bench_shifted(const BenchShiftedOptions &options)
{
  options.grid.validate();
  const auto lambda = spectral_laplacian_eigenvalues(options.grid);
  double top = 0.0;
  for (double l : lambda)
  {
    top = std::max(top, l);
  }
  if (!(top > 0.0))
  {
    throw ConfigurationError("bench_shifted needs a grid with a nonzero Laplacian");
  }

  const std::size_t n = options.grid.size();
  ComplexVector f(n);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (auto &c : f)
  {
    c = {normal(rng), normal(rng)};
  }

  std::vector<BenchCell> cells;
  for (double b : options.spectrum_tops)
  {
    if (!(b > -1.0))
    {
      throw ConfigurationError("spectrum top must exceed -1");
    }
    const double alpha = (b + 1.0) / top;
    std::vector<double> symbol(lambda);
    for (auto &s : symbol)
    {
      s = alpha * s - 1.0;
    }
    auto a = std::make_shared<FourierMultiplier>(options.grid, std::move(symbol),
                                                 OperatorKind::SpectralLaplacian);
    auto doubled = assemble_doubled(a, nullptr);
    const ComplexVector g = doubled->embed(f);
    const double radius = std::sqrt(b + 1.0);
    const SpectralBox box1{-1.0, b, 0.0};
    const SpectralBox box2{-1.0 - radius, -1.0 + radius, 0.0};
    for (Complex z : options.shifts)
    {
      BenchCell cell;
      cell.top = b;
      cell.z = z;
      cell.one = run_case(*a, f, box1, z, options);
      cell.two = run_case(*doubled, g, box2, std::sqrt(z + 1.0) - 1.0, options);
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace helmfci
