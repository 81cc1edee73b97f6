#include "helmfci/fci/setup.hpp"

#include <algorithm>
#include <cmath>
#include "helmfci/core/error.hpp"
#include "helmfci/operators/sparse.hpp"
#include "helmfci/operators/spectral.hpp"

namespace helmfci
{

ComplexVector HelmholtzProblem::to_system(ConstVectorView f) const
{
  ComplexVector g(f.begin(), f.end());
  if (conjugated())
  {
    for (auto &c : g)
    {
      c = std::conj(c);
    }
  }
  return doubled ? doubled->embed(g) : g;
}

ComplexVector HelmholtzProblem::from_system(ConstVectorView y) const
{
  ComplexVector u = doubled ? doubled->extract(y) : ComplexVector(y.begin(), y.end());
  if (conjugated())
  {
    for (auto &c : u)
    {
      c = std::conj(c);
    }
  }
  return u;
}

std::shared_ptr<HelmholtzOperator> HelmholtzProblem::user_operator() const
{
  return conjugated() ? helmholtz->conjugate() : helmholtz;
}

DoubledBlockPreconditioner::DoubledBlockPreconditioner(OperatorPtr laplacian, OperatorPtr inverse)
  : LinearOperator(2 * laplacian->dim(), inverse->kind()), laplacian_(std::move(laplacian)),
    inverse_(std::move(inverse))
{
  blas::require_same_size(inverse_->dim(), laplacian_->dim(), "DoubledBlockPreconditioner");
}

void DoubledBlockPreconditioner::apply_impl(ConstVectorView x, VectorView y) const
{
  const std::size_t n = laplacian_->dim();
  const auto r1 = x.subspan(0, n), r2 = x.subspan(n, n);
  auto a = y.subspan(0, n), b = y.subspan(n, n);
  // a <- r2 - i S r1, b <- P a, a <- i b - r1
  laplacian_->apply(r1, a);
  for (std::size_t i = 0; i < n; i++)
  {
    a[i] = r2[i] - 1i * a[i];
  }
  inverse_->apply(a, b);
  for (std::size_t i = 0; i < n; i++)
  {
    a[i] = 1i * b[i] - r1[i];
  }
}

int default_sponge_width(const Grid3 &grid)
{
  int n = 0;
  for (int d : grid.dims())
  {
    if (d > 1)
    {
      n = n == 0 ? d : std::min(n, d);
    }
  }
  return 3 * n / 8;
}

HelmholtzProblem build_problem(const WavespeedModel &model, const ProblemOptions &options)
{
  model.validate();
  HelmholtzProblem p;
  p.grid = model.grid;
  p.options = options;
  if (p.options.sponge_width < 0)
  {
    p.options.sponge_width = default_sponge_width(model.grid);
  }
  const Grid3 &g = model.grid;
  OperatorPtr laplacian;
  if (options.discretization == Discretization::Spectral)
  {
    laplacian = build_spectral_laplacian(g);
    p.laplacian_precond = build_invlap_precond(g);
  }
  else
  {
    auto s = build_fd7_laplacian(g);
    p.laplacian_precond = build_ilu0_precond(add_diagonal(s->matrix(), ComplexVector(g.size(), 1.0)));
    laplacian = s;
  }
  const auto mass = build_mass(model);
  const auto sponge = build_sponge(g, p.options.sponge_width, p.options.sponge_strength);
  p.helmholtz = assemble_helmholtz(laplacian, *mass, *sponge, options.discretization,
                                   DampingSign::LowerHalfPlane);
  p.radii = estimate_radii(*p.helmholtz, options.rho_tol);
  if (options.formulation == Formulation::Single)
  {
    p.system = p.helmholtz;
    p.box = box_from_radii(p.radii);
    p.inner_precond = as_preconditioner(p.laplacian_precond);
  }
  else
  {
    p.doubled = assemble_doubled(*p.helmholtz);
    p.system = p.doubled;
    p.box = doubled_box_from_radii(p.radii);
    p.inner_precond = as_preconditioner(
        std::make_shared<DoubledBlockPreconditioner>(laplacian, p.laplacian_precond));
  }
  return p;
}

Contour contour_for_problem(const HelmholtzProblem &problem, const ContourOptions &options)
{
  const double eps = options.eps > 0.0 ? options.eps : options.eps_coefficient / problem.grid.omega();
  return make_contour(problem.box, options.count, options.t, eps);
}

FciConfig make_fci_config(const HelmholtzProblem &problem, const ContourOptions &contour,
                          const TuneOptions &tune, int inner_its, double node_reduction)
{
  FciConfig cfg;
  cfg.contour = contour_for_problem(problem, contour);
  TuneOptions t = tune;
  t.target = node_reduction;
  cfg.schemes = tune_node_schemes(problem.box, cfg.contour, t);
  cfg.inner_its = inner_its;
  cfg.node_reduction = node_reduction;
  cfg.inner_precond = problem.inner_precond;
  return cfg;
}

}  // namespace helmfci
