#include "helmfci/operators/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include "helmfci/core/error.hpp"

namespace helmfci
{

std::string_view to_string(Discretization d)
{
  return d == Discretization::Spectral ? "spectral" : "fd7";
}

std::shared_ptr<DiagonalOperator> build_mass(const WavespeedModel &model)
{
  model.validate();
  std::vector<double> m(model.sampling_rate.size());
  const double l2 = model.grid.l_min * model.grid.l_min;
  for (std::size_t i = 0; i < m.size(); i++)
  {
    m[i] = l2 / (model.sampling_rate[i] * model.sampling_rate[i]);
  }
  return DiagonalOperator::from_real(m);
}

std::shared_ptr<DiagonalOperator> build_sponge(const Grid3 &grid, int width, double strength)
{
  if (width < 0 || !(strength >= 0.0))
  {
    throw ConfigurationError("sponge width and strength must be non-negative");
  }
  const auto dims = grid.dims();
  int min_dim = 0;
  for (int n : dims)
  {
    if (n > 1)
    {
      min_dim = (min_dim == 0) ? n : std::min(min_dim, n);
    }
  }
  if (width > 0 && 2 * width >= min_dim)
  {
    throw ConfigurationError("sponge width " + std::to_string(width) +
                             " must be below half the smallest dimension");
  }
  std::vector<double> d(grid.size(), 0.0);
  if (width == 0)
  {
    return DiagonalOperator::from_real(d);
  }
  for (int i3 = 0; i3 < grid.n3; i3++)
  {
    for (int i2 = 0; i2 < grid.n2; i2++)
    {
      for (int i1 = 0; i1 < grid.n1; i1++)
      {
        const std::array<int, 3> idx{i1, i2, i3};
        int dist = width;
        for (int axis = 0; axis < 3; axis++)
        {
          if (dims[axis] > 1)
          {
            dist = std::min({dist, idx[axis], dims[axis] - 1 - idx[axis]});
          }
        }
        if (dist < width)
        {
          const double s = double(width - dist) / width;
          d[grid.index(i1, i2, i3)] = strength * s * s;
        }
      }
    }
  }
  return DiagonalOperator::from_real(d);
}

HelmholtzOperator::HelmholtzOperator(OperatorPtr laplacian, std::vector<double> mass,
                                     std::vector<double> damping, Discretization discretization,
                                     DampingSign sign)
  : LinearOperator(laplacian->dim(), OperatorKind::HelmholtzComposite),
    laplacian_(std::move(laplacian)), mass_(std::move(mass)), damping_(std::move(damping)),
    discretization_(discretization), sign_(sign)
{
  blas::require_same_size(mass_.size(), dim(), "Helmholtz mass");
  blas::require_same_size(damping_.size(), dim(), "Helmholtz damping");
  for (double d : damping_)
  {
    if (!(d >= 0.0))
    {
      throw ModelError("damping entries must be non-negative");
    }
  }
}

std::shared_ptr<HelmholtzOperator> HelmholtzOperator::conjugate() const
{
  const auto flipped =
      sign_ == DampingSign::LowerHalfPlane ? DampingSign::UpperHalfPlane : DampingSign::LowerHalfPlane;
  return std::make_shared<HelmholtzOperator>(laplacian_, mass_, damping_, discretization_,
                                             flipped);
}

void HelmholtzOperator::apply_impl(ConstVectorView x, VectorView y) const
{
  laplacian_->apply(x, y);
  const double s = sign_ == DampingSign::LowerHalfPlane ? -1.0 : 1.0;
  for (std::size_t i = 0; i < y.size(); i++)
  {
    y[i] += Complex(-mass_[i], s * damping_[i]) * x[i];
  }
}

std::shared_ptr<HelmholtzOperator> assemble_helmholtz(OperatorPtr laplacian,
                                                      const DiagonalOperator &mass,
                                                      const DiagonalOperator &damping,
                                                      Discretization discretization,
                                                      DampingSign sign)
{
  blas::require_same_size(mass.dim(), laplacian->dim(), "assemble_helmholtz mass");
  blas::require_same_size(damping.dim(), laplacian->dim(), "assemble_helmholtz damping");
  auto real_part = [](const DiagonalOperator &d)
  {
    std::vector<double> r(d.dim());
    std::transform(d.diagonal().begin(), d.diagonal().end(), r.begin(),
                   [](Complex c) { return c.real(); });
    return r;
  };
  return std::make_shared<HelmholtzOperator>(std::move(laplacian), real_part(mass),
                                             real_part(damping), discretization, sign);
}

HermitianPart::HermitianPart(OperatorPtr laplacian, std::vector<double> mass, double shift)
  : LinearOperator(laplacian->dim(), OperatorKind::HelmholtzComposite),
    laplacian_(std::move(laplacian)), mass_(std::move(mass)), shift_(shift)
{
  blas::require_same_size(mass_.size(), dim(), "HermitianPart mass");
}

std::shared_ptr<HermitianPart> HermitianPart::of(const HelmholtzOperator &a, double shift)
{
  return std::make_shared<HermitianPart>(a.laplacian(), a.mass(), shift);
}

void HermitianPart::apply_impl(ConstVectorView x, VectorView y) const
{
  laplacian_->apply(x, y);
  for (std::size_t i = 0; i < y.size(); i++)
  {
    y[i] += (shift_ - mass_[i]) * x[i];
  }
}

DoubledOperator::DoubledOperator(OperatorPtr hermitian_part,
                                 std::shared_ptr<const DiagonalOperator> skew_part)
  : LinearOperator(2 * hermitian_part->dim(), OperatorKind::Doubled),
    a1_(std::move(hermitian_part)), a2_(std::move(skew_part))
{
  if (a2_)
  {
    blas::require_same_size(a2_->dim(), a1_->dim(), "DoubledOperator");
  }
}

ComplexVector DoubledOperator::embed(ConstVectorView f) const
{
  blas::require_same_size(f.size(), half_dim(), "DoubledOperator::embed");
  ComplexVector y(dim(), 0.0);
  std::copy(f.begin(), f.end(), y.begin() + static_cast<std::ptrdiff_t>(half_dim()));
  return y;
}

ComplexVector DoubledOperator::extract(ConstVectorView y) const
{
  blas::require_same_size(y.size(), dim(), "DoubledOperator::extract");
  return {y.begin() + static_cast<std::ptrdiff_t>(half_dim()), y.end()};
}

void DoubledOperator::apply_impl(ConstVectorView x, VectorView y) const
{
  const std::size_t n = half_dim();
  const auto a = x.subspan(0, n), b = x.subspan(n, n);
  auto top = y.subspan(0, n), bottom = y.subspan(n, n);
  a1_->apply(a, bottom);
  for (std::size_t i = 0; i < n; i++)
  {
    // -i (A1 a + a) - i A2 b - b
    const Complex a2b = a2_ ? a2_->diagonal()[i] * b[i] : Complex(0.0);
    bottom[i] = -1i * (bottom[i] + a[i]) - 1i * a2b - b[i];
    top[i] = -a[i] + 1i * b[i];
  }
}

std::shared_ptr<DoubledOperator> assemble_doubled(const HelmholtzOperator &a)
{
  auto a2 = DiagonalOperator::from_real(a.damping());
  return std::make_shared<DoubledOperator>(HermitianPart::of(a), std::move(a2));
}

std::shared_ptr<DoubledOperator> assemble_doubled(OperatorPtr hermitian_part,
                                                  std::shared_ptr<const DiagonalOperator> skew_part)
{
  return std::make_shared<DoubledOperator>(std::move(hermitian_part), std::move(skew_part));
}

RhoEstimate estimate_rho(const LinearOperator &op, double tol, int max_its, std::uint64_t seed)
{
  if (const auto *diag = dynamic_cast<const DiagonalOperator *>(&op))
  {
    return {diag->max_abs(), 0, false};
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector v(op.dim()), w(op.dim());
  for (auto &c : v)
  {
    c = {normal(rng), normal(rng)};
  }
  blas::scale(1.0 / blas::norm2(v), v);
  double estimate = 0.0;
  for (int it = 1; it <= max_its; it++)
  {
    op.apply(v, w);
    const double next = blas::norm2(w);
    if (next == 0.0)
    {
      return {0.0, it, false};
    }
    blas::scale(1.0 / next, w);
    std::swap(v, w);
    if (std::abs(next - estimate) <= tol * next)
    {
      return {next, it, false};
    }
    estimate = next;
  }
  return {estimate, max_its, true};
}

}  // namespace helmfci
